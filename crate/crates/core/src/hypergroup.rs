//! The discrete hypergroup on `K = Z_+^2`.
//!
//! `delta_x * delta_y` is the expansion of the product `R_x R_y` in the basis
//! `R_{l,m}`, which is the row `a(l, m; m', l'; .)` since `R_y = R_{m',l'}^*`.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::kernel::{Kernel, KernelError, Result};
use crate::linearize::points_up_to;
use crate::scalar::{AlphaParam, Coeff, Numeric, QBase, QLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub l: u32,
    pub m: u32,
}

impl Point {
    pub const E: Point = Point { l: 0, m: 0 };

    pub fn new(l: u32, m: u32) -> Self {
        Point { l, m }
    }

    /// `(l, m) -> (m, l)`
    pub fn bar(self) -> Self {
        Point { l: self.m, m: self.l }
    }

    pub fn degree(self) -> u32 {
        self.l + self.m
    }

    fn charge(self) -> i64 {
        self.l as i64 - self.m as i64
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.l, self.m)
    }
}

/// Finitely supported measure on `K`; zero masses are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Measure<C> {
    pub alpha: AlphaParam,
    pub q: QLabel,
    pub masses: BTreeMap<Point, C>,
}

impl<C: Coeff> Measure<C> {
    pub fn zero(alpha: AlphaParam, q: QLabel) -> Self {
        Measure {
            alpha,
            q,
            masses: BTreeMap::new(),
        }
    }

    pub fn delta(alpha: AlphaParam, q: QLabel, x: Point) -> Self {
        let mut out = Self::zero(alpha, q);
        out.masses.insert(x, C::one());
        out
    }

    pub fn mass(&self, x: Point) -> C {
        self.masses.get(&x).cloned().unwrap_or_else(C::zero)
    }

    pub fn total_mass(&self) -> C {
        self.masses.values().fold(C::zero(), |acc, v| acc.add(v))
    }

    pub fn support(&self) -> impl Iterator<Item = Point> + '_ {
        self.masses.keys().copied()
    }

    pub fn add_mass(&mut self, x: Point, c: &C) {
        let entry = self.masses.entry(x).or_insert_with(C::zero);
        *entry = entry.add(c);
        if entry.is_zero() {
            self.masses.remove(&x);
        }
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.alpha, self.q);
        for (&x, v) in &self.masses {
            out.add_mass(x, &v.mul(c));
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (&x, v) in &other.masses {
            out.add_mass(x, v);
        }
        Ok(out)
    }

    /// `mu*(E) = mu(E-bar)` for real masses.
    pub fn involute(&self) -> Self {
        Measure {
            alpha: self.alpha,
            q: self.q,
            masses: self.masses.iter().map(|(x, v)| (x.bar(), v.clone())).collect(),
        }
    }

    /// Exact equality for `Scalar`, relative tolerance for floats; missing points count as zero.
    pub fn close_to(&self, other: &Self) -> bool {
        self.masses
            .keys()
            .chain(other.masses.keys())
            .all(|&x| self.mass(x).close_to(&other.mass(x)))
    }

    pub fn evaluate(&self, q0: f64) -> Result<Measure<f64>> {
        let mut masses = BTreeMap::new();
        for (&x, v) in &self.masses {
            masses.insert(x, v.eval_at(q0)?);
        }
        Ok(Measure {
            alpha: self.alpha,
            q: QLabel::Value(q0),
            masses,
        })
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.alpha != other.alpha {
            return Err(KernelError::Alpha(format!(
                "measures carry different alpha ({} and {})",
                self.alpha, other.alpha
            )));
        }
        if self.q != other.q {
            return Err(KernelError::Format("measures carry different q".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        let masses: Vec<serde_json::Value> = self
            .masses
            .iter()
            .map(|(x, v)| serde_json::json!({"l": x.l, "m": x.m, "value": v.to_json()}))
            .collect();
        serde_json::json!({
            "alpha": self.alpha.to_json(),
            "q": self.q.to_json(),
            "masses": masses,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |what: &str| KernelError::Format(format!("measure JSON: {what}"));
        let alpha = AlphaParam::from_json(v.get("alpha").ok_or_else(|| bad("missing alpha"))?)?;
        let q = QLabel::from_json(v.get("q").ok_or_else(|| bad("missing q"))?)?;
        let mut out = Self::zero(alpha, q);
        for e in v
            .get("masses")
            .and_then(|e| e.as_array())
            .ok_or_else(|| bad("missing masses"))?
        {
            let field = |name: &str| -> Result<u32> {
                e.get(name)
                    .and_then(|x| x.as_u64())
                    .and_then(|x| u32::try_from(x).ok())
                    .ok_or_else(|| bad(&format!("mass field {name}")))
            };
            let x = Point::new(field("l")?, field("m")?);
            out.add_mass(x, &C::from_json(e.get("value").ok_or_else(|| bad("mass value"))?)?);
        }
        Ok(out)
    }
}

impl Measure<f64> {
    /// Drops masses with `|value| <= tol`.
    pub fn prune(&mut self, tol: f64) {
        self.masses.retain(|_, v| v.abs() > tol);
    }
}

/// One line of [`AxiomReport`].
#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub counterexamples: Vec<String>,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub max_deg: u32,
    pub alpha: AlphaParam,
    pub checks: Vec<AxiomCheck>,
    /// First pair found with `delta_x * delta_y != delta_y * delta_x`.
    pub witness: Option<(Point, Point)>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// How `delta_x * delta_y` is read off the linearization coefficients.
pub const CONVOLUTION_CONVENTION: &str =
    "delta_(l,m) * delta_(l',m') expands R_(l,m) R_(l',m') (not R_(l,m) R_(l',m')^*), i.e. the row a(l,m; m',l'; .)";

/// Counterexamples kept per check.
const MAX_COUNTEREXAMPLES: usize = 20;

/// `q` values at which exact masses are checked for sign.
const SIGN_SAMPLES: [f64; 3] = [0.3, 0.5, 0.9];

fn run_check<T: Sync>(
    name: &'static str,
    cases: &[T],
    f: impl Fn(&T) -> Result<Option<String>> + Sync,
) -> Result<AxiomCheck> {
    let start = Instant::now();
    let outcomes: Vec<Option<String>> = cases.par_iter().map(&f).collect::<Result<_>>()?;
    let failures: Vec<String> = outcomes.into_iter().flatten().collect();
    Ok(AxiomCheck {
        name,
        passed: failures.is_empty(),
        checked: cases.len(),
        counterexamples: failures.into_iter().take(MAX_COUNTEREXAMPLES).collect(),
        elapsed: start.elapsed(),
    })
}

impl<B: QBase> Kernel<B> {
    pub fn delta(&self, x: Point, alpha: AlphaParam) -> Measure<B::C> {
        Measure::delta(alpha, self.base.label(), x)
    }

    pub fn convolve_points(&self, x: Point, y: Point, alpha: AlphaParam) -> Result<Measure<B::C>> {
        self.check_alpha_shifted(alpha)?;
        let row = self.linearization_row(x.l, x.m, y.m, y.l, alpha)?;
        let mut out = Measure::zero(alpha, self.base.label());
        for (&(l, m), v) in row.iter() {
            out.add_mass(Point::new(l, m), v);
        }
        Ok(out)
    }

    pub fn convolve_measures(&self, mu: &Measure<B::C>, nu: &Measure<B::C>) -> Result<Measure<B::C>> {
        mu.check_compatible(nu)?;
        if mu.q != self.base.label() {
            return Err(KernelError::Format("measure q does not match the kernel".into()));
        }
        let mut out = Measure::zero(mu.alpha, mu.q);
        for (&x, a) in &mu.masses {
            for (&y, b) in &nu.masses {
                let w = a.mul(b);
                for (&z, c) in &self.convolve_points(x, y, mu.alpha)?.masses {
                    out.add_mass(z, &c.mul(&w));
                }
            }
        }
        Ok(out)
    }

    /// `mu_1 = delta_start`, `mu_k = mu_{k-1} * delta_step`; returns `mu_1, ..., mu_n`.
    pub fn walk(&self, start: Point, step: Point, n: usize, alpha: AlphaParam) -> Result<Vec<Measure<B::C>>> {
        if n == 0 {
            return Err(KernelError::Index("a walk needs at least one step".into()));
        }
        self.check_alpha_shifted(alpha)?;
        let step = self.delta(step, alpha);
        let mut out = vec![self.delta(start, alpha)];
        while out.len() < n {
            let next = self.convolve_measures(out.last().expect("non-empty"), &step)?;
            out.push(next);
        }
        Ok(out)
    }

    /// Axioms (1)-(6) for all points with `l + m <= max_deg`, plus probability, the
    /// sign of every mass and a non-commutativity witness.
    pub fn verify_axioms(&self, max_deg: u32, alpha: AlphaParam) -> Result<AxiomReport> {
        self.check_alpha_shifted(alpha)?;
        let points: Vec<Point> = points_up_to(max_deg)
            .into_iter()
            .map(|(l, m)| Point::new(l, m))
            .collect();
        let pairs: Vec<(Point, Point)> = points
            .iter()
            .flat_map(|&x| points.iter().map(move |&y| (x, y)))
            .collect();
        let triples: Vec<(Point, Point, Point)> = pairs
            .iter()
            .flat_map(|&(x, y)| points.iter().map(move |&z| (x, y, z)))
            .collect();
        let conv = |x: Point, y: Point| self.convolve_points(x, y, alpha);
        let delta = |x: Point| self.delta(x, alpha);
        let mut checks = Vec::new();

        checks.push(run_check("associativity", &triples, |&(x, y, z)| {
            let left = self.convolve_measures(&conv(x, y)?, &delta(z))?;
            let right = self.convolve_measures(&delta(x), &conv(y, z)?)?;
            Ok((!left.close_to(&right)).then(|| format!("x={x} y={y} z={z}")))
        })?);

        checks.push(run_check("finite support", &pairs, |&(x, y)| {
            let mu = conv(x, y)?;
            let bad: Vec<String> = mu
                .support()
                .filter(|w| w.degree() > x.degree() + y.degree() || w.charge() != x.charge() + y.charge())
                .map(|w| w.to_string())
                .collect();
            Ok((!bad.is_empty()).then(|| format!("x={x} y={y}: outside the support rule at {}", bad.join(" "))))
        })?);

        checks.push(run_check("involution", &pairs, |&(x, y)| {
            let left = conv(x, y)?.involute();
            let right = conv(y.bar(), x.bar())?;
            Ok((!left.close_to(&right)).then(|| format!("x={x} y={y}")))
        })?);

        checks.push(run_check("unit", &points, |&x| {
            let ok = conv(Point::E, x)?.close_to(&delta(x)) && conv(x, Point::E)?.close_to(&delta(x));
            Ok((!ok).then(|| format!("x={x}")))
        })?);

        checks.push(run_check("identity in support", &pairs, |&(x, y)| {
            let got = conv(x.bar(), y)?.mass(Point::E);
            let want = if x == y {
                self.norm_c(x.l, x.m, alpha)?
            } else {
                B::C::zero()
            };
            Ok((!got.close_to(&want)).then(|| format!("x={x} y={y}: mass at e is {got}, expected {want}")))
        })?);

        checks.push(AxiomCheck {
            name: "continuity",
            passed: true,
            checked: 0,
            counterexamples: vec!["holds for every map on the discrete space K".into()],
            elapsed: Duration::ZERO,
        });

        checks.push(run_check("probability", &pairs, |&(x, y)| {
            let total = conv(x, y)?.total_mass();
            Ok((!total.close_to(&B::C::one())).then(|| format!("x={x} y={y}: total mass {total}")))
        })?);

        checks.push(run_check("non-negativity", &pairs, |&(x, y)| {
            for (w, v) in conv(x, y)?.masses {
                for q0 in SIGN_SAMPLES {
                    let value = v.eval_at(q0)?;
                    if value < -crate::linearize::POSITIVITY_TOLERANCE {
                        return Ok(Some(format!("x={x} y={y} at {w}, q={q0}: {value}")));
                    }
                }
            }
            Ok(None)
        })?);

        let start = Instant::now();
        let mut witness = None;
        for &(x, y) in &pairs {
            if x < y && !conv(x, y)?.close_to(&conv(y, x)?) {
                witness = Some((x, y));
                break;
            }
        }
        checks.push(AxiomCheck {
            name: "non-commutativity",
            passed: witness.is_some(),
            checked: pairs.len(),
            counterexamples: match witness {
                Some(_) => Vec::new(),
                None => vec![format!("no witness with l + m <= {max_deg}")],
            },
            elapsed: start.elapsed(),
        });

        Ok(AxiomReport {
            max_deg,
            alpha,
            checks,
            witness,
        })
    }
}

impl Kernel<Numeric> {
    /// `delta_x^{*n}` at the kernel's `q`.
    pub fn convolution_power(&self, x: Point, n: usize, alpha: AlphaParam) -> Result<Measure<f64>> {
        Ok(self.walk(x, x, n, alpha)?.pop().expect("n >= 1"))
    }
}

/// `delta_x^{*n}` evaluated at `q0`.
pub fn convolution_power(x: Point, n: usize, alpha: AlphaParam, q0: f64) -> Result<Measure<f64>> {
    Kernel::numeric(q0)?.convolution_power(x, n, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn a1() -> AlphaParam {
        AlphaParam::Exact(1)
    }

    fn p(l: u32, m: u32) -> Point {
        Point::new(l, m)
    }

    fn s(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    #[test]
    fn unit_convolution() {
        let k = Kernel::exact();
        for x in [p(0, 0), p(2, 1), p(0, 3)] {
            assert_eq!(k.convolve_points(Point::E, x, a1()).unwrap(), k.delta(x, a1()));
        }
    }

    #[test]
    fn z_times_zstar_and_reverse() {
        let k = Kernel::exact();
        // alpha = 1: q^{2a+2} = q^4, q^{2a+4} = q^6
        let zzs = k.convolve_points(p(1, 0), p(0, 1), a1()).unwrap();
        assert_eq!(zzs.mass(Point::E), s("(q^4 - q^6)/(1 - q^6)"));
        assert_eq!(zzs.mass(p(1, 1)), s("(1 - q^4)/(1 - q^6)"));
        assert_eq!(zzs.masses.len(), 2);

        let zsz = k.convolve_points(p(0, 1), p(1, 0), a1()).unwrap();
        let hand = Scalar::one_minus_q_pow(2).add(&Scalar::q_pow(2).mul(&zzs.mass(Point::E)));
        assert_eq!(zsz.mass(Point::E), hand);
        assert_eq!(zsz.mass(p(1, 1)), Scalar::q_pow(2).mul(&zzs.mass(p(1, 1))));
        assert_eq!(zsz.total_mass(), Scalar::one());
        assert_ne!(zzs, zsz);
    }

    #[test]
    fn measure_algebra() {
        let k = Kernel::exact();
        let half = s("1/2");
        let mu = k
            .delta(Point::E, a1())
            .scale(&half)
            .try_add(&k.delta(p(1, 0), a1()).scale(&half))
            .unwrap();
        assert_eq!(k.convolve_measures(&mu, &k.delta(Point::E, a1())).unwrap(), mu);

        let (x, y) = (p(1, 0), p(0, 1));
        let dx = k.delta(x, a1());
        let left = k
            .convolve_measures(&k.convolve_points(x, x, a1()).unwrap(), &k.delta(y, a1()))
            .unwrap();
        let right = k
            .convolve_measures(&dx, &k.convolve_points(x, y, a1()).unwrap())
            .unwrap();
        assert_eq!(left, right);

        let other = k.delta(x, AlphaParam::Exact(2));
        assert!(matches!(k.convolve_measures(&dx, &other), Err(KernelError::Alpha(_))));
    }

    #[test]
    fn involution_examples() {
        let k = Kernel::exact();
        assert_eq!(k.delta(p(1, 0), a1()).involute(), k.delta(p(0, 1), a1()));
        let (x, y) = (p(1, 0), p(1, 1));
        let mu = k.convolve_points(x, y, a1()).unwrap();
        assert_eq!(mu.involute().involute(), mu);
        assert_eq!(mu.involute(), k.convolve_points(y.bar(), x.bar(), a1()).unwrap());
    }

    #[test]
    fn alpha_range() {
        let k = Kernel::exact();
        assert!(k.convolve_points(p(1, 0), p(0, 1), AlphaParam::Exact(0)).is_err());
        let f = Kernel::numeric(0.5).unwrap();
        assert!(f.convolve_points(p(1, 0), p(0, 1), AlphaParam::Float(0.5)).is_ok());
        assert!(f.convolve_points(p(1, 0), p(0, 1), AlphaParam::Float(-0.5)).is_err());
    }

    #[test]
    fn identity_mass_is_norm() {
        let k = Kernel::exact();
        let x = p(1, 0);
        let mass = k.convolve_points(x.bar(), x, a1()).unwrap().mass(Point::E);
        assert_eq!(mass, s("(1 - q^2)/(1 - q^6)"));
        assert_eq!(mass, k.norm_c(1, 0, a1()).unwrap());
    }

    #[test]
    fn axioms_at_degree_two() {
        let k = Kernel::exact();
        let report = k.verify_axioms(2, a1()).unwrap();
        for c in &report.checks {
            assert!(c.passed, "{}: {:?}", c.name, c.counterexamples);
        }
        assert_eq!(report.witness, Some((p(0, 1), p(1, 0))));
    }

    #[test]
    fn powers_and_walks() {
        let a = AlphaParam::Exact(1);
        assert_eq!(convolution_power(p(1, 0), 1, a, 0.5).unwrap().masses.len(), 1);
        let two = convolution_power(p(1, 0), 2, a, 0.5).unwrap();
        assert_eq!(two.masses.len(), 1);
        assert!((two.mass(p(2, 0)) - 1.0).abs() < 1e-12);

        let k = Kernel::numeric(0.7).unwrap();
        let steps = k.walk(p(1, 1), p(0, 1), 5, AlphaParam::Float(0.5)).unwrap();
        assert_eq!(steps.len(), 5);
        for mu in &steps {
            assert!((mu.total_mass() - 1.0).abs() < 1e-10);
        }
        assert!(k.walk(p(1, 0), p(1, 0), 0, a).is_err());
    }

    #[test]
    fn json_round_trip() {
        let k = Kernel::exact();
        let mu = k.convolve_points(p(1, 0), p(0, 1), a1()).unwrap();
        assert_eq!(Measure::<Scalar>::from_json(&mu.to_json()).unwrap(), mu);
        let f = mu.evaluate(0.5).unwrap();
        let back = Measure::<f64>::from_json(&f.to_json()).unwrap();
        assert!(back.close_to(&f));
        assert_eq!(back.q, QLabel::Value(0.5));
    }
}
