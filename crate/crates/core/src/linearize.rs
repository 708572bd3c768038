//! Linearization coefficients `a(l,m; l',m'; l'',m'')`, defined by expanding
//! `R_{l,m} R_{l',m'}^*` in the q-disk basis, plus the sum-of-squares formula that
//! makes their non-negativity manifest.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::haar::norm_c_product;
use crate::kernel::{DiskCopy, Kernel, KernelError, Result, Row};
use crate::ncalg::{presets, NcElement};
use crate::scalar::{AlphaParam, Coeff, QBase, QExp, QLabel, QProduct};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LinIndex {
    pub l: u32,
    pub m: u32,
    pub lp: u32,
    pub mp: u32,
    pub lpp: u32,
    pub mpp: u32,
}

impl LinIndex {
    pub fn new(l: u32, m: u32, lp: u32, mp: u32, lpp: u32, mpp: u32) -> Self {
        LinIndex { l, m, lp, mp, lpp, mpp }
    }

    pub fn row(&self) -> (u32, u32, u32, u32) {
        (self.l, self.m, self.lp, self.mp)
    }

    /// `l'' - m'' = (l - m) - (l' - m')`
    pub fn obeys_support_rule(&self) -> bool {
        self.lpp as i64 - self.mpp as i64 == (self.l as i64 - self.m as i64) - (self.lp as i64 - self.mp as i64)
    }
}

impl std::fmt::Display for LinIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({},{};{},{};{},{})",
            self.l, self.m, self.lp, self.mp, self.lpp, self.mpp
        )
    }
}

/// `c_{l,m;r,s}^{(alpha)}` as a formal product.
pub fn addition_coeff_product(l: u32, m: u32, r: u32, s: u32, alpha: AlphaParam) -> QProduct {
    let a = alpha.exp();
    let rs = (r + s) as i64;
    QProduct::one()
        .one_minus((a + rs + 1) * 2, 1)
        .one_minus((a + 1) * 2, -1)
        .times(&norm_c_product(l, m, alpha))
        .over(&norm_c_product(l - r, m - s, alpha.shift(rs)))
        .over(&norm_c_product(r, s, alpha.shift(-1)))
}

/// Points `(l, m)` with `l + m <= max_deg`, ordered by degree.
pub fn points_up_to(max_deg: u32) -> Vec<(u32, u32)> {
    (0..=max_deg)
        .flat_map(|d| (0..=d).rev().map(move |m| (d - m, m)))
        .collect()
}

/// Which form of the sum-of-squares identity to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SosForm {
    /// Each `(i, j)` term carries `q^{2(i-j)}`, the product of the phases
    /// `(-q)^{i-j} (-q)^{p-r}` at `p = i`, `r = j` on the `Y` side.
    Phased,
    /// The terms without that factor.
    Unphased,
}

/// One `(i, j)` summand: `weight * inner^2`.
#[derive(Clone, Debug)]
pub struct SosTerm<C> {
    pub i: u32,
    pub j: u32,
    pub weight: C,
    pub inner: C,
}

impl<B: QBase> Kernel<B> {
    /// Expansion of `R_{l,m} R_{l',m'}^*` in the basis `R_{l'',m''}`. Cached.
    pub fn linearization_row(&self, l: u32, m: u32, lp: u32, mp: u32, alpha: AlphaParam) -> Result<Row<B::C>> {
        self.check_alpha(alpha)?;
        self.rows.get_or_try(&(l, m, lp, mp, alpha), || {
            // R_{l',m'}^* = R_{m',l'}
            let f = self.qdisk(l, m, alpha)?.mul(&self.qdisk(mp, lp, alpha)?);
            Ok(Arc::new(self.expand_in_r_basis(&f, alpha)?))
        })
    }

    pub fn lin_coeff(&self, idx: LinIndex, alpha: AlphaParam) -> Result<B::C> {
        let row = self.linearization_row(idx.l, idx.m, idx.lp, idx.mp, alpha)?;
        Ok(row.get(&(idx.lpp, idx.mpp)).cloned().unwrap_or_else(B::C::zero))
    }

    pub fn c_addition_coeff(&self, l: u32, m: u32, r: u32, s: u32, alpha: AlphaParam) -> Result<B::C> {
        self.check_alpha_shifted(alpha)?;
        if r > l || s > m {
            return Err(KernelError::Index(format!(
                "need 0 <= r <= l and 0 <= s <= m, got l={l} m={m} r={r} s={s}"
            )));
        }
        Ok(self.base.product(&addition_coeff_product(l, m, r, s, alpha))?)
    }

    /// The summands of the sum-of-squares formula for `a(l,m;l',m';l'',m'') c''^2`:
    /// `weight = c_{l,m;i,j} c_{l',m';i,j} c_{j,i}^{(alpha-1)}` (times the phase for
    /// [`SosForm::Phased`]) and
    /// `inner = h(R''^* R_{l-i,m-j}^{(alpha+i+j)} (1 - zz*)^{i+j} R_{l'-i,m'-j}^{(alpha+i+j)*})`.
    pub fn sos_terms(&self, idx: LinIndex, alpha: AlphaParam, form: SosForm) -> Result<Vec<SosTerm<B::C>>> {
        self.check_alpha_shifted(alpha)?;
        let z = &self.z;
        let u = NcElement::one(z).sub(&NcElement::from_word(z, B::C::one(), &[presets::z::Z, presets::z::ZS]));
        let r_pp_star = self.qdisk(idx.mpp, idx.lpp, alpha)?;
        let mut terms = Vec::new();
        for i in 0..=idx.l.min(idx.lp) {
            for j in 0..=idx.m.min(idx.mp) {
                let shifted = alpha.shift((i + j) as i64);
                let left = self.disk_poly(DiskCopy::Z, idx.l - i, idx.m - j, shifted)?;
                let right = self.disk_poly(DiskCopy::Z, idx.mp - j, idx.lp - i, shifted)?;
                let f = r_pp_star.mul(&left).mul(&u.pow(i + j)).mul(&right);
                let inner = self.h(&f, alpha)?;
                let mut w = addition_coeff_product(idx.l, idx.m, i, j, alpha)
                    .times(&addition_coeff_product(idx.lp, idx.mp, i, j, alpha))
                    .times(&norm_c_product(j, i, alpha.shift(-1)));
                if form == SosForm::Phased {
                    w = w.q(QExp::Int(2 * (i as i64 - j as i64)));
                }
                terms.push(SosTerm {
                    i,
                    j,
                    weight: self.base.product(&w)?,
                    inner,
                });
            }
        }
        Ok(terms)
    }

    /// `a(l,m;l',m';l'',m'')` from the sum-of-squares formula.
    pub fn linearization_sos_form(&self, idx: LinIndex, alpha: AlphaParam, form: SosForm) -> Result<B::C> {
        let total = self
            .sos_terms(idx, alpha, form)?
            .iter()
            .fold(B::C::zero(), |acc, t| acc.add(&t.weight.mul(&t.inner).mul(&t.inner)));
        let c2 = norm_c_product(idx.lpp, idx.mpp, alpha).inverse();
        let inv = self.base.product(&c2.clone().times(&c2))?;
        Ok(total.mul(&inv))
    }

    pub fn linearization_sos(&self, idx: LinIndex, alpha: AlphaParam) -> Result<B::C> {
        self.linearization_sos_form(idx, alpha, SosForm::Phased)
    }

    /// All rows with `l + m, l' + m' <= max_deg`, computed in parallel.
    pub fn lin_table(&self, max_deg: u32, alpha: AlphaParam) -> Result<LinTable<B::C>> {
        self.check_alpha(alpha)?;
        let pts = points_up_to(max_deg);
        let pairs: Vec<((u32, u32), (u32, u32))> = pts.iter().flat_map(|&x| pts.iter().map(move |&y| (x, y))).collect();
        let rows: Vec<_> = pairs
            .par_iter()
            .map(|&((l, m), (lp, mp))| self.linearization_row(l, m, lp, mp, alpha).map(|r| ((l, m, lp, mp), r)))
            .collect::<Result<_>>()?;
        let mut entries = BTreeMap::new();
        for ((l, m, lp, mp), row) in rows {
            for (&(lpp, mpp), v) in row.iter() {
                entries.insert(LinIndex::new(l, m, lp, mp, lpp, mpp), v.clone());
            }
        }
        Ok(LinTable {
            alpha,
            q: self.base.label(),
            max_deg: Some(max_deg),
            entries,
        })
    }

    /// Evaluates every entry of the table at each sample of `q`. The numeric backend
    /// has `q` fixed, so its samples only label the report.
    pub fn positivity_scan(&self, max_deg: u32, alpha: AlphaParam, samples: &[f64]) -> Result<PositivityReport> {
        let table = self.lin_table(max_deg, alpha)?;
        Ok(table.positivity(samples))
    }
}

/// Result of [`Kernel::positivity_scan`].
#[derive(Clone, Debug, Serialize)]
pub struct PositivityReport {
    pub entries: usize,
    pub samples: usize,
    pub min_value: f64,
    pub min_at: Option<(LinIndex, f64)>,
    pub violations: Vec<(LinIndex, f64, f64)>,
    pub eval_errors: Vec<(LinIndex, f64, String)>,
}

impl PositivityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.eval_errors.is_empty()
    }
}

pub const POSITIVITY_TOLERANCE: f64 = 1e-12;

/// `(l, m, l', m')`
pub type RowIndex = (u32, u32, u32, u32);

/// Linearization coefficients for a fixed `alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinTable<C> {
    pub alpha: AlphaParam,
    pub q: QLabel,
    pub max_deg: Option<u32>,
    pub entries: BTreeMap<LinIndex, C>,
}

const CSV_HEADER: [&str; 7] = ["l", "m", "lp", "mp", "lpp", "mpp", "value"];

impl<C: Coeff> LinTable<C> {
    pub fn rows(&self) -> BTreeMap<RowIndex, Vec<(LinIndex, &C)>> {
        let mut out: BTreeMap<_, Vec<_>> = BTreeMap::new();
        for (k, v) in &self.entries {
            out.entry(k.row()).or_default().push((*k, v));
        }
        out
    }

    /// Rows whose entries do not sum to one.
    pub fn non_stochastic_rows(&self) -> Vec<RowIndex> {
        self.rows()
            .into_iter()
            .filter(|(_, entries)| {
                let sum = entries.iter().fold(C::zero(), |acc, (_, v)| acc.add(v));
                !sum.close_to(&C::one())
            })
            .map(|(k, _)| k)
            .collect()
    }

    pub fn support_violations(&self) -> Vec<LinIndex> {
        self.entries
            .keys()
            .filter(|k| !k.obeys_support_rule())
            .copied()
            .collect()
    }

    pub fn positivity(&self, samples: &[f64]) -> PositivityReport {
        let mut report = PositivityReport {
            entries: self.entries.len(),
            samples: samples.len(),
            min_value: f64::INFINITY,
            min_at: None,
            violations: Vec::new(),
            eval_errors: Vec::new(),
        };
        let evaluated: Vec<(LinIndex, f64, std::result::Result<f64, String>)> = self
            .entries
            .par_iter()
            .flat_map_iter(|(k, v)| {
                samples
                    .iter()
                    .map(move |&q0| (*k, q0, v.eval_at(q0).map_err(|e| e.to_string())))
            })
            .collect();
        for (k, q0, value) in evaluated {
            match value {
                Ok(x) => {
                    if x < report.min_value {
                        report.min_value = x;
                        report.min_at = Some((k, q0));
                    }
                    if x < -POSITIVITY_TOLERANCE {
                        report.violations.push((k, q0, x));
                    }
                }
                Err(e) => report.eval_errors.push((k, q0, e)),
            }
        }
        report
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<serde_json::Value> = self
            .entries
            .iter()
            .map(|(k, v)| {
                serde_json::json!({
                    "l": k.l, "m": k.m, "lp": k.lp, "mp": k.mp, "lpp": k.lpp, "mpp": k.mpp,
                    "value": v.to_json(),
                })
            })
            .collect();
        serde_json::json!({
            "alpha": self.alpha.to_json(),
            "q": self.q.to_json(),
            "entries": entries,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = |what: &str| KernelError::Format(format!("table JSON: {what}"));
        let alpha = AlphaParam::from_json(v.get("alpha").ok_or_else(|| bad("missing alpha"))?)?;
        let q = QLabel::from_json(v.get("q").ok_or_else(|| bad("missing q"))?)?;
        let mut entries = BTreeMap::new();
        for e in v
            .get("entries")
            .and_then(|e| e.as_array())
            .ok_or_else(|| bad("missing entries"))?
        {
            let field = |name: &str| -> Result<u32> {
                e.get(name)
                    .and_then(|x| x.as_u64())
                    .map(|x| x as u32)
                    .ok_or_else(|| bad(&format!("entry field {name}")))
            };
            let idx = LinIndex::new(
                field("l")?,
                field("m")?,
                field("lp")?,
                field("mp")?,
                field("lpp")?,
                field("mpp")?,
            );
            let value = C::from_json(e.get("value").ok_or_else(|| bad("entry value"))?)?;
            entries.insert(idx, value);
        }
        Ok(LinTable {
            alpha,
            q,
            max_deg: None,
            entries,
        })
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let map_err = |e: csv::Error| KernelError::Format(e.to_string());
        w.write_record(CSV_HEADER).map_err(map_err)?;
        for (k, v) in &self.entries {
            let value = match v.to_json() {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            };
            w.write_record([
                k.l.to_string(),
                k.m.to_string(),
                k.lp.to_string(),
                k.mp.to_string(),
                k.lpp.to_string(),
                k.mpp.to_string(),
                value,
            ])
            .map_err(map_err)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the CSV form. CSV carries no header for `alpha` and `q`, so the caller
    /// supplies them.
    pub fn read_csv<R: Read>(input: R, alpha: AlphaParam, q: QLabel) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let mut entries = BTreeMap::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| KernelError::Format(e.to_string()))?;
            if rec.len() != CSV_HEADER.len() {
                return Err(KernelError::Format(format!("expected 7 columns, got {}", rec.len())));
            }
            let n = |i: usize| -> Result<u32> {
                rec[i]
                    .parse()
                    .map_err(|_| KernelError::Format(format!("bad index {:?}", &rec[i])))
            };
            let idx = LinIndex::new(n(0)?, n(1)?, n(2)?, n(3)?, n(4)?, n(5)?);
            let raw = &rec[6];
            let json = match raw.parse::<f64>() {
                Ok(x) if raw.parse::<i64>().is_err() => serde_json::Value::from(x),
                _ => match raw.parse::<i64>() {
                    Ok(k) => serde_json::Value::from(k),
                    Err(_) => serde_json::Value::String(raw.to_string()),
                },
            };
            entries.insert(idx, C::from_json(&json)?);
        }
        Ok(LinTable {
            alpha,
            q,
            max_deg: None,
            entries,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn om(e: i64) -> Scalar {
        Scalar::one_minus_q_pow(e)
    }

    #[test]
    fn trivial_rows() {
        let k = Kernel::exact();
        let alpha = AlphaParam::Exact(1);
        for (l, m) in points_up_to(3) {
            let row = k.linearization_row(l, m, 0, 0, alpha).unwrap();
            assert_eq!(*row, BTreeMap::from([((l, m), Scalar::one())]));
        }
    }

    #[test]
    fn first_rows() {
        let k = Kernel::exact();
        for a in 1..3 {
            let alpha = AlphaParam::Exact(a);
            let row = k.linearization_row(1, 0, 1, 0, alpha).unwrap();
            let expect = BTreeMap::from([
                ((0, 0), Scalar::q_pow(2 * a + 2) * om(2) / om(2 * a + 4)),
                ((1, 1), om(2 * a + 2) / om(2 * a + 4)),
            ]);
            assert_eq!(*row, expect);
            let row = k.linearization_row(1, 0, 0, 1, alpha).unwrap();
            assert_eq!(*row, BTreeMap::from([((2, 0), Scalar::one())]));
        }
    }

    #[test]
    fn addition_coefficient_examples() {
        let k = Kernel::exact();
        for a in 1..4 {
            let alpha = AlphaParam::Exact(a);
            for (l, m) in points_up_to(3) {
                assert_eq!(k.c_addition_coeff(l, m, 0, 0, alpha).unwrap(), Scalar::one());
            }
            assert_eq!(k.c_addition_coeff(1, 0, 1, 0, alpha).unwrap(), Scalar::one());
            let expect = om(2 * a + 6) / om(2 * a + 2) * k.norm_c(1, 1, alpha).unwrap()
                / k.norm_c(1, 1, alpha.shift(-1)).unwrap();
            assert_eq!(k.c_addition_coeff(1, 1, 1, 1, alpha).unwrap(), expect);
        }
        assert!(k.c_addition_coeff(1, 0, 2, 0, AlphaParam::Exact(1)).is_err());
        assert!(k.c_addition_coeff(1, 0, 0, 0, AlphaParam::Exact(0)).is_err());
    }

    #[test]
    fn sos_examples() {
        let k = Kernel::exact();
        for a in 1..3 {
            let alpha = AlphaParam::Exact(a);
            assert_eq!(
                k.linearization_sos(LinIndex::new(0, 0, 0, 0, 0, 0), alpha).unwrap(),
                Scalar::one()
            );
            assert_eq!(
                k.linearization_sos(LinIndex::new(1, 0, 1, 0, 1, 1), alpha).unwrap(),
                om(2 * a + 2) / om(2 * a + 4)
            );
            assert_eq!(
                k.linearization_sos(LinIndex::new(1, 0, 1, 0, 0, 0), alpha).unwrap(),
                Scalar::q_pow(2 * a + 2) * om(2) / om(2 * a + 4)
            );
        }
    }

    #[test]
    fn phase_factor_is_needed() {
        let k = Kernel::exact();
        let alpha = AlphaParam::Exact(1);
        let idx = LinIndex::new(1, 0, 1, 0, 0, 0);
        let direct = k.lin_coeff(idx, alpha).unwrap();
        assert_eq!(k.linearization_sos_form(idx, alpha, SosForm::Phased).unwrap(), direct);
        assert_ne!(k.linearization_sos_form(idx, alpha, SosForm::Unphased).unwrap(), direct);
    }

    #[test]
    fn scan_small_table() {
        let k = Kernel::exact();
        let report = k.positivity_scan(2, AlphaParam::Exact(1), &[0.5]).unwrap();
        assert!(report.passed(), "{report:?}");
        assert!(report.min_value >= 0.0);
    }

    #[test]
    fn json_and_csv_round_trip() {
        let k = Kernel::exact();
        let table = k.lin_table(1, AlphaParam::Exact(1)).unwrap();
        assert_eq!(table.rows().len(), 9);
        let back = LinTable::<Scalar>::from_json(&table.to_json()).unwrap();
        assert_eq!(back.entries, table.entries);
        let mut buf = Vec::new();
        table.write_csv(&mut buf).unwrap();
        let back = LinTable::<Scalar>::read_csv(&buf[..], table.alpha, table.q).unwrap();
        assert_eq!(back.entries, table.entries);
        assert!(back.non_stochastic_rows().is_empty());

        let kf = Kernel::numeric(0.5).unwrap();
        let tf = kf.lin_table(1, AlphaParam::Float(0.5)).unwrap();
        let mut buf = Vec::new();
        tf.write_csv(&mut buf).unwrap();
        let back = LinTable::<f64>::read_csv(&buf[..], tf.alpha, tf.q).unwrap();
        assert_eq!(back.entries, tf.entries);
    }
}
