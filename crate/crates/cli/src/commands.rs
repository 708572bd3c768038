use std::fmt::Write as _;
use std::io::Write as _;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde_json::json;

use qdisk_core::linearize::points_up_to;
use qdisk_core::{Coeff, Kernel, LinIndex, Measure, Point, QBase, QExp, TensorElement};

use crate::config::{Format, QSetting, RunConfig, Suite};

/// Masses below this are dropped from walk output.
const WALK_PRUNE: f64 = 1e-14;
const WALK_MASS_TOLERANCE: f64 = 1e-10;
const SIGN_SAMPLES: [f64; 3] = [0.3, 0.5, 0.9];
const MAX_LISTED: usize = 20;

pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub detail: String,
    pub counterexamples: Vec<String>,
    pub seconds: f64,
}

fn timed(name: &str, f: impl FnOnce() -> Result<(usize, Vec<String>, String)>) -> Result<CheckLine> {
    let start = Instant::now();
    let (checked, failures, detail) = f()?;
    Ok(CheckLine {
        name: name.to_string(),
        passed: failures.is_empty(),
        checked,
        detail,
        counterexamples: failures.into_iter().take(MAX_LISTED).collect(),
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn lincoef(cfg: &RunConfig) -> Result<bool> {
    match cfg.q {
        QSetting::Symbolic => lincoef_with(&Kernel::exact(), cfg),
        QSetting::Real(q) => lincoef_with(&Kernel::numeric(q)?, cfg),
    }
}

fn lincoef_with<B: QBase>(k: &Kernel<B>, cfg: &RunConfig) -> Result<bool> {
    let table = k.lin_table(cfg.max_deg, cfg.alpha)?;
    let text = match cfg.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&table.to_json())?),
        Format::Csv => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            String::from_utf8(buf)?
        }
        Format::Text => {
            let mut s = format!("# alpha = {}, q = {}\n", cfg.alpha, table.q.to_json());
            for (idx, v) in &table.entries {
                writeln!(s, "{idx}  {v}")?;
            }
            s
        }
    };
    emit(cfg, &text)?;
    Ok(true)
}

pub fn verify(suite: Suite, cfg: &RunConfig) -> Result<bool> {
    match cfg.q {
        QSetting::Symbolic => verify_with(&Kernel::exact(), suite, cfg),
        QSetting::Real(q) => verify_with(&Kernel::numeric(q)?, suite, cfg),
    }
}

fn verify_with<B: QBase>(k: &Kernel<B>, suite: Suite, cfg: &RunConfig) -> Result<bool> {
    let notes: Vec<&str> = match suite {
        Suite::Hypergroup => vec![qdisk_core::hypergroup::CONVOLUTION_CONVENTION],
        _ => Vec::new(),
    };
    let checks = match suite {
        Suite::Orthogonality => vec![orthogonality(k, cfg)?],
        Suite::Addition => addition(k, cfg)?,
        Suite::Hypergroup => hypergroup(k, cfg)?,
        Suite::Sos => sos(k, cfg)?,
    };
    let passed = checks.iter().all(|c| c.passed);
    let name = format!("{suite:?}").to_lowercase();
    let q = match cfg.q {
        QSetting::Symbolic => json!("symbolic"),
        QSetting::Real(q) => json!(q),
    };
    let text = match cfg.format {
        Format::Json => {
            let lines: Vec<_> = checks
                .iter()
                .map(|c| {
                    json!({
                        "name": c.name, "passed": c.passed, "checked": c.checked, "detail": c.detail,
                        "counterexamples": c.counterexamples, "seconds": c.seconds,
                    })
                })
                .collect();
            let v = json!({"suite": name, "alpha": cfg.alpha.to_json(), "q": q, "passed": passed, "notes": notes, "checks": lines});
            format!("{}\n", serde_json::to_string_pretty(&v)?)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["check", "passed", "checked", "seconds", "detail", "counterexamples"])?;
            for c in &checks {
                w.write_record([
                    c.name.clone(),
                    c.passed.to_string(),
                    c.checked.to_string(),
                    format!("{:.6}", c.seconds),
                    c.detail.clone(),
                    c.counterexamples.join("; "),
                ])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Text => {
            let mut s = format!("verify {name}: alpha = {}, q = {q}\n", cfg.alpha);
            for n in &notes {
                writeln!(s, "note: {n}")?;
            }
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                let line = format!(
                    "{status} {} [checked {}, {:.3}s] {}",
                    c.name, c.checked, c.seconds, c.detail
                );
                writeln!(s, "{}", line.trim_end())?;
                for e in &c.counterexamples {
                    writeln!(s, "    {e}")?;
                }
            }
            writeln!(
                s,
                "{}",
                if passed {
                    "all checks passed"
                } else {
                    "verification failed"
                }
            )?;
            s
        }
    };
    emit(cfg, &text)?;
    Ok(passed)
}

fn orthogonality<B: QBase>(k: &Kernel<B>, cfg: &RunConfig) -> Result<CheckLine> {
    let (a, n) = (cfg.alpha, cfg.max_deg);
    timed("orthogonality", || {
        let mut failures = Vec::new();
        let mut checked = 0;
        for l in 0..=n {
            for m in 0..=n {
                let r_star = k.qdisk(l, m, a)?.star();
                for lp in 0..=n {
                    for mp in 0..=n {
                        let got = k.h(&r_star.mul(&k.qdisk(lp, mp, a)?), a)?;
                        let want = if (l, m) == (lp, mp) {
                            k.norm_c(l, m, a)?
                        } else {
                            B::C::zero()
                        };
                        if !got.close_to(&want) {
                            failures.push(format!("({l},{m}) vs ({lp},{mp}): {got}, expected {want}"));
                        }
                        checked += 1;
                    }
                }
            }
        }
        Ok((checked, failures, format!("indices up to {n}")))
    })
}

fn addition<B: QBase>(k: &Kernel<B>, cfg: &RunConfig) -> Result<Vec<CheckLine>> {
    let a = cfg.alpha;
    let mut lines = vec![timed("omega commutation", || {
        let pair = k.build_omega();
        let lhs = pair
            .omega_star
            .mul(&pair.omega)
            .sub(&pair.omega.mul(&pair.omega_star).scale(&k.base().q_pow(QExp::Int(2))));
        let rhs = TensorElement::one(k.x_algebra(), k.y_algebra()).scale(&k.base().one_minus_q_pow(QExp::Int(2)));
        let failures = if lhs.close_to(&rhs) {
            Vec::new()
        } else {
            vec![format!("got {lhs}")]
        };
        Ok((1, failures, String::new()))
    })?];
    let instances: Vec<Point> = match cfg.point {
        Some(p) => vec![p],
        None => points_up_to(cfg.max_deg)
            .into_iter()
            .map(|(l, m)| Point::new(l, m))
            .collect(),
    };
    lines.push(timed("addition formula", || {
        let mut failures = Vec::new();
        for p in &instances {
            if !k.verify_addition(p.l, p.m, a)? {
                failures.push(format!("(l,m) = {p}"));
            }
        }
        let shown: Vec<String> = instances.iter().map(|p| p.to_string()).collect();
        Ok((instances.len(), failures, format!("(l,m) in {}", shown.join(" "))))
    })?);
    if let (Some(x), Some(y)) = (cfg.point, cfg.second) {
        lines.push(timed("tensor identity", || {
            let r = k.verify_identity_2_3(x.l, x.m, y.l, y.m, a)?;
            let failures = if r.holds() {
                Vec::new()
            } else {
                vec![format!("{x};{y}: {r:?}")]
            };
            Ok((
                1,
                failures,
                format!(
                    "{x};{y}, without the q^(2(i-j)) phase: {}",
                    if r.unphased { "equal" } else { "differs" }
                ),
            ))
        })?);
    }
    Ok(lines)
}

fn hypergroup<B: QBase>(k: &Kernel<B>, cfg: &RunConfig) -> Result<Vec<CheckLine>> {
    let report = k.verify_axioms(cfg.max_deg, cfg.alpha)?;
    Ok(report
        .checks
        .iter()
        .map(|c| {
            let detail = match (c.name, report.witness) {
                ("non-commutativity", Some((x, y))) => format!("witness {x}, {y}"),
                ("continuity", _) => c.counterexamples.join("; "),
                _ => String::new(),
            };
            CheckLine {
                name: c.name.to_string(),
                passed: c.passed,
                checked: c.checked,
                detail,
                counterexamples: if c.passed {
                    Vec::new()
                } else {
                    c.counterexamples.clone()
                },
                seconds: c.elapsed.as_secs_f64(),
            }
        })
        .collect())
}

fn sos<B: QBase>(k: &Kernel<B>, cfg: &RunConfig) -> Result<Vec<CheckLine>> {
    let (a, n) = (cfg.alpha, cfg.max_deg);
    let mut lines = vec![timed("sum of squares", || {
        let mut failures = Vec::new();
        let mut checked = 0;
        for (l, m) in points_up_to(n) {
            for (lp, mp) in points_up_to(n) {
                for (lpp, mpp) in points_up_to(l + m + lp + mp) {
                    let idx = LinIndex::new(l, m, lp, mp, lpp, mpp);
                    let (direct, sos) = (k.lin_coeff(idx, a)?, k.linearization_sos(idx, a)?);
                    if !direct.close_to(&sos) {
                        failures.push(format!("{idx}: {sos}, expected {direct}"));
                    }
                    checked += 1;
                }
            }
        }
        Ok((checked, failures, format!("l+m, l'+m' <= {n}")))
    })?];
    lines.push(timed("non-negativity", || {
        let samples: Vec<f64> = match cfg.q {
            QSetting::Symbolic => SIGN_SAMPLES.to_vec(),
            QSetting::Real(q) => vec![q],
        };
        let report = k.lin_table(n, a)?.positivity(&samples);
        let mut failures: Vec<String> = report
            .violations
            .iter()
            .map(|(i, q, v)| format!("{i} at q = {q}: {v}"))
            .collect();
        failures.extend(
            report
                .eval_errors
                .iter()
                .map(|(i, q, e)| format!("{i} at q = {q}: {e}")),
        );
        Ok((
            report.entries * report.samples,
            failures,
            format!("minimum {:.3e}", report.min_value),
        ))
    })?);
    Ok(lines)
}

pub fn walk(cfg: &RunConfig) -> Result<bool> {
    let QSetting::Real(q) = cfg.q else {
        bail!("walk needs a real --q in (0, 1)");
    };
    let Some(start) = cfg.point else {
        bail!("walk needs a start point (--l and --m)");
    };
    if cfg.steps == 0 {
        bail!("--steps must be at least 1");
    }
    let step = cfg.second.unwrap_or(start);
    let k = Kernel::numeric(q)?;
    let mut measures = k.walk(start, step, cfg.steps, cfg.alpha)?;
    let mut ok = true;
    for mu in &mut measures {
        mu.prune(WALK_PRUNE);
        ok &= (mu.total_mass() - 1.0).abs() <= WALK_MASS_TOLERANCE;
    }
    let text = match cfg.format {
        Format::Json => {
            let v = json!({
                "alpha": cfg.alpha.to_json(),
                "q": q,
                "start": {"l": start.l, "m": start.m},
                "step": {"l": step.l, "m": step.m},
                "measures": measures.iter().map(Measure::to_json).collect::<Vec<_>>(),
            });
            format!("{}\n", serde_json::to_string_pretty(&v)?)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["step", "l", "m", "value"])?;
            for (i, mu) in measures.iter().enumerate() {
                for (x, v) in &mu.masses {
                    w.write_record([(i + 1).to_string(), x.l.to_string(), x.m.to_string(), v.to_string()])?;
                }
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Text => {
            let mut s = format!("walk from {start} by {step}: alpha = {}, q = {q}\n", cfg.alpha);
            for (i, mu) in measures.iter().enumerate() {
                let masses: Vec<String> = mu.masses.iter().map(|(x, v)| format!("{x}: {v:.12}")).collect();
                writeln!(s, "mu_{} = {{{}}}", i + 1, masses.join(", "))?;
            }
            s
        }
    };
    emit(cfg, &text)?;
    if !ok {
        eprintln!("total mass drifted beyond {WALK_MASS_TOLERANCE:e}");
    }
    Ok(ok)
}
