use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use qdisk_core::{AlphaParam, Point};

#[derive(Debug, Parser)]
#[command(
    name = "qdisk",
    version,
    about = "Linearization tables and verification reports for q-disk polynomials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Linearization coefficients for all rows with l+m, l'+m' <= max-deg.
    Lincoef(Common),
    /// Run a verification suite; exits 2 if any check fails.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: Common,
    },
    /// Convolution powers: mu_1 = delta_(l,m), mu_k = mu_(k-1) * delta_(lp,mp).
    Walk(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Orthogonality,
    Addition,
    Hypergroup,
    Sos,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Integer (exact) or real (float backend only).
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub alpha: String,
    /// "symbolic" or a real value in (0, 1).
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long, default_value_t = 2)]
    pub max_deg: u32,
    #[arg(long)]
    pub l: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub lp: Option<u32>,
    #[arg(long)]
    pub mp: Option<u32>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Number of measures in a walk.
    #[arg(long, default_value_t = 1)]
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QSetting {
    Symbolic,
    Real(f64),
}

/// Validated options shared by all commands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub alpha: AlphaParam,
    pub q: QSetting,
    pub max_deg: u32,
    pub point: Option<Point>,
    pub second: Option<Point>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub steps: usize,
}

fn pair(l: Option<u32>, m: Option<u32>, names: (&str, &str)) -> Result<Option<Point>> {
    match (l, m) {
        (Some(l), Some(m)) => Ok(Some(Point::new(l, m))),
        (None, None) => Ok(None),
        _ => bail!("--{} and --{} must be given together", names.0, names.1),
    }
}

impl RunConfig {
    pub fn from_args(c: &Common, default_format: Format) -> Result<Self> {
        let alpha = AlphaParam::parse(&c.alpha).with_context(|| format!("bad --alpha {:?}", c.alpha))?;
        let q = match c.q.as_deref().map(str::trim) {
            None | Some("symbolic") => QSetting::Symbolic,
            Some(s) => {
                let v: f64 = s.parse().with_context(|| format!("bad --q {s:?}"))?;
                if !(v > 0.0 && v < 1.0) {
                    bail!("--q must lie in (0, 1), got {v}");
                }
                QSetting::Real(v)
            }
        };
        if q == QSetting::Symbolic && !alpha.is_exact() {
            bail!("symbolic q needs an integer alpha; pass a real --q for alpha = {alpha}");
        }
        Ok(RunConfig {
            alpha,
            q,
            max_deg: c.max_deg,
            point: pair(c.l, c.m, ("l", "m"))?,
            second: pair(c.lp, c.mp, ("lp", "mp"))?,
            format: c.format.unwrap_or(default_format),
            out: c.out.clone(),
            steps: c.steps,
        })
    }
}
