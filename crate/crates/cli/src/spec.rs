//! Experiment spec: the JSON contract of every subcommand. Parsing is
//! strict (`deny_unknown_fields`) so mistakes fail with a field-precise
//! message instead of running a different experiment than intended.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::Deserialize;

use roughlab_core::area::{TrigPath, TrigTerm};
use roughlab_core::lacunary::{harmonic_blocks, unit_blocks, LacunarySeries};
use roughlab_core::path::{dyadic_grid_times, uniform_times, SampledPath};

/// Grid-size cap; override with ROUGHLAB_MAX_SAMPLES.
pub const DEFAULT_MAX_SAMPLES: usize = 200_000;

pub fn max_samples() -> usize {
    std::env::var("ROUGHLAB_MAX_SAMPLES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_SAMPLES)
}

#[derive(Debug, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    Pvar,
    Area,
    Integrate,
    Lacunary,
    Probe,
    Constants,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Pvar => "pvar",
            CommandKind::Area => "area",
            CommandKind::Integrate => "integrate",
            CommandKind::Lacunary => "lacunary",
            CommandKind::Probe => "probe",
            CommandKind::Constants => "constants",
        }
    }
}

/// Path source: a CSV file or one of the built-in generators.
#[derive(Debug, Deserialize, Clone)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InputSpec {
    /// CSV with header t,x1,...,xd; path relative to the spec file.
    Csv { path: PathBuf },
    /// Unit right triangle traversed as a closed loop on [0, 1].
    Triangle,
    /// (t^power_x, t^power_y) on [0, 1]; power_y = 0 keeps it scalar.
    Monomial {
        power_x: f64,
        #[serde(default)]
        power_y: f64,
        samples: usize,
    },
    /// (cos(n t), sin(n t))/sqrt(n) on [0, 2 pi].
    Circle { winding: u32, samples: usize },
    /// Planar trigonometric polynomial on [0, 1].
    Trig { terms: Vec<TrigTerm>, samples: usize },
    /// Alternating-sign block series with harmonic blocks (c > pi),
    /// truncated at `truncation`, sampled on the 4^grid_log4 dyadic grid.
    Alternating {
        c: f64,
        l1: u64,
        blocks: usize,
        truncation: u64,
        grid_log4: u32,
    },
    /// Single block n of the unit-mass block family, optionally normalized,
    /// sampled on `samples` uniform points.
    Block {
        l1: u64,
        block: usize,
        normalized: bool,
        samples: usize,
    },
    /// The scalar borderline-roughness path on [0, e^-1].
    Borderline { samples: usize },
}

impl InputSpec {
    pub fn materialize(&self, spec_dir: &Path) -> anyhow::Result<SampledPath> {
        let cap = max_samples();
        let check = |n: usize| -> anyhow::Result<()> {
            if n > cap {
                bail!(SizeLimit(format!("{n} samples exceeds cap {cap}")));
            }
            if n < 2 {
                bail!("need at least 2 samples");
            }
            Ok(())
        };
        Ok(match self {
            InputSpec::Csv { path } => {
                let full = spec_dir.join(path);
                let file = std::fs::File::open(&full)
                    .with_context(|| format!("opening {}", full.display()))?;
                let p = SampledPath::read_csv(file)?;
                check(p.len())?;
                p
            }
            InputSpec::Triangle => SampledPath::from_points(
                vec![0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0],
                &[
                    vec![0.0, 0.0],
                    vec![1.0, 0.0],
                    vec![0.0, 1.0],
                    vec![0.0, 0.0],
                ],
            )?,
            InputSpec::Monomial {
                power_x,
                power_y,
                samples,
            } => {
                check(*samples)?;
                let (px, py) = (*power_x, *power_y);
                if py == 0.0 {
                    SampledPath::from_fn(uniform_times(*samples, 1.0), 1, |t| vec![t.powf(px)])?
                } else {
                    SampledPath::from_fn(uniform_times(*samples, 1.0), 2, |t| {
                        vec![t.powf(px), t.powf(py)]
                    })?
                }
            }
            InputSpec::Circle { winding, samples } => {
                check(*samples)?;
                roughlab_core::lacunary::shrinking_circle_path(*winding, *samples)?
            }
            InputSpec::Trig { terms, samples } => {
                check(*samples)?;
                TrigPath::new(terms.clone())?.sample(uniform_times(*samples, 1.0))?
            }
            InputSpec::Alternating {
                c,
                l1,
                blocks,
                truncation,
                grid_log4,
            } => {
                let n = 4usize
                    .checked_pow(*grid_log4)
                    .and_then(|x| x.checked_add(1))
                    .ok_or_else(|| anyhow::anyhow!("grid_log4 too large"))?;
                check(n)?;
                let b = harmonic_blocks(*c, *l1, *blocks)?;
                let series = LacunarySeries::alternating(b, Some(*truncation))?;
                series.sample(dyadic_grid_times(*grid_log4))?
            }
            InputSpec::Block {
                l1,
                block,
                normalized,
                samples,
            } => {
                check(*samples)?;
                let b = unit_blocks(*l1, *block)?;
                let series = LacunarySeries::single_block(&b, *block, *normalized)?;
                series.sample(uniform_times(*samples, 1.0))?
            }
            InputSpec::Borderline { samples } => {
                check(*samples)?;
                let hi = (-1f64).exp();
                let times = uniform_times(*samples, hi);
                SampledPath::from_fn(times, 1, |t| {
                    vec![roughlab_core::lacunary::borderline_path(t).unwrap()]
                })?
            }
        })
    }

}

/// Untruncated alternating input for the lacunary table: same fields, but
/// the closed form may run over the whole covered block range.
#[derive(Debug, Deserialize, Clone)]
#[serde(deny_unknown_fields)]
pub struct LacunaryInput {
    pub c: f64,
    pub l1: u64,
    pub blocks: usize,
    /// Optional truncation; absent means the ideal series on the covered
    /// range.
    #[serde(default)]
    pub truncation: Option<u64>,
}

#[derive(Debug, Deserialize, Clone)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleSpec {
    /// Dyadic partitions (4^n pieces) for n in lo..=hi; requires the grid to
    /// contain the dyadic times. The full grid is appended when missing.
    Dyadic { lo: u32, hi: u32 },
    /// Index-halving partitions (2^level pieces) ending at the full grid.
    Nested { lo: u32, hi: u32 },
}

impl ScheduleSpec {
    pub fn build(
        &self,
        path: &SampledPath,
    ) -> roughlab_core::Result<Vec<roughlab_core::path::Partition>> {
        match self {
            ScheduleSpec::Dyadic { lo, hi } => roughlab_core::path::dyadic_schedule(path, *lo, *hi),
            ScheduleSpec::Nested { lo, hi } => {
                Ok(roughlab_core::path::nested_schedule(path, *lo, *hi))
            }
        }
    }
}

fn default_format() -> OutputFormat {
    OutputFormat::Csv
}

#[derive(Debug, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Deserialize, Clone)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_format")]
    pub format: OutputFormat,
}

fn default_dir() -> PathBuf {
    PathBuf::from(".")
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            dir: default_dir(),
            format: default_format(),
        }
    }
}

#[derive(Debug, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeKind {
    Enhancibility,
    WeakGeometric,
}

/// Per-command parameters; each command reads the fields it documents and
/// validation rejects combinations that make no sense for it.
#[derive(Debug, Deserialize, Clone, Default)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// pvar: variation exponent (>= 1) or "inf"
    #[serde(default)]
    pub p: Option<serde_json::Value>,
    /// area: number of window grid points for the (s, t) table
    #[serde(default)]
    pub window_points: Option<usize>,
    /// integrate: the integrator path gamma2 (defaults to the input path)
    #[serde(default)]
    pub path2: Option<InputSpec>,
    /// integrate / probe: refinement schedule
    #[serde(default)]
    pub schedule: Option<ScheduleSpec>,
    /// integrate / probe: tolerance
    #[serde(default)]
    pub tol: Option<f64>,
    /// lacunary: generator of the closed-form table
    #[serde(default)]
    pub series: Option<LacunaryInput>,
    /// lacunary: explicit partition levels N
    #[serde(default)]
    pub n_list: Option<Vec<u64>>,
    /// lacunary: level ceiling; rows are block boundaries plus a log-spaced
    /// ladder up to it
    #[serde(default)]
    pub n_max: Option<u64>,
    /// probe: which probe
    #[serde(default)]
    pub probe: Option<ProbeKind>,
    /// probe: equicontinuity ladder (fractions of T)
    #[serde(default)]
    pub delta_fractions: Option<Vec<f64>>,
    /// constants: parameter grids
    #[serde(default)]
    pub a_values: Option<Vec<f64>>,
    #[serde(default)]
    pub p_values: Option<Vec<f64>>,
    #[serde(default)]
    pub m_bound: Option<f64>,
}

#[derive(Debug, Deserialize, Clone)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub command: CommandKind,
    #[serde(default)]
    pub input: Option<InputSpec>,
    #[serde(default)]
    pub parameters: Params,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

impl ExperimentSpec {
    pub fn load(path: &Path) -> anyhow::Result<ExperimentSpec> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading spec {}", path.display()))?;
        let spec: ExperimentSpec = serde_json::from_str(&text)
            .with_context(|| format!("parsing spec {}", path.display()))?;
        Ok(spec)
    }

    /// The variation exponent for pvar: a number >= 1 or the string "inf".
    pub fn pvar_exponent(&self) -> anyhow::Result<f64> {
        let v = self
            .parameters
            .p
            .as_ref()
            .ok_or_else(|| anyhow::anyhow!("pvar requires parameters.p"))?;
        let p = match v {
            serde_json::Value::Number(x) => x
                .as_f64()
                .ok_or_else(|| anyhow::anyhow!("parameters.p is not a float"))?,
            serde_json::Value::String(s) if s == "inf" => f64::INFINITY,
            other => bail!("parameters.p must be a number or \"inf\", got {other}"),
        };
        if p.is_nan() || p < 1.0 {
            bail!("parameters.p must be >= 1, got {p}");
        }
        Ok(p)
    }
}

/// Marker wrapper so main can map size refusals to their own exit code.
#[derive(Debug)]
pub struct SizeLimit(pub String);

impl std::fmt::Display for SizeLimit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "size limit: {}", self.0)
    }
}

impl std::error::Error for SizeLimit {}
