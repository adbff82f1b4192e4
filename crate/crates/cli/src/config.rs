//! Config resolution: flags override the JSON config file, which overrides
//! the built-in defaults (the standard figure parameters).

use anyhow::{bail, Context};
use serde::Deserialize;
use std::path::{Path, PathBuf};

use pt_trimmer::{InitialSite, Method};

use crate::{EvolveArgs, SharedArgs, SpectrumArgs, VerifyArgs};

/// JSON config file contents; every field optional, snake_case names
/// mirroring the command-line flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub omega: Option<f64>,
    pub gamma: Option<f64>,
    pub j: Option<f64>,
    pub j_min: Option<f64>,
    pub j_max: Option<f64>,
    pub steps: Option<usize>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
    pub initial: Option<String>,
    pub method: Option<String>,
    pub out: Option<PathBuf>,
    pub tol_scale: Option<f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        serde_json::from_str(&text)
            .with_context(|| format!("parsing config file {}", path.display()))
    }

    fn for_shared(shared: &SharedArgs) -> anyhow::Result<Self> {
        match &shared.config {
            Some(path) => Self::load(path),
            None => Ok(Self::default()),
        }
    }
}

pub const DEFAULT_OMEGA: f64 = 5.0;
pub const DEFAULT_GAMMA: f64 = 1.0;
pub const DEFAULT_J: f64 = 5.0;
pub const DEFAULT_J_MIN: f64 = 0.05;
pub const DEFAULT_J_MAX: f64 = 2.0;
pub const DEFAULT_STEPS: usize = 200;
pub const DEFAULT_T_MAX: f64 = 10.0;
pub const DEFAULT_POINTS: usize = 2001;

/// Either one row at a fixed coupling or a uniform sweep.
#[derive(Clone, Debug, PartialEq)]
pub enum SweepSpec {
    Single(f64),
    Range { j_min: f64, j_max: f64, steps: usize },
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            SweepSpec::Single(j) => vec![j],
            SweepSpec::Range { j_min, j_max, steps } => (0..steps)
                .map(|k| j_min + (j_max - j_min) * k as f64 / (steps - 1) as f64)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumConfig {
    pub omega: f64,
    pub gamma: f64,
    pub sweep: SweepSpec,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolveConfig {
    pub omega: f64,
    pub gamma: f64,
    pub j: f64,
    pub t_max: f64,
    pub points: usize,
    pub initial: InitialSite,
    pub method: Method,
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyConfig {
    pub omega: f64,
    pub gamma: f64,
    pub tol_scale: f64,
    pub out: Option<PathBuf>,
}

pub fn resolve_spectrum(args: &SpectrumArgs) -> anyhow::Result<SpectrumConfig> {
    let file = FileConfig::for_shared(&args.shared)?;
    let ranged = args.j_min.is_some()
        || args.j_max.is_some()
        || args.steps.is_some()
        || file.j_min.is_some()
        || file.j_max.is_some()
        || file.steps.is_some();
    let sweep = if let Some(j) = args.j {
        SweepSpec::Single(j)
    } else if !ranged {
        match file.j {
            Some(j) => SweepSpec::Single(j),
            None => SweepSpec::Range {
                j_min: DEFAULT_J_MIN,
                j_max: DEFAULT_J_MAX,
                steps: DEFAULT_STEPS,
            },
        }
    } else {
        SweepSpec::Range {
            j_min: args.j_min.or(file.j_min).unwrap_or(DEFAULT_J_MIN),
            j_max: args.j_max.or(file.j_max).unwrap_or(DEFAULT_J_MAX),
            steps: args.steps.or(file.steps).unwrap_or(DEFAULT_STEPS),
        }
    };
    match sweep {
        SweepSpec::Single(j) if !(j > 0.0 && j.is_finite()) => {
            bail!("coupling must be positive and finite, got {j}")
        }
        SweepSpec::Range { j_min, j_max, steps } => {
            if !(j_min > 0.0 && j_min.is_finite() && j_max.is_finite()) {
                bail!("sweep range must be positive and finite, got [{j_min}, {j_max}]");
            }
            if j_max < j_min {
                bail!("empty sweep range [{j_min}, {j_max}]");
            }
            if steps < 2 {
                bail!("a sweep needs at least 2 steps, got {steps}; use --j for a single row");
            }
        }
        _ => {}
    }
    Ok(SpectrumConfig {
        omega: args.shared.omega.or(file.omega).unwrap_or(DEFAULT_OMEGA),
        gamma: args.shared.gamma.or(file.gamma).unwrap_or(DEFAULT_GAMMA),
        sweep,
        out: args.shared.out.clone().or(file.out),
    })
}

pub fn resolve_evolve(args: &EvolveArgs) -> anyhow::Result<EvolveConfig> {
    let file = FileConfig::for_shared(&args.shared)?;
    let initial = match args.initial.as_deref().or(file.initial.as_deref()) {
        Some(name) => name.parse::<InitialSite>()?,
        None => InitialSite::Passive,
    };
    let method = match args.method.as_deref().or(file.method.as_deref()) {
        Some(name) => name.parse::<Method>()?,
        None => Method::ClosedForm,
    };
    let config = EvolveConfig {
        omega: args.shared.omega.or(file.omega).unwrap_or(DEFAULT_OMEGA),
        gamma: args.shared.gamma.or(file.gamma).unwrap_or(DEFAULT_GAMMA),
        j: args.j.or(file.j).unwrap_or(DEFAULT_J),
        t_max: args.t_max.or(file.t_max).unwrap_or(DEFAULT_T_MAX),
        points: args.points.or(file.points).unwrap_or(DEFAULT_POINTS),
        initial,
        method,
        out: args.shared.out.clone().or(file.out),
    };
    if config.points < 2 {
        bail!("a trajectory needs at least 2 points, got {}", config.points);
    }
    Ok(config)
}

pub fn resolve_verify(args: &VerifyArgs) -> anyhow::Result<VerifyConfig> {
    let file = FileConfig::for_shared(&args.shared)?;
    Ok(VerifyConfig {
        omega: args.shared.omega.or(file.omega).unwrap_or(DEFAULT_OMEGA),
        gamma: args.shared.gamma.or(file.gamma).unwrap_or(DEFAULT_GAMMA),
        tol_scale: args.tol_scale.or(file.tol_scale).unwrap_or(1.0),
        out: args.shared.out.clone().or(file.out),
    })
}
