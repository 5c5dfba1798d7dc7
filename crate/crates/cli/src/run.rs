//! One solver run as described by command-line flags or a config entry.

use crate::error::{CliError, Result};
use hscfr::games::{make_game, GameParams, GameRules};
use hscfr::schedules::{builtin_schedule, ScalarSchedule};
use hscfr::solver::{SolverConfig, Variant};
use serde::Deserialize;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

pub const DEFAULT_ITERATIONS: u64 = 1000;
pub const DEFAULT_CHECKPOINT_EVERY: u64 = 10;

/// Unresolved run description. Keys mirror the `solve` flags; every field is
/// optional so that config files can layer runs over shared defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunEntry {
    pub game: Option<String>,
    pub x: Option<u32>,
    pub fields: Option<u32>,
    pub resources: Option<u32>,
    pub variant: Option<String>,
    pub schedule: Option<String>,
    /// Overrides of individual exponents: `"v"` or `"start,slope"`.
    pub alpha: Option<String>,
    pub beta: Option<String>,
    pub gamma: Option<String>,
    #[serde(alias = "iterations")]
    pub iters: Option<u64>,
    pub mode: Option<String>,
    #[serde(alias = "checkpoint-every")]
    pub checkpoint_every: Option<u64>,
    pub averaging: Option<String>,
    pub out: Option<PathBuf>,
    pub label: Option<String>,
    pub role: Option<String>,
}

impl RunEntry {
    /// Fields of `self`, falling back to `defaults` where unset.
    pub fn over(&self, defaults: &RunEntry) -> RunEntry {
        fn pick<T: Clone>(a: &Option<T>, b: &Option<T>) -> Option<T> {
            a.clone().or_else(|| b.clone())
        }
        RunEntry {
            game: pick(&self.game, &defaults.game),
            x: pick(&self.x, &defaults.x),
            fields: pick(&self.fields, &defaults.fields),
            resources: pick(&self.resources, &defaults.resources),
            variant: pick(&self.variant, &defaults.variant),
            schedule: pick(&self.schedule, &defaults.schedule),
            alpha: pick(&self.alpha, &defaults.alpha),
            beta: pick(&self.beta, &defaults.beta),
            gamma: pick(&self.gamma, &defaults.gamma),
            iters: pick(&self.iters, &defaults.iters),
            mode: pick(&self.mode, &defaults.mode),
            checkpoint_every: pick(&self.checkpoint_every, &defaults.checkpoint_every),
            averaging: pick(&self.averaging, &defaults.averaging),
            out: pick(&self.out, &defaults.out),
            label: pick(&self.label, &defaults.label),
            role: pick(&self.role, &defaults.role),
        }
    }

    pub fn game_params(&self) -> GameParams {
        GameParams {
            x: self.x,
            fields: self.fields,
            resources: self.resources,
        }
    }

    /// Resolves names and defaults. Errors are configuration errors of the
    /// library, left for the caller to classify.
    pub fn resolve(&self) -> hscfr::Result<RunSpec> {
        let name = self
            .game
            .as_deref()
            .ok_or_else(|| hscfr::Error::Config("missing game".into()))?;
        let rules = make_game(name, &self.game_params())?;
        let variant: Variant = self.variant.as_deref().unwrap_or("dcfr").parse()?;
        let schedule_name = self
            .schedule
            .clone()
            .unwrap_or_else(|| variant.default_schedule().to_string());
        let mut schedule = builtin_schedule(&schedule_name)?;
        let mut customized = false;
        for (value, slot) in [
            (&self.alpha, &mut schedule.alpha),
            (&self.beta, &mut schedule.beta),
            (&self.gamma, &mut schedule.gamma),
        ] {
            if let Some(v) = value {
                *slot = ScalarSchedule::from_str(v)?;
                customized = true;
            }
        }
        let config = SolverConfig {
            variant,
            schedule,
            iterations: self.iters.unwrap_or(DEFAULT_ITERATIONS),
            update_mode: self.mode.as_deref().unwrap_or("alternating").parse()?,
            checkpoint_every: self.checkpoint_every.unwrap_or(DEFAULT_CHECKPOINT_EVERY),
            averaging: self.averaging.as_deref().unwrap_or("discounted").parse()?,
        };
        config.validate()?;
        let label = match &self.label {
            Some(l) => l.clone(),
            None => default_label(variant, &schedule_name, customized),
        };
        if label.is_empty() || label.contains([',', '"', '\n', '\r']) {
            return Err(hscfr::Error::Config(format!(
                "label {label:?} must be non-empty without commas, quotes or line breaks"
            )));
        }
        let role = match self.role.as_deref() {
            Some(r) => r.parse()?,
            None => Role::infer(variant, &schedule_name, customized),
        };
        Ok(RunSpec {
            rules,
            config,
            schedule_name,
            label,
            role,
            out: self.out.clone(),
        })
    }
}

/// How a run enters the bench summary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// Competes for the best fixed-discount exploitability of its game.
    Baseline,
    /// Gets its own summary columns, compared against the best baseline.
    Candidate,
    /// Written to its own CSV only.
    Extra,
}

impl Role {
    fn infer(variant: Variant, schedule: &str, customized: bool) -> Role {
        if customized {
            Role::Extra
        } else if schedule == variant.default_schedule() {
            Role::Baseline
        } else if schedule.starts_with("hs") {
            Role::Candidate
        } else {
            Role::Extra
        }
    }
}

impl FromStr for Role {
    type Err = hscfr::Error;

    fn from_str(s: &str) -> hscfr::Result<Role> {
        match s {
            "baseline" => Ok(Role::Baseline),
            "candidate" => Ok(Role::Candidate),
            "extra" => Ok(Role::Extra),
            other => Err(hscfr::Error::Config(format!(
                "unknown role {other:?} (expected baseline, candidate or extra)"
            ))),
        }
    }
}

/// Display name in the usual notation, e.g. `HS-PCFR+(30)` or `DCFR-NC`.
pub fn default_label(variant: Variant, schedule: &str, customized: bool) -> String {
    let algo = match variant {
        Variant::Cfr => "CFR",
        Variant::CfrPlus => "CFR+",
        Variant::Dcfr => "DCFR",
        Variant::PcfrPlus => "PCFR+",
    };
    let base = if schedule == variant.default_schedule() {
        algo.to_string()
    } else if variant == Variant::Dcfr && schedule == "dcfr_nc" {
        "DCFR-NC".to_string()
    } else if let Some(rest) = schedule.strip_prefix("hs") {
        format!("HS-{algo}({})", rest.replace('_', "-"))
    } else {
        format!("{algo}[{schedule}]")
    };
    if customized {
        format!("{base}*")
    } else {
        base
    }
}

/// File-name form of a label: `HS-PCFR+(30)` becomes `hs_pcfrplus_30`.
pub fn slug(label: &str) -> String {
    let mut out = String::new();
    for c in label.replace('+', "plus").chars() {
        if c.is_ascii_alphanumeric() {
            out.push(c.to_ascii_lowercase());
        } else if !out.is_empty() && !out.ends_with('_') {
            out.push('_');
        }
    }
    let trimmed = out.trim_end_matches('_');
    if trimmed.is_empty() {
        "run".into()
    } else {
        trimmed.to_string()
    }
}

/// A fully resolved run.
#[derive(Debug, Clone)]
pub struct RunSpec {
    pub rules: GameRules,
    pub config: SolverConfig,
    pub schedule_name: String,
    pub label: String,
    pub role: Role,
    pub out: Option<PathBuf>,
}

impl RunSpec {
    pub fn game_id(&self) -> String {
        self.rules.id()
    }

    /// Output path relative to a bench directory.
    pub fn output_path(&self) -> PathBuf {
        match &self.out {
            Some(p) => p.clone(),
            None => PathBuf::from(self.game_id()).join(format!("{}.csv", slug(&self.label))),
        }
    }
}

impl fmt::Display for RunSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.game_id(), self.label)
    }
}

/// Resolves flag input, classifying library errors as usage errors.
pub fn resolve_flags(entry: &RunEntry) -> Result<RunSpec> {
    entry.resolve().map_err(CliError::from_flags)
}
