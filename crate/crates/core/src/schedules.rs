//! Hyperparameter schedules for the discounted CFR family.
//!
//! A schedule maps the number of completed iterations `t` and the run horizon
//! `n` to the discount exponents `(alpha, beta, gamma)`. Linear schedules are
//! specified per horizon: `start + slope * t / n`, so a longer run stretches the
//! same curve instead of extending it.

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

/// Names accepted by [`builtin_schedule`].
pub const BUILTIN_NAMES: &[&str] = &[
    "hs30",
    "hs15",
    "hs40",
    "hs5",
    "hs30_fixed",
    "hs30_alpha_fixed",
    "hs30_beta_fixed",
    "dcfr",
    "dcfr_nc",
    "cfr",
    "cfr_plus",
    "pcfr_plus",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarSchedule {
    Constant(f64),
    /// `start + slope * t / n`.
    Linear {
        start: f64,
        slope: f64,
    },
}

impl ScalarSchedule {
    #[inline]
    pub fn eval(&self, t: u64, n: u64) -> f64 {
        match *self {
            ScalarSchedule::Constant(v) => v,
            ScalarSchedule::Linear { start, slope } => start + slope * t as f64 / n as f64,
        }
    }

    /// Smallest and largest value over `t` in `[0, n]`.
    pub fn bounds(&self, n: u64) -> (f64, f64) {
        let a = self.eval(0, n);
        let b = self.eval(n, n);
        (a.min(b), a.max(b))
    }
}

impl fmt::Display for ScalarSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarSchedule::Constant(v) => write!(f, "{v}"),
            ScalarSchedule::Linear { start, slope } => write!(f, "{start},{slope}"),
        }
    }
}

/// Parses `"v"` as a constant and `"start,slope"` as a linear schedule.
impl FromStr for ScalarSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::config(format!("invalid schedule value {x:?}")))
        };
        match s.split_once(',') {
            None => Ok(ScalarSchedule::Constant(num(s)?)),
            Some((start, slope)) => Ok(ScalarSchedule::Linear {
                start: num(start)?,
                slope: num(slope)?,
            }),
        }
    }
}

/// Discount exponents in effect for one iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperparams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Schedules for all three exponents plus the DCFR-NC zero-weight prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleSet {
    pub alpha: ScalarSchedule,
    pub beta: ScalarSchedule,
    pub gamma: ScalarSchedule,
    /// Iterations with `t < fraction * n` contribute nothing to the average strategy.
    pub zero_weight_prefix_fraction: f64,
}

impl ScheduleSet {
    pub fn constant(alpha: f64, beta: f64, gamma: f64) -> Self {
        ScheduleSet {
            alpha: ScalarSchedule::Constant(alpha),
            beta: ScalarSchedule::Constant(beta),
            gamma: ScalarSchedule::Constant(gamma),
            zero_weight_prefix_fraction: 0.0,
        }
    }

    pub fn eval(&self, t: u64, n: u64) -> Result<Hyperparams> {
        if n == 0 {
            return Err(Error::Domain("schedule horizon must be at least 1".into()));
        }
        if t > n {
            return Err(Error::Domain(format!("iteration {t} beyond horizon {n}")));
        }
        Ok(Hyperparams {
            alpha: self.alpha.eval(t, n),
            beta: self.beta.eval(t, n),
            gamma: self.gamma.eval(t, n),
        })
    }

    /// Whether iteration contributions at completed count `t` are zeroed.
    #[inline]
    pub fn zero_weight(&self, t: u64, n: u64) -> bool {
        (t as f64) < self.zero_weight_prefix_fraction * n as f64
    }

    /// Largest gamma over the run, the `U` of the convergence bounds.
    pub fn gamma_upper_bound(&self, n: u64) -> f64 {
        self.gamma.bounds(n).1
    }

    /// True when alpha stays in [1, 5], beta in [-5, 0] and gamma in [0, U] with finite U
    /// for all `t` in `[0, n]`. Sets outside these ranges are exempt from the bounds.
    pub fn within_bound_ranges(&self, n: u64) -> bool {
        let (alo, ahi) = self.alpha.bounds(n);
        let (blo, bhi) = self.beta.bounds(n);
        let (glo, ghi) = self.gamma.bounds(n);
        alo >= 1.0 && ahi <= 5.0 && blo >= -5.0 && bhi <= 0.0 && glo >= 0.0 && ghi.is_finite()
    }

    pub fn validate(&self) -> Result<()> {
        let f = self.zero_weight_prefix_fraction;
        if !(0.0..1.0).contains(&f) {
            return Err(Error::config(format!("zero-weight prefix fraction {f} outside [0, 1)")));
        }
        Ok(())
    }
}

/// `(alpha, beta, gamma)` of `set` after `t` completed iterations of an `n`-iteration run.
pub fn eval_schedule(set: &ScheduleSet, t: u64, n: u64) -> Result<Hyperparams> {
    set.eval(t, n)
}

const HS_ALPHA: ScalarSchedule = ScalarSchedule::Linear { start: 1.0, slope: 3.0 };
const HS_BETA: ScalarSchedule = ScalarSchedule::Linear {
    start: -1.0,
    slope: -2.0,
};

fn hs_gamma(start: f64) -> ScalarSchedule {
    ScalarSchedule::Linear { start, slope: -5.0 }
}

fn hs(gamma: ScalarSchedule) -> ScheduleSet {
    ScheduleSet {
        alpha: HS_ALPHA,
        beta: HS_BETA,
        gamma,
        zero_weight_prefix_fraction: 0.0,
    }
}

/// Built-in schedule sets.
///
/// `cfr_plus` and `pcfr_plus` only set `gamma`; their regret rule clips at zero and
/// never reads `alpha`/`beta`, which are left at the DCFR defaults.
pub fn builtin_schedule(name: &str) -> Result<ScheduleSet> {
    let set = match name {
        "hs30" => hs(hs_gamma(30.0)),
        "hs15" => hs(hs_gamma(15.0)),
        "hs40" => hs(hs_gamma(40.0)),
        "hs5" => hs(hs_gamma(5.0)),
        "hs30_fixed" => hs(ScalarSchedule::Constant(30.0)),
        "hs30_alpha_fixed" => ScheduleSet {
            alpha: ScalarSchedule::Constant(1.0),
            ..hs(hs_gamma(30.0))
        },
        "hs30_beta_fixed" => ScheduleSet {
            beta: ScalarSchedule::Constant(-1.0),
            ..hs(hs_gamma(30.0))
        },
        "dcfr" => ScheduleSet::constant(1.5, 0.0, 2.0),
        "dcfr_nc" => ScheduleSet {
            zero_weight_prefix_fraction: 1.0 / 3.0,
            ..ScheduleSet::constant(1.5, 0.0, 2.0)
        },
        "cfr" => ScheduleSet::constant(1.5, 0.0, 0.0),
        "cfr_plus" => ScheduleSet::constant(1.5, 0.0, 1.0),
        "pcfr_plus" => ScheduleSet::constant(1.5, 0.0, 2.0),
        other => {
            return Err(Error::config(format!(
                "unknown schedule {other:?} (expected one of {})",
                BUILTIN_NAMES.join(", ")
            )))
        }
    };
    Ok(set)
}

/// Smallest `t` in `1..=n` whose average-strategy weight `(t/(t+1))^gamma(t)` reaches `w`.
pub fn weight_threshold(gamma: &ScalarSchedule, n: u64, w: f64) -> Result<Option<u64>> {
    if !(w > 0.0 && w < 1.0) {
        return Err(Error::Domain(format!("weight threshold {w} outside (0, 1)")));
    }
    if n == 0 {
        return Err(Error::Domain("schedule horizon must be at least 1".into()));
    }
    Ok((1..=n).find(|&t| iterate_weight(gamma.eval(t, n), t) >= w))
}

/// `(t/(t+1))^gamma`, the multiplier applied to the cumulative strategy.
#[inline]
pub fn iterate_weight(gamma: f64, t: u64) -> f64 {
    (t as f64 / (t + 1) as f64).powf(gamma)
}
