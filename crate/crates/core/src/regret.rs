//! Regret-minimizer arithmetic for a single information set.
//!
//! Everything here works on caller-owned slices so the solver can run the same
//! kernels over its flat per-player arrays. [`InfoSetState`] bundles the vectors
//! for standalone use.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Denominators below this are treated as zero and fall back to uniform play.
const MIN_NORMALIZER: f64 = 1e-300;

/// Solver variant; selects the regret rule and which schedules are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Regret matching on plain cumulative regrets, uniform averaging.
    Cfr,
    /// Regret matching+ (regrets clipped at zero), averaging weighted by `gamma`.
    CfrPlus,
    /// Discounted regrets (`alpha`, `beta`) and average (`gamma`).
    Dcfr,
    /// Predictive regret matching+ with `gamma` averaging.
    PcfrPlus,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::Cfr, Variant::CfrPlus, Variant::Dcfr, Variant::PcfrPlus];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Cfr => "cfr",
            Variant::CfrPlus => "cfr_plus",
            Variant::Dcfr => "dcfr",
            Variant::PcfrPlus => "pcfr_plus",
        }
    }

    /// Regrets are kept nonnegative.
    pub fn clips_regrets(self) -> bool {
        matches!(self, Variant::CfrPlus | Variant::PcfrPlus)
    }

    /// Name of the schedule that reproduces the variant's usual fixed discounting.
    pub fn default_schedule(self) -> &'static str {
        match self {
            Variant::Cfr => "cfr",
            Variant::CfrPlus => "cfr_plus",
            Variant::Dcfr => "dcfr",
            Variant::PcfrPlus => "pcfr_plus",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Variant::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| {
            Error::config(format!(
                "unknown variant {s:?} (expected cfr, cfr_plus, dcfr or pcfr_plus)"
            ))
        })
    }
}

/// Multipliers applied to positive regrets, negative regrets and the cumulative strategy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscountTriple {
    pub pos_mult: f64,
    pub neg_mult: f64,
    pub strat_mult: f64,
}

impl DiscountTriple {
    /// No discounting; used on the first iteration.
    pub const NONE: DiscountTriple = DiscountTriple {
        pos_mult: 1.0,
        neg_mult: 1.0,
        strat_mult: 1.0,
    };
}

/// Discount multipliers after `t >= 1` completed iterations:
/// `t^a/(t^a+1)`, `t^b/(t^b+1)` and `(t/(t+1))^g`.
pub fn discount_triple(t: u64, alpha: f64, beta: f64, gamma: f64) -> DiscountTriple {
    debug_assert!(t >= 1);
    let t = t as f64;
    // 1/(1 + t^-x) == t^x/(t^x + 1) without overflowing for large exponents.
    DiscountTriple {
        pos_mult: 1.0 / (1.0 + t.powf(-alpha)),
        neg_mult: 1.0 / (1.0 + t.powf(-beta)),
        strat_mult: (t / (t + 1.0)).powf(gamma),
    }
}

/// Regret matching: play proportionally to positive regret, uniformly if there is none.
#[inline]
pub fn match_strategy(cum_regret: &[f64], out: &mut [f64]) {
    debug_assert_eq!(cum_regret.len(), out.len());
    let mut total = 0.0;
    for (o, &r) in out.iter_mut().zip(cum_regret) {
        let p = if r > 0.0 { r } else { 0.0 };
        *o = p;
        total += p;
    }
    normalize_or_uniform(out, total);
}

/// Predictive regret matching+: match on `max(R + m, 0)`.
#[inline]
pub fn predictive_strategy(cum_regret: &[f64], prediction: &[f64], out: &mut [f64]) {
    debug_assert_eq!(cum_regret.len(), prediction.len());
    let mut total = 0.0;
    for ((o, &r), &m) in out.iter_mut().zip(cum_regret).zip(prediction) {
        let s = r + m;
        let p = if s > 0.0 { s } else { 0.0 };
        *o = p;
        total += p;
    }
    normalize_or_uniform(out, total);
}

#[inline]
fn normalize_or_uniform(out: &mut [f64], total: f64) {
    if total > MIN_NORMALIZER {
        for o in out.iter_mut() {
            *o /= total;
        }
    } else {
        out.fill(1.0 / out.len() as f64);
    }
}

/// Folds one iteration's instantaneous regrets into the cumulative regrets.
///
/// DCFR discounts each entry by its sign before the update (zero counts as
/// negative) and adds; CFR+ and PCFR+ add then clip at zero, with PCFR+ also
/// storing the instantaneous regrets as its next prediction; CFR just adds.
#[inline]
pub fn apply_regret_update(
    cum_regret: &mut [f64],
    prediction: Option<&mut [f64]>,
    instant: &[f64],
    triple: &DiscountTriple,
    variant: Variant,
) {
    debug_assert_eq!(cum_regret.len(), instant.len());
    match variant {
        Variant::Cfr => {
            for (r, &x) in cum_regret.iter_mut().zip(instant) {
                *r += x;
            }
        }
        Variant::Dcfr => {
            for (r, &x) in cum_regret.iter_mut().zip(instant) {
                let m = if *r > 0.0 { triple.pos_mult } else { triple.neg_mult };
                *r = *r * m + x;
            }
        }
        Variant::CfrPlus | Variant::PcfrPlus => {
            for (r, &x) in cum_regret.iter_mut().zip(instant) {
                let s = *r + x;
                *r = if s > 0.0 { s } else { 0.0 };
            }
        }
    }
    if variant == Variant::PcfrPlus {
        if let Some(m) = prediction {
            m.copy_from_slice(instant);
        }
    }
}

/// `C <- C * strat_mult + own_reach * sigma`.
#[inline]
pub fn accumulate_strategy(cum_strategy: &mut [f64], own_reach: f64, sigma: &[f64], strat_mult: f64) {
    for (c, &s) in cum_strategy.iter_mut().zip(sigma) {
        *c = *c * strat_mult + own_reach * s;
    }
}

/// Normalized cumulative strategy, uniform when nothing was accumulated.
#[inline]
pub fn normalize_average(cum_strategy: &[f64], out: &mut [f64]) {
    let total: f64 = cum_strategy.iter().sum();
    out.copy_from_slice(cum_strategy);
    normalize_or_uniform(out, total);
}

/// Owned regret-minimizer state of one information set.
#[derive(Debug, Clone, PartialEq)]
pub struct InfoSetState {
    pub cum_regret: Vec<f64>,
    pub cum_strategy: Vec<f64>,
    pub current_strategy: Vec<f64>,
    /// Latest instantaneous regrets; read only by PCFR+.
    pub prediction: Vec<f64>,
}

impl InfoSetState {
    pub fn new(actions: usize) -> Self {
        InfoSetState {
            cum_regret: vec![0.0; actions],
            cum_strategy: vec![0.0; actions],
            current_strategy: vec![1.0 / actions as f64; actions],
            prediction: vec![0.0; actions],
        }
    }

    /// Recomputes the current strategy from the regrets.
    pub fn refresh_strategy(&mut self, variant: Variant) {
        match variant {
            Variant::PcfrPlus => predictive_strategy(&self.cum_regret, &self.prediction, &mut self.current_strategy),
            _ => match_strategy(&self.cum_regret, &mut self.current_strategy),
        }
    }

    pub fn apply_regret_update(&mut self, instant: &[f64], triple: &DiscountTriple, variant: Variant) {
        apply_regret_update(
            &mut self.cum_regret,
            Some(&mut self.prediction),
            instant,
            triple,
            variant,
        );
    }

    pub fn accumulate_strategy(&mut self, own_reach: f64, strat_mult: f64) {
        accumulate_strategy(&mut self.cum_strategy, own_reach, &self.current_strategy, strat_mult);
    }

    pub fn average_strategy(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.cum_strategy.len()];
        normalize_average(&self.cum_strategy, &mut out);
        out
    }
}
