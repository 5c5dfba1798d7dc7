//! Full-tree CFR iteration engine.
//!
//! One iteration plays the current strategies (regret matching on the stored
//! regrets), collects instantaneous counterfactual regrets for the updating
//! player, and folds them into the cumulative regrets and the cumulative
//! strategy. With `t` completed iterations, iteration `t + 1` applies the
//! discount multipliers computed from `t` and the schedule evaluated at `t`;
//! the first iteration applies none.

use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::eval::{best_response_value, exploitability};
use crate::game::{InfoSetId, Node, NodeId, Player, StrategyProfile, TreeGame};
use crate::regret::{
    accumulate_strategy, apply_regret_update, discount_triple, match_strategy, normalize_average, predictive_strategy,
    DiscountTriple,
};
use crate::schedules::ScheduleSet;

pub use crate::regret::Variant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpdateMode {
    /// Player 0 updates, then player 1 updates against player 0's refreshed strategy.
    Alternating,
    /// Both players update from the same pre-iteration strategies.
    Simultaneous,
}

impl UpdateMode {
    pub fn name(self) -> &'static str {
        match self {
            UpdateMode::Alternating => "alternating",
            UpdateMode::Simultaneous => "simultaneous",
        }
    }
}

impl FromStr for UpdateMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alternating" => Ok(UpdateMode::Alternating),
            "simultaneous" => Ok(UpdateMode::Simultaneous),
            other => Err(Error::config(format!(
                "unknown update mode {other:?} (expected alternating or simultaneous)"
            ))),
        }
    }
}

/// How the averaging exponent γ turns into average-strategy weights.
///
/// With a constant γ both forms give identical averages. They differ once γ
/// moves with the iteration count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Averaging {
    /// Before adding iteration `t + 1`, multiply the cumulative strategy by
    /// `(t / (t + 1))^γ(t)`.
    #[default]
    Discounted,
    /// Weight iteration `k` by `k^γ(k)`, the accumulation used by common DCFR
    /// implementations. Stored rescaled so the newest contribution has weight 1.
    Power,
}

impl Averaging {
    pub fn name(self) -> &'static str {
        match self {
            Averaging::Discounted => "discounted",
            Averaging::Power => "power",
        }
    }
}

impl FromStr for Averaging {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "discounted" => Ok(Averaging::Discounted),
            "power" => Ok(Averaging::Power),
            other => Err(Error::config(format!(
                "unknown averaging {other:?} (expected discounted or power)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub variant: Variant,
    pub schedule: ScheduleSet,
    pub iterations: u64,
    pub update_mode: UpdateMode,
    pub checkpoint_every: u64,
    pub averaging: Averaging,
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::config("iterations must be at least 1"));
        }
        if self.checkpoint_every == 0 {
            return Err(Error::config("checkpoint interval must be at least 1"));
        }
        self.schedule.validate()?;
        // Every multiplier the run will use must be a finite number.
        let n = self.iterations;
        for t in [1, n] {
            let h = self.schedule.eval(t, n)?;
            let d = discount_triple(t, h.alpha, h.beta, h.gamma);
            if ![d.pos_mult, d.neg_mult, d.strat_mult].iter().all(|m| m.is_finite()) {
                return Err(Error::config(format!("schedule yields non-finite discounts at t={t}")));
            }
        }
        Ok(())
    }

    /// Iterations after which exploitability is recorded.
    pub fn is_checkpoint(&self, iteration: u64) -> bool {
        iteration.is_multiple_of(self.checkpoint_every) || iteration == self.iterations
    }
}

/// One row of a convergence curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRecord {
    pub iteration: u64,
    pub exploitability: f64,
    /// Cumulative solver time in milliseconds; evaluation is excluded.
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub average: StrategyProfile,
    pub checkpoints: Vec<ConvergenceRecord>,
    /// Weighted average regret of each player at every checkpoint. Only
    /// recorded for simultaneous updates, where it bounds exploitability.
    pub weighted_regrets: Vec<[f64; 2]>,
    /// Total milliseconds spent evaluating checkpoints.
    pub evaluation_ms: f64,
}

/// Flat per-player arrays aligned with the game's information-set layout.
#[derive(Debug, Clone, PartialEq)]
pub struct PlayerState {
    pub cum_regret: Vec<f64>,
    pub cum_strategy: Vec<f64>,
    pub current: Vec<f64>,
    pub prediction: Vec<f64>,
    /// Instantaneous regrets of the traversal in progress.
    pub instant: Vec<f64>,
    /// Own reach summed over each infoset's member histories in the traversal in progress.
    pub reach: Vec<f64>,
}

impl PlayerState {
    fn new(game: &TreeGame, player: Player) -> Self {
        let table = game.infosets(player);
        let actions = table.total_actions();
        let mut current = vec![0.0; actions];
        for id in table.ids() {
            let span = table.span(id);
            let u = 1.0 / span.len() as f64;
            current[span].fill(u);
        }
        PlayerState {
            cum_regret: vec![0.0; actions],
            cum_strategy: vec![0.0; actions],
            current,
            prediction: vec![0.0; actions],
            instant: vec![0.0; actions],
            reach: vec![0.0; table.len()],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub players: [PlayerState; 2],
    pub completed_iterations: u64,
}

impl SolverState {
    pub fn new(game: &TreeGame) -> Self {
        SolverState {
            players: [PlayerState::new(game, Player::P0), PlayerState::new(game, Player::P1)],
            completed_iterations: 0,
        }
    }

    pub fn current_strategy(&self, game: &TreeGame, player: Player, id: InfoSetId) -> &[f64] {
        &self.players[player.index()].current[game.infosets(player).span(id)]
    }

    pub fn instant_regrets(&self, game: &TreeGame, player: Player, id: InfoSetId) -> &[f64] {
        &self.players[player.index()].instant[game.infosets(player).span(id)]
    }

    pub fn cum_regrets(&self, game: &TreeGame, player: Player, id: InfoSetId) -> &[f64] {
        &self.players[player.index()].cum_regret[game.infosets(player).span(id)]
    }

    pub fn cum_strategy(&self, game: &TreeGame, player: Player, id: InfoSetId) -> &[f64] {
        &self.players[player.index()].cum_strategy[game.infosets(player).span(id)]
    }

    /// Recomputes `player`'s current strategy from its regrets.
    pub fn refresh_strategy(&mut self, game: &TreeGame, player: Player, variant: Variant) {
        let table = game.infosets(player);
        let ps = &mut self.players[player.index()];
        for id in table.ids() {
            let span = table.span(id);
            match variant {
                Variant::PcfrPlus => predictive_strategy(
                    &ps.cum_regret[span.clone()],
                    &ps.prediction[span.clone()],
                    &mut ps.current[span],
                ),
                _ => match_strategy(&ps.cum_regret[span.clone()], &mut ps.current[span]),
            }
        }
    }

    /// Normalized cumulative strategy; uniform where nothing was accumulated.
    pub fn average_strategy(&self, game: &TreeGame) -> StrategyProfile {
        let mut profile = StrategyProfile::uniform(game);
        for p in Player::BOTH {
            let table = game.infosets(p);
            for id in table.ids() {
                let c = &self.players[p.index()].cum_strategy[table.span(id)];
                normalize_average(c, profile.get_mut(p, id));
            }
        }
        profile
    }
}

/// Recursive counterfactual traversal for `player` below `node`.
///
/// Returns the expected utility of `node` for `player` under the current
/// strategies. Instantaneous regrets `opp_reach * (v(h, a) - v(h))` and own reach
/// are accumulated into `state` for `player`'s information sets.
pub fn cfr_traverse(
    game: &TreeGame,
    state: &mut SolverState,
    player: Player,
    node: NodeId,
    own_reach: f64,
    opp_reach: f64,
) -> f64 {
    let [p0, p1] = &mut state.players;
    let (me, other) = match player {
        Player::P0 => (p0, &*p1),
        Player::P1 => (p1, &*p0),
    };
    let mut walk = Walk {
        game,
        player,
        own_current: &me.current,
        other_current: &other.current,
        instant: &mut me.instant,
        reach: &mut me.reach,
        stack: Vec::with_capacity(64),
    };
    walk.visit(node, own_reach, opp_reach)
}

struct Walk<'a> {
    game: &'a TreeGame,
    player: Player,
    own_current: &'a [f64],
    other_current: &'a [f64],
    instant: &'a mut [f64],
    reach: &'a mut [f64],
    stack: Vec<f64>,
}

impl Walk<'_> {
    fn visit(&mut self, node: NodeId, own_reach: f64, opp_reach: f64) -> f64 {
        let game = self.game;
        match *game.node(node) {
            Node::Terminal { .. } => game.payoff(node).unwrap()[self.player.index()],
            _ if own_reach == 0.0 && opp_reach == 0.0 => 0.0,
            Node::Chance { .. } => {
                let mut v = 0.0;
                for (&c, &p) in game.children(node).iter().zip(game.chance_probs(node)) {
                    v += p * self.visit(c, own_reach, opp_reach * p);
                }
                v
            }
            Node::Decision { player, infoset, .. } if player == self.player => {
                let span = game.infosets(player).span(infoset);
                self.reach[infoset.index()] += own_reach;
                let base = self.stack.len();
                let mut v = 0.0;
                for (k, &c) in game.children(node).iter().enumerate() {
                    let s = self.own_current[span.start + k];
                    let va = self.visit(c, own_reach * s, opp_reach);
                    self.stack.push(va);
                    v += s * va;
                }
                for k in 0..span.len() {
                    self.instant[span.start + k] += opp_reach * (self.stack[base + k] - v);
                }
                self.stack.truncate(base);
                v
            }
            Node::Decision { player, infoset, .. } => {
                let span = game.infosets(player).span(infoset);
                let mut v = 0.0;
                for (k, &c) in game.children(node).iter().enumerate() {
                    let s = self.other_current[span.start + k];
                    v += s * self.visit(c, own_reach, opp_reach * s);
                }
                v
            }
        }
    }
}

/// `t^g0 / (t + 1)^g1`, computed in the log domain.
fn power_ratio(t: u64, g0: f64, g1: f64) -> f64 {
    let t = t as f64;
    (g0 * t.ln() - g1 * (t + 1.0).ln()).exp()
}

/// An in-progress solver run.
pub struct Solver<'g> {
    game: &'g TreeGame,
    config: SolverConfig,
    state: SolverState,
    /// Running sums with the average-strategy weights: total weight and
    /// player 0's weighted iterate value.
    weight_sum: f64,
    weighted_value: f64,
}

impl<'g> Solver<'g> {
    pub fn new(game: &'g TreeGame, config: SolverConfig) -> Result<Self> {
        config.validate()?;
        Ok(Solver {
            game,
            config,
            state: SolverState::new(game),
            weight_sum: 0.0,
            weighted_value: 0.0,
        })
    }

    pub fn state(&self) -> &SolverState {
        &self.state
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn completed_iterations(&self) -> u64 {
        self.state.completed_iterations
    }

    /// Discounts for the iteration about to run and whether its average-strategy
    /// contribution is zeroed.
    fn discounts(&self) -> (DiscountTriple, bool) {
        let t = self.state.completed_iterations;
        let n = self.config.iterations;
        if self.config.variant == Variant::Cfr {
            return (DiscountTriple::NONE, false);
        }
        let zeroed = self.config.schedule.zero_weight(t, n);
        if t == 0 {
            return (DiscountTriple::NONE, zeroed);
        }
        let schedule = &self.config.schedule;
        let h = schedule.eval(t.min(n), n).expect("horizon validated at construction");
        let mut triple = discount_triple(t, h.alpha, h.beta, h.gamma);
        if self.config.averaging == Averaging::Power {
            let next = schedule
                .eval((t + 1).min(n), n)
                .expect("horizon validated at construction");
            triple.strat_mult = power_ratio(t, h.gamma, next.gamma);
        }
        (triple, zeroed)
    }

    /// Runs one iteration.
    pub fn step(&mut self) {
        let (triple, zeroed) = self.discounts();
        let variant = self.config.variant;
        let game = self.game;
        let root = game.root();
        match self.config.update_mode {
            UpdateMode::Alternating => {
                for p in Player::BOTH {
                    for q in Player::BOTH {
                        self.state.refresh_strategy(game, q, variant);
                    }
                    cfr_traverse(game, &mut self.state, p, root, 1.0, 1.0);
                    self.fold_updates(p, &triple, zeroed);
                }
            }
            UpdateMode::Simultaneous => {
                for q in Player::BOTH {
                    self.state.refresh_strategy(game, q, variant);
                }
                let v0 = cfr_traverse(game, &mut self.state, Player::P0, root, 1.0, 1.0);
                cfr_traverse(game, &mut self.state, Player::P1, root, 1.0, 1.0);
                for p in Player::BOTH {
                    self.fold_updates(p, &triple, zeroed);
                }
                let w = if zeroed { 0.0 } else { 1.0 };
                self.weight_sum = self.weight_sum * triple.strat_mult + w;
                self.weighted_value = self.weighted_value * triple.strat_mult + w * v0;
            }
        }
        self.state.completed_iterations += 1;
    }

    fn fold_updates(&mut self, player: Player, triple: &DiscountTriple, zeroed: bool) {
        let table = self.game.infosets(player);
        let variant = self.config.variant;
        let ps = &mut self.state.players[player.index()];
        for id in table.ids() {
            let span = table.span(id);
            apply_regret_update(
                &mut ps.cum_regret[span.clone()],
                Some(&mut ps.prediction[span.clone()]),
                &ps.instant[span.clone()],
                triple,
                variant,
            );
            let reach = if zeroed { 0.0 } else { ps.reach[id.index()] };
            accumulate_strategy(
                &mut ps.cum_strategy[span.clone()],
                reach,
                &ps.current[span.clone()],
                triple.strat_mult,
            );
            ps.instant[span].fill(0.0);
            ps.reach[id.index()] = 0.0;
        }
    }

    pub fn average_strategy(&self) -> StrategyProfile {
        self.state.average_strategy(self.game)
    }

    /// Weighted average regret of each player for the current average profile.
    /// Only meaningful with simultaneous updates.
    pub fn weighted_regrets(&self, average: &StrategyProfile) -> Result<[f64; 2]> {
        if self.weight_sum <= 0.0 {
            return Ok([0.0; 2]);
        }
        let mean0 = self.weighted_value / self.weight_sum;
        let br0 = best_response_value(self.game, average, Player::P0)?;
        let br1 = best_response_value(self.game, average, Player::P1)?;
        Ok([br0 - mean0, br1 + mean0])
    }
}

/// Runs `config.iterations` iterations, recording exploitability of the average
/// strategy at every checkpoint.
pub fn run(game: &TreeGame, config: &SolverConfig) -> Result<RunResult> {
    let mut solver = Solver::new(game, config.clone())?;
    let mut checkpoints = Vec::new();
    let mut weighted_regrets = Vec::new();
    let mut solver_time = 0.0f64;
    let mut evaluation_ms = 0.0f64;
    for iteration in 1..=config.iterations {
        let started = Instant::now();
        solver.step();
        solver_time += started.elapsed().as_secs_f64() * 1e3;
        if config.is_checkpoint(iteration) {
            let evaluating = Instant::now();
            let average = solver.average_strategy();
            let report = exploitability(game, &average)?;
            checkpoints.push(ConvergenceRecord {
                iteration,
                exploitability: report.exploitability,
                elapsed_ms: solver_time,
            });
            if config.update_mode == UpdateMode::Simultaneous {
                weighted_regrets.push(solver.weighted_regrets(&average)?);
            }
            evaluation_ms += evaluating.elapsed().as_secs_f64() * 1e3;
        }
    }
    Ok(RunResult {
        average: solver.average_strategy(),
        checkpoints,
        weighted_regrets,
        evaluation_ms,
    })
}
