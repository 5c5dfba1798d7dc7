//! A two-infoset game and a literal transcription of the DCFR update rules.

use hscfr::game::{Player, TreeBuilder, TreeGame};
use hscfr::schedules::ScheduleSet;
use hscfr::solver::{Averaging, Solver, SolverConfig, UpdateMode, Variant};

pub const CHANCE: [f64; 2] = [0.4, 0.6];

/// Payoff to player 0 for chance outcome `c`, player 0 action `a`, player 1 action `b`.
pub fn toy_payoff(c: usize, a: usize, b: usize) -> f64 {
    const U: [[[f64; 3]; 2]; 2] = [
        [[1.0, -2.0, 0.5], [-1.0, 3.0, 0.0]],
        [[2.0, 0.0, -1.5], [0.25, -0.5, 1.0]],
    ];
    U[c][a][b]
}

/// Chance picks one of two outcomes that nobody observes; player 0 then picks
/// one of two actions and player 1, seeing nothing, one of three.
pub fn toy_game() -> TreeGame {
    let mut b = TreeBuilder::new("toy");
    let mut chance_kids = Vec::new();
    for c in 0..2 {
        let mut p0_kids = Vec::new();
        for a in 0..2 {
            let leaves: Vec<_> = (0..3)
                .map(|k| {
                    let u = toy_payoff(c, a, k);
                    b.terminal([u, -u])
                })
                .collect();
            p0_kids.push(b.decision(Player::P1, "B", [("x", leaves[0]), ("y", leaves[1]), ("z", leaves[2])]));
        }
        chance_kids.push(b.decision(Player::P0, "A", [("l", p0_kids[0]), ("r", p0_kids[1])]));
    }
    let root = b.chance([("c0", CHANCE[0], chance_kids[0]), ("c1", CHANCE[1], chance_kids[1])]);
    b.finish(root).unwrap()
}

fn regret_matching(r: &[f64]) -> Vec<f64> {
    let pos: Vec<f64> = r.iter().map(|x| x.max(0.0)).collect();
    let s: f64 = pos.iter().sum();
    if s > 0.0 {
        pos.iter().map(|x| x / s).collect()
    } else {
        vec![1.0 / r.len() as f64; r.len()]
    }
}

pub struct ToyOracle {
    pub r: [Vec<f64>; 2],
    pub c: [Vec<f64>; 2],
}

impl ToyOracle {
    /// Counterfactual values of each action at A (player 0) and B (player 1).
    pub fn values(s0: &[f64], s1: &[f64]) -> [Vec<f64>; 2] {
        let mut v0 = vec![0.0; 2];
        let mut v1 = vec![0.0; 3];
        for (c, &pc) in CHANCE.iter().enumerate() {
            for a in 0..2 {
                for b in 0..3 {
                    let u = toy_payoff(c, a, b);
                    v0[a] += pc * s1[b] * u;
                    v1[b] += pc * s0[a] * -u;
                }
            }
        }
        [v0, v1]
    }

    fn update(&mut self, p: usize, values: &[f64], sigma: &[f64], t: f64, h: (f64, f64, f64)) {
        let (alpha, beta, gamma) = h;
        let mean: f64 = values.iter().zip(sigma).map(|(v, s)| v * s).sum();
        for k in 0..values.len() {
            let inst = values[k] - mean;
            let r = self.r[p][k];
            self.r[p][k] = if t == 0.0 {
                r + inst
            } else if r > 0.0 {
                r * t.powf(alpha) / (t.powf(alpha) + 1.0) + inst
            } else {
                r * t.powf(beta) / (t.powf(beta) + 1.0) + inst
            };
            let weight = if t == 0.0 { 1.0 } else { (t / (t + 1.0)).powf(gamma) };
            // Both members of each infoset are reached with own probability 1.
            let own_reach = 1.0;
            self.c[p][k] = self.c[p][k] * weight + own_reach * sigma[k];
        }
    }

    pub fn run(schedule: &ScheduleSet, n: u64, mode: UpdateMode) -> Self {
        let mut o = ToyOracle {
            r: [vec![0.0; 2], vec![0.0; 3]],
            c: [vec![0.0; 2], vec![0.0; 3]],
        };
        for t in 0..n {
            let h = schedule.eval(t, n).unwrap();
            let h = (h.alpha, h.beta, h.gamma);
            let tf = t as f64;
            match mode {
                UpdateMode::Alternating => {
                    let s0 = regret_matching(&o.r[0]);
                    let s1 = regret_matching(&o.r[1]);
                    let [v0, _] = Self::values(&s0, &s1);
                    o.update(0, &v0, &s0, tf, h);
                    let s0 = regret_matching(&o.r[0]);
                    let [_, v1] = Self::values(&s0, &s1);
                    o.update(1, &v1, &s1, tf, h);
                }
                UpdateMode::Simultaneous => {
                    let s0 = regret_matching(&o.r[0]);
                    let s1 = regret_matching(&o.r[1]);
                    let [v0, v1] = Self::values(&s0, &s1);
                    o.update(0, &v0, &s0, tf, h);
                    o.update(1, &v1, &s1, tf, h);
                }
            }
        }
        o
    }
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    v.iter().map(|x| x / s).collect()
}

/// Largest deviation between `n` iterations of the dcfr variant and the oracle,
/// over cumulative regrets, cumulative strategies and average strategies.
/// Regret and strategy entries are measured relative to `1 + |value|`.
pub fn max_deviation(schedule: &ScheduleSet, mode: UpdateMode, n: u64) -> f64 {
    let game = toy_game();
    assert_eq!(game.num_infosets(), 2);
    let oracle = ToyOracle::run(schedule, n, mode);
    let config = SolverConfig {
        variant: Variant::Dcfr,
        schedule: schedule.clone(),
        iterations: n,
        update_mode: mode,
        checkpoint_every: n,
        averaging: Averaging::Discounted,
    };
    let mut solver = Solver::new(&game, config).unwrap();
    for _ in 0..n {
        solver.step();
    }
    let state = solver.state();
    let average = solver.average_strategy();
    let mut worst = 0.0f64;
    for p in Player::BOTH {
        let id = game.infosets(p).ids().next().unwrap();
        let r = state.cum_regrets(&game, p, id);
        let c = state.cum_strategy(&game, p, id);
        // The solver sums own reach over the infoset's member histories.
        let members = game.infosets(p).members(id).len() as f64;
        let (or, oc) = (&oracle.r[p.index()], &oracle.c[p.index()]);
        for k in 0..r.len() {
            worst = worst.max((r[k] - or[k]).abs() / (1.0 + or[k].abs()));
            worst = worst.max((c[k] - members * oc[k]).abs() / (1.0 + c[k].abs()));
        }
        for (x, y) in average.get(p, id).iter().zip(normalized(oc)) {
            worst = worst.max((x - y).abs());
        }
    }
    worst
}
