//! A standalone Kuhn model: J < Q < K, actions `p`/`b`.

use hscfr::game::{Player, StrategyProfile, TreeGame};
use std::collections::HashMap;

pub type Strategy = HashMap<String, f64>;

pub const P0_KEYS: [&str; 6] = ["J", "Q", "K", "Jpb", "Qpb", "Kpb"];
pub const P1_KEYS: [&str; 6] = ["Jp", "Qp", "Kp", "Jb", "Qb", "Kb"];

fn payoff(c0: usize, c1: usize, h: &str) -> Option<f64> {
    let sign = if c0 > c1 { 1.0 } else { -1.0 };
    match h {
        "pp" => Some(sign),
        "bb" | "pbb" => Some(2.0 * sign),
        "bp" => Some(1.0),
        "pbp" => Some(-1.0),
        _ => None,
    }
}

/// Expected payoff to player 0 given each player's probability of `b` per infoset.
pub fn value(bet0: &Strategy, bet1: &Strategy) -> f64 {
    fn go(c: [usize; 2], h: &str, s: [&Strategy; 2]) -> f64 {
        if let Some(u) = payoff(c[0], c[1], h) {
            return u;
        }
        let p = h.len() % 2;
        let key = format!("{}{h}", ["J", "Q", "K"][c[p]]);
        let b = s[p][&key];
        (1.0 - b) * go(c, &format!("{h}p"), s) + b * go(c, &format!("{h}b"), s)
    }
    let mut total = 0.0;
    for c0 in 0..3 {
        for c1 in 0..3 {
            if c0 != c1 {
                total += go([c0, c1], "", [bet0, bet1]) / 6.0;
            }
        }
    }
    total
}

pub fn pure(keys: &[&str], mask: u32) -> Strategy {
    keys.iter()
        .enumerate()
        .map(|(i, k)| (k.to_string(), ((mask >> i) & 1) as f64))
        .collect()
}

/// Best-response values of both players by enumerating all 64 pure strategies.
pub fn best_responses(bet0: &Strategy, bet1: &Strategy) -> [f64; 2] {
    let br0 = (0..64)
        .map(|m| value(&pure(&P0_KEYS, m), bet1))
        .fold(f64::MIN, f64::max);
    let br1 = (0..64)
        .map(|m| -value(bet0, &pure(&P1_KEYS, m)))
        .fold(f64::MIN, f64::max);
    [br0, br1]
}

/// Equilibrium family with bluffing parameter `a` in [0, 1/3].
pub fn equilibrium(a: f64) -> (Strategy, Strategy) {
    let s0 = [
        ("J", a),
        ("Q", 0.0),
        ("K", 3.0 * a),
        ("Jpb", 0.0),
        ("Qpb", a + 1.0 / 3.0),
        ("Kpb", 1.0),
    ];
    let s1 = [
        ("Jp", 1.0 / 3.0),
        ("Qp", 0.0),
        ("Kp", 1.0),
        ("Jb", 0.0),
        ("Qb", 1.0 / 3.0),
        ("Kb", 1.0),
    ];
    let conv = |s: &[(&str, f64)]| s.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    (conv(&s0), conv(&s1))
}

/// Tree profile that bets with the given probabilities.
pub fn profile(game: &TreeGame, bet0: &Strategy, bet1: &Strategy) -> StrategyProfile {
    let mut profile = StrategyProfile::uniform(game);
    for (p, strat) in [(Player::P0, bet0), (Player::P1, bet1)] {
        for (key, &b) in strat {
            let id = game.infosets(p).find(key).unwrap();
            profile.set(p, id, &[1.0 - b, b]);
        }
    }
    profile
}

/// Hand-specified profiles: uniform, two equilibria, an irregular mix and a pure pair.
pub fn cases() -> Vec<(Strategy, Strategy)> {
    let half = |keys: &[&str]| keys.iter().map(|k| (k.to_string(), 0.5)).collect::<Strategy>();
    let skew = |keys: &[&str], seed: f64| {
        keys.iter()
            .enumerate()
            .map(|(i, k)| (k.to_string(), ((i as f64 + 1.0) * seed).fract()))
            .collect::<Strategy>()
    };
    vec![
        (half(&P0_KEYS), half(&P1_KEYS)),
        equilibrium(0.0),
        equilibrium(1.0 / 6.0),
        (skew(&P0_KEYS, 0.37), skew(&P1_KEYS, 0.61)),
        (pure(&P0_KEYS, 0b101010), pure(&P1_KEYS, 0b010011)),
    ]
}
