//! Best responses, exploitability, theorem bounds and the OoM metric.

use crate::error::{Error, Result};
use crate::game::{InfoSetId, Node, NodeId, Player, StrategyProfile, TreeGame};

/// A pure best response and its value.
#[derive(Debug, Clone)]
pub struct BestResponse {
    pub player: Player,
    pub value: f64,
    /// Chosen action index per information set of `player`.
    pub actions: Vec<usize>,
    /// The input profile with `player`'s part replaced by the best response.
    pub profile: StrategyProfile,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Choice {
    Open,
    Pending,
    Done(usize),
}

struct Expectimax<'a> {
    game: &'a TreeGame,
    profile: &'a StrategyProfile,
    player: Player,
    /// Opponent-and-chance reach of each node.
    others: Vec<f64>,
    values: Vec<f64>,
    choices: Vec<Choice>,
}

impl Expectimax<'_> {
    fn value(&mut self, node: NodeId) -> Result<f64> {
        let cached = self.values[node.index()];
        if !cached.is_nan() {
            return Ok(cached);
        }
        let game = self.game;
        let v = match *game.node(node) {
            Node::Terminal { .. } => game.payoff(node).unwrap()[self.player.index()],
            Node::Chance { .. } => {
                let mut v = 0.0;
                for (&c, &p) in game.children(node).iter().zip(game.chance_probs(node)) {
                    v += p * self.value(c)?;
                }
                v
            }
            Node::Decision { player, infoset, .. } if player == self.player => {
                let a = self.choose(infoset)?;
                self.value(game.children(node)[a])?
            }
            Node::Decision { player, infoset, .. } => {
                let mut v = 0.0;
                for (&c, &p) in game.children(node).iter().zip(self.profile.get(player, infoset)) {
                    if p != 0.0 {
                        v += p * self.value(c)?;
                    }
                }
                v
            }
        };
        self.values[node.index()] = v;
        Ok(v)
    }

    fn choose(&mut self, id: InfoSetId) -> Result<usize> {
        match self.choices[id.index()] {
            Choice::Done(a) => return Ok(a),
            Choice::Pending => {
                return Err(Error::Structure {
                    node: self.game.infosets(self.player).members(id)[0].index(),
                    reason: "information set is its own descendant; best response undefined".into(),
                })
            }
            Choice::Open => {}
        }
        self.choices[id.index()] = Choice::Pending;
        let game = self.game;
        let table = game.infosets(self.player);
        let mut totals = vec![0.0; table.action_count(id)];
        for &h in table.members(id) {
            let w = self.others[h.index()];
            for (k, &c) in game.children(h).iter().enumerate() {
                totals[k] += w * self.value(c)?;
            }
        }
        let mut best = 0;
        for (k, &t) in totals.iter().enumerate().skip(1) {
            if t > totals[best] {
                best = k;
            }
        }
        self.choices[id.index()] = Choice::Done(best);
        Ok(best)
    }
}

/// Best response of `player` to the opponent's part of `profile`.
///
/// Information sets are decided by maximizing the opponent-and-chance reach
/// weighted continuation value over their member histories; ties go to the
/// lowest action index.
pub fn best_response(game: &TreeGame, profile: &StrategyProfile, player: Player) -> Result<BestResponse> {
    let reach = game.reach_probabilities(profile)?;
    let table = game.infosets(player);
    let mut search = Expectimax {
        game,
        profile,
        player,
        others: reach.iter().map(|r| r.others(player)).collect(),
        values: vec![f64::NAN; game.num_nodes()],
        choices: vec![Choice::Open; table.len()],
    };
    let value = search.value(game.root())?;
    let mut actions = Vec::with_capacity(table.len());
    let mut response = profile.clone();
    for id in table.ids() {
        let a = search.choose(id)?;
        actions.push(a);
        let sigma = response.get_mut(player, id);
        sigma.fill(0.0);
        sigma[a] = 1.0;
    }
    Ok(BestResponse {
        player,
        value,
        actions,
        profile: response,
    })
}

/// Value of `player`'s best response to `profile`.
pub fn best_response_value(game: &TreeGame, profile: &StrategyProfile, player: Player) -> Result<f64> {
    best_response(game, profile, player).map(|br| br.value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExploitabilityReport {
    /// `u_i(BR(σ_-i), σ_-i)` for each player `i`.
    pub best_response: [f64; 2],
    /// How much the opponent of `i` gains by best responding to `σ_i`.
    pub player_exploitability: [f64; 2],
    pub exploitability: f64,
}

pub fn exploitability(game: &TreeGame, profile: &StrategyProfile) -> Result<ExploitabilityReport> {
    let br = [
        best_response_value(game, profile, Player::P0)?,
        best_response_value(game, profile, Player::P1)?,
    ];
    let on_path = game.expected_value(profile)?;
    Ok(ExploitabilityReport {
        best_response: br,
        player_exploitability: [br[1] - on_path[1], br[0] - on_path[0]],
        exploitability: (br[0] + br[1]) / 2.0,
    })
}

/// Inputs of the convergence-rate bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInput {
    pub delta: f64,
    pub infosets: usize,
    pub max_actions: usize,
    /// Upper bound on the averaging exponent γ over the run.
    pub gamma_upper: f64,
    pub iterations: u64,
}

impl BoundInput {
    pub fn for_game(game: &TreeGame, gamma_upper: f64, iterations: u64) -> Self {
        BoundInput {
            delta: game.delta(),
            infosets: game.num_infosets(),
            max_actions: game.max_actions(),
            gamma_upper,
            iterations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    HsDcfr,
    HsPcfrPlus,
}

impl std::str::FromStr for BoundKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hs_dcfr" => Ok(BoundKind::HsDcfr),
            "hs_pcfr_plus" => Ok(BoundKind::HsPcfrPlus),
            other => Err(Error::config(format!(
                "unknown bound {other:?} (expected hs_dcfr or hs_pcfr_plus)"
            ))),
        }
    }
}

/// Exploitability bound after `iterations` simultaneous iterations.
///
/// `HsDcfr` gives `(U+1) Δ |I| (8/3 sqrt|A| + 2/sqrt T) / sqrt T`. `HsPcfrPlus`
/// gives `(U+1) |I| K / sqrt T`, where only the order of `K` is known.
pub fn theorem_bound(input: &BoundInput, kind: BoundKind, k: f64) -> f64 {
    let sqrt_t = (input.iterations as f64).sqrt();
    let scale = (input.gamma_upper + 1.0) * input.infosets as f64;
    match kind {
        BoundKind::HsDcfr => {
            scale * input.delta * (8.0 / 3.0 * (input.max_actions as f64).sqrt() + 2.0 / sqrt_t) / sqrt_t
        }
        BoundKind::HsPcfrPlus => scale * k / sqrt_t,
    }
}

/// Orders of magnitude by which `candidate` improves on `baseline`.
pub fn oom(baseline: f64, candidate: f64) -> Result<f64> {
    if !(baseline > 0.0 && candidate > 0.0) || !baseline.is_finite() || !candidate.is_finite() {
        return Err(Error::Domain(format!(
            "OoM needs positive finite exploitabilities, got {baseline} and {candidate}"
        )));
    }
    Ok((baseline / candidate).log10())
}
