//! Finite two-player zero-sum extensive-form games with chance.
//!
//! A [`TreeGame`] is a fully materialized, immutable arena. Nodes are stored in
//! depth-first preorder with the root at index 0, so every parent precedes its
//! children. Information-set ids are assigned per player in the order the
//! preorder walk first meets them, which keeps solver arrays aligned across runs.

mod build;
mod profile;

pub use build::{build_tree, Expansion, GameDef, TreeBuilder};
pub use profile::StrategyProfile;

use crate::error::Result;
use std::borrow::Cow;
use std::fmt;

/// One of the two acting players. Chance is represented by [`Node::Chance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    P0,
    P1,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::P0, Player::P1];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn opponent(self) -> Player {
        match self {
            Player::P0 => Player::P1,
            Player::P1 => Player::P0,
        }
    }

    pub fn from_index(i: usize) -> Option<Player> {
        match i {
            0 => Some(Player::P0),
            1 => Some(Player::P1),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.index())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub(crate) u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Index into one player's information-set table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfoSetId(pub(crate) u32);

impl InfoSetId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A node of the arena. Outgoing edges live in a contiguous range of the
/// game's edge table starting at `edges`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Node {
    Terminal {
        payoff: u32,
    },
    Chance {
        edges: u32,
        len: u32,
    },
    Decision {
        player: Player,
        infoset: InfoSetId,
        edges: u32,
        len: u32,
    },
}

impl Node {
    #[inline]
    fn edge_range(&self) -> std::ops::Range<usize> {
        match *self {
            Node::Terminal { .. } => 0..0,
            Node::Chance { edges, len } | Node::Decision { edges, len, .. } => edges as usize..(edges + len) as usize,
        }
    }
}

/// Per-player information-set table.
#[derive(Debug, Clone, Default)]
pub struct InfoSetTable {
    keys: Vec<String>,
    action_counts: Vec<u32>,
    /// Prefix sums of `action_counts`; `offsets[i]..offsets[i + 1]` addresses
    /// infoset `i` in flat per-action arrays.
    offsets: Vec<usize>,
    members: Vec<Vec<NodeId>>,
    labels: Vec<Vec<u32>>,
}

impl InfoSetTable {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn key(&self, id: InfoSetId) -> &str {
        &self.keys[id.index()]
    }

    pub fn action_count(&self, id: InfoSetId) -> usize {
        self.action_counts[id.index()] as usize
    }

    pub fn members(&self, id: InfoSetId) -> &[NodeId] {
        &self.members[id.index()]
    }

    /// Range of infoset `id` in a flat per-action array.
    #[inline]
    pub fn span(&self, id: InfoSetId) -> std::ops::Range<usize> {
        self.offsets[id.index()]..self.offsets[id.index() + 1]
    }

    /// Total number of (infoset, action) pairs.
    pub fn total_actions(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    pub fn ids(&self) -> impl Iterator<Item = InfoSetId> + '_ {
        (0..self.keys.len() as u32).map(InfoSetId)
    }

    pub fn find(&self, key: &str) -> Option<InfoSetId> {
        self.keys.iter().position(|k| k == key).map(|i| InfoSetId(i as u32))
    }
}

/// Size measurements of a game tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameStats {
    /// All nodes, including chance nodes and terminals.
    pub histories: usize,
    /// Information sets summed over both players.
    pub infosets: usize,
    pub leaves: usize,
}

impl fmt::Display for GameStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.histories, self.infosets, self.leaves)
    }
}

/// Reach probability of a node split into each player's and chance's contribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reach {
    pub players: [f64; 2],
    pub chance: f64,
}

impl Reach {
    pub fn total(&self) -> f64 {
        self.players[0] * self.players[1] * self.chance
    }

    /// Reach of everyone except `player`, chance included.
    pub fn others(&self, player: Player) -> f64 {
        self.players[player.opponent().index()] * self.chance
    }
}

/// Immutable, validated extensive-form game.
#[derive(Debug, Clone)]
pub struct TreeGame {
    name: String,
    nodes: Vec<Node>,
    children: Vec<NodeId>,
    edge_labels: Vec<u32>,
    edge_probs: Vec<f64>,
    labels: Vec<String>,
    payoffs: Vec<[f64; 2]>,
    infosets: [InfoSetTable; 2],
    utility_range: [f64; 2],
    max_actions: usize,
}

impl TreeGame {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> + '_ {
        self.nodes.iter().enumerate().map(|(i, n)| (NodeId(i as u32), n))
    }

    #[inline]
    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.children[self.nodes[id.index()].edge_range()]
    }

    /// Outcome probabilities of a chance node, aligned with [`children`](Self::children).
    #[inline]
    pub fn chance_probs(&self, id: NodeId) -> &[f64] {
        &self.edge_probs[self.nodes[id.index()].edge_range()]
    }

    pub fn action_labels(&self, id: NodeId) -> Vec<&str> {
        self.edge_labels[self.nodes[id.index()].edge_range()]
            .iter()
            .map(|&l| self.labels[l as usize].as_str())
            .collect()
    }

    #[inline]
    pub fn payoff(&self, id: NodeId) -> Option<[f64; 2]> {
        match self.nodes[id.index()] {
            Node::Terminal { payoff } => Some(self.payoffs[payoff as usize]),
            _ => None,
        }
    }

    #[inline]
    pub fn infosets(&self, player: Player) -> &InfoSetTable {
        &self.infosets[player.index()]
    }

    pub fn infoset_action_labels(&self, player: Player, id: InfoSetId) -> Vec<&str> {
        self.infosets[player.index()].labels[id.index()]
            .iter()
            .map(|&l| self.labels[l as usize].as_str())
            .collect()
    }

    /// Infoset key qualified by the acting player, unique across the whole game.
    pub fn qualified_key(&self, player: Player, id: InfoSetId) -> String {
        format!("{}/{}", player, self.infosets(player).key(id))
    }

    pub fn num_infosets(&self) -> usize {
        self.infosets[0].len() + self.infosets[1].len()
    }

    /// Range of terminal utilities per player.
    pub fn utility_range(&self) -> [f64; 2] {
        self.utility_range
    }

    /// Largest per-player utility range.
    pub fn delta(&self) -> f64 {
        self.utility_range[0].max(self.utility_range[1])
    }

    pub fn max_actions(&self) -> usize {
        self.max_actions
    }

    pub fn stats(&self) -> GameStats {
        GameStats {
            histories: self.nodes.len(),
            infosets: self.num_infosets(),
            leaves: self.payoffs.len(),
        }
    }

    /// Per-node reach probabilities under `profile`, indexed by node.
    pub fn reach_probabilities(&self, profile: &StrategyProfile) -> Result<Vec<Reach>> {
        profile.check_shape(self)?;
        let mut reach = vec![
            Reach {
                players: [0.0; 2],
                chance: 0.0
            };
            self.nodes.len()
        ];
        reach[0] = Reach {
            players: [1.0; 2],
            chance: 1.0,
        };
        // Preorder: each parent is finalized before its children are visited.
        for (i, node) in self.nodes.iter().enumerate() {
            let here = reach[i];
            match *node {
                Node::Terminal { .. } => {}
                Node::Chance { .. } => {
                    let id = NodeId(i as u32);
                    for (&c, &p) in self.children(id).iter().zip(self.chance_probs(id)) {
                        let mut r = here;
                        r.chance *= p;
                        reach[c.index()] = r;
                    }
                }
                Node::Decision { player, infoset, .. } => {
                    let sigma = profile.get(player, infoset);
                    for (&c, &p) in self.children(NodeId(i as u32)).iter().zip(sigma) {
                        let mut r = here;
                        r.players[player.index()] *= p;
                        reach[c.index()] = r;
                    }
                }
            }
        }
        Ok(reach)
    }

    /// Expected payoff vector of `profile`.
    pub fn expected_value(&self, profile: &StrategyProfile) -> Result<[f64; 2]> {
        profile.check_shape(self)?;
        let mut value = vec![[0.0f64; 2]; self.nodes.len()];
        // Reverse preorder visits children before parents.
        for i in (0..self.nodes.len()).rev() {
            let id = NodeId(i as u32);
            value[i] = match *self.node(id) {
                Node::Terminal { payoff } => self.payoffs[payoff as usize],
                Node::Chance { .. } => weighted_sum(&value, self.children(id), self.chance_probs(id)),
                Node::Decision { player, infoset, .. } => {
                    weighted_sum(&value, self.children(id), profile.get(player, infoset))
                }
            };
        }
        Ok(value[0])
    }
}

fn weighted_sum(values: &[[f64; 2]], children: &[NodeId], weights: &[f64]) -> [f64; 2] {
    let mut acc = [0.0; 2];
    for (&c, &w) in children.iter().zip(weights) {
        let v = values[c.index()];
        acc[0] += w * v[0];
        acc[1] += w * v[1];
    }
    acc
}

pub(crate) type Label = Cow<'static, str>;
