use super::{InfoSetId, InfoSetTable, Label, Node, NodeId, Player, TreeGame};
use crate::error::{Error, Result};
use std::collections::HashMap;

const SUM_TOLERANCE: f64 = 1e-12;
/// Deeper generators are treated as non-terminating.
const MAX_DEPTH: usize = 4096;

/// Rules of a finite game, expanded state by state into a [`TreeGame`].
pub trait GameDef {
    type State;

    fn name(&self) -> String;

    fn root(&self) -> Self::State;

    fn expand(&self, state: &Self::State) -> Expansion<Self::State>;
}

/// What a state looks like to the tree builder.
pub enum Expansion<S> {
    Terminal([f64; 2]),
    /// `(label, probability, successor)` per outcome.
    Chance(Vec<(Label, f64, S)>),
    Decision {
        player: Player,
        /// Observation key; histories with equal keys share an information set.
        infoset: String,
        actions: Vec<(Label, S)>,
    },
}

#[derive(Debug, Clone)]
enum RawNode {
    Pending,
    Terminal([f64; 2]),
    Chance {
        start: usize,
        len: usize,
    },
    Decision {
        player: Player,
        key: u32,
        start: usize,
        len: usize,
    },
}

#[derive(Debug, Clone, Copy)]
struct RawEdge {
    child: u32,
    label: u32,
    prob: f64,
}

#[derive(Debug, Default)]
struct Interner {
    map: HashMap<String, u32>,
    items: Vec<String>,
}

impl Interner {
    fn intern(&mut self, s: &str) -> u32 {
        if let Some(&id) = self.map.get(s) {
            return id;
        }
        let id = self.items.len() as u32;
        self.items.push(s.to_owned());
        self.map.insert(s.to_owned(), id);
        id
    }
}

/// Explicit arena construction, children first.
///
/// ```
/// use hscfr::game::{Player, TreeBuilder};
/// let mut b = TreeBuilder::new("toy");
/// let win = b.terminal([1.0, -1.0]);
/// let lose = b.terminal([-1.0, 1.0]);
/// let root = b.decision(Player::P0, "root", [("a", win), ("b", lose)]);
/// let game = b.finish(root).unwrap();
/// assert_eq!(game.stats().leaves, 2);
/// ```
#[derive(Debug, Default)]
pub struct TreeBuilder {
    name: String,
    nodes: Vec<RawNode>,
    edges: Vec<RawEdge>,
    labels: Interner,
    keys: [Interner; 2],
}

impl TreeBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        TreeBuilder {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn terminal(&mut self, payoff: [f64; 2]) -> NodeId {
        self.push(RawNode::Terminal(payoff))
    }

    pub fn chance<'a>(&mut self, outcomes: impl IntoIterator<Item = (&'a str, f64, NodeId)>) -> NodeId {
        let start = self.edges.len();
        for (label, prob, child) in outcomes {
            let label = self.labels.intern(label);
            self.edges.push(RawEdge {
                child: child.0,
                label,
                prob,
            });
        }
        let len = self.edges.len() - start;
        self.push(RawNode::Chance { start, len })
    }

    pub fn decision<'a>(
        &mut self,
        player: Player,
        infoset: &str,
        actions: impl IntoIterator<Item = (&'a str, NodeId)>,
    ) -> NodeId {
        let key = self.keys[player.index()].intern(infoset);
        let start = self.edges.len();
        for (label, child) in actions {
            let label = self.labels.intern(label);
            self.edges.push(RawEdge {
                child: child.0,
                label,
                prob: f64::NAN,
            });
        }
        let len = self.edges.len() - start;
        self.push(RawNode::Decision {
            player,
            key,
            start,
            len,
        })
    }

    fn push(&mut self, node: RawNode) -> NodeId {
        self.nodes.push(node);
        NodeId(self.nodes.len() as u32 - 1)
    }

    /// Validates the arena reachable from `root` and re-indexes it in preorder.
    pub fn finish(self, root: NodeId) -> Result<TreeGame> {
        let TreeBuilder {
            name,
            nodes: raw,
            edges: raw_edges,
            labels,
            keys,
        } = self;
        let n = raw.len();
        if root.index() >= n {
            return Err(Error::structure(root.index(), "root does not exist"));
        }

        // Preorder walk; a node seen twice means a cycle or a shared subtree.
        let mut new_id = vec![u32::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut stack = vec![root.0];
        while let Some(id) = stack.pop() {
            let i = id as usize;
            if new_id[i] != u32::MAX {
                return Err(Error::structure(i, "node reached twice (cycle or shared subtree)"));
            }
            new_id[i] = order.len() as u32;
            order.push(id);
            let (start, len) = match raw[i] {
                RawNode::Pending => return Err(Error::structure(i, "node was never defined")),
                RawNode::Terminal(_) => (0, 0),
                RawNode::Chance { start, len } | RawNode::Decision { start, len, .. } => (start, len),
            };
            for e in raw_edges[start..start + len].iter().rev() {
                if e.child as usize >= n {
                    return Err(Error::structure(i, format!("child {} does not exist", e.child)));
                }
                stack.push(e.child);
            }
        }
        if order.len() != n {
            let orphan = new_id.iter().position(|&x| x == u32::MAX).unwrap_or(0);
            return Err(Error::structure(orphan, "node is unreachable from the root"));
        }

        let mut nodes = Vec::with_capacity(n);
        let mut children = Vec::with_capacity(raw_edges.len());
        let mut edge_labels = Vec::with_capacity(raw_edges.len());
        let mut edge_probs = Vec::with_capacity(raw_edges.len());
        let mut payoffs = Vec::new();
        let mut infosets: [InfoSetTable; 2] = Default::default();
        let mut key_to_infoset: [Vec<u32>; 2] =
            [vec![u32::MAX; keys[0].items.len()], vec![u32::MAX; keys[1].items.len()]];
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        let mut max_actions = 0usize;

        for &old in &order {
            let i = old as usize;
            let new_index = nodes.len() as u32;
            let edge_start = children.len() as u32;
            let node = match raw[i] {
                RawNode::Pending => unreachable!(),
                RawNode::Terminal(u) => {
                    if !u[0].is_finite() || !u[1].is_finite() {
                        return Err(Error::structure(i, "non-finite terminal utility"));
                    }
                    if (u[0] + u[1]).abs() > SUM_TOLERANCE {
                        return Err(Error::structure(i, format!("terminal is not zero-sum: {:?}", u)));
                    }
                    for p in 0..2 {
                        lo[p] = lo[p].min(u[p]);
                        hi[p] = hi[p].max(u[p]);
                    }
                    payoffs.push(u);
                    Node::Terminal {
                        payoff: payoffs.len() as u32 - 1,
                    }
                }
                RawNode::Chance { start, len } => {
                    if len == 0 {
                        return Err(Error::structure(i, "chance node without outcomes"));
                    }
                    let mut total = 0.0;
                    for e in &raw_edges[start..start + len] {
                        if !(0.0..=1.0).contains(&e.prob) {
                            return Err(Error::structure(
                                i,
                                format!("chance probability {} outside [0, 1]", e.prob),
                            ));
                        }
                        total += e.prob;
                    }
                    if (total - 1.0).abs() > SUM_TOLERANCE {
                        return Err(Error::structure(i, format!("chance probabilities sum to {total}")));
                    }
                    push_edges(
                        &raw_edges[start..start + len],
                        &new_id,
                        &mut children,
                        &mut edge_labels,
                        &mut edge_probs,
                    );
                    Node::Chance {
                        edges: edge_start,
                        len: len as u32,
                    }
                }
                RawNode::Decision {
                    player,
                    key,
                    start,
                    len,
                } => {
                    if len == 0 {
                        return Err(Error::structure(i, "decision node without actions"));
                    }
                    let p = player.index();
                    let table = &mut infosets[p];
                    let node_labels: Vec<u32> = raw_edges[start..start + len].iter().map(|e| e.label).collect();
                    let slot = &mut key_to_infoset[p][key as usize];
                    let infoset = if *slot == u32::MAX {
                        *slot = table.keys.len() as u32;
                        table.keys.push(keys[p].items[key as usize].clone());
                        table.action_counts.push(len as u32);
                        table.members.push(Vec::new());
                        table.labels.push(node_labels);
                        *slot
                    } else {
                        let existing = &table.labels[*slot as usize];
                        if *existing != node_labels {
                            return Err(Error::structure(
                                i,
                                format!(
                                    "actions differ from other members of information set {:?}",
                                    keys[p].items[key as usize]
                                ),
                            ));
                        }
                        *slot
                    };
                    table.members[infoset as usize].push(NodeId(new_index));
                    max_actions = max_actions.max(len);
                    push_edges(
                        &raw_edges[start..start + len],
                        &new_id,
                        &mut children,
                        &mut edge_labels,
                        &mut edge_probs,
                    );
                    Node::Decision {
                        player,
                        infoset: InfoSetId(infoset),
                        edges: edge_start,
                        len: len as u32,
                    }
                }
            };
            nodes.push(node);
        }

        for table in &mut infosets {
            let mut offsets = Vec::with_capacity(table.action_counts.len() + 1);
            let mut acc = 0usize;
            offsets.push(0);
            for &c in &table.action_counts {
                acc += c as usize;
                offsets.push(acc);
            }
            table.offsets = offsets;
        }

        let utility_range = [(hi[0] - lo[0]).max(0.0), (hi[1] - lo[1]).max(0.0)];

        Ok(TreeGame {
            name,
            nodes,
            children,
            edge_labels,
            edge_probs,
            labels: labels.items,
            payoffs,
            infosets,
            utility_range,
            max_actions,
        })
    }
}

fn push_edges(
    raw: &[RawEdge],
    new_id: &[u32],
    children: &mut Vec<NodeId>,
    labels: &mut Vec<u32>,
    probs: &mut Vec<f64>,
) {
    for e in raw {
        children.push(NodeId(new_id[e.child as usize]));
        labels.push(e.label);
        probs.push(e.prob);
    }
}

/// Materializes the full game tree described by `def`.
pub fn build_tree<G: GameDef>(def: &G) -> Result<TreeGame> {
    let mut builder = TreeBuilder::new(def.name());
    let root = expand_into(def, &mut builder, def.root(), 0)?;
    builder.finish(root)
}

fn expand_into<G: GameDef>(def: &G, b: &mut TreeBuilder, state: G::State, depth: usize) -> Result<NodeId> {
    if depth > MAX_DEPTH {
        return Err(Error::structure(
            b.nodes.len(),
            format!("depth exceeds {MAX_DEPTH}; the rules are cyclic or unbounded"),
        ));
    }
    let id = b.push(RawNode::Pending);
    let node = match def.expand(&state) {
        Expansion::Terminal(u) => RawNode::Terminal(u),
        Expansion::Chance(outcomes) => {
            let start = b.edges.len();
            let len = outcomes.len();
            for (label, prob, _) in &outcomes {
                let label = b.labels.intern(label);
                b.edges.push(RawEdge {
                    child: u32::MAX,
                    label,
                    prob: *prob,
                });
            }
            for (k, (_, _, next)) in outcomes.into_iter().enumerate() {
                let child = expand_into(def, b, next, depth + 1)?;
                b.edges[start + k].child = child.0;
            }
            RawNode::Chance { start, len }
        }
        Expansion::Decision {
            player,
            infoset,
            actions,
        } => {
            let key = b.keys[player.index()].intern(&infoset);
            let start = b.edges.len();
            let len = actions.len();
            for (label, _) in &actions {
                let label = b.labels.intern(label);
                b.edges.push(RawEdge {
                    child: u32::MAX,
                    label,
                    prob: f64::NAN,
                });
            }
            for (k, (_, next)) in actions.into_iter().enumerate() {
                let child = expand_into(def, b, next, depth + 1)?;
                b.edges[start + k].child = child.0;
            }
            RawNode::Decision {
                player,
                key,
                start,
                len,
            }
        }
    };
    b.nodes[id.index()] = node;
    Ok(id)
}
