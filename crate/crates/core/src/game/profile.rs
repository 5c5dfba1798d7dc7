use super::{InfoSetId, Player, TreeGame};
use crate::error::{Error, Result};
use std::collections::BTreeMap;

/// Behavioral strategy for both players: one distribution per information set,
/// stored flat per player with the layout of the game's [`InfoSetTable`](super::InfoSetTable).
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile {
    offsets: [Vec<usize>; 2],
    probs: [Vec<f64>; 2],
}

impl StrategyProfile {
    /// Uniform play at every information set.
    pub fn uniform(game: &TreeGame) -> Self {
        let mut probs: [Vec<f64>; 2] = Default::default();
        for p in Player::BOTH {
            let table = game.infosets(p);
            let mut v = vec![0.0; table.total_actions()];
            for id in table.ids() {
                let span = table.span(id);
                let u = 1.0 / span.len() as f64;
                v[span].fill(u);
            }
            probs[p.index()] = v;
        }
        StrategyProfile {
            offsets: [
                game.infosets(Player::P0).offsets().to_vec(),
                game.infosets(Player::P1).offsets().to_vec(),
            ],
            probs,
        }
    }

    /// Builds a profile from flat per-player arrays laid out like the game's tables.
    pub fn from_flat(game: &TreeGame, probs: [Vec<f64>; 2]) -> Result<Self> {
        let profile = StrategyProfile {
            offsets: [
                game.infosets(Player::P0).offsets().to_vec(),
                game.infosets(Player::P1).offsets().to_vec(),
            ],
            probs,
        };
        profile.check_shape(game)?;
        Ok(profile)
    }

    #[inline]
    pub fn get(&self, player: Player, id: InfoSetId) -> &[f64] {
        let o = &self.offsets[player.index()];
        &self.probs[player.index()][o[id.index()]..o[id.index() + 1]]
    }

    pub fn get_mut(&mut self, player: Player, id: InfoSetId) -> &mut [f64] {
        let o = &self.offsets[player.index()];
        &mut self.probs[player.index()][o[id.index()]..o[id.index() + 1]]
    }

    pub fn set(&mut self, player: Player, id: InfoSetId, dist: &[f64]) {
        self.get_mut(player, id).copy_from_slice(dist);
    }

    pub fn flat(&self, player: Player) -> &[f64] {
        &self.probs[player.index()]
    }

    pub fn num_infosets(&self, player: Player) -> usize {
        self.offsets[player.index()].len().saturating_sub(1)
    }

    pub(crate) fn check_shape(&self, game: &TreeGame) -> Result<()> {
        for p in Player::BOTH {
            let expected = game.infosets(p).offsets();
            let have = &self.offsets[p.index()];
            if have.as_slice() != expected || self.probs[p.index()].len() != game.infosets(p).total_actions() {
                let covered = have.len().saturating_sub(1);
                return Err(Error::Coverage {
                    what: format!(
                        "{} information sets of {} (profile has {}, game has {})",
                        game.name(),
                        p,
                        covered,
                        game.infosets(p).len()
                    ),
                });
            }
        }
        Ok(())
    }

    /// Checks shape plus that every vector is a distribution within 1e-9.
    pub fn validate(&self, game: &TreeGame) -> Result<()> {
        self.check_shape(game)?;
        for p in Player::BOTH {
            for id in game.infosets(p).ids() {
                let d = self.get(p, id);
                let sum: f64 = d.iter().sum();
                if d.iter().any(|&x| x.is_nan() || x < 0.0) || (sum - 1.0).abs() > 1e-9 {
                    return Err(Error::Domain(format!(
                        "{} is not a distribution: {:?}",
                        game.qualified_key(p, id),
                        d
                    )));
                }
            }
        }
        Ok(())
    }

    /// JSON object mapping qualified infoset keys to probability vectors.
    pub fn to_json(&self, game: &TreeGame) -> String {
        let mut map = BTreeMap::new();
        for p in Player::BOTH {
            for id in game.infosets(p).ids() {
                map.insert(game.qualified_key(p, id), self.get(p, id).to_vec());
            }
        }
        serde_json::to_string_pretty(&map).expect("maps of floats always serialize")
    }

    pub fn from_json(game: &TreeGame, text: &str) -> Result<Self> {
        let mut map: BTreeMap<String, Vec<f64>> =
            serde_json::from_str(text).map_err(|e| Error::config(format!("cannot parse strategy profile: {e}")))?;
        let mut profile = StrategyProfile::uniform(game);
        for p in Player::BOTH {
            for id in game.infosets(p).ids() {
                let key = game.qualified_key(p, id);
                let dist = map.remove(&key).ok_or_else(|| Error::Coverage {
                    what: format!("information set {key}"),
                })?;
                if dist.len() != game.infosets(p).action_count(id) {
                    return Err(Error::Coverage {
                        what: format!(
                            "all actions of {key} (expected {}, got {})",
                            game.infosets(p).action_count(id),
                            dist.len()
                        ),
                    });
                }
                profile.set(p, id, &dist);
            }
        }
        if let Some(extra) = map.keys().next() {
            return Err(Error::config(format!("profile names unknown information set {extra}")));
        }
        profile.validate(game)?;
        Ok(profile)
    }
}
