use crate::game::{Expansion, GameDef, Player};
use std::fmt::Write;

const ROWS: u32 = 2;
const SHIP_VALUE: f64 = 2.0;

/// Battleship on a 2 x `width` grid with one 1x2 ship per player.
///
/// Player 0 places, then player 1 places without seeing it. Shots alternate
/// starting with player 0; shots and hit/miss results are public and a player
/// never repeats one of its own shots. The game ends when a ship sinks or when
/// both players have fired `shots` times. Payoff is the value of the sunk
/// opposing ship minus the value of one's own sunk ship.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Battleship {
    pub width: u32,
    pub shots: u32,
}

#[derive(Debug, Clone)]
pub struct BattleshipState {
    /// Occupied cells as bitmasks over `row * width + col`.
    ships: Vec<u32>,
    /// `(cell, hit)` in firing order; even entries are player 0's.
    fired: Vec<(u32, bool)>,
}

impl Battleship {
    fn placements(&self) -> Vec<(String, u32)> {
        let cell = |r: u32, c: u32| 1u32 << (r * self.width + c);
        let mut out = Vec::new();
        for r in 0..ROWS {
            for c in 0..self.width {
                if c + 1 < self.width {
                    out.push((format!("h{r}{c}"), cell(r, c) | cell(r, c + 1)));
                }
                if r + 1 < ROWS {
                    out.push((format!("v{r}{c}"), cell(r, c) | cell(r + 1, c)));
                }
            }
        }
        out
    }

    fn cell_label(&self, cell: u32) -> String {
        format!("r{}c{}", cell / self.width, cell % self.width)
    }

    fn sunk(&self, s: &BattleshipState, owner: usize) -> bool {
        let hits = s
            .fired
            .iter()
            .enumerate()
            .filter(|(i, _)| i % 2 != owner)
            .fold(0u32, |m, (_, &(c, _))| m | (1 << c));
        s.ships[owner] & !hits == 0
    }
}

impl GameDef for Battleship {
    type State = BattleshipState;

    fn name(&self) -> String {
        format!("battleship-{}", self.width)
    }

    fn root(&self) -> BattleshipState {
        BattleshipState {
            ships: Vec::new(),
            fired: Vec::new(),
        }
    }

    fn expand(&self, s: &BattleshipState) -> Expansion<BattleshipState> {
        if s.ships.len() < 2 {
            let player = Player::from_index(s.ships.len()).unwrap();
            let actions = self
                .placements()
                .into_iter()
                .map(|(label, mask)| {
                    let mut next = s.clone();
                    next.ships.push(mask);
                    (label.into(), next)
                })
                .collect();
            return Expansion::Decision {
                player,
                infoset: "place".into(),
                actions,
            };
        }
        let sunk = [self.sunk(s, 0), self.sunk(s, 1)];
        if sunk[0] || sunk[1] || s.fired.len() as u32 == 2 * self.shots {
            let v = |b: bool| if b { SHIP_VALUE } else { 0.0 };
            let u0 = v(sunk[1]) - v(sunk[0]);
            return Expansion::Terminal([u0, -u0]);
        }
        let player = Player::from_index(s.fired.len() % 2).unwrap();
        let own_shots = s
            .fired
            .iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == player.index())
            .fold(0u32, |m, (_, &(c, _))| m | (1 << c));
        let target = s.ships[player.opponent().index()];
        let actions = (0..ROWS * self.width)
            .filter(|c| own_shots & (1 << c) == 0)
            .map(|c| {
                let mut next = s.clone();
                next.fired.push((c, target & (1 << c) != 0));
                (self.cell_label(c).into(), next)
            })
            .collect();
        let mut infoset = format!("ship:{:b}|", s.ships[player.index()]);
        for &(c, hit) in &s.fired {
            let _ = write!(infoset, "{}{},", c, if hit { 'H' } else { 'M' });
        }
        Expansion::Decision {
            player,
            infoset,
            actions,
        }
    }
}
