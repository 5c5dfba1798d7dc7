use crate::game::{Expansion, GameDef, Player};
use std::fmt::Write;

/// Goofspiel with `cards` bid cards per player and a point deck played from
/// highest to lowest. The last round is forced and resolved at the terminal.
/// The winner by total points gets +1.
///
/// In the full-information game an information set is the public state: both
/// remaining hands, the round and the point totals. Histories that reach the
/// same public state through different bid orders are merged; their
/// continuation games are identical. In the limited-information variant a
/// player sees only its own bids and the win/loss/tie outcome of each round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Goofspiel {
    pub cards: u32,
    pub limited_info: bool,
}

#[derive(Debug, Clone)]
pub struct GoofspielState {
    hands: [u32; 2],
    points: [u32; 2],
    round: u32,
    pending: Option<u32>,
    /// `(bid of P0, bid of P1)` per completed round.
    bids: Vec<(u32, u32)>,
}

impl Goofspiel {
    fn point_card(&self, round: u32) -> u32 {
        self.cards - round
    }

    fn score(&self, mut points: [u32; 2], round: u32, a: u32, b: u32) -> [u32; 2] {
        let card = self.point_card(round);
        match a.cmp(&b) {
            std::cmp::Ordering::Greater => points[0] += card,
            std::cmp::Ordering::Less => points[1] += card,
            std::cmp::Ordering::Equal => {}
        }
        points
    }

    fn infoset(&self, s: &GoofspielState, player: Player) -> String {
        let mut key = String::new();
        if self.limited_info {
            key.push_str("bids:");
            for &(a, b) in &s.bids {
                let own = if player == Player::P0 { a } else { b };
                let outcome = match a.cmp(&b) {
                    std::cmp::Ordering::Greater => 'W',
                    std::cmp::Ordering::Less => 'L',
                    std::cmp::Ordering::Equal => 'T',
                };
                // Outcome from player 0's side; both players learn the same fact.
                let _ = write!(key, "{own}{outcome},");
            }
        } else {
            // Player 1 moves before player 0's pending bid is revealed.
            let h0 = s.hands[0] | s.pending.map_or(0, |c| 1 << c);
            let _ = write!(
                key,
                "r{}|h0:{:b}|h1:{:b}|pts:{},{}",
                s.round, h0, s.hands[1], s.points[0], s.points[1]
            );
        }
        key
    }
}

fn cards_in(hand: u32) -> impl Iterator<Item = u32> {
    (1..=31).filter(move |c| hand & (1 << c) != 0)
}

impl GameDef for Goofspiel {
    type State = GoofspielState;

    fn name(&self) -> String {
        if self.limited_info {
            format!("goofspiel_li-{}", self.cards)
        } else {
            format!("goofspiel-{}", self.cards)
        }
    }

    fn root(&self) -> GoofspielState {
        let full = (1..=self.cards).fold(0, |h, c| h | (1 << c));
        GoofspielState {
            hands: [full, full],
            points: [0, 0],
            round: 0,
            pending: None,
            bids: Vec::new(),
        }
    }

    fn expand(&self, s: &GoofspielState) -> Expansion<GoofspielState> {
        if s.pending.is_none() && s.hands[0].count_ones() == 1 {
            let a = s.hands[0].trailing_zeros();
            let b = s.hands[1].trailing_zeros();
            let pts = self.score(s.points, s.round, a, b);
            let u = match pts[0].cmp(&pts[1]) {
                std::cmp::Ordering::Greater => 1.0,
                std::cmp::Ordering::Less => -1.0,
                std::cmp::Ordering::Equal => 0.0,
            };
            return Expansion::Terminal([u, -u]);
        }
        let player = if s.pending.is_none() { Player::P0 } else { Player::P1 };
        let actions = cards_in(s.hands[player.index()])
            .map(|c| {
                let mut next = s.clone();
                next.hands[player.index()] &= !(1 << c);
                match s.pending {
                    None => next.pending = Some(c),
                    Some(a) => {
                        next.points = self.score(s.points, s.round, a, c);
                        next.bids.push((a, c));
                        next.round += 1;
                        next.pending = None;
                    }
                }
                (c.to_string().into(), next)
            })
            .collect();
        Expansion::Decision {
            player,
            infoset: self.infoset(s, player),
            actions,
        }
    }
}
