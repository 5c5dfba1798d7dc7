use crate::game::{Expansion, GameDef, Player};

/// Liar's dice with one `faces`-sided die per player.
///
/// A bid `(p, q)` claims at least `p` of the two dice show `q`. Bids are ordered
/// by quantity first, then face. With `wild_high_face` the highest face also
/// counts toward every other face at the showdown.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LiarsDice {
    pub faces: u32,
    pub wild_high_face: bool,
}

const DICE: u32 = 2;

#[derive(Debug, Clone)]
pub struct LiarsDiceState {
    dice: Vec<u32>,
    bids: Vec<u32>,
    called: bool,
}

impl LiarsDice {
    fn num_bids(&self) -> u32 {
        DICE * self.faces
    }

    /// `(quantity, face)` of a bid index.
    fn bid(&self, index: u32) -> (u32, u32) {
        (index / self.faces + 1, index % self.faces + 1)
    }

    fn bid_holds(&self, dice: &[u32], index: u32) -> bool {
        let (quantity, face) = self.bid(index);
        let count = dice
            .iter()
            .filter(|&&d| d == face || (self.wild_high_face && d == self.faces))
            .count() as u32;
        count >= quantity
    }
}

impl GameDef for LiarsDice {
    type State = LiarsDiceState;

    fn name(&self) -> String {
        format!("liars_dice-{}", self.faces)
    }

    fn root(&self) -> LiarsDiceState {
        LiarsDiceState {
            dice: Vec::new(),
            bids: Vec::new(),
            called: false,
        }
    }

    fn expand(&self, s: &LiarsDiceState) -> Expansion<LiarsDiceState> {
        if s.dice.len() < DICE as usize {
            let p = 1.0 / self.faces as f64;
            return Expansion::Chance(
                (1..=self.faces)
                    .map(|f| {
                        let mut next = s.clone();
                        next.dice.push(f);
                        (f.to_string().into(), p, next)
                    })
                    .collect(),
            );
        }
        let last = s.bids.last().copied();
        if s.called {
            // The bidder is whoever made the last bid; the caller moved after them.
            let bidder = (s.bids.len() - 1) % 2;
            let holds = self.bid_holds(&s.dice, last.unwrap());
            let winner = if holds { bidder } else { 1 - bidder };
            let mut u = [-1.0, -1.0];
            u[winner] = 1.0;
            return Expansion::Terminal(u);
        }
        let player = Player::from_index(s.bids.len() % 2).unwrap();
        let first = last.map_or(0, |b| b + 1);
        let mut actions: Vec<_> = (first..self.num_bids())
            .map(|b| {
                let mut next = s.clone();
                next.bids.push(b);
                let (q, f) = self.bid(b);
                (format!("{q}-{f}").into(), next)
            })
            .collect();
        if last.is_some() {
            let mut next = s.clone();
            next.called = true;
            actions.push(("liar".into(), next));
        }
        let bids: Vec<String> = s.bids.iter().map(|b| b.to_string()).collect();
        Expansion::Decision {
            player,
            infoset: format!("d{}|{}", s.dice[player.index()], bids.join(",")),
            actions,
        }
    }
}
