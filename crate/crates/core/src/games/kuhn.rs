use crate::game::{Expansion, GameDef, Player};

const CARDS: [&str; 3] = ["J", "Q", "K"];

/// Kuhn poker: three cards, one ante each, one betting round with a one-chip bet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Kuhn;

#[derive(Debug, Clone)]
pub struct KuhnState {
    cards: Vec<u8>,
    /// `p` for pass (check/fold), `b` for bet (bet/call).
    history: String,
}

impl GameDef for Kuhn {
    type State = KuhnState;

    fn name(&self) -> String {
        "kuhn".into()
    }

    fn root(&self) -> KuhnState {
        KuhnState {
            cards: Vec::new(),
            history: String::new(),
        }
    }

    fn expand(&self, s: &KuhnState) -> Expansion<KuhnState> {
        if s.cards.len() < 2 {
            let remaining: Vec<u8> = (0..3).filter(|c| !s.cards.contains(c)).collect();
            let p = 1.0 / remaining.len() as f64;
            return Expansion::Chance(
                remaining
                    .into_iter()
                    .map(|c| {
                        let mut next = s.clone();
                        next.cards.push(c);
                        (CARDS[c as usize].into(), p, next)
                    })
                    .collect(),
            );
        }
        let showdown = |stake: f64| {
            let sign = if s.cards[0] > s.cards[1] { 1.0 } else { -1.0 };
            Expansion::Terminal([sign * stake, -sign * stake])
        };
        match s.history.as_str() {
            "pp" => return showdown(1.0),
            "bb" | "pbb" => return showdown(2.0),
            "bp" => return Expansion::Terminal([1.0, -1.0]),
            "pbp" => return Expansion::Terminal([-1.0, 1.0]),
            _ => {}
        }
        let player = Player::from_index(s.history.len() % 2).unwrap();
        let card = CARDS[s.cards[player.index()] as usize];
        Expansion::Decision {
            player,
            infoset: format!("{card}{}", s.history),
            actions: ["p", "b"]
                .into_iter()
                .map(|a| {
                    let mut next = s.clone();
                    next.history.push_str(a);
                    (a.into(), next)
                })
                .collect(),
        }
    }
}
