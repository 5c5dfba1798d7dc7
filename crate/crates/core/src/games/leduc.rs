use crate::game::{Expansion, GameDef, Player};

/// Leduc-style hold'em: one private card each, one public card, two betting rounds.
///
/// Cards are identified by `(rank, suit)`; information sets distinguish suits.
/// Folding is only available when facing a bet. The raise cap counts raises by
/// both players within a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Leduc {
    pub ranks: u8,
    pub suits: u8,
    pub max_raises: u8,
    /// Raise size in the first and second round.
    pub raise_sizes: [u32; 2],
}

impl Leduc {
    pub fn standard() -> Self {
        Leduc {
            ranks: 3,
            suits: 2,
            max_raises: 2,
            raise_sizes: [2, 4],
        }
    }

    /// Twenty-four cards over twelve ranks, six raises per round.
    pub fn big() -> Self {
        Leduc {
            ranks: 12,
            suits: 2,
            max_raises: 6,
            raise_sizes: [2, 4],
        }
    }

    fn card_label(&self, card: u8) -> String {
        const RANKS: &[u8] = b"23456789TJQKA";
        let rank = card / self.suits;
        let symbol = if self.ranks <= 3 {
            b"JQK"[rank as usize]
        } else {
            RANKS[RANKS.len() - self.ranks as usize + rank as usize]
        };
        let suit = b"shdc"[(card % self.suits) as usize];
        String::from_utf8(vec![symbol, suit]).unwrap()
    }
}

#[derive(Debug, Clone)]
pub struct LeducState {
    /// Player 0 private, player 1 private, then the public card.
    cards: Vec<u8>,
    round: usize,
    /// Betting per round, `f`/`c`/`r` characters, rounds separated by `/`.
    betting: String,
    round_actions: u8,
    raises: u8,
    stake: [u32; 2],
    folded: Option<Player>,
}

impl LeducState {
    fn facing_bet(&self, player: Player) -> bool {
        self.stake[player.opponent().index()] > self.stake[player.index()]
    }
}

impl GameDef for Leduc {
    type State = LeducState;

    fn name(&self) -> String {
        if *self == Leduc::standard() {
            "leduc".into()
        } else if *self == Leduc::big() {
            "big_leduc".into()
        } else {
            format!("leduc-{}x{}", self.ranks, self.suits)
        }
    }

    fn root(&self) -> LeducState {
        LeducState {
            cards: Vec::new(),
            round: 0,
            betting: String::new(),
            round_actions: 0,
            raises: 0,
            stake: [1, 1],
            folded: None,
        }
    }

    fn expand(&self, s: &LeducState) -> Expansion<LeducState> {
        let deck = self.ranks * self.suits;
        let needed = if s.round == 0 { 2 } else { 3 };
        if s.cards.len() < needed {
            let remaining: Vec<u8> = (0..deck).filter(|c| !s.cards.contains(c)).collect();
            let p = 1.0 / remaining.len() as f64;
            return Expansion::Chance(
                remaining
                    .into_iter()
                    .map(|c| {
                        let mut next = s.clone();
                        next.cards.push(c);
                        (self.card_label(c).into(), p, next)
                    })
                    .collect(),
            );
        }
        if let Some(loser) = s.folded {
            let lost = s.stake[loser.index()] as f64;
            let mut u = [lost, lost];
            u[loser.index()] = -lost;
            return Expansion::Terminal(u);
        }
        if s.round == 2 {
            return Expansion::Terminal(self.showdown(s));
        }

        let player = Player::from_index((s.round_actions % 2) as usize).unwrap();
        let facing = s.facing_bet(player);
        let mut actions = Vec::with_capacity(3);
        if facing {
            let mut next = s.clone();
            next.betting.push('f');
            next.folded = Some(player);
            actions.push(("f".into(), next));
        }
        {
            let mut next = s.clone();
            next.betting.push('c');
            next.stake[player.index()] = s.stake[player.opponent().index()];
            next.round_actions += 1;
            if facing || s.round_actions > 0 {
                next.end_round();
            }
            actions.push(("c".into(), next));
        }
        if s.raises < self.max_raises {
            let mut next = s.clone();
            next.betting.push('r');
            next.stake[player.index()] = s.stake[player.opponent().index()] + self.raise_sizes[s.round];
            next.raises += 1;
            next.round_actions += 1;
            actions.push(("r".into(), next));
        }

        let private = self.card_label(s.cards[player.index()]);
        let infoset = match s.cards.get(2) {
            Some(&public) => format!("{private}|{}|{}", self.card_label(public), s.betting),
            None => format!("{private}||{}", s.betting),
        };
        Expansion::Decision {
            player,
            infoset,
            actions,
        }
    }
}

impl LeducState {
    fn end_round(&mut self) {
        self.round += 1;
        self.round_actions = 0;
        self.raises = 0;
        if self.round < 2 {
            self.betting.push('/');
        }
    }
}

impl Leduc {
    fn showdown(&self, s: &LeducState) -> [f64; 2] {
        let rank = |c: u8| c / self.suits;
        let public = rank(s.cards[2]);
        // Pairs outrank every high card.
        let strength = |c: u8| {
            let r = rank(c) as u32;
            if rank(c) == public {
                100 + r
            } else {
                r
            }
        };
        let (a, b) = (strength(s.cards[0]), strength(s.cards[1]));
        let pot = s.stake[0] as f64;
        match a.cmp(&b) {
            std::cmp::Ordering::Greater => [pot, -pot],
            std::cmp::Ordering::Less => [-pot, pot],
            std::cmp::Ordering::Equal => [0.0, 0.0],
        }
    }
}
