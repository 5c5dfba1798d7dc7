use crate::game::{Expansion, GameDef, Player};

/// Colonel Blotto as a one-shot game: each player splits `resources` units over
/// `fields` battlefields. A battlefield goes to the larger allocation, ties to
/// nobody; the payoff is battlefields won minus battlefields lost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Blotto {
    pub fields: u32,
    pub resources: u32,
}

#[derive(Debug, Clone)]
pub struct BlottoState {
    choices: Vec<usize>,
}

impl Blotto {
    /// All allocations in lexicographic order.
    pub fn allocations(&self) -> Vec<Vec<u32>> {
        fn rec(left: u32, fields: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if fields == 1 {
                prefix.push(left);
                out.push(prefix.clone());
                prefix.pop();
                return;
            }
            for k in 0..=left {
                prefix.push(k);
                rec(left - k, fields - 1, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(self.resources, self.fields, &mut Vec::new(), &mut out);
        out
    }

    /// Payoff to the first allocation against the second.
    pub fn payoff(a: &[u32], b: &[u32]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| match x.cmp(y) {
                std::cmp::Ordering::Greater => 1.0,
                std::cmp::Ordering::Less => -1.0,
                std::cmp::Ordering::Equal => 0.0,
            })
            .sum()
    }
}

impl GameDef for Blotto {
    type State = BlottoState;

    fn name(&self) -> String {
        format!("blotto-{}-{}", self.fields, self.resources)
    }

    fn root(&self) -> BlottoState {
        BlottoState { choices: Vec::new() }
    }

    fn expand(&self, s: &BlottoState) -> Expansion<BlottoState> {
        let allocations = self.allocations();
        if s.choices.len() == 2 {
            let u = Blotto::payoff(&allocations[s.choices[0]], &allocations[s.choices[1]]);
            return Expansion::Terminal([u, -u]);
        }
        let player = Player::from_index(s.choices.len()).unwrap();
        let actions = allocations
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let mut next = s.clone();
                next.choices.push(i);
                let label: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                (label.join("-").into(), next)
            })
            .collect();
        Expansion::Decision {
            player,
            infoset: "allocate".into(),
            actions,
        }
    }
}
