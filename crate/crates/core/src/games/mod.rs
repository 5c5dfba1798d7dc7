//! Rule definitions for the benchmark games.
//!
//! Every game compiles to a [`TreeGame`] through [`build_tree`]. Simultaneous
//! moves (Goofspiel, Blotto) are encoded sequentially: player 0 chooses, then
//! player 1 chooses in an information set that hides the pending choice.

mod battleship;
mod blotto;
mod goofspiel;
mod kuhn;
mod leduc;
mod liars_dice;

pub use battleship::Battleship;
pub use blotto::Blotto;
pub use goofspiel::Goofspiel;
pub use kuhn::Kuhn;
pub use leduc::Leduc;
pub use liars_dice::LiarsDice;

use crate::error::{Error, Result};
use crate::game::{build_tree, GameStats, TreeGame};
use std::fmt;

/// Game identifiers accepted by [`make_game`].
pub const GAME_NAMES: &[&str] = &[
    "kuhn",
    "leduc",
    "big_leduc",
    "goofspiel",
    "goofspiel_li",
    "liars_dice",
    "battleship",
    "blotto",
];

/// Optional numeric parameters; which ones apply depends on the game.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GameParams {
    /// Goofspiel card count, Liar's dice faces or Battleship grid width.
    pub x: Option<u32>,
    /// Blotto battlefields.
    pub fields: Option<u32>,
    /// Blotto resources per player.
    pub resources: Option<u32>,
}

/// Fully resolved rules of one benchmark game.
#[derive(Debug, Clone, PartialEq)]
pub enum GameRules {
    Kuhn(Kuhn),
    Leduc(Leduc),
    Goofspiel(Goofspiel),
    LiarsDice(LiarsDice),
    Battleship(Battleship),
    Blotto(Blotto),
}

fn param(name: &str, key: &str, value: Option<u32>, default: u32, range: std::ops::RangeInclusive<u32>) -> Result<u32> {
    let v = value.unwrap_or(default);
    if !range.contains(&v) {
        return Err(Error::config(format!(
            "{name}: {key}={v} outside supported range {}..={}",
            range.start(),
            range.end()
        )));
    }
    Ok(v)
}

fn reject(name: &str, key: &str, value: Option<u32>) -> Result<()> {
    match value {
        Some(_) => Err(Error::config(format!("{name} takes no {key} parameter"))),
        None => Ok(()),
    }
}

/// Resolves a game name and parameters into rules.
pub fn make_game(name: &str, params: &GameParams) -> Result<GameRules> {
    let no_blotto = |n: &str| reject(n, "fields", params.fields).and(reject(n, "resources", params.resources));
    let rules = match name {
        "kuhn" | "leduc" | "big_leduc" => {
            reject(name, "x", params.x)?;
            no_blotto(name)?;
            match name {
                "kuhn" => GameRules::Kuhn(Kuhn),
                "leduc" => GameRules::Leduc(Leduc::standard()),
                _ => GameRules::Leduc(Leduc::big()),
            }
        }
        "goofspiel" | "goofspiel_li" => {
            no_blotto(name)?;
            GameRules::Goofspiel(Goofspiel {
                cards: param(name, "x", params.x, 4, 2..=5)?,
                limited_info: name == "goofspiel_li",
            })
        }
        "liars_dice" => {
            no_blotto(name)?;
            GameRules::LiarsDice(LiarsDice {
                faces: param(name, "x", params.x, 4, 2..=6)?,
                wild_high_face: true,
            })
        }
        "battleship" => {
            no_blotto(name)?;
            GameRules::Battleship(Battleship {
                width: param(name, "x", params.x, 3, 2..=3)?,
                shots: 3,
            })
        }
        "blotto" => {
            reject(name, "x", params.x)?;
            GameRules::Blotto(Blotto {
                fields: param(name, "fields", params.fields, 3, 1..=5)?,
                resources: param(name, "resources", params.resources, 5, 1..=10)?,
            })
        }
        other => {
            return Err(Error::config(format!(
                "unknown game {other:?} (expected one of {})",
                GAME_NAMES.join(", ")
            )))
        }
    };
    Ok(rules)
}

impl GameRules {
    pub fn build(&self) -> Result<TreeGame> {
        match self {
            GameRules::Kuhn(g) => build_tree(g),
            GameRules::Leduc(g) => build_tree(g),
            GameRules::Goofspiel(g) => build_tree(g),
            GameRules::LiarsDice(g) => build_tree(g),
            GameRules::Battleship(g) => build_tree(g),
            GameRules::Blotto(g) => build_tree(g),
        }
    }

    /// Short identifier such as `goofspiel_li-4`, used in file names and reports.
    pub fn id(&self) -> String {
        match self {
            GameRules::Kuhn(_) => "kuhn".into(),
            GameRules::Leduc(l) if *l == Leduc::standard() => "leduc".into(),
            GameRules::Leduc(l) if *l == Leduc::big() => "big_leduc".into(),
            GameRules::Leduc(l) => format!("leduc-{}x{}-r{}", l.ranks, l.suits, l.max_raises),
            GameRules::Goofspiel(g) if g.limited_info => format!("goofspiel_li-{}", g.cards),
            GameRules::Goofspiel(g) => format!("goofspiel-{}", g.cards),
            GameRules::LiarsDice(d) => format!("liars_dice-{}", d.faces),
            GameRules::Battleship(b) => format!("battleship-{}", b.width),
            GameRules::Blotto(b) if b.fields == 3 && b.resources == 5 => "blotto".into(),
            GameRules::Blotto(b) => format!("blotto-{}-{}", b.fields, b.resources),
        }
    }

    /// Published size of this game, when one exists.
    pub fn reference_size(&self) -> Option<ReferenceSize> {
        let row = |h, i, l| {
            Some(ReferenceSize {
                histories: h,
                infosets: i,
                leaves: l,
            })
        };
        match self.id().as_str() {
            "kuhn" => row("58", "12", "30"),
            "battleship-2" => row("1.0e4", "3.3e3", "5.6e3"),
            "battleship-3" => row("7.3e5", "8.1e4", "5.5e5"),
            "goofspiel_li-3" => row("67", "16", "36"),
            "goofspiel-4" => row("1.1e3", "2.7e2", "5.8e2"),
            "goofspiel_li-4" => row("1.1e3", "1.6e2", "5.8e2"),
            "goofspiel-5" => row("2.7e4", "3.3e3", "1.4e4"),
            "goofspiel_li-5" => row("2.7e4", "2.1e3", "1.4e4"),
            "leduc" => row("9.5e3", "9.4e2", "5.5e3"),
            "big_leduc" => row("6.2e6", "1.0e5", "4.0e6"),
            "liars_dice-4" => row("8.2e3", "1.0e3", "4.1e3"),
            "liars_dice-6" => row("2.9e5", "2.5e4", "1.5e5"),
            _ => None,
        }
    }
}

impl fmt::Display for GameRules {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// One row of the reference size table. Entries are either exact integers
/// (`"58"`) or two-significant-figure scientific values (`"9.5e3"`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReferenceSize {
    pub histories: &'static str,
    pub infosets: &'static str,
    pub leaves: &'static str,
}

impl ReferenceSize {
    pub fn matches(&self, stats: &GameStats) -> bool {
        entry_matches(self.histories, stats.histories)
            && entry_matches(self.infosets, stats.infosets)
            && entry_matches(self.leaves, stats.leaves)
    }

    /// `stats` rendered in the same notation as this row.
    pub fn render(&self, stats: &GameStats) -> String {
        format!(
            "{} {} {}",
            render_entry(self.histories, stats.histories),
            render_entry(self.infosets, stats.infosets),
            render_entry(self.leaves, stats.leaves)
        )
    }
}

impl fmt::Display for ReferenceSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.histories, self.infosets, self.leaves)
    }
}

/// Two significant figures in `d.de` notation.
pub fn two_sig_figs(n: usize) -> String {
    format!("{:.1e}", n as f64)
}

fn render_entry(reference: &str, actual: usize) -> String {
    if reference.contains('e') {
        two_sig_figs(actual)
    } else {
        actual.to_string()
    }
}

fn entry_matches(reference: &str, actual: usize) -> bool {
    render_entry(reference, actual) == reference
}
