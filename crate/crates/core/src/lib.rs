//! Counterfactual regret minimization for two-player zero-sum imperfect-information games.
//!
//! The crate covers the discounted CFR family (CFR, CFR+, DCFR and PCFR+) driven by
//! hyperparameter schedules: rules that move the discount exponents `(alpha, beta, gamma)`
//! with the iteration count instead of holding them fixed. A large, linearly decaying
//! `gamma` suppresses early iterates in the average strategy and then gradually trusts
//! later ones.
//!
//! Modules:
//!
//! - [`game`]: immutable arena game trees, strategy profiles and expected values.
//! - [`games`]: benchmark games (Kuhn, Leduc, Big Leduc, Goofspiel, Liar's dice,
//!   Battleship, Blotto).
//! - [`schedules`]: scalar schedules and the built-in schedule sets.
//! - [`regret`]: per-information-set regret matching kernels.
//! - [`solver`]: the iteration engine.
//! - [`eval`]: best response, exploitability, convergence bounds and the OoM metric.
//!
//! ```
//! use hscfr::games::make_game;
//! use hscfr::schedules::builtin_schedule;
//! use hscfr::solver::{run, Averaging, SolverConfig, UpdateMode, Variant};
//!
//! let game = make_game("kuhn", &Default::default()).unwrap().build().unwrap();
//! let config = SolverConfig {
//!     variant: Variant::PcfrPlus,
//!     schedule: builtin_schedule("hs30").unwrap(),
//!     iterations: 100,
//!     update_mode: UpdateMode::Alternating,
//!     checkpoint_every: 50,
//!     averaging: Averaging::Discounted,
//! };
//! let result = run(&game, &config).unwrap();
//! assert_eq!(result.checkpoints.len(), 2);
//! assert!(result.checkpoints[1].exploitability < 1e-2);
//! ```

pub mod error;
pub mod eval;
pub mod game;
pub mod games;
pub mod regret;
pub mod schedules;
pub mod solver;

pub use error::{Error, Result};
