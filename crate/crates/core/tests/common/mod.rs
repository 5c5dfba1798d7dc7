//! Independent oracles shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

pub mod blotto;
pub mod kuhn;
pub mod toy;
