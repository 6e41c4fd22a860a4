//! Approval-based multiwinner voting: exact rule evaluation, winner
//! determination, and decision procedures for coalition manipulation and
//! constructive control, plus generators for classic hardness constructions.

pub mod campaign;
pub mod combinatorics;
pub mod control;
pub mod error;
pub mod fixtures;
pub mod io;
pub mod ip;
pub mod jcc_fpt;
pub mod manipulation;
pub mod model;
pub mod random;
pub mod reductions;
pub mod solve;
pub mod strategic;
pub mod verdict;
pub mod winners;

pub use error::{Error, Result};
pub use model::{Ballot, Committee, Election, Rule, Score};
