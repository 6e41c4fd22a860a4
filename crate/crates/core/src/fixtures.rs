//! Small worked elections used as regression fixtures.

use crate::error::Result;
use crate::model::{Ballot, Election};

/// Manipulation fixture: honest election, truthful manipulator ballots and committee size.
#[derive(Debug, Clone)]
pub struct ManipulationFixture {
    pub election: Election,
    pub manipulators: Vec<Ballot>,
    pub k: usize,
}

/// Nine candidates where SAV manipulators gain only by splitting their ballots.
pub fn split_ballot_sav() -> ManipulationFixture {
    let candidates = ["x", "y", "z", "a", "b", "c", "d1", "d2", "d3"];
    let honest: &[&[&str]] =
        &[&["a"], &["x", "y", "z", "d3"], &["x", "y", "z", "d3"], &["x", "y", "z", "d3"], &["x"], &["y"], &["z"]];
    let election = Election::from_labels(&candidates, honest).expect("valid fixture");
    let manipulators = [&["a", "c", "d2"][..], &["a", "b", "d1"], &["b", "c"]]
        .iter()
        .map(|v| election.ballot(v))
        .collect::<Result<Vec<_>>>()
        .expect("valid fixture");
    ManipulationFixture { election, manipulators, k: 2 }
}

/// Registered candidates `{a, b}` and the same votes with unregistered `{c, d}` added.
pub fn mav_nrp_failure() -> (Election, Election) {
    let votes: &[&[&str]] = &[&["b"], &["a", "c"], &["a", "d"]];
    let full = Election::from_labels(&["a", "b", "c", "d"], votes).expect("valid fixture");
    let registered = full.restrict(&[0, 1]);
    (registered, full)
}

/// ABCCV election over `{a, b, c, d}` where `d` is the unregistered candidate.
pub fn abccv_candidate_addition() -> Election {
    let votes: &[&[&str]] = &[&["a"], &["b", "d"], &["b", "d"], &["c", "d"], &["c", "d"]];
    Election::from_labels(&["a", "b", "c", "d"], votes).expect("valid fixture")
}

/// PAV counterpart of [`abccv_candidate_addition`].
pub fn pav_candidate_addition() -> Election {
    let votes: &[&[&str]] =
        &[&["a"], &["a"], &["b", "d"], &["b", "d"], &["b", "d"], &["c", "d"], &["c", "d"], &["c", "d"]];
    Election::from_labels(&["a", "b", "c", "d"], votes).expect("valid fixture")
}
