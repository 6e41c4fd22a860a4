//! Seeded random instances for fuzzing and agreement suites.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{Ballot, Election};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Candidate labels `c0, c1, ...`.
pub fn labels(m: usize) -> Vec<String> {
    (0..m).map(|i| format!("c{i}")).collect()
}

/// A ballot where every candidate is approved independently with probability `p`.
pub fn random_ballot<R: Rng>(rng: &mut R, m: usize, p: f64) -> Ballot {
    Ballot::new((0..m).filter(|_| rng.gen_bool(p)))
}

/// A ballot with at least one approved candidate.
pub fn random_nonempty_ballot<R: Rng>(rng: &mut R, m: usize, p: f64) -> Ballot {
    loop {
        let b = random_ballot(rng, m, p);
        if !b.is_empty() {
            return b;
        }
    }
}

pub fn random_ballots<R: Rng>(rng: &mut R, m: usize, n: usize, p: f64) -> Vec<Ballot> {
    (0..n).map(|_| random_ballot(rng, m, p)).collect()
}

pub fn random_election<R: Rng>(rng: &mut R, m: usize, n: usize, p: f64) -> Election {
    Election::new(labels(m), random_ballots(rng, m, n, p)).expect("generated labels are distinct")
}

/// Random subset of `0..m` with exactly `size` members.
pub fn random_subset<R: Rng>(rng: &mut R, m: usize, size: usize) -> Vec<usize> {
    let mut out = rand::seq::index::sample(rng, m, size).into_vec();
    out.sort_unstable();
    out
}

/// Shape of random manipulation instances.
#[derive(Debug, Clone)]
pub struct ManipulationShape {
    pub max_m: usize,
    pub max_n: usize,
    pub max_t: usize,
    pub max_k: usize,
    pub p: f64,
}

impl Default for ManipulationShape {
    fn default() -> Self {
        ManipulationShape { max_m: 6, max_n: 6, max_t: 3, max_k: 3, p: 0.4 }
    }
}

/// Random manipulation instance whose baseline is the first winning committee.
pub fn random_manipulation<R: Rng>(
    rng: &mut R,
    rule: crate::model::Rule,
    variant: crate::manipulation::Variant,
    shape: &ManipulationShape,
) -> crate::error::Result<crate::manipulation::ManipulationInstance> {
    let m = rng.gen_range(2..=shape.max_m);
    let n = rng.gen_range(1..=shape.max_n);
    let t = rng.gen_range(1..=shape.max_t);
    let k = rng.gen_range(1..=shape.max_k.min(m - 1));
    let election = random_election(rng, m, n, shape.p);
    let manipulators = (0..t).map(|_| random_nonempty_ballot(rng, m, shape.p)).collect();
    crate::manipulation::ManipulationInstance::with_first_winner(rule, election, manipulators, k, variant)
}

/// Shape of random control instances.
#[derive(Debug, Clone)]
pub struct ControlShape {
    pub max_registered: usize,
    pub max_unregistered: usize,
    pub max_n: usize,
    pub max_k: usize,
    pub p: f64,
}

impl Default for ControlShape {
    fn default() -> Self {
        ControlShape { max_registered: 5, max_unregistered: 3, max_n: 5, max_k: 3, p: 0.4 }
    }
}

/// Random control instance. The unregistered pool (votes or candidates,
/// following the type) has up to `max_unregistered` members, `J` is drawn
/// from `C` with `|J| ≤ j_max`, and budgets fill their pools at random.
pub fn random_control<R: Rng>(
    rng: &mut R,
    rule: crate::model::Rule,
    kind: crate::control::ControlType,
    shape: &ControlShape,
    j_max: usize,
) -> crate::error::Result<crate::control::ControlInstance> {
    let c = rng.gen_range(2..=shape.max_registered);
    let d = if kind.on_voters() { 0 } else { rng.gen_range(0..=shape.max_unregistered) };
    let m = c + d;
    let n = rng.gen_range(0..=shape.max_n);
    let k = rng.gen_range(1..=shape.max_k.min(c));
    let j_size = rng.gen_range(1..=j_max.clamp(1, k));
    let election = random_election(rng, m, n, shape.p);
    let registered: Vec<usize> = random_subset(rng, m, c);
    let j = rand::seq::index::sample(rng, c, j_size).into_iter().map(|i| registered[i]).collect();
    let u = if kind.on_voters() { rng.gen_range(0..=shape.max_unregistered) } else { 0 };
    let unregistered_votes = random_ballots(rng, m, u, shape.p);
    let (add_pool, delete_pool) = if kind.on_voters() { (unregistered_votes.len(), n) } else { (d, c) };
    let add_budget = if kind.adds() { rng.gen_range(0..=add_pool) } else { 0 };
    let delete_budget = if kind.deletes() { rng.gen_range(0..=delete_pool) } else { 0 };
    crate::control::ControlInstance::new(
        kind,
        rule,
        election,
        registered,
        unregistered_votes,
        k,
        j,
        add_budget,
        delete_budget,
    )
}
