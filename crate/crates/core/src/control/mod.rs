//! Constructive control by adding or deleting voters or candidates.

mod bruteforce;
mod ccav_mav;
mod ccdv_mav;
mod colorcoding;
mod programs;

pub use bruteforce::{solve_control_bruteforce, solve_control_bruteforce_with};
pub use ccav_mav::solve_ccav_mav_fpt;
pub use ccdv_mav::solve_ccdv_mav_poly;
pub use colorcoding::{build_perfect_hash_family, solve_ccadc_colorcoding, HashMode, PerfectHashFamily};
pub use programs::{solve_ccadv_additive_fpt, solve_ccadv_thiele_fpt};

use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Ballot, Election, Rule};
use crate::verdict::Verdict;
use crate::winners::{j_cc, JccAlgo, JccInstance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ControlType {
    Ccav,
    Ccdv,
    Ccac,
    Ccdc,
    Ccadv,
    Ccadc,
}

impl ControlType {
    pub const ALL: [ControlType; 6] = [
        ControlType::Ccav,
        ControlType::Ccdv,
        ControlType::Ccac,
        ControlType::Ccdc,
        ControlType::Ccadv,
        ControlType::Ccadc,
    ];

    pub fn parse(s: &str) -> Result<ControlType> {
        ControlType::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown control type `{s}`")))
    }

    pub fn name(self) -> &'static str {
        match self {
            ControlType::Ccav => "CCAV",
            ControlType::Ccdv => "CCDV",
            ControlType::Ccac => "CCAC",
            ControlType::Ccdc => "CCDC",
            ControlType::Ccadv => "CCADV",
            ControlType::Ccadc => "CCADC",
        }
    }

    pub fn on_voters(self) -> bool {
        matches!(self, ControlType::Ccav | ControlType::Ccdv | ControlType::Ccadv)
    }

    pub fn adds(self) -> bool {
        !matches!(self, ControlType::Ccdv | ControlType::Ccdc)
    }

    pub fn deletes(self) -> bool {
        !matches!(self, ControlType::Ccav | ControlType::Ccac)
    }
}

impl fmt::Display for ControlType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A control instance. `election` holds every candidate (registered and
/// unregistered) and the registered votes.
#[derive(Clone, Debug)]
pub struct ControlInstance {
    pub kind: ControlType,
    pub rule: Rule,
    pub election: Election,
    /// Registered candidates `C`, sorted; the others form `D`.
    pub registered: Vec<usize>,
    /// Unregistered votes `U`.
    pub unregistered_votes: Vec<Ballot>,
    pub k: usize,
    pub j: Vec<usize>,
    pub add_budget: usize,
    pub delete_budget: usize,
}

impl ControlInstance {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        kind: ControlType,
        rule: Rule,
        election: Election,
        registered: Vec<usize>,
        unregistered_votes: Vec<Ballot>,
        k: usize,
        j: Vec<usize>,
        add_budget: usize,
        delete_budget: usize,
    ) -> Result<Self> {
        let m = election.num_candidates();
        let mut registered = registered;
        registered.sort_unstable();
        registered.dedup();
        let mut j = j;
        j.sort_unstable();
        j.dedup();
        if let Some(&c) = registered.last().filter(|&&c| c >= m).or(j.last().filter(|&&c| c >= m)) {
            return Err(Error::CandidateOutOfRange { index: c, m });
        }
        if j.is_empty() || j.len() > k || k > registered.len() {
            return Err(Error::Validation(format!(
                "need 1 ≤ |J| ≤ k ≤ |C|, got |J|={}, k={k}, |C|={}",
                j.len(),
                registered.len()
            )));
        }
        if j.iter().any(|c| registered.binary_search(c).is_err()) {
            return Err(Error::Validation("distinguished candidates must be registered".into()));
        }
        election.with_votes(unregistered_votes.clone())?;
        let inst =
            ControlInstance { kind, rule, election, registered, unregistered_votes, k, j, add_budget, delete_budget };
        let unregistered = inst.unregistered_candidates().len();
        if kind.on_voters() && unregistered > 0 {
            return Err(Error::Validation(format!("{kind} takes no unregistered candidates")));
        }
        if !kind.on_voters() && !inst.unregistered_votes.is_empty() {
            return Err(Error::Validation(format!("{kind} takes no unregistered votes")));
        }
        if !kind.adds() && add_budget > 0 || !kind.deletes() && delete_budget > 0 {
            return Err(Error::Validation(format!("{kind} does not allow that kind of budget")));
        }
        let (add_pool, delete_pool) = if kind.on_voters() {
            (inst.unregistered_votes.len(), inst.election.num_votes())
        } else {
            (unregistered, inst.registered.len())
        };
        if add_budget > add_pool || delete_budget > delete_pool {
            return Err(Error::Validation("budget exceeds the size of its pool".into()));
        }
        Ok(inst)
    }

    /// Unregistered candidates `D`, sorted.
    pub fn unregistered_candidates(&self) -> Vec<usize> {
        (0..self.election.num_candidates()).filter(|c| self.registered.binary_search(c).is_err()).collect()
    }

    /// Registered candidates outside `J`: the only ones worth deleting.
    pub fn deletable_candidates(&self) -> Vec<usize> {
        self.registered.iter().copied().filter(|c| self.j.binary_search(c).is_err()).collect()
    }

    /// The uncontrolled election `(C, V)`.
    pub fn base_election(&self) -> Applied {
        self.apply(&ControlSolution::default()).expect("empty solution is valid")
    }

    pub fn apply(&self, sol: &ControlSolution) -> Result<Applied> {
        apply_control(self, sol)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ControlSolution {
    /// Indices into the unregistered votes.
    pub added_votes: Vec<usize>,
    /// Indices into the registered votes.
    pub deleted_votes: Vec<usize>,
    pub added_candidates: Vec<usize>,
    pub deleted_candidates: Vec<usize>,
}

impl ControlSolution {
    pub fn size(&self) -> usize {
        self.added_votes.len() + self.deleted_votes.len() + self.added_candidates.len() + self.deleted_candidates.len()
    }
}

/// The controlled election, restricted to its candidate set.
#[derive(Clone, Debug)]
pub struct Applied {
    pub election: Election,
    /// Original index of every remaining candidate.
    pub candidates: Vec<usize>,
    /// `J` in the new indexing.
    pub j: Vec<usize>,
}

fn distinct_within(set: &[usize], bound: usize, what: &str) -> Result<()> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != set.len() || s.last().is_some_and(|&x| x >= bound) {
        return Err(Error::Validation(format!("invalid {what} indices {set:?}")));
    }
    Ok(())
}

pub fn apply_control(inst: &ControlInstance, sol: &ControlSolution) -> Result<Applied> {
    let kind = inst.kind;
    let voters = sol.added_votes.len() + sol.deleted_votes.len();
    let cands = sol.added_candidates.len() + sol.deleted_candidates.len();
    if (kind.on_voters() && cands > 0) || (!kind.on_voters() && voters > 0) {
        return Err(Error::Validation(format!("solution does not match control type {kind}")));
    }
    let (added, deleted) = if kind.on_voters() {
        (&sol.added_votes, &sol.deleted_votes)
    } else {
        (&sol.added_candidates, &sol.deleted_candidates)
    };
    if added.len() > inst.add_budget || deleted.len() > inst.delete_budget {
        return Err(Error::Validation("solution exceeds the budget".into()));
    }
    let m = inst.election.num_candidates();
    distinct_within(&sol.added_votes, inst.unregistered_votes.len(), "added vote")?;
    distinct_within(&sol.deleted_votes, inst.election.num_votes(), "deleted vote")?;
    distinct_within(&sol.added_candidates, m, "added candidate")?;
    distinct_within(&sol.deleted_candidates, m, "deleted candidate")?;
    if sol.added_candidates.iter().any(|c| inst.registered.binary_search(c).is_ok()) {
        return Err(Error::Validation("only unregistered candidates can be added".into()));
    }
    if sol
        .deleted_candidates
        .iter()
        .any(|c| inst.registered.binary_search(c).is_err() || inst.j.binary_search(c).is_ok())
    {
        return Err(Error::Validation("only registered candidates outside J can be deleted".into()));
    }
    let mut keep: Vec<usize> = inst
        .registered
        .iter()
        .copied()
        .filter(|c| !sol.deleted_candidates.contains(c))
        .chain(sol.added_candidates.iter().copied())
        .collect();
    keep.sort();
    if keep.len() < inst.k {
        return Err(Error::Validation(format!("only {} candidates remain for k={}", keep.len(), inst.k)));
    }
    let votes: Vec<Ballot> = inst
        .election
        .votes()
        .iter()
        .enumerate()
        .filter(|(i, _)| !sol.deleted_votes.contains(i))
        .map(|(_, v)| v.clone())
        .chain(sol.added_votes.iter().map(|&i| inst.unregistered_votes[i].clone()))
        .collect();
    let (election, candidates) = inst.election.restrict_votes_with_map(&keep, &votes)?;
    let j = inst.j.iter().map(|c| candidates.binary_search(c).expect("J is never deleted")).collect();
    Ok(Applied { election, candidates, j })
}

/// Whether `J` lies in every winning committee of the controlled election.
pub fn solution_succeeds(inst: &ControlInstance, sol: &ControlSolution) -> Result<bool> {
    let applied = apply_control(inst, sol)?;
    let jcc = JccInstance::new(applied.election, inst.k, applied.j)?;
    j_cc(&inst.rule, &jcc, JccAlgo::Auto)
}

/// Certifies a YES witness before it leaves a solver.
pub(crate) fn certified(inst: &ControlInstance, sol: ControlSolution) -> Result<Verdict<ControlSolution>> {
    if !solution_succeeds(inst, &sol)? {
        return Err(Error::Validation(format!("solver produced an invalid control witness {sol:?}")));
    }
    Ok(Verdict::Yes(sol))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImmunityStatus {
    Immune,
    Susceptible,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImmunityReason {
    /// Adding candidates never changes AV scores of registered ones.
    ScoresUnaffected,
    /// The rule satisfies NRP and `|J| = k`.
    NegatedRevealedPreference,
    /// Witness election known for the rule.
    KnownExample,
    /// Voters or deletions can always be arranged to help.
    VoterOrDeletionControl,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ImmunityVerdict {
    pub status: ImmunityStatus,
    pub reason: ImmunityReason,
}

pub fn immunity_verdict(rule: &Rule, kind: ControlType, k: usize, j_size: usize) -> ImmunityVerdict {
    use ImmunityReason::*;
    use ImmunityStatus::*;
    let (status, reason) = match (rule, kind) {
        (Rule::Av, ControlType::Ccac) => (Immune, ScoresUnaffected),
        (Rule::Abccv | Rule::Pav, ControlType::Ccac) if j_size == k => (Immune, NegatedRevealedPreference),
        (Rule::Abccv | Rule::Pav, ControlType::Ccac) => (Susceptible, KnownExample),
        (Rule::Mav, ControlType::Ccac) => (Susceptible, KnownExample),
        (_, ControlType::Ccac) => (Undetermined, Unknown),
        _ => (Susceptible, VoterOrDeletionControl),
    };
    ImmunityVerdict { status, reason }
}
