//! Coalition manipulation under cardinality, subset and stochastic-domination
//! preference extensions.

mod av_const;
mod bruteforce;
mod fpt_m;
mod savnsav_dp;

pub use av_const::solve_av_const_manipulators;
pub use bruteforce::{
    solve_manipulation_bruteforce, solve_manipulation_bruteforce_with, BruteForceOptions, SearchSpace,
};
pub use fpt_m::{solve_manipulation_fpt_m_additive, solve_manipulation_fpt_m_av, solve_sdcm_fpt_m};
pub use savnsav_dp::solve_savnsav_const_manipulators;

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::combinatorics::binomial_u128;
use crate::error::{Error, Result};
use crate::model::{int, partition_from_classes, Ballot, Committee, Election, Rule, Score};
use crate::verdict::Verdict;
use crate::winners::{outcome, winning_committees, Outcome, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Cbcm,
    Sbcm,
    Sdcm,
}

impl Variant {
    pub fn parse(s: &str) -> Result<Variant> {
        match s.to_ascii_lowercase().as_str() {
            "cbcm" => Ok(Variant::Cbcm),
            "sbcm" => Ok(Variant::Sbcm),
            "sdcm" => Ok(Variant::Sdcm),
            _ => Err(Error::Config(format!("unknown manipulation variant `{s}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variant::Cbcm => "CBCM",
            Variant::Sbcm => "SBCM",
            Variant::Sdcm => "SDCM",
        }
    }
}

/// How a voter compares two committees.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    Cardinality,
    Subset,
}

/// Does `v` strictly prefer `w_new` to `w_old`?
pub fn prefers(ext: Extension, v: &Ballot, w_new: &Committee, w_old: &Committee) -> bool {
    match ext {
        Extension::Cardinality => v.overlap(w_new.members()) > v.overlap(w_old.members()),
        Extension::Subset => {
            let kept = v.iter().filter(|&c| w_old.contains(c)).all(|c| w_new.contains(c));
            kept && v.overlap(w_new.members()) > v.overlap(w_old.members())
        }
    }
}

/// Outcome of a stochastic-domination comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SdVerdict {
    pub dominates: bool,
    pub witness_levels: Vec<usize>,
}

/// Compares two overlap histograms (`hist[i]` = committees meeting the set in exactly `i` members).
pub fn sd_from_histograms(a: &[BigUint], b: &[BigUint]) -> SdVerdict {
    let total = |h: &[BigUint]| h.iter().fold(BigUint::zero(), |acc, x| acc + x);
    let (na, nb) = (total(a), total(b));
    let levels = a.len().max(b.len());
    let mut ge_a = BigUint::zero();
    let mut ge_b = BigUint::zero();
    let mut strict = Vec::new();
    let mut weak = true;
    for i in (0..levels).rev() {
        ge_a += a.get(i).cloned().unwrap_or_default();
        ge_b += b.get(i).cloned().unwrap_or_default();
        let lhs = &ge_a * &nb;
        let rhs = &ge_b * &na;
        if lhs < rhs {
            weak = false;
        } else if lhs > rhs {
            strict.push(i);
        }
    }
    strict.reverse();
    let dominates = weak && !strict.is_empty();
    SdVerdict { dominates, witness_levels: if dominates { strict } else { Vec::new() } }
}

/// Whether collection `a` stochastically dominates `b` subject to `s`.
pub fn sd_dominates(a: &[Committee], b: &[Committee], s: &[usize]) -> SdVerdict {
    let k = a.iter().chain(b).map(Committee::k).max().unwrap_or(0);
    let hist = |coll: &[Committee]| {
        let mut h = vec![BigUint::zero(); k + 1];
        for w in coll {
            h[w.overlap(s)] += 1u32;
        }
        h
    };
    sd_from_histograms(&hist(a), &hist(b))
}

/// A coalition manipulation instance.
#[derive(Clone, Debug)]
pub struct ManipulationInstance {
    /// Candidates with the honest (nonmanipulative) votes.
    pub election: Election,
    /// Truthful ballots of the manipulators.
    pub manipulators: Vec<Ballot>,
    pub k: usize,
    pub baseline: Option<Committee>,
    pub variant: Variant,
    pub rule: Rule,
}

/// Replacement ballots, aligned with the manipulators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallotProfile {
    pub replacements: Vec<Ballot>,
}

impl ManipulationInstance {
    pub fn new(
        rule: Rule,
        election: Election,
        manipulators: Vec<Ballot>,
        k: usize,
        baseline: Option<Committee>,
        variant: Variant,
    ) -> Result<Self> {
        let m = election.num_candidates();
        if k == 0 || k > m {
            return Err(Error::KOutOfRange { k, m });
        }
        if manipulators.is_empty() {
            return Err(Error::Validation("at least one manipulator is required".into()));
        }
        election.with_votes(manipulators.clone())?;
        let inst = ManipulationInstance { election, manipulators, k, baseline, variant, rule };
        match (&inst.baseline, variant) {
            (None, Variant::Sdcm) => {}
            (Some(_), Variant::Sdcm) => {
                return Err(Error::Validation("SDCM instances take no baseline committee".into()))
            }
            (None, _) => return Err(Error::Validation("CBCM/SBCM instances need a baseline committee".into())),
            (Some(w), _) => {
                if w.k() != k || w.members().last().is_some_and(|&c| c >= m) {
                    return Err(Error::Validation("baseline committee is not a k-committee of the roster".into()));
                }
                if !outcome(&inst.rule, &inst.full_election(), k)?.is_winner(w) {
                    return Err(Error::Validation("baseline committee is not winning in the truthful election".into()));
                }
            }
        }
        Ok(inst)
    }

    /// Convenience constructor that picks the first winning committee as baseline.
    pub fn with_first_winner(
        rule: Rule,
        election: Election,
        manipulators: Vec<Ballot>,
        k: usize,
        variant: Variant,
    ) -> Result<Self> {
        let baseline = if variant == Variant::Sdcm {
            None
        } else {
            let full = election.with_extra_votes(&manipulators);
            let ws = winning_committees(&rule, &full, k, Strategy::Auto)?;
            Some(ws.committees[0].clone())
        };
        Self::new(rule, election, manipulators, k, baseline, variant)
    }

    pub fn t(&self) -> usize {
        self.manipulators.len()
    }

    /// `(C, V ∪ V_M)`.
    pub fn full_election(&self) -> Election {
        self.election.with_extra_votes(&self.manipulators)
    }

    /// `(C, V ∪ U)`.
    pub fn manipulated_election(&self, replacements: &[Ballot]) -> Election {
        self.election.with_extra_votes(replacements)
    }

    /// Candidates approved by at least one manipulator.
    pub fn manipulator_union(&self) -> Vec<usize> {
        let mut u: Vec<usize> = self.manipulators.iter().flat_map(|v| v.iter()).collect();
        u.sort_unstable();
        u.dedup();
        u
    }

    fn baseline_members(&self) -> &[usize] {
        self.baseline.as_ref().map(Committee::members).unwrap_or(&[])
    }

    /// The acceptance test against a new outcome, in factored form.
    pub(crate) fn accepts(&self, new: &Outcome, old: Option<&Outcome>) -> bool {
        let w = self.baseline_members();
        self.manipulators.iter().all(|v| match self.variant {
            Variant::Cbcm => new.min_overlap(v.as_slice()) > v.overlap(w),
            Variant::Sbcm => {
                let kept: Vec<usize> = v.iter().filter(|c| w.binary_search(c).is_ok()).collect();
                let gain: Vec<usize> = v.iter().filter(|c| w.binary_search(c).is_err()).collect();
                new.all_contain(&kept) && new.min_overlap(&gain) >= 1
            }
            Variant::Sdcm => {
                let old = old.expect("SDCM needs the truthful outcome");
                sd_from_histograms(&new.overlap_histogram(v.as_slice()), &old.overlap_histogram(v.as_slice())).dominates
            }
        })
    }

    pub(crate) fn truthful_outcome(&self) -> Result<Option<Outcome>> {
        if self.variant == Variant::Sdcm {
            Ok(Some(outcome(&self.rule, &self.full_election(), self.k)?))
        } else {
            Ok(None)
        }
    }

    /// Whether some committee is acceptable to every manipulator (CBCM/SBCM); a
    /// necessary condition for any successful manipulation.
    pub(crate) fn good_committee_exists(&self) -> Result<bool> {
        if self.variant == Variant::Sdcm {
            return Ok(true);
        }
        let union = self.manipulator_union();
        let outside = self.election.num_candidates() - union.len();
        if binomial_u128(union.len(), self.k.min(union.len())) > 50_000_000 {
            return Ok(true);
        }
        let w = self.baseline.as_ref().expect("validated");
        for x in crate::combinatorics::subsets_up_to(&union, self.k) {
            if x.len() + outside < self.k {
                continue;
            }
            let ok = self.manipulators.iter().all(|v| match self.variant {
                Variant::Cbcm => v.overlap(&x) > v.overlap(w.members()),
                _ => {
                    v.iter().filter(|&c| w.contains(c)).all(|c| x.binary_search(&c).is_ok())
                        && v.iter().any(|c| !w.contains(c) && x.binary_search(&c).is_ok())
                }
            });
            if ok {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Independent check of a manipulation witness: recomputes the winners of
/// `(C, V ∪ U)` as an explicit list and applies the committee-level predicates.
pub fn certify_profile(inst: &ManipulationInstance, profile: &BallotProfile) -> Result<bool> {
    if profile.replacements.len() != inst.t() {
        return Ok(false);
    }
    let m = inst.election.num_candidates();
    if profile.replacements.iter().any(|b| b.as_slice().last().is_some_and(|&c| c >= m)) {
        return Ok(false);
    }
    let list = |e: &Election| -> Result<Vec<Committee>> {
        let strategy = if binomial_u128(m, inst.k) <= 200_000 { Strategy::Exhaustive } else { Strategy::Auto };
        Ok(winning_committees(&inst.rule, e, inst.k, strategy)?.committees)
    };
    let new = list(&inst.manipulated_election(&profile.replacements))?;
    Ok(match inst.variant {
        Variant::Sdcm => {
            let old = list(&inst.full_election())?;
            inst.manipulators.iter().all(|v| sd_dominates(&new, &old, v.as_slice()).dominates)
        }
        variant => {
            let ext = if variant == Variant::Cbcm { Extension::Cardinality } else { Extension::Subset };
            let w = inst.baseline.as_ref().expect("validated");
            new.iter().all(|w2| inst.manipulators.iter().all(|v| prefers(ext, v, w2, w)))
        }
    })
}

/// Additive outcome from integer candidate scores.
pub(crate) fn int_outcome(scores: &[i64], k: usize) -> Outcome {
    let mut classes: BTreeMap<std::cmp::Reverse<i64>, Vec<usize>> = BTreeMap::new();
    for (c, &s) in scores.iter().enumerate() {
        classes.entry(std::cmp::Reverse(s)).or_default().push(c);
    }
    let classes: Vec<(Score, Vec<usize>)> = classes.into_iter().map(|(s, m)| (int(s.0), m)).collect();
    Outcome::Partition { part: partition_from_classes(&classes, k), k }
}

/// Honest AV scores as integers.
pub(crate) fn av_scores(election: &Election) -> Result<Vec<i64>> {
    Ok(crate::model::candidate_scores(&Rule::Av, election)?
        .iter()
        .map(|s| s.to_integer().try_into().expect("approval counts fit"))
        .collect())
}

/// Certifies a YES witness before it leaves a solver.
pub(crate) fn certified(inst: &ManipulationInstance, profile: BallotProfile) -> Result<Verdict<BallotProfile>> {
    if !certify_profile(inst, &profile)? {
        return Err(Error::Validation(format!("solver produced an invalid manipulation witness {profile:?}")));
    }
    Ok(Verdict::Yes(profile))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn preference_examples() {
        let c = |v: &[usize]| Committee::new(v.iter().copied());
        let (a, b, cc, d, x, y) = (0, 1, 2, 3, 4, 5);
        let v = Ballot::new([a, b]);
        assert!(prefers(Extension::Cardinality, &v, &c(&[a, b, cc]), &c(&[a, x, y])));
        assert!(!prefers(Extension::Subset, &v, &c(&[b, cc, d]), &c(&[a, cc, d])));
        assert!(prefers(Extension::Subset, &v, &c(&[a, b, cc]), &c(&[a, cc, d])));
    }

    #[test]
    fn sd_examples() {
        let c = |v: &[usize]| Committee::new(v.iter().copied());
        let r = sd_dominates(&[c(&[0])], &[c(&[0]), c(&[1])], &[0]);
        assert!(r.dominates);
        assert_eq!(r.witness_levels, vec![1]);
        let x = [c(&[0]), c(&[1])];
        assert!(!sd_dominates(&x, &x, &[0]).dominates);
        assert!(!sd_dominates(&[c(&[1])], &[c(&[0])], &[0]).dominates);
    }
}
