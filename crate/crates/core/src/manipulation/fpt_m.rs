//! Manipulation algorithms parameterized by the number of candidates.

use num_traits::Zero;

use crate::combinatorics::{subsets_of, subsets_up_to, Combinations};
use crate::error::{Error, Result};
use crate::ip::{IntegerProgram, Relation};
use crate::manipulation::{av_scores, certified, int_outcome, BallotProfile, ManipulationInstance, Variant};
use crate::model::{candidate_scores, vote_contribution, Ballot, Committee, Rule, Score, ThresholdPartition};
use crate::verdict::Verdict;
use crate::winners::Outcome;

const MAX_M_AV: usize = 22;
const MAX_M_ILP: usize = 8;

/// AV manipulation by trying every common ballot of at most `k` candidates.
pub fn solve_manipulation_fpt_m_av(inst: &ManipulationInstance) -> Result<Verdict<BallotProfile>> {
    if inst.rule != Rule::Av {
        return Err(Error::Unsupported(format!("common-ballot enumeration needs AV, got {}", inst.rule)));
    }
    if inst.variant == Variant::Sdcm {
        return Err(Error::Unsupported("use the SDCM program for stochastic domination".into()));
    }
    let m = inst.election.num_candidates();
    if m > MAX_M_AV {
        return Err(Error::CapExceeded(format!("{m} candidates exceed the cap of {MAX_M_AV}")));
    }
    let base = av_scores(&inst.election)?;
    let t = inst.t() as i64;
    let all: Vec<usize> = (0..m).collect();
    for ballot in subsets_up_to(&all, inst.k) {
        let mut scores = base.clone();
        for &c in &ballot {
            scores[c] += t;
        }
        if inst.accepts(&int_outcome(&scores, inst.k), None) {
            return certified(inst, BallotProfile { replacements: vec![Ballot::new(ballot); inst.t()] });
        }
    }
    Ok(Verdict::No)
}

/// CBCM/SBCM for AV, SAV or NSAV through one integer program per candidate winning collection.
pub fn solve_manipulation_fpt_m_additive(inst: &ManipulationInstance) -> Result<Verdict<BallotProfile>> {
    if inst.variant == Variant::Sdcm {
        return Err(Error::Unsupported("use the SDCM program for stochastic domination".into()));
    }
    collections_program(inst)
}

/// SDCM for additive rules: collections that dominate the truthful winners, then the same programs.
pub fn solve_sdcm_fpt_m(inst: &ManipulationInstance) -> Result<Verdict<BallotProfile>> {
    if inst.variant != Variant::Sdcm {
        return Err(Error::Unsupported("this solver decides SDCM only".into()));
    }
    collections_program(inst)
}

/// Candidate winner sets of an additive rule: single committees and
/// `{Sw ∪ X : X ⊆ Pw, |X| = k − |Sw|}` families.
fn score_consistent_collections(m: usize, k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out: Vec<(Vec<usize>, Vec<usize>)> = Combinations::new(m, k).map(|w| (w, Vec::new())).collect();
    let mut code = vec![0u8; m];
    loop {
        let sw: Vec<usize> = (0..m).filter(|&c| code[c] == 1).collect();
        let pw: Vec<usize> = (0..m).filter(|&c| code[c] == 2).collect();
        if sw.len() < k && sw.len() + pw.len() > k {
            out.push((sw, pw));
        }
        let mut i = 0;
        while i < m && code[i] == 2 {
            code[i] = 0;
            i += 1;
        }
        if i == m {
            break;
        }
        code[i] += 1;
    }
    out
}

fn collections_program(inst: &ManipulationInstance) -> Result<Verdict<BallotProfile>> {
    if !inst.rule.is_additive() {
        return Err(Error::Unsupported(format!("the collection programs need an additive rule, got {}", inst.rule)));
    }
    let m = inst.election.num_candidates();
    if m > MAX_M_ILP {
        return Err(Error::CapExceeded(format!("{m} candidates exceed the cap of {MAX_M_ILP}")));
    }
    let k = inst.k;
    let honest = candidate_scores(&inst.rule, &inst.election)?;
    let old = inst.truthful_outcome()?;
    // manipulators grouped by truthful ballot
    let mut types: Vec<(Ballot, Vec<usize>)> = Vec::new();
    for (i, v) in inst.manipulators.iter().enumerate() {
        match types.iter_mut().find(|(b, _)| b == v) {
            Some((_, members)) => members.push(i),
            None => types.push((v.clone(), vec![i])),
        }
    }
    let ballots: Vec<u64> = (0..1u64 << m).collect();
    let contrib: Vec<Vec<Score>> = ballots
        .iter()
        .map(|&b| (0..m).map(|c| vote_contribution(&inst.rule, m, b.count_ones() as usize, b >> c & 1 == 1)).collect())
        .collect();
    let committees: Vec<Vec<usize>> = Combinations::new(m, k).collect();
    for (sw, pw) in score_consistent_collections(m, k) {
        let part =
            ThresholdPartition { threshold: Score::zero(), swin: sw.clone(), pwin: pw.clone(), slose: Vec::new() };
        let family = Outcome::Partition { part, k };
        if !inst.accepts(&family, old.as_ref()) {
            continue;
        }
        let mut p = IntegerProgram::new();
        let vars: Vec<Vec<usize>> = types
            .iter()
            .enumerate()
            .map(|(s, (_, members))| {
                ballots.iter().map(|&b| p.add_var(format!("x_{s}_{b}"), 0, members.len() as i64)).collect()
            })
            .collect();
        for (s, (_, members)) in types.iter().enumerate() {
            let terms: Vec<(usize, i64)> = vars[s].iter().map(|&x| (x, 1)).collect();
            p.add_int_constraint(&terms, Relation::Eq, members.len() as i64);
        }
        // committee score as constant + linear part in the x variables
        let score_of = |w: &[usize]| -> (Score, Vec<(usize, Score)>) {
            let constant = w.iter().fold(Score::zero(), |acc, &c| acc + &honest[c]);
            let mut terms = Vec::new();
            for (s, row) in vars.iter().enumerate() {
                let _ = s;
                for (b, &x) in row.iter().enumerate() {
                    let coef = w.iter().fold(Score::zero(), |acc, &c| acc + &contrib[b][c]);
                    if !coef.is_zero() {
                        terms.push((x, coef));
                    }
                }
            }
            (constant, terms)
        };
        let members: Vec<Vec<usize>> = if pw.is_empty() {
            vec![sw.clone()]
        } else {
            subsets_of(&pw, k - sw.len())
                .map(|x| Committee::new(sw.iter().copied().chain(x)).members().to_vec())
                .collect()
        };
        let (c0, t0) = score_of(&members[0]);
        let difference = |other: &[usize]| -> (Vec<(usize, Score)>, Score) {
            let (c1, t1) = score_of(other);
            let mut terms = t0.clone();
            terms.extend(t1.into_iter().map(|(x, a)| (x, -a)));
            (terms, c1 - &c0)
        };
        for w in &members[1..] {
            let (terms, rhs) = difference(w);
            p.add_constraint(terms, Relation::Eq, rhs);
        }
        for w in &committees {
            if members.iter().any(|x| x == w) {
                continue;
            }
            let (terms, rhs) = difference(w);
            p.add_constraint(terms, Relation::Gt, rhs);
        }
        if let Some(sol) = p.find()? {
            let mut replacements = vec![Ballot::empty(); inst.t()];
            for (s, (_, group)) in types.iter().enumerate() {
                let mut slots = group.iter();
                for (b, &x) in vars[s].iter().enumerate() {
                    for _ in 0..sol.value(x) {
                        let slot = *slots.next().expect("counts sum to the group size");
                        replacements[slot] = Ballot::new((0..m).filter(|&c| b >> c & 1 == 1));
                    }
                }
            }
            return certified(inst, BallotProfile { replacements });
        }
    }
    Ok(Verdict::No)
}

#[cfg(test)]
mod tests {
    use super::score_consistent_collections;

    #[test]
    fn collection_count() {
        // m=3, k=1: three singletons plus (∅, P) with |P| ≥ 2: four families
        assert_eq!(score_consistent_collections(3, 1).len(), 7);
    }
}
