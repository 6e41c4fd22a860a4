//! Winning committees, J-CC, Lemma-1 single winners and star partitions.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::combinatorics::{binomial, binomial_u128, colex_cmp, Combinations};
use crate::error::{Error, Result};
use crate::model::{
    candidate_scores, int, partition_candidates, Ballot, Committee, Election, Rule, Score, ThresholdPartition,
};

/// Default cap on the number of committees an exhaustive search may visit.
pub const DEFAULT_COMMITTEE_CAP: u128 = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    Exhaustive,
    Partition,
}

/// All optimal committees, colexicographically ordered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WinningSet {
    pub committees: Vec<Committee>,
    pub optimum: Score,
}

/// Comparable committee quality; larger is better regardless of rule orientation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Goodness {
    Int(i128),
    Rat(Score),
}

enum Kernel {
    /// Thiele weights scaled to integers when that fits, rational otherwise.
    Thiele {
        omega: Vec<Score>,
        scaled: Option<Vec<i128>>,
    },
    Mav,
    Additive(Vec<Score>),
}

/// Scores committees of one fixed size in one election.
pub(crate) struct Evaluator<'a> {
    election: &'a Election,
    masks: Option<Vec<u128>>,
    kernel: Kernel,
}

fn scale_to_integers(values: &[Score]) -> Option<Vec<i128>> {
    let mut lcm = num_bigint::BigInt::from(1);
    for v in values {
        lcm = lcm.lcm(v.denom());
    }
    values.iter().map(|v| (v.numer() * (&lcm / v.denom())).to_i128()).collect()
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(rule: &Rule, election: &'a Election, k: usize) -> Result<Self> {
        let kernel = match rule {
            Rule::Mav => Kernel::Mav,
            Rule::Sav | Rule::Nsav => Kernel::Additive(candidate_scores(rule, election)?),
            _ => {
                let omega = rule.thiele_table(k)?;
                let scaled = scale_to_integers(&omega)
                    .filter(|w| w.iter().all(|x| x.unsigned_abs() < (1u128 << 80)) && election.num_votes() < (1 << 40));
                Kernel::Thiele { omega, scaled }
            }
        };
        let masks = (election.num_candidates() <= 128)
            .then(|| election.votes().iter().map(|v| v.iter().fold(0u128, |acc, c| acc | (1u128 << c))).collect());
        Ok(Evaluator { election, masks, kernel })
    }

    fn overlaps(&self, w: &[usize], mut f: impl FnMut(usize, usize)) {
        match &self.masks {
            Some(masks) => {
                let wm = w.iter().fold(0u128, |acc, &c| acc | (1u128 << c));
                for m in masks {
                    f((m & wm).count_ones() as usize, m.count_ones() as usize);
                }
            }
            None => {
                for v in self.election.votes() {
                    f(v.overlap(w), v.len());
                }
            }
        }
    }

    pub(crate) fn goodness(&self, w: &[usize]) -> Goodness {
        match &self.kernel {
            Kernel::Mav => {
                let mut worst = 0usize;
                self.overlaps(w, |o, len| worst = worst.max(w.len() + len - 2 * o));
                Goodness::Int(-(worst as i128))
            }
            Kernel::Thiele { scaled: Some(weights), .. } => {
                let mut total = 0i128;
                self.overlaps(w, |o, _| total += weights[o]);
                Goodness::Int(total)
            }
            _ => Goodness::Rat(self.score(w)),
        }
    }

    pub(crate) fn score(&self, w: &[usize]) -> Score {
        match &self.kernel {
            Kernel::Mav => {
                let mut worst = 0usize;
                self.overlaps(w, |o, len| worst = worst.max(w.len() + len - 2 * o));
                int(worst as i64)
            }
            Kernel::Thiele { omega, .. } => {
                let mut counts = vec![0i64; w.len() + 1];
                self.overlaps(w, |o, _| counts[o] += 1);
                counts.iter().zip(omega).fold(Score::zero(), |acc, (&n, o)| acc + o * int(n))
            }
            Kernel::Additive(scores) => w.iter().fold(Score::zero(), |acc, &c| acc + &scores[c]),
        }
    }
}

fn check_k(k: usize, m: usize) -> Result<()> {
    if k == 0 || k > m {
        Err(Error::KOutOfRange { k, m })
    } else {
        Ok(())
    }
}

fn check_cap(m: usize, k: usize, cap: u128) -> Result<()> {
    let count = binomial_u128(m, k);
    if count > cap {
        Err(Error::CapExceeded(format!("C({m},{k}) = {count} committees exceeds cap {cap}")))
    } else {
        Ok(())
    }
}

pub fn winning_committees(rule: &Rule, election: &Election, k: usize, strategy: Strategy) -> Result<WinningSet> {
    winning_committees_with_cap(rule, election, k, strategy, crate::ip::solver_cap(DEFAULT_COMMITTEE_CAP))
}

pub fn winning_committees_with_cap(
    rule: &Rule,
    election: &Election,
    k: usize,
    strategy: Strategy,
    cap: u128,
) -> Result<WinningSet> {
    check_k(k, election.num_candidates())?;
    match (strategy, rule.is_additive()) {
        (Strategy::Partition, false) => {
            Err(Error::Unsupported(format!("partition strategy needs an additive rule, got {rule}")))
        }
        (Strategy::Partition, true) | (Strategy::Auto, true) => {
            let part = partition_candidates(rule, election, k)?;
            let outcome = Outcome::Partition { part, k };
            let committees = outcome.committees(cap)?;
            let optimum = crate::model::committee_score(rule, election, &committees[0])?;
            Ok(WinningSet { committees, optimum })
        }
        _ => exhaustive_winners(rule, election, k, cap),
    }
}

fn exhaustive_winners(rule: &Rule, election: &Election, k: usize, cap: u128) -> Result<WinningSet> {
    check_cap(election.num_candidates(), k, cap)?;
    let eval = Evaluator::new(rule, election, k)?;
    let mut best: Option<Goodness> = None;
    let mut winners: Vec<Committee> = Vec::new();
    let mut it = Combinations::new(election.num_candidates(), k);
    while let Some(w) = it.next_ref() {
        let g = eval.goodness(w);
        match best.as_ref().map(|b| g.cmp(b)) {
            Some(std::cmp::Ordering::Less) => {}
            Some(std::cmp::Ordering::Equal) => winners.push(Committee::new(w.iter().copied())),
            _ => {
                best = Some(g);
                winners.clear();
                winners.push(Committee::new(w.iter().copied()));
            }
        }
    }
    let optimum = eval.score(winners[0].members());
    Ok(WinningSet { committees: winners, optimum })
}

/// The winning set of an election, kept in factored form for additive rules.
#[derive(Clone, Debug)]
pub enum Outcome {
    Partition { part: ThresholdPartition, k: usize },
    Explicit(Vec<Committee>),
}

/// Winners under the cheapest exact method: partition for additive rules, enumeration otherwise.
pub fn outcome(rule: &Rule, election: &Election, k: usize) -> Result<Outcome> {
    check_k(k, election.num_candidates())?;
    if rule.is_additive() {
        Ok(Outcome::Partition { part: partition_candidates(rule, election, k)?, k })
    } else {
        Ok(Outcome::Explicit(
            exhaustive_winners(rule, election, k, crate::ip::solver_cap(DEFAULT_COMMITTEE_CAP))?.committees,
        ))
    }
}

impl Outcome {
    pub fn k(&self) -> usize {
        match self {
            Outcome::Partition { k, .. } => *k,
            Outcome::Explicit(ws) => ws[0].k(),
        }
    }

    pub fn count(&self) -> BigUint {
        match self {
            Outcome::Partition { part, k } => binomial(part.pwin.len(), k - part.swin.len()),
            Outcome::Explicit(ws) => BigUint::from(ws.len()),
        }
    }

    pub fn is_unique(&self) -> bool {
        self.count() == BigUint::from(1u32)
    }

    /// `hist[i]` = number of winners `w` with `|w ∩ set| = i`, for `i` in `0..=k`.
    pub fn overlap_histogram(&self, set: &[usize]) -> Vec<BigUint> {
        let k = self.k();
        let mut hist = vec![BigUint::zero(); k + 1];
        match self {
            Outcome::Partition { part, k } => {
                let a = part.swin.iter().filter(|c| set.binary_search(c).is_ok()).count();
                let p = part.pwin.len();
                let b = part.pwin.iter().filter(|c| set.binary_search(c).is_ok()).count();
                let r = k - part.swin.len();
                for j in 0..=r.min(b) {
                    hist[a + j] += binomial(b, j) * binomial(p - b, r - j);
                }
            }
            Outcome::Explicit(ws) => {
                for w in ws {
                    hist[w.overlap(set)] += 1u32;
                }
            }
        }
        hist
    }

    /// Smallest `|w ∩ set|` over all winners.
    pub fn min_overlap(&self, set: &[usize]) -> usize {
        match self {
            Outcome::Partition { part, k } => {
                let a = part.swin.iter().filter(|c| set.binary_search(c).is_ok()).count();
                let outside = part.pwin.iter().filter(|c| set.binary_search(c).is_err()).count();
                let r = k - part.swin.len();
                a + r.saturating_sub(outside)
            }
            Outcome::Explicit(ws) => ws.iter().map(|w| w.overlap(set)).min().unwrap_or(0),
        }
    }

    /// Whether every winner contains all of `set`.
    pub fn all_contain(&self, set: &[usize]) -> bool {
        match self {
            Outcome::Partition { part, k } => set.iter().all(|c| {
                part.swin.binary_search(c).is_ok()
                    || (part.pwin.binary_search(c).is_ok() && part.swin.len() + part.pwin.len() == *k)
            }),
            Outcome::Explicit(ws) => ws.iter().all(|w| w.contains_all(set)),
        }
    }

    pub fn is_winner(&self, w: &Committee) -> bool {
        match self {
            Outcome::Partition { part, k } => part.is_winning(w, *k),
            Outcome::Explicit(ws) => ws.contains(w),
        }
    }

    /// Materializes the winners in colexicographic order.
    pub fn committees(&self, cap: u128) -> Result<Vec<Committee>> {
        match self {
            Outcome::Partition { part, k } => {
                let r = k - part.swin.len();
                check_cap(part.pwin.len(), r, cap)?;
                let mut out: Vec<Committee> = Combinations::new(part.pwin.len(), r)
                    .map(|pos| Committee::new(part.swin.iter().copied().chain(pos.into_iter().map(|i| part.pwin[i]))))
                    .collect();
                out.sort_by(|a, b| colex_cmp(a.members(), b.members()));
                Ok(out)
            }
            Outcome::Explicit(ws) => Ok(ws.clone()),
        }
    }
}

/// Single MAV winners from the largest ballots.
///
/// With `x` the largest ballot size and `C′` the candidates approved by every
/// ballot of size `x`: if `C′` is empty all candidates tie at `x + 1`.
/// Otherwise members of `C′` score `x − 1`, or `x` when some ballot of size
/// `x − 1` omits them, and everyone else scores at least `x + 1`.
pub fn mav_single_winners(election: &Election) -> Vec<usize> {
    let m = election.num_candidates();
    let Some(max) = election.votes().iter().map(Ballot::len).max() else {
        return (0..m).collect();
    };
    let mut common: Option<Vec<usize>> = None;
    for v in election.votes().iter().filter(|v| v.len() == max) {
        common = Some(match common {
            None => v.as_slice().to_vec(),
            Some(acc) => acc.into_iter().filter(|&c| v.contains(c)).collect(),
        });
    }
    let common = match common {
        Some(c) if !c.is_empty() => c,
        _ => return (0..m).collect(),
    };
    let best: Vec<usize> = common
        .iter()
        .copied()
        .filter(|&c| election.votes().iter().all(|v| v.len() + 1 != max || v.contains(c)))
        .collect();
    if best.is_empty() {
        common
    } else {
        best
    }
}

/// One class of candidates sharing the same approver set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarGroup {
    pub voters: Vec<usize>,
    pub candidates: Vec<usize>,
}

/// Candidates partitioned by approver set, ordered by smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarPartition {
    pub groups: Vec<StarGroup>,
}

impl StarPartition {
    pub fn group_of(&self, c: usize) -> usize {
        self.groups.iter().position(|g| g.candidates.binary_search(&c).is_ok()).expect("partition covers C")
    }
}

pub fn star_partition(election: &Election) -> StarPartition {
    let mut map: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut groups: Vec<StarGroup> = Vec::new();
    for (c, voters) in election.approvers().into_iter().enumerate() {
        match map.get(&voters) {
            Some(&g) => groups[g].candidates.push(c),
            None => {
                map.insert(voters.clone(), groups.len());
                groups.push(StarGroup { voters, candidates: vec![c] });
            }
        }
    }
    StarPartition { groups }
}

/// Does `J` lie in every winning k-committee?
#[derive(Clone, Debug)]
pub struct JccInstance {
    pub election: Election,
    pub k: usize,
    pub j: Vec<usize>,
}

impl JccInstance {
    pub fn new(election: Election, k: usize, j: Vec<usize>) -> Result<Self> {
        let mut j = j;
        j.sort_unstable();
        j.dedup();
        let m = election.num_candidates();
        if j.is_empty() || j.len() > k || k > m {
            return Err(Error::Validation(format!("need 1 ≤ |J| ≤ k ≤ |C|, got |J|={}, k={k}, |C|={m}", j.len())));
        }
        if let Some(&c) = j.last() {
            if c >= m {
                return Err(Error::CandidateOutOfRange { index: c, m });
            }
        }
        Ok(JccInstance { election, k, j })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JccAlgo {
    Auto,
    BruteForce,
    FptN,
}

pub fn j_cc(rule: &Rule, inst: &JccInstance, algo: JccAlgo) -> Result<bool> {
    match algo {
        JccAlgo::Auto if rule.is_additive() => {
            let part = partition_candidates(rule, &inst.election, inst.k)?;
            Ok(Outcome::Partition { part, k: inst.k }.all_contain(&inst.j))
        }
        JccAlgo::Auto | JccAlgo::BruteForce => j_cc_exhaustive(rule, &inst.election, inst.k, &inst.j),
        JccAlgo::FptN => crate::jcc_fpt::j_cc_fpt_n(rule, inst),
    }
}

/// J-CC by enumerating all committees, comparing the best with and without J.
pub fn j_cc_exhaustive(rule: &Rule, election: &Election, k: usize, j: &[usize]) -> Result<bool> {
    check_k(k, election.num_candidates())?;
    check_cap(election.num_candidates(), k, crate::ip::solver_cap(DEFAULT_COMMITTEE_CAP))?;
    let eval = Evaluator::new(rule, election, k)?;
    let mut with: Option<Goodness> = None;
    let mut without: Option<Goodness> = None;
    let mut it = Combinations::new(election.num_candidates(), k);
    while let Some(w) = it.next_ref() {
        let has_j = j.iter().all(|c| w.binary_search(c).is_ok());
        let slot = if has_j { &mut with } else { &mut without };
        let g = eval.goodness(w);
        if slot.as_ref().is_none_or(|b| g > *b) {
            *slot = Some(g);
        }
    }
    Ok(match (with, without) {
        (_, None) => true,
        (None, Some(_)) => false,
        (Some(a), Some(b)) => a > b,
    })
}

/// Exact optimum score of an election (orientation-aware), by enumeration.
pub fn optimum_score(rule: &Rule, election: &Election, k: usize) -> Result<Score> {
    Ok(exhaustive_winners(rule, election, k, crate::ip::solver_cap(DEFAULT_COMMITTEE_CAP))?.optimum)
}
