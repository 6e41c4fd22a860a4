use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::combinatorics::for_each_multiset;
use crate::error::{Error, Result};
use crate::manipulation::{av_scores, certified, int_outcome, BallotProfile, ManipulationInstance};
use crate::model::{candidate_scores, partition_from_classes, Ballot, Rule, Score};
use crate::verdict::Verdict;
use crate::winners::{outcome, Outcome};

/// Candidates a manipulator ballot may range over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SearchSpace {
    /// All of `C` for MAV and NSAV, where approving unwanted candidates can
    /// pay off; `C∨(V_M) ∪ w` for the other rules.
    #[default]
    Auto,
    /// `C∨(V_M) ∪ w`.
    Restricted,
    /// All of `C`.
    Full,
}

/// Search-space controls for the exhaustive manipulation oracle.
#[derive(Clone, Debug)]
pub struct BruteForceOptions {
    /// Which candidates manipulator ballots may contain.
    pub space: SearchSpace,
    /// Only try profiles in which every manipulator casts the same ballot.
    pub common_only: bool,
    /// Profiles tried (and certified) before the systematic search.
    pub hints: Vec<BallotProfile>,
    /// Largest number of profiles the search may visit.
    pub max_profiles: u128,
    /// Over the full space, search profiles up to permutations of
    /// interchangeable candidates when that space is smaller.
    pub symmetry: bool,
}

impl Default for BruteForceOptions {
    fn default() -> Self {
        BruteForceOptions {
            space: SearchSpace::Auto,
            common_only: false,
            hints: Vec::new(),
            max_profiles: crate::ip::solver_cap(20_000_000),
            symmetry: true,
        }
    }
}

pub fn solve_manipulation_bruteforce(inst: &ManipulationInstance) -> Result<Verdict<BallotProfile>> {
    solve_manipulation_bruteforce_with(inst, &BruteForceOptions::default())
}

pub fn solve_manipulation_bruteforce_with(
    inst: &ManipulationInstance,
    opts: &BruteForceOptions,
) -> Result<Verdict<BallotProfile>> {
    let old = inst.truthful_outcome()?;
    for hint in &opts.hints {
        if hint.replacements.len() == inst.t() {
            let new = outcome(&inst.rule, &inst.manipulated_election(&hint.replacements), inst.k)?;
            if inst.accepts(&new, old.as_ref()) {
                return certified(inst, hint.clone());
            }
        }
    }
    if !inst.good_committee_exists()? {
        return Ok(Verdict::No);
    }
    let full = match opts.space {
        SearchSpace::Auto => matches!(inst.rule, Rule::Mav | Rule::Nsav),
        SearchSpace::Restricted => false,
        SearchSpace::Full => true,
    };
    let space: Vec<usize> = if full {
        (0..inst.election.num_candidates()).collect()
    } else {
        let mut s = inst.manipulator_union();
        s.extend(inst.baseline.iter().flat_map(|w| w.members().iter().copied()));
        s.sort_unstable();
        s.dedup();
        s
    };
    let found = if inst.rule == Rule::Av {
        search_av_counts(inst, &space, old.as_ref(), opts)?
    } else if full && opts.symmetry && !opts.common_only && orbit_count(inst) < plain_count(inst, space.len()) {
        search_orbits(inst, old.as_ref(), opts)?
    } else {
        search_profiles(inst, &space, old.as_ref(), opts)?
    };
    match found {
        Some(profile) => certified(inst, profile),
        None => Ok(Verdict::No),
    }
}

/// Counts visited profiles against `max_profiles`.
struct Budget {
    visited: u128,
    cap: u128,
}

impl Budget {
    fn new(opts: &BruteForceOptions) -> Self {
        Budget { visited: 0, cap: opts.max_profiles }
    }

    fn spend(&mut self) -> Result<()> {
        self.visited += 1;
        if self.visited > self.cap {
            return Err(Error::CapExceeded(format!("more than {} manipulation profiles visited", self.cap)));
        }
        Ok(())
    }
}

/// Under AV only the per-candidate approval counts of the coalition matter.
fn search_av_counts(
    inst: &ManipulationInstance,
    space: &[usize],
    old: Option<&Outcome>,
    opts: &BruteForceOptions,
) -> Result<Option<BallotProfile>> {
    let t = inst.t();
    let base = av_scores(&inst.election)?;
    let s = space.len() as u32;
    if s >= 64 {
        return Err(Error::CapExceeded(format!("ballot space over {s} candidates")));
    }
    let mut budget = Budget::new(opts);
    let mut evaluate = |counts: &[usize]| -> Result<Option<BallotProfile>> {
        budget.spend()?;
        let mut scores = base.clone();
        for (&c, &n) in space.iter().zip(counts) {
            scores[c] += n as i64;
        }
        let new = int_outcome(&scores, inst.k);
        Ok(inst.accepts(&new, old).then(|| profile_from_counts(space, counts, t)))
    };
    // common ballots first: every count is 0 or t
    for mask in 0..(1u64 << s) {
        let counts: Vec<usize> = (0..space.len()).map(|i| if mask >> i & 1 == 1 { t } else { 0 }).collect();
        if let Some(p) = evaluate(&counts)? {
            return Ok(Some(p));
        }
    }
    if opts.common_only {
        return Ok(None);
    }
    let mut counts = vec![0usize; space.len()];
    loop {
        if counts.iter().any(|&n| n != 0 && n != t) {
            if let Some(p) = evaluate(&counts)? {
                return Ok(Some(p));
            }
        }
        let mut i = 0;
        while i < counts.len() && counts[i] == t {
            counts[i] = 0;
            i += 1;
        }
        if i == counts.len() {
            return Ok(None);
        }
        counts[i] += 1;
    }
}

fn profile_from_counts(space: &[usize], counts: &[usize], t: usize) -> BallotProfile {
    let replacements =
        (0..t).map(|j| Ballot::new(space.iter().zip(counts).filter(|(_, &n)| j < n).map(|(&c, _)| c))).collect();
    BallotProfile { replacements }
}

fn search_profiles(
    inst: &ManipulationInstance,
    space: &[usize],
    old: Option<&Outcome>,
    opts: &BruteForceOptions,
) -> Result<Option<BallotProfile>> {
    let t = inst.t();
    if space.len() > 24 {
        return Err(Error::CapExceeded(format!("ballot space over {} candidates", space.len())));
    }
    let ballots: Vec<Ballot> = (0..1u64 << space.len())
        .map(|mask| Ballot::new((0..space.len()).filter(|i| mask >> i & 1 == 1).map(|i| space[i])))
        .collect();
    let mut budget = Budget::new(opts);
    let scaled = if matches!(inst.rule, Rule::Sav | Rule::Nsav) { ScaledScores::new(inst, space)? } else { None };
    let mut error = None;
    let mut found = None;
    let mut try_profile = |idx: &[usize]| -> bool {
        if let Err(e) = budget.spend() {
            error = Some(e);
            return false;
        }
        let new = match &scaled {
            Some(sc) => Ok(sc.outcome(idx, inst.k)),
            None => {
                let replacements: Vec<Ballot> = idx.iter().map(|&i| ballots[i].clone()).collect();
                outcome(&inst.rule, &inst.manipulated_election(&replacements), inst.k)
            }
        };
        match new {
            Ok(new) => {
                if inst.accepts(&new, old) {
                    found = Some(BallotProfile { replacements: idx.iter().map(|&i| ballots[i].clone()).collect() });
                    return false;
                }
                true
            }
            Err(e) => {
                error = Some(e);
                false
            }
        }
    };
    let mut stopped = false;
    for b in 0..ballots.len() {
        if !try_profile(&vec![b; t]) {
            stopped = true;
            break;
        }
    }
    if !stopped && !opts.common_only {
        for_each_multiset(ballots.len(), t, |idx| idx.iter().all(|&i| i == idx[0]) || try_profile(idx));
    }
    if let Some(e) = error {
        return Err(e);
    }
    Ok(found)
}

fn plain_count(inst: &ManipulationInstance, space: usize) -> u128 {
    if space >= 100 {
        return u128::MAX;
    }
    let nb = 1u128.checked_shl(space as u32).unwrap_or(u128::MAX);
    if nb == u128::MAX || nb > usize::MAX as u128 {
        return u128::MAX;
    }
    crate::combinatorics::binomial_u128((nb + inst.t() as u128 - 1) as usize, inst.t())
}

/// Candidates with the same honest approvers, truthful manipulator approvers
/// and baseline membership are interchangeable.
fn symmetry_classes(inst: &ManipulationInstance) -> Vec<Vec<usize>> {
    let honest = inst.election.approvers();
    let mut manip = vec![Vec::new(); inst.election.num_candidates()];
    for (j, b) in inst.manipulators.iter().enumerate() {
        for &c in b.as_slice() {
            manip[c].push(j);
        }
    }
    let mut classes: BTreeMap<(Vec<usize>, Vec<usize>, bool), Vec<usize>> = BTreeMap::new();
    for c in 0..inst.election.num_candidates() {
        let in_w = inst.baseline.as_ref().is_some_and(|w| w.members().contains(&c));
        classes.entry((honest[c].clone(), manip[c].clone(), in_w)).or_default().push(c);
    }
    classes.into_values().collect()
}

fn orbit_count(inst: &ManipulationInstance) -> u128 {
    let t = inst.t();
    if t >= 20 {
        return u128::MAX;
    }
    let patterns = 1usize << t;
    symmetry_classes(inst).iter().fold(1u128, |acc, class| {
        acc.saturating_mul(crate::combinatorics::binomial_u128(class.len() + patterns - 1, class.len()))
    })
}

/// Search over profiles up to permutations inside symmetry classes: per
/// class, only the multiset of per-candidate approval patterns matters.
fn search_orbits(
    inst: &ManipulationInstance,
    old: Option<&Outcome>,
    opts: &BruteForceOptions,
) -> Result<Option<BallotProfile>> {
    let mut budget = Budget::new(opts);
    let t = inst.t();
    let classes = symmetry_classes(inst);
    let patterns = 1usize << t;
    let mut chosen: Vec<Vec<usize>> = vec![Vec::new(); classes.len()];
    let mut found = None;
    let mut error = None;
    fn rec(
        i: usize,
        classes: &[Vec<usize>],
        patterns: usize,
        chosen: &mut Vec<Vec<usize>>,
        visit: &mut dyn FnMut(&[Vec<usize>]) -> bool,
    ) -> bool {
        if i == classes.len() {
            return visit(chosen);
        }
        let mut go_on = true;
        for_each_multiset(patterns, classes[i].len(), |idx| {
            chosen[i] = idx.to_vec();
            go_on = rec(i + 1, classes, patterns, chosen, visit);
            go_on
        });
        go_on
    }
    rec(0, &classes, patterns, &mut chosen, &mut |chosen| {
        if let Err(e) = budget.spend() {
            error = Some(e);
            return false;
        }
        let mut members = vec![Vec::new(); t];
        for (class, pats) in classes.iter().zip(chosen) {
            for (&c, &pat) in class.iter().zip(pats) {
                for (j, m) in members.iter_mut().enumerate() {
                    if pat >> j & 1 == 1 {
                        m.push(c);
                    }
                }
            }
        }
        let replacements: Vec<Ballot> = members.into_iter().map(Ballot::new).collect();
        match outcome(&inst.rule, &inst.manipulated_election(&replacements), inst.k) {
            Ok(new) if inst.accepts(&new, old) => {
                found = Some(BallotProfile { replacements });
                false
            }
            Ok(_) => true,
            Err(e) => {
                error = Some(e);
                false
            }
        }
    });
    match error {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

/// SAV/NSAV scores scaled to integers. Candidates of the ballot space are kept
/// apart; all others are grouped by honest score, as every ballot shifts them alike.
struct ScaledScores {
    units: Vec<Vec<usize>>,
    honest: Vec<i128>,
    /// `shift[ballot][unit]`, ballots indexed by bitmask over the space
    shift: Vec<Vec<i128>>,
}

impl ScaledScores {
    fn new(inst: &ManipulationInstance, space: &[usize]) -> Result<Option<Self>> {
        let m = inst.election.num_candidates();
        let honest = candidate_scores(&inst.rule, &inst.election)?;
        let mut lcm = BigInt::one();
        for s in &honest {
            lcm = lcm.lcm(s.denom());
        }
        for d in (1..=space.len()).chain((0..=space.len()).filter(|&j| j < m).map(|j| m - j)) {
            lcm = lcm.lcm(&BigInt::from(d));
        }
        if lcm.bits() > 80 {
            return Ok(None);
        }
        let scale = |s: &Score| -> i128 { (s * &lcm).to_integer().to_i128().expect("bounded by the bit check") };
        let l = lcm.to_i128().expect("bounded by the bit check");
        let mut units: Vec<Vec<usize>> = space.iter().map(|&c| vec![c]).collect();
        let mut rest: BTreeMap<&Score, Vec<usize>> = BTreeMap::new();
        for c in (0..m).filter(|c| space.binary_search(c).is_err()) {
            rest.entry(&honest[c]).or_default().push(c);
        }
        units.extend(rest.into_values());
        let base: Vec<i128> = units.iter().map(|u| scale(&honest[u[0]])).collect();
        let nsav = inst.rule == Rule::Nsav;
        let shift = (0..1usize << space.len())
            .map(|mask| {
                let size = mask.count_ones() as usize;
                (0..units.len())
                    .map(|u| {
                        if u < space.len() && mask >> u & 1 == 1 {
                            l / size as i128
                        } else if nsav && size < m {
                            -l / (m - size) as i128
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Some(ScaledScores { units, honest: base, shift }))
    }

    fn outcome(&self, ballots: &[usize], k: usize) -> Outcome {
        let mut scores = self.honest.clone();
        for &b in ballots {
            for (s, d) in scores.iter_mut().zip(&self.shift[b]) {
                *s += d;
            }
        }
        let mut order: Vec<usize> = (0..scores.len()).collect();
        order.sort_by(|&a, &b| scores[b].cmp(&scores[a]));
        let mut classes: Vec<(Score, Vec<usize>)> = Vec::new();
        let mut last = None;
        for u in order {
            if last == Some(scores[u]) {
                classes.last_mut().expect("previous class").1.extend_from_slice(&self.units[u]);
            } else {
                classes.push((Score::from_integer(scores[u].into()), self.units[u].clone()));
                last = Some(scores[u]);
            }
        }
        Outcome::Partition { part: partition_from_classes(&classes, k), k }
    }
}
