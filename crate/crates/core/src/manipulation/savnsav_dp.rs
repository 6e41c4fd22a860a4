//! Dynamic program for SAV/NSAV manipulation with a constant number of manipulators.
//!
//! Candidates approved by the manipulators are grouped by the exact set `S` of
//! manipulators approving them; under NSAV the remaining candidates form one
//! more group that manipulators may approve as well. For every guess of ballot sizes and every
//! candidate threshold `s`, one table per group records which combinations of
//! (#above `s`, #at `s`, per-manipulator approvals) are reachable; the groups are
//! then combined and the acceptance inequalities are checked.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::manipulation::{certified, BallotProfile, ManipulationInstance, Variant};
use crate::model::{candidate_scores, frac, Ballot, Rule, Score};
use crate::verdict::Verdict;

/// Largest number of manipulators accepted.
pub const MAX_MANIPULATORS: usize = 3;
const GUESS_CAP: u128 = 50_000_000;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Mode {
    Cardinality,
    /// every winning committee equals the set of candidates scoring at least `s`
    SubsetUnique,
    /// ties at `s`; retained candidates must score strictly above `s`
    SubsetMultiple,
}

/// Table state: candidates above, at the threshold, and per-manipulator approvals.
/// Packed table cell: byte 0 counts candidates above `s`, byte 1 those at `s`,
/// byte `2 + v` the approvals of manipulator `v`.
type Cell = u64;

/// One layer of a group table with back pointers (previous cell, approving set).
type Layer = HashMap<Cell, (Cell, usize)>;

struct Group {
    mask: usize,
    candidates: Vec<usize>,
}

/// Packed aggregate over groups: above, equal, then per manipulator the
/// above/equal counts among its approved candidates and its used approvals.
type Agg = u128;

fn field(x: u128, i: usize) -> usize {
    (x >> (8 * i) & 0xff) as usize
}

pub fn solve_savnsav_const_manipulators(inst: &ManipulationInstance) -> Result<Verdict<BallotProfile>> {
    if !matches!(inst.rule, Rule::Sav | Rule::Nsav) {
        return Err(Error::Unsupported(format!("the table algorithm needs SAV or NSAV, got {}", inst.rule)));
    }
    let modes: &[Mode] = match inst.variant {
        Variant::Cbcm => &[Mode::Cardinality],
        Variant::Sbcm => &[Mode::SubsetUnique, Mode::SubsetMultiple],
        Variant::Sdcm => return Err(Error::Unsupported("SDCM is decided by the collection programs".into())),
    };
    let t = inst.t();
    if t > MAX_MANIPULATORS {
        return Err(Error::CapExceeded(format!("{t} manipulators exceed the cap of {MAX_MANIPULATORS}")));
    }
    let m = inst.election.num_candidates();
    let w = inst.baseline.as_ref().expect("baseline committee required");
    let honest = candidate_scores(&inst.rule, &inst.election)?;
    let union = inst.manipulator_union();
    // under NSAV approving an unwanted candidate raises the penalty on the
    // rest, so every candidate may appear on a ballot
    let approvable = if inst.rule == Rule::Nsav { m } else { union.len() };
    if approvable > 255 {
        return Err(Error::CapExceeded(format!("{approvable} approvable candidates exceed the table width")));
    }
    let guesses = (approvable as u128 + 1).pow(t as u32);
    if guesses > crate::ip::solver_cap(GUESS_CAP) {
        return Err(Error::CapExceeded(format!("{guesses} ballot-size guesses exceed the cap")));
    }

    let mut groups: Vec<Group> = Vec::new();
    for &c in &union {
        let mask = (0..t).filter(|&v| inst.manipulators[v].contains(c)).fold(0, |acc, v| acc | 1 << v);
        match groups.iter_mut().find(|g| g.mask == mask) {
            Some(g) => g.candidates.push(c),
            None => groups.push(Group { mask, candidates: vec![c] }),
        }
    }
    let mut outside: Vec<usize> = (0..m).filter(|c| union.binary_search(c).is_err()).collect();
    if inst.rule == Rule::Nsav && !outside.is_empty() {
        groups.push(Group { mask: 0, candidates: std::mem::take(&mut outside) });
    }
    groups.sort_by_key(|g| g.mask);
    let retained: Vec<usize> = (0..t).map(|v| inst.manipulators[v].overlap(w.members())).collect();

    let mut sizes = vec![0usize; t];
    loop {
        if let Some(profile) = solve_guess(inst, &sizes, &honest, &groups, &outside, &retained, modes, m)? {
            return certified(inst, profile);
        }
        let mut i = 0;
        while i < t && sizes[i] == approvable {
            sizes[i] = 0;
            i += 1;
        }
        if i == t {
            return Ok(Verdict::No);
        }
        sizes[i] += 1;
    }
}

/// Scores of one candidate for every set of approving manipulators.
fn score_table(rule: &Rule, honest: &Score, sizes: &[usize], m: usize) -> Vec<Score> {
    let t = sizes.len();
    (0..1usize << t)
        .map(|set| {
            let mut s = honest.clone();
            for (v, &size) in sizes.iter().enumerate() {
                if set >> v & 1 == 1 {
                    if size > 0 {
                        s += frac(1, size as i64);
                    }
                } else if *rule == Rule::Nsav && size < m {
                    s -= frac(1, (m - size) as i64);
                }
            }
            s
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn solve_guess(
    inst: &ManipulationInstance,
    sizes: &[usize],
    honest: &[Score],
    groups: &[Group],
    outside: &[usize],
    retained: &[usize],
    modes: &[Mode],
    m: usize,
) -> Result<Option<BallotProfile>> {
    let t = sizes.len();
    let k = inst.k;
    // approving sets must avoid manipulators with empty ballots
    let allowed = (0..t).filter(|&v| sizes[v] > 0).fold(0usize, |acc, v| acc | 1 << v);
    let sets: Vec<usize> = (0..1usize << t).filter(|s| s & !allowed == 0).collect();
    let tables: Vec<Vec<Vec<Score>>> = groups
        .iter()
        .map(|g| g.candidates.iter().map(|&c| score_table(&inst.rule, &honest[c], sizes, m)).collect())
        .collect();
    let fixed: Vec<Score> = outside.iter().map(|&c| score_table(&inst.rule, &honest[c], sizes, m)[0].clone()).collect();

    let mut thresholds: BTreeSet<&Score> = fixed.iter().collect();
    for group in &tables {
        for row in group {
            thresholds.extend(sets.iter().map(|&s| &row[s]));
        }
    }
    let thresholds: Vec<&Score> = thresholds.into_iter().collect();
    // scores of excluded approving sets are never looked up
    let rank = |x: &Score| thresholds.binary_search(&x).unwrap_or(0);
    let ranks: Vec<Vec<Vec<usize>>> =
        tables.iter().map(|g| g.iter().map(|row| row.iter().map(rank).collect()).collect()).collect();
    let fixed: Vec<usize> = fixed.iter().map(rank).collect();
    let w = inst.baseline.as_ref().expect("baseline committee required");
    for s in (0..thresholds.len()).rev() {
        let above_out = fixed.iter().filter(|&&x| x > s).count();
        let equal_out = fixed.iter().filter(|&&x| x == s).count();
        for &mode in modes {
            // counts above `s` only grow, as does the number of candidates at or above `s`
            let bounded = |above: usize, at_least: usize| match mode {
                Mode::SubsetUnique => at_least + above_out + equal_out <= k,
                _ => above + above_out < k,
            };
            let layers: Vec<Vec<Layer>> = groups
                .iter()
                .zip(&ranks)
                .map(|(g, rows)| fill_table(g, rows, s, sizes, &sets, mode, |c| w.contains(c), bounded))
                .collect();
            let accept = |a: Agg| -> bool {
                let above = field(a, 0) + above_out;
                let total = above + field(a, 1) + equal_out;
                if (0..t).any(|v| field(a, 2 + 2 * t + v) != sizes[v]) {
                    return false;
                }
                let above_v = |v: usize| field(a, 2 + v);
                let equal_v = |v: usize| field(a, 2 + t + v);
                match mode {
                    Mode::Cardinality => {
                        above < k
                            && total > above
                            && total >= k
                            && (0..t).all(|v| above_v(v) + (k + equal_v(v)).saturating_sub(total) > retained[v])
                    }
                    Mode::SubsetUnique => total == k && (0..t).all(|v| above_v(v) + equal_v(v) > retained[v]),
                    Mode::SubsetMultiple => {
                        above < k
                            && total > above
                            && total >= k
                            && (0..t).all(|v| {
                                let i = above_v(v);
                                i > retained[v] || (i == retained[v] && k + equal_v(v) > total)
                            })
                    }
                }
            };
            if let Some(profile) = combine(groups, &layers, sizes, accept, bounded) {
                return Ok(Some(profile));
            }
        }
    }
    Ok(None)
}

/// Fills the table of one group; returns every layer for back-tracking.
#[allow(clippy::too_many_arguments)]
fn fill_table(
    group: &Group,
    ranks: &[Vec<usize>],
    s: usize,
    sizes: &[usize],
    sets: &[usize],
    mode: Mode,
    in_baseline: impl Fn(usize) -> bool,
    bounded: impl Fn(usize, usize) -> bool,
) -> Vec<Layer> {
    let t = sizes.len();
    let mut layers: Vec<Layer> = vec![HashMap::from([(0, (0, 0))])];
    for (x, &c) in group.candidates.iter().enumerate() {
        let kept = mode != Mode::Cardinality && group.mask != 0 && in_baseline(c);
        let mut next: Layer = HashMap::new();
        for &cell in layers[x].keys() {
            for &set in sets {
                let mut out = cell;
                let mut full = false;
                for v in (0..t).filter(|v| set >> v & 1 == 1) {
                    full |= field(cell as u128, 2 + v) >= sizes[v];
                    out += 1 << (8 * (2 + v));
                }
                if full {
                    continue;
                }
                match ranks[x][set].cmp(&s) {
                    Ordering::Greater => out += 1,
                    Ordering::Equal if mode != Mode::SubsetMultiple || !kept => out += 1 << 8,
                    Ordering::Less if !kept => {}
                    _ => continue,
                }
                let above = field(out as u128, 0);
                if !bounded(above, above + field(out as u128, 1)) {
                    continue;
                }
                next.entry(out).or_insert((cell, set));
            }
        }
        layers.push(next);
    }
    layers
}

/// Combines one final entry per group and returns a profile for the first accepted combination.
fn combine(
    groups: &[Group],
    layers: &[Vec<Layer>],
    sizes: &[usize],
    accept: impl Fn(Agg) -> bool,
    bounded: impl Fn(usize, usize) -> bool,
) -> Option<BallotProfile> {
    let t = sizes.len();
    // per step: aggregate -> (previous aggregate, chosen final cell of this group)
    let mut steps: Vec<HashMap<Agg, (Agg, Cell)>> = vec![HashMap::from([(0, (0, 0))])];
    for (g, group) in groups.iter().enumerate() {
        let finals = layers[g].last().expect("tables have a start layer");
        let mut next: HashMap<Agg, (Agg, Cell)> = HashMap::new();
        for &agg in steps[g].keys() {
            for &cell in finals.keys() {
                let c = cell as u128;
                if (0..t).any(|v| field(agg, 2 + 2 * t + v) + field(c, 2 + v) > sizes[v]) {
                    continue;
                }
                let (above, equal) = (field(c, 0) as u128, field(c, 1) as u128);
                let mut out = agg + above + (equal << 8);
                for v in 0..t {
                    out += (field(c, 2 + v) as u128) << (8 * (2 + 2 * t + v));
                    if group.mask >> v & 1 == 1 {
                        out += above << (8 * (2 + v));
                        out += equal << (8 * (2 + t + v));
                    }
                }
                if !bounded(field(out, 0), field(out, 0) + field(out, 1)) {
                    continue;
                }
                next.entry(out).or_insert((agg, cell));
            }
        }
        steps.push(next);
    }
    let mut agg = *steps.last()?.keys().find(|&&a| accept(a))?;
    let mut ballots: Vec<Vec<usize>> = vec![Vec::new(); t];
    for g in (0..groups.len()).rev() {
        let (prev, mut cell) = steps[g + 1][&agg];
        for x in (0..groups[g].candidates.len()).rev() {
            let (before, set) = layers[g][x + 1][&cell];
            for (v, ballot) in ballots.iter_mut().enumerate() {
                if set >> v & 1 == 1 {
                    ballot.push(groups[g].candidates[x]);
                }
            }
            cell = before;
        }
        agg = prev;
    }
    debug_assert!(ballots.iter().zip(sizes).all(|(b, &z)| b.len() == z));
    Some(BallotProfile { replacements: ballots.into_iter().map(Ballot::new).collect() })
}
