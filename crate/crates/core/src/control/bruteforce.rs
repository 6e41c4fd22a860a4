use std::collections::BTreeMap;

use crate::control::{certified, solution_succeeds, ControlInstance, ControlSolution};
use crate::error::{Error, Result};
use crate::verdict::Verdict;

/// Search-space controls for the exhaustive control oracle.
#[derive(Clone, Debug)]
pub struct ControlSearchOptions {
    /// Largest number of (symmetry-reduced) solutions the search may visit.
    pub max_solutions: u128,
}

impl Default for ControlSearchOptions {
    fn default() -> Self {
        ControlSearchOptions { max_solutions: crate::ip::solver_cap(5_000_000) }
    }
}

/// Exhaustive control oracle returning a minimum-size witness.
///
/// Identical votes, and candidates with identical approvers, are interchangeable,
/// so only how many are taken from each such class is enumerated.
pub fn solve_control_bruteforce(inst: &ControlInstance) -> Result<Verdict<ControlSolution>> {
    solve_control_bruteforce_with(inst, &ControlSearchOptions::default())
}

pub fn solve_control_bruteforce_with(
    inst: &ControlInstance,
    opts: &ControlSearchOptions,
) -> Result<Verdict<ControlSolution>> {
    let (add_pool, delete_pool) = if inst.kind.on_voters() {
        (
            group_by(0..inst.unregistered_votes.len(), |&i| inst.unregistered_votes[i].as_slice().to_vec()),
            group_by(0..inst.election.num_votes(), |&i| inst.election.votes()[i].as_slice().to_vec()),
        )
    } else {
        let approvers = inst.election.approvers();
        (
            group_by(inst.unregistered_candidates().into_iter(), |&c| approvers[c].clone()),
            group_by(inst.deletable_candidates().into_iter(), |&c| approvers[c].clone()),
        )
    };
    let total = selections(&add_pool, inst.add_budget).saturating_mul(selections(&delete_pool, inst.delete_budget));
    if total > opts.max_solutions {
        return Err(Error::CapExceeded(format!("{total} control solutions exceed the cap of {}", opts.max_solutions)));
    }
    let caps = |pool: &[Vec<usize>]| pool.iter().map(Vec::len).collect::<Vec<_>>();
    let (add_caps, delete_caps) = (caps(&add_pool), caps(&delete_pool));
    let budget = inst.add_budget + inst.delete_budget;
    for size in 0..=budget {
        for added in size.saturating_sub(inst.delete_budget)..=size.min(inst.add_budget) {
            let deleted = size - added;
            if !inst.kind.on_voters() && inst.registered.len() + added < inst.k + deleted {
                continue;
            }
            let mut found = None;
            let mut error = None;
            for_each_composition(&add_caps, added, &mut |a| {
                for_each_composition(&delete_caps, deleted, &mut |d| {
                    let sol = build(inst, &add_pool, a, &delete_pool, d);
                    match solution_succeeds(inst, &sol) {
                        Ok(true) => {
                            found = Some(sol);
                            false
                        }
                        Ok(false) => true,
                        Err(e) => {
                            error = Some(e);
                            false
                        }
                    }
                })
            });
            if let Some(e) = error {
                return Err(e);
            }
            if let Some(sol) = found {
                return certified(inst, sol);
            }
        }
    }
    Ok(Verdict::No)
}

/// Number of ways to take at most `budget` items from the classes of `pool`.
fn selections(pool: &[Vec<usize>], budget: usize) -> u128 {
    let mut ways = vec![0u128; budget + 1];
    ways[0] = 1;
    for g in pool {
        let mut next = vec![0u128; budget + 1];
        for (have, &w) in ways.iter().enumerate().filter(|(_, &w)| w > 0) {
            for n in 0..=g.len().min(budget - have) {
                next[have + n] = next[have + n].saturating_add(w);
            }
        }
        ways = next;
    }
    ways.iter().fold(0u128, |acc, &w| acc.saturating_add(w))
}

fn group_by<K: Ord>(items: impl Iterator<Item = usize>, key: impl Fn(&usize) -> K) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<K, Vec<usize>> = BTreeMap::new();
    for i in items {
        groups.entry(key(&i)).or_default().push(i);
    }
    groups.into_values().collect()
}

fn take(pool: &[Vec<usize>], counts: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = pool.iter().zip(counts).flat_map(|(g, &n)| g[..n].iter().copied()).collect();
    out.sort_unstable();
    out
}

fn build(inst: &ControlInstance, add: &[Vec<usize>], a: &[usize], del: &[Vec<usize>], d: &[usize]) -> ControlSolution {
    let (added, deleted) = (take(add, a), take(del, d));
    if inst.kind.on_voters() {
        ControlSolution { added_votes: added, deleted_votes: deleted, ..Default::default() }
    } else {
        ControlSolution { added_candidates: added, deleted_candidates: deleted, ..Default::default() }
    }
}

/// Calls `f` on every vector `x` with `x[i] ≤ caps[i]` and `Σ x = total`, until `f` returns false.
/// Returns false if stopped early.
pub(crate) fn for_each_composition(caps: &[usize], total: usize, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(caps: &[usize], i: usize, left: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if i == caps.len() {
            return left > 0 || f(cur);
        }
        let rest: usize = caps[i + 1..].iter().sum();
        let lo = left.saturating_sub(rest);
        for n in lo..=caps[i].min(left) {
            cur[i] = n;
            if !rec(caps, i + 1, left - n, cur, f) {
                return false;
            }
        }
        cur[i] = 0;
        true
    }
    let mut cur = vec![0; caps.len()];
    rec(caps, 0, total, &mut cur, f)
}

#[cfg(test)]
mod tests {
    use super::for_each_composition;

    #[test]
    fn compositions_count() {
        let mut n = 0;
        for_each_composition(&[2, 1, 3], 3, &mut |_| {
            n += 1;
            true
        });
        // coefficient of x^3 in (1+x+x²)(1+x)(1+x+x²+x³)
        assert_eq!(n, 6);
    }
}
