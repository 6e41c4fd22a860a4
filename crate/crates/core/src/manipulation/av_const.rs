//! AV manipulation with few manipulators: a common ballot inside the
//! manipulators' union, built from at most two blocks per approver class.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::manipulation::{av_scores, certified, int_outcome, BallotProfile, ManipulationInstance, Variant};
use crate::model::{Ballot, Rule};
use crate::verdict::Verdict;

const GUESS_CAP: u128 = 20_000_000;

/// Position sets inside one class: empty, one interval, or two separated intervals.
fn block_choices(z: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for a in 0..z {
        for b in a..z {
            out.push((a..=b).collect());
            for c in b + 2..z {
                for d in c..z {
                    out.push((a..=b).chain(c..=d).collect());
                }
            }
        }
    }
    out
}

pub fn solve_av_const_manipulators(inst: &ManipulationInstance) -> Result<Verdict<BallotProfile>> {
    if inst.rule != Rule::Av {
        return Err(Error::Unsupported(format!("the block algorithm needs AV, got {}", inst.rule)));
    }
    if inst.variant == Variant::Sdcm {
        return Err(Error::Unsupported("the block algorithm covers CBCM and SBCM only".into()));
    }
    let t = inst.t();
    let base = av_scores(&inst.election)?;
    let w = inst.baseline.as_ref().expect("validated");
    let forced: Vec<usize> = match inst.variant {
        Variant::Sbcm => inst.manipulator_union().into_iter().filter(|&c| w.contains(c)).collect(),
        _ => Vec::new(),
    };
    // approver classes among the manipulators, each ordered by honest score
    let mut classes: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for c in inst.manipulator_union() {
        if forced.binary_search(&c).is_ok() {
            continue;
        }
        let mask =
            inst.manipulators.iter().enumerate().filter(|(_, v)| v.contains(c)).fold(0u64, |acc, (i, _)| acc | 1 << i);
        classes.entry(mask).or_default().push(c);
    }
    let classes: Vec<Vec<usize>> = classes
        .into_values()
        .map(|mut cs| {
            cs.sort_by(|&a, &b| base[b].cmp(&base[a]).then(a.cmp(&b)));
            cs
        })
        .collect();
    let choices: Vec<Vec<Vec<usize>>> = classes.iter().map(|cs| block_choices(cs.len())).collect();
    let total = choices.iter().fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    let cap = crate::ip::solver_cap(GUESS_CAP);
    if total > cap {
        return Err(Error::CapExceeded(format!("{total} block guesses exceed the cap of {cap}")));
    }
    let mut pick = vec![0usize; classes.len()];
    loop {
        let mut ballot = forced.clone();
        for (g, &p) in pick.iter().enumerate() {
            ballot.extend(choices[g][p].iter().map(|&pos| classes[g][pos]));
        }
        let mut scores = base.clone();
        for &c in &ballot {
            scores[c] += t as i64;
        }
        if inst.accepts(&int_outcome(&scores, inst.k), None) {
            let b = Ballot::new(ballot);
            return certified(inst, BallotProfile { replacements: vec![b; t] });
        }
        let mut g = 0;
        while g < pick.len() && pick[g] + 1 == choices[g].len() {
            pick[g] = 0;
            g += 1;
        }
        if g == pick.len() {
            return Ok(Verdict::No);
        }
        pick[g] += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::block_choices;

    #[test]
    fn block_counts() {
        assert_eq!(block_choices(0).len(), 1);
        assert_eq!(block_choices(1).len(), 2);
        // empty, 3 singles + 2 pairs + 1 triple, and {0,2}
        assert_eq!(block_choices(3).len(), 8);
    }
}
