//! Color coding for combined candidate control, parameterized by the budgets
//! plus the number of voters.

use std::collections::{BTreeMap, HashSet};

use rand::Rng;

use crate::combinatorics::Combinations;
use crate::control::{apply_control, certified, ControlInstance, ControlSolution};
use crate::error::{Error, Result};
use crate::random::rng;
use crate::verdict::Verdict;
use crate::winners::{j_cc, JccAlgo, JccInstance};

const COLORING_CAP: u128 = 10_000_000;
const GUESS_CAP: u128 = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HashMode {
    /// Greedy cover over all colorings; verified perfect, deterministic verdicts.
    Exhaustive,
    /// Random colorings; a NO verdict may be wrong with small probability.
    Randomized { seed: u64, repetitions: usize },
}

/// Colorings `universe → [κ]`, one color per element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectHashFamily {
    pub universe: usize,
    pub kappa: usize,
    pub functions: Vec<Vec<usize>>,
}

impl PerfectHashFamily {
    fn rainbow(f: &[usize], set: &[usize], kappa: usize) -> bool {
        let mut seen = vec![false; kappa];
        set.iter().all(|&x| !std::mem::replace(&mut seen[f[x]], true))
    }

    /// Number of κ-subsets on which some function is bijective, and the total.
    pub fn coverage(&self) -> (usize, usize) {
        let mut covered = 0;
        let mut total = 0;
        for set in Combinations::new(self.universe, self.kappa) {
            total += 1;
            if self.functions.iter().any(|f| Self::rainbow(f, &set, self.kappa)) {
                covered += 1;
            }
        }
        (covered, total)
    }

    pub fn is_perfect(&self) -> bool {
        let (covered, total) = self.coverage();
        covered == total
    }
}

pub fn build_perfect_hash_family(universe: usize, kappa: usize, mode: HashMode) -> Result<PerfectHashFamily> {
    if kappa == 0 || kappa > universe {
        return Err(Error::Config(format!("need 1 ≤ κ ≤ |X|, got κ={kappa}, |X|={universe}")));
    }
    let functions = match mode {
        HashMode::Exhaustive => greedy_cover(universe, kappa)?,
        HashMode::Randomized { seed, repetitions } => {
            let base = std::f64::consts::E.powi(kappa as i32) * kappa as f64 * (universe as f64).ln().max(1.0);
            let count = (base.ceil() as usize).max(1) * repetitions.max(1);
            let mut r = rng(seed);
            (0..count).map(|_| (0..universe).map(|_| r.gen_range(0..kappa)).collect()).collect()
        }
    };
    Ok(PerfectHashFamily { universe, kappa, functions })
}

/// Walks all `κ^|X|` colorings in order and keeps those covering a new κ-subset.
fn greedy_cover(universe: usize, kappa: usize) -> Result<Vec<Vec<usize>>> {
    let count = (kappa as u128).checked_pow(universe as u32).unwrap_or(u128::MAX);
    let cap = crate::ip::solver_cap(COLORING_CAP);
    if count > cap {
        return Err(Error::CapExceeded(format!("{count} colorings exceed the cap of {cap}")));
    }
    let mut uncovered: Vec<Vec<usize>> = Combinations::new(universe, kappa).collect();
    let mut family = Vec::new();
    let mut f = vec![0usize; universe];
    while !uncovered.is_empty() {
        let before = uncovered.len();
        uncovered.retain(|set| !PerfectHashFamily::rainbow(&f, set, kappa));
        if uncovered.len() < before {
            family.push(f.clone());
        }
        let mut i = 0;
        while i < universe && f[i] == kappa - 1 {
            f[i] = 0;
            i += 1;
        }
        if i == universe {
            break;
        }
        f[i] += 1;
    }
    Ok(family)
}

/// One color class split by approver set; one representative per part.
fn class_options(pool: &[usize], f: &[usize], color: usize, approvers: &[Vec<usize>]) -> Vec<usize> {
    let mut reps: BTreeMap<&[usize], usize> = BTreeMap::new();
    for (pos, &c) in pool.iter().enumerate() {
        if f[pos] == color {
            reps.entry(approvers[c].as_slice()).or_insert(c);
        }
    }
    reps.into_values().collect()
}

/// CCAC/CCDC/CCADC by color coding over deleted and added candidates.
pub fn solve_ccadc_colorcoding(inst: &ControlInstance, mode: HashMode) -> Result<Verdict<ControlSolution>> {
    if inst.kind.on_voters() {
        return Err(Error::Unsupported(format!("{} is not candidate control", inst.kind)));
    }
    let algo = if inst.rule.is_additive() { JccAlgo::Auto } else { JccAlgo::FptN };
    let deletable = inst.deletable_candidates();
    let addable = inst.unregistered_candidates();
    let approvers = inst.election.approvers();
    let mut tried: HashSet<(Vec<usize>, Vec<usize>)> = HashSet::new();
    let mut guesses: u128 = 0;
    let guess_cap = crate::ip::solver_cap(GUESS_CAP);
    for dc in 0..=inst.delete_budget.min(deletable.len()) {
        for ac in 0..=inst.add_budget.min(addable.len()) {
            if inst.registered.len() + ac < inst.k + dc {
                continue;
            }
            let family = |size: usize, kappa: usize| -> Result<Vec<Vec<usize>>> {
                Ok(if kappa == 0 {
                    vec![vec![0; size]]
                } else {
                    build_perfect_hash_family(size, kappa, mode)?.functions
                })
            };
            let fs = family(deletable.len(), dc)?;
            let gs = family(addable.len(), ac)?;
            for f in &fs {
                for g in &gs {
                    let mut options: Vec<Vec<usize>> =
                        (0..dc).map(|i| class_options(&deletable, f, i, &approvers)).collect();
                    options.extend((0..ac).map(|j| class_options(&addable, g, j, &approvers)));
                    if options.iter().any(Vec::is_empty) {
                        continue;
                    }
                    let mut pick = vec![0usize; options.len()];
                    loop {
                        guesses += 1;
                        if guesses > guess_cap {
                            return Err(Error::CapExceeded(format!("more than {guess_cap} color-class guesses")));
                        }
                        let mut deleted: Vec<usize> = (0..dc).map(|i| options[i][pick[i]]).collect();
                        let mut added: Vec<usize> = (dc..options.len()).map(|i| options[i][pick[i]]).collect();
                        deleted.sort_unstable();
                        added.sort_unstable();
                        if tried.insert((deleted.clone(), added.clone())) {
                            let sol = ControlSolution {
                                added_candidates: added,
                                deleted_candidates: deleted,
                                ..Default::default()
                            };
                            let applied = apply_control(inst, &sol)?;
                            if j_cc(&inst.rule, &JccInstance::new(applied.election, inst.k, applied.j)?, algo)? {
                                return certified(inst, sol);
                            }
                        }
                        let mut i = 0;
                        while i < pick.len() && pick[i] + 1 == options[i].len() {
                            pick[i] = 0;
                            i += 1;
                        }
                        if i == pick.len() {
                            break;
                        }
                        pick[i] += 1;
                    }
                }
            }
        }
    }
    Ok(Verdict::No)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_one_is_constant() {
        let fam = build_perfect_hash_family(5, 1, HashMode::Exhaustive).unwrap();
        assert_eq!(fam.functions, vec![vec![0; 5]]);
    }

    #[test]
    fn exhaustive_pairs_on_four() {
        let fam = build_perfect_hash_family(4, 2, HashMode::Exhaustive).unwrap();
        assert_eq!(fam.coverage(), (6, 6));
    }

    #[test]
    fn randomized_pairs_on_six() {
        let fam = build_perfect_hash_family(6, 2, HashMode::Randomized { seed: 7, repetitions: 64 }).unwrap();
        assert!(fam.is_perfect());
    }

    #[test]
    fn kappa_too_large() {
        assert!(build_perfect_hash_family(2, 3, HashMode::Exhaustive).is_err());
    }
}
