use crate::combinatorics::{binomial_u128, Combinations};
use crate::control::{certified, ControlInstance, ControlSolution, ControlType};
use crate::error::{Error, Result};
use crate::model::{hamming_distance, Committee, Rule};
use crate::verdict::Verdict;

const COMMITTEE_CAP: u128 = 200_000;

/// CCDV under MAV by guessing a target committee `w ⊇ J` and its score `x`.
///
/// Every vote farther than `x` from `w` must go; the guess succeeds if what
/// remains keeps every committee missing `J` at distance above `x`.
pub fn solve_ccdv_mav_poly(inst: &ControlInstance) -> Result<Verdict<ControlSolution>> {
    if inst.kind != ControlType::Ccdv || inst.rule != Rule::Mav {
        return Err(Error::Unsupported("this solver decides CCDV under MAV only".into()));
    }
    let m = inst.election.num_candidates();
    let k = inst.k;
    let cap = crate::ip::solver_cap(COMMITTEE_CAP);
    if binomial_u128(m, k) > cap {
        return Err(Error::CapExceeded(format!("C({m},{k}) committees exceed the cap of {cap}")));
    }
    let votes = inst.election.votes();
    let committees: Vec<Committee> = Combinations::new(m, k).map(Committee::new).collect();
    let distances: Vec<Vec<usize>> =
        committees.iter().map(|w| votes.iter().map(|v| hamming_distance(w, v)).collect()).collect();
    let (with_j, without_j): (Vec<usize>, Vec<usize>) =
        (0..committees.len()).partition(|&i| committees[i].contains_all(&inst.j));
    for x in 0..=m + k {
        for &w in &with_j {
            let deleted: Vec<usize> = (0..votes.len()).filter(|&i| distances[w][i] > x).collect();
            if deleted.len() > inst.delete_budget {
                continue;
            }
            let rivals_far = without_j.iter().all(|&r| {
                let score =
                    (0..votes.len()).filter(|i| deleted.binary_search(i).is_err()).map(|i| distances[r][i]).max();
                score.unwrap_or(0) > x
            });
            if rivals_far {
                return certified(inst, ControlSolution { deleted_votes: deleted, ..Default::default() });
            }
        }
    }
    Ok(Verdict::No)
}
