use crate::combinatorics::{binomial_u128, subsets_up_to};
use crate::control::{certified, solution_succeeds, ControlInstance, ControlSolution, ControlType};
use crate::error::{Error, Result};
use crate::model::Rule;
use crate::verdict::Verdict;

const SUBSET_CAP: u128 = 2_000_000;

/// CCAV under MAV: drop duplicate unregistered votes, then try every set of at most `ℓ` of them.
pub fn solve_ccav_mav_fpt(inst: &ControlInstance) -> Result<Verdict<ControlSolution>> {
    if inst.kind != ControlType::Ccav || inst.rule != Rule::Mav {
        return Err(Error::Unsupported("this solver decides CCAV under MAV only".into()));
    }
    let mut distinct: Vec<usize> = Vec::new();
    for (i, v) in inst.unregistered_votes.iter().enumerate() {
        if !distinct.iter().any(|&d| inst.unregistered_votes[d] == *v) {
            distinct.push(i);
        }
    }
    let count: u128 = (0..=inst.add_budget.min(distinct.len())).map(|i| binomial_u128(distinct.len(), i)).sum();
    let cap = crate::ip::solver_cap(SUBSET_CAP);
    if count > cap {
        return Err(Error::CapExceeded(format!("{count} vote subsets exceed the cap of {cap}")));
    }
    for added in subsets_up_to(&distinct, inst.add_budget) {
        let sol = ControlSolution { added_votes: added, ..Default::default() };
        if solution_succeeds(inst, &sol)? {
            return certified(inst, sol);
        }
    }
    Ok(Verdict::No)
}
