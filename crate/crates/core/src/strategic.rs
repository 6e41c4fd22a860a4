//! One record type for every strategic problem, with a brute-force oracle.

use crate::control::{solution_succeeds, solve_control_bruteforce, ControlInstance};
use crate::error::Result;
use crate::manipulation::{
    certify_profile, solve_manipulation_bruteforce, solve_manipulation_bruteforce_with, BruteForceOptions,
    ManipulationInstance, SearchSpace,
};
use crate::model::Rule;
use crate::verdict::Verdict;
use crate::winners::{j_cc, outcome, JccAlgo, JccInstance};

#[derive(Clone, Debug)]
pub enum StrategicInstance {
    Manipulation(ManipulationInstance),
    Control(ControlInstance),
    /// Is `J` in every winning committee (no modification allowed)?
    CommitteeMembership {
        rule: Rule,
        instance: JccInstance,
    },
}

impl StrategicInstance {
    pub fn rule(&self) -> &Rule {
        match self {
            StrategicInstance::Manipulation(m) => &m.rule,
            StrategicInstance::Control(c) => &c.rule,
            StrategicInstance::CommitteeMembership { rule, .. } => rule,
        }
    }

    pub fn num_candidates(&self) -> usize {
        match self {
            StrategicInstance::Manipulation(m) => m.election.num_candidates(),
            StrategicInstance::Control(c) => c.election.num_candidates(),
            StrategicInstance::CommitteeMembership { instance, .. } => instance.election.num_candidates(),
        }
    }
}

/// Exhaustive answer; every YES is certified by the underlying oracle.
pub fn solve_strategic_bruteforce(inst: &StrategicInstance) -> Result<bool> {
    solve_strategic_bruteforce_in(inst, SearchSpace::Auto)
}

/// [`solve_strategic_bruteforce`] with an explicit manipulation search space.
pub fn solve_strategic_bruteforce_in(inst: &StrategicInstance, space: SearchSpace) -> Result<bool> {
    Ok(match inst {
        StrategicInstance::Manipulation(m) => manipulation_oracle(m, space)?.is_yes(),
        StrategicInstance::Control(c) => solve_control_bruteforce(c)?.is_yes(),
        StrategicInstance::CommitteeMembership { rule, instance } => j_cc(rule, instance, JccAlgo::BruteForce)?,
    })
}

/// A brute-force answer together with an independent re-check of its witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Checked {
    pub answer: bool,
    pub certified: bool,
}

/// Like [`solve_strategic_bruteforce_in`], but re-verifies every YES: manipulation
/// profiles and control actions are applied and rescored, and J-CC answers are
/// compared against the explicit winning set.
pub fn solve_strategic_checked(inst: &StrategicInstance, space: SearchSpace) -> Result<Checked> {
    Ok(match inst {
        StrategicInstance::Manipulation(m) => match manipulation_oracle(m, space)? {
            Verdict::Yes(p) => Checked { answer: true, certified: certify_profile(m, &p)? },
            Verdict::No => Checked { answer: false, certified: true },
        },
        StrategicInstance::Control(c) => match solve_control_bruteforce(c)? {
            Verdict::Yes(s) => Checked { answer: true, certified: solution_succeeds(c, &s)? },
            Verdict::No => Checked { answer: false, certified: true },
        },
        StrategicInstance::CommitteeMembership { rule, instance } => {
            let answer = j_cc(rule, instance, JccAlgo::BruteForce)?;
            let certified = !answer || outcome(rule, &instance.election, instance.k)?.all_contain(&instance.j);
            Checked { answer, certified }
        }
    })
}

fn manipulation_oracle(
    m: &ManipulationInstance,
    space: SearchSpace,
) -> Result<Verdict<crate::manipulation::BallotProfile>> {
    match space {
        SearchSpace::Auto => solve_manipulation_bruteforce(m),
        _ => solve_manipulation_bruteforce_with(m, &BruteForceOptions { space, ..Default::default() }),
    }
}
