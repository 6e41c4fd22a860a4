//! Integer programs for combined voter control when the number of candidates is small.

use num_traits::Zero;

use crate::combinatorics::{binomial_u128, subsets_of, Combinations};
use crate::control::{certified, ControlInstance, ControlSolution};
use crate::error::{Error, Result};
use crate::ip::{IntegerProgram, IpSolution, Relation, VarId};
use crate::model::{candidate_scores, committee_score, vote_contribution, Ballot, Committee, Score};
use crate::verdict::Verdict;

const GUESS_CAP: u128 = 100_000;
const COLLECTION_BITS: usize = 14;

/// Votes of one pool grouped by ballot, with one count variable per group.
struct Pool {
    groups: Vec<(Ballot, Vec<usize>)>,
    vars: Vec<VarId>,
}

impl Pool {
    fn new(p: &mut IntegerProgram, name: &str, votes: &[Ballot], budget: usize) -> Pool {
        let mut groups: Vec<(Ballot, Vec<usize>)> = Vec::new();
        for (i, v) in votes.iter().enumerate() {
            match groups.iter_mut().find(|(b, _)| b == v) {
                Some((_, members)) => members.push(i),
                None => groups.push((v.clone(), vec![i])),
            }
        }
        let vars: Vec<VarId> = groups
            .iter()
            .enumerate()
            .map(|(g, (_, members))| p.add_var(format!("{name}_{g}"), 0, members.len() as i64))
            .collect();
        let terms: Vec<(VarId, i64)> = vars.iter().map(|&x| (x, 1)).collect();
        p.add_int_constraint(&terms, Relation::Le, budget as i64);
        Pool { groups, vars }
    }

    fn chosen(&self, sol: &IpSolution) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .groups
            .iter()
            .zip(&self.vars)
            .flat_map(|((_, members), &x)| members[..sol.value(x) as usize].iter().copied())
            .collect();
        out.sort_unstable();
        out
    }
}

/// Linear expression `constant + Σ coef · var`.
struct Expr {
    constant: Score,
    terms: Vec<(VarId, Score)>,
}

impl Expr {
    /// `self − other` as (terms, rhs) for `terms ⋈ rhs`.
    fn minus(&self, other: &Expr) -> (Vec<(VarId, Score)>, Score) {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(x, a)| (*x, -a.clone())));
        (terms, other.constant.clone() - &self.constant)
    }
}

/// Shared skeleton: deleted-vote counts `x`, added-vote counts `y`, and budgets.
fn skeleton(inst: &ControlInstance) -> (IntegerProgram, Pool, Pool) {
    let mut p = IntegerProgram::new();
    let deleted = Pool::new(&mut p, "x", inst.election.votes(), inst.delete_budget);
    let added = Pool::new(&mut p, "y", &inst.unregistered_votes, inst.add_budget);
    (p, deleted, added)
}

/// `base + Σ_S f(S)·(y_S − x_S)`.
fn expression(base: Score, deleted: &Pool, added: &Pool, f: impl Fn(&Ballot) -> Score) -> Expr {
    let mut terms = Vec::new();
    for (pool, sign) in [(deleted, -1), (added, 1)] {
        for ((ballot, _), &var) in pool.groups.iter().zip(&pool.vars) {
            let coef = f(ballot);
            if !coef.is_zero() {
                terms.push((var, if sign < 0 { -coef } else { coef }));
            }
        }
    }
    Expr { constant: base, terms }
}

fn solution(
    inst: &ControlInstance,
    sol: &IpSolution,
    deleted: &Pool,
    added: &Pool,
) -> Result<Verdict<ControlSolution>> {
    certified(
        inst,
        ControlSolution { added_votes: added.chosen(sol), deleted_votes: deleted.chosen(sol), ..Default::default() },
    )
}

fn require_voter_control(inst: &ControlInstance) -> Result<()> {
    if !inst.kind.on_voters() {
        return Err(Error::Unsupported(format!("{} is not voter control", inst.kind)));
    }
    Ok(())
}

/// Voter control for AV/SAV/NSAV: guess the weakest member `b` of `J` and a set
/// `A` of `m − k` outsiders that end strictly below `b`.
pub fn solve_ccadv_additive_fpt(inst: &ControlInstance) -> Result<Verdict<ControlSolution>> {
    require_voter_control(inst)?;
    if !inst.rule.is_additive() {
        return Err(Error::Unsupported(format!("{} is not additive", inst.rule)));
    }
    let m = inst.election.num_candidates();
    let k = inst.k;
    let outsiders: Vec<usize> = (0..m).filter(|c| inst.j.binary_search(c).is_err()).collect();
    let guesses = binomial_u128(outsiders.len(), m - k) * inst.j.len() as u128;
    let cap = crate::ip::solver_cap(GUESS_CAP);
    if guesses > cap {
        return Err(Error::CapExceeded(format!("{guesses} guesses exceed the cap of {cap}")));
    }
    let base = candidate_scores(&inst.rule, &inst.election)?;
    for &b in &inst.j {
        for below in subsets_of(&outsiders, m - k) {
            let (mut p, deleted, added) = skeleton(inst);
            let sc = |c: usize| {
                expression(base[c].clone(), &deleted, &added, |v| {
                    vote_contribution(&inst.rule, m, v.len(), v.contains(c))
                })
            };
            let sb = sc(b);
            for &other in inst.j.iter().filter(|&&c| c != b) {
                let (terms, rhs) = sc(other).minus(&sb);
                p.add_constraint(terms, Relation::Ge, rhs);
            }
            for &a in &below {
                let (terms, rhs) = sb.minus(&sc(a));
                p.add_constraint(terms, Relation::Gt, rhs);
            }
            if let Some(sol) = p.find()? {
                return solution(inst, &sol, &deleted, &added);
            }
        }
    }
    Ok(Verdict::No)
}

/// Voter control for Thiele rules: guess the exact set `𝒲` of winning committees
/// (all containing `J`), which must tie and beat every other committee.
pub fn solve_ccadv_thiele_fpt(inst: &ControlInstance) -> Result<Verdict<ControlSolution>> {
    require_voter_control(inst)?;
    if !inst.rule.is_thiele() {
        return Err(Error::Unsupported(format!("{} is not a Thiele rule", inst.rule)));
    }
    let m = inst.election.num_candidates();
    let k = inst.k;
    let omega = inst.rule.thiele_table(k)?;
    let committees: Vec<Committee> = Combinations::new(m, k).map(Committee::new).collect();
    let with_j: Vec<usize> = (0..committees.len()).filter(|&i| committees[i].contains_all(&inst.j)).collect();
    if with_j.len() > COLLECTION_BITS {
        return Err(Error::CapExceeded(format!("2^{} committee collections exceed the cap", with_j.len())));
    }
    let base: Vec<Score> =
        committees.iter().map(|w| committee_score(&inst.rule, &inst.election, w)).collect::<Result<_>>()?;
    for mask in 1usize..1 << with_j.len() {
        let family: Vec<usize> = (0..with_j.len()).filter(|i| mask >> i & 1 == 1).map(|i| with_j[i]).collect();
        let (mut p, deleted, added) = skeleton(inst);
        let sc = |w: usize| {
            expression(base[w].clone(), &deleted, &added, |v| omega[v.overlap(committees[w].members())].clone())
        };
        let first = sc(family[0]);
        for &w in &family[1..] {
            let (terms, rhs) = first.minus(&sc(w));
            p.add_constraint(terms, Relation::Eq, rhs);
        }
        for w in (0..committees.len()).filter(|w| family.binary_search(w).is_err()) {
            let (terms, rhs) = first.minus(&sc(w));
            p.add_constraint(terms, Relation::Gt, rhs);
        }
        if let Some(sol) = p.find()? {
            return solution(inst, &sol, &deleted, &added);
        }
    }
    Ok(Verdict::No)
}
