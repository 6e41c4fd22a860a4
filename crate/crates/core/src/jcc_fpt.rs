//! J-CC parameterized by the number of voters: one integer program per
//! approver class that contains a member of J.

use crate::error::{Error, Result};
use crate::ip::{IntegerProgram, Relation};
use crate::model::{int, Election, Rule, Score};
use crate::winners::{optimum_score, star_partition, JccInstance, StarPartition};

const PROGRAM_CAP: usize = 100_000;

pub(crate) fn j_cc_fpt_n(rule: &Rule, inst: &JccInstance) -> Result<bool> {
    if matches!(rule, Rule::Sav | Rule::Nsav) {
        return Err(Error::Unsupported(format!("FptN J-CC is not defined for {rule}; use the partition")));
    }
    let e = &inst.election;
    let k = inst.k;
    let s = optimum_score(rule, e, k)?;
    let star = star_partition(e);
    let mut targets: Vec<usize> = inst.j.iter().map(|&c| star.group_of(c)).collect();
    targets.sort_unstable();
    targets.dedup();
    if targets.len() as u128 > crate::ip::solver_cap(PROGRAM_CAP as u128) {
        return Err(Error::CapExceeded(format!("{} J-CC subproblems", targets.len())));
    }
    if let Rule::Abccv = rule {
        let k_prime: usize = targets.iter().map(|&g| star.groups[g].candidates.len()).sum();
        if k_prime > k {
            return Ok(false);
        }
    }
    for &g in &targets {
        let shortable = match rule {
            Rule::Abccv => abccv_shortable(e, k, &s, &star, g)?,
            Rule::Mav => mav_shortable(e, k, &s, &star, g)?,
            _ => thiele_shortable(rule, e, k, &s, &star, g)?,
        };
        if shortable {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Adds one count variable per class, the target class capped one below its size, summing to `k`.
fn class_vars(p: &mut IntegerProgram, star: &StarPartition, target: usize, k: usize) -> Vec<usize> {
    let vars: Vec<usize> = star
        .groups
        .iter()
        .enumerate()
        .map(|(g, grp)| {
            let size = grp.candidates.len() as i64;
            let hi = if g == target { size - 1 } else { size };
            p.add_var(format!("x_{g}"), 0, hi)
        })
        .collect();
    let terms: Vec<(usize, i64)> = vars.iter().map(|&v| (v, 1)).collect();
    p.add_int_constraint(&terms, Relation::Eq, k as i64);
    vars
}

fn abccv_shortable(e: &Election, k: usize, s: &Score, star: &StarPartition, target: usize) -> Result<bool> {
    let tilde = &star.groups[target];
    let removed = &tilde.candidates;
    let keep: Vec<usize> = (0..e.num_candidates()).filter(|c| removed.binary_search(c).is_err()).collect();
    for i in 0..removed.len() {
        if i > k || k - i > keep.len() {
            continue;
        }
        let hat: &[usize] = if i == 0 { &[] } else { &tilde.voters };
        let votes = e
            .votes()
            .iter()
            .enumerate()
            .filter(|(vi, _)| hat.binary_search(vi).is_err())
            .map(|(_, v)| v.clone())
            .collect();
        let residual = e.with_votes(votes)?.restrict(&keep);
        let need = s - int(hat.len() as i64);
        if abccv_reaches(&residual, k - i, &need)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Whether some `size`-committee of `e` satisfies at least `need` voters.
fn abccv_reaches(e: &Election, size: usize, need: &Score) -> Result<bool> {
    let star = star_partition(e);
    let mut p = IntegerProgram::new();
    let vars: Vec<usize> = star
        .groups
        .iter()
        .enumerate()
        .map(|(g, grp)| p.add_var(format!("x_{g}"), 0, grp.candidates.len() as i64))
        .collect();
    let terms: Vec<(usize, i64)> = vars.iter().map(|&v| (v, 1)).collect();
    p.add_int_constraint(&terms, Relation::Eq, size as i64);
    let mut satisfied = Vec::new();
    for vi in 0..e.num_votes() {
        let y = p.add_var(format!("y_{vi}"), 0, 1);
        let mut row = vec![(y, 1)];
        for (g, grp) in star.groups.iter().enumerate() {
            if grp.voters.binary_search(&vi).is_ok() {
                row.push((vars[g], -1));
            }
        }
        p.add_int_constraint(&row, Relation::Le, 0);
        satisfied.push((y, int(1)));
    }
    p.add_constraint(satisfied, Relation::Ge, need.clone());
    Ok(p.find()?.is_some())
}

fn thiele_shortable(
    rule: &Rule,
    e: &Election,
    k: usize,
    s: &Score,
    star: &StarPartition,
    target: usize,
) -> Result<bool> {
    let omega = rule.thiele_table(k)?;
    let mut p = IntegerProgram::new();
    let x = class_vars(&mut p, star, target, k);
    let mut objective: Vec<(usize, Score)> = Vec::new();
    for vi in 0..e.num_votes() {
        let xv = p.add_var(format!("xv_{vi}"), 0, k as i64);
        let mut link = vec![(xv, 1)];
        for (g, grp) in star.groups.iter().enumerate() {
            if grp.voters.binary_search(&vi).is_ok() {
                link.push((x[g], -1));
            }
        }
        p.add_int_constraint(&link, Relation::Eq, 0);
        // x_v written in unary so the concave ω-sum becomes linear
        let z: Vec<usize> = (1..=k).map(|j| p.add_var(format!("z_{vi}_{j}"), 0, 1)).collect();
        let mut unary = vec![(xv, 1)];
        unary.extend(z.iter().map(|&zj| (zj, -1)));
        p.add_int_constraint(&unary, Relation::Eq, 0);
        for pair in z.windows(2) {
            p.add_int_constraint(&[(pair[0], 1), (pair[1], -1)], Relation::Ge, 0);
        }
        for (j, &zj) in z.iter().enumerate() {
            objective.push((zj, &omega[j + 1] - &omega[j]));
        }
    }
    p.add_constraint(objective, Relation::Ge, s.clone());
    Ok(p.find()?.is_some())
}

fn mav_shortable(e: &Election, k: usize, s: &Score, star: &StarPartition, target: usize) -> Result<bool> {
    let mut p = IntegerProgram::new();
    let x = class_vars(&mut p, star, target, k);
    for vi in 0..e.num_votes() {
        // Σ_{V'∋v} (m★(V') − x_{V'}) + Σ_{V'∌v} x_{V'} ≤ s
        let mut row = Vec::new();
        let mut constant = 0i64;
        for (g, grp) in star.groups.iter().enumerate() {
            if grp.voters.binary_search(&vi).is_ok() {
                constant += grp.candidates.len() as i64;
                row.push((x[g], int(-1)));
            } else {
                row.push((x[g], int(1)));
            }
        }
        p.add_constraint(row, Relation::Le, s - int(constant));
    }
    Ok(p.find()?.is_some())
}
