//! Exact integer programs with rational coefficients, solved by depth-first
//! branch-and-bound with bound propagation.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::model::{int, Score};

pub type VarId = usize;

/// Default node budget for a single program.
pub const DEFAULT_NODE_CAP: u64 = 2_000_000;

/// Node budget, overridable through the `ABMV_NODE_CAP` environment variable.
pub fn node_cap() -> u64 {
    solver_cap(DEFAULT_NODE_CAP as u128).min(u64::MAX as u128) as u64
}

/// A solver's search cap: `default`, or the value of `ABMV_NODE_CAP` when set.
pub fn solver_cap(default: u128) -> u128 {
    std::env::var("ABMV_NODE_CAP").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(default)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Lt,
    Eq,
    Ge,
    Gt,
}

impl Relation {
    fn holds(self, lhs: &Score, rhs: &Score) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub lower: Option<i64>,
    pub upper: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub terms: Vec<(VarId, Score)>,
    pub relation: Relation,
    pub rhs: Score,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntegerProgram {
    vars: Vec<Variable>,
    constraints: Vec<Constraint>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IpSolution {
    pub values: Vec<i64>,
}

impl IpSolution {
    pub fn value(&self, v: VarId) -> i64 {
        self.values[v]
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IpOutcome {
    Feasible(IpSolution),
    Infeasible,
    CapExceeded { nodes: u64 },
}

/// `Σ a_i x_i ≤ b` over integers.
#[derive(Clone, Debug)]
struct Row {
    terms: Vec<(usize, i128)>,
    rhs: i128,
}

impl IntegerProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: i64, upper: i64) -> VarId {
        self.vars.push(Variable { name: name.into(), lower: Some(lower), upper: Some(upper) });
        self.vars.len() - 1
    }

    /// A variable without bounds; such programs are rejected by [`IntegerProgram::solve`].
    pub fn add_free_var(&mut self, name: impl Into<String>) -> VarId {
        self.vars.push(Variable { name: name.into(), lower: None, upper: None });
        self.vars.len() - 1
    }

    pub fn add_constraint(&mut self, terms: Vec<(VarId, Score)>, relation: Relation, rhs: Score) {
        self.constraints.push(Constraint { terms, relation, rhs });
    }

    pub fn add_int_constraint(&mut self, terms: &[(VarId, i64)], relation: Relation, rhs: i64) {
        let terms = terms.iter().map(|&(v, a)| (v, int(a))).collect();
        self.add_constraint(terms, relation, int(rhs));
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    fn bounds(&self) -> Result<(Vec<i128>, Vec<i128>)> {
        let mut lo = Vec::with_capacity(self.vars.len());
        let mut hi = Vec::with_capacity(self.vars.len());
        for v in &self.vars {
            match (v.lower, v.upper) {
                (Some(l), Some(u)) => {
                    lo.push(l as i128);
                    hi.push(u as i128);
                }
                _ => return Err(Error::Validation(format!("variable `{}` is unbounded", v.name))),
            }
        }
        Ok((lo, hi))
    }

    fn normalize(&self) -> Result<Vec<Row>> {
        let mut rows = Vec::new();
        for (ci, c) in self.constraints.iter().enumerate() {
            let mut merged: BTreeMap<usize, Score> = BTreeMap::new();
            for (v, a) in &c.terms {
                if *v >= self.vars.len() {
                    return Err(Error::Validation(format!("constraint {ci} uses unknown variable {v}")));
                }
                *merged.entry(*v).or_insert_with(Score::zero) += a;
            }
            merged.retain(|_, a| !a.is_zero());
            let mut lcm = c.rhs.denom().clone();
            for a in merged.values() {
                lcm = lcm.lcm(a.denom());
            }
            let scale = |x: &Score| -> BigInt { x.numer() * (&lcm / x.denom()) };
            let coeffs: Vec<(usize, BigInt)> = merged.iter().map(|(&v, a)| (v, scale(a))).collect();
            let b = scale(&c.rhs);
            let neg = |t: &[(usize, BigInt)]| t.iter().map(|(v, a)| (*v, -a)).collect::<Vec<_>>();
            let one = BigInt::one();
            let variants: Vec<(Vec<(usize, BigInt)>, BigInt)> = match c.relation {
                Relation::Le => vec![(coeffs, b)],
                Relation::Lt => vec![(coeffs, b - one)],
                Relation::Ge => vec![(neg(&coeffs), -b)],
                Relation::Gt => vec![(neg(&coeffs), -b - one)],
                Relation::Eq => vec![(neg(&coeffs), -b.clone()), (coeffs, b)],
            };
            for (terms, rhs) in variants {
                rows.push(to_row(terms, rhs, ci)?);
            }
        }
        Ok(rows)
    }

    /// Searches for a feasible integer assignment within `node_cap` search nodes.
    pub fn solve(&self, node_cap: u64) -> Result<IpOutcome> {
        let (lo, hi) = self.bounds()?;
        let rows = self.normalize()?;
        let mut var_rows = vec![Vec::new(); self.vars.len()];
        for (r, row) in rows.iter().enumerate() {
            for &(v, _) in &row.terms {
                var_rows[v].push(r);
            }
        }
        let solver = Solver { rows: &rows, var_rows: &var_rows };
        let mut stack: Vec<(Vec<i128>, Vec<i128>, Option<usize>)> = vec![(lo, hi, None)];
        let mut nodes = 0u64;
        while let Some((mut lo, mut hi, touched)) = stack.pop() {
            nodes += 1;
            if nodes > node_cap {
                return Ok(IpOutcome::CapExceeded { nodes: nodes - 1 });
            }
            if !solver.propagate(&mut lo, &mut hi, touched) {
                continue;
            }
            let branch = (0..lo.len()).filter(|&i| lo[i] < hi[i]).min_by_key(|&i| (hi[i] - lo[i], i));
            match branch {
                None => {
                    let values: Vec<i64> = lo.iter().map(|&x| x as i64).collect();
                    if self.check_solution(&values) {
                        return Ok(IpOutcome::Feasible(IpSolution { values }));
                    }
                }
                Some(i) => {
                    let mid = lo[i] + (hi[i] - lo[i]).div_euclid(2);
                    let (mut lo2, hi2) = (lo.clone(), hi.clone());
                    lo2[i] = mid + 1;
                    stack.push((lo2, hi2, Some(i)));
                    hi[i] = mid;
                    stack.push((lo, hi, Some(i)));
                }
            }
        }
        Ok(IpOutcome::Infeasible)
    }

    /// Solves under [`node_cap`], turning an exhausted budget into an error and
    /// re-checking any solution found.
    pub fn find(&self) -> Result<Option<IpSolution>> {
        match self.solve(node_cap())? {
            IpOutcome::Feasible(sol) => {
                assert!(self.check_solution(&sol.values), "solver returned an uncertified assignment");
                Ok(Some(sol))
            }
            IpOutcome::Infeasible => Ok(None),
            IpOutcome::CapExceeded { nodes } => {
                Err(Error::CapExceeded(format!("integer program exhausted {nodes} search nodes")))
            }
        }
    }

    /// Exact re-evaluation of bounds and constraints.
    pub fn check_solution(&self, values: &[i64]) -> bool {
        if values.len() != self.vars.len() {
            return false;
        }
        let in_bounds = self
            .vars
            .iter()
            .zip(values)
            .all(|(v, &x)| v.lower.is_none_or(|l| x >= l) && v.upper.is_none_or(|u| x <= u));
        in_bounds
            && self.constraints.iter().all(|c| {
                let lhs = c.terms.iter().fold(Score::zero(), |acc, (v, a)| acc + a * int(values[*v]));
                c.relation.holds(&lhs, &c.rhs)
            })
    }

    /// Checks an assignment given by variable name; every variable must be assigned.
    pub fn check_named(&self, assignment: &BTreeMap<String, i64>) -> Result<bool> {
        let index: BTreeMap<&str, usize> = self.vars.iter().enumerate().map(|(i, v)| (v.name.as_str(), i)).collect();
        let mut values = vec![None; self.vars.len()];
        for (name, &x) in assignment {
            let &i = index.get(name.as_str()).ok_or_else(|| Error::Validation(format!("unknown variable `{name}`")))?;
            values[i] = Some(x);
        }
        match values.into_iter().collect::<Option<Vec<i64>>>() {
            Some(v) => Ok(self.check_solution(&v)),
            None => Err(Error::Validation("assignment misses some variables".into())),
        }
    }

    /// Renders the normalized program in CPLEX LP text format.
    pub fn to_lp_format(&self) -> Result<String> {
        let names: Vec<String> = self.vars.iter().map(|v| lp_name(&v.name)).collect();
        let rows = self.normalize()?;
        let mut out = String::from("\\ feasibility program\nMinimize\n obj: 0");
        if let Some(first) = names.first() {
            let _ = write!(out, " {first}");
        }
        out.push_str("\nSubject To\n");
        for (i, row) in rows.iter().enumerate() {
            let _ = write!(out, " r{i}:");
            if row.terms.is_empty() {
                let _ = write!(out, " 0 {}", names.first().map(String::as_str).unwrap_or("x"));
            }
            for &(v, a) in &row.terms {
                let sign = if a < 0 { '-' } else { '+' };
                let _ = write!(out, " {sign} {} {}", a.abs(), names[v]);
            }
            let _ = writeln!(out, " <= {}", row.rhs);
        }
        out.push_str("Bounds\n");
        for (v, name) in self.vars.iter().zip(&names) {
            match (v.lower, v.upper) {
                (Some(l), Some(u)) => {
                    let _ = writeln!(out, " {l} <= {name} <= {u}");
                }
                _ => {
                    let _ = writeln!(out, " {name} free");
                }
            }
        }
        out.push_str("General\n");
        for name in &names {
            let _ = writeln!(out, " {name}");
        }
        out.push_str("End\n");
        Ok(out)
    }
}

fn lp_name(name: &str) -> String {
    let cleaned: String =
        name.chars().map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '.' { c } else { '_' }).collect();
    if cleaned.chars().next().is_none_or(|c| c.is_ascii_digit() || c == '.') {
        format!("v_{cleaned}")
    } else {
        cleaned
    }
}

fn to_row(terms: Vec<(usize, BigInt)>, rhs: BigInt, ci: usize) -> Result<Row> {
    let overflow = || Error::Validation(format!("constraint {ci} has coefficients too large for the solver"));
    let g = terms.iter().fold(BigInt::zero(), |acc, (_, a)| acc.gcd(a));
    let (terms, rhs) = if g > BigInt::one() {
        (terms.into_iter().map(|(v, a)| (v, a / &g)).collect::<Vec<_>>(), rhs.div_floor(&g))
    } else {
        (terms, rhs)
    };
    let terms = terms
        .into_iter()
        .map(|(v, a)| a.to_i128().filter(|x| x.unsigned_abs() < 1 << 60).map(|a| (v, a)).ok_or_else(overflow))
        .collect::<Result<Vec<_>>>()?;
    let rhs = rhs.to_i128().filter(|x| x.unsigned_abs() < 1 << 100).ok_or_else(overflow)?;
    Ok(Row { terms, rhs })
}

struct Solver<'a> {
    rows: &'a [Row],
    var_rows: &'a [Vec<usize>],
}

impl Solver<'_> {
    /// Tightens bounds to a fixpoint; returns false when some row cannot be satisfied.
    fn propagate(&self, lo: &mut [i128], hi: &mut [i128], touched: Option<usize>) -> bool {
        let mut queued = vec![false; self.rows.len()];
        let mut queue: VecDeque<usize> = match touched {
            Some(v) => self.var_rows[v].iter().copied().collect(),
            None => (0..self.rows.len()).collect(),
        };
        for &r in &queue {
            queued[r] = true;
        }
        let mut budget = 200_000usize;
        while let Some(r) = queue.pop_front() {
            queued[r] = false;
            let row = &self.rows[r];
            let minact: i128 = row.terms.iter().map(|&(v, a)| if a > 0 { a * lo[v] } else { a * hi[v] }).sum();
            if minact > row.rhs {
                return false;
            }
            if budget == 0 {
                continue;
            }
            budget -= 1;
            let slack = row.rhs - minact;
            for &(v, a) in &row.terms {
                let changed = if a > 0 {
                    let cap = lo[v] + slack.div_euclid(a);
                    if cap < hi[v] {
                        hi[v] = cap;
                        true
                    } else {
                        false
                    }
                } else {
                    let floor = hi[v] - slack.div_euclid(-a);
                    if floor > lo[v] {
                        lo[v] = floor;
                        true
                    } else {
                        false
                    }
                };
                if changed {
                    if lo[v] > hi[v] {
                        return false;
                    }
                    for &r2 in &self.var_rows[v] {
                        if !queued[r2] {
                            queued[r2] = true;
                            queue.push_back(r2);
                        }
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::frac;

    #[test]
    fn trivially_infeasible() {
        let mut p = IntegerProgram::new();
        let x = p.add_var("x", 0, 5);
        p.add_int_constraint(&[(x, 1)], Relation::Ge, 1);
        p.add_int_constraint(&[(x, 1)], Relation::Le, 0);
        assert_eq!(p.solve(1000).unwrap(), IpOutcome::Infeasible);
    }

    #[test]
    fn equality() {
        let mut p = IntegerProgram::new();
        let x = p.add_var("x", 0, 3);
        p.add_int_constraint(&[(x, 2)], Relation::Eq, 4);
        let IpOutcome::Feasible(s) = p.solve(1000).unwrap() else { panic!() };
        assert_eq!(s.values, vec![2]);
        let mut named = BTreeMap::new();
        named.insert("x".to_string(), 2);
        assert!(p.check_named(&named).unwrap());
        named.insert("x".to_string(), 1);
        assert!(!p.check_named(&named).unwrap());
        named.insert("y".to_string(), 1);
        assert!(p.check_named(&named).is_err());
    }

    #[test]
    fn strict_rational() {
        // x/3 + y/2 > 1 with x, y ∈ [0, 1] needs both at one.
        let mut p = IntegerProgram::new();
        let x = p.add_var("x", 0, 1);
        let y = p.add_var("y", 0, 1);
        p.add_constraint(vec![(x, frac(1, 3)), (y, frac(1, 2))], Relation::Gt, int(0) + frac(1, 2));
        p.add_constraint(vec![(x, frac(1, 3)), (y, frac(1, 2))], Relation::Lt, frac(5, 6));
        assert_eq!(p.solve(1000).unwrap(), IpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_rejected() {
        let mut p = IntegerProgram::new();
        p.add_free_var("z");
        assert!(matches!(p.solve(10), Err(Error::Validation(_))));
    }

    #[test]
    fn cap_is_distinct_from_infeasible() {
        let mut p = IntegerProgram::new();
        let vars: Vec<_> = (0..12).map(|i| p.add_var(format!("x{i}"), 0, 1)).collect();
        let terms: Vec<_> = vars.iter().map(|&v| (v, 2)).collect();
        p.add_int_constraint(&terms, Relation::Eq, 13);
        assert_eq!(p.solve(1_000_000).unwrap(), IpOutcome::Infeasible);
        let mut q = IntegerProgram::new();
        let x = q.add_var("x", 0, 1);
        let y = q.add_var("y", 0, 1);
        q.add_int_constraint(&[(x, 1), (y, 1)], Relation::Eq, 1);
        assert_eq!(q.solve(1).unwrap(), IpOutcome::CapExceeded { nodes: 1 });
        assert!(matches!(q.solve(10).unwrap(), IpOutcome::Feasible(_)));
    }

    #[test]
    fn lp_export() {
        let mut p = IntegerProgram::new();
        let x = p.add_var("x{1}", 0, 3);
        p.add_int_constraint(&[(x, 2)], Relation::Lt, 5);
        let lp = p.to_lp_format().unwrap();
        assert!(lp.contains("x_1_ <= 2"), "{lp}");
        assert!(lp.contains("General"));
    }
}
