//! Seeded verification campaigns: oracle agreement, padding and reduction
//! round trips, with every YES witness re-checked.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::Rng;
use serde::Serialize;

use crate::control::{
    immunity_verdict, solution_succeeds, solve_control_bruteforce, ControlInstance, ControlSolution, ControlType,
    ImmunityStatus,
};
use crate::error::{Error, Result};
use crate::manipulation::{certify_profile, solve_manipulation_bruteforce, ManipulationInstance, Variant};
use crate::model::{candidate_scores, Ballot, Committee, Rule};
use crate::random::{
    random_control, random_election, random_nonempty_ballot, random_subset, rng, ControlShape, SeededRng,
};
use crate::reductions::{generate, nsav_padding, random_source, solve_source, ReductionKind};
use crate::solve::{solve_control, solve_manipulation, ControlAlgo, ManipAlgo};
use crate::strategic::solve_strategic_checked;
use crate::verdict::Verdict;
use crate::winners::{j_cc, mav_single_winners, outcome, winning_committees, JccAlgo, JccInstance, Strategy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Lemma1,
    Lemma2,
    Manipulation,
    Control,
    Jcc,
    Immunity,
    Reductions,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Manipulation,
        Suite::Control,
        Suite::Jcc,
        Suite::Immunity,
        Suite::Reductions,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Manipulation => "manipulation",
            Suite::Control => "control",
            Suite::Jcc => "jcc",
            Suite::Immunity => "immunity",
            Suite::Reductions => "reductions",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }
}

/// Outcome of one seeded trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trial {
    pub index: usize,
    pub seed: u64,
    pub label: String,
    pub agree: bool,
    pub yes: bool,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub capped: bool,
}

impl Trial {
    pub fn ok(&self) -> bool {
        self.error.is_none() && self.agree && self.certified
    }
}

#[derive(Clone, Debug)]
pub struct CampaignOptions {
    pub trials: usize,
    pub seed: u64,
    pub workers: usize,
    /// Include reduction kinds whose instances take seconds each.
    pub heavy: bool,
}

impl Default for CampaignOptions {
    fn default() -> Self {
        CampaignOptions { trials: 100, seed: 0, workers: 1, heavy: false }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: &'static str,
    pub seed: u64,
    pub trials: usize,
    pub yes: usize,
    pub mismatches: usize,
    pub uncertified: usize,
    pub errors: usize,
    pub capped: usize,
    pub failures: Vec<Trial>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.uncertified == 0 && self.errors == 0 && self.capped == 0
    }

    pub fn from_trials(suite: Suite, seed: u64, trials: &[Trial]) -> Report {
        let count = |f: &dyn Fn(&Trial) -> bool| trials.iter().filter(|t| f(t)).count();
        Report {
            suite: suite.name(),
            seed,
            trials: trials.len(),
            yes: count(&|t| t.yes),
            mismatches: count(&|t| t.error.is_none() && !t.agree),
            uncertified: count(&|t| t.error.is_none() && !t.certified),
            errors: count(&|t| t.error.is_some() && !t.capped),
            capped: count(&|t| t.capped),
            failures: trials.iter().filter(|t| !t.ok()).cloned().collect(),
        }
    }
}

/// Per-trial seeds, drawn from one stream so campaigns are reproducible.
pub fn trial_seeds(seed: u64, trials: usize) -> Vec<u64> {
    let mut r = rng(seed);
    (0..trials).map(|_| r.gen()).collect()
}

/// Runs `trials` seeded trials on `workers` threads; results come back in seed order.
pub fn run(suite: Suite, opts: &CampaignOptions) -> Report {
    let trials = run_trials(suite, opts);
    Report::from_trials(suite, opts.seed, &trials)
}

pub fn run_trials(suite: Suite, opts: &CampaignOptions) -> Vec<Trial> {
    let seeds = trial_seeds(opts.seed, opts.trials);
    let slots: Mutex<Vec<Option<Trial>>> = Mutex::new(vec![None; seeds.len()]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..opts.workers.max(1).min(seeds.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&seed) = seeds.get(i) else { break };
                let t = trial(suite, i, seed, opts.heavy);
                slots.lock().expect("trial slot lock")[i] = Some(t);
            });
        }
    });
    slots.into_inner().expect("trial slot lock").into_iter().map(|t| t.expect("every trial ran")).collect()
}

struct Check {
    label: String,
    agree: bool,
    yes: bool,
    certified: bool,
}

/// One trial of `suite`; `index` picks the sub-case round robin.
pub fn trial(suite: Suite, index: usize, seed: u64, heavy: bool) -> Trial {
    let result = match suite {
        Suite::Lemma1 => lemma1(seed),
        Suite::Lemma2 => lemma2(seed),
        Suite::Manipulation => manipulation(index, seed),
        Suite::Control => control(index, seed),
        Suite::Jcc => jcc(index, seed),
        Suite::Immunity => immunity(index, seed),
        Suite::Reductions => {
            let kinds = reduction_kinds(heavy);
            reduction(kinds[index % kinds.len()], seed)
        }
    };
    finish(index, seed, suite.name(), result)
}

pub fn reduction_kinds(heavy: bool) -> Vec<ReductionKind> {
    ReductionKind::ALL.into_iter().filter(|&k| heavy || k != ReductionKind::CcdcNsavRx3c).collect()
}

fn lemma1(seed: u64) -> Result<Check> {
    let mut r = rng(seed);
    let m = r.gen_range(1..=10);
    let n = r.gen_range(0..=8);
    let p = r.gen_range(0.1..0.9);
    let e = random_election(&mut r, m, n, p);
    let fast = mav_single_winners(&e);
    let exhaustive: Vec<usize> = winning_committees(&Rule::Mav, &e, 1, Strategy::Exhaustive)?
        .committees
        .iter()
        .map(|w| w.members()[0])
        .collect();
    let mut fast_sorted = fast.clone();
    fast_sorted.sort_unstable();
    let mut ex_sorted = exhaustive;
    ex_sorted.sort_unstable();
    Ok(Check { label: format!("m={m} n={n}"), agree: fast_sorted == ex_sorted, yes: false, certified: true })
}

fn lemma2(seed: u64) -> Result<Check> {
    let mut r = rng(seed);
    let m = r.gen_range(2..=6);
    let n = r.gen_range(1..=6);
    let p = r.gen_range(0.2..0.8);
    let e = random_election(&mut r, m, n, p);
    let padded = e.pad_with_dummies(nsav_padding(n, m));
    let sav = candidate_scores(&Rule::Sav, &e)?;
    let nsav = candidate_scores(&Rule::Nsav, &padded)?;
    let agree = (0..m).all(|c| (0..m).all(|d| sav[c] <= sav[d] || nsav[c] > nsav[d]));
    Ok(Check { label: format!("m={m} n={n}"), agree, yes: false, certified: true })
}

const MANIP_ALGOS: [ManipAlgo; 5] = [
    ManipAlgo::AvBlocks,
    ManipAlgo::SavNsavTables,
    ManipAlgo::CommonBallots,
    ManipAlgo::CollectionPrograms,
    ManipAlgo::SdcmPrograms,
];

fn manipulation(index: usize, seed: u64) -> Result<Check> {
    let mut r = rng(seed);
    let algo = MANIP_ALGOS[index % MANIP_ALGOS.len()];
    let round = index / MANIP_ALGOS.len();
    let split = if round.is_multiple_of(2) { Variant::Cbcm } else { Variant::Sbcm };
    let additive = [Rule::Av, Rule::Sav, Rule::Nsav];
    let (rule, variant, max_m) = match algo {
        ManipAlgo::AvBlocks => (Rule::Av, split, 6),
        ManipAlgo::SavNsavTables => ([Rule::Sav, Rule::Nsav][round / 2 % 2].clone(), split, 5),
        ManipAlgo::CommonBallots => (Rule::Av, split, 7),
        ManipAlgo::CollectionPrograms => (additive[round % 3].clone(), split, 5),
        _ => (additive[round % 3].clone(), Variant::Sdcm, 5),
    };
    // random coalitions rarely gain, so every other trial redraws until the oracle says YES
    let want_yes = round / 4 % 2 == 1;
    let mut draws = 0;
    let (inst, oracle) = loop {
        let inst = draw_manipulation(&mut r, rule.clone(), variant, max_m)?;
        let oracle = solve_manipulation_bruteforce(&inst)?;
        draws += 1;
        if !want_yes || oracle.is_yes() || draws == YES_DRAWS {
            break (inst, oracle);
        }
    };
    let got = solve_manipulation(&inst, algo)?.verdict;
    let certified = certified_profile(&inst, &oracle)? && certified_profile(&inst, &got)?;
    Ok(Check {
        label: format!("{algo} {rule} {}", variant.name()),
        agree: got.is_yes() == oracle.is_yes(),
        yes: got.is_yes(),
        certified,
    })
}

const YES_DRAWS: usize = 64;

/// Honest ballots are sparser than the coalition's, and ties are broken
/// against the coalition.
fn draw_manipulation(r: &mut SeededRng, rule: Rule, variant: Variant, max_m: usize) -> Result<ManipulationInstance> {
    let m = r.gen_range(3..=max_m);
    let n = r.gen_range(1..=4);
    let t = r.gen_range(1..=3);
    let k = r.gen_range(1..=(m - 1).min(3));
    let election = random_election(r, m, n, 0.35);
    let manipulators: Vec<Ballot> = (0..t).map(|_| random_nonempty_ballot(r, m, 0.65)).collect();
    let mut inst = ManipulationInstance::with_first_winner(rule, election, manipulators, k, variant)?;
    if variant != Variant::Sdcm {
        let ws = winning_committees(&inst.rule, &inst.full_election(), k, Strategy::Auto)?;
        let gain = |w: &&Committee| inst.manipulators.iter().map(|v| v.overlap(w.members())).sum::<usize>();
        inst.baseline = ws.committees.iter().min_by_key(gain).cloned();
    }
    Ok(inst)
}

fn certified_profile(inst: &ManipulationInstance, v: &Verdict<crate::manipulation::BallotProfile>) -> Result<bool> {
    match v {
        Verdict::Yes(p) => certify_profile(inst, p),
        Verdict::No => Ok(true),
    }
}

fn certified_solution(inst: &ControlInstance, v: &Verdict<ControlSolution>) -> Result<bool> {
    match v {
        Verdict::Yes(s) => solution_succeeds(inst, s),
        Verdict::No => Ok(true),
    }
}

const CONTROL_ALGOS: [ControlAlgo; 5] = [
    ControlAlgo::CcdvMav,
    ControlAlgo::CcavMav,
    ControlAlgo::AdditivePrograms,
    ControlAlgo::ThielePrograms,
    ControlAlgo::ColorCoding,
];

const VOTER_CONTROL: [ControlType; 3] = [ControlType::Ccav, ControlType::Ccdv, ControlType::Ccadv];
const CANDIDATE_CONTROL: [ControlType; 3] = [ControlType::Ccac, ControlType::Ccdc, ControlType::Ccadc];

fn control(index: usize, seed: u64) -> Result<Check> {
    let mut r = rng(seed);
    let algo = CONTROL_ALGOS[index % CONTROL_ALGOS.len()];
    let round = index / CONTROL_ALGOS.len();
    let base = ControlShape::default();
    let (rule, kind, shape) = match algo {
        ControlAlgo::CcdvMav => (Rule::Mav, ControlType::Ccdv, ControlShape { max_n: 6, ..base }),
        ControlAlgo::CcavMav => (Rule::Mav, ControlType::Ccav, ControlShape { max_unregistered: 5, ..base }),
        ControlAlgo::AdditivePrograms => {
            ([Rule::Av, Rule::Sav, Rule::Nsav][round % 3].clone(), VOTER_CONTROL[round / 3 % 3], base)
        }
        ControlAlgo::ThielePrograms => (
            [Rule::Pav, Rule::Abccv, Rule::Av][round % 3].clone(),
            VOTER_CONTROL[round / 3 % 3],
            ControlShape { max_registered: 4, ..base },
        ),
        _ => (
            [Rule::Sav, Rule::Nsav, Rule::Abccv, Rule::Pav, Rule::Mav][round % 5].clone(),
            CANDIDATE_CONTROL[round / 5 % 3],
            base,
        ),
    };
    let inst = random_control(&mut r, rule.clone(), kind, &shape, 3)?;
    let oracle = solve_control_bruteforce(&inst)?;
    let got = solve_control(&inst, algo, seed)?.verdict;
    let certified = certified_solution(&inst, &oracle)? && certified_solution(&inst, &got)?;
    Ok(Check {
        label: format!("{algo} {rule} {}", kind.name()),
        agree: got.is_yes() == oracle.is_yes(),
        yes: got.is_yes(),
        certified,
    })
}

fn jcc(index: usize, seed: u64) -> Result<Check> {
    let mut r = rng(seed);
    let rule = [Rule::Pav, Rule::Abccv, Rule::Mav][index % 3].clone();
    let m = r.gen_range(2..=6);
    let n = r.gen_range(1..=6);
    let p = r.gen_range(0.2..0.7);
    let e = random_election(&mut r, m, n, p);
    let k = r.gen_range(1..=m.min(3));
    let j_size = r.gen_range(1..=k);
    let j = random_subset(&mut r, m, j_size);
    let inst = JccInstance::new(e, k, j)?;
    let fpt = j_cc(&rule, &inst, JccAlgo::FptN)?;
    let brute = j_cc(&rule, &inst, JccAlgo::BruteForce)?;
    let certified = !fpt || outcome(&rule, &inst.election, k)?.all_contain(&inst.j);
    Ok(Check { label: format!("fpt-n {rule} m={m} n={n} k={k}"), agree: fpt == brute, yes: fpt, certified })
}

fn immunity(index: usize, seed: u64) -> Result<Check> {
    let mut r = rng(seed);
    let (rule, full) = [(Rule::Av, false), (Rule::Pav, true), (Rule::Abccv, true)][index % 3].clone();
    let shape = ControlShape { max_unregistered: 4, ..Default::default() };
    let mut inst = random_control(&mut r, rule.clone(), ControlType::Ccac, &shape, 3)?;
    if full {
        let extra: Vec<usize> =
            inst.registered.iter().copied().filter(|c| !inst.j.contains(c)).take(inst.k - inst.j.len()).collect();
        inst.j.extend(extra);
        inst.j.sort_unstable();
    }
    let base = solution_succeeds(&inst, &ControlSolution::default())?;
    let controlled = solve_control_bruteforce(&inst)?;
    let immune = immunity_verdict(&inst.rule, inst.kind, inst.k, inst.j.len()).status == ImmunityStatus::Immune;
    Ok(Check {
        label: format!("{rule} ccac |J|={} k={}", inst.j.len(), inst.k),
        agree: immune && base == controlled.is_yes(),
        yes: controlled.is_yes(),
        certified: certified_solution(&inst, &controlled)?,
    })
}

/// Source oracle against the exhaustive strategic oracle on a random source.
fn reduction(kind: ReductionKind, seed: u64) -> Result<Check> {
    let mut r = rng(seed);
    let source = random_source(&mut r, kind)?;
    let expected = solve_source(&source, kind.source_problem())?;
    let checked = solve_strategic_checked(&generate(kind, &source)?, kind.oracle_space())?;
    Ok(Check {
        label: format!("{kind} source={expected} strategic={}", checked.answer),
        agree: (expected == checked.answer) != kind.inverted(),
        yes: checked.answer,
        certified: checked.certified,
    })
}

/// A reduction trial for a fixed kind, outside the round-robin schedule.
pub fn reduction_trial(kind: ReductionKind, index: usize, seed: u64) -> Trial {
    finish(index, seed, kind.name(), reduction(kind, seed))
}

fn finish(index: usize, seed: u64, name: &str, result: Result<Check>) -> Trial {
    match result {
        Ok(c) => Trial {
            index,
            seed,
            label: c.label,
            agree: c.agree,
            yes: c.yes,
            certified: c.certified,
            error: None,
            capped: false,
        },
        Err(e) => Trial {
            index,
            seed,
            label: name.into(),
            agree: false,
            yes: false,
            certified: false,
            capped: matches!(e, Error::CapExceeded(_)),
            error: Some(e.to_string()),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse_and_seeds_repeat() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!(trial_seeds(3, 5), trial_seeds(3, 5));
        assert_ne!(trial_seeds(3, 5), trial_seeds(4, 5));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let one = run_trials(Suite::Lemma2, &CampaignOptions { trials: 12, seed: 5, workers: 1, heavy: false });
        let four = run_trials(Suite::Lemma2, &CampaignOptions { trials: 12, seed: 5, workers: 4, heavy: false });
        assert_eq!(one, four);
        assert!(one.iter().all(Trial::ok));
    }
}
