//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any failure.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use abmv::campaign::{self, reduction_trial, CampaignOptions, Report, Suite, Trial};
use abmv::control::{solution_succeeds, ControlInstance, ControlSolution, ControlType};
use abmv::fixtures::{abccv_candidate_addition, mav_nrp_failure, pav_candidate_addition, split_ballot_sav};
use abmv::manipulation::{
    certify_profile, solve_manipulation_bruteforce, solve_manipulation_bruteforce_with, BruteForceOptions,
    ManipulationInstance, Variant,
};
use abmv::model::{candidate_scores, frac, int, Rule, Score};
use abmv::reductions::{element_labels, generate, ReductionKind, Rx3cInstance, Source};
use abmv::strategic::StrategicInstance;
use abmv::verdict::Verdict;
use abmv::winners::{winning_committees, Strategy};
use abmv::Election;

const SEED: u64 = 2024;

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn campaign(suite: Suite, trials: usize) -> (Report, Vec<Trial>) {
    let opts = CampaignOptions { trials, seed: SEED, workers: workers(), heavy: false };
    let t = campaign::run_trials(suite, &opts);
    (Report::from_trials(suite, SEED, &t), t)
}

fn summary(r: &Report) -> String {
    format!(
        "{} trials, {} yes, {} mismatches, {} uncertified, {} errors, {} capped",
        r.trials, r.yes, r.mismatches, r.uncertified, r.errors, r.capped
    )
}

fn names(e: &Election, rule: Rule, k: usize) -> Vec<String> {
    winning_committees(&rule, e, k, Strategy::Exhaustive)
        .map(|w| w.committees.iter().map(|c| e.format_set(c.members())).collect())
        .unwrap_or_default()
}

fn score_of(e: &Election, s: &[Score], label: &str) -> Score {
    s[e.index_of(label).expect("label exists")].clone()
}

fn example1() -> Outcome {
    let f = split_ballot_sav();
    let full = f.election.with_extra_votes(&f.manipulators);
    let s = candidate_scores(&Rule::Sav, &full).expect("SAV scores");
    let want = [
        ("x", frac(7, 4)),
        ("y", frac(7, 4)),
        ("z", frac(7, 4)),
        ("a", frac(5, 3)),
        ("b", frac(5, 6)),
        ("c", frac(5, 6)),
    ];
    let scores_ok = want.iter().all(|(l, v)| score_of(&full, &s, l) == *v);
    let winners_ok = names(&full, Rule::Sav, 2) == ["{x,y}", "{x,z}", "{y,z}"];
    let inst = ManipulationInstance::with_first_winner(Rule::Sav, f.election, f.manipulators, f.k, Variant::Cbcm)
        .expect("valid instance");
    let split = match solve_manipulation_bruteforce(&inst) {
        Ok(Verdict::Yes(p)) => {
            certify_profile(&inst, &p).unwrap_or(false) && p.replacements.windows(2).any(|w| w[0] != w[1])
        }
        _ => false,
    };
    let common = BruteForceOptions { common_only: true, ..Default::default() };
    let common_no = matches!(solve_manipulation_bruteforce_with(&inst, &common), Ok(Verdict::No));
    check(
        scores_ok && winners_ok && split && common_no,
        format!("scores {scores_ok}, winners {winners_ok}, split YES {split}, common NO {common_no}"),
    )
}

fn rx3c(kappa: usize) -> Rx3cInstance {
    let sets: Vec<[usize; 3]> = match kappa {
        1 => vec![[0, 1, 2]; 3],
        _ => vec![[0, 1, 2], [3, 4, 5], [6, 7, 8], [0, 3, 6], [1, 4, 7], [2, 5, 8], [0, 4, 8], [1, 5, 6], [2, 3, 7]],
    };
    Rx3cInstance::new(element_labels(3 * kappa), sets).expect("valid RX3C instance")
}

fn control(kind: ReductionKind, x: &Rx3cInstance) -> Option<ControlInstance> {
    match generate(kind, &Source::Rx3c(x.clone())) {
        Ok(StrategicInstance::Control(c)) => Some(c),
        _ => None,
    }
}

fn table3(kappa: usize) -> bool {
    let x = rx3c(kappa);
    let Some(inst) = control(ReductionKind::CcdvSavRx3c, &x) else { return false };
    let e = &inst.election;
    let Ok(s) = candidate_scores(&Rule::Sav, e) else { return false };
    score_of(e, &s, "p") == frac(5, 6)
        && x.universe.iter().all(|a| score_of(e, &s, a) == int(1))
        && score_of(e, &s, "d1") == frac(1, 2)
        && score_of(e, &s, "d2") == frac(1, 3)
        && score_of(e, &s, "d3") == frac(1, 3)
}

fn table4(kappa: usize) -> bool {
    let x = rx3c(kappa);
    let Some(inst) = control(ReductionKind::CcacSavRx3c, &x) else { return false };
    let e = inst.base_election().election;
    let Ok(s) = candidate_scores(&Rule::Sav, &e) else { return false };
    score_of(&e, &s, "p") == frac(11, 6)
        && x.universe.iter().all(|a| score_of(&e, &s, &format!("c({a})")) == int(2))
        && score_of(&e, &s, "d1") == frac(1, 2)
        && score_of(&e, &s, "d2") == frac(1, 3)
        && score_of(&e, &s, "d3") == frac(1, 3)
}

fn table5() -> bool {
    let kappa = 3i64;
    let x = rx3c(3);
    let Some(inst) = control(ReductionKind::CcdcSavRx3c, &x) else { return false };
    let e = &inst.election;
    let Ok(s) = candidate_scores(&Rule::Sav, e) else { return false };
    score_of(e, &s, "p") == int(9 * kappa + 6)
        && x.universe.iter().all(|a| score_of(e, &s, &format!("c({a})")) == int(11 * kappa + 4))
        && (0..x.sets.len()).all(|h| score_of(e, &s, &format!("c({})", x.set_label(h))) == int(9 * kappa + 3))
}

fn tables() -> Outcome {
    let limit = Duration::from_secs(1);
    let mut parts = Vec::new();
    let mut ok = true;
    type Case = (&'static str, fn() -> bool);
    let cases: [Case; 5] = [
        ("table3 k=1", || table3(1)),
        ("table3 k=3", || table3(3)),
        ("table4 k=1", || table4(1)),
        ("table4 k=3", || table4(3)),
        ("table5 k=3", table5),
    ];
    for (name, f) in cases {
        let start = Instant::now();
        let good = f();
        let took = start.elapsed();
        ok &= good && took < limit;
        parts.push(format!("{name} {} {:.0?}", if good { "exact" } else { "WRONG" }, took));
    }
    check(ok, parts.join(", "))
}

fn examples23() -> Outcome {
    let (registered, full) = mav_nrp_failure();
    let before = names(&registered, Rule::Mav, 1);
    let after = names(&full, Rule::Mav, 1);
    let mav_ok = before == ["{a}", "{b}"] && after == ["{a}"];
    let mut flips = true;
    for (rule, e) in [(Rule::Abccv, abccv_candidate_addition()), (Rule::Pav, pav_candidate_addition())] {
        flips &= names(&e.restrict(&[0, 1, 2]), rule.clone(), 2) == ["{b,c}"];
        flips &= names(&e, rule.clone(), 2) == ["{a,d}"];
        let inst = ControlInstance::new(ControlType::Ccac, rule, e, vec![0, 1, 2], vec![], 2, vec![0], 1, 0);
        let sol = ControlSolution { added_candidates: vec![3], ..Default::default() };
        flips &= inst.is_ok_and(|i| solution_succeeds(&i, &sol).unwrap_or(false));
    }
    check(mav_ok && flips, format!("MAV {before:?} -> {after:?}, ABCCV/PAV flip {flips}"))
}

fn by_solver(trials: &[Trial]) -> BTreeMap<String, (usize, usize)> {
    let mut out: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    for t in trials {
        let name = t.label.split_whitespace().next().unwrap_or("").to_string();
        let e = out.entry(name).or_default();
        e.0 += 1;
        e.1 += usize::from(!t.ok());
    }
    out
}

fn main() {
    let mut failed = 0;
    let mut all_trials: Vec<Trial> = Vec::new();
    let mut report = |n: usize, name: &str, limit: Option<Duration>, took: Duration, o: Outcome| {
        let in_time = limit.is_none_or(|l| took < l);
        let ok = o.ok && in_time;
        failed += usize::from(!ok);
        let bound = limit.map(|l| format!(" (limit {l:.0?})")).unwrap_or_default();
        println!("criterion {n} {name}: {} in {took:.2?}{bound}: {}", if ok { "PASS" } else { "FAIL" }, o.detail);
    };

    let start = Instant::now();
    let o = example1();
    report(1, "example 1 fixture", Some(Duration::from_secs(1)), start.elapsed(), o);

    let start = Instant::now();
    let o = tables();
    report(2, "table fixtures", None, start.elapsed(), o);

    let start = Instant::now();
    let (r, t) = campaign(Suite::Lemma1, 500);
    all_trials.extend(t);
    report(
        3,
        "single-winner MAV",
        Some(Duration::from_secs(30)),
        start.elapsed(),
        check(r.passed() && r.trials == 500, summary(&r)),
    );

    let start = Instant::now();
    let (r, t) = campaign(Suite::Lemma2, 200);
    all_trials.extend(t);
    report(4, "NSAV padding order", None, start.elapsed(), check(r.passed() && r.trials == 200, summary(&r)));

    let start = Instant::now();
    let o = examples23();
    report(5, "examples 2 and 3", None, start.elapsed(), o);

    let start = Instant::now();
    let (_, mut t) = campaign(Suite::Reductions, 198);
    for (i, seed) in campaign::trial_seeds(SEED + 1, 2).into_iter().enumerate() {
        t.push(reduction_trial(ReductionKind::CcdcNsavRx3c, 198 + i, seed));
    }
    let r6 = Report::from_trials(Suite::Reductions, SEED, &t);
    let kinds = t
        .iter()
        .map(|x| x.label.split_whitespace().next().unwrap_or(""))
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    let all_kinds = kinds == ReductionKind::ALL.len();
    all_trials.extend(t);
    report(
        6,
        "reduction round trips",
        Some(Duration::from_secs(300)),
        start.elapsed(),
        check(r6.passed() && r6.trials >= 200 && all_kinds, format!("{}, {} kinds", summary(&r6), kinds)),
    );

    let start = Instant::now();
    let mut solvers = BTreeMap::new();
    let mut reports = Vec::new();
    for (suite, n) in [(Suite::Manipulation, 500), (Suite::Control, 500), (Suite::Jcc, 100)] {
        let (r, t) = campaign(suite, n);
        solvers.extend(by_solver(&t));
        all_trials.extend(t);
        reports.push(r);
    }
    let enough = solvers.len() == 11 && solvers.values().all(|&(n, bad)| n >= 100 && bad == 0);
    let detail = solvers.iter().map(|(k, (n, bad))| format!("{k} {n}/{bad}")).collect::<Vec<_>>().join(", ");
    report(
        7,
        "solver agreement",
        Some(Duration::from_secs(600)),
        start.elapsed(),
        check(enough && reports.iter().all(Report::passed), format!("trials/failures: {detail}")),
    );

    let start = Instant::now();
    let (r, t) = campaign(Suite::Immunity, 200);
    all_trials.extend(t);
    report(8, "immunity fuzz", None, start.elapsed(), check(r.passed() && r.trials == 200, summary(&r)));

    let start = Instant::now();
    let yes = all_trials.iter().filter(|t| t.yes).count();
    let uncertified = all_trials.iter().filter(|t| t.yes && !t.certified).count();
    report(
        9,
        "witness certification",
        None,
        start.elapsed(),
        check(uncertified == 0 && yes > 0, format!("{yes} YES verdicts, {uncertified} uncertified")),
    );

    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
