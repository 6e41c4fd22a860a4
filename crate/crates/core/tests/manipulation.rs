use abmv::fixtures::split_ballot_sav;
use abmv::manipulation::{
    certify_profile, solve_av_const_manipulators, solve_manipulation_bruteforce, solve_manipulation_bruteforce_with,
    solve_manipulation_fpt_m_additive, solve_manipulation_fpt_m_av, solve_savnsav_const_manipulators, solve_sdcm_fpt_m,
    BallotProfile, BruteForceOptions, ManipulationInstance, SearchSpace, Variant,
};
use abmv::model::{candidate_scores, frac, Rule};
use abmv::random::{random_manipulation, rng, ManipulationShape};
use abmv::verdict::Verdict;
use abmv::winners::{winning_committees, Strategy};
use abmv::Result;

fn split_instance(rule: Rule, pad: usize) -> ManipulationInstance {
    let f = split_ballot_sav();
    let election = f.election.pad_with_dummies(pad);
    ManipulationInstance::with_first_winner(rule, election, f.manipulators, f.k, Variant::Cbcm).unwrap()
}

fn assert_agree(
    inst: &ManipulationInstance,
    solver: impl Fn(&ManipulationInstance) -> Result<Verdict<BallotProfile>>,
    seed: u64,
) {
    let oracle = solve_manipulation_bruteforce(inst).unwrap();
    let got = solver(inst).unwrap();
    assert_eq!(got.is_yes(), oracle.is_yes(), "seed {seed}: {inst:?}");
    if let Verdict::Yes(p) = got {
        assert!(certify_profile(inst, &p).unwrap());
    }
}

#[test]
fn split_ballots_fixture_scores_and_winners() {
    let f = split_ballot_sav();
    let full = f.election.with_extra_votes(&f.manipulators);
    let scores = candidate_scores(&Rule::Sav, &full).unwrap();
    let by = |l: &str| scores[full.index_of(l).unwrap()].clone();
    for l in ["x", "y", "z"] {
        assert_eq!(by(l), frac(7, 4));
    }
    assert_eq!(by("a"), frac(5, 3));
    assert_eq!(by("b"), frac(5, 6));
    assert_eq!(by("c"), frac(5, 6));
    let ws = winning_committees(&Rule::Sav, &full, 2, Strategy::Exhaustive).unwrap();
    let names: Vec<String> = ws.committees.iter().map(|w| full.format_set(w.members())).collect();
    assert_eq!(names, ["{x,y}", "{x,z}", "{y,z}"]);
}

#[test]
fn split_ballots_needed_under_sav() {
    let inst = split_instance(Rule::Sav, 0);
    let common = BruteForceOptions { common_only: true, ..Default::default() };
    assert!(!solve_manipulation_bruteforce_with(&inst, &common).unwrap().is_yes());
    let Verdict::Yes(p) = solve_manipulation_bruteforce(&inst).unwrap() else { panic!("expected YES") };
    assert!(p.replacements.windows(2).any(|w| w[0] != w[1]));
    assert!(solve_savnsav_const_manipulators(&inst).unwrap().is_yes());
}

#[test]
fn split_ballots_padded_nsav() {
    let f = split_ballot_sav();
    let (n, m) = (f.election.num_votes() + f.manipulators.len(), f.election.num_candidates());
    let inst = split_instance(Rule::Nsav, n * m * m);
    let bf = solve_manipulation_bruteforce(&inst).unwrap();
    assert!(bf.is_yes());
    // every candidate is approvable under NSAV, so the padded roster is too wide for the tables
    assert!(matches!(solve_savnsav_const_manipulators(&inst), Err(abmv::Error::CapExceeded(_))));
}

#[test]
fn av_blocks_agree_with_bruteforce() {
    let mut r = rng(4);
    for seed in 0..150 {
        let variant = if seed % 2 == 0 { Variant::Cbcm } else { Variant::Sbcm };
        let inst = random_manipulation(&mut r, Rule::Av, variant, &ManipulationShape::default()).unwrap();
        assert_agree(&inst, solve_av_const_manipulators, seed);
    }
}

#[test]
fn sav_nsav_tables_agree_with_bruteforce() {
    let mut r = rng(5);
    let shape = ManipulationShape { max_m: 5, max_n: 5, ..Default::default() };
    for seed in 0..160 {
        let rule = if seed % 4 < 2 { Rule::Sav } else { Rule::Nsav };
        let variant = if seed % 2 == 0 { Variant::Cbcm } else { Variant::Sbcm };
        let inst = random_manipulation(&mut r, rule, variant, &shape).unwrap();
        assert_agree(&inst, solve_savnsav_const_manipulators, seed);
    }
}

#[test]
fn common_ballot_enumeration_agrees_with_bruteforce() {
    let mut r = rng(6);
    for seed in 0..150 {
        let variant = if seed % 2 == 0 { Variant::Cbcm } else { Variant::Sbcm };
        let shape = ManipulationShape { max_m: 8, ..Default::default() };
        let inst = random_manipulation(&mut r, Rule::Av, variant, &shape).unwrap();
        assert_agree(&inst, solve_manipulation_fpt_m_av, seed);
    }
}

#[test]
fn collection_programs_agree_with_bruteforce() {
    let mut r = rng(7);
    let shape = ManipulationShape { max_m: 5, max_n: 5, ..Default::default() };
    for seed in 0..120 {
        let rule = [Rule::Av, Rule::Sav, Rule::Nsav][seed as usize % 3].clone();
        let variant = if seed % 2 == 0 { Variant::Cbcm } else { Variant::Sbcm };
        let inst = random_manipulation(&mut r, rule, variant, &shape).unwrap();
        assert_agree(&inst, solve_manipulation_fpt_m_additive, seed);
    }
}

#[test]
fn sdcm_programs_agree_with_bruteforce() {
    let mut r = rng(8);
    let shape = ManipulationShape { max_m: 5, max_n: 5, ..Default::default() };
    for seed in 0..120 {
        let rule = [Rule::Av, Rule::Sav, Rule::Nsav][seed as usize % 3].clone();
        let inst = random_manipulation(&mut r, rule, Variant::Sdcm, &shape).unwrap();
        assert_agree(&inst, solve_sdcm_fpt_m, seed);
    }
}

#[test]
fn mav_symmetric_search_agrees_with_plain_search() {
    let mut r = rng(9);
    let shapes = [
        ManipulationShape { max_m: 5, max_n: 2, max_t: 3, max_k: 2, p: 0.5 },
        ManipulationShape { max_m: 4, max_n: 2, max_t: 2, max_k: 1, p: 0.3 },
        ManipulationShape { max_m: 6, max_n: 2, max_t: 2, max_k: 2, p: 0.4 },
    ];
    let plain = BruteForceOptions { symmetry: false, ..Default::default() };
    let mut yes = 0;
    for seed in 0..600 {
        let shape = &shapes[seed as usize / 200];
        let variant = [Variant::Cbcm, Variant::Sbcm][seed as usize % 2];
        let inst = random_manipulation(&mut r, Rule::Mav, variant, shape).unwrap();
        let oracle = solve_manipulation_bruteforce_with(&inst, &plain).unwrap();
        let got = solve_manipulation_bruteforce(&inst).unwrap();
        assert_eq!(got.is_yes(), oracle.is_yes(), "seed {seed}: {inst:?}");
        if let Verdict::Yes(p) = got {
            assert!(certify_profile(&inst, &p).unwrap());
        }
        yes += oracle.is_yes() as usize;
    }
    assert!(yes >= 5, "only {yes} YES instances");
}

#[test]
fn satisfied_manipulator_cannot_gain() {
    let f = split_ballot_sav();
    let full = f.election.with_extra_votes(&f.manipulators);
    let w = full.committee(&["x", "y"]).unwrap();
    let v = full.ballot(&["x", "y"]).unwrap();
    let inst = ManipulationInstance::new(Rule::Av, f.election.clone(), vec![v], 2, Some(w), Variant::Cbcm);
    if let Ok(inst) = inst {
        assert!(!solve_manipulation_bruteforce(&inst).unwrap().is_yes());
        assert!(!solve_av_const_manipulators(&inst).unwrap().is_yes());
    }
}

#[test]
fn nsav_coalition_may_approve_unwanted_candidates() {
    // a longer ballot deepens the penalty on the candidates left off it
    let e = abmv::Election::from_labels(&["c0", "c1", "c2", "c3", "c4"], &[&["c1", "c2", "c3"]]).unwrap();
    let manipulators = vec![e.ballot(&["c0", "c1", "c4"]).unwrap()];
    let baseline = e.committee(&["c1", "c2", "c3"]).unwrap();
    let inst = ManipulationInstance::new(Rule::Nsav, e, manipulators, 3, Some(baseline), Variant::Sbcm).unwrap();
    for v in [solve_manipulation_bruteforce(&inst).unwrap(), solve_savnsav_const_manipulators(&inst).unwrap()] {
        let p = v.witness().cloned().expect("YES");
        assert!(p.replacements[0].as_slice().iter().any(|c| !inst.manipulators[0].contains(*c)));
        assert!(certify_profile(&inst, &p).unwrap());
    }
}

#[test]
fn restricted_space_misses_nsav_witnesses() {
    let e = abmv::Election::from_labels(&["c0", "c1", "c2", "c3", "c4"], &[&["c0", "c2"], &["c2", "c3"]]).unwrap();
    let manipulators = vec![e.ballot(&["c1", "c3", "c4"]).unwrap()];
    let inst = ManipulationInstance::new(Rule::Nsav, e, manipulators, 3, None, Variant::Sdcm).unwrap();
    let restricted = BruteForceOptions { space: SearchSpace::Restricted, ..Default::default() };
    assert!(!solve_manipulation_bruteforce_with(&inst, &restricted).unwrap().is_yes());
    let full = solve_manipulation_bruteforce(&inst).unwrap().witness().cloned().expect("YES");
    assert!(full.replacements[0].as_slice().iter().any(|c| !inst.manipulators[0].contains(*c)));
    assert!(solve_sdcm_fpt_m(&inst).unwrap().is_yes());
}
