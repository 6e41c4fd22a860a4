use abmv::fixtures::{abccv_candidate_addition, mav_nrp_failure, pav_candidate_addition, split_ballot_sav};
use abmv::model::{candidate_scores, committee_score, frac, int, Rule};
use abmv::random::{random_election, rng};
use abmv::winners::{j_cc, mav_single_winners, outcome, winning_committees, JccAlgo, JccInstance, Strategy};
use abmv::Election;
use rand::Rng;

fn labels(e: &Election, strategy: Strategy, rule: Rule, k: usize) -> Vec<String> {
    winning_committees(&rule, e, k, strategy).unwrap().committees.iter().map(|w| e.format_set(w.members())).collect()
}

#[test]
fn split_ballot_election_scores() {
    let f = split_ballot_sav();
    let s = candidate_scores(&Rule::Sav, &f.election).unwrap();
    let expect =
        [frac(7, 4), frac(7, 4), frac(7, 4), frac(5, 3), frac(5, 6), frac(5, 6), frac(1, 3), frac(1, 3), frac(3, 4)];
    let with_manipulators = f.election.with_extra_votes(&f.manipulators);
    assert_eq!(candidate_scores(&Rule::Sav, &with_manipulators).unwrap(), expect);
    assert_eq!(s[0], frac(7, 4));
    let mut got = labels(&with_manipulators, Strategy::Exhaustive, Rule::Sav, 2);
    got.sort();
    assert_eq!(got, ["{x,y}", "{x,z}", "{y,z}"]);
    let mut by_partition = labels(&with_manipulators, Strategy::Partition, Rule::Sav, 2);
    by_partition.sort();
    assert_eq!(by_partition, got);
}

#[test]
fn full_committee_is_the_only_winner() {
    let f = split_ballot_sav();
    for rule in [Rule::Av, Rule::Pav, Rule::Mav, Rule::Nsav] {
        let w = labels(&f.election, Strategy::Auto, rule, 9);
        assert_eq!(w.len(), 1);
    }
}

#[test]
fn mav_winners_before_and_after_adding_candidates() {
    let (registered, full) = mav_nrp_failure();
    assert_eq!(labels(&registered, Strategy::Exhaustive, Rule::Mav, 1), ["{a}", "{b}"]);
    assert_eq!(labels(&full, Strategy::Exhaustive, Rule::Mav, 1), ["{a}"]);
    let a = full.committee(&["a"]).unwrap();
    assert_eq!(committee_score(&Rule::Mav, &full, &a).unwrap(), int(2));
    let j = JccInstance::new(full.clone(), 1, vec![0]).unwrap();
    assert!(j_cc(&Rule::Mav, &j, JccAlgo::BruteForce).unwrap());
    let j = JccInstance::new(registered, 1, vec![0]).unwrap();
    assert!(!j_cc(&Rule::Mav, &j, JccAlgo::BruteForce).unwrap());
}

#[test]
fn adding_a_candidate_flips_the_proportional_winner() {
    for (rule, e) in [(Rule::Abccv, abccv_candidate_addition()), (Rule::Pav, pav_candidate_addition())] {
        let before = e.restrict(&[0, 1, 2]);
        assert_eq!(labels(&before, Strategy::Exhaustive, rule.clone(), 2), ["{b,c}"]);
        assert_eq!(labels(&e, Strategy::Exhaustive, rule, 2), ["{a,d}"]);
    }
}

#[test]
fn mav_single_winner_examples() {
    let e = Election::from_labels(&["a", "b", "c"], &[&["a", "b"], &["a", "c"], &["b"]]).unwrap();
    assert_eq!(mav_single_winners(&e), vec![0]);
    let e = Election::from_labels(&["a", "b", "c", "d"], &[&["a", "b"], &["c", "d"]]).unwrap();
    assert_eq!(mav_single_winners(&e), vec![0, 1, 2, 3]);
    let e = Election::from_labels(&["a", "b"], &[&["a"]]).unwrap();
    assert_eq!(mav_single_winners(&e), vec![0]);
}

#[test]
fn shorter_ballots_split_the_common_core() {
    // {a} is 2 away from {b}, while {b} is within 1 of both ballots
    let e = Election::from_labels(&["a", "b"], &[&["a", "b"], &["b"]]).unwrap();
    assert_eq!(mav_single_winners(&e), vec![1]);
    assert_eq!(labels(&e, Strategy::Exhaustive, Rule::Mav, 1), ["{b}"]);
}

#[test]
fn mav_single_winners_match_enumeration() {
    let mut r = rng(41);
    for _ in 0..500 {
        let m = r.gen_range(1..=10);
        let n = r.gen_range(0..=8);
        let e = random_election(&mut r, m, n, 0.4);
        let ex: Vec<usize> = winning_committees(&Rule::Mav, &e, 1, Strategy::Exhaustive)
            .unwrap()
            .committees
            .iter()
            .map(|w| w.members()[0])
            .collect();
        let mut ex = ex;
        ex.sort_unstable();
        assert_eq!(mav_single_winners(&e), ex, "{e:?}");
    }
}

#[test]
fn jcc_partition_matches_outcome() {
    let f = split_ballot_sav();
    let e = f.election.with_extra_votes(&f.manipulators);
    let x = e.index_of("x").unwrap();
    let a = e.index_of("a").unwrap();
    let out = outcome(&Rule::Sav, &e, 2).unwrap();
    assert!(!out.all_contain(&[x]));
    for (j, expect) in [(vec![x], false), (vec![a], false)] {
        let inst = JccInstance::new(e.clone(), 2, j).unwrap();
        assert_eq!(j_cc(&Rule::Sav, &inst, JccAlgo::Auto).unwrap(), expect);
        assert_eq!(j_cc(&Rule::Sav, &inst, JccAlgo::BruteForce).unwrap(), expect);
    }
    let inst = JccInstance::new(e.clone(), 3, vec![x]).unwrap();
    assert!(j_cc(&Rule::Sav, &inst, JccAlgo::Auto).unwrap());
}
