use abmv::io::{parse_json, to_json, ElectionFile};
use abmv::model::{candidate_scores, Rule};
use abmv::reductions::nsav_padding;
use abmv::winners::{j_cc, mav_single_winners, outcome, winning_committees, JccAlgo, JccInstance, Strategy as Search};
use abmv::{Ballot, Election};
use num_bigint::BigUint;
use proptest::prelude::*;

fn election(max_m: usize, max_n: usize) -> impl Strategy<Value = Election> {
    (1..=max_m).prop_flat_map(move |m| {
        prop::collection::vec(0u32..(1 << m), 0..=max_n).prop_map(move |masks| {
            let votes = masks.iter().map(|&b| Ballot::new((0..m).filter(|c| b >> c & 1 == 1))).collect();
            Election::new(abmv::random::labels(m), votes).unwrap()
        })
    })
}

fn rule() -> impl Strategy<Value = Rule> {
    prop_oneof![Just(Rule::Av), Just(Rule::Sav), Just(Rule::Nsav), Just(Rule::Pav), Just(Rule::Abccv), Just(Rule::Mav)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn partition_matches_enumeration(e in election(7, 6), rule in prop_oneof![Just(Rule::Av), Just(Rule::Sav), Just(Rule::Nsav)], k in 1usize..=7) {
        let k = k.min(e.num_candidates());
        let a = winning_committees(&rule, &e, k, Search::Partition).unwrap();
        let b = winning_committees(&rule, &e, k, Search::Exhaustive).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn outcome_counts_winners(e in election(6, 6), rule in rule(), k in 1usize..=6) {
        let k = k.min(e.num_candidates());
        let ws = winning_committees(&rule, &e, k, Search::Exhaustive).unwrap();
        let out = outcome(&rule, &e, k).unwrap();
        prop_assert_eq!(out.count(), BigUint::from(ws.committees.len()));
        prop_assert!(ws.committees.iter().all(|w| out.is_winner(w)));
    }

    #[test]
    fn mav_single_winners_are_nonempty_and_exact(e in election(8, 7)) {
        let fast = mav_single_winners(&e);
        prop_assert!(!fast.is_empty());
        let ex: Vec<usize> = winning_committees(&Rule::Mav, &e, 1, Search::Exhaustive).unwrap()
            .committees.iter().map(|w| w.members()[0]).collect();
        let mut ex = ex;
        ex.sort_unstable();
        prop_assert_eq!(fast, ex);
    }

    #[test]
    fn jcc_fpt_matches_enumeration(
        e in election(6, 5),
        rule in prop_oneof![Just(Rule::Pav), Just(Rule::Abccv), Just(Rule::Mav)],
        k in 1usize..=3,
        pick in 0u32..64,
    ) {
        let m = e.num_candidates();
        let k = k.min(m);
        let mut j: Vec<usize> = (0..m).filter(|c| pick >> c & 1 == 1).take(k).collect();
        if j.is_empty() {
            j.push(0);
        }
        let inst = JccInstance::new(e, k, j).unwrap();
        prop_assert_eq!(j_cc(&rule, &inst, JccAlgo::FptN).unwrap(), j_cc(&rule, &inst, JccAlgo::BruteForce).unwrap());
    }

    #[test]
    fn padding_keeps_strict_sav_order(e in election(5, 5)) {
        let m = e.num_candidates();
        let padded = e.pad_with_dummies(nsav_padding(e.num_votes(), m));
        let sav = candidate_scores(&Rule::Sav, &e).unwrap();
        let nsav = candidate_scores(&Rule::Nsav, &padded).unwrap();
        for c in 0..m {
            for d in 0..m {
                if sav[c] > sav[d] {
                    prop_assert!(nsav[c] > nsav[d]);
                }
            }
        }
    }

    #[test]
    fn election_json_round_trips(e in election(6, 6)) {
        let text = to_json(&ElectionFile::from_election(&e));
        let back: ElectionFile = parse_json(&text).unwrap();
        prop_assert_eq!(back.election().unwrap(), e);
    }

    #[test]
    fn vote_order_does_not_change_winners(e in election(6, 6), rule in rule(), k in 1usize..=4) {
        let k = k.min(e.num_candidates());
        let mut votes = e.votes().to_vec();
        votes.reverse();
        let flipped = e.with_votes(votes).unwrap();
        prop_assert_eq!(
            winning_committees(&rule, &e, k, Search::Exhaustive).unwrap(),
            winning_committees(&rule, &flipped, k, Search::Exhaustive).unwrap()
        );
    }
}
