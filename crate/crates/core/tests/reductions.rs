use abmv::control::ControlInstance;
use abmv::model::{candidate_scores, frac, int, Rule, Score};
use abmv::reductions::*;
use abmv::strategic::{solve_strategic_bruteforce, StrategicInstance};
use abmv::Election;

/// κ = 1: the single triple three times. κ = 3: nine elements, every element in three sets.
fn rx3c(kappa: usize) -> Rx3cInstance {
    let sets: &[[usize; 3]] = match kappa {
        1 => &[[0, 1, 2]; 3],
        3 => &[[0, 1, 2], [3, 4, 5], [6, 7, 8], [0, 3, 6], [1, 4, 7], [2, 5, 8], [0, 4, 8], [1, 5, 6], [2, 3, 7]],
        _ => unreachable!(),
    };
    Rx3cInstance::new(element_labels(3 * kappa), sets.to_vec()).unwrap()
}

fn control(kind: ReductionKind, x: &Rx3cInstance) -> ControlInstance {
    match generate(kind, &Source::Rx3c(x.clone())).unwrap() {
        StrategicInstance::Control(c) => c,
        other => panic!("unexpected instance {other:?}"),
    }
}

fn score_of(e: &Election, scores: &[Score], label: &str) -> Score {
    scores[e.index_of(label).unwrap()].clone()
}

#[test]
fn ccdv_sav_score_table() {
    for kappa in [1, 3] {
        let x = rx3c(kappa);
        let inst = control(ReductionKind::CcdvSavRx3c, &x);
        let e = &inst.election;
        let s = candidate_scores(&Rule::Sav, e).unwrap();
        assert_eq!(score_of(e, &s, "p"), frac(5, 6));
        for a in &x.universe {
            assert_eq!(score_of(e, &s, a), int(1));
        }
        assert_eq!(score_of(e, &s, "d1"), frac(1, 2));
        assert_eq!(score_of(e, &s, "d2"), frac(1, 3));
        assert_eq!(score_of(e, &s, "d3"), frac(1, 3));
        assert_eq!((inst.k, inst.delete_budget), (1, kappa));
    }
}

#[test]
fn ccac_sav_score_table() {
    for kappa in [1, 3] {
        let x = rx3c(kappa);
        let inst = control(ReductionKind::CcacSavRx3c, &x);
        let registered = inst.base_election().election;
        let s = candidate_scores(&Rule::Sav, &registered).unwrap();
        assert_eq!(registered.num_candidates(), 3 * kappa + 4);
        assert_eq!(score_of(&registered, &s, "p"), frac(11, 6));
        for a in &x.universe {
            assert_eq!(score_of(&registered, &s, &format!("c({a})")), int(2));
        }
        assert_eq!(score_of(&registered, &s, "d1"), frac(1, 2));
        assert_eq!(score_of(&registered, &s, "d2"), frac(1, 3));
        assert_eq!(score_of(&registered, &s, "d3"), frac(1, 3));
        assert_eq!(inst.unregistered_candidates().len(), 3 * kappa);
    }
}

#[test]
fn ccdc_sav_score_table() {
    let kappa = 3i64;
    let x = rx3c(3);
    let inst = control(ReductionKind::CcdcSavRx3c, &x);
    let e = &inst.election;
    assert_eq!(e.num_votes() as i64, 60 * kappa * kappa + 30 * kappa + 6);
    assert_eq!(e.num_candidates() as i64, 6 * kappa + 1);
    let s = candidate_scores(&Rule::Sav, e).unwrap();
    assert_eq!(score_of(e, &s, "p"), int(9 * kappa + 6));
    for a in &x.universe {
        assert_eq!(score_of(e, &s, &format!("c({a})")), int(11 * kappa + 4));
    }
    for h in 0..x.sets.len() {
        assert_eq!(score_of(e, &s, &format!("c({})", x.set_label(h))), int(3 + 9 * kappa));
    }
}

#[test]
fn ccdc_sav_needs_three() {
    assert!(generate(ReductionKind::CcdcSavRx3c, &Source::Rx3c(rx3c(1))).is_err());
}

#[test]
fn ccav_sav_registered_scores() {
    let x = rx3c(3);
    let inst = control(ReductionKind::CcavSavRx3c, &x);
    // κ = 3 is lifted to 4 by one fresh triple
    let kappa = 4i64;
    let e = &inst.election;
    assert_eq!(e.num_votes() as i64, 3 * kappa * (kappa - 2) / 4);
    assert_eq!(inst.unregistered_votes.len() as i64, 3 * kappa);
    let s = candidate_scores(&Rule::Sav, e).unwrap();
    assert_eq!(score_of(e, &s, "p"), int(0));
    for a in &x.universe {
        assert_eq!(score_of(e, &s, a), frac(kappa - 2, 4));
    }
}

#[test]
fn nsav_padding_preserves_strict_order() {
    let x = rx3c(3);
    for (sav, nsav) in [
        (ReductionKind::CcdvSavRx3c, ReductionKind::CcdvNsavRx3c),
        (ReductionKind::CcacSavRx3c, ReductionKind::CcacNsavRx3c),
    ] {
        let a = control(sav, &x);
        let b = control(nsav, &x);
        let (ea, eb) = (a.base_election().election, b.base_election().election);
        let (sa, sb) = (candidate_scores(&Rule::Sav, &ea).unwrap(), candidate_scores(&Rule::Nsav, &eb).unwrap());
        for c in 0..ea.num_candidates() {
            for d in 0..ea.num_candidates() {
                let (c2, d2) = (eb.index_of(ea.label(c)).unwrap(), eb.index_of(ea.label(d)).unwrap());
                if sa[c] > sa[d] {
                    assert!(sb[c2] > sb[d2], "{sav}: {} vs {}", ea.label(c), ea.label(d));
                }
            }
        }
    }
}

#[test]
fn graph_oracles_by_hand() {
    let k3 = GraphInstance::complete(3, 2);
    assert!(has_vertex_cover(&k3).unwrap());
    assert!(!has_independent_set(&k3).unwrap());
    assert!(has_clique(&k3).unwrap());
    let c4 = GraphInstance::cycle(4, 2);
    assert!(has_independent_set(&c4).unwrap());
    assert!(has_clique(&c4).unwrap());
    assert!(!has_clique(&GraphInstance::cycle(4, 3)).unwrap());
    assert!(has_vertex_cover(&c4).unwrap());
    let k4 = GraphInstance::complete(4, 2);
    assert!(!has_vertex_cover(&k4).unwrap());
}

#[test]
fn pcc_thiele_on_square_is_inverted() {
    let src = Source::Graph(GraphInstance::cycle(4, 2));
    let r = roundtrip_check(ReductionKind::PccThieleIs, &src).unwrap();
    assert!(r.source);
    assert!(!r.strategic);
    assert!(r.consistent(ReductionKind::PccThieleIs));
}

#[test]
fn thiele_constructions_accept_abccv() {
    let opts = GenerateOptions { thiele: Rule::Abccv, ..Default::default() };
    for (kind, g) in [
        (ReductionKind::PccThieleIs, GraphInstance::cycle(5, 2)),
        (ReductionKind::CcdcThieleClique, GraphInstance::complete(4, 3)),
        (ReductionKind::CcdcThieleClique, GraphInstance::cycle(5, 3)),
    ] {
        let r = roundtrip_check_with(kind, &Source::Graph(g), &opts).unwrap();
        assert!(r.consistent(kind), "{kind}: {r:?}");
    }
    let av = GenerateOptions { thiele: Rule::Av, ..Default::default() };
    assert!(generate_with(ReductionKind::PccThieleIs, &Source::Graph(GraphInstance::cycle(4, 2)), &av).is_err());
}

#[test]
fn manipulation_on_k4() {
    // K4 has a vertex cover of size 3 but none of size 2
    for kind in [ReductionKind::ManipAvVc, ReductionKind::ManipSavVc, ReductionKind::ManipNsavVc] {
        for kappa in [2, 3] {
            let r = roundtrip_check(kind, &Source::Graph(GraphInstance::complete(4, kappa))).unwrap();
            assert_eq!(r.source, kappa == 3);
            assert!(r.consistent(kind), "{kind} κ={kappa}: {r:?}");
        }
    }
}

#[test]
fn manipulation_preconditions() {
    let path = GraphInstance::from_labels(&["u1", "u2", "u3"], &[("u1", "u2"), ("u2", "u3")], 1).unwrap();
    assert!(generate(ReductionKind::ManipAvVc, &Source::Graph(path.clone())).is_err());
    assert!(generate(ReductionKind::ManipSavVc, &Source::Graph(path)).is_err());
}

#[test]
fn mav_manipulation_small_graphs() {
    let path = GraphInstance::from_labels(&["u1", "u2", "u3"], &[("u1", "u2"), ("u2", "u3")], 1).unwrap();
    let r = roundtrip_check(ReductionKind::ManipMavVc, &Source::Graph(path)).unwrap();
    assert_eq!((r.source, r.strategic), (true, true));
    let matching = GraphInstance::from_labels(&["u1", "u2", "u3", "u4"], &[("u1", "u2"), ("u3", "u4")], 1).unwrap();
    let r = roundtrip_check(ReductionKind::ManipMavVc, &Source::Graph(matching)).unwrap();
    assert_eq!((r.source, r.strategic), (false, false));
}

#[test]
fn mav_constructions_are_audited() {
    let x = rx3c(3);
    let StrategicInstance::CommitteeMembership { instance, .. } =
        generate(ReductionKind::PccMavRx3c, &Source::Rx3c(x.clone())).unwrap()
    else {
        panic!("expected a committee-membership instance");
    };
    assert!(instance.election.votes().iter().all(|v| v.len() == 3));
    assert_eq!(instance.k, 4);
    let inst = control(ReductionKind::CcavMavRx3c, &x);
    assert_eq!(inst.election.num_candidates(), 12 * 3 + 1);
}

#[test]
fn wrong_source_is_rejected() {
    let g = Source::Graph(GraphInstance::complete(4, 3));
    assert!(generate(ReductionKind::CcavSavRx3c, &g).is_err());
    assert!(solve_source(&g, SourceProblem::Rx3c).is_err());
}

#[test]
fn random_round_trips_cheap_kinds() {
    let mut rng = abmv::random::rng(2024);
    for kind in ReductionKind::ALL {
        if matches!(kind, ReductionKind::CcdcNsavRx3c | ReductionKind::CcdcSavRx3c) {
            continue;
        }
        let (mut yes, mut no) = (0, 0);
        for _ in 0..12 {
            let src = random_source(&mut rng, kind).unwrap();
            let r = roundtrip_check(kind, &src).unwrap();
            assert!(r.consistent(kind), "{kind}: {src:?} gave {r:?}");
            if r.strategic {
                yes += 1
            } else {
                no += 1
            }
        }
        assert!(yes > 0 && no > 0, "{kind}: only one answer seen ({yes} yes, {no} no)");
    }
}

#[test]
fn strategic_yes_answers_are_certified() {
    // the brute-force oracles certify every witness before answering YES
    let src = Source::Rx3c(rx3c(3));
    for kind in [ReductionKind::CcdvSavRx3c, ReductionKind::CcacSavRx3c, ReductionKind::CcdcMavRx3c] {
        assert!(solve_strategic_bruteforce(&generate(kind, &src).unwrap()).unwrap());
    }
}

#[test]
fn sdcm_ties_break_the_av_equivalence() {
    // every vertex approved by four manipulators ties all six candidates at 4,
    // which stochastically dominates the old winners for every manipulator
    let opts = GenerateOptions { variant: abmv::manipulation::Variant::Sdcm, ..Default::default() };
    let r =
        roundtrip_check_with(ReductionKind::ManipAvVc, &Source::Graph(GraphInstance::complete(4, 2)), &opts).unwrap();
    assert!(!r.source);
    assert!(r.strategic);
}
