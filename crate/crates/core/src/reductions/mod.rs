//! Hardness constructions as instance generators, with round-trip checks
//! against exhaustive oracles for the source problems.

mod sources;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

pub use sources::{
    element_labels, exact_cover, has_clique, has_independent_set, has_vertex_cover, random_graph, random_regular_graph,
    random_rx3c, vertex_labels, GraphInstance, Rx3cInstance, MAX_KAPPA, MAX_VERTICES,
};

use crate::control::{ControlInstance, ControlType};
use crate::error::{Error, Result};
use crate::manipulation::{ManipulationInstance, SearchSpace, Variant};
use crate::model::{Ballot, Committee, Election, Rule};
use crate::strategic::{solve_strategic_bruteforce_in, StrategicInstance};
use crate::winners::JccInstance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SourceProblem {
    VertexCover,
    IndependentSet,
    Clique,
    Rx3c,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Graph(GraphInstance),
    Rx3c(Rx3cInstance),
}

pub fn solve_source(source: &Source, problem: SourceProblem) -> Result<bool> {
    match (source, problem) {
        (Source::Graph(g), SourceProblem::VertexCover) => has_vertex_cover(g),
        (Source::Graph(g), SourceProblem::IndependentSet) => has_independent_set(g),
        (Source::Graph(g), SourceProblem::Clique) => has_clique(g),
        (Source::Rx3c(x), SourceProblem::Rx3c) => Ok(exact_cover(x)?.is_some()),
        _ => Err(Error::Validation(format!("{problem:?} does not take this kind of source"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ReductionKind {
    ManipAvVc,
    ManipSavVc,
    ManipNsavVc,
    ManipMavVc,
    CcavSavRx3c,
    CcdvSavRx3c,
    CcavNsavRx3c,
    CcdvNsavRx3c,
    CcavMavRx3c,
    CcacSavRx3c,
    CcacNsavRx3c,
    PccThieleIs,
    PccMavRx3c,
    CcdcSavRx3c,
    CcdcNsavRx3c,
    CcdcMavRx3c,
    CcdcThieleClique,
}

impl ReductionKind {
    pub const ALL: [ReductionKind; 17] = [
        ReductionKind::ManipAvVc,
        ReductionKind::ManipSavVc,
        ReductionKind::ManipNsavVc,
        ReductionKind::ManipMavVc,
        ReductionKind::CcavSavRx3c,
        ReductionKind::CcdvSavRx3c,
        ReductionKind::CcavNsavRx3c,
        ReductionKind::CcdvNsavRx3c,
        ReductionKind::CcavMavRx3c,
        ReductionKind::CcacSavRx3c,
        ReductionKind::CcacNsavRx3c,
        ReductionKind::PccThieleIs,
        ReductionKind::PccMavRx3c,
        ReductionKind::CcdcSavRx3c,
        ReductionKind::CcdcNsavRx3c,
        ReductionKind::CcdcMavRx3c,
        ReductionKind::CcdcThieleClique,
    ];

    pub fn name(self) -> &'static str {
        use ReductionKind::*;
        match self {
            ManipAvVc => "manip-av-vc",
            ManipSavVc => "manip-sav-vc",
            ManipNsavVc => "manip-nsav-vc",
            ManipMavVc => "manip-mav-vc",
            CcavSavRx3c => "ccav-sav-rx3c",
            CcdvSavRx3c => "ccdv-sav-rx3c",
            CcavNsavRx3c => "ccav-nsav-rx3c",
            CcdvNsavRx3c => "ccdv-nsav-rx3c",
            CcavMavRx3c => "ccav-mav-rx3c",
            CcacSavRx3c => "ccac-sav-rx3c",
            CcacNsavRx3c => "ccac-nsav-rx3c",
            PccThieleIs => "pcc-thiele-is",
            PccMavRx3c => "pcc-mav-rx3c",
            CcdcSavRx3c => "ccdc-sav-rx3c",
            CcdcNsavRx3c => "ccdc-nsav-rx3c",
            CcdcMavRx3c => "ccdc-mav-rx3c",
            CcdcThieleClique => "ccdc-thiele-clique",
        }
    }

    pub fn source_problem(self) -> SourceProblem {
        use ReductionKind::*;
        match self {
            ManipAvVc | ManipSavVc | ManipNsavVc | ManipMavVc => SourceProblem::VertexCover,
            PccThieleIs => SourceProblem::IndependentSet,
            CcdcThieleClique => SourceProblem::Clique,
            _ => SourceProblem::Rx3c,
        }
    }

    /// The strategic answer is the negation of the source answer.
    pub fn inverted(self) -> bool {
        self == ReductionKind::PccThieleIs
    }

    /// Manipulation search space used by the round-trip oracle. The padded
    /// NSAV instance has too many dummy candidates for the full space, so its
    /// ballots stay within the manipulators' approvals and the baseline.
    pub fn oracle_space(self) -> SearchSpace {
        match self {
            ReductionKind::ManipNsavVc => SearchSpace::Restricted,
            _ => SearchSpace::Auto,
        }
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ReductionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ReductionKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown reduction `{s}`")))
    }
}

/// Knobs that the constructions leave open.
#[derive(Clone, Debug)]
pub struct GenerateOptions {
    /// Manipulation variant for the vertex-cover constructions.
    pub variant: Variant,
    /// Thiele rule for the independent-set and clique constructions.
    pub thiele: Rule,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        GenerateOptions { variant: Variant::Cbcm, thiele: Rule::Pav }
    }
}

pub fn generate(kind: ReductionKind, source: &Source) -> Result<StrategicInstance> {
    generate_with(kind, source, &GenerateOptions::default())
}

pub fn generate_with(kind: ReductionKind, source: &Source, opts: &GenerateOptions) -> Result<StrategicInstance> {
    use ReductionKind::*;
    match (kind, source) {
        (ManipAvVc, Source::Graph(g)) => manip_vertex_cover(Rule::Av, g, opts.variant),
        (ManipSavVc, Source::Graph(g)) => manip_vertex_cover(Rule::Sav, g, opts.variant),
        (ManipNsavVc, Source::Graph(g)) => manip_vertex_cover(Rule::Nsav, g, opts.variant),
        (ManipMavVc, Source::Graph(g)) => manip_mav(g, opts.variant),
        (CcavSavRx3c, Source::Rx3c(x)) => ccav_sav(Rule::Sav, x),
        (CcavNsavRx3c, Source::Rx3c(x)) => ccav_sav(Rule::Nsav, x),
        (CcdvSavRx3c, Source::Rx3c(x)) => ccdv_sav(Rule::Sav, x),
        (CcdvNsavRx3c, Source::Rx3c(x)) => ccdv_sav(Rule::Nsav, x),
        (CcavMavRx3c, Source::Rx3c(x)) => ccav_mav(x),
        (CcacSavRx3c, Source::Rx3c(x)) => ccac_sav(Rule::Sav, x),
        (CcacNsavRx3c, Source::Rx3c(x)) => ccac_sav(Rule::Nsav, x),
        (PccThieleIs, Source::Graph(g)) => pcc_thiele(&opts.thiele, g),
        (PccMavRx3c, Source::Rx3c(x)) => mav_rx3c(x, false),
        (CcdcSavRx3c, Source::Rx3c(x)) => ccdc_sav(Rule::Sav, x),
        (CcdcNsavRx3c, Source::Rx3c(x)) => ccdc_sav(Rule::Nsav, x),
        (CcdcMavRx3c, Source::Rx3c(x)) => mav_rx3c(x, true),
        (CcdcThieleClique, Source::Graph(g)) => ccdc_thiele(&opts.thiele, g),
        _ => Err(Error::Generation(format!("{kind} expects a {:?} source", kind.source_problem()))),
    }
}

/// Outcome of one round trip.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RoundTrip {
    pub source: bool,
    pub strategic: bool,
}

impl RoundTrip {
    pub fn consistent(&self, kind: ReductionKind) -> bool {
        (self.source == self.strategic) != kind.inverted()
    }
}

pub fn roundtrip_check(kind: ReductionKind, source: &Source) -> Result<RoundTrip> {
    roundtrip_check_with(kind, source, &GenerateOptions::default())
}

pub fn roundtrip_check_with(kind: ReductionKind, source: &Source, opts: &GenerateOptions) -> Result<RoundTrip> {
    let answer = solve_source(source, kind.source_problem())?;
    let inst = generate_with(kind, source, opts)?;
    Ok(RoundTrip { source: answer, strategic: solve_strategic_bruteforce_in(&inst, kind.oracle_space())? })
}

fn fail(kind: &str, what: impl fmt::Display) -> Error {
    Error::Generation(format!("{kind}: {what}"))
}

/// Candidate roster under construction.
#[derive(Default)]
struct Roster {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Roster {
    fn add(&mut self, label: impl Into<String>) -> Result<usize> {
        let label = label.into();
        if self.index.contains_key(&label) {
            return Err(Error::Generation(format!("candidate label `{label}` is used twice")));
        }
        self.index.insert(label.clone(), self.labels.len());
        self.labels.push(label);
        Ok(self.labels.len() - 1)
    }

    fn add_all(&mut self, labels: impl IntoIterator<Item = String>) -> Result<Vec<usize>> {
        labels.into_iter().map(|l| self.add(l)).collect()
    }

    fn len(&self) -> usize {
        self.labels.len()
    }

    fn election(&self, votes: Vec<Ballot>) -> Result<Election> {
        Election::new(self.labels.clone(), votes)
    }
}

fn repeat(ballot: Ballot, times: usize) -> impl Iterator<Item = Ballot> {
    std::iter::repeat_n(ballot, times)
}

/// Padding size `n · m²` that makes NSAV order candidates like SAV.
/// Dummy candidates needed so NSAV keeps every strict SAV comparison.
pub fn nsav_padding(votes: usize, candidates: usize) -> usize {
    votes * candidates * candidates
}

fn manip_vertex_cover(rule: Rule, g: &GraphInstance, variant: Variant) -> Result<StrategicInstance> {
    let name = match rule {
        Rule::Av => "manip-av-vc",
        Rule::Sav => "manip-sav-vc",
        _ => "manip-nsav-vc",
    };
    if g.regular_degree() != Some(3) {
        return Err(fail(name, "the graph must be 3-regular"));
    }
    let m = g.edges.len();
    let kappa = g.kappa;
    if m <= 4 {
        return Err(fail(name, format!("needs more than 4 edges, got {m}")));
    }
    if kappa == 0 {
        return Err(fail(name, "κ must be positive"));
    }
    let extra_votes = if rule == Rule::Av {
        0
    } else {
        if m <= 5 {
            return Err(fail(name, format!("needs more than 5 edges for the m−5 extra votes, got {m}")));
        }
        if 3 * kappa >= 2 * (m - 1) {
            return Err(fail(name, format!("needs κ < 2(m−1)/3, got κ = {kappa}, m = {m}")));
        }
        m - 5
    };
    let mut roster = Roster::default();
    let vertices = roster.add_all(g.vertices.iter().cloned())?;
    let cs = roster.add_all((1..=kappa).map(|i| format!("c{i}")))?;
    let honest: Vec<Ballot> = repeat(Ballot::new(cs.iter().copied()), 4 + extra_votes).collect();
    let manipulators: Vec<Ballot> = g.edges.iter().map(|&(u, v)| Ballot::new([vertices[u], vertices[v]])).collect();
    if rule == Rule::Av && (honest.len() != 4 || manipulators.len() != m) {
        return Err(fail(name, "structural audit failed"));
    }
    let mut election = roster.election(honest)?;
    if rule == Rule::Nsav {
        let n = election.num_votes() + manipulators.len();
        election = election.pad_with_dummies(nsav_padding(n, roster.len()));
    }
    let baseline = (variant != Variant::Sdcm).then(|| Committee::new(cs.iter().copied()));
    Ok(StrategicInstance::Manipulation(ManipulationInstance::new(
        rule,
        election,
        manipulators,
        kappa,
        baseline,
        variant,
    )?))
}

fn manip_mav(g: &GraphInstance, variant: Variant) -> Result<StrategicInstance> {
    let name = "manip-mav-vc";
    let kappa = g.kappa;
    if kappa == 0 || g.edges.len() <= kappa {
        return Err(fail(name, format!("needs 0 < κ < |E|, got κ = {kappa}, |E| = {}", g.edges.len())));
    }
    if g.degrees().into_iter().any(|d| d > 3) {
        return Err(fail(name, "every vertex needs degree at most 3"));
    }
    let mut roster = Roster::default();
    let vertices = roster.add_all(g.vertices.iter().cloned())?;
    let xs = roster.add_all((1..=2 * kappa + 1).map(|i| format!("x{i}")))?;
    for e in 0..g.edges.len() {
        roster.add_all((1..=3 * kappa + 1).map(|i| format!("y({})_{i}", g.edge_label(e))))?;
    }
    let honest = vec![Ballot::new(xs.iter().copied())];
    let manipulators: Vec<Ballot> = g.edges.iter().map(|&(u, v)| Ballot::new([vertices[u], vertices[v]])).collect();
    let election = roster.election(honest)?;
    let full = election.with_extra_votes(&manipulators);
    if election.num_votes() != 1 || full.approvers().iter().any(|a| a.len() > 3) {
        return Err(fail(name, "structural audit failed"));
    }
    let baseline = (variant != Variant::Sdcm).then(|| Committee::new(xs[..kappa].iter().copied()));
    Ok(StrategicInstance::Manipulation(ManipulationInstance::new(
        Rule::Mav,
        election,
        manipulators,
        kappa,
        baseline,
        variant,
    )?))
}

/// Pads an RX3C instance to `κ ≡ 0 (mod 4)` by adding fresh triples, each three times.
pub fn normalize_mod4(x: &Rx3cInstance) -> Rx3cInstance {
    let fresh_triples = (4 - x.kappa() % 4) % 4;
    if fresh_triples == 0 {
        return x.clone();
    }
    let mut universe = x.universe.clone();
    let mut sets = x.sets.clone();
    let mut next = 1;
    for _ in 0..fresh_triples {
        let mut triple = [0usize; 3];
        for slot in triple.iter_mut() {
            let mut label = format!("z{next}");
            while universe.contains(&label) {
                next += 1;
                label = format!("z{next}");
            }
            next += 1;
            *slot = universe.len();
            universe.push(label);
        }
        sets.extend([triple; 3]);
    }
    Rx3cInstance::new(universe, sets).expect("padding keeps the RX3C conditions")
}

#[allow(clippy::too_many_arguments)]
fn control(
    kind: ControlType,
    rule: Rule,
    election: Election,
    registered: Vec<usize>,
    unregistered_votes: Vec<Ballot>,
    k: usize,
    p: usize,
    budget: usize,
) -> Result<StrategicInstance> {
    let (add, delete) = if kind.adds() { (budget, 0) } else { (0, budget) };
    Ok(StrategicInstance::Control(ControlInstance::new(
        kind,
        rule,
        election,
        registered,
        unregistered_votes,
        k,
        vec![p],
        add,
        delete,
    )?))
}

fn ccav_sav(rule: Rule, source: &Rx3cInstance) -> Result<StrategicInstance> {
    let x = normalize_mod4(source);
    let kappa = x.kappa();
    let mut roster = Roster::default();
    let a = roster.add_all(x.universe.iter().cloned())?;
    let p = roster.add("p")?;
    let registered_votes = 3 * kappa * (kappa - 2) / 4;
    let votes: Vec<Ballot> = repeat(Ballot::new(a.iter().copied()), registered_votes).collect();
    let unregistered: Vec<Ballot> = x.sets.iter().map(|h| Ballot::new(h.iter().map(|&e| a[e]).chain([p]))).collect();
    let mut election = roster.election(votes)?;
    if rule == Rule::Nsav {
        let n = election.num_votes() + unregistered.len();
        election = election.pad_with_dummies(nsav_padding(n, roster.len()));
    }
    let registered = (0..election.num_candidates()).collect();
    control(ControlType::Ccav, rule, election, registered, unregistered, 1, p, kappa)
}

fn ccdv_sav(rule: Rule, x: &Rx3cInstance) -> Result<StrategicInstance> {
    let kappa = x.kappa();
    let mut roster = Roster::default();
    let a = roster.add_all(x.universe.iter().cloned())?;
    let [p, d1, d2, d3] = ["p", "d1", "d2", "d3"].map(|l| roster.add(l));
    let (p, d1, d2, d3) = (p?, d1?, d2?, d3?);
    let mut votes = vec![Ballot::new([p, d1]), Ballot::new([p, d2, d3])];
    votes.extend(x.sets.iter().map(|h| Ballot::new(h.iter().map(|&e| a[e]))));
    let mut election = roster.election(votes)?;
    if rule == Rule::Nsav {
        election = election.pad_with_dummies(nsav_padding(election.num_votes(), roster.len()));
    }
    let registered = (0..election.num_candidates()).collect();
    control(ControlType::Ccdv, rule, election, registered, Vec::new(), 1, p, kappa)
}

fn ccav_mav(x: &Rx3cInstance) -> Result<StrategicInstance> {
    let kappa = x.kappa();
    let mut roster = Roster::default();
    let a = roster.add_all(x.universe.iter().cloned())?;
    let mut ch = Vec::with_capacity(x.sets.len());
    for h in 0..x.sets.len() {
        ch.push(roster.add_all((1..=3).map(|i| format!("c({})_{i}", x.set_label(h))))?);
    }
    let p = roster.add("p")?;
    let votes = vec![Ballot::new(a.iter().copied().chain([p]))];
    let unregistered: Vec<Ballot> = x
        .sets
        .iter()
        .zip(&ch)
        .map(|(h, c)| {
            Ballot::new(c.iter().copied().chain([p]).chain((0..a.len()).filter(|e| !h.contains(e)).map(|e| a[e])))
        })
        .collect();
    if roster.len() != 12 * kappa + 1 || unregistered.iter().chain(&votes).any(|v| v.len() != 3 * kappa + 1) {
        return Err(fail("ccav-mav-rx3c", "structural audit failed"));
    }
    let election = roster.election(votes)?;
    let registered = (0..election.num_candidates()).collect();
    control(ControlType::Ccav, Rule::Mav, election, registered, unregistered, 1, p, kappa)
}

fn ccac_sav(rule: Rule, x: &Rx3cInstance) -> Result<StrategicInstance> {
    let kappa = x.kappa();
    let mut roster = Roster::default();
    let ca = roster.add_all(x.universe.iter().map(|a| format!("c({a})")))?;
    let p = roster.add("p")?;
    let d = roster.add_all((1..=3).map(|i| format!("d{i}")))?;
    let ch = roster.add_all((0..x.sets.len()).map(|h| format!("c({})", x.set_label(h))))?;
    let mut votes = vec![Ballot::new([p]), Ballot::new([p, d[0]]), Ballot::new([p, d[1], d[2]])];
    for (e, &c) in ca.iter().enumerate() {
        votes.push(Ballot::new(x.sets_containing(e).into_iter().map(|h| ch[h]).chain([c])));
        votes.push(Ballot::new([c]));
    }
    let mut election = roster.election(votes)?;
    let mut registered: Vec<usize> = ca.iter().copied().chain([p]).chain(d.iter().copied()).collect();
    if rule == Rule::Nsav {
        let before = election.num_candidates();
        election = election.pad_with_dummies(nsav_padding(election.num_votes(), before));
        registered.extend(before..election.num_candidates());
    }
    control(ControlType::Ccac, rule, election, registered, Vec::new(), 1, p, kappa)
}

fn ccdc_sav(rule: Rule, x: &Rx3cInstance) -> Result<StrategicInstance> {
    let name = if rule == Rule::Sav { "ccdc-sav-rx3c" } else { "ccdc-nsav-rx3c" };
    let kappa = x.kappa();
    if kappa < 3 {
        return Err(fail(name, format!("needs κ ≥ 3, got {kappa}")));
    }
    let mut roster = Roster::default();
    let ca = roster.add_all(x.universe.iter().map(|a| format!("c({a})")))?;
    let ch = roster.add_all((0..x.sets.len()).map(|h| format!("c({})", x.set_label(h))))?;
    let p = roster.add("p")?;
    let mut votes = Vec::new();
    for &c in &ch {
        votes.extend(repeat(Ballot::new([p, c]), 6));
    }
    for (e, &c) in ca.iter().enumerate() {
        votes.extend(repeat(Ballot::new(x.sets_containing(e).into_iter().map(|h| ch[h]).chain([c])), 12 * kappa));
        votes.extend(repeat(Ballot::new([c]), 8 * kappa - 2));
    }
    votes.extend(repeat(Ballot::new(ca.iter().copied().chain([p])), 6 * (3 * kappa + 1)));
    if votes.len() != 60 * kappa * kappa + 30 * kappa + 6 {
        return Err(fail(name, "structural audit failed"));
    }
    let mut election = roster.election(votes)?;
    if rule == Rule::Nsav {
        election = election.pad_with_dummies(nsav_padding(election.num_votes(), roster.len()) + kappa);
    }
    let registered = (0..election.num_candidates()).collect();
    control(ControlType::Ccdc, rule, election, registered, Vec::new(), 1, p, kappa)
}

/// Shared roster of the MAV exact-cover constructions: CCDC with `k = 1`
/// or p-CC with `k = κ + 1`.
fn mav_rx3c(x: &Rx3cInstance, deletion: bool) -> Result<StrategicInstance> {
    let kappa = x.kappa();
    let mut roster = Roster::default();
    let p = roster.add("p")?;
    let d = roster.add_all((1..=4).map(|i| format!("d{i}")))?;
    let ch = roster.add_all((0..x.sets.len()).map(|h| format!("c({})", x.set_label(h))))?;
    let mut votes = vec![Ballot::new([p, d[0], d[1]]), Ballot::new([p, d[2], d[3]])];
    votes.extend((0..x.universe.len()).map(|e| Ballot::new(x.sets_containing(e).into_iter().map(|h| ch[h]))));
    let election = roster.election(votes)?;
    if deletion {
        let registered = (0..election.num_candidates()).collect();
        return control(ControlType::Ccdc, Rule::Mav, election, registered, Vec::new(), 1, p, kappa);
    }
    if election.votes().iter().any(|v| v.len() != 3) {
        return Err(fail("pcc-mav-rx3c", "structural audit failed"));
    }
    let instance = JccInstance::new(election, kappa + 1, vec![p])?;
    Ok(StrategicInstance::CommitteeMembership { rule: Rule::Mav, instance })
}

fn check_thiele(name: &str, rule: &Rule) -> Result<()> {
    if !rule.is_thiele() {
        return Err(fail(name, format!("{rule} is not a Thiele rule")));
    }
    let w = rule.thiele_table(2)?;
    if w[2] >= w[1].clone() + &w[1] {
        return Err(fail(name, "needs ω(2) < 2ω(1)"));
    }
    Ok(())
}

fn pcc_thiele(rule: &Rule, g: &GraphInstance) -> Result<StrategicInstance> {
    let name = "pcc-thiele-is";
    check_thiele(name, rule)?;
    let t = g.regular_degree().ok_or_else(|| fail(name, "the graph must be regular"))?;
    if g.kappa == 0 {
        return Err(fail(name, "κ must be positive"));
    }
    let mut roster = Roster::default();
    let p = roster.add("p")?;
    let vertices = roster.add_all(g.vertices.iter().cloned())?;
    let mut votes: Vec<Ballot> = g.edges.iter().map(|&(u, v)| Ballot::new([vertices[u], vertices[v]])).collect();
    votes.extend(repeat(Ballot::new([p]), t));
    let instance = JccInstance::new(roster.election(votes)?, g.kappa, vec![p])?;
    Ok(StrategicInstance::CommitteeMembership { rule: rule.clone(), instance })
}

fn ccdc_thiele(rule: &Rule, g: &GraphInstance) -> Result<StrategicInstance> {
    let name = "ccdc-thiele-clique";
    check_thiele(name, rule)?;
    let t = g.regular_degree().ok_or_else(|| fail(name, "the graph must be regular"))?;
    if g.kappa == 0 {
        return Err(fail(name, "κ must be positive"));
    }
    let mut roster = Roster::default();
    let p = roster.add("p")?;
    let vertices = roster.add_all(g.vertices.iter().cloned())?;
    let mut votes: Vec<Ballot> = repeat(Ballot::new([p]), t).collect();
    votes.extend(g.edges.iter().map(|&(u, v)| Ballot::new([vertices[u], vertices[v]])));
    if votes.iter().any(|v| v.len() > 2) {
        return Err(fail(name, "structural audit failed"));
    }
    let election = roster.election(votes)?;
    let registered = (0..election.num_candidates()).collect();
    control(ControlType::Ccdc, rule.clone(), election, registered, Vec::new(), 2, p, g.num_vertices() - g.kappa)
}

/// A random source inside the oracle caps that satisfies the preconditions of `kind`.
pub fn random_source<R: Rng>(rng: &mut R, kind: ReductionKind) -> Result<Source> {
    use ReductionKind::*;
    // half planted YES instances, half drawn until no exact cover exists
    let rx3c = |rng: &mut R, lo: usize, hi: usize| -> Result<Source> {
        if rng.gen_bool(0.5) {
            let kappa = rng.gen_range(lo..=hi);
            return random_rx3c(rng, kappa, true).map(Source::Rx3c);
        }
        let kappa = rng.gen_range(lo.max(2).min(hi)..=hi);
        let mut x = random_rx3c(rng, kappa, false)?;
        for _ in 0..200 {
            if exact_cover(&x)?.is_none() {
                break;
            }
            x = random_rx3c(rng, kappa, false)?;
        }
        Ok(Source::Rx3c(x))
    };
    let regular = |rng: &mut R, clique: bool| -> Result<Source> {
        loop {
            let n = rng.gen_range(2..=7usize);
            let d = rng.gen_range(0..n);
            let kappa = rng.gen_range(1..=n.min(if clique { 4 } else { 3 }));
            if let Some(g) = random_regular_graph(rng, n, d, kappa) {
                return Ok(Source::Graph(g));
            }
        }
    };
    match kind {
        ManipAvVc => Ok(Source::Graph(GraphInstance::complete(4, rng.gen_range(1..=4)))),
        ManipSavVc | ManipNsavVc => Ok(Source::Graph(GraphInstance::complete(4, rng.gen_range(1..=3)))),
        ManipMavVc => {
            // two edges on four vertices, sharing a vertex (YES) or not (NO)
            let share = rng.gen_bool(0.5);
            loop {
                let g = random_graph(rng, 4, 2, 1)?;
                let (a, b) = (g.edges[0], g.edges[1]);
                if (a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1) == share {
                    return Ok(Source::Graph(g));
                }
            }
        }
        CcavSavRx3c | CcavNsavRx3c => rx3c(rng, 1, 4),
        CcdvSavRx3c | CcdvNsavRx3c | CcacSavRx3c | CcacNsavRx3c => rx3c(rng, 1, 3),
        CcavMavRx3c | CcdcMavRx3c | PccMavRx3c => rx3c(rng, 1, 3),
        CcdcSavRx3c | CcdcNsavRx3c => rx3c(rng, 3, 3),
        PccThieleIs => regular(rng, false),
        CcdcThieleClique => regular(rng, true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for kind in ReductionKind::ALL {
            assert_eq!(kind.name().parse::<ReductionKind>().unwrap(), kind);
        }
    }

    #[test]
    fn normalization_reaches_multiple_of_four() {
        for kappa in 1..=4 {
            let x = random_rx3c(&mut crate::random::rng(kappa as u64), kappa, true).unwrap();
            let y = normalize_mod4(&x);
            assert_eq!(y.kappa() % 4, 0);
            assert!(exact_cover(&y).unwrap().is_some());
        }
    }
}
