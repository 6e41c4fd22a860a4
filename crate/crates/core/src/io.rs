//! JSON formats for elections, strategic instances and hardness sources.

use serde::{Deserialize, Serialize};

use crate::control::{ControlInstance, ControlType};
use crate::error::{Error, Result};
use crate::manipulation::{ManipulationInstance, Variant};
use crate::model::{Ballot, Committee, Election, Rule};
use crate::reductions::{GraphInstance, Rx3cInstance, Source};
use crate::strategic::StrategicInstance;
use crate::winners::JccInstance;

/// Election file; instance loaders read the optional keys they need.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElectionFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    #[serde(default, rename = "type", skip_serializing_if = "Option::is_none")]
    pub control_type: Option<String>,
    pub candidates: Vec<String>,
    pub votes: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, rename = "J", skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unregistered_votes: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unregistered_candidates: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_add: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget_delete: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manipulators: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline_committee: Option<Vec<String>>,
}

pub fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    Ok(serde_json::from_str(text)?)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("plain data serializes")
}

/// Name accepted by [`Rule::parse`].
pub fn rule_name(rule: &Rule) -> String {
    match rule {
        Rule::Thiele(w) => {
            let parts: Vec<String> = w.weights().iter().map(|x| x.to_string()).collect();
            format!("thiele:{}", parts.join(","))
        }
        other => other.to_string().to_ascii_lowercase(),
    }
}

fn labels(e: &Election, set: &[usize]) -> Vec<String> {
    e.labels_of(set)
}

fn ballots(e: &Election, votes: &[Ballot]) -> Vec<Vec<String>> {
    votes.iter().map(|v| labels(e, v.as_slice())).collect()
}

fn need<T>(value: Option<T>, key: &str) -> Result<T> {
    value.ok_or_else(|| Error::Validation(format!("missing key `{key}`")))
}

impl ElectionFile {
    pub fn from_election(e: &Election) -> Self {
        ElectionFile {
            candidates: labels(e, &(0..e.num_candidates()).collect::<Vec<_>>()),
            votes: ballots(e, e.votes()),
            ..Default::default()
        }
    }

    /// The full roster: registered candidates followed by unregistered ones.
    pub fn election(&self) -> Result<Election> {
        let mut roster = self.candidates.clone();
        roster.extend(self.unregistered_candidates.iter().flatten().cloned());
        let labels: Vec<&str> = roster.iter().map(String::as_str).collect();
        let votes: Vec<Vec<&str>> = self.votes.iter().map(|v| v.iter().map(String::as_str).collect()).collect();
        let refs: Vec<&[&str]> = votes.iter().map(Vec::as_slice).collect();
        Election::from_labels(&labels, &refs)
    }

    fn rule_or(&self, fallback: Option<&Rule>) -> Result<Rule> {
        match (&self.rule, fallback) {
            (_, Some(r)) => Ok(r.clone()),
            (Some(s), None) => Rule::parse(s),
            (None, None) => Err(Error::Validation("missing key `rule`".into())),
        }
    }

    fn k_or(&self, fallback: Option<usize>) -> Result<usize> {
        need(fallback.or(self.k), "k")
    }

    fn j_or(&self, e: &Election, fallback: Option<&[String]>) -> Result<Vec<usize>> {
        match fallback {
            Some(j) => e.indices_of(j),
            None => e.indices_of(need(self.j.as_ref(), "J")?),
        }
    }

    /// Manipulation instance; command-line values override file values.
    pub fn manipulation(
        &self,
        rule: Option<&Rule>,
        k: Option<usize>,
        variant: Option<Variant>,
    ) -> Result<ManipulationInstance> {
        let e = self.election()?;
        let rule = self.rule_or(rule)?;
        let k = self.k_or(k)?;
        let variant = match (variant, &self.variant) {
            (Some(v), _) => v,
            (None, Some(s)) => Variant::parse(s)?,
            (None, None) => Variant::Cbcm,
        };
        let manipulators = need(self.manipulators.as_ref(), "manipulators")?
            .iter()
            .map(|b| e.ballot(b))
            .collect::<Result<Vec<_>>>()?;
        match &self.baseline_committee {
            Some(w) => ManipulationInstance::new(rule, e.clone(), manipulators, k, Some(e.committee(w)?), variant),
            None => ManipulationInstance::with_first_winner(rule, e, manipulators, k, variant),
        }
    }

    /// Control instance; command-line values override file values.
    pub fn control(
        &self,
        kind: Option<ControlType>,
        rule: Option<&Rule>,
        k: Option<usize>,
        j: Option<&[String]>,
    ) -> Result<ControlInstance> {
        let e = self.election()?;
        let kind = match (kind, &self.control_type) {
            (Some(t), _) => t,
            (None, Some(s)) => ControlType::parse(s)?,
            (None, None) => return Err(Error::Validation("missing key `type`".into())),
        };
        let rule = self.rule_or(rule)?;
        let k = self.k_or(k)?;
        let j = self.j_or(&e, j)?;
        let registered: Vec<usize> = (0..self.candidates.len()).collect();
        let unregistered = self.unregistered_votes.iter().flatten().map(|b| e.ballot(b)).collect::<Result<Vec<_>>>()?;
        let (add, delete) = match (self.budget_add, self.budget_delete, self.budget) {
            (None, None, None) => return Err(Error::Validation("missing key `budget`".into())),
            (a, d, b) => {
                let b = b.unwrap_or(0);
                let add = a.unwrap_or(if kind.adds() { b } else { 0 });
                let delete = d.unwrap_or(if kind.deletes() { b } else { 0 });
                (add, delete)
            }
        };
        ControlInstance::new(kind, rule, e, registered, unregistered, k, j, add, delete)
    }

    pub fn jcc(&self, k: Option<usize>, j: Option<&[String]>) -> Result<JccInstance> {
        let e = self.election()?;
        let k = self.k_or(k)?;
        let j = self.j_or(&e, j)?;
        JccInstance::new(e, k, j)
    }

    pub fn from_manipulation(inst: &ManipulationInstance) -> Self {
        let e = &inst.election;
        ElectionFile {
            problem: Some("manipulation".into()),
            rule: Some(rule_name(&inst.rule)),
            k: Some(inst.k),
            manipulators: Some(ballots(e, &inst.manipulators)),
            variant: Some(inst.variant.name().to_ascii_lowercase()),
            baseline_committee: inst.baseline.as_ref().map(|w: &Committee| labels(e, w.members())),
            ..ElectionFile::from_election(e)
        }
    }

    pub fn from_control(inst: &ControlInstance) -> Self {
        let e = &inst.election;
        let d = inst.unregistered_candidates();
        ElectionFile {
            problem: Some("control".into()),
            rule: Some(rule_name(&inst.rule)),
            control_type: Some(inst.kind.name().to_ascii_lowercase()),
            candidates: labels(e, &inst.registered),
            votes: ballots(e, e.votes()),
            k: Some(inst.k),
            j: Some(labels(e, &inst.j)),
            unregistered_votes: inst.kind.on_voters().then(|| ballots(e, &inst.unregistered_votes)),
            unregistered_candidates: (!inst.kind.on_voters()).then(|| labels(e, &d)),
            budget_add: inst.kind.adds().then_some(inst.add_budget),
            budget_delete: inst.kind.deletes().then_some(inst.delete_budget),
            ..Default::default()
        }
    }

    pub fn from_jcc(rule: &Rule, inst: &JccInstance) -> Self {
        ElectionFile {
            problem: Some("jcc".into()),
            rule: Some(rule_name(rule)),
            k: Some(inst.k),
            j: Some(labels(&inst.election, &inst.j)),
            ..ElectionFile::from_election(&inst.election)
        }
    }

    pub fn from_strategic(inst: &StrategicInstance) -> Self {
        match inst {
            StrategicInstance::Manipulation(m) => ElectionFile::from_manipulation(m),
            StrategicInstance::Control(c) => ElectionFile::from_control(c),
            StrategicInstance::CommitteeMembership { rule, instance } => ElectionFile::from_jcc(rule, instance),
        }
    }

    /// Reads back what [`ElectionFile::from_strategic`] writes.
    pub fn strategic(&self) -> Result<StrategicInstance> {
        match self.problem.as_deref() {
            Some("manipulation") => Ok(StrategicInstance::Manipulation(self.manipulation(None, None, None)?)),
            Some("control") => Ok(StrategicInstance::Control(self.control(None, None, None, None)?)),
            Some("jcc") => Ok(StrategicInstance::CommitteeMembership {
                rule: self.rule_or(None)?,
                instance: self.jcc(None, None)?,
            }),
            Some(other) => Err(Error::Validation(format!("unknown problem `{other}`"))),
            None => Err(Error::Validation("missing key `problem`".into())),
        }
    }
}

/// Graph or RX3C source file: `vertices`/`edges` (with `kappa`) or `universe`/`sets`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum SourceFile {
    Graph { vertices: Vec<String>, edges: Vec<[String; 2]>, kappa: usize },
    Rx3c { universe: Vec<String>, sets: Vec<[String; 3]> },
}

impl SourceFile {
    pub fn from_source(source: &Source) -> Self {
        match source {
            Source::Graph(g) => SourceFile::Graph {
                vertices: g.vertices.clone(),
                edges: g.edges.iter().map(|&(u, v)| [g.vertices[u].clone(), g.vertices[v].clone()]).collect(),
                kappa: g.kappa,
            },
            Source::Rx3c(x) => SourceFile::Rx3c {
                universe: x.universe.clone(),
                sets: x.sets.iter().map(|s| s.map(|e| x.universe[e].clone())).collect(),
            },
        }
    }

    pub fn source(&self) -> Result<Source> {
        match self {
            SourceFile::Graph { vertices, edges, kappa } => {
                let v: Vec<&str> = vertices.iter().map(String::as_str).collect();
                let e: Vec<(&str, &str)> = edges.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
                Ok(Source::Graph(GraphInstance::from_labels(&v, &e, *kappa)?))
            }
            SourceFile::Rx3c { universe, sets } => {
                let u: Vec<&str> = universe.iter().map(String::as_str).collect();
                let s: Vec<[&str; 3]> = sets.iter().map(|t| [t[0].as_str(), t[1].as_str(), t[2].as_str()]).collect();
                Ok(Source::Rx3c(Rx3cInstance::from_labels(&u, &s)?))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reductions::{generate, ReductionKind};

    #[test]
    fn election_round_trip() {
        let text = r#"{"candidates": ["a", "b", "c"], "votes": [["a"], ["b", "c"], []], "k": 2}"#;
        let f: ElectionFile = parse_json(text).unwrap();
        let e = f.election().unwrap();
        assert_eq!(e.num_votes(), 3);
        assert_eq!(ElectionFile { k: Some(2), ..ElectionFile::from_election(&e) }, f);
    }

    #[test]
    fn unknown_labels_and_keys_are_rejected() {
        let f: ElectionFile = parse_json(r#"{"candidates": ["a"], "votes": [["z"]]}"#).unwrap();
        assert!(f.election().is_err());
        assert!(parse_json::<ElectionFile>(r#"{"candidates": [], "votes": [], "extra": 1}"#).is_err());
    }

    #[test]
    fn generated_instances_survive_json() {
        let src = crate::reductions::random_source(&mut crate::random::rng(5), ReductionKind::CcacSavRx3c).unwrap();
        for kind in [ReductionKind::CcacSavRx3c, ReductionKind::CcdvSavRx3c, ReductionKind::PccMavRx3c] {
            let inst = generate(kind, &src).unwrap();
            let file = ElectionFile::from_strategic(&inst);
            let back: ElectionFile = parse_json(&to_json(&file)).unwrap();
            assert_eq!(ElectionFile::from_strategic(&back.strategic().unwrap()), file);
        }
        let file = SourceFile::from_source(&src);
        let back: SourceFile = parse_json(&to_json(&file)).unwrap();
        assert_eq!(back.source().unwrap(), src);
    }

    #[test]
    fn rule_names_parse() {
        for r in [Rule::Av, Rule::Sav, Rule::Nsav, Rule::Pav, Rule::Abccv, Rule::Mav] {
            assert_eq!(Rule::parse(&rule_name(&r)).unwrap(), r);
        }
    }
}
