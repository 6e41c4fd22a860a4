//! Elections, ballots, committees, rules and exact scoring.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Exact rational score.
pub type Score = BigRational;

pub fn int(n: i64) -> Score {
    Score::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Score {
    Score::new(BigInt::from(n), BigInt::from(d))
}

/// Number of elements shared by two sorted index slices.
pub fn sorted_overlap(a: &[usize], b: &[usize]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

fn sorted_unique<I: IntoIterator<Item = usize>>(items: I) -> Vec<usize> {
    let mut v: Vec<usize> = items.into_iter().collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// An approval ballot: the sorted set of approved candidate indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ballot(Vec<usize>);

impl Ballot {
    pub fn new<I: IntoIterator<Item = usize>>(approved: I) -> Self {
        Ballot(sorted_unique(approved))
    }

    pub fn empty() -> Self {
        Ballot(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, c: usize) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    /// Size of the intersection with a sorted index set.
    pub fn overlap(&self, other: &[usize]) -> usize {
        sorted_overlap(&self.0, other)
    }
}

impl FromIterator<usize> for Ballot {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Ballot::new(iter)
    }
}

/// A committee; members are kept sorted by roster index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Committee(Vec<usize>);

impl Committee {
    pub fn new<I: IntoIterator<Item = usize>>(members: I) -> Self {
        Committee(sorted_unique(members))
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, c: usize) -> bool {
        self.0.binary_search(&c).is_ok()
    }

    pub fn contains_all(&self, set: &[usize]) -> bool {
        set.iter().all(|&c| self.contains(c))
    }

    pub fn overlap(&self, set: &[usize]) -> usize {
        sorted_overlap(&self.0, set)
    }
}

impl FromIterator<usize> for Committee {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Committee::new(iter)
    }
}

/// `|w \ v| + |v \ w|`.
pub fn hamming_distance(w: &Committee, v: &Ballot) -> usize {
    w.k() + v.len() - 2 * v.overlap(w.members())
}

/// A candidate roster with a stable, indexed multiset of ballots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Election {
    candidates: Vec<Arc<str>>,
    votes: Vec<Ballot>,
}

impl Election {
    pub fn new<S: Into<Arc<str>>>(candidates: Vec<S>, votes: Vec<Ballot>) -> Result<Self> {
        let candidates: Vec<Arc<str>> = candidates.into_iter().map(Into::into).collect();
        let mut seen = HashMap::with_capacity(candidates.len());
        for c in &candidates {
            if seen.insert(c.clone(), ()).is_some() {
                return Err(Error::InvalidElection(format!("duplicate candidate label `{c}`")));
            }
        }
        let e = Election { candidates, votes: Vec::new() };
        e.with_votes(votes)
    }

    /// Builds an election from labels, mostly for fixtures and tests.
    pub fn from_labels(candidates: &[&str], votes: &[&[&str]]) -> Result<Self> {
        let e = Election::new(candidates.to_vec(), Vec::new())?;
        let ballots = votes.iter().map(|v| e.ballot(v)).collect::<Result<Vec<_>>>()?;
        e.with_votes(ballots)
    }

    /// Same roster, different votes.
    pub fn with_votes(&self, votes: Vec<Ballot>) -> Result<Self> {
        let m = self.candidates.len();
        for v in &votes {
            if let Some(&c) = v.as_slice().last() {
                if c >= m {
                    return Err(Error::CandidateOutOfRange { index: c, m });
                }
            }
        }
        Ok(Election { candidates: self.candidates.clone(), votes })
    }

    /// Appends ballots that are already known to fit the roster.
    pub fn with_extra_votes<'a, I: IntoIterator<Item = &'a Ballot>>(&self, extra: I) -> Self {
        let mut votes = self.votes.clone();
        votes.extend(extra.into_iter().cloned());
        debug_assert!(votes.iter().all(|v| v.as_slice().last().is_none_or(|&c| c < self.candidates.len())));
        Election { candidates: self.candidates.clone(), votes }
    }

    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    pub fn num_votes(&self) -> usize {
        self.votes.len()
    }

    pub fn candidates(&self) -> &[Arc<str>] {
        &self.candidates
    }

    pub fn votes(&self) -> &[Ballot] {
        &self.votes
    }

    pub fn label(&self, c: usize) -> &str {
        &self.candidates[c]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.candidates.iter().position(|c| &**c == label).ok_or_else(|| Error::UnknownCandidate(label.to_string()))
    }

    pub fn indices_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let map = self.label_map();
        labels
            .iter()
            .map(|l| map.get(l.as_ref()).copied().ok_or_else(|| Error::UnknownCandidate(l.as_ref().to_string())))
            .collect()
    }

    pub fn label_map(&self) -> HashMap<&str, usize> {
        self.candidates.iter().enumerate().map(|(i, c)| (&**c, i)).collect()
    }

    pub fn ballot<S: AsRef<str>>(&self, labels: &[S]) -> Result<Ballot> {
        Ok(Ballot::new(self.indices_of(labels)?))
    }

    pub fn committee<S: AsRef<str>>(&self, labels: &[S]) -> Result<Committee> {
        Ok(Committee::new(self.indices_of(labels)?))
    }

    pub fn labels_of(&self, set: &[usize]) -> Vec<String> {
        set.iter().map(|&c| self.label(c).to_string()).collect()
    }

    /// Renders a candidate set as `{a,b,c}`.
    pub fn format_set(&self, set: &[usize]) -> String {
        format!("{{{}}}", self.labels_of(set).join(","))
    }

    /// Vote indices approving each candidate.
    pub fn approvers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.candidates.len()];
        for (i, v) in self.votes.iter().enumerate() {
            for c in v.iter() {
                out[c].push(i);
            }
        }
        out
    }

    /// Projects onto the candidates in `keep`; vote order is preserved.
    pub fn restrict(&self, keep: &[usize]) -> Election {
        self.restrict_with_map(keep).0
    }

    /// Like [`Election::restrict`], also returning the old index of every new candidate.
    pub fn restrict_with_map(&self, keep: &[usize]) -> (Election, Vec<usize>) {
        self.project(keep, &self.votes)
    }

    /// Like [`Election::restrict_with_map`], with `votes` (over this roster) in place of the current votes.
    pub fn restrict_votes_with_map(&self, keep: &[usize], votes: &[Ballot]) -> Result<(Election, Vec<usize>)> {
        let m = self.candidates.len();
        if let Some(&c) = votes.iter().filter_map(|v| v.as_slice().last()).find(|&&c| c >= m) {
            return Err(Error::CandidateOutOfRange { index: c, m });
        }
        Ok(self.project(keep, votes))
    }

    fn project(&self, keep: &[usize], votes: &[Ballot]) -> (Election, Vec<usize>) {
        let keep = sorted_unique(keep.iter().copied());
        let mut new_index = vec![usize::MAX; self.candidates.len()];
        for (new, &old) in keep.iter().enumerate() {
            new_index[old] = new;
        }
        let candidates = keep.iter().map(|&c| self.candidates[c].clone()).collect();
        let votes = votes
            .iter()
            .map(|v| Ballot(v.iter().map(|c| new_index[c]).filter(|&c| c != usize::MAX).collect()))
            .collect();
        (Election { candidates, votes }, keep)
    }

    /// Adds `count` candidates approved by nobody.
    pub fn pad_with_dummies(&self, count: usize) -> Election {
        let mut candidates = self.candidates.clone();
        let taken: std::collections::HashSet<&str> = self.candidates.iter().map(|c| &**c).collect();
        let mut next = 0usize;
        let mut added = 0usize;
        while added < count {
            let label = format!("_pad{next}");
            next += 1;
            if taken.contains(label.as_str()) {
                continue;
            }
            candidates.push(Arc::from(label));
            added += 1;
        }
        Election { candidates, votes: self.votes.clone() }
    }
}

/// Whether a rule maximizes or minimizes committee scores.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Maximize,
    Minimize,
}

/// A validated Thiele weight table `ω(0), ω(1), ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThieleWeights(Vec<Score>);

impl ThieleWeights {
    pub fn new(weights: Vec<Score>) -> Result<Self> {
        if weights.first().is_none_or(|w| !w.is_zero()) {
            return Err(Error::Config("Thiele weights must start with ω(0) = 0".into()));
        }
        if weights.windows(2).any(|p| p[1] < p[0]) {
            return Err(Error::Config("Thiele weights must be nondecreasing".into()));
        }
        Ok(ThieleWeights(weights))
    }

    pub fn weights(&self) -> &[Score] {
        &self.0
    }

    pub fn weight(&self, i: usize) -> Result<&Score> {
        self.0
            .get(i)
            .ok_or_else(|| Error::Config(format!("Thiele table has {} entries but ω({i}) is needed", self.0.len())))
    }
}

/// Harmonic number `H_i`.
pub fn harmonic(i: usize) -> Score {
    (1..=i).fold(Score::zero(), |acc, j| acc + frac(1, j as i64))
}

/// An approval-based multiwinner rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Av,
    Sav,
    Nsav,
    Pav,
    Abccv,
    Mav,
    Thiele(ThieleWeights),
}

impl Rule {
    pub fn orientation(&self) -> Orientation {
        match self {
            Rule::Mav => Orientation::Minimize,
            _ => Orientation::Maximize,
        }
    }

    pub fn is_additive(&self) -> bool {
        matches!(self, Rule::Av | Rule::Sav | Rule::Nsav)
    }

    pub fn is_thiele(&self) -> bool {
        matches!(self, Rule::Av | Rule::Pav | Rule::Abccv | Rule::Thiele(_))
    }

    /// `ω(0..=k)` for Thiele rules.
    pub fn thiele_table(&self, k: usize) -> Result<Vec<Score>> {
        match self {
            Rule::Av => Ok((0..=k).map(|i| int(i as i64)).collect()),
            Rule::Pav => Ok((0..=k).map(harmonic).collect()),
            Rule::Abccv => Ok((0..=k).map(|i| int(i.min(1) as i64)).collect()),
            Rule::Thiele(w) => (0..=k).map(|i| w.weight(i).cloned()).collect(),
            _ => Err(Error::Unsupported(format!("{self} is not a Thiele rule"))),
        }
    }

    /// Parses `av`, `sav`, `nsav`, `pav`, `abccv` (or `cc`), `mav`, or `thiele:0,1,3/2,...`.
    pub fn parse(s: &str) -> Result<Rule> {
        let lower = s.trim().to_ascii_lowercase();
        Ok(match lower.as_str() {
            "av" => Rule::Av,
            "sav" => Rule::Sav,
            "nsav" => Rule::Nsav,
            "pav" => Rule::Pav,
            "abccv" | "cc" => Rule::Abccv,
            "mav" => Rule::Mav,
            other => {
                let table =
                    other.strip_prefix("thiele:").ok_or_else(|| Error::Config(format!("unknown rule `{s}`")))?;
                let weights = table.split(',').map(|t| parse_rational(t.trim())).collect::<Result<Vec<_>>>()?;
                Rule::Thiele(ThieleWeights::new(weights)?)
            }
        })
    }
}

pub fn parse_rational(s: &str) -> Result<Score> {
    let bad = || Error::Config(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Score::new(n, d))
        }
        None => Ok(Score::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Av => f.write_str("AV"),
            Rule::Sav => f.write_str("SAV"),
            Rule::Nsav => f.write_str("NSAV"),
            Rule::Pav => f.write_str("PAV"),
            Rule::Abccv => f.write_str("ABCCV"),
            Rule::Mav => f.write_str("MAV"),
            Rule::Thiele(w) => {
                let parts: Vec<String> = w.weights().iter().map(|x| x.to_string()).collect();
                write!(f, "Thiele[{}]", parts.join(","))
            }
        }
    }
}

fn require_additive(rule: &Rule) -> Result<()> {
    if rule.is_additive() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{rule} is not an additive rule")))
    }
}

/// Candidates grouped by identical score, each with its (shared) score.
/// Groups are returned in descending score order; members ascend by index.
pub fn score_classes(rule: &Rule, election: &Election) -> Result<Vec<(Score, Vec<usize>)>> {
    require_additive(rule)?;
    let m = election.num_candidates();
    let approvers = election.approvers();
    let mut by_set: HashMap<&[usize], usize> = HashMap::new();
    let mut groups: Vec<(&[usize], Vec<usize>)> = Vec::new();
    let mut unapproved = Vec::new();
    for (c, a) in approvers.iter().enumerate() {
        if a.is_empty() {
            unapproved.push(c);
            continue;
        }
        let id = *by_set.entry(a.as_slice()).or_insert_with(|| {
            groups.push((a.as_slice(), Vec::new()));
            groups.len() - 1
        });
        groups[id].1.push(c);
    }
    if !unapproved.is_empty() {
        groups.push((&[], unapproved));
    }
    let votes = election.votes();
    let penalty_total = nsav_penalty_total(m, votes);
    let mut scored: Vec<(Score, Vec<usize>)> = groups
        .into_iter()
        .map(|(set, members)| (approver_set_score(rule, m, votes, set, &penalty_total), members))
        .collect();
    scored.sort_by(|a, b| b.0.cmp(&a.0));
    let mut merged: Vec<(Score, Vec<usize>)> = Vec::new();
    for (s, members) in scored {
        match merged.last_mut() {
            Some((last, list)) if *last == s => list.extend(members),
            _ => merged.push((s, members)),
        }
    }
    for (_, list) in merged.iter_mut() {
        list.sort();
    }
    Ok(merged)
}

fn nsav_penalty_total(m: usize, votes: &[Ballot]) -> Score {
    let mut by_len: BTreeMap<usize, i64> = BTreeMap::new();
    for v in votes.iter().filter(|v| v.len() < m) {
        *by_len.entry(v.len()).or_default() += 1;
    }
    by_len.into_iter().fold(Score::zero(), |acc, (len, n)| acc + frac(n, (m - len) as i64))
}

fn approver_set_score(rule: &Rule, m: usize, votes: &[Ballot], set: &[usize], penalty_total: &Score) -> Score {
    match rule {
        Rule::Av => int(set.len() as i64),
        Rule::Sav | Rule::Nsav => {
            let mut by_len: BTreeMap<usize, i64> = BTreeMap::new();
            for &i in set {
                *by_len.entry(votes[i].len()).or_default() += 1;
            }
            let mut s = if *rule == Rule::Nsav { -penalty_total.clone() } else { Score::zero() };
            for (len, n) in by_len {
                s += frac(n, len as i64);
                if *rule == Rule::Nsav && len < m {
                    s += frac(n, (m - len) as i64);
                }
            }
            s
        }
        _ => unreachable!("checked by caller"),
    }
}

/// Scores of all candidates under an additive rule.
pub fn candidate_scores(rule: &Rule, election: &Election) -> Result<Vec<Score>> {
    let mut out = vec![Score::zero(); election.num_candidates()];
    for (s, members) in score_classes(rule, election)? {
        for c in members {
            out[c] = s.clone();
        }
    }
    Ok(out)
}

/// Score of a single candidate under AV, SAV or NSAV.
pub fn additive_candidate_score(rule: &Rule, election: &Election, c: usize) -> Result<Score> {
    require_additive(rule)?;
    let m = election.num_candidates();
    if c >= m {
        return Err(Error::CandidateOutOfRange { index: c, m });
    }
    Ok(election.votes().iter().fold(Score::zero(), |acc, v| acc + vote_contribution(rule, m, v.len(), v.contains(c))))
}

/// What one ballot of size `len` adds to a candidate's AV/SAV/NSAV score among `m` candidates.
pub fn vote_contribution(rule: &Rule, m: usize, len: usize, approves: bool) -> Score {
    match rule {
        Rule::Av if approves => Score::one(),
        Rule::Sav | Rule::Nsav if approves => frac(1, len as i64),
        Rule::Nsav if len < m => -frac(1, (m - len) as i64),
        _ => Score::zero(),
    }
}

/// MAV score: the largest Hamming distance to any ballot (0 with no ballots).
pub fn mav_score(election: &Election, w: &Committee) -> usize {
    election.votes().iter().map(|v| hamming_distance(w, v)).max().unwrap_or(0)
}

/// Exact committee score under any rule.
pub fn committee_score(rule: &Rule, election: &Election, w: &Committee) -> Result<Score> {
    let m = election.num_candidates();
    if let Some(&c) = w.members().last() {
        if c >= m {
            return Err(Error::CandidateOutOfRange { index: c, m });
        }
    }
    match rule {
        Rule::Mav => Ok(int(mav_score(election, w) as i64)),
        Rule::Sav | Rule::Nsav => {
            let scores = candidate_scores(rule, election)?;
            Ok(w.members().iter().fold(Score::zero(), |acc, &c| acc + &scores[c]))
        }
        _ => {
            let omega = rule.thiele_table(w.k())?;
            let mut counts = vec![0i64; w.k() + 1];
            for v in election.votes() {
                counts[v.overlap(w.members())] += 1;
            }
            Ok(counts.iter().zip(&omega).fold(Score::zero(), |acc, (&n, o)| acc + o * int(n)))
        }
    }
}

fn check_k(k: usize, m: usize) -> Result<()> {
    if k == 0 || k > m {
        Err(Error::KOutOfRange { k, m })
    } else {
        Ok(())
    }
}

/// The k-th largest candidate score.
pub fn k_winning_threshold(rule: &Rule, election: &Election, k: usize) -> Result<Score> {
    Ok(partition_candidates(rule, election, k)?.threshold)
}

/// Swin / Pwin / Slose split of an additive election.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdPartition {
    pub threshold: Score,
    pub swin: Vec<usize>,
    pub pwin: Vec<usize>,
    pub slose: Vec<usize>,
}

impl ThresholdPartition {
    /// Whether `w` is a winning committee (`swin ⊆ w ⊆ swin ∪ pwin`).
    pub fn is_winning(&self, w: &Committee, k: usize) -> bool {
        w.k() == k
            && self.swin.iter().all(|&c| w.contains(c))
            && w.members().iter().all(|&c| self.swin.binary_search(&c).is_ok() || self.pwin.binary_search(&c).is_ok())
    }
}

pub fn partition_candidates(rule: &Rule, election: &Election, k: usize) -> Result<ThresholdPartition> {
    check_k(k, election.num_candidates())?;
    let classes = score_classes(rule, election)?;
    Ok(partition_from_classes(&classes, k))
}

/// Builds the partition from descending score classes; `k` must be in range.
pub fn partition_from_classes(classes: &[(Score, Vec<usize>)], k: usize) -> ThresholdPartition {
    let mut swin = Vec::new();
    let mut pwin = Vec::new();
    let mut slose = Vec::new();
    let mut threshold = None;
    let mut seen = 0usize;
    for (score, members) in classes {
        if threshold.is_some() {
            slose.extend_from_slice(members);
        } else if seen + members.len() >= k {
            threshold = Some(score.clone());
            if members.len() == 1 {
                swin.extend_from_slice(members);
            } else {
                pwin.extend_from_slice(members);
            }
        } else {
            swin.extend_from_slice(members);
        }
        seen += members.len();
    }
    // concatenations of sorted runs
    swin.sort();
    pwin.sort();
    slose.sort();
    ThresholdPartition { threshold: threshold.expect("k in range"), swin, pwin, slose }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(c: &[&str], v: &[&[&str]]) -> Election {
        Election::from_labels(c, v).unwrap()
    }

    #[test]
    fn nsav_hand_value() {
        let el = e(&["a", "b", "c", "d"], &[&["a"], &["a", "b"]]);
        assert_eq!(additive_candidate_score(&Rule::Nsav, &el, 0).unwrap(), frac(3, 2));
        // b: 1/2 from v2, minus 1/3 from v1
        assert_eq!(additive_candidate_score(&Rule::Nsav, &el, 1).unwrap(), frac(1, 6));
        let all = candidate_scores(&Rule::Nsav, &el).unwrap();
        for (c, score) in all.iter().enumerate() {
            assert_eq!(*score, additive_candidate_score(&Rule::Nsav, &el, c).unwrap());
        }
    }

    #[test]
    fn empty_and_full_ballots() {
        let el = e(&["a", "b"], &[&[], &["a", "b"]]);
        assert_eq!(additive_candidate_score(&Rule::Sav, &el, 0).unwrap(), frac(1, 2));
        assert_eq!(additive_candidate_score(&Rule::Nsav, &el, 0).unwrap(), frac(1, 2) - frac(1, 2));
    }

    #[test]
    fn av_no_votes() {
        let el = e(&["a"], &[]);
        assert_eq!(additive_candidate_score(&Rule::Av, &el, 0).unwrap(), int(0));
    }

    #[test]
    fn hamming_examples() {
        let el = e(&["a", "b", "p", "d1", "d3", "d4"], &[]);
        let w = el.committee(&["a"]).unwrap();
        assert_eq!(hamming_distance(&w, &el.ballot(&["a"]).unwrap()), 0);
        assert_eq!(hamming_distance(&w, &el.ballot(&["b"]).unwrap()), 2);
        let w = el.committee(&["p", "d1"]).unwrap();
        assert_eq!(hamming_distance(&w, &el.ballot(&["p", "d3", "d4"]).unwrap()), 3);
    }

    #[test]
    fn thiele_encodings_agree() {
        let el = e(&["a", "b", "c", "d"], &[&["a", "b"], &["b", "c", "d"], &["a"], &[]]);
        let w = el.committee(&["a", "b", "c"]).unwrap();
        let pairs = [
            (Rule::Av, vec![int(0), int(1), int(2), int(3)]),
            (Rule::Abccv, vec![int(0), int(1), int(1), int(1)]),
            (Rule::Pav, vec![int(0), int(1), frac(3, 2), frac(11, 6)]),
        ];
        for (rule, table) in pairs {
            let t = Rule::Thiele(ThieleWeights::new(table).unwrap());
            assert_eq!(committee_score(&rule, &el, &w).unwrap(), committee_score(&t, &el, &w).unwrap());
        }
        let short = Rule::Thiele(ThieleWeights::new(vec![int(0), int(1)]).unwrap());
        assert!(matches!(committee_score(&short, &el, &w), Err(Error::Config(_))));
    }

    #[test]
    fn thiele_validation() {
        assert!(ThieleWeights::new(vec![int(1)]).is_err());
        assert!(ThieleWeights::new(vec![int(0), int(2), int(1)]).is_err());
        assert!(Rule::parse("thiele:0,1,3/2").is_ok());
        assert!(Rule::parse("borda").is_err());
    }

    #[test]
    fn restrict_and_pad() {
        let el = e(&["a", "b"], &[&["a", "b"]]);
        assert_eq!(el.restrict(&[0, 1]), el);
        let r = el.restrict(&[0]);
        assert_eq!(r, e(&["a"], &[&["a"]]));
        assert_eq!(el.pad_with_dummies(0), el);
        let p = el.pad_with_dummies(3);
        assert_eq!(p.num_candidates(), 5);
        assert_eq!(p.votes(), el.votes());
    }

    #[test]
    fn partition_distinct_scores() {
        let el = e(&["a", "b", "c"], &[&["a", "b", "c"], &["a", "b"], &["a"]]);
        let p = partition_candidates(&Rule::Av, &el, 2).unwrap();
        assert_eq!(p.swin, vec![0, 1]);
        assert!(p.pwin.is_empty());
        assert_eq!(p.threshold, int(2));
        assert!(partition_candidates(&Rule::Mav, &el, 1).is_err());
        assert!(partition_candidates(&Rule::Av, &el, 4).is_err());
    }
}
