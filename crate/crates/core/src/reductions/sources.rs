//! Graph and exact-cover source problems with exhaustive oracles.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

/// Largest graph the exhaustive oracles accept.
pub const MAX_VERTICES: usize = 16;
/// Largest RX3C cover size the exhaustive oracle accepts.
pub const MAX_KAPPA: usize = 8;

/// A simple undirected graph with a size parameter `κ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphInstance {
    pub vertices: Vec<String>,
    /// Each edge as `(u, v)` with `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
    pub kappa: usize,
}

impl GraphInstance {
    pub fn new(vertices: Vec<String>, edges: Vec<(usize, usize)>, kappa: usize) -> Result<Self> {
        let n = vertices.len();
        let mut seen = HashSet::new();
        if let Some(dup) = vertices.iter().find(|v| !seen.insert(v.as_str())) {
            return Err(Error::Validation(format!("duplicate vertex `{dup}`")));
        }
        let mut norm = Vec::with_capacity(edges.len());
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::Validation(format!("edge ({u}, {v}) leaves the vertex range 0..{n}")));
            }
            if u == v {
                return Err(Error::Validation(format!("self-loop at `{}`", vertices[u])));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if norm.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::Validation("parallel edges".into()));
        }
        if kappa > n {
            return Err(Error::Validation(format!("κ = {kappa} exceeds the {n} vertices")));
        }
        Ok(GraphInstance { vertices, edges: norm, kappa })
    }

    pub fn from_labels(vertices: &[&str], edges: &[(&str, &str)], kappa: usize) -> Result<Self> {
        let index = |x: &str| {
            vertices.iter().position(|v| *v == x).ok_or_else(|| Error::Validation(format!("unknown vertex `{x}`")))
        };
        let edges = edges.iter().map(|(a, b)| Ok((index(a)?, index(b)?))).collect::<Result<Vec<_>>>()?;
        GraphInstance::new(vertices.iter().map(|v| v.to_string()).collect(), edges, kappa)
    }

    pub fn complete(n: usize, kappa: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        GraphInstance::new(vertex_labels(n), edges, kappa).expect("complete graphs are simple")
    }

    pub fn cycle(n: usize, kappa: usize) -> Self {
        let edges = (0..n).map(|u| (u, (u + 1) % n)).collect();
        GraphInstance::new(vertex_labels(n), edges, kappa).expect("cycles on at least three vertices are simple")
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    /// The common degree, if every vertex has the same one.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degrees();
        match d.first() {
            Some(&first) if d.iter().all(|&x| x == first) => Some(first),
            _ => None,
        }
    }

    pub fn edge_label(&self, e: usize) -> String {
        let (u, v) = self.edges[e];
        format!("{}-{}", self.vertices[u], self.vertices[v])
    }

    fn adjacency(&self) -> Vec<u32> {
        let mut adj = vec![0u32; self.vertices.len()];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }

    fn check_cap(&self) -> Result<()> {
        if self.vertices.len() > MAX_VERTICES {
            return Err(Error::CapExceeded(format!(
                "{} vertices exceed the oracle cap of {MAX_VERTICES}",
                self.vertices.len()
            )));
        }
        Ok(())
    }
}

pub fn vertex_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("u{i}")).collect()
}

/// Subsets of `0..n` with exactly `size` bits, as masks.
fn masks_of_size(n: usize, size: usize) -> impl Iterator<Item = u32> {
    (0..1u32 << n).filter(move |m| m.count_ones() as usize == size)
}

/// Is there a vertex cover with exactly `κ` vertices?
pub fn has_vertex_cover(g: &GraphInstance) -> Result<bool> {
    g.check_cap()?;
    Ok(masks_of_size(g.num_vertices(), g.kappa)
        .any(|s| g.edges.iter().all(|&(u, v)| s >> u & 1 == 1 || s >> v & 1 == 1)))
}

/// Is there an independent set with exactly `κ` vertices?
pub fn has_independent_set(g: &GraphInstance) -> Result<bool> {
    g.check_cap()?;
    let adj = g.adjacency();
    Ok(masks_of_size(g.num_vertices(), g.kappa)
        .any(|s| (0..g.num_vertices()).all(|u| s >> u & 1 == 0 || adj[u] & s == 0)))
}

/// Is there a clique with exactly `κ` vertices?
pub fn has_clique(g: &GraphInstance) -> Result<bool> {
    g.check_cap()?;
    let adj = g.adjacency();
    Ok(masks_of_size(g.num_vertices(), g.kappa)
        .any(|s| (0..g.num_vertices()).all(|u| s >> u & 1 == 0 || adj[u] & s == s & !(1 << u))))
}

/// Restricted exact cover by 3-sets: `|A| = |H| = 3κ`, every element in exactly three sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rx3cInstance {
    pub universe: Vec<String>,
    /// Each set sorted; `H` is a multiset so sets may repeat.
    pub sets: Vec<[usize; 3]>,
}

impl Rx3cInstance {
    pub fn new(universe: Vec<String>, sets: Vec<[usize; 3]>) -> Result<Self> {
        let n = universe.len();
        if n == 0 || !n.is_multiple_of(3) || sets.len() != n {
            return Err(Error::Validation(format!("need |A| = |H| = 3κ > 0, got |A| = {n}, |H| = {}", sets.len())));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = universe.iter().find(|a| !seen.insert(a.as_str())) {
            return Err(Error::Validation(format!("duplicate element `{dup}`")));
        }
        let mut occurrences = vec![0usize; n];
        let mut norm = Vec::with_capacity(sets.len());
        for mut h in sets {
            h.sort_unstable();
            if h[2] >= n || h[0] == h[1] || h[1] == h[2] {
                return Err(Error::Validation(format!("{h:?} is not a 3-subset of the universe")));
            }
            for &a in &h {
                occurrences[a] += 1;
            }
            norm.push(h);
        }
        if let Some(a) = occurrences.iter().position(|&o| o != 3) {
            return Err(Error::Validation(format!(
                "element `{}` occurs in {} sets, not 3",
                universe[a], occurrences[a]
            )));
        }
        Ok(Rx3cInstance { universe, sets: norm })
    }

    pub fn from_labels(universe: &[&str], sets: &[[&str; 3]]) -> Result<Self> {
        let index = |x: &str| {
            universe.iter().position(|a| *a == x).ok_or_else(|| Error::Validation(format!("unknown element `{x}`")))
        };
        let sets = sets.iter().map(|h| Ok([index(h[0])?, index(h[1])?, index(h[2])?])).collect::<Result<Vec<_>>>()?;
        Rx3cInstance::new(universe.iter().map(|a| a.to_string()).collect(), sets)
    }

    pub fn kappa(&self) -> usize {
        self.universe.len() / 3
    }

    /// Sets containing element `a`, in order.
    pub fn sets_containing(&self, a: usize) -> Vec<usize> {
        (0..self.sets.len()).filter(|&h| self.sets[h].contains(&a)).collect()
    }

    pub fn set_label(&self, h: usize) -> String {
        format!("H{}", h + 1)
    }
}

pub fn element_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("a{i}")).collect()
}

/// An exact cover (indices into `H`), if one exists.
pub fn exact_cover(x: &Rx3cInstance) -> Result<Option<Vec<usize>>> {
    if x.kappa() > MAX_KAPPA {
        return Err(Error::CapExceeded(format!("κ = {} exceeds the oracle cap of {MAX_KAPPA}", x.kappa())));
    }
    let masks: Vec<u32> = x.sets.iter().map(|h| h.iter().fold(0, |m, &a| m | 1 << a)).collect();
    let full = (1u32 << x.universe.len()) - 1;
    fn search(masks: &[u32], full: u32, covered: u32, chosen: &mut Vec<usize>) -> bool {
        if covered == full {
            return true;
        }
        let a = (!covered).trailing_zeros();
        for (h, &m) in masks.iter().enumerate() {
            if m >> a & 1 == 1 && m & covered == 0 {
                chosen.push(h);
                if search(masks, full, covered | m, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::new();
    Ok(search(&masks, full, 0, &mut chosen).then_some(chosen))
}

/// Random `d`-regular graph on `n` vertices by the pairing model, or `None`
/// if no simple pairing was found.
pub fn random_regular_graph<R: Rng>(rng: &mut R, n: usize, d: usize, kappa: usize) -> Option<GraphInstance> {
    if !(n * d).is_multiple_of(2) || d >= n.max(1) {
        return None;
    }
    for _ in 0..1000 {
        let mut points: Vec<usize> = (0..n).flat_map(|u| std::iter::repeat_n(u, d)).collect();
        points.shuffle(rng);
        let edges: Vec<(usize, usize)> = points.chunks(2).map(|p| (p[0], p[1])).collect();
        if let Ok(g) = GraphInstance::new(vertex_labels(n), edges, kappa) {
            return Some(g);
        }
    }
    None
}

/// Random graph with exactly `e` edges.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, e: usize, kappa: usize) -> Result<GraphInstance> {
    let all: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    if e > all.len() {
        return Err(Error::Generation(format!("{e} edges do not fit on {n} vertices")));
    }
    let edges = all.choose_multiple(rng, e).copied().collect();
    GraphInstance::new(vertex_labels(n), edges, kappa)
}

/// Random RX3C instance. With `planted`, the first `κ` sets form an exact cover.
pub fn random_rx3c<R: Rng>(rng: &mut R, kappa: usize, planted: bool) -> Result<Rx3cInstance> {
    let n = 3 * kappa;
    for _ in 0..10_000 {
        let mut sets: Vec<[usize; 3]> = Vec::with_capacity(n);
        let mut slots: Vec<usize> = Vec::with_capacity(3 * n);
        if planted {
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(rng);
            sets.extend(perm.chunks(3).map(|c| [c[0], c[1], c[2]]));
            slots.extend((0..n).flat_map(|a| [a, a]));
        } else {
            slots.extend((0..n).flat_map(|a| [a, a, a]));
        }
        slots.shuffle(rng);
        sets.extend(slots.chunks(3).map(|c| [c[0], c[1], c[2]]));
        if let Ok(x) = Rx3cInstance::new(element_labels(n), sets) {
            return Ok(x);
        }
    }
    Err(Error::Generation(format!("no RX3C instance found for κ = {kappa}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k3_oracles() {
        let g = GraphInstance::complete(3, 2);
        assert!(has_vertex_cover(&g).unwrap());
        assert!(!has_independent_set(&g).unwrap());
        assert!(has_clique(&g).unwrap());
    }

    #[test]
    fn triple_copies_cover() {
        let x = Rx3cInstance::from_labels(&["a1", "a2", "a3"], &[["a1", "a2", "a3"]; 3]).unwrap();
        assert_eq!(exact_cover(&x).unwrap(), Some(vec![0]));
    }

    #[test]
    fn rejects_bad_occurrence() {
        let sets = [
            ["a1", "a2", "a3"],
            ["a1", "a2", "a3"],
            ["a4", "a5", "a6"],
            ["a4", "a5", "a6"],
            ["a1", "a2", "a3"],
            ["a1", "a5", "a6"],
        ];
        assert!(Rx3cInstance::from_labels(&["a1", "a2", "a3", "a4", "a5", "a6"], &sets).is_err());
    }
}
