//! Exact oracles for small instances: minimum clique cover (and hence the set
//! representation number), minimum independent-set cover of the complement,
//! and the independence number.
//!
//! Everything here works on vertex bitmasks, so instances are capped at 64
//! vertices regardless of [`SolveLimits`].

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use crate::combinatorics::for_each_subset;
use crate::cover::{
    verify_clique_cover, verify_representation, verify_theta_cover, CliqueCover, CoverCertificate, SetRepresentation,
};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex, VertexSet};

const HARD_VERTEX_CAP: usize = 64;

/// Size limits for the exact solvers. Instances beyond them are refused.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveLimits {
    pub max_vertices: usize,
    pub max_candidate_sets: usize,
    pub time_budget: Duration,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits {
            max_vertices: 16,
            max_candidate_sets: 1_000_000,
            time_budget: Duration::from_secs(60),
        }
    }
}

impl SolveLimits {
    fn check(&self, g: &Hypergraph) -> Result<()> {
        if self.max_vertices == 0 || self.max_candidate_sets == 0 || self.time_budget.is_zero() {
            return Err(Error::Input("solve limits must be positive".into()));
        }
        let cap = self.max_vertices.min(HARD_VERTEX_CAP);
        if g.n() > cap {
            return Err(Error::Resource(format!(
                "max_vertices: instance has {} vertices, limit is {cap}",
                g.n()
            )));
        }
        Ok(())
    }
}

/// Minimum clique cover. `optimal` is false when the time budget ran out first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCover {
    pub size: usize,
    pub cover: CliqueCover,
    pub optimal: bool,
}

/// Minimum independent-set cover of the complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCertificate {
    pub size: usize,
    pub certificate: CoverCertificate,
    pub optimal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactValue {
    pub value: usize,
    pub optimal: bool,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Family {
    Cliques,
    Independent,
}

/// Bitmask view of a hypergraph.
struct MaskGraph {
    n: usize,
    k: usize,
    edges: HashSet<u64>,
}

impl MaskGraph {
    fn new(g: &Hypergraph) -> Self {
        MaskGraph {
            n: g.n(),
            k: g.k(),
            edges: g.edges().map(to_mask).collect(),
        }
    }

    /// Whether `members + v` stays in the family, given `members` is in it.
    fn extends(&self, family: Family, members: &[Vertex], v: Vertex) -> bool {
        if members.len() + 1 < self.k {
            return true;
        }
        let mut ok = true;
        for_each_subset(members, self.k - 1, |t| {
            let hit = self.edges.contains(&(to_mask(t) | 1 << v));
            ok = match family {
                Family::Cliques => hit,
                Family::Independent => !hit,
            };
            ok
        });
        ok
    }
}

fn to_mask(set: &[Vertex]) -> u64 {
    set.iter().fold(0u64, |m, &v| m | 1 << v)
}

fn mask_members(mask: u64) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut m = mask;
    while m != 0 {
        out.push(m.trailing_zeros());
        m &= m - 1;
    }
    out
}

struct Deadline {
    end: Instant,
    ticks: u32,
    expired: bool,
}

impl Deadline {
    fn new(budget: Duration) -> Self {
        Deadline {
            end: Instant::now() + budget,
            ticks: 0,
            expired: false,
        }
    }

    fn expired(&mut self) -> bool {
        self.ticks = self.ticks.wrapping_add(1);
        if !self.expired && self.ticks.is_multiple_of(1024) && Instant::now() >= self.end {
            self.expired = true;
        }
        self.expired
    }
}

/// Maximal members (of size at least k) of a hereditary family: cliques or
/// independent sets. Bron-Kerbosch over an independence system.
fn maximal_sets(graph: &MaskGraph, family: Family, limits: &SolveLimits) -> Result<Vec<u64>> {
    struct Search<'a> {
        graph: &'a MaskGraph,
        family: Family,
        limit: usize,
        out: Vec<u64>,
        deadline: Deadline,
    }

    impl Search<'_> {
        fn run(&mut self, members: &mut Vec<Vertex>, r: u64, mut p: u64, mut x: u64) -> Result<()> {
            if self.deadline.expired() {
                return Err(Error::Resource("time_budget: maximal set enumeration".into()));
            }
            if p == 0 && x == 0 {
                if members.len() >= self.graph.k {
                    if self.out.len() >= self.limit {
                        return Err(Error::Resource(format!(
                            "max_candidate_sets: more than {} maximal sets",
                            self.limit
                        )));
                    }
                    self.out.push(r);
                }
                return Ok(());
            }
            while p != 0 {
                let v = p.trailing_zeros();
                p &= p - 1;
                members.push(v);
                let filter = |mask: u64| {
                    mask_members(mask)
                        .into_iter()
                        .filter(|&u| self.graph.extends(self.family, members, u))
                        .fold(0u64, |m, u| m | 1 << u)
                };
                let (p2, x2) = (filter(p), filter(x));
                self.run(members, r | 1 << v, p2, x2)?;
                members.pop();
                x |= 1 << v;
            }
            Ok(())
        }
    }

    let all = if graph.n == 64 { u64::MAX } else { (1u64 << graph.n) - 1 };
    let mut search = Search {
        graph,
        family,
        limit: limits.max_candidate_sets,
        out: Vec::new(),
        deadline: Deadline::new(limits.time_budget),
    };
    search.run(&mut Vec::new(), 0, all, 0)?;
    let mut out = search.out;
    out.sort_unstable_by_key(|&m| mask_members(m));
    Ok(out)
}

/// Exact unweighted set cover by branch and bound.
struct SetCover {
    words: usize,
    sets: Vec<Vec<u64>>,
    containing: Vec<Vec<usize>>,
    max_size: u32,
}

impl SetCover {
    fn new(num_elements: usize, members: Vec<Vec<usize>>) -> Self {
        let words = num_elements.div_ceil(64).max(1);
        let mut containing = vec![Vec::new(); num_elements];
        let sets: Vec<Vec<u64>> = members
            .iter()
            .enumerate()
            .map(|(s, elems)| {
                let mut bits = vec![0u64; words];
                for &e in elems {
                    bits[e / 64] |= 1 << (e % 64);
                    containing[e].push(s);
                }
                bits
            })
            .collect();
        let max_size = members.iter().map(|m| m.len() as u32).max().unwrap_or(0);
        SetCover {
            words,
            sets,
            containing,
            max_size,
        }
    }

    fn gain(&self, set: usize, uncovered: &[u64]) -> u32 {
        self.sets[set]
            .iter()
            .zip(uncovered)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    fn greedy(&self, mut uncovered: Vec<u64>) -> Vec<usize> {
        let mut chosen = Vec::new();
        while uncovered.iter().any(|&w| w != 0) {
            let best = (0..self.sets.len())
                .max_by_key(|&s| (self.gain(s, &uncovered), std::cmp::Reverse(s)))
                .expect("every element has a covering set");
            for (u, s) in uncovered.iter_mut().zip(&self.sets[best]) {
                *u &= !s;
            }
            chosen.push(best);
        }
        chosen
    }

    /// Returns the chosen set indices and whether optimality was proven.
    fn solve(&self, num_elements: usize, budget: Duration) -> (Vec<usize>, bool) {
        let mut uncovered = vec![0u64; self.words];
        for e in 0..num_elements {
            uncovered[e / 64] |= 1 << (e % 64);
        }
        let mut best = self.greedy(uncovered.clone());
        let mut deadline = Deadline::new(budget);
        let mut chosen = Vec::new();
        self.branch(&mut uncovered, &mut chosen, &mut best, &mut deadline);
        (best, !deadline.expired)
    }

    fn branch(
        &self,
        uncovered: &mut Vec<u64>,
        chosen: &mut Vec<usize>,
        best: &mut Vec<usize>,
        deadline: &mut Deadline,
    ) {
        if deadline.expired() {
            return;
        }
        let remaining: u32 = uncovered.iter().map(|w| w.count_ones()).sum();
        if remaining == 0 {
            if chosen.len() < best.len() {
                *best = chosen.clone();
            }
            return;
        }
        let lower = remaining.div_ceil(self.max_size.max(1)) as usize;
        if chosen.len() + lower >= best.len() {
            return;
        }
        // uncovered element with the fewest candidate sets, lowest index on ties
        let mut pivot = usize::MAX;
        let mut fewest = usize::MAX;
        for (w, &word) in uncovered.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let e = w * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if self.containing[e].len() < fewest {
                    fewest = self.containing[e].len();
                    pivot = e;
                }
            }
        }
        let mut options: Vec<(u32, usize)> = self.containing[pivot]
            .iter()
            .map(|&s| (self.gain(s, uncovered), s))
            .collect();
        options.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (_, s) in options {
            let saved = uncovered.clone();
            for (u, bits) in uncovered.iter_mut().zip(&self.sets[s]) {
                *u &= !bits;
            }
            chosen.push(s);
            self.branch(uncovered, chosen, best, deadline);
            chosen.pop();
            *uncovered = saved;
            if deadline.expired {
                return;
            }
        }
    }
}

fn sorted_sets(masks: impl IntoIterator<Item = u64>) -> Vec<VertexSet> {
    let mut sets: Vec<VertexSet> = masks
        .into_iter()
        .map(|m| VertexSet::from_sorted_unchecked(mask_members(m)))
        .collect();
    sets.sort();
    sets
}

/// Minimum clique cover: maximal cliques as candidates, then exact set cover over the edges.
pub fn cc_exact(g: &Hypergraph, limits: &SolveLimits) -> Result<ExactCover> {
    limits.check(g)?;
    if g.is_empty() {
        return Ok(ExactCover {
            size: 0,
            cover: CliqueCover::default(),
            optimal: true,
        });
    }
    let graph = MaskGraph::new(g);
    let cliques = maximal_sets(&graph, Family::Cliques, limits)?;
    let members: Vec<Vec<usize>> = cliques
        .iter()
        .map(|&c| {
            let mut edges = Vec::new();
            for_each_subset(&mask_members(c), g.k(), |s| {
                edges.extend(g.edge_index(s));
                true
            });
            edges
        })
        .collect();
    let solver = SetCover::new(g.num_edges(), members);
    let (chosen, optimal) = solver.solve(g.num_edges(), limits.time_budget);
    let cover = CliqueCover {
        cliques: sorted_sets(chosen.iter().map(|&i| cliques[i])),
    };
    verify_clique_cover(g, &cover)
        .map_err(|v| Error::OracleMismatch(format!("clique cover search produced invalid cover: {v}")))?;
    Ok(ExactCover {
        size: cover.len(),
        cover,
        optimal,
    })
}

/// Smallest representation with at most `max_t` labels, found by iterative
/// deepening directly over label classes `{v : s ∈ S_v}`. Returns `None` if
/// none exists within `max_t`. Intended for very small n (all `2^n` label classes are scanned).
pub fn representation_search(g: &Hypergraph, max_t: usize) -> Result<Option<SetRepresentation>> {
    if g.n() > 12 {
        return Err(Error::Resource(format!(
            "max_vertices: direct representation search needs n <= 12, got {}",
            g.n()
        )));
    }
    let n = g.n();
    let k = g.k();
    let edge_masks: Vec<u64> = g.edges().map(to_mask).collect();
    let edge_set: HashSet<u64> = edge_masks.iter().copied().collect();
    // A label class may not hold any k-set that is not an edge.
    let classes: Vec<u64> = (0u64..1 << n)
        .filter(|&m| m.count_ones() as usize >= k)
        .filter(|&m| {
            let mut clean = true;
            for_each_subset(&mask_members(m), k, |s| {
                clean = edge_set.contains(&to_mask(s));
                clean
            });
            clean
        })
        .collect();
    let represented_by: Vec<Vec<usize>> = classes
        .iter()
        .map(|&c| {
            edge_masks
                .iter()
                .enumerate()
                .filter(|(_, &e)| e & c == e)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    fn deepen(
        edge_masks: &[u64],
        classes: &[u64],
        represented_by: &[Vec<usize>],
        done: &mut Vec<bool>,
        picked: &mut Vec<u64>,
        budget: usize,
    ) -> bool {
        let Some(first) = done.iter().position(|&d| !d) else {
            return true;
        };
        if budget == 0 {
            return false;
        }
        let target = edge_masks[first];
        for (c, &class) in classes.iter().enumerate() {
            if class & target != target {
                continue;
            }
            let newly: Vec<usize> = represented_by[c].iter().copied().filter(|&e| !done[e]).collect();
            for &e in &newly {
                done[e] = true;
            }
            picked.push(class);
            if deepen(edge_masks, classes, represented_by, done, picked, budget - 1) {
                return true;
            }
            picked.pop();
            for &e in &newly {
                done[e] = false;
            }
        }
        false
    }

    for t in 0..=max_t {
        let mut done = vec![false; edge_masks.len()];
        let mut picked = Vec::new();
        if deepen(&edge_masks, &classes, &represented_by, &mut done, &mut picked, t) {
            let mut labels = vec![Vec::new(); n];
            for (label, &class) in picked.iter().enumerate() {
                for v in mask_members(class) {
                    labels[v as usize].push(label as u32);
                }
            }
            let rep = SetRepresentation { t, labels };
            verify_representation(g, &rep)
                .map_err(|v| Error::OracleMismatch(format!("direct search built an invalid representation: {v}")))?;
            return Ok(Some(rep));
        }
    }
    Ok(None)
}

/// Set representation number. Equal to the clique cover number; for n <= 6 the
/// value is re-derived by [`representation_search`] and the two must agree.
pub fn theta_exact(g: &Hypergraph, limits: &SolveLimits) -> Result<ExactValue> {
    let cc = cc_exact(g, limits)?;
    if cc.optimal && g.n() <= 6 {
        let direct = representation_search(g, cc.size)?.map(|r| r.t);
        if direct != Some(cc.size) {
            return Err(Error::OracleMismatch(format!(
                "clique cover number {} but direct representation search gave {direct:?}",
                cc.size
            )));
        }
    }
    Ok(ExactValue {
        value: cc.size,
        optimal: cc.optimal,
    })
}

/// Minimum number of independent sets covering every complement k-set:
/// maximal independent sets as candidates, exact set cover over the complement.
pub fn vartheta_exact(g: &Hypergraph, limits: &SolveLimits) -> Result<ExactCertificate> {
    limits.check(g)?;
    let complement: Vec<u64> = g.complement_edges().map(|e| to_mask(e.as_slice())).collect();
    let fingerprint = g.fingerprint();
    if complement.is_empty() {
        return Ok(ExactCertificate {
            size: 0,
            certificate: CoverCertificate::new(Vec::new(), fingerprint),
            optimal: true,
        });
    }
    let index: HashMap<u64, usize> = complement.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let graph = MaskGraph::new(g);
    let independents = maximal_sets(&graph, Family::Independent, limits)?;
    let members: Vec<Vec<usize>> = independents
        .iter()
        .map(|&s| {
            let mut covered = Vec::new();
            for_each_subset(&mask_members(s), g.k(), |sub| {
                covered.extend(index.get(&to_mask(sub)).copied());
                true
            });
            covered
        })
        .collect();
    let solver = SetCover::new(complement.len(), members);
    let (chosen, optimal) = solver.solve(complement.len(), limits.time_budget);
    let mut certificate = CoverCertificate::new(sorted_sets(chosen.iter().map(|&i| independents[i])), fingerprint);
    certificate
        .provenance
        .insert("algorithm".to_string(), "exact".to_string());
    verify_theta_cover(g, &certificate)
        .map_err(|v| Error::OracleMismatch(format!("independent cover search produced invalid certificate: {v}")))?;
    Ok(ExactCertificate {
        size: certificate.t(),
        certificate,
        optimal,
    })
}

/// Independence number by depth-first search with the `|R| + |P|` bound.
pub fn independence_number(g: &Hypergraph, limits: &SolveLimits) -> Result<ExactValue> {
    limits.check(g)?;
    let graph = MaskGraph::new(g);
    let mut deadline = Deadline::new(limits.time_budget);

    fn grow(graph: &MaskGraph, members: &mut Vec<Vertex>, candidates: u64, best: &mut usize, deadline: &mut Deadline) {
        if deadline.expired() {
            return;
        }
        if candidates == 0 {
            *best = (*best).max(members.len());
            return;
        }
        if members.len() + candidates.count_ones() as usize <= *best {
            return;
        }
        let v = candidates.trailing_zeros();
        let rest = candidates & !(1 << v);
        members.push(v);
        let next = mask_members(rest)
            .into_iter()
            .filter(|&u| graph.extends(Family::Independent, members, u))
            .fold(0u64, |m, u| m | 1 << u);
        grow(graph, members, next, best, deadline);
        members.pop();
        grow(graph, members, rest, best, deadline);
    }

    let all = if g.n() == 64 { u64::MAX } else { (1u64 << g.n()) - 1 };
    let mut best = 0;
    grow(&graph, &mut Vec::new(), all, &mut best, &mut deadline);
    Ok(ExactValue {
        value: best,
        optimal: !deadline.expired,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::Combinations;

    fn c5() -> Hypergraph {
        Hypergraph::new(5, 2, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![0, 4]]).unwrap()
    }

    fn limits() -> SolveLimits {
        SolveLimits::default()
    }

    /// Two K4's sharing vertex 3.
    fn bowtie_k4() -> Hypergraph {
        let mut edges: Vec<Vec<u32>> = Combinations::new(4, 2).collect();
        edges.extend(Combinations::new(4, 2).map(|e| e.iter().map(|v| v + 3).collect()));
        Hypergraph::new(7, 2, edges).unwrap()
    }

    /// Brute force: smallest number of cliques (any size >= k) covering all edges.
    fn brute_cc(g: &Hypergraph) -> usize {
        let cliques: Vec<VertexSet> = (0u64..1 << g.n())
            .map(|m| VertexSet::from_sorted_unchecked(mask_members(m)))
            .filter(|s| s.len() >= g.k() && g.is_clique(s).unwrap())
            .collect();
        if g.is_empty() {
            return 0;
        }
        for size in 1.. {
            let mut idx: Vec<usize> = (0..size).collect();
            if size > cliques.len() {
                unreachable!()
            }
            loop {
                let cover = CliqueCover {
                    cliques: idx.iter().map(|&i| cliques[i].clone()).collect(),
                };
                if verify_clique_cover(g, &cover).is_ok() {
                    return size;
                }
                if !crate::combinatorics::next_combination(&mut idx, cliques.len()) {
                    break;
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn cc_examples() {
        assert_eq!(
            cc_exact(&Hypergraph::complete(5, 3).unwrap(), &limits()).unwrap().size,
            1
        );
        assert_eq!(cc_exact(&c5(), &limits()).unwrap().size, 5);
        let bowtie = bowtie_k4();
        assert_eq!(brute_cc(&bowtie), 2);
        let res = cc_exact(&bowtie, &limits()).unwrap();
        assert_eq!(res.size, 2);
        assert!(res.optimal);
    }

    #[test]
    fn theta_examples() {
        assert_eq!(
            theta_exact(&Hypergraph::complete(4, 2).unwrap(), &limits())
                .unwrap()
                .value,
            1
        );
        assert_eq!(
            theta_exact(&Hypergraph::empty(4, 2).unwrap(), &limits()).unwrap().value,
            0
        );
        assert_eq!(theta_exact(&c5(), &limits()).unwrap().value, 5);
        // direct search: no representation of C5 with 4 labels
        assert!(representation_search(&c5(), 4).unwrap().is_none());
        assert_eq!(representation_search(&c5(), 5).unwrap().unwrap().t, 5);
    }

    #[test]
    fn vartheta_examples() {
        let complete = Hypergraph::complete(5, 3).unwrap();
        let res = vartheta_exact(&complete, &limits()).unwrap();
        assert_eq!(res.size, 0);
        assert!(res.certificate.independent_sets.is_empty());
        assert_eq!(
            vartheta_exact(&Hypergraph::empty(6, 3).unwrap(), &limits())
                .unwrap()
                .size,
            1
        );
        let res = vartheta_exact(&c5(), &limits()).unwrap();
        assert_eq!(res.size, 5);
        assert_eq!(verify_theta_cover(&c5(), &res.certificate), Ok(()));
    }

    #[test]
    fn independence_examples() {
        assert_eq!(
            independence_number(&Hypergraph::complete(5, 3).unwrap(), &limits())
                .unwrap()
                .value,
            2
        );
        let two_triangles = Hypergraph::new(6, 3, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        assert_eq!(independence_number(&two_triangles, &limits()).unwrap().value, 4);
        assert_eq!(independence_number(&c5(), &limits()).unwrap().value, 2);
        assert_eq!(
            independence_number(&Hypergraph::empty(7, 3).unwrap(), &limits())
                .unwrap()
                .value,
            7
        );
    }

    #[test]
    fn limits_are_enforced() {
        let big = Hypergraph::empty(17, 2).unwrap();
        assert!(matches!(cc_exact(&big, &limits()), Err(Error::Resource(_))));
        assert!(matches!(vartheta_exact(&big, &limits()), Err(Error::Resource(_))));
        let tight = SolveLimits {
            max_candidate_sets: 2,
            ..SolveLimits::default()
        };
        assert!(matches!(cc_exact(&c5(), &tight), Err(Error::Resource(_))));
    }

    #[test]
    fn duality_on_small_graphs() {
        for g in [
            c5(),
            bowtie_k4(),
            Hypergraph::new(5, 3, vec![vec![0, 1, 2], vec![1, 2, 3]]).unwrap(),
        ] {
            let lhs = vartheta_exact(&g, &limits()).unwrap().size;
            let rhs = cc_exact(&g.complement(), &limits()).unwrap().size;
            assert_eq!(lhs, rhs);
        }
    }
}
