//! Set representations, clique covers and independent-set certificates,
//! with validity checks, the representation/clique-cover conversions, and the
//! projection of blowup certificates back onto the base graph.
//!
//! Text formats (all optional `# key=value` lines come first):
//!
//! ```text
//! representation:  t n            certificate / clique list:  t
//!                  labels of 0                                set 1
//!                  ...                                        ...
//!                  labels of n-1                              set t
//! ```
//!
//! Each data line is a space-separated increasing id list; an empty line is the
//! empty set.

use std::collections::BTreeMap;
use std::fmt;

use crate::combinatorics::{binomial, for_each_subset, Combinations};
use crate::coverage::CoverageMap;
use crate::error::{Error, Result};
use crate::hypergraph::{
    expect_trailing_blank, parse_header_comments, parse_ids, push_ids, Hypergraph, Vertex, VertexSet,
};

/// First violated condition found by a verifier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A vertex id is outside `0..n` (or a label outside `0..t`).
    OutOfRange { index: usize, id: u32, bound: usize },
    /// The representation does not list labels for exactly n vertices.
    WrongVertexCount { expected: usize, found: usize },
    /// A listed clique has fewer than k vertices.
    CliqueTooSmall { index: usize, clique: VertexSet },
    /// A listed clique contains a k-set that is not an edge.
    NotAClique {
        index: usize,
        clique: VertexSet,
        non_edge: VertexSet,
    },
    /// An edge lies in no listed clique.
    UncoveredEdge(VertexSet),
    /// A non-edge whose vertices share a label.
    SpuriousIntersection(VertexSet),
    /// An edge whose vertices share no label.
    MissingIntersection(VertexSet),
    /// A listed set contains an edge.
    Dependent {
        index: usize,
        set: VertexSet,
        edge: VertexSet,
    },
    /// A complement edge lies in no listed set.
    UncoveredNonEdge(VertexSet),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfRange { index, id, bound } => {
                write!(f, "entry {index}: id {id} outside 0..{bound}")
            }
            Violation::WrongVertexCount { expected, found } => {
                write!(f, "expected label sets for {expected} vertices, found {found}")
            }
            Violation::CliqueTooSmall { index, clique } => {
                write!(f, "clique {index} {clique} is smaller than k")
            }
            Violation::NotAClique {
                index,
                clique,
                non_edge,
            } => write!(f, "clique {index} {clique} contains non-edge {non_edge}"),
            Violation::UncoveredEdge(e) => write!(f, "edge {e} is not covered by any clique"),
            Violation::SpuriousIntersection(s) => {
                write!(f, "non-edge {s} has a common label")
            }
            Violation::MissingIntersection(s) => write!(f, "edge {s} has no common label"),
            Violation::Dependent { index, set, edge } => {
                write!(f, "set {index} {set} contains edge {edge}")
            }
            Violation::UncoveredNonEdge(e) => {
                write!(f, "non-edge {e} is not covered by any independent set")
            }
        }
    }
}

/// `Ok(())` when valid, otherwise the first violation.
pub type Verdict = std::result::Result<(), Violation>;

/// Label sets `S_v ⊆ 0..t`, one per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetRepresentation {
    pub t: usize,
    pub labels: Vec<Vec<u32>>,
}

/// Cliques (each of at least k vertices) whose union of k-subsets should be the edge set.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CliqueCover {
    pub cliques: Vec<VertexSet>,
}

/// Independent sets of G covering every k-set of the complement.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoverCertificate {
    pub independent_sets: Vec<VertexSet>,
    /// Fingerprint of the hypergraph the certificate was produced for.
    pub achieved_for: String,
    /// Algorithm id, seed and parameters; ignored by validity checks.
    pub provenance: BTreeMap<String, String>,
}

impl CoverCertificate {
    pub fn new(independent_sets: Vec<VertexSet>, achieved_for: impl Into<String>) -> Self {
        CoverCertificate {
            independent_sets,
            achieved_for: achieved_for.into(),
            provenance: BTreeMap::new(),
        }
    }

    /// Number of listed sets.
    pub fn t(&self) -> usize {
        self.independent_sets.len()
    }

    /// Indices of empty sets (allowed, but they indicate wasted trials).
    pub fn lint(&self) -> Vec<String> {
        self.independent_sets
            .iter()
            .enumerate()
            .filter(|(_, s)| s.is_empty())
            .map(|(i, _)| format!("set {i} is empty"))
            .collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.achieved_for.is_empty() {
            out.push_str(&format!("# instance={}\n", self.achieved_for));
        }
        for (key, value) in &self.provenance {
            out.push_str(&format!("# {key}={value}\n"));
        }
        out.push_str(&set_list_text(&self.independent_sets));
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (header, sets) = parse_set_list(text)?;
        let mut cert = CoverCertificate::new(sets, "");
        for (key, value) in header {
            if key == "instance" {
                cert.achieved_for = value;
            } else {
                cert.provenance.insert(key, value);
            }
        }
        Ok(cert)
    }
}

impl CliqueCover {
    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    pub fn to_text(&self) -> String {
        set_list_text(&self.cliques)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(CliqueCover {
            cliques: parse_set_list(text)?.1,
        })
    }
}

impl SetRepresentation {
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.t, self.labels.len());
        for l in &self.labels {
            push_ids(&mut out, l);
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().peekable();
        parse_header_comments(&mut lines);
        let (lineno, first) = lines.next().ok_or_else(|| Error::parse(0, "missing `t n` line"))?;
        let [t, n] = parse_ids(first, lineno + 1)?[..] else {
            return Err(Error::parse(lineno + 1, "expected `t n`"));
        };
        let mut labels = Vec::with_capacity(n as usize);
        for _ in 0..n {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| Error::parse(0, format!("expected {n} label lines")))?;
            let l = parse_ids(line, lineno + 1)?;
            if l.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::parse(lineno + 1, "labels must be strictly increasing"));
            }
            if l.last().is_some_and(|&x| x >= t) {
                return Err(Error::parse(lineno + 1, format!("label outside 0..{t}")));
            }
            labels.push(l);
        }
        expect_trailing_blank(lines)?;
        Ok(SetRepresentation { t: t as usize, labels })
    }
}

fn set_list_text(sets: &[VertexSet]) -> String {
    let mut out = format!("{}\n", sets.len());
    for s in sets {
        push_ids(&mut out, s.as_slice());
        out.push('\n');
    }
    out
}

type Header = Vec<(String, String)>;

fn parse_set_list(text: &str) -> Result<(Header, Vec<VertexSet>)> {
    let mut lines = text.lines().enumerate().peekable();
    let header = parse_header_comments(&mut lines);
    let (lineno, first) = lines.next().ok_or_else(|| Error::parse(0, "missing count line"))?;
    let [t] = parse_ids(first, lineno + 1)?[..] else {
        return Err(Error::parse(lineno + 1, "expected a single set count"));
    };
    let mut sets = Vec::with_capacity(t as usize);
    for _ in 0..t {
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| Error::parse(0, format!("expected {t} set lines")))?;
        let set = VertexSet::new(parse_ids(line, lineno + 1)?)
            .map_err(|_| Error::parse(lineno + 1, "set ids must be strictly increasing"))?;
        sets.push(set);
    }
    expect_trailing_blank(lines)?;
    Ok((header, sets))
}

fn check_range(sets: &[VertexSet], n: usize) -> Verdict {
    for (index, s) in sets.iter().enumerate() {
        if let Some(&id) = s.as_slice().last() {
            if id as usize >= n {
                return Err(Violation::OutOfRange { index, id, bound: n });
            }
        }
    }
    Ok(())
}

/// Every clique has at least k vertices and spans only edges, and every edge lies in a clique.
pub fn verify_clique_cover(g: &Hypergraph, cover: &CliqueCover) -> Verdict {
    check_range(&cover.cliques, g.n())?;
    let mut covered = vec![false; g.num_edges()];
    for (index, c) in cover.cliques.iter().enumerate() {
        if c.len() < g.k() {
            return Err(Violation::CliqueTooSmall {
                index,
                clique: c.clone(),
            });
        }
        if let Some(non_edge) = g.first_non_edge_within(c.as_slice()) {
            return Err(Violation::NotAClique {
                index,
                clique: c.clone(),
                non_edge,
            });
        }
        for_each_subset(c.as_slice(), g.k(), |s| {
            if let Some(i) = g.edge_index(s) {
                covered[i] = true;
            }
            true
        });
    }
    match covered.iter().position(|&c| !c) {
        Some(i) => Err(Violation::UncoveredEdge(VertexSet::from(g.edge(i)))),
        None => Ok(()),
    }
}

/// Checks `∩ S_{v_i} ≠ ∅ ⟺ {v_1..v_k} ∈ G` over all k-subsets in lexicographic order.
pub fn verify_representation(g: &Hypergraph, rep: &SetRepresentation) -> Verdict {
    if rep.labels.len() != g.n() {
        return Err(Violation::WrongVertexCount {
            expected: g.n(),
            found: rep.labels.len(),
        });
    }
    let words = rep.t.div_ceil(64).max(1);
    let mut bits = vec![0u64; g.n() * words];
    for (v, labels) in rep.labels.iter().enumerate() {
        for &l in labels {
            if l as usize >= rep.t {
                return Err(Violation::OutOfRange {
                    index: v,
                    id: l,
                    bound: rep.t,
                });
            }
            bits[v * words + l as usize / 64] |= 1 << (l % 64);
        }
    }
    let k = g.k();
    let mut acc = vec![0u64; words];
    for subset in Combinations::new(g.n(), k) {
        acc.copy_from_slice(&bits[subset[0] as usize * words..][..words]);
        for &v in &subset[1..] {
            for (a, b) in acc.iter_mut().zip(&bits[v as usize * words..][..words]) {
                *a &= b;
            }
        }
        let shared = acc.iter().any(|&w| w != 0);
        match (shared, g.contains_edge(&subset)) {
            (true, false) => return Err(Violation::SpuriousIntersection(VertexSet::from(&subset[..]))),
            (false, true) => return Err(Violation::MissingIntersection(VertexSet::from(&subset[..]))),
            _ => {}
        }
    }
    Ok(())
}

/// Every listed set is independent in G and every complement k-set lies in one of them.
pub fn verify_theta_cover(g: &Hypergraph, cert: &CoverCertificate) -> Verdict {
    let sets = &cert.independent_sets;
    check_range(sets, g.n())?;
    for (index, s) in sets.iter().enumerate() {
        if let Some(edge) = g.first_edge_within(s.as_slice()) {
            return Err(Violation::Dependent {
                index,
                set: s.clone(),
                edge,
            });
        }
    }
    let k = g.k() as u64;
    let marking_work: u64 = sets
        .iter()
        .map(|s| binomial(s.len() as u64, k).unwrap_or(u64::MAX))
        .fold(0u64, u64::saturating_add);
    let universe = binomial(g.n() as u64, k).unwrap_or(u64::MAX);
    if marking_work <= universe.saturating_mul(8).max(1 << 20) {
        // Independent sets contain only non-edges, so marking their k-subsets
        // marks exactly the covered part of the complement.
        let mut map = CoverageMap::new(g.n(), g.k());
        for s in sets {
            for_each_subset(s.as_slice(), g.k(), |sub| {
                map.insert(sub);
                true
            });
        }
        match g.complement_edges().find(|e| !map.contains(e.as_slice())) {
            Some(e) => Err(Violation::UncoveredNonEdge(e)),
            None => Ok(()),
        }
    } else {
        match g.complement_edges().find(|e| !sets.iter().any(|s| e.is_subset_of(s))) {
            Some(e) => Err(Violation::UncoveredNonEdge(e)),
            None => Ok(()),
        }
    }
}

/// `C(s) = {v : s ∈ S_v}` for each label, keeping only sets of at least k vertices.
pub fn representation_to_cover(g: &Hypergraph, rep: &SetRepresentation) -> Result<CliqueCover> {
    verify_representation(g, rep).map_err(Error::InvalidWitness)?;
    let mut holders: Vec<Vec<Vertex>> = vec![Vec::new(); rep.t];
    for (v, labels) in rep.labels.iter().enumerate() {
        for &l in labels {
            holders[l as usize].push(v as Vertex);
        }
    }
    let cliques = holders
        .into_iter()
        .filter(|c| c.len() >= g.k())
        .map(VertexSet::from_sorted_unchecked)
        .collect();
    Ok(CliqueCover { cliques })
}

/// `S_v` = indices of the cliques containing `v`; `t` = number of cliques.
pub fn cover_to_representation(g: &Hypergraph, cover: &CliqueCover) -> Result<SetRepresentation> {
    verify_clique_cover(g, cover).map_err(Error::InvalidWitness)?;
    let mut labels = vec![Vec::new(); g.n()];
    for (i, c) in cover.cliques.iter().enumerate() {
        for v in c.iter() {
            labels[v as usize].push(i as u32);
        }
    }
    Ok(SetRepresentation { t: cover.len(), labels })
}

/// Projects a certificate of a blowup onto its base 2-graph:
/// set j becomes `{ i : groups[i] ⊆ I_j }`. Length is preserved, empty sets included.
pub fn project_representation(
    blowup: &Hypergraph,
    groups: &[VertexSet],
    cert: &CoverCertificate,
) -> Result<CoverCertificate> {
    let mut owner = vec![None; blowup.n()];
    for (i, group) in groups.iter().enumerate() {
        if group.is_empty() {
            return Err(Error::Input(format!("group {i} is empty")));
        }
        for v in group.iter() {
            match owner.get_mut(v as usize) {
                Some(slot @ None) => *slot = Some(i),
                Some(Some(_)) => return Err(Error::Input(format!("vertex {v} appears in two groups"))),
                None => return Err(Error::Input(format!("group vertex {v} out of range"))),
            }
        }
    }
    verify_theta_cover(blowup, cert).map_err(Error::InvalidWitness)?;
    let projected = cert
        .independent_sets
        .iter()
        .map(|set| {
            let ids = groups
                .iter()
                .enumerate()
                .filter(|(_, group)| group.is_subset_of(set))
                .map(|(i, _)| i as Vertex)
                .collect();
            VertexSet::from_sorted_unchecked(ids)
        })
        .collect();
    let mut out = CoverCertificate::new(projected, "");
    out.provenance
        .insert("projected_from".to_string(), blowup.fingerprint());
    Ok(out)
}
