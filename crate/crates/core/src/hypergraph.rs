//! k-uniform hypergraphs over contiguous vertex ids, with degree, complement,
//! independence and balancedness queries, plus the plain-text instance format.
//!
//! Instance format:
//!
//! ```text
//! # generator=steiner        (optional `# key=value` comment lines)
//! k n m
//! v_1 v_2 ... v_k            (m lines, ids strictly increasing, lines sorted)
//! ```

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use sha2::{Digest, Sha256};

use crate::combinatorics::{binomial, for_each_subset, Combinations};
use crate::error::{Error, Result};

pub type Vertex = u32;

/// Strictly increasing list of vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    /// Wraps an already strictly increasing vector.
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input(format!(
                "vertex set {vertices:?} is not strictly increasing"
            )));
        }
        Ok(VertexSet(vertices))
    }

    /// Sorts and deduplicates.
    pub fn from_unsorted(vertices: impl IntoIterator<Item = Vertex>) -> Self {
        let mut v: Vec<Vertex> = vertices.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }

    pub(crate) fn from_sorted_unchecked(vertices: Vec<Vertex>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        VertexSet(vertices)
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        is_sorted_subset(&self.0, &other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl From<&[Vertex]> for VertexSet {
    fn from(s: &[Vertex]) -> Self {
        VertexSet::from_unsorted(s.iter().copied())
    }
}

/// Both inputs strictly increasing.
pub(crate) fn is_sorted_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut j = 0;
    for &x in small {
        while j < big.len() && big[j] < x {
            j += 1;
        }
        if j == big.len() || big[j] != x {
            return false;
        }
        j += 1;
    }
    true
}

/// Maximum i-tuple degrees `(Delta_1, ..., Delta_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub delta: Vec<u64>,
}

impl DegreeProfile {
    /// `Delta_i` for `1 <= i <= k`.
    pub fn get(&self, i: usize) -> u64 {
        self.delta[i - 1]
    }

    pub fn max_vertex_degree(&self) -> u64 {
        self.delta.first().copied().unwrap_or(0)
    }
}

/// Immutable k-uniform hypergraph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    k: usize,
    n: usize,
    /// Flat, lexicographically sorted edge list with stride `k`.
    edges: Vec<Vertex>,
    /// Edge indices incident to each vertex, ascending.
    incidence: Vec<Vec<u32>>,
}

impl Hypergraph {
    /// Builds a hypergraph; each edge is sorted, the edge list is sorted, and
    /// duplicate edges, repeated vertices, wrong arity or out-of-range ids are rejected.
    pub fn new(n: usize, k: usize, edges: impl IntoIterator<Item = Vec<Vertex>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::Input(format!("uniformity k = {k} must be at least 2")));
        }
        let mut list: Vec<Vec<Vertex>> = Vec::new();
        for mut e in edges {
            if e.len() != k {
                return Err(Error::Input(format!(
                    "edge {e:?} has {} vertices, expected {k}",
                    e.len()
                )));
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Input(format!("edge {e:?} repeats a vertex")));
            }
            if let Some(&v) = e.last() {
                if v as usize >= n {
                    return Err(Error::Input(format!("vertex {v} out of range 0..{n}")));
                }
            }
            list.push(e);
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Input(format!("duplicate edge {:?}", w[0])));
        }
        Ok(Self::from_sorted(n, k, list.concat()))
    }

    fn from_sorted(n: usize, k: usize, edges: Vec<Vertex>) -> Self {
        let mut incidence = vec![Vec::new(); n];
        for (i, e) in edges.chunks_exact(k).enumerate() {
            for &v in e {
                incidence[v as usize].push(i as u32);
            }
        }
        Hypergraph { k, n, edges, incidence }
    }

    pub fn empty(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, std::iter::empty())
    }

    /// The complete k-graph `K_n^(k)`.
    pub fn complete(n: usize, k: usize) -> Result<Self> {
        Self::new(n, k, Combinations::new(n, k))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len().checked_div(self.k).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge(&self, i: usize) -> &[Vertex] {
        &self.edges[i * self.k..(i + 1) * self.k]
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> impl ExactSizeIterator<Item = &[Vertex]> + '_ {
        self.edges.chunks_exact(self.k)
    }

    /// Indices of the edges containing `v`.
    pub fn incident(&self, v: Vertex) -> &[u32] {
        &self.incidence[v as usize]
    }

    /// Index of a sorted k-set in the edge list.
    pub fn edge_index(&self, set: &[Vertex]) -> Option<usize> {
        if set.len() != self.k {
            return None;
        }
        let (mut lo, mut hi) = (0usize, self.num_edges());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.edge(mid).cmp(set) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// `set` must be sorted.
    pub fn contains_edge(&self, set: &[Vertex]) -> bool {
        self.edge_index(set).is_some()
    }

    fn check_vertices(&self, s: &[Vertex]) -> Result<()> {
        if s.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input(format!("vertex set {s:?} is not strictly increasing")));
        }
        if let Some(&v) = s.last() {
            if v as usize >= self.n {
                return Err(Error::Input(format!("vertex {v} out of range 0..{}", self.n)));
            }
        }
        Ok(())
    }

    /// Number of edges containing `s`.
    pub fn degree(&self, s: &VertexSet) -> Result<u64> {
        let s = s.as_slice();
        if s.len() > self.k {
            return Err(Error::Input(format!("|S| = {} exceeds uniformity {}", s.len(), self.k)));
        }
        self.check_vertices(s)?;
        Ok(self.degree_unchecked(s))
    }

    pub(crate) fn degree_unchecked(&self, s: &[Vertex]) -> u64 {
        match s.first() {
            None => self.num_edges() as u64,
            Some(&v) => self
                .incident(v)
                .iter()
                .filter(|&&e| is_sorted_subset(s, self.edge(e as usize)))
                .count() as u64,
        }
    }

    /// Degree of every i-subset that lies inside at least one edge.
    pub fn subset_degrees(&self, i: usize) -> HashMap<Vec<Vertex>, u64> {
        let mut counts: HashMap<Vec<Vertex>, u64> = HashMap::new();
        for e in self.edges() {
            for_each_subset(e, i, |s| {
                *counts.entry(s.to_vec()).or_insert(0) += 1;
                true
            });
        }
        counts
    }

    /// `Delta_i(G)`: the largest degree of an i-set, 0 for an empty hypergraph.
    pub fn max_degree(&self, i: usize) -> Result<u64> {
        if i == 0 || i > self.k {
            return Err(Error::Input(format!("tuple size {i} outside 1..={}", self.k)));
        }
        Ok(self.max_degree_unchecked(i))
    }

    fn max_degree_unchecked(&self, i: usize) -> u64 {
        if self.is_empty() {
            return 0;
        }
        match i {
            1 => self.incidence.iter().map(|v| v.len() as u64).max().unwrap_or(0),
            i if i == self.k => 1,
            _ => self.subset_degrees(i).into_values().max().unwrap_or(0),
        }
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        DegreeProfile {
            delta: (1..=self.k).map(|i| self.max_degree_unchecked(i)).collect(),
        }
    }

    /// First level `i` (with its `Delta_i`) violating `Delta_i^(k-1) <= d^(k-i)`.
    pub fn balance_violation(&self, d: u64) -> Option<(usize, u64)> {
        let profile = self.degree_profile();
        let k = self.k as u32;
        (1..=self.k).find_map(|i| {
            let delta = profile.get(i);
            let ok = int_pow_le(delta, k - 1, d, k - i as u32);
            (!ok).then_some((i, delta))
        })
    }

    /// `Delta_i <= d^((k-i)/(k-1))` for every `1 <= i <= k`, in exact integer arithmetic.
    pub fn is_d_balanced(&self, d: u64) -> bool {
        self.balance_violation(d).is_none()
    }

    /// Lazily yields every k-subset of `0..n` that is not an edge, lexicographically.
    pub fn complement_edges(&self) -> ComplementEdges<'_> {
        ComplementEdges {
            graph: self,
            combos: Combinations::new(self.n, self.k),
            cursor: 0,
        }
    }

    /// `binom(n, k) - |G|`, if it fits in u64.
    pub fn num_complement_edges(&self) -> Option<u64> {
        binomial(self.n as u64, self.k as u64).map(|c| c - self.num_edges() as u64)
    }

    /// Materialized complement hypergraph.
    pub fn complement(&self) -> Hypergraph {
        let edges: Vec<Vertex> = self.complement_edges().flat_map(|e| e.into_vec()).collect();
        Self::from_sorted(self.n, self.k, edges)
    }

    /// Lexicographically first edge contained in `s` (sorted).
    pub fn first_edge_within(&self, s: &[Vertex]) -> Option<VertexSet> {
        let mut best: Option<u32> = None;
        for &v in s {
            for &e in self.incident(v) {
                let edge = self.edge(e as usize);
                if edge[0] == v && is_sorted_subset(edge, s) {
                    best = Some(best.map_or(e, |b| b.min(e)));
                    break;
                }
            }
        }
        best.map(|e| VertexSet::from_sorted_unchecked(self.edge(e as usize).to_vec()))
    }

    /// True iff no edge is a subset of `s`.
    pub fn is_independent(&self, s: &VertexSet) -> bool {
        self.first_edge_within(s.as_slice()).is_none()
    }

    /// Lexicographically first k-subset of `s` that is not an edge.
    pub fn first_non_edge_within(&self, s: &[Vertex]) -> Option<VertexSet> {
        let mut found = None;
        for_each_subset(s, self.k, |sub| {
            if self.contains_edge(sub) {
                true
            } else {
                found = Some(VertexSet::from_sorted_unchecked(sub.to_vec()));
                false
            }
        });
        found
    }

    /// True iff every k-subset of `c` is an edge. Sets smaller than k are rejected.
    pub fn is_clique(&self, c: &VertexSet) -> Result<bool> {
        if c.len() < self.k {
            return Err(Error::Input(format!(
                "clique {c} has fewer than k = {} vertices",
                self.k
            )));
        }
        self.check_vertices(c.as_slice())?;
        match binomial(c.len() as u64, self.k as u64) {
            Some(needed) if needed <= self.num_edges() as u64 => Ok(self.first_non_edge_within(c.as_slice()).is_none()),
            _ => Ok(false),
        }
    }

    /// Canonical text form with optional `# key=value` header lines.
    pub fn to_text(&self, header: &[(String, String)]) -> String {
        let mut out = String::new();
        for (key, value) in header {
            out.push_str(&format!("# {key}={value}\n"));
        }
        out.push_str(&self.body_text());
        out
    }

    fn body_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.k, self.n, self.num_edges());
        for e in self.edges() {
            push_ids(&mut out, e);
            out.push('\n');
        }
        out
    }

    /// Short content hash of the canonical edge list (header comments excluded).
    pub fn fingerprint(&self) -> String {
        let digest = Sha256::digest(self.body_text().as_bytes());
        format!("{digest:x}")[..16].to_string()
    }

    /// Parses the instance format, returning the hypergraph and its header pairs.
    pub fn parse(text: &str) -> Result<(Hypergraph, Vec<(String, String)>)> {
        let mut lines = text.lines().enumerate().peekable();
        let header = parse_header_comments(&mut lines);
        let (lineno, first) = lines.next().ok_or_else(|| Error::parse(0, "missing `k n m` line"))?;
        let nums = parse_ids(first, lineno + 1)?;
        let [k, n, m] = nums[..] else {
            return Err(Error::parse(lineno + 1, "expected `k n m`"));
        };
        let (k, n, m) = (k as usize, n as usize, m as usize);
        if k < 2 {
            return Err(Error::parse(lineno + 1, format!("k = {k} must be at least 2")));
        }
        let mut flat: Vec<Vertex> = Vec::with_capacity(m * k);
        let mut prev: Option<Vec<Vertex>> = None;
        for _ in 0..m {
            let (lineno, line) = lines
                .next()
                .ok_or_else(|| Error::parse(0, format!("expected {m} edge lines")))?;
            let lineno = lineno + 1;
            let e: Vec<Vertex> = parse_ids(line, lineno)?;
            if e.len() != k {
                return Err(Error::parse(lineno, format!("edge has {} ids, expected {k}", e.len())));
            }
            if e.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::parse(lineno, "edge ids must be strictly increasing"));
            }
            if e[k - 1] as usize >= n {
                return Err(Error::parse(lineno, format!("vertex {} out of range 0..{n}", e[k - 1])));
            }
            if let Some(p) = &prev {
                match p.cmp(&e) {
                    std::cmp::Ordering::Equal => return Err(Error::parse(lineno, "duplicate edge")),
                    std::cmp::Ordering::Greater => {
                        return Err(Error::parse(lineno, "edges are not sorted lexicographically"))
                    }
                    std::cmp::Ordering::Less => {}
                }
            }
            flat.extend_from_slice(&e);
            prev = Some(e);
        }
        expect_trailing_blank(lines)?;
        Ok((Self::from_sorted(n, k, flat), header))
    }
}

/// Iterator returned by [`Hypergraph::complement_edges`].
pub struct ComplementEdges<'a> {
    graph: &'a Hypergraph,
    combos: Combinations,
    cursor: usize,
}

impl Iterator for ComplementEdges<'_> {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        let m = self.graph.num_edges();
        for c in self.combos.by_ref() {
            while self.cursor < m && self.graph.edge(self.cursor) < c.as_slice() {
                self.cursor += 1;
            }
            if self.cursor < m && self.graph.edge(self.cursor) == c.as_slice() {
                continue;
            }
            return Some(VertexSet::from_sorted_unchecked(c));
        }
        None
    }
}

/// `a^x <= b^y`, exact.
fn int_pow_le(a: u64, x: u32, b: u64, y: u32) -> bool {
    match (u128::from(a).checked_pow(x), u128::from(b).checked_pow(y)) {
        (Some(l), Some(r)) => l <= r,
        _ => BigUint::from(a).pow(x) <= BigUint::from(b).pow(y),
    }
}

pub(crate) fn push_ids(out: &mut String, ids: &[Vertex]) {
    for (i, v) in ids.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&v.to_string());
    }
}

pub(crate) fn parse_ids(line: &str, lineno: usize) -> Result<Vec<Vertex>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<Vertex>()
                .map_err(|_| Error::parse(lineno, format!("`{tok}` is not a non-negative integer")))
        })
        .collect()
}

/// Consumes leading `# key=value` lines.
pub(crate) fn parse_header_comments<'a, I>(lines: &mut std::iter::Peekable<I>) -> Vec<(String, String)>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let mut header = Vec::new();
    while let Some((_, line)) = lines.peek() {
        let Some(rest) = line.strip_prefix('#') else {
            break;
        };
        if let Some((key, value)) = rest.trim().split_once('=') {
            header.push((key.trim().to_string(), value.trim().to_string()));
        }
        lines.next();
    }
    header
}

pub(crate) fn expect_trailing_blank<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<()> {
    for (lineno, line) in lines {
        if !line.trim().is_empty() {
            return Err(Error::parse(lineno + 1, "unexpected trailing content"));
        }
    }
    Ok(())
}
