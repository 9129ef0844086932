//! Seed-deterministic instance generators: linear k-partite hypergraphs,
//! balanced hard instances (disjoint cliques plus a linear transversal part),
//! blowups of 2-graphs, partial Steiner systems and random bounded-degree
//! hypergraphs.

use std::collections::HashSet;

use log::warn;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{binomial, Combinations};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex, VertexSet};

/// A hypergraph together with a vertex partition and the parameters that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionedInstance {
    pub hypergraph: Hypergraph,
    pub parts: Vec<VertexSet>,
    /// Generator id first, then parameters in a fixed order.
    pub metadata: Vec<(String, String)>,
}

impl PartitionedInstance {
    /// Instance text with the metadata as comment header.
    pub fn to_text(&self) -> String {
        self.hypergraph.to_text(&self.metadata)
    }
}

fn meta(pairs: &[(&str, String)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn contiguous_parts(count: usize, size: usize) -> Vec<VertexSet> {
    (0..count)
        .map(|i| VertexSet::from_sorted_unchecked((i * size..(i + 1) * size).map(|v| v as Vertex).collect()))
        .collect()
}

/// Give up after this many consecutive rejected samples.
fn stall_limit(n: usize) -> u64 {
    binomial(n as u64, 2).unwrap_or(u64::MAX).saturating_mul(8).max(1000)
}

/// Linear k-partite hypergraph with parts of size `m` and maximum degree at most `d`.
///
/// Adds `floor(d m / (2k^2))` transversal edges one at a time, each drawn
/// uniformly from `V_1 x ... x V_k` and rejected if it would share two vertices
/// with an earlier edge or touch a vertex of degree `d`. At most
/// `ceil(64 * 2k^2 / d)` draws are spent on each edge.
pub fn gen_linear_kpartite(m: usize, d: usize, k: usize, seed: u64) -> Result<PartitionedInstance> {
    if k < 2 {
        return Err(Error::Input(format!("k = {k} must be at least 2")));
    }
    if m == 0 {
        return Err(Error::Input("part size m must be positive".into()));
    }
    if d > m {
        return Err(Error::Input(format!("degree cap d = {d} exceeds part size m = {m}")));
    }
    let edge_count = d * m / (2 * k * k);
    if edge_count == 0 {
        warn!("linear k-partite: d = {d}, m = {m}, k = {k} gives no edges");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degree = vec![0usize; k * m];
    let mut pairs: HashSet<(Vertex, Vertex)> = HashSet::new();
    let mut edges = Vec::with_capacity(edge_count);
    let attempts = if d == 0 { 0 } else { (128 * k * k).div_ceil(d) };
    let mut candidate = vec![0 as Vertex; k];
    for _ in 0..edge_count {
        let mut placed = false;
        for _ in 0..attempts {
            for (i, slot) in candidate.iter_mut().enumerate() {
                *slot = (i * m + rng.gen_range(0..m)) as Vertex;
            }
            let fresh_degrees = candidate.iter().all(|&v| degree[v as usize] < d);
            let linear =
                fresh_degrees && (0..k).all(|a| (a + 1..k).all(|b| !pairs.contains(&(candidate[a], candidate[b]))));
            if linear {
                for a in 0..k {
                    degree[candidate[a] as usize] += 1;
                    for b in a + 1..k {
                        pairs.insert((candidate[a], candidate[b]));
                    }
                }
                edges.push(candidate.clone());
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::Generation(format!(
                "no valid transversal edge after {attempts} draws (edge {} of {edge_count}); m = {m} is likely too small for k = {k}, d = {d}",
                edges.len() + 1
            )));
        }
    }
    Ok(PartitionedInstance {
        hypergraph: Hypergraph::new(k * m, k, edges)?,
        parts: contiguous_parts(k, m),
        metadata: meta(&[
            ("generator", "linear".into()),
            ("m", m.to_string()),
            ("d", d.to_string()),
            ("k", k.to_string()),
            ("seed", seed.to_string()),
        ]),
    })
}

/// Clique size `max(1, round((d/2)^(1/(k-1))))` used by [`gen_balanced_hard`].
pub fn clique_size(d: usize, k: usize) -> usize {
    ((d as f64 / 2.0).powf(1.0 / (k as f64 - 1.0)).round() as usize).max(1)
}

/// Largest `n' <= n` accepted by [`gen_balanced_hard`] for `(d, k)`, with the clique size.
pub fn round_parameters(n: usize, d: usize, k: usize) -> Result<(usize, usize)> {
    if k < 2 || d < 2 {
        return Err(Error::Input(format!("need k >= 2 and d >= 2, got k = {k}, d = {d}")));
    }
    let p = clique_size(d, k);
    let unit = k * p;
    if n < unit {
        return Err(Error::Input(format!("n = {n} is smaller than k * p = {unit}")));
    }
    Ok((n - n % unit, p))
}

/// `k` parts of size `n/k`; each part is tiled by disjoint complete k-graphs on
/// `p` consecutive vertices, and a linear transversal hypergraph with degree cap
/// `floor(d/2)` is laid across the parts. The result is checked to be d-balanced.
pub fn gen_balanced_hard(n: usize, d: usize, k: usize, seed: u64) -> Result<PartitionedInstance> {
    if k < 2 || d < 2 {
        return Err(Error::Input(format!("need k >= 2 and d >= 2, got k = {k}, d = {d}")));
    }
    let p = clique_size(d, k);
    if !n.is_multiple_of(k) || !(n / k).is_multiple_of(p) {
        return Err(Error::Input(format!(
            "n = {n} must be divisible by k = {k} with n/k divisible by p = {p}; use round_parameters"
        )));
    }
    let m = n / k;
    let transversal = gen_linear_kpartite(m, d / 2, k, seed)?;
    let mut edges: Vec<Vec<Vertex>> = transversal.hypergraph.edges().map(<[Vertex]>::to_vec).collect();
    for part in 0..k {
        for block in 0..m / p {
            let base = (part * m + block * p) as Vertex;
            edges.extend(Combinations::new(p, k).map(|c| c.into_iter().map(|v| v + base).collect()));
        }
    }
    let hypergraph = Hypergraph::new(n, k, edges)?;
    if let Some((level, delta)) = hypergraph.balance_violation(d as u64) {
        return Err(Error::Generation(format!(
            "instance is not {d}-balanced (Delta_{level} = {delta}) with clique size p = {p}"
        )));
    }
    Ok(PartitionedInstance {
        hypergraph,
        parts: contiguous_parts(k, m),
        metadata: meta(&[
            ("generator", "balanced-hard".into()),
            ("n", n.to_string()),
            ("d", d.to_string()),
            ("k", k.to_string()),
            ("p", p.to_string()),
            ("seed", seed.to_string()),
        ]),
    })
}

/// Replaces vertex `i` of the 2-graph `f` by the group `{i*ell, ..., i*ell + ell - 1}`
/// and each edge `{i, j}` by the union of the two groups.
pub fn gen_blowup_even(f: &Hypergraph, ell: usize) -> Result<PartitionedInstance> {
    if f.k() != 2 {
        return Err(Error::Input(format!("blowup needs a 2-graph, got k = {}", f.k())));
    }
    if ell == 0 {
        return Err(Error::Input("blowup factor must be at least 1".into()));
    }
    let groups = contiguous_parts(f.n(), ell);
    let edges = f.edges().map(|e| {
        let (a, b) = (e[0] as usize, e[1] as usize);
        groups[a].iter().chain(groups[b].iter()).collect::<Vec<_>>()
    });
    let hypergraph = Hypergraph::new(f.n() * ell, 2 * ell, edges.collect::<Vec<_>>())?;
    Ok(PartitionedInstance {
        hypergraph,
        parts: groups,
        metadata: meta(&[
            ("generator", "blowup".into()),
            ("ell", ell.to_string()),
            ("base", f.fingerprint()),
        ]),
    })
}

/// Random greedy partial Steiner system: uniform k-sets are accepted when none
/// of their pairs is already used; stops after a run of rejections.
pub fn gen_partial_steiner(n: usize, k: usize, seed: u64) -> Result<Hypergraph> {
    if k < 3 || n < k {
        return Err(Error::Input(format!("need k >= 3 and n >= k, got n = {n}, k = {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = vec![false; n * n];
    let mut edges = Vec::new();
    let limit = stall_limit(n);
    let mut stalled = 0;
    while stalled < limit {
        let mut e: Vec<Vertex> = index::sample(&mut rng, n, k).into_iter().map(|v| v as Vertex).collect();
        e.sort_unstable();
        let free = (0..k).all(|a| (a + 1..k).all(|b| !used[e[a] as usize * n + e[b] as usize]));
        if free {
            for a in 0..k {
                for b in a + 1..k {
                    used[e[a] as usize * n + e[b] as usize] = true;
                }
            }
            edges.push(e);
            stalled = 0;
        } else {
            stalled += 1;
        }
    }
    Hypergraph::new(n, k, edges)
}

/// Random k-sets accepted while every member has degree below `d`; stops after
/// a run of rejections.
pub fn gen_random_bounded(n: usize, d: usize, k: usize, seed: u64) -> Result<Hypergraph> {
    if d == 0 {
        return Err(Error::Input("degree bound d must be at least 1".into()));
    }
    if k < 2 || n < k {
        return Err(Error::Input(format!("need k >= 2 and n >= k, got n = {n}, k = {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut degree = vec![0usize; n];
    let mut seen: HashSet<Vec<Vertex>> = HashSet::new();
    let mut edges = Vec::new();
    let limit = stall_limit(n);
    let mut stalled = 0;
    while stalled < limit {
        let mut e: Vec<Vertex> = index::sample(&mut rng, n, k).into_iter().map(|v| v as Vertex).collect();
        e.sort_unstable();
        if e.iter().all(|&v| degree[v as usize] < d) && !seen.contains(&e) {
            for &v in &e {
                degree[v as usize] += 1;
            }
            seen.insert(e.clone());
            edges.push(e);
            stalled = 0;
        } else {
            stalled += 1;
        }
    }
    Hypergraph::new(n, k, edges)
}
