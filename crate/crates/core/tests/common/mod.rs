//! Brute-force oracles shared by the integration tests. They work from the
//! definitions directly and avoid the library's search code.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::Rng;
use theta_lab::{Hypergraph, Vertex};

pub fn subsets(items: &[Vertex], k: usize) -> Vec<Vec<Vertex>> {
    fn go(items: &[Vertex], k: usize, start: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(items, k, 0, &mut Vec::new(), &mut out);
    out
}

pub fn all_vertices(n: usize) -> Vec<Vertex> {
    (0..n as Vertex).collect()
}

pub fn edge_set(g: &Hypergraph) -> HashSet<Vec<Vertex>> {
    g.edges().map(<[Vertex]>::to_vec).collect()
}

pub fn mask_members(mask: u64) -> Vec<Vertex> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

/// Smallest number of label classes such that a k-set shares a label iff it
/// is an edge. A class holding a non-edge k-set is never allowed and classes
/// with fewer than k vertices decide nothing, so the search runs over vertex
/// sets of size at least k whose k-subsets are all edges; breadth-first over
/// the set of already represented edges.
pub fn oracle_theta(g: &Hypergraph) -> usize {
    let (n, k) = (g.n(), g.k());
    assert!(n <= 12);
    let edges: Vec<Vec<Vertex>> = g.edges().map(<[Vertex]>::to_vec).collect();
    assert!(edges.len() <= 128);
    if edges.is_empty() {
        return 0;
    }
    let index: HashMap<&[Vertex], usize> = edges.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
    let mut classes: Vec<u128> = Vec::new();
    for mask in 0u64..(1 << n) {
        let members = mask_members(mask);
        if members.len() < k {
            continue;
        }
        let mut covered = 0u128;
        let ok = subsets(&members, k).iter().all(|s| match index.get(s.as_slice()) {
            Some(&i) => {
                covered |= 1 << i;
                true
            }
            None => false,
        });
        if ok {
            classes.push(covered);
        }
    }
    let full: u128 = if edges.len() == 128 {
        u128::MAX
    } else {
        (1u128 << edges.len()) - 1
    };
    let mut frontier: HashSet<u128> = HashSet::from([0]);
    let mut seen = frontier.clone();
    for t in 1.. {
        let mut next = HashSet::new();
        for &state in &frontier {
            let first = (!state & full).trailing_zeros();
            for &c in classes.iter().filter(|&&c| c >> first & 1 == 1) {
                let s = state | c;
                if s == full {
                    return t;
                }
                if seen.insert(s) {
                    next.insert(s);
                }
            }
        }
        frontier = next;
    }
    unreachable!()
}

pub fn is_independent(edges: &HashSet<Vec<Vertex>>, set: &[Vertex], k: usize) -> bool {
    set.len() < k || subsets(set, k).iter().all(|s| !edges.contains(s))
}

pub fn brute_alpha(g: &Hypergraph) -> usize {
    let edges = edge_set(g);
    (0u64..(1 << g.n()))
        .filter(|&m| is_independent(&edges, &mask_members(m), g.k()))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Largest number of edges through one i-set.
pub fn brute_max_degree(g: &Hypergraph, i: usize) -> u64 {
    let mut counts: HashMap<Vec<Vertex>, u64> = HashMap::new();
    for e in g.edges() {
        for s in subsets(e, i) {
            *counts.entry(s).or_default() += 1;
        }
    }
    counts.into_values().max().unwrap_or(0)
}

/// `Delta_i^(k-1) <= d^(k-i)` for all `1 <= i <= k-1`, in u128.
pub fn brute_balanced(g: &Hypergraph, d: u64) -> bool {
    let k = g.k() as u32;
    (1..k).all(|i| {
        let delta = u128::from(brute_max_degree(g, i as usize));
        match (delta.checked_pow(k - 1), u128::from(d).checked_pow(k - i)) {
            (Some(lhs), Some(rhs)) => lhs <= rhs,
            (None, Some(_)) => false,
            (_, None) => true,
        }
    })
}

/// `{ S : |S| = k-1, deg(S)^2 >= d }`.
pub fn brute_aux(g: &Hypergraph, d: u64) -> BTreeSet<Vec<Vertex>> {
    let mut counts: HashMap<Vec<Vertex>, u64> = HashMap::new();
    for e in g.edges() {
        for s in subsets(e, g.k() - 1) {
            *counts.entry(s).or_default() += 1;
        }
    }
    counts
        .into_iter()
        .filter(|&(_, c)| c * c >= d)
        .map(|(s, _)| s)
        .collect()
}

/// Calls `f` on every k-subset of `items`, in lexicographic order.
pub fn for_subsets(items: &[Vertex], k: usize, f: &mut impl FnMut(&[Vertex])) {
    fn go(items: &[Vertex], k: usize, start: usize, cur: &mut Vec<Vertex>, f: &mut impl FnMut(&[Vertex])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            go(items, k, i + 1, cur, f);
            cur.pop();
        }
    }
    go(items, k, 0, &mut Vec::with_capacity(k), f);
}

fn code(s: &[Vertex], n: usize) -> u64 {
    s.iter().fold(0u64, |acc, &v| acc * n as u64 + u64::from(v))
}

/// Every set independent and every non-edge k-set inside some set.
pub fn check_independent_cover(g: &Hypergraph, sets: &[Vec<Vertex>]) -> Result<(), String> {
    let (n, k) = (g.n(), g.k());
    let edges: HashSet<u64> = g.edges().map(|e| code(e, n)).collect();
    let mut covered: HashSet<u64> = HashSet::new();
    for (j, s) in sets.iter().enumerate() {
        let mut bad = false;
        for_subsets(s, k, &mut |sub| {
            let c = code(sub, n);
            bad |= edges.contains(&c);
            covered.insert(c);
        });
        if bad {
            return Err(format!("set {j} is not independent"));
        }
    }
    let mut missing = None;
    for_subsets(&all_vertices(n), k, &mut |sub| {
        let c = code(sub, n);
        if missing.is_none() && !edges.contains(&c) && !covered.contains(&c) {
            missing = Some(sub.to_vec());
        }
    });
    match missing {
        Some(s) => Err(format!("non-edge {s:?} is not covered")),
        None => Ok(()),
    }
}

pub fn random_hypergraph(rng: &mut impl Rng, n: usize, k: usize, density: f64) -> Hypergraph {
    let edges = subsets(&all_vertices(n), k)
        .into_iter()
        .filter(|_| rng.gen_bool(density));
    Hypergraph::new(n, k, edges.collect::<Vec<_>>()).unwrap()
}

/// All 2-graphs on `n` vertices.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Hypergraph> {
    let pairs = subsets(&all_vertices(n), 2);
    (0u64..(1 << pairs.len())).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, p)| p.clone());
        Hypergraph::new(n, 2, edges.collect::<Vec<_>>()).unwrap()
    })
}
