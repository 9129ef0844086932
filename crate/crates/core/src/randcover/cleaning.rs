use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, Vertex, VertexSet};

/// The (k-1)-sets whose degree in G is at least `sqrt(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxGraph {
    uniformity: usize,
    n: usize,
    tuples: Vec<VertexSet>,
    lookup: HashSet<Vec<Vertex>>,
}

impl AuxGraph {
    /// Size of every tuple (`k - 1`).
    pub fn uniformity(&self) -> usize {
        self.uniformity
    }

    /// Tuples in lexicographic order.
    pub fn tuples(&self) -> &[VertexSet] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    /// `set` must be sorted.
    pub fn contains(&self, set: &[Vertex]) -> bool {
        self.lookup.contains(set)
    }

    pub fn vertex_degree(&self, v: Vertex) -> u64 {
        self.tuples.iter().filter(|t| t.contains(v)).count() as u64
    }

    /// `Delta(H)`, the largest number of tuples through one vertex.
    pub fn max_degree(&self) -> u64 {
        let mut deg = vec![0u64; self.n];
        for t in &self.tuples {
            for v in t.iter() {
                deg[v as usize] += 1;
            }
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// As a hypergraph, when `k - 1 >= 2`.
    pub fn to_hypergraph(&self) -> Option<Hypergraph> {
        (self.uniformity >= 2).then(|| {
            Hypergraph::new(
                self.n,
                self.uniformity,
                self.tuples.iter().map(|t| t.as_slice().to_vec()),
            )
            .expect("tuples are distinct sorted subsets of 0..n")
        })
    }
}

/// `H = { S : |S| = k - 1, deg_G(S)^2 >= d }`, built from the degrees of all
/// (k-1)-subsets of edges.
pub fn build_aux_graph(g: &Hypergraph, d: u64) -> Result<AuxGraph> {
    if d < 1 {
        return Err(Error::Input("aux graph threshold d must be at least 1".into()));
    }
    let mut tuples: Vec<VertexSet> = g
        .subset_degrees(g.k() - 1)
        .into_iter()
        .filter(|&(_, deg)| u128::from(deg) * u128::from(deg) >= u128::from(d))
        .map(|(s, _)| VertexSet::from_sorted_unchecked(s))
        .collect();
    tuples.sort();
    let lookup = tuples.iter().map(|t| t.as_slice().to_vec()).collect();
    Ok(AuxGraph {
        uniformity: g.k() - 1,
        n: g.n(),
        tuples,
        lookup,
    })
}

/// Reusable scratch space for turning samples into independent sets.
pub(crate) struct Cleaner<'a> {
    g: &'a Hypergraph,
    in_x: Vec<bool>,
    induced: Vec<u32>,
}

impl<'a> Cleaner<'a> {
    pub(crate) fn new(g: &'a Hypergraph) -> Self {
        Cleaner {
            g,
            in_x: vec![false; g.n()],
            induced: Vec::new(),
        }
    }

    /// Marks `w` and collects the edges of `G[w]` in lexicographic order.
    fn load(&mut self, w: &[Vertex]) {
        for &v in w {
            self.in_x[v as usize] = true;
        }
        self.induced.clear();
        for &v in w {
            for &e in self.g.incident(v) {
                let edge = self.g.edge(e as usize);
                if edge[0] == v && edge.iter().all(|&u| self.in_x[u as usize]) {
                    self.induced.push(e);
                }
            }
        }
        self.induced.sort_unstable();
    }

    fn unload(&mut self, w: &[Vertex]) -> Vec<Vertex> {
        let kept = w.iter().copied().filter(|&v| self.in_x[v as usize]).collect();
        for &v in w {
            self.in_x[v as usize] = false;
        }
        kept
    }

    /// `W` minus every vertex of every edge induced by `W`.
    pub(crate) fn delete_induced(&mut self, w: &[Vertex]) -> Vec<Vertex> {
        self.load(w);
        for &e in &self.induced {
            for &v in self.g.edge(e as usize) {
                self.in_x[v as usize] = false;
            }
        }
        self.unload(w)
    }

    /// Cleaning loop guided by the auxiliary graph.
    pub(crate) fn clean(&mut self, w: &[Vertex], h: &AuxGraph) -> Vec<Vertex> {
        self.load(w);
        if self.induced.is_empty() {
            return self.unload(w);
        }
        let k = self.g.k();
        let mut sub = Vec::with_capacity(k - 1);
        // For each induced edge: the vertex outside its unique H-tuple, if it has exactly one.
        let mut live: Vec<(u32, Option<Vertex>)> = self
            .induced
            .iter()
            .map(|&e| {
                let edge = self.g.edge(e as usize);
                let mut hits = 0;
                let mut outside = None;
                for (j, &v) in edge.iter().enumerate() {
                    sub.clear();
                    sub.extend(edge.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &u)| u));
                    if h.contains(&sub) {
                        hits += 1;
                        outside = Some(v);
                    }
                }
                (e, if hits == 1 { outside } else { None })
            })
            .collect();
        while !live.is_empty() {
            let victim = match live.iter().find_map(|&(_, out)| out) {
                Some(v) => v,
                None => *self.g.edge(live[0].0 as usize).last().expect("k >= 2"),
            };
            self.in_x[victim as usize] = false;
            let g = self.g;
            let in_x = &self.in_x;
            live.retain(|&(e, _)| g.edge(e as usize).iter().all(|&u| in_x[u as usize]));
        }
        self.unload(w)
    }
}

/// Removes vertices from `w` until no edge of G remains inside it: while some
/// induced edge holds exactly one (k-1)-tuple of `h`, drop the vertex outside
/// that tuple (lexicographically first such edge); otherwise drop the largest
/// vertex of the lexicographically first induced edge.
pub fn clean(w: &VertexSet, g: &Hypergraph, h: &AuxGraph) -> VertexSet {
    let mut cleaner = Cleaner::new(g);
    VertexSet::from_sorted_unchecked(cleaner.clean(w.as_slice(), h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(v: &[Vertex]) -> VertexSet {
        VertexSet::new(v.to_vec()).unwrap()
    }

    fn star() -> Hypergraph {
        Hypergraph::new(5, 3, vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 1, 4]]).unwrap()
    }

    #[test]
    fn aux_graph_examples() {
        let h = build_aux_graph(&star(), 4).unwrap();
        assert_eq!(h.tuples(), &[vs(&[0, 1])]);
        let all = build_aux_graph(&star(), 1).unwrap();
        let mut expected: Vec<VertexSet> = star()
            .subset_degrees(2)
            .into_keys()
            .map(VertexSet::from_sorted_unchecked)
            .collect();
        expected.sort();
        assert_eq!(all.tuples(), &expected[..]);
        assert!(build_aux_graph(&star(), 0).is_err());
        // degree 3, threshold sqrt(9) = 3 is inclusive; sqrt(10) is not reached
        assert_eq!(build_aux_graph(&star(), 9).unwrap().len(), 1);
        assert_eq!(build_aux_graph(&star(), 10).unwrap().len(), 0);
    }

    #[test]
    fn clean_examples() {
        let g = star();
        let h = build_aux_graph(&g, 4).unwrap();
        assert_eq!(clean(&vs(&[0, 1, 2]), &g, &h), vs(&[0, 1]));

        let single = Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let empty_h = build_aux_graph(&single, 4).unwrap();
        assert!(empty_h.is_empty());
        assert_eq!(clean(&vs(&[0, 1, 2]), &single, &empty_h), vs(&[0, 1]));

        assert_eq!(clean(&vs(&[0, 2, 3]), &g, &h), vs(&[0, 2, 3]));
    }

    #[test]
    fn clean_prefers_operation_one_over_lexicographic_order() {
        // {0,1,2} has no H-tuple; {1,3,4} has exactly one ({3,4}); vertex 1 goes first.
        let g = Hypergraph::new(6, 3, vec![vec![0, 1, 2], vec![1, 3, 4], vec![2, 3, 4], vec![3, 4, 5]]).unwrap();
        let h = build_aux_graph(&g, 9).unwrap();
        assert_eq!(h.tuples(), &[vs(&[3, 4])]);
        let out = clean(&vs(&[0, 1, 2, 3, 4]), &g, &h);
        // op (i) on {1,3,4} removes 1, killing {0,1,2}; then {2,3,4} removes 2.
        assert_eq!(out, vs(&[0, 3, 4]));
        assert!(g.is_independent(&out));
    }

    #[test]
    fn delete_induced_removes_whole_edges() {
        let g = star();
        let mut cleaner = Cleaner::new(&g);
        assert_eq!(cleaner.delete_induced(&[0, 1, 2, 3]), Vec::<Vertex>::new());
        assert_eq!(cleaner.delete_induced(&[0, 2, 3, 4]), vec![0, 2, 3, 4]);
        assert_eq!(cleaner.delete_induced(&[1, 2, 3]), vec![1, 2, 3]);
    }

    #[test]
    fn aux_degree_bound_on_star() {
        let g = star();
        let d = g.max_degree(1).unwrap();
        let h = build_aux_graph(&g, d).unwrap();
        let bound = (g.k() as u64 - 1).pow(2) * d;
        assert!(h.max_degree().pow(2) <= bound);
    }
}
