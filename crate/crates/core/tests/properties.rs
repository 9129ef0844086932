mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use theta_lab::combinatorics::binomial;
use theta_lab::cover::{
    cover_to_representation, project_representation, representation_to_cover, verify_clique_cover, verify_theta_cover,
};
use theta_lab::exact::{
    cc_exact, independence_number, representation_search, theta_exact, vartheta_exact, SolveLimits,
};
use theta_lab::gens::{
    clique_size, gen_balanced_hard, gen_blowup_even, gen_linear_kpartite, gen_partial_steiner, gen_random_bounded,
};
use theta_lab::randcover::{balanced_cover, build_aux_graph, clean, general_cover, BalancedConfig, GeneralConfig};
use theta_lab::{CliqueCover, CoverCertificate, Hypergraph, Vertex, VertexSet};

use common::*;

/// `(n, k, density, seed)` turned into a random hypergraph.
fn hypergraph(max_n: usize, ks: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Hypergraph> {
    (ks, 0.0f64..1.0, any::<u64>()).prop_flat_map(move |(k, density, seed)| {
        (Just(k), k..=max_n.max(k), Just(density), Just(seed))
            .prop_map(|(k, n, density, seed)| random_hypergraph(&mut ChaCha8Rng::seed_from_u64(seed), n, k, density))
    })
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

fn vs(v: Vec<Vertex>) -> VertexSet {
    VertexSet::new(v).unwrap()
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn degree_sums(g in hypergraph(9, 2..=4)) {
        let k = g.k() as u64;
        let singles: u64 = (0..g.n() as Vertex).map(|v| g.degree(&vs(vec![v])).unwrap()).sum();
        prop_assert_eq!(singles, k * g.num_edges() as u64);
        let full: u64 = subsets(&all_vertices(g.n()), g.k()).into_iter().map(|s| g.degree(&vs(s)).unwrap()).sum();
        prop_assert_eq!(full, g.num_edges() as u64);
    }

    #[test]
    fn degree_profile_is_monotone_and_capped(g in hypergraph(9, 2..=4)) {
        let (n, k) = (g.n() as u64, g.k());
        for i in 1..k {
            let di = g.max_degree(i).unwrap();
            prop_assert!(di >= g.max_degree(i + 1).unwrap());
            prop_assert!(di <= binomial(n - i as u64, (k - i) as u64).unwrap());
            prop_assert_eq!(di, brute_max_degree(&g, i));
        }
    }

    #[test]
    fn double_complement(g in hypergraph(8, 2..=4)) {
        prop_assert_eq!(g.complement().complement(), g.clone());
        prop_assert_eq!(g.num_complement_edges().unwrap() as usize + g.num_edges(), binomial(g.n() as u64, g.k() as u64).unwrap() as usize);
    }

    #[test]
    fn clique_test_matches_subset_enumeration(g in hypergraph(12, 2..=3), mask in any::<u64>()) {
        let c: Vec<Vertex> = (0..g.n() as Vertex).filter(|v| mask >> v & 1 == 1).collect();
        prop_assume!(c.len() >= g.k());
        let edges = edge_set(&g);
        let expected = subsets(&c, g.k()).iter().all(|s| edges.contains(s));
        prop_assert_eq!(g.is_clique(&vs(c)).unwrap(), expected);
    }

    #[test]
    fn vertex_degree_counting_identity(g in hypergraph(10, 2..=4)) {
        let k = g.k();
        let tuples = g.subset_degrees(k - 1);
        for v in 0..g.n() as Vertex {
            let lhs = (k as u64 - 1) * g.degree(&vs(vec![v])).unwrap();
            let rhs: u64 = tuples.iter().filter(|(s, _)| s.contains(&v)).map(|(_, &d)| d).sum();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn text_round_trip(g in hypergraph(10, 2..=4)) {
        let header = vec![("generator".to_string(), "test".to_string())];
        let (back, parsed_header) = Hypergraph::parse(&g.to_text(&header)).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(parsed_header, header);
        prop_assert_eq!(back.fingerprint(), g.fingerprint());
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn representation_and_clique_cover_agree(g in hypergraph(6, 2..=3)) {
        let limits = SolveLimits::default();
        let cc = cc_exact(&g, &limits).unwrap();
        let rep = representation_search(&g, g.num_edges()).unwrap().unwrap();
        prop_assert_eq!(rep.t, cc.size);
        prop_assert_eq!(theta_exact(&g, &limits).unwrap().value, cc.size);
        prop_assert_eq!(oracle_theta(&g), cc.size);
        prop_assert!(cover_to_representation(&g, &cc.cover).unwrap().t <= cc.size);
        prop_assert!(representation_to_cover(&g, &rep).unwrap().len() <= rep.t);
    }

    #[test]
    fn theta_cover_is_clique_cover_of_complement(g in hypergraph(7, 2..=3), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = vartheta_exact(&g, &SolveLimits::default()).unwrap().certificate;
        let mut sets: Vec<VertexSet> = Vec::new();
        for s in &base.independent_sets {
            if rng.gen_bool(0.8) {
                sets.push(s.clone());
            }
            if rng.gen_bool(0.3) {
                sets.push(VertexSet::from_unsorted(s.iter().filter(|_| rng.gen_bool(0.7))));
            }
        }
        if rng.gen_bool(0.3) {
            sets.push(VertexSet::from_unsorted((0..g.n() as Vertex).filter(|_| rng.gen_bool(0.5))));
        }
        let cert = CoverCertificate::new(sets.clone(), g.fingerprint());
        let as_cliques = CliqueCover { cliques: sets.into_iter().filter(|s| s.len() >= g.k()).collect() };
        let complement = g.complement();
        prop_assert_eq!(
            verify_theta_cover(&g, &cert).is_ok(),
            verify_clique_cover(&complement, &as_cliques).is_ok()
        );
        prop_assert_eq!(
            verify_theta_cover(&g, &cert).is_ok(),
            check_independent_cover(&g, &cert.independent_sets.iter().map(|s| s.as_slice().to_vec()).collect::<Vec<_>>()).is_ok()
        );
    }

    #[test]
    fn projection_of_blowup_certificates(f in hypergraph(6, 2..=2), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = gen_blowup_even(&f, 2).unwrap();
        let b = &inst.hypergraph;
        // Any valid cover projects, so a short budget is enough.
        let quick = SolveLimits { time_budget: std::time::Duration::from_millis(100), ..SolveLimits::default() };
        let mut cert = vartheta_exact(b, &quick).unwrap().certificate;
        let mut extra = Vec::new();
        for s in &cert.independent_sets {
            if rng.gen_bool(0.5) {
                extra.push(VertexSet::from_unsorted(s.iter().filter(|_| rng.gen_bool(0.5))));
            }
        }
        cert.independent_sets.extend(extra);
        let proj = project_representation(b, &inst.parts, &cert).unwrap();
        prop_assert_eq!(proj.t(), cert.t());
        prop_assert!(verify_theta_cover(&f, &proj).is_ok());
    }

    #[test]
    fn vartheta_is_dual_to_clique_cover(g in hypergraph(7, 2..=3)) {
        let limits = SolveLimits::default();
        let v = vartheta_exact(&g, &limits).unwrap();
        let cc = cc_exact(&g.complement(), &limits).unwrap();
        prop_assert_eq!(v.size, cc.size);
    }

    #[test]
    fn vartheta_counting_lower_bound(g in hypergraph(7, 2..=3)) {
        let v = vartheta_exact(&g, &SolveLimits::default()).unwrap().size as u64;
        let alpha = brute_alpha(&g) as u64;
        let per_set = binomial(alpha, g.k() as u64).unwrap();
        prop_assert!(v * per_set >= g.num_complement_edges().unwrap());
        prop_assert_eq!(v == 0, g.num_complement_edges().unwrap() == 0);
    }

    #[test]
    fn cover_sets_are_independent_even_when_incomplete(n in 8usize..30, d in 3usize..8, k in 3usize..=4, seed in any::<u64>(), cap in 1u64..200_000) {
        let g = gen_random_bounded(n, d, k, seed).unwrap();
        let mut cfg = GeneralConfig::new(d as u64, seed);
        cfg.t_cap = Some(cap);
        let run = general_cover(&g, &cfg).unwrap();
        prop_assert!(run.trials <= cap);
        for s in &run.certificate.independent_sets {
            prop_assert!(g.is_independent(s));
        }
        let balanced_d = (d * d) as u64;
        if g.is_d_balanced(balanced_d) {
            let mut cfg = BalancedConfig::new(balanced_d, seed);
            cfg.t_cap = Some(cap);
            let run = balanced_cover(&g, &cfg).unwrap();
            for s in &run.certificate.independent_sets {
                prop_assert!(g.is_independent(s));
            }
        }
    }

    #[test]
    fn cover_runs_are_deterministic(n in 8usize..20, seed in any::<u64>()) {
        let g = gen_random_bounded(n, 4, 3, seed).unwrap();
        let mut cfg = GeneralConfig::new(4, seed);
        cfg.t_cap = Some(1_000_000);
        let a = general_cover(&g, &cfg).unwrap();
        let b = general_cover(&g, &cfg).unwrap();
        prop_assert_eq!(a.certificate.to_text(), b.certificate.to_text());
        prop_assert_eq!(a.trials, b.trials);
    }

    #[test]
    fn clean_yields_independent_subset(g in hypergraph(12, 2..=4), mask in any::<u64>(), d in 1u64..20) {
        let h = build_aux_graph(&g, d).unwrap();
        let w = vs((0..g.n() as Vertex).filter(|v| mask >> v & 1 == 1).collect());
        let out = clean(&w, &g, &h);
        prop_assert!(out.is_subset_of(&w));
        prop_assert!(g.is_independent(&out));
    }

    #[test]
    fn clean_keeps_protected_non_edges(n in 7usize..14, d in 3usize..9, k in 3usize..=4, seed in any::<u64>()) {
        prop_assume!(n > k);
        let g = gen_random_bounded(n, d, k, seed).unwrap();
        let dd = brute_max_degree(&g, 1).max(3);
        let aux = brute_aux(&g, dd);
        let h = build_aux_graph(&g, dd).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let edges = edge_set(&g);
        let non_edges: Vec<Vec<Vertex>> = subsets(&all_vertices(n), k).into_iter().filter(|s| !edges.contains(s)).collect();
        prop_assume!(!non_edges.is_empty());
        let e = non_edges[rng.gen_range(0..non_edges.len())].clone();
        let mut w: Vec<Vertex> = (0..n as Vertex).filter(|v| e.contains(v) || rng.gen_bool(0.6)).collect();
        // drop outside vertices until no edge or aux tuple crosses e in a forbidden way
        loop {
            let offending = g.edges()
                .filter(|x| x.iter().all(|v| w.contains(v)))
                .map(<[Vertex]>::to_vec)
                .filter(|x| {
                    let s: Vec<Vertex> = x.iter().copied().filter(|v| e.contains(v)).collect();
                    !s.is_empty() && !aux.contains(&s)
                })
                .chain(aux.iter().filter(|t| t.iter().all(|v| w.contains(v))).filter(|t| {
                    let inside = t.iter().filter(|v| e.contains(v)).count();
                    inside >= 1 && inside <= k - 2
                }).cloned())
                .next();
            match offending {
                Some(x) => {
                    let out = *x.iter().find(|v| !e.contains(v)).unwrap();
                    w.retain(|&v| v != out);
                }
                None => break,
            }
        }
        let out = clean(&vs(w), &g, &h);
        prop_assert!(e.iter().all(|&v| out.contains(v)));
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn generators_are_pure(seed in any::<u64>()) {
        prop_assert_eq!(gen_random_bounded(25, 5, 3, seed).unwrap(), gen_random_bounded(25, 5, 3, seed).unwrap());
        prop_assert_eq!(gen_partial_steiner(25, 3, seed).unwrap(), gen_partial_steiner(25, 3, seed).unwrap());
        prop_assert_eq!(gen_linear_kpartite(30, 6, 3, seed).unwrap(), gen_linear_kpartite(30, 6, 3, seed).unwrap());
        prop_assert_eq!(gen_balanced_hard(90, 8, 3, seed).unwrap(), gen_balanced_hard(90, 8, 3, seed).unwrap());
    }

    #[test]
    fn balanced_hard_degree_structure(seed in any::<u64>(), which in 0usize..4) {
        let (n, d, k) = [(24usize, 6usize, 2usize), (24, 4, 2), (27, 14, 3), (27, 18, 3)][which];
        let g = gen_balanced_hard(n, d, k, seed).unwrap().hypergraph;
        let p = clique_size(d, k);
        let m = n / k;
        let block = |v: Vertex| (v as usize / m, (v as usize % m) / p);
        for (pair, deg) in g.subset_degrees(2) {
            if pair.len() == 2 && block(pair[0]).0 != block(pair[1]).0 {
                prop_assert!(deg <= 1);
            }
        }
        for i in 2..k {
            for (s, deg) in g.subset_degrees(i) {
                let b = block(s[0]);
                if s.iter().all(|&v| block(v) == b) {
                    prop_assert_eq!(deg, binomial((p - i) as u64, (k - i) as u64).unwrap());
                }
            }
        }
        if p >= k {
            for v in 0..n as Vertex {
                prop_assert!(g.degree(&vs(vec![v])).unwrap() >= binomial(p as u64 - 1, k as u64 - 1).unwrap());
            }
        }
        if n <= 24 {
            let alpha = independence_number(&g, &SolveLimits { max_vertices: 24, ..SolveLimits::default() }).unwrap();
            prop_assert!(alpha.value * p <= (k - 1) * n);
        }
    }
}
