use modgenus::configuration::sample_pairing;
use modgenus::genus::{envelope, genus_bipartite, genus_bounds_of, genus_complete, EnvelopeKind};
use modgenus::moves::{flip, pants_move_neighbors};
use modgenus::ribbon::{exact_graph_genus, CombinatorialMap, DEFAULT_MAX_DARTS};
use modgenus::{CubicMultigraph, Multigraph, Pairing};
use proptest::prelude::*;

fn graph_of(n: usize, seed: u64) -> CubicMultigraph {
    CubicMultigraph::from_pairing(&sample_pairing(n, seed).unwrap())
}

fn oriented_map(n: usize, seed: u64, mask: u64) -> CombinatorialMap {
    CombinatorialMap::from_pairing_oriented(&sample_pairing(n, seed).unwrap(), |v| mask >> (v % 64) & 1 == 1)
}

fn even_n() -> impl Strategy<Value = usize> {
    (1usize..=10).prop_map(|k| 2 * k)
}

/// Connected simple graph on `n` vertices: the edges selected by `mask`,
/// plus an edge from vertex 0 to each vertex left unreachable.
fn small_graph(n: usize, mask: u32) -> Multigraph {
    let mut g = Multigraph::new(n);
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                g.add_edge(u, v, 1).unwrap();
            }
            bit += 1;
        }
    }
    for v in 1..n {
        if !reachable(&g, v) {
            g.add_edge(0, v, 1).unwrap();
        }
    }
    g
}

fn reachable(g: &Multigraph, target: usize) -> bool {
    let adj = g.simple_adjacency();
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen[target]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pairing_text_round_trip(n in even_n(), seed: u64) {
        let p = sample_pairing(n, seed).unwrap();
        let back: Pairing = p.to_string().parse().unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn multigraph_text_round_trip(n in even_n(), seed: u64) {
        let g = graph_of(n, seed);
        let back: CubicMultigraph = g.to_string().parse().unwrap();
        prop_assert_eq!(back.canonical_code(), g.canonical_code());
        prop_assert_eq!(back.to_multigraph(), g.to_multigraph());
    }

    #[test]
    fn canonical_code_ignores_vertex_labels(
        (n, perm) in even_n().prop_flat_map(|n| (Just(n), Just((0..n).collect::<Vec<_>>()).prop_shuffle())),
        seed: u64,
    ) {
        let g = graph_of(n, seed);
        let h = g.relabeled(&perm);
        prop_assert_eq!(h.canonical_code(), g.canonical_code());
        prop_assert_eq!(h.automorphism_count(), g.automorphism_count());
        prop_assert_eq!(h.is_connected(), g.is_connected());
        prop_assert_eq!(h.is_simple(), g.is_simple());
    }

    #[test]
    fn map_invariants_ignore_dart_labels(
        (n, perm) in (1usize..=8).prop_flat_map(|k| {
            let n = 2 * k;
            (Just(n), Just((0..3 * n).collect::<Vec<_>>()).prop_shuffle())
        }),
        seed: u64,
        mask: u64,
    ) {
        let m = oriented_map(n, seed, mask);
        let r = m.relabeled(&perm);
        prop_assert_eq!(r.surface_invariants().unwrap(), m.surface_invariants().unwrap());
        prop_assert_eq!(r.canonical_code(), m.canonical_code());
        prop_assert_eq!(r.automorphism_count(), m.automorphism_count());
        let back: CombinatorialMap = r.to_string().parse().unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn euler_identity(n in even_n(), seed: u64, mask: u64) {
        let m = oriented_map(n, seed, mask);
        let inv = m.surface_invariants().unwrap();
        prop_assert_eq!(inv.n_arcs * 2, 3 * n);
        let lhs = inv.n_punctures as i64 - inv.n_arcs as i64 + n as i64;
        prop_assert_eq!(lhs, 2 * inv.n_components as i64 - 2 * inv.genus as i64);
        let g = CubicMultigraph::from_pairing(&sample_pairing(n, seed).unwrap());
        prop_assert_eq!(inv.n_components, g.components().len());
    }

    #[test]
    fn flips_preserve_surface(n in even_n(), seed: u64, mask: u64, pick: usize) {
        let m = oriented_map(n, seed, mask);
        let arcs = m.arcs();
        let arc = arcs[pick % arcs.len()];
        if let Ok(f) = flip(&m, arc) {
            prop_assert_eq!(f.surface_invariants().unwrap(), m.surface_invariants().unwrap());
            prop_assert_eq!(flip(&f, arc).unwrap().canonical_code(), m.canonical_code());
        }
    }

    #[test]
    fn pants_moves_keep_size(n in (1usize..=5).prop_map(|k| 2 * k), seed: u64) {
        let g = graph_of(n, seed);
        prop_assume!(g.is_connected());
        for o in pants_move_neighbors(&g).unwrap() {
            prop_assert_eq!(o.result.n_vertices(), n);
            prop_assert!(o.site.0 < o.site.1 && g.mate(o.site.0) == o.site.1);
        }
    }

    #[test]
    fn bounds_bracket_exact_genus(n in 3usize..=6, mask in 0u32..(1 << 15)) {
        let g = small_graph(n, mask & ((1 << (n * (n - 1) / 2)) - 1));
        prop_assert!(g.is_connected());
        let report = genus_bounds_of(&g).unwrap();
        prop_assert!(report.lower <= report.upper);
        let exact = exact_graph_genus(&g, DEFAULT_MAX_DARTS).unwrap();
        prop_assert!(report.brackets(exact as u64), "{:?} vs {}", report, exact);
    }

    #[test]
    fn extra_loops_and_parallels_leave_bounds(n in 3usize..=7, mask in 0u32..(1 << 21), extra in 0usize..6) {
        let g = small_graph(n, mask & ((1u32 << (n * (n - 1) / 2)) - 1));
        let mut h = g.clone();
        for i in 0..extra {
            h.add_loop(i % n).unwrap();
        }
        let (u, v, _) = g.edges().next().unwrap();
        h.add_edge(u, v, 2).unwrap();
        prop_assert_eq!(genus_bounds_of(&h).unwrap(), genus_bounds_of(&g).unwrap());
    }

    #[test]
    fn closed_forms_are_monotone(a in 3u64..200, b in 2u64..200) {
        prop_assert!(genus_complete(a).unwrap() <= genus_complete(a + 1).unwrap());
        prop_assert!(genus_bipartite(a, b).unwrap() <= genus_bipartite(a + 1, b).unwrap());
        prop_assert_eq!(genus_bipartite(a, b).unwrap(), genus_bipartite(b, a).unwrap());
    }

    #[test]
    fn envelopes_are_finite_and_increasing(arg in 4u64..5000) {
        for kind in EnvelopeKind::ALL {
            let now = envelope(kind, arg).unwrap().log_value;
            let next = envelope(kind, arg + 1).unwrap().log_value;
            prop_assert!(now.is_finite() && next.is_finite());
            prop_assert!(next > now, "{:?} at {}", kind, arg);
        }
    }
}
