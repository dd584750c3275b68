use proptest::prelude::*;

use spanlab::dp::{DpConfig, DpInstance};
use spanlab::exact::{decide_exact, lambda_exact};
use spanlab::io::{parse_gr, write_gr};
use spanlab::mso::{emit_dist2, satisfying_pairs};
use spanlab::tc::lambda_tc;
use spanlab::treedecomp::{heuristic_td, make_nice, square_td, validate_td};
use spanlab::twincover::{is_twin_cover, min_twin_cover, type_partition};
use spanlab::{verify, Graph, Labeling, PqParams};

/// Connected graph on `n` vertices: a spanning path plus the chosen pairs.
fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (Just(n), proptest::collection::vec(any::<bool>(), pairs), Just(()))
            .prop_map(|(n, bits, ())| {
                let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (v - 1, v)).collect();
                let mut i = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[i] {
                            edges.push((u, v));
                        }
                        i += 1;
                    }
                }
                Graph::new(n, edges).unwrap()
            })
    })
}

fn params() -> impl Strategy<Value = PqParams> {
    (1u32..=3, 1u32..=2).prop_map(|(p, q)| PqParams::new(p, q).unwrap())
}

/// Definition-level check over all pairs.
fn valid_by_definition(g: &Graph, f: &Labeling, params: PqParams) -> bool {
    (0..g.n()).all(|u| {
        let d = g.distances_from(u);
        (u + 1..g.n()).all(|v| {
            let gap = f.get(u).abs_diff(f.get(v));
            match d[v] {
                Some(1) => gap >= params.p,
                Some(2) => gap >= params.q,
                _ => true,
            }
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verify_matches_definition(g in connected_graph(8), params in params(), seed in any::<u64>()) {
        let labels = (0..g.n()).map(|v| ((seed >> (v % 16 * 4)) & 7) as u32 + v as u32 % 3).collect();
        let f = Labeling::new(labels);
        prop_assert_eq!(verify(&g, &f, params).unwrap().is_valid(), valid_by_definition(&g, &f, params));
    }

    #[test]
    fn square_decomposition_is_valid_and_bounded(g in connected_graph(14)) {
        let td = heuristic_td(&g).unwrap();
        validate_td(&g, &td).unwrap();
        let sq = square_td(&g, &td).unwrap();
        validate_td(&g.square().base, &sq).unwrap();
        let t = td.width();
        prop_assert!(sq.width() <= (t + 1) * g.max_degree() + t);
    }

    #[test]
    fn nice_decomposition_preserves_width(g in connected_graph(12)) {
        let td = heuristic_td(&g).unwrap();
        let nice = make_nice(&g, &td).unwrap();
        nice.validate(&g).unwrap();
        prop_assert_eq!(nice.width(), td.width());
        prop_assert_eq!(nice.introduced_edges().count(), g.m());
    }

    #[test]
    fn dp_matches_exact(g in connected_graph(8), params in params()) {
        let want = lambda_exact(&g, params).unwrap();
        let (lam, f) = DpInstance::heuristic(&g).unwrap().lambda(&g, params, DpConfig::default()).unwrap();
        prop_assert_eq!(lam, want.0);
        prop_assert!(verify(&g, &f, params).unwrap().is_valid());
        prop_assert!(f.max_label().unwrap() <= lam);
    }

    #[test]
    fn feasibility_is_monotone_in_k(g in connected_graph(7), params in params()) {
        let (lam, _) = lambda_exact(&g, params).unwrap();
        prop_assert!(lam == 0 || decide_exact(&g, params, lam - 1).unwrap().is_none());
        prop_assert!(decide_exact(&g, params, lam + 1).unwrap().is_some());
    }

    #[test]
    fn tc_matches_exact(g in connected_graph(8), p in 1u32..=3) {
        let params = PqParams::new(p, 1).unwrap();
        let (lam, f) = lambda_tc(&g, p).unwrap();
        prop_assert_eq!(lam, lambda_exact(&g, params).unwrap().0);
        prop_assert!(verify(&g, &f, params).unwrap().is_valid());
    }

    #[test]
    fn scaling_identity(g in connected_graph(7), c in 2u32..=3) {
        let base = lambda_exact(&g, PqParams::new(1, 1).unwrap()).unwrap().0;
        prop_assert_eq!(lambda_exact(&g, PqParams::new(c, c).unwrap()).unwrap().0, c * base);
    }

    #[test]
    fn twin_cover_types_are_cliques(g in connected_graph(9)) {
        let x = min_twin_cover(&g).unwrap();
        prop_assert!(is_twin_cover(&g, &x));
        let ctx = type_partition(&g, &x).unwrap();
        for t in &ctx.types {
            for c in &t.cliques {
                for (i, &u) in c.iter().enumerate() {
                    for &v in &c[i + 1..] {
                        prop_assert!(g.has_edge(u, v));
                    }
                }
            }
        }
    }

    #[test]
    fn gr_round_trip(g in connected_graph(12)) {
        prop_assert_eq!(parse_gr(&write_gr(&g)).unwrap(), g);
    }

    #[test]
    fn dist2_formula_matches_bfs(g in connected_graph(8)) {
        prop_assert_eq!(satisfying_pairs(&g, &emit_dist2(), "u", "w").unwrap(), g.distance2_pairs());
    }
}
