use proptest::prelude::*;
use secluded_core::format::{parse_instance, write_instance, write_ssp, InstanceFile};
use secluded_core::generators::{
    construct_tw_crosscomp, construct_vc_ppt, gen_fuzz_instance, gen_grid, gen_hex_grid, gen_mcc_random,
    gen_partial_ktree, gen_tree_plus_edges, p_connect, BinaryGadget, MccInstance,
};
use secluded_core::graph::{feedback_edge_set, Graph};
use secluded_core::instance::{lift, PathWitness, VwSspInstance};
use secluded_core::treedecomp::heuristic_decomposition;
use secluded_core::oracle::{brute_force_mcc, brute_force_solve};
use secluded_core::{solve_with_heuristic, SolveOptions};

fn two_colorable(g: &Graph) -> bool {
    let mut color = vec![None; g.n()];
    for start in 0..g.n() {
        if color[start].is_some() {
            continue;
        }
        color[start] = Some(false);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let c = color[v].unwrap();
            for &w in g.neighbors(v) {
                match color[w] {
                    None => {
                        color[w] = Some(!c);
                        stack.push(w);
                    }
                    Some(x) if x == c => return false,
                    _ => {}
                }
            }
        }
    }
    true
}

fn binom2(k: usize) -> usize {
    k * (k - 1) / 2
}

#[test]
fn gadget_attachment_examples() {
    let g8 = BinaryGadget::new((10..16).collect(), 8).unwrap();
    let targets: Vec<usize> = p_connect(0, &g8, 5).unwrap().iter().map(|e| e.1).collect();
    assert_eq!(targets, vec![10, 12, 14]);
    let g2 = BinaryGadget::new(vec![7, 8], 2).unwrap();
    assert_eq!(p_connect(0, &g2, 0).unwrap(), vec![(0, 8)]);
    assert!(BinaryGadget::new(vec![1, 2, 3], 4).is_err());
    assert!(BinaryGadget::new(vec![1, 2], 3).is_err());
}

#[test]
fn colorful_clique_reference() {
    let complete = gen_mcc_random(4, 3, 1.0, 0);
    assert!(brute_force_mcc(&complete, 8).unwrap());
    let empty_class = MccInstance {
        graph: Graph::from_edges(3, [(0, 1)]).unwrap(),
        classes: vec![vec![0], vec![1], vec![2]],
    };
    assert!(!brute_force_mcc(&empty_class, 8).unwrap());
    let holey = MccInstance {
        graph: Graph::empty(2),
        classes: vec![vec![0, 1], vec![]],
    };
    assert!(!brute_force_mcc(&holey, 8).unwrap());
    assert!(brute_force_mcc(&gen_mcc_random(2, 9, 1.0, 0), 8).is_err());
    for seed in 0..40 {
        let g = gen_mcc_random(3, 3, 0.4, seed);
        let triangle = (0..3).any(|a| (3..6).any(|b| (6..9).any(|c| {
            g.graph.has_edge(a, b) && g.graph.has_edge(b, c) && g.graph.has_edge(a, c)
        })));
        assert_eq!(brute_force_mcc(&g, 8).unwrap(), triangle);
    }
}

#[test]
fn prefix_load_is_not_monotone() {
    // The prefix {s} already sees two vertices, the full path only one.
    let g = Graph::from_edges(4, [(0, 1), (0, 2), (1, 3), (1, 2)]).unwrap();
    let i = VwSspInstance::new(g, 0, 3, 3, 1, vec![1; 4], vec![1; 4], vec![0; 4]).unwrap();
    let a = brute_force_solve(&i, 10).unwrap();
    assert_eq!((a.answer, a.min_cost, a.best_load), (true, Some(3), Some(1)));
    assert_eq!(a.witness, Some(PathWitness(vec![0, 1, 3])));
    assert!(solve_with_heuristic(&i, SolveOptions::default()).unwrap().answer);
}

#[test]
fn oracle_cap_is_enforced() {
    let i = lift(&gen_tree_plus_edges(30, 0, 5, 5, 0).unwrap());
    assert!(brute_force_solve(&i, 20).is_err());
    assert!(brute_force_solve(&i, 30).is_ok());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn generators_are_deterministic(seed in any::<u64>(), n in 2usize..40, extra in 0usize..10) {
        let extra = extra.min(n * (n - 1) / 2 - (n - 1));
        let a = gen_tree_plus_edges(n, extra, 5, 3, seed).unwrap();
        prop_assert_eq!(&a, &gen_tree_plus_edges(n, extra, 5, 3, seed).unwrap());
        prop_assert_eq!(feedback_edge_set(&a.graph).unwrap().len(), extra);
        prop_assert_eq!(a.graph.m(), n - 1 + extra);
        prop_assert!(a.graph.is_connected());
        prop_assert_eq!(gen_partial_ktree(n.max(4), 3, 0.5, 5, 3, seed).unwrap(), gen_partial_ktree(n.max(4), 3, 0.5, 5, 3, seed).unwrap());
        prop_assert_eq!(gen_mcc_random(3, 3, 0.5, seed), gen_mcc_random(3, 3, 0.5, seed));
        prop_assert_eq!(gen_fuzz_instance(seed).unwrap(), gen_fuzz_instance(seed).unwrap());
    }

    #[test]
    fn grid_shapes(w in 1usize..8, h in 1usize..8) {
        prop_assume!(w * h >= 2);
        let g = gen_grid(w, h, 3, 3).unwrap().graph;
        prop_assert_eq!(g.n(), w * h);
        prop_assert_eq!(g.m(), (w - 1) * h + w * (h - 1));
        prop_assert!(two_colorable(&g));
        let x = gen_hex_grid(w, h, 3, 3).unwrap().graph;
        prop_assert!(x.is_connected());
        prop_assert!((0..x.n()).all(|v| x.degree(v) <= 3));
        prop_assert!(two_colorable(&x));
    }

    #[test]
    fn gadget_encodings_are_distinct(b in 1usize..5) {
        let z = 1 << b;
        let g = BinaryGadget::new((0..2 * b).collect(), z).unwrap();
        let mut seen = std::collections::HashSet::new();
        for p in 0..z {
            let t: Vec<usize> = p_connect(100, &g, p).unwrap().iter().map(|e| e.1).collect();
            prop_assert_eq!(t.len(), b);
            for q in 0..b {
                prop_assert!(t.contains(&q) != t.contains(&(b + q)));
            }
            prop_assert!(seen.insert(t));
        }
    }

    #[test]
    fn clique_construction_shape_and_answer(k in 2usize..4, size in 1usize..4, p in 0.0f64..1.0, seed in any::<u64>()) {
        let g = gen_mcc_random(k, size, p, seed);
        let (inst, layout) = construct_vc_ppt(&g).unwrap();
        let bits = layout.class_size.trailing_zeros() as usize;
        let pairs = binom2(k);
        prop_assert_eq!(layout.connectors.len(), pairs - 1);
        prop_assert_eq!(layout.gadgets.iter().map(|b| b.vertices.len()).sum::<usize>(), 2 * k * bits);
        prop_assert_eq!(layout.edge_vertices.len(), g.graph.m());
        prop_assert_eq!(inst.k, (2 * pairs + 1) as u64);
        prop_assert_eq!(inst.l, (g.graph.m() + k * bits - pairs) as u64);
        prop_assert_eq!(layout.pendants, 2 * k * bits * (inst.l as usize + 1));
        prop_assert_eq!(inst.graph.n(), 2 + pairs - 1 + 2 * k * bits + g.graph.m() + layout.pendants);
        prop_assert!(two_colorable(&inst.graph));
        let expected = brute_force_mcc(&g, 8).unwrap();
        prop_assert_eq!(brute_force_solve(&lift(&inst), 10_000).unwrap().answer, expected);
        if heuristic_decomposition(&inst.graph).unwrap().width() <= 7 {
            let got = solve_with_heuristic(&lift(&inst), SolveOptions::default()).unwrap();
            prop_assert_eq!(got.answer, expected);
        }
    }

    #[test]
    fn composition_is_an_or(copies in 1usize..4, n in 3usize..7, k in 2u64..6, l in 0u64..4, seed in any::<u64>()) {
        let parts: Vec<_> = (0..copies as u64)
            .map(|i| gen_tree_plus_edges(n, 1.min(n * (n - 1) / 2 - (n - 1)), k.min(n as u64), l, seed.wrapping_add(i)).unwrap())
            .collect();
        let any = parts.iter().any(|p| brute_force_solve(&lift(p), 64).unwrap().answer);
        let (inst, layout) = construct_tw_crosscomp(&parts).unwrap();
        let d = layout.depth as u64;
        prop_assert_eq!(inst.k, k.min(n as u64) + 2 * d + 2);
        prop_assert_eq!(inst.l, l + 2 * d);
        prop_assert_eq!(brute_force_solve(&lift(&inst), 256).unwrap().answer, any);
        prop_assert_eq!(solve_with_heuristic(&lift(&inst), SolveOptions::default()).unwrap().answer, any);
    }

    #[test]
    fn oracle_ignores_labels(seed in any::<u64>(), perm in proptest::collection::vec(any::<u32>(), 16)) {
        let i = lift(&gen_fuzz_instance(seed).unwrap());
        let n = i.n();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (perm[v % 16], v));
        let mut to = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            to[old] = new;
        }
        let edges = i.graph.edges().iter().map(|&(u, v)| (to[u], to[v]));
        let remap = |w: &Vec<u64>| {
            let mut out = vec![0; n];
            for v in 0..n {
                out[to[v]] = w[v];
            }
            out
        };
        let j = VwSspInstance::new(
            Graph::from_edges(n, edges).unwrap(), to[i.s], to[i.t], i.k, i.l,
            remap(&i.kappa), remap(&i.lambda), remap(&i.eta),
        ).unwrap();
        let a = brute_force_solve(&i, 64).unwrap();
        let b = brute_force_solve(&j, 64).unwrap();
        prop_assert_eq!((a.answer, a.min_cost, a.best_load), (b.answer, b.min_cost, b.best_load));
        prop_assert_eq!(&a, &brute_force_solve(&i, 64).unwrap());
    }

    #[test]
    fn files_round_trip(seed in any::<u64>(), weights in proptest::collection::vec((1u64..5, 0u64..4, 0u64..4), 16)) {
        let i = gen_fuzz_instance(seed).unwrap();
        let plain = InstanceFile::Ssp(i.clone());
        prop_assert_eq!(parse_instance(&write_ssp(&i)).unwrap(), plain);
        let mut w = lift(&i);
        for v in 0..w.n() {
            (w.kappa[v], w.lambda[v], w.eta[v]) = weights[v % 16];
            w.kappa[v] = w.kappa[v].min(w.k + 1);
            w.lambda[v] = w.lambda[v].min(w.l + 1);
            w.eta[v] = w.eta[v].min(w.l + 1);
        }
        let file = InstanceFile::Weighted(w);
        prop_assert_eq!(parse_instance(&write_instance(&file)).unwrap(), file);
    }
}

/// The quoted composition budgets leave no room for the two tree leaves, so
/// this only passes if the construction is changed to match them.
#[test]
#[ignore]
fn composition_uses_quoted_budgets() {
    let parts: Vec<_> = (0..2).map(|j| gen_tree_plus_edges(5, 1, 4, 2, j).unwrap()).collect();
    let (inst, layout) = construct_tw_crosscomp(&parts).unwrap();
    let (k, l) = layout.stated_budgets(4, 2);
    assert_eq!((inst.k, inst.l as i64), (k, l));
}
