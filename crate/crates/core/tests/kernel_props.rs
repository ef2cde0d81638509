use proptest::prelude::*;
use secluded_core::generators::{gen_fuzz_instance, gen_hex_grid, gen_tree_plus_edges};
use secluded_core::graph::{contains_k22, feedback_edge_set, feedback_vertex_set_heuristic, matching_vertex_cover};
use secluded_core::instance::{evaluate_path, lift, SspInstance, VwSspInstance};
use secluded_core::kernel::{
    classify_fvs, fes_applicable_rules, fes_good_vertices, fvs_applicable_rules, kernelize, rr_burn_leaf,
    rr_burn_leaf_fes, rr_connected, rr_delete_trees, rr_forbidden, rr_shrink_edgy, rr_shrink_edgy_fes,
    twin_kernel_bound, Kernel, Pipeline, WorkInstance,
};
use secluded_core::oracle::{brute_force_solve, OracleAnswer};

const CAP: usize = 64;

fn oracle(i: &VwSspInstance) -> OracleAnswer {
    brute_force_solve(i, CAP).unwrap()
}

fn small_instance(n: usize, extra: usize, k: u64, l: u64, seed: u64) -> SspInstance {
    gen_tree_plus_edges(n, extra.min(n * (n - 1) / 2 - (n - 1)), k, l, seed).unwrap()
}

/// The kernel's own optimum must lift to a feasible path of the input.
fn check_lift(i: &SspInstance, kernel: &Kernel) -> Result<(), TestCaseError> {
    let ko = oracle(&kernel.instance);
    if let Some(w) = &ko.witness {
        let lifted = kernel.lift_witness(w).unwrap();
        let (cost, load) = evaluate_path(&lift(i), &lifted).unwrap();
        prop_assert!(cost <= i.k && load <= i.l, "lifted path ({cost}, {load}) over budget");
    }
    Ok(())
}

fn check_pipeline(i: &SspInstance, p: Pipeline) -> Result<(), TestCaseError> {
    let before = oracle(&lift(i));
    let outcome = kernelize(i, p).unwrap();
    let replayed = outcome.trace().replay(&lift(i)).unwrap();
    let Some(kernel) = outcome.kernel() else {
        prop_assert!(!before.answer);
        return Ok(());
    };
    prop_assert_eq!(&replayed, &kernel.instance);
    let e = kernel.expand().unwrap();
    prop_assert_eq!(
        e.instance.graph.n() as u64,
        kernel.instance.kappa.iter().sum::<u64>() + kernel.instance.eta.iter().sum::<u64>()
    );
    let after = oracle(&lift(&e.instance));
    prop_assert_eq!(before.answer, after.answer);
    prop_assert_eq!(before.min_cost, after.min_cost, "min cost");
    check_lift(i, kernel)
}

/// (vertex count, edge count) must drop lexicographically, or only weights may
/// change.
fn progress(before: (usize, usize), w: &WorkInstance) -> bool {
    (w.vertex_count(), w.edge_count()) < before || (w.vertex_count(), w.edge_count()) == before
}

fn prepared(i: &SspInstance) -> Option<WorkInstance> {
    let mut w = WorkInstance::from_instance(&lift(i));
    if rr_connected(&mut w) == secluded_core::kernel::Connectivity::No {
        return None;
    }
    w.compact();
    Some(w)
}

#[test]
fn tree_fes_kernel_is_tiny() {
    for seed in 0..20 {
        let i = gen_tree_plus_edges(60, 0, 30, 10, seed).unwrap();
        let k = kernelize(&i, Pipeline::Fes).unwrap();
        assert!(k.kernel().unwrap().instance.n() <= 9);
    }
}

#[test]
fn fes_kernel_on_sparse_graph() {
    let i = gen_tree_plus_edges(200, 12, 20, 8, 1).unwrap();
    assert_eq!(feedback_edge_set(&i.graph).unwrap().len(), 12);
    let k = kernelize(&i, Pipeline::Fes).unwrap();
    let k = k.kernel().unwrap();
    assert!(k.instance.n() <= 16 * 12 + 9 && k.instance.graph.m() <= 17 * 12 + 8);
    assert!(k.instance.n() < 200);
}

#[test]
fn twin_kernel_respects_bound() {
    let i = gen_hex_grid(8, 8, 20, 10).unwrap();
    let cover = matching_vertex_cover(&i.graph).len();
    let k = kernelize(&i, Pipeline::VcKrr { r: 2 }).unwrap();
    assert!(k.kernel().unwrap().instance.n() as u128 <= twin_kernel_bound(cover, 2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fvs_preserves_answers(n in 2usize..17, extra in 0usize..7, k in 2u64..17, l in 0u64..9, seed in any::<u64>()) {
        check_pipeline(&small_instance(n, extra, k.min(n as u64).max(2), l, seed), Pipeline::Fvs)?;
    }

    #[test]
    fn fes_preserves_answers(n in 2usize..17, extra in 0usize..7, k in 2u64..17, l in 0u64..9, seed in any::<u64>()) {
        check_pipeline(&small_instance(n, extra, k.min(n as u64).max(2), l, seed), Pipeline::Fes)?;
    }

    #[test]
    fn pipelines_preserve_answers_on_mixed_corpus(seed in any::<u64>()) {
        let i = gen_fuzz_instance(seed).unwrap();
        check_pipeline(&i, Pipeline::Fvs)?;
        check_pipeline(&i, Pipeline::Fes)?;
    }

    #[test]
    fn twin_kernel_preserves_answers(n in 2usize..15, extra in 0usize..5, k in 2u64..15, l in 0u64..9, seed in any::<u64>()) {
        let i = small_instance(n, extra, k.min(n as u64).max(2), l, seed);
        if contains_k22(&i.graph) {
            return Ok(());
        }
        let before = oracle(&lift(&i));
        let outcome = kernelize(&i, Pipeline::VcKrr { r: 2 }).unwrap();
        let Some(kernel) = outcome.kernel() else {
            prop_assert!(!before.answer);
            return Ok(());
        };
        prop_assert_eq!(&outcome.trace().replay(&lift(&i)).unwrap(), &kernel.instance);
        prop_assert_eq!(oracle(&kernel.instance).answer, before.answer);
        let cover = matching_vertex_cover(&i.graph).len();
        prop_assert!(kernel.instance.n() as u128 <= twin_kernel_bound(cover, 2));
        check_lift(&i, kernel)?;
    }

    #[test]
    fn fvs_kernel_shape(n in 2usize..40, extra in 0usize..10, k in 2u64..20, l in 0u64..9, seed in any::<u64>()) {
        let i = small_instance(n, extra, k, l, seed);
        if let Some(kernel) = kernelize(&i, Pipeline::Fvs).unwrap().kernel() {
            for &(size, good) in &kernel.stats.tree_sizes {
                prop_assert!(size <= 8 * good);
            }
            prop_assert!(kernel.instance.kappa.iter().all(|&c| c <= i.k + 1));
            prop_assert!(kernel.instance.eta.iter().all(|&e| e <= i.l + 1));
        }
    }

    #[test]
    fn fes_kernel_size(n in 2usize..60, extra in 0usize..15, k in 2u64..30, l in 0u64..9, seed in any::<u64>()) {
        let i = small_instance(n, extra, k, l, seed);
        let fes = i.graph.m() + 1 - i.graph.n();
        if let Some(kernel) = kernelize(&i, Pipeline::Fes).unwrap().kernel() {
            prop_assert!(kernel.instance.n() <= 16 * fes + 9);
            prop_assert!(kernel.instance.graph.m() <= 17 * fes + 8);
        }
    }

    #[test]
    fn fvs_rules_progress_and_exhaust(n in 2usize..30, extra in 0usize..8, k in 2u64..20, l in 0u64..6, seed in any::<u64>()) {
        let i = small_instance(n, extra, k, l, seed);
        let Some(mut w) = prepared(&i) else { return Ok(()); };
        let mut f = feedback_vertex_set_heuristic(&w.graph());
        f.insert(w.s);
        f.insert(w.t);
        let cls = classify_fvs(&w, &f).unwrap();
        rr_forbidden(&mut w, &cls);
        rr_delete_trees(&mut w, &cls);
        let budget = w.vertex_count() + w.edge_count();
        let mut steps = 0;
        loop {
            let before = (w.vertex_count(), w.edge_count());
            if !rr_burn_leaf(&mut w, &cls) {
                break;
            }
            prop_assert!(progress(before, &w));
            steps += 1;
        }
        loop {
            let before = (w.vertex_count(), w.edge_count());
            if !rr_shrink_edgy(&mut w, &cls) {
                break;
            }
            prop_assert!((w.vertex_count(), w.edge_count()) < before);
            steps += 1;
        }
        prop_assert!(steps <= 2 * budget);
        // Shrinking never creates new leaves to burn.
        prop_assert!(fvs_applicable_rules(&w, &cls).is_empty());
    }

    #[test]
    fn fes_rules_progress_and_exhaust(n in 2usize..30, extra in 0usize..8, k in 2u64..20, l in 0u64..6, seed in any::<u64>()) {
        let i = small_instance(n, extra, k, l, seed);
        let Some(mut w) = prepared(&i) else { return Ok(()); };
        let fes = feedback_edge_set(&w.graph()).unwrap();
        let good = fes_good_vertices(&w, &fes);
        loop {
            let before = (w.vertex_count(), w.edge_count());
            if !rr_burn_leaf_fes(&mut w, &good) {
                break;
            }
            prop_assert!(progress(before, &w));
        }
        loop {
            let before = (w.vertex_count(), w.edge_count());
            if !rr_shrink_edgy_fes(&mut w, &good) {
                break;
            }
            prop_assert!((w.vertex_count(), w.edge_count()) < before);
        }
        prop_assert!(fes_applicable_rules(&w, &good).is_empty());
    }
}
