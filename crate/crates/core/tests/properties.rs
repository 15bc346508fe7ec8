use proptest::prelude::*;

use pacsolve::bounds::{lb_trivial, lb_unique_in_arc, obligatory_subgraph, LbKind};
use pacsolve::exec::Exec;
use pacsolve::fpt::{connector_dp, reduce_relevant, solve_minpac, FptConfig};
use pacsolve::generators::{gen_random_fes, gen_random_sc, gen_setcover, Rng};
use pacsolve::graph::{total_cost, verify_solution, Instance, Solution, Weight};
use pacsolve::io;
use pacsolve::kernel::{kernelize_fes, kernelize_vc, lift_solution, preprocess_linear, VcConfig};
use pacsolve::oracle::{oracle_arc_subsets, oracle_count_combinations, oracle_solve, DEFAULT_CAP, MAX_SUBSET_ARCS};

fn opt(g: &Instance) -> Weight {
    oracle_solve(g, DEFAULT_CAP, Exec::Sequential).unwrap().cost
}

fn small_sc() -> impl Strategy<Value = Instance> {
    (2usize..=7, 0.0f64..=1.0, 0u64..=5, any::<u64>()).prop_map(|(n, p, w, seed)| gen_random_sc(n, p, w, seed).unwrap())
}

fn small_fes() -> impl Strategy<Value = Instance> {
    (3usize..=12, 0usize..=3, 0u64..=4, any::<u64>())
        .prop_filter_map("g must fit", |(n, g, w, seed)| gen_random_fes(n, g, w, seed).ok())
        .prop_filter("oracle budget", |g| oracle_count_combinations(g) <= 1 << 18)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn fpt_agrees_with_oracle_for_every_bound(g in small_sc()) {
        let expected = opt(&g);
        for kind in [LbKind::Trivial, LbKind::UniqueIn, LbKind::Both] {
            let out = solve_minpac(&g, &kind.compute(&g), &FptConfig::default()).unwrap();
            prop_assert_eq!(out.solution.cost, expected);
            prop_assert!(verify_solution(&g, &out.solution).is_ok());
        }
    }

    #[test]
    fn sequential_and_parallel_agree(g in small_sc()) {
        let lb = lb_unique_in_arc(&g);
        let seq = FptConfig { exec: Exec::Sequential, ..FptConfig::default() };
        let par = FptConfig { exec: Exec::Parallel, ..FptConfig::default() };
        prop_assert_eq!(solve_minpac(&g, &lb, &seq).unwrap().solution, solve_minpac(&g, &lb, &par).unwrap().solution);
        prop_assert_eq!(
            oracle_solve(&g, DEFAULT_CAP, Exec::Sequential).unwrap(),
            oracle_solve(&g, DEFAULT_CAP, Exec::Parallel).unwrap()
        );
    }

    #[test]
    fn threshold_oracle_matches_arc_subsets(n in 2usize..=5, w in 0u64..=4, seed in any::<u64>()) {
        let g = gen_random_sc(n, 0.4, w, seed).unwrap();
        prop_assume!(g.m() <= MAX_SUBSET_ARCS);
        prop_assert_eq!(oracle_arc_subsets(&g).unwrap(), opt(&g));
    }

    #[test]
    fn lower_bounds_hold_at_every_vertex(g in small_sc()) {
        let sol = oracle_solve(&g, DEFAULT_CAP, Exec::Sequential).unwrap();
        let mut paid = vec![0; g.n()];
        for &(t, h) in &sol.arcs {
            paid[t] = paid[t].max(g.weight(t, h).unwrap());
        }
        let trivial = lb_trivial(&g);
        let unique = lb_unique_in_arc(&g);
        for v in 0..g.n() {
            prop_assert!(trivial.get(v) <= paid[v]);
            prop_assert!(unique.get(v) <= paid[v]);
            prop_assert!(trivial.get(v) <= unique.get(v));
        }
    }

    #[test]
    fn removing_an_arc_never_lowers_opt(g in small_sc(), pick in any::<prop::sample::Index>()) {
        let drop = pick.index(g.m());
        let keep: Vec<usize> = (0..g.m()).filter(|&i| i != drop).collect();
        let h = g.restrict(&keep);
        prop_assume!(h.is_strongly_connected());
        prop_assert!(opt(&h) >= opt(&g));
    }

    #[test]
    fn connector_costs_grow_with_targets(g in small_sc()) {
        let rel = reduce_relevant(&g, &obligatory_subgraph(&g, &lb_trivial(&g)));
        let table = connector_dp(&rel, &FptConfig::default()).unwrap();
        for s in table.iter() {
            let full = s.entry_count();
            for t in 0..full {
                for extra in 0..s.sdom().len() {
                    prop_assert!(s.cost(t) <= s.cost(t | 1 << extra));
                }
            }
        }
    }

    #[test]
    fn relevant_subgraph_keeps_one_arc_per_target(g in small_sc()) {
        let obl = obligatory_subgraph(&g, &lb_trivial(&g));
        let rel = reduce_relevant(&g, &obl);
        let r = rel.reduced();
        let scc = obl.scc();
        for v in 0..r.n() {
            let mut seen = std::collections::HashSet::new();
            for &id in r.out_arcs(v) {
                let a = r.arc(id);
                let (cv, ch) = (scc.component_of(v), scc.component_of(a.head));
                if cv != ch {
                    prop_assert!(seen.insert(ch));
                }
                prop_assert_eq!(g.arc(rel.origin(id)), a);
            }
        }
        prop_assert_eq!(opt(r), opt(&g));
    }

    #[test]
    fn fes_kernel_preserves_opt_and_lifts(g in small_fes()) {
        let (k, j) = kernelize_fes(&g).unwrap();
        let kopt = oracle_solve(&k, DEFAULT_CAP, Exec::Sequential).unwrap();
        let full = opt(&g);
        prop_assert_eq!(kopt.cost + j.offset, full);
        let lifted = lift_solution(&g, &j, &kopt).unwrap();
        prop_assert!(verify_solution(&g, &lifted).is_ok());
        prop_assert_eq!(lifted.cost, full);
    }

    #[test]
    fn preprocessing_preserves_opt(g in small_fes()) {
        let (k, j) = preprocess_linear(&g).unwrap();
        prop_assert_eq!(opt(&k) + j.offset, opt(&g));
        for v in 0..k.n() {
            prop_assert_eq!(k.min_out_weight(v).unwrap_or(0), 0);
        }
    }

    #[test]
    fn vc_kernel_preserves_opt(g in small_sc()) {
        prop_assume!(oracle_count_combinations(&g) <= 1 << 16);
        let (k, j, p) = kernelize_vc(&g, None, VcConfig::default()).unwrap();
        prop_assert!(k.n() <= p.size_bound());
        let kopt = oracle_solve(&k, DEFAULT_CAP, Exec::Sequential).unwrap();
        prop_assert_eq!(kopt.cost + j.offset, opt(&g));
        let lifted = lift_solution(&g, &j, &kopt).unwrap();
        prop_assert_eq!(lifted.cost, kopt.cost + j.offset);
    }

    #[test]
    fn instance_text_round_trips(g in small_sc()) {
        let text = io::write_instance(&g);
        let back = io::parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(io::write_instance(&back), text);
    }

    #[test]
    fn journal_and_solution_text_round_trip(g in small_fes()) {
        let (_, j) = kernelize_fes(&g).unwrap();
        let text = io::write_journal(&j);
        prop_assert_eq!(io::parse_journal(&text).unwrap(), j);
        let sol = oracle_solve(&g, DEFAULT_CAP, Exec::Sequential).unwrap();
        prop_assert_eq!(io::parse_solution(&io::write_solution(&sol), Some(g.n())).unwrap(), sol);
    }

    #[test]
    fn generators_are_deterministic(n in 2usize..=30, seed in any::<u64>()) {
        prop_assert_eq!(gen_random_sc(n, 0.3, 9, seed).unwrap(), gen_random_sc(n, 0.3, 9, seed).unwrap());
        if let Ok(a) = gen_random_fes(n, 1, 9, seed) {
            prop_assert_eq!(a, gen_random_fes(n, 1, 9, seed).unwrap());
        }
    }

    #[test]
    fn rng_bounds(seed in any::<u64>(), n in 1u64..1000, lo in 0u64..50, span in 0u64..50) {
        let mut rng = Rng::new(seed);
        for _ in 0..32 {
            prop_assert!(rng.below(n) < n);
            let x = rng.range(lo, lo + span);
            prop_assert!((lo..=lo + span).contains(&x));
        }
    }
}

#[test]
fn solver_cost_is_recomputable() {
    for seed in 0..40 {
        let g = gen_random_sc(6, 0.5, 7, seed).unwrap();
        let out = solve_minpac(&g, &lb_unique_in_arc(&g), &FptConfig::default()).unwrap();
        let ids = out.solution.arc_ids(&g).unwrap();
        assert_eq!(total_cost(&g, &ids).unwrap(), out.solution.cost);
        assert_eq!(Solution::from_arc_ids(&g, &ids).unwrap(), out.solution);
    }
}

#[test]
fn set_cover_instances_are_one_arc_from_acyclic() {
    let (g, k) = gen_setcover(3, &[vec![1, 2], vec![0, 1]], 2).unwrap();
    assert_eq!((g.n(), g.m(), k), (7, 12, 2));
    // dropping t -> s leaves a DAG: no strongly connected piece bigger than a vertex
    let t_to_s = g.find_arc(1, 0).expect("t -> s");
    let rest: Vec<usize> = (0..g.m()).filter(|&i| i != t_to_s).collect();
    let scc = pacsolve::graph::SccIndex::of_arcs(&g, &rest);
    assert_eq!(scc.count(), g.n());
    assert_eq!(opt(&g), 2);
}
