//! Cross-module checks against independently derived answers: closed-form
//! coloring counts, exhaustive re-classification, brute-force order search,
//! matrix-power comparisons for simulation, and flow/chain consistency.

mod common;

use std::collections::BTreeSet;

use colorsampler_core::chain::{
    exact_mixing_time, theoretical_tau_bound, tv_distance, ChainConfig, ChainKind,
    TransitionMatrix, DEFAULT_MATRIX_BUDGET, DEFAULT_MIXING_CAP,
};
use colorsampler_core::coloring::{
    available_colors, classify, greedy_proper_coloring, monochromatic_edges, Coloring,
};
use colorsampler_core::flow::route_all_flows;
use colorsampler_core::graph::{
    find_minimal_order, Graph, LinearOrder, SeparatorSchedule, DEFAULT_ORDER_SEARCH_CAP,
};
use colorsampler_core::space::{
    repair_flawed, FlawRepairMap, StateSpace, DEFAULT_ENUMERATION_BUDGET,
};
use colorsampler_core::BigRational;
use num_traits::Zero;

fn space(g: &Graph, k: usize) -> StateSpace {
    StateSpace::enumerate(g, k, DEFAULT_ENUMERATION_BUDGET).unwrap()
}

fn sf(k: usize) -> ChainConfig {
    ChainConfig {
        kind: ChainKind::SingleFlaw,
        k,
    }
}

fn falling_factorial(k: usize, n: usize) -> usize {
    (0..n).map(|i| k - i).product()
}

/// Proper-coloring counts match the classical closed forms for paths,
/// cycles, stars, and complete graphs.
#[test]
fn proper_counts_match_closed_forms() {
    for n in 2..=5 {
        for k in 3usize..=5 {
            let g = Graph::path(n).unwrap();
            let expect = k * (k - 1).pow(n as u32 - 1);
            assert_eq!(space(&g, k).num_proper(), expect, "path n={n} k={k}");
        }
    }
    for n in 3..=5 {
        for k in 3usize..=5 {
            let g = Graph::cycle(n).unwrap();
            let sign = if n % 2 == 0 { 1i64 } else { -1 };
            let expect = ((k as i64 - 1).pow(n as u32) + sign * (k as i64 - 1)) as usize;
            assert_eq!(space(&g, k).num_proper(), expect, "cycle n={n} k={k}");
        }
    }
    for leaves in 2..=4 {
        for k in 3usize..=5 {
            let g = Graph::star(leaves).unwrap();
            let expect = k * (k - 1).pow(leaves as u32);
            assert_eq!(space(&g, k).num_proper(), expect, "star {leaves} k={k}");
        }
    }
    for n in 2..=4 {
        for k in n..=n + 2 {
            let g = Graph::complete(n).unwrap();
            assert_eq!(
                space(&g, k).num_proper(),
                falling_factorial(k, n),
                "complete n={n} k={k}"
            );
        }
    }
}

/// A coloring belongs to the sampler's state space exactly when it is
/// proper or one single-vertex recoloring away from proper — an
/// independent reading of the membership rule, checked exhaustively.
#[test]
fn membership_matches_single_recoloring_repairability() {
    let instances = [
        (Graph::path(3).unwrap(), 4usize),
        (Graph::complete(3).unwrap(), 5),
        (Graph::cycle(4).unwrap(), 4),
        (Graph::path(4).unwrap(), 4),
        (Graph::star(3).unwrap(), 5),
    ];
    for (g, k) in instances {
        let sp = space(&g, k);
        for vec in common::all_color_vectors(g.n(), k) {
            let sigma = Coloring::new(vec);
            let proper = monochromatic_edges(&g, &sigma).is_empty();
            let repairable = proper
                || g.vertices().any(|v| {
                    available_colors(&g, &sigma, v, k)
                        .into_iter()
                        .any(|c| monochromatic_edges(&g, &sigma.recolored(v, c)).is_empty())
                });
            let class = classify(&g, &sigma);
            assert_eq!(
                class.in_state_space(),
                repairable,
                "membership mismatch for {:?} on n={} k={}",
                sigma.colors(),
                g.n(),
                k
            );
            assert_eq!(class.is_proper(), proper);
            assert_eq!(sp.index_of(&sigma).is_some(), repairable);
        }
    }
}

/// The flawed block never outnumbers `k * n` copies of the proper block.
#[test]
fn flawed_count_bounded_by_kn_times_proper() {
    let instances = [
        (Graph::path(3).unwrap(), 4usize),
        (Graph::complete(3).unwrap(), 4),
        (Graph::cycle(4).unwrap(), 4),
        (Graph::path(4).unwrap(), 4),
        (Graph::star(3).unwrap(), 5),
        (Graph::complete(4).unwrap(), 6),
    ];
    for (g, k) in instances {
        let sp = space(&g, k);
        assert!(
            sp.num_singly_flawed() <= k * g.n() * sp.num_proper(),
            "count bound fails on n={} k={}",
            g.n(),
            k
        );
    }
}

/// Recoloring any flawed vertex with any of its available colors repairs a
/// singly-flawed state, not just the canonical smallest choice.
#[test]
fn every_flawed_vertex_choice_repairs() {
    let instances = [
        (Graph::path(3).unwrap(), 4usize),
        (Graph::complete(3).unwrap(), 4),
        (Graph::cycle(4).unwrap(), 4),
    ];
    for (g, k) in instances {
        let sp = space(&g, k);
        for i in sp.num_proper()..sp.len() {
            let sigma = sp.state(i);
            let colorsampler_core::coloring::ColoringClass::SinglyFlawed { flawed } =
                classify(&g, sigma)
            else {
                panic!("state {i} not singly flawed");
            };
            assert!(!flawed.is_empty());
            for &v in &flawed {
                let avail = available_colors(&g, sigma, v, k);
                assert!(!avail.is_empty(), "flawed vertex {v} has no repair color");
                for c in avail {
                    assert!(
                        classify(&g, &sigma.recolored(v, c)).is_proper(),
                        "recoloring {v} to {c} fails to repair state {i}"
                    );
                }
            }
        }
    }
}

/// The repair map agrees with the repair function state by state, its
/// preimage lists partition the flawed block, and no proper state absorbs
/// more than `k * n` flawed states.
#[test]
fn repair_map_consistent_with_repair_function() {
    let instances = [
        (Graph::path(3).unwrap(), 4usize),
        (Graph::complete(3).unwrap(), 4),
        (Graph::cycle(4).unwrap(), 4),
        (Graph::star(3).unwrap(), 5),
    ];
    for (g, k) in instances {
        let sp = space(&g, k);
        let map = FlawRepairMap::build(&g, &sp).unwrap();
        let mut seen = BTreeSet::new();
        for i in sp.num_proper()..sp.len() {
            let target = map.repair_target(i);
            let repaired = repair_flawed(&g, sp.state(i), k).unwrap();
            assert_eq!(sp.index_of(&repaired), Some(target));
            assert!(sp.is_proper_index(target));
            assert!(map.preimages(target).contains(&i));
            seen.insert(i);
        }
        let total: usize = (0..sp.num_proper()).map(|s| map.preimages(s).len()).sum();
        assert_eq!(total, sp.num_singly_flawed());
        assert_eq!(seen.len(), sp.num_singly_flawed());
        assert!(map.max_multiplicity() <= k * g.n());
    }
}

/// One hundred thousand seeded trajectories land within total-variation
/// 0.02 of the exact fifty-step matrix power on the 3-path with four
/// colors.
#[test]
fn empirical_distribution_matches_matrix_power() {
    let g = Graph::path(3).unwrap();
    let k = 4;
    let sp = space(&g, k);
    let cfg = sf(k);
    let p = TransitionMatrix::build(&g, &cfg, &sp, DEFAULT_MATRIX_BUDGET).unwrap();
    let rows = p.to_f64_rows();
    let start = greedy_proper_coloring(&g, k).unwrap();
    let start_idx = sp.index_of(&start).unwrap();
    let t = 50u64;
    let exact = common::power_row(&rows, start_idx, t);

    let trials = 100_000u64;
    let mut counts = vec![0u64; sp.len()];
    for seed in 0..trials {
        let end = colorsampler_core::chain::simulate(&g, &cfg, &start, t, seed).unwrap();
        counts[sp.index_of(&end).unwrap()] += 1;
    }
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / trials as f64).collect();
    let tv = tv_distance(&empirical, &exact).unwrap();
    assert!(tv <= 0.02, "empirical distance {tv} exceeds 0.02");
}

/// Both chains are irreducible whenever `k` is at least the maximum degree
/// plus two: every state reaches every other.
#[test]
fn chains_are_irreducible_on_corpus() {
    let instances = [
        (Graph::complete(2).unwrap(), 3usize),
        (Graph::path(3).unwrap(), 4),
        (Graph::complete(3).unwrap(), 4),
        (Graph::cycle(4).unwrap(), 4),
        (Graph::star(3).unwrap(), 5),
    ];
    for (g, k) in instances {
        let sp = space(&g, k);
        let p = TransitionMatrix::build(&g, &sf(k), &sp, DEFAULT_MATRIX_BUDGET).unwrap();
        assert!(
            common::matrix_is_irreducible(&p),
            "single-flaw chain reducible on n={} k={}",
            g.n(),
            k
        );
        let glauber = ChainConfig {
            kind: ChainKind::Glauber,
            k,
        };
        let pg = TransitionMatrix::build(&g, &glauber, &sp, DEFAULT_MATRIX_BUDGET).unwrap();
        assert!(
            common::matrix_is_irreducible(&pg),
            "recoloring chain reducible on n={} k={}",
            g.n(),
            k
        );
    }
}

/// Every non-loop transition that carries canonical-path flow is an actual
/// chain transition with positive probability.
#[test]
fn flow_support_within_chain_support() {
    let g = Graph::path(3).unwrap();
    let k = 4;
    let sp = space(&g, k);
    let sch = SeparatorSchedule::build(&g, LinearOrder::identity(g.n()).unwrap()).unwrap();
    let map = FlawRepairMap::build(&g, &sp).unwrap();
    let fa = route_all_flows(&g, &sch, &sp, &map).unwrap();
    let p = TransitionMatrix::build(&g, &sf(k), &sp, DEFAULT_MATRIX_BUDGET).unwrap();
    let zero = BigRational::zero();
    for (&(a, b), flow) in &fa.total_flow {
        if a == b || flow == &zero {
            continue;
        }
        assert!(
            p.entry(a, b) > zero,
            "flow rides transition ({a}, {b}) that the chain never takes"
        );
    }
}

/// For minimal orders the schedule length stays within
/// `(lambda + 1) * n * log2(n)`.
#[test]
fn schedule_length_within_order_bound() {
    let graphs = [
        Graph::path(2).unwrap(),
        Graph::path(3).unwrap(),
        Graph::path(4).unwrap(),
        Graph::path(5).unwrap(),
        Graph::cycle(3).unwrap(),
        Graph::cycle(4).unwrap(),
        Graph::cycle(5).unwrap(),
        Graph::star(2).unwrap(),
        Graph::star(3).unwrap(),
        Graph::star(4).unwrap(),
        Graph::complete(2).unwrap(),
        Graph::complete(3).unwrap(),
        Graph::complete(4).unwrap(),
        Graph::complete(5).unwrap(),
    ];
    for g in graphs {
        let (order, _) = find_minimal_order(&g, DEFAULT_ORDER_SEARCH_CAP).unwrap();
        let sch = SeparatorSchedule::build(&g, order).unwrap();
        let n = g.n() as f64;
        let bound = (sch.lambda() + 1.0) * n * n.log2();
        assert!(
            sch.total_path_len() as f64 <= bound + 1e-9,
            "length {} exceeds bound {bound} on n={}",
            sch.total_path_len(),
            g.n()
        );
    }
}

/// Separators disconnect the ranked prefix from the rest of the suffix and
/// contain no removable vertex, under both identity and minimal orders.
#[test]
fn separators_disconnect_and_are_minimal() {
    let graphs = [
        Graph::path(5).unwrap(),
        Graph::cycle(5).unwrap(),
        Graph::complete(4).unwrap(),
        Graph::star(3).unwrap(),
        Graph::new(3, vec![(1, 2), (2, 3)]).unwrap(),
    ];
    for g in graphs {
        let identity = LinearOrder::identity(g.n()).unwrap();
        common::assert_separator_properties(&g, &identity);
        let (minimal, _) = find_minimal_order(&g, DEFAULT_ORDER_SEARCH_CAP).unwrap();
        common::assert_separator_properties(&g, &minimal);
    }
}

/// The subset-search minimum matches brute force over every permutation.
#[test]
fn minimal_order_matches_permutation_search() {
    let graphs = [
        Graph::path(5).unwrap(),
        Graph::cycle(5).unwrap(),
        Graph::cycle(6).unwrap(),
        Graph::star(4).unwrap(),
        Graph::complete(5).unwrap(),
        Graph::new(6, vec![(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (1, 4), (2, 5)]).unwrap(),
    ];
    for g in graphs {
        let (order, vsn) = find_minimal_order(&g, DEFAULT_ORDER_SEARCH_CAP).unwrap();
        assert_eq!(
            colorsampler_core::graph::vertex_separation_number(&g, &order),
            vsn,
            "reported width disagrees with its own witness"
        );
        assert_eq!(vsn, common::brute_force_vsn(&g), "n={}", g.n());
    }
}

/// Exact mixing on the 4-color triangle lands on the frozen value and sits
/// under the closed-form bound computed from the minimal order.
#[test]
fn triangle_mixing_time_within_theoretical_bound() {
    let g = Graph::complete(3).unwrap();
    let k = 4;
    let sp = space(&g, k);
    let p = TransitionMatrix::build(&g, &sf(k), &sp, DEFAULT_MATRIX_BUDGET).unwrap();
    let delta = 1.0 / (2.0 * core::f64::consts::E);
    let exact = exact_mixing_time(&p, delta, DEFAULT_MIXING_CAP).unwrap();
    assert_eq!(exact, 12);
    let (order, vsn) = find_minimal_order(&g, DEFAULT_ORDER_SEARCH_CAP).unwrap();
    let sch = SeparatorSchedule::build(&g, order).unwrap();
    let bound = theoretical_tau_bound(g.n(), g.max_degree(), k, vsn, sch.lambda(), delta);
    assert!(
        (exact as f64) <= bound,
        "exact {exact} exceeds bound {bound}"
    );
}
