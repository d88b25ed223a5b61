//! Cross-module invariants and randomized properties.

mod common;

use proptest::prelude::*;
use waternet::centrality::Measure;
use waternet::graph::MolecularGraph;
use waternet::phase::{pool_distribution, NormalizationMode};
use waternet::{frame, metrics, netbuild, paths, spectral, synth, walkers};

proptest! {
    #[test]
    fn pbc_distance_symmetric_translation_invariant_and_minimal(
        px in -3.0..3.0f64, py in -3.0..3.0f64, pz in -3.0..3.0f64,
        qx in -3.0..3.0f64, qy in -3.0..3.0f64, qz in -3.0..3.0f64,
        bx in 0.5..4.0f64, by in 0.5..4.0f64, bz in 0.5..4.0f64,
        kx in -2i32..3, ky in -2i32..3, kz in -2i32..3,
    ) {
        let p = [px, py, pz];
        let q = [qx, qy, qz];
        let b = [bx, by, bz];
        let d = netbuild::pbc_distance(p, q, b).unwrap();
        let d_rev = netbuild::pbc_distance(q, p, b).unwrap();
        prop_assert_eq!(d, d_rev);

        let shifted = [
            p[0] + kx as f64 * b[0],
            p[1] + ky as f64 * b[1],
            p[2] + kz as f64 * b[2],
        ];
        let d_shift = netbuild::pbc_distance(shifted, q, b).unwrap();
        prop_assert!((d - d_shift).abs() < 1e-9);

        // 27-image brute force
        let wrap = |x: f64, l: f64| x.rem_euclid(l);
        let pw = [wrap(p[0], b[0]), wrap(p[1], b[1]), wrap(p[2], b[2])];
        let qw = [wrap(q[0], b[0]), wrap(q[1], b[1]), wrap(q[2], b[2])];
        let mut best = f64::INFINITY;
        for ix in -1i32..=1 {
            for iy in -1i32..=1 {
                for iz in -1i32..=1 {
                    let dx = pw[0] - qw[0] + ix as f64 * b[0];
                    let dy = pw[1] - qw[1] + iy as f64 * b[1];
                    let dz = pw[2] - qw[2] + iz as f64 * b[2];
                    best = best.min((dx * dx + dy * dy + dz * dz).sqrt());
                }
            }
        }
        prop_assert!((d - best).abs() < 1e-12);
    }

    #[test]
    fn frame_json_round_trips_bit_exactly(
        values in prop::collection::vec((-1e3..1e3f64, -1e3..1e3f64, -1e3..1e3f64), 0..40),
        bx in 0.1..100.0f64, by in 0.1..100.0f64, bz in 0.1..100.0f64,
    ) {
        let positions: Vec<[f64; 3]> = values.iter().map(|&(x, y, z)| [x, y, z]).collect();
        let labels = vec!["OW".to_string(); positions.len()];
        let f = frame::Frame::new(positions, [bx, by, bz], labels, "t").unwrap();
        let g = frame::parse_frame_json(&frame::frame_to_json(&f)).unwrap();
        prop_assert_eq!(f.positions(), g.positions());
        prop_assert_eq!(f.box_lengths(), g.box_lengths());
    }

    #[test]
    fn handshake_lemma_holds(
        n in 2usize..30,
        raw_edges in prop::collection::vec((0u32..30, 0u32..30), 0..120),
    ) {
        let edges: Vec<(u32, u32)> = raw_edges
            .into_iter()
            .filter(|&(a, b)| a != b && (a as usize) < n && (b as usize) < n)
            .collect();
        let g = MolecularGraph::from_edges(n, edges).unwrap();
        let degree_sum: u32 = g.degrees().iter().sum();
        prop_assert_eq!(degree_sum as usize, 2 * g.m());
    }
}

#[test]
fn centralities_are_permutation_equivariant() {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let g = synth::connected_erdos_renyi(18, 0.25, 40).unwrap();
    let mut perm: Vec<u32> = (0..18).collect();
    perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(9));
    let h = g.permuted(&perm).unwrap();

    let pairs: Vec<(Vec<f64>, Vec<f64>)> = vec![
        (paths::closeness(&g).scores, paths::closeness(&h).scores),
        (paths::betweenness(&g).scores, paths::betweenness(&h).scores),
        (
            walkers::katz(&g, 0.1).unwrap().scores,
            walkers::katz(&h, 0.1).unwrap().scores,
        ),
        (
            walkers::subgraph_centrality(&g, 1.0).unwrap().scores,
            walkers::subgraph_centrality(&h, 1.0).unwrap().scores,
        ),
        (
            walkers::eigenvector_centrality(&g).unwrap().scores,
            walkers::eigenvector_centrality(&h).unwrap().scores,
        ),
    ];
    for (orig, permuted) in pairs {
        for (new, &old) in perm.iter().enumerate() {
            assert!(
                (permuted[new] - orig[old as usize]).abs() < 1e-8,
                "scores not equivariant"
            );
        }
    }
}

#[test]
fn bipartivity_separates_bipartite_from_odd_cycles() {
    for seed in 0..5 {
        let tree = synth::random_tree(20, seed).unwrap();
        let b = spectral::bipartivity(&tree).unwrap();
        assert!((b - 1.0).abs() < 1e-10, "tree bipartivity {b}");
    }
    for n in [4usize, 6, 8, 10] {
        let b = spectral::bipartivity(&synth::cycle_graph(n)).unwrap();
        assert!((b - 1.0).abs() < 1e-10, "even cycle bipartivity {b}");
    }
    for n in [3usize, 5, 7, 9] {
        let b = spectral::bipartivity(&synth::cycle_graph(n)).unwrap();
        assert!(b < 1.0 - 1e-6, "odd cycle bipartivity {b}");
        assert!(b > 0.5);
    }
}

#[test]
fn algebraic_connectivity_is_edge_monotone() {
    let base = synth::diamond_lattice(3).unwrap();
    let mut prev = 0.0;
    for extra in [0usize, 10, 30, 60] {
        let g = synth::add_short_range_edges(&base, extra, 77).unwrap();
        let a = spectral::algebraic_connectivity(&g).unwrap();
        assert!(
            a >= prev - 1e-10,
            "alpha decreased: {a} after {prev} at +{extra} edges"
        );
        prev = a;
    }
}

#[test]
fn extreme_eigenvalue_sum_moves_away_from_zero_with_disorder() {
    // bipartite lattice: lambda_1 + lambda_N = 0; disorder pushes it up
    let base = synth::diamond_lattice(3).unwrap();
    let mut prev = -1e-9;
    for extra in [0usize, 20, 60] {
        let g = synth::add_short_range_edges(&base, extra, 3).unwrap();
        let s = spectral::adjacency_spectrum(&g, false).unwrap();
        let total = s.lambda_max() + s.lambda_min();
        assert!(
            total >= prev - 1e-9,
            "lambda sum not increasing: {total} after {prev}"
        );
        prev = total;
    }
}

#[test]
fn clustering_indexes_correlate_on_perturbed_lattices() {
    // mirror of the reported C vs C-bar correlation, asserted > 0.9
    let base = synth::diamond_lattice(3).unwrap();
    let mut cs = Vec::new();
    let mut cbars = Vec::new();
    for (i, extra) in (0..20).map(|i| (i, 5 + 6 * i)) {
        let g = synth::add_short_range_edges(&base, extra, 1000 + i as u64).unwrap();
        let cl = metrics::clustering(&g).unwrap();
        cs.push(cl.transitivity.unwrap());
        cbars.push(cl.c_bar);
    }
    let n = cs.len() as f64;
    let mx = cs.iter().sum::<f64>() / n;
    let my = cbars.iter().sum::<f64>() / n;
    let cov: f64 = cs.iter().zip(&cbars).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = cs.iter().map(|x| (x - mx).powi(2)).sum();
    let vy: f64 = cbars.iter().map(|y| (y - my).powi(2)).sum();
    let pearson = cov / (vx.sqrt() * vy.sqrt());
    assert!(pearson > 0.9, "Pearson(C, C_bar) = {pearson}");
}

#[test]
fn walk_measures_reduce_to_degree_ranking_at_small_attenuation() {
    for seed in [2u64, 11, 23] {
        let g = synth::connected_erdos_renyi(25, 0.2, seed).unwrap();
        let degree: Vec<f64> = g.degrees().iter().map(|&d| d as f64).collect();
        let katz = walkers::katz(&g, 1e-6).unwrap().scores;
        assert_eq!(common::kendall_tau_ties_excluded(&katz, &degree), 1.0);
        let sub = walkers::subgraph_centrality(&g, 1e-6).unwrap().scores;
        assert_eq!(common::kendall_tau_ties_excluded(&sub, &degree), 1.0);
        let tc = walkers::total_communicability(&g, 1e-6).unwrap().scores;
        assert_eq!(common::kendall_tau_ties_excluded(&tc, &degree), 1.0);
    }
}

#[test]
fn katz_approaches_eigenvector_ranking_near_the_radius() {
    // Exact ranking equality only holds in the limit alpha -> 1/rho; at
    // alpha = 0.99/rho a pair is resolved once its eigenvector gap exceeds
    // the subdominant mixing scale r2 = (1 - alpha l1)/(1 - alpha l2).
    // Kendall tau over resolved pairs must be exactly 1, and most pairs
    // must be resolved for the check to have teeth.
    for seed in 0..20u64 {
        let g = synth::connected_erdos_renyi(25, 0.25, 300 + seed).unwrap();
        let spectrum = spectral::adjacency_spectrum(&g, false).unwrap();
        let (l1, l2) = (spectrum.eigenvalues[0], spectrum.eigenvalues[1]);
        let alpha = 0.99 / l1;
        let r2 = (1.0 - alpha * l1) / (1.0 - alpha * l2);
        let katz = walkers::katz(&g, alpha).unwrap().scores;
        let ec = walkers::eigenvector_centrality(&g).unwrap().scores;
        let (tau, resolved_fraction) =
            common::kendall_tau_resolved(&katz, &ec, 5.0 * r2);
        assert_eq!(tau, 1.0, "seed {seed}");
        assert!(
            resolved_fraction > 0.5,
            "seed {seed}: only {resolved_fraction:.2} of pairs resolved"
        );
    }
}

#[test]
fn per_edge_normalized_closeness_follows_beta_index_identity() {
    // CL(v)/m = (1/beta(G) - 1/m) / s(v)
    let g = synth::connected_erdos_renyi(30, 0.2, 55).unwrap();
    let cl = paths::closeness(&g);
    let summary = paths::distance_summary(&g);
    let beta = waternet::graph::beta_index(&g).unwrap();
    let m = g.m() as f64;
    let h = pool_distribution(std::slice::from_ref(&cl), 4, NormalizationMode::PerEdge).unwrap();
    assert_eq!(h.measure, Measure::Closeness);
    for v in 0..g.n() {
        let expected = (1.0 / beta - 1.0 / m) / summary.farness[v] as f64;
        let direct = cl.scores[v] / m;
        assert!((expected - direct).abs() < 1e-12 * direct.abs().max(1.0));
    }
}

#[test]
fn brandes_matches_naive_oracle_on_random_graphs() {
    for seed in 0..10u64 {
        let g = synth::erdos_renyi(12, 0.3, 900 + seed).unwrap();
        let fast = paths::betweenness(&g).scores;
        let slow = common::naive_betweenness(&g);
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-10, "seed {seed}: {a} vs {b}");
        }
    }
}

#[test]
fn edge_count_stays_in_reported_band_for_dense_packing() {
    // a liquid-density-like random frame keeps the cutoff graph sparse
    let f = synth::random_frame(710, [2.8, 2.8, 2.8], 17).unwrap();
    let g = netbuild::build_graph(&f, &netbuild::CutoffConfig::default()).unwrap();
    // uniform packing at this density has a predictable edge count scale:
    // m ~ N^2/2 * (4/3 pi r^3)/V; keep the check loose
    let expected = 710.0 * 709.0 / 2.0 * (4.0 / 3.0) * std::f64::consts::PI * 0.35f64.powi(3)
        / 2.8f64.powi(3);
    let m = g.m() as f64;
    assert!(
        m > 0.5 * expected && m < 1.5 * expected,
        "edge count {m} far from expected scale {expected}"
    );
}
