use genus_atsp::circulation::{
    hoffman_bounds, min_cost_integer_circulation, orient_forest, walks_from_circulation, Walk, WalkCover,
};
use genus_atsp::harness::{audit_cuts, brute_force_atsp, generate, AuditMode, GenMode, GenSpec};
use genus_atsp::heldkarp_lp::{normalize_metric, solve_held_karp, symmetrize, LpConfig, SymWeights};
use genus_atsp::paths::ShortestPaths;
use genus_atsp::surface_graph::format::parse;
use genus_atsp::surface_graph::EmbeddedDigraph;
use genus_atsp::thin_forest::{compute_thin_forest, ThinForestConfig, THIN_ALPHA};
use genus_atsp::tour::{
    compose, contracted_instance, exact_atsp_dp, representatives, shortcut, solve, AtspHook, NearestNeighborHook,
    RepTour, SolveConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;

fn forest_config() -> ThinForestConfig {
    ThinForestConfig { target: 1, audit: AuditMode::Exhaustive, early_exit: false }
}

/// Complete bidirected triangle with `c(i -> i+1) = fwd`, `c(i+1 -> i) = bwd`.
fn triangle(fwd: f64, bwd: f64) -> EmbeddedDigraph {
    common::cycle(&[Some(fwd); 3], &[Some(bwd); 3])
}

/// Directed triangles 0-1-2 and 3-4-5 with unit arcs, joined by 0 <-> 3
/// arcs of cost 2 and 5.
fn two_triangles() -> EmbeddedDigraph {
    parse(
        "atspe 1\nvertices 6\n\
         arc 0 0 1 1\narc 1 1 2 1\narc 2 2 0 1\narc 3 3 4 1\narc 4 4 5 1\narc 5 5 3 1\n\
         arc 6 0 3 2\narc 7 3 0 5\n\
         edge 0 0 -\nedge 1 1 -\nedge 2 2 -\nedge 3 3 -\nedge 4 4 -\nedge 5 5 -\nedge 6 6 7\n\
         rot 0 0.0 2.1 6.0\nrot 1 0.1 1.0\nrot 2 1.1 2.0\nrot 3 3.0 5.1 6.1\nrot 4 3.1 4.0\nrot 5 4.1 5.0\n",
    )
    .unwrap()
}

#[test]
fn bidirected_cycle_tour_matches_lp() {
    for n in 3..10 {
        let g = common::bidirected_cycle(n, 1.0);
        let sol = solve(&g, &SolveConfig::default()).unwrap();
        assert_eq!(sol.certificate.tour_cost, n as f64);
        assert!((sol.certificate.lp - n as f64).abs() < 1e-9);
        sol.tour.validate(&g).unwrap();
    }
}

#[test]
fn two_vertex_pair() {
    let g = parse("atspe 1\nvertices 2\narc 0 0 1 3\narc 1 1 0 4\nedge 0 0 1\nrot 0 0.0\nrot 1 0.1\n").unwrap();
    let lp = solve_held_karp(&g, &LpConfig::default()).unwrap();
    let z = symmetrize(&g, &lp.x);
    let forest = compute_thin_forest(&g, lp.objective, &z, &forest_config()).unwrap();
    assert_eq!((forest.edges.clone(), forest.components, forest.cost), (vec![0], 1, 3.0));
    let sol = solve(&g, &SolveConfig::default()).unwrap();
    assert_eq!(sol.certificate.tour_cost, 7.0);
    assert_eq!(sol.tour.arcs.len(), 2);
}

#[test]
fn triangle_thin_forest_with_half_values() {
    let g = triangle(1.0, 1.0);
    let z = SymWeights { z: vec![1.0; 3] };
    let forest = compute_thin_forest(&g, 3.0, &z, &forest_config()).unwrap();
    assert_eq!(forest.cost, 2.0);
    assert!(forest.cost <= THIN_ALPHA * 3.0);
    assert!(forest.certified());
}

#[test]
fn asymmetric_triangle_certificate() {
    let g = triangle(1.0, 100.0);
    let lp = solve_held_karp(&g, &LpConfig::default()).unwrap();
    assert!((lp.objective - 3.0).abs() < 1e-9);
    let z = symmetrize(&g, &lp.x);
    let forest = compute_thin_forest(&g, lp.objective, &z, &forest_config()).unwrap();
    assert!(forest.cost <= THIN_ALPHA * lp.objective);
    assert!(forest.alpha_hat.unwrap() <= THIN_ALPHA);

    // Circulation on the same network, checked arc by arc.
    let oriented = orient_forest(&g, &forest.edges).unwrap();
    assert!(oriented.iter().all(|&a| g.arc(a).cost == 1.0));
    let bounds = hoffman_bounds(g.num_arcs(), &oriented, &lp.x, THIN_ALPHA);
    let f = min_cost_integer_circulation(&g, &bounds).unwrap();
    for a in 0..g.num_arcs() {
        assert!(bounds.lower[a] <= f.f[a] && f.f[a] <= bounds.upper[a]);
    }
    f.verify(&g, &bounds).unwrap();
    assert_eq!(f.cost(&g), 3.0);

    let sp = ShortestPaths::new(&g);
    let inst = contracted_instance(&sp, &[0, 1]);
    assert_eq!(inst.cost[0][1], 1.0);
    assert_eq!(inst.cost[1][0], 2.0);
}

#[test]
fn contracted_directed_cycle_keeps_distances() {
    let n = 5;
    let g = common::cycle(&vec![Some(1.0); n], &vec![None; n]);
    let sp = ShortestPaths::new(&g);
    let reps: Vec<usize> = (0..n).collect();
    let inst = contracted_instance(&sp, &reps);
    for i in 0..n {
        for j in 0..n {
            assert_eq!(inst.cost[i][j], ((j + n - i) % n) as f64);
            assert_eq!(inst.paths[i][j].len(), (j + n - i) % n);
        }
    }
    let single = contracted_instance(&sp, &[2]);
    assert_eq!(exact_atsp_dp(&single, 24).unwrap(), RepTour { order: vec![0], cost: 0.0 });
    assert_eq!(NearestNeighborHook.tour(&single).order, vec![0]);
}

#[test]
fn composing_two_walks() {
    let g = two_triangles();
    let cover = WalkCover {
        walks: vec![Walk { start: 0, arcs: vec![0, 1, 2] }, Walk { start: 3, arcs: vec![3, 4, 5] }],
        cost: 6.0,
    };
    let reps = representatives(&g, &cover);
    assert_eq!(reps, vec![0, 3]);
    let sp = ShortestPaths::new(&g);
    let inst = contracted_instance(&sp, &reps);
    let tour = exact_atsp_dp(&inst, 24).unwrap();
    assert_eq!(tour.cost, 7.0);
    let walk = compose(&g, &cover, &inst, &tour);
    assert_eq!(walk.start, 0);
    assert_eq!(walk.arcs, vec![0, 1, 2, 6, 3, 4, 5, 7]);
    assert_eq!(walk.cost(&g), 13.0);
    walk.validate(&g).unwrap();
    let short = shortcut(&g, &sp, &walk);
    assert!(short.cost(&g) <= walk.cost(&g));
    assert_eq!(shortcut(&g, &sp, &short), short);

    let f = genus_atsp::circulation::Circulation { f: vec![1, 1, 1, 1, 1, 1, 0, 0] };
    assert_eq!(walks_from_circulation(&g, &f).unwrap(), cover);
}

#[test]
fn dp_matches_brute_force_on_three_reps() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let cost: Vec<Vec<f64>> =
            (0..3).map(|i| (0..3).map(|j| if i == j { 0.0 } else { rng.gen_range(1..50) as f64 }).collect()).collect();
        let inst = genus_atsp::tour::ContractedInstance {
            reps: vec![0, 1, 2],
            cost: cost.clone(),
            paths: vec![vec![Vec::new(); 3]; 3],
        };
        let dp = exact_atsp_dp(&inst, 24).unwrap();
        assert_eq!(dp.cost, common::permutation_optimum(&cost));
        assert!(NearestNeighborHook.tour(&inst).cost >= dp.cost);
    }
}

#[test]
fn random_instances_stay_within_bounds() {
    for seed in 0..60u64 {
        let n = 3 + seed as usize % 8;
        let mode = ["planar", "random-rotation:0.3", "add-crosscaps:2"][seed as usize % 3];
        let g = generate(&GenSpec::new(n, mode.parse::<GenMode>().unwrap(), seed)).unwrap();
        let sol = solve(&g, &SolveConfig::default()).unwrap();
        let c = &sol.certificate;
        let opt = brute_force_atsp(&g).unwrap().opt;
        sol.tour.validate(&g).unwrap();
        assert!(c.lp <= opt + 1e-6);
        assert!(c.tour_cost >= opt - 1e-6);
        assert!(c.tour_cost <= 181.0 * opt);
        assert!(c.walks.k_prime <= c.forest.k);
        assert!(c.forest.k <= c.euler_genus.max(1));
        assert!(c.certified, "seed {seed}: {c:?}");
    }
}

#[test]
fn thin_forest_charges_stay_within_initial_weights() {
    for seed in 0..20u64 {
        let g = generate(&GenSpec::new(10 + seed as usize % 10, GenMode::Planar, seed)).unwrap();
        let h = normalize_metric(&g);
        let lp = solve_held_karp(&h, &LpConfig::default()).unwrap();
        let z = symmetrize(&h, &lp.x);
        let config = ThinForestConfig { target: 1, audit: AuditMode::Sample { cuts: 2000, seed }, early_exit: false };
        let forest = compute_thin_forest(&h, lp.objective, &z, &config).unwrap();
        assert!(forest.max_charge <= 1.0);
        assert!(forest.rounds.iter().all(|r| r.min_cut >= 2.0 - 1e-6));
        let best = forest.rounds.iter().map(|r| r.cost).fold(f64::INFINITY, f64::min);
        assert_eq!(forest.cost, best);
        let mean = forest.rounds.iter().map(|r| r.cost).sum::<f64>() / forest.rounds.len() as f64;
        assert!(forest.cost <= mean && mean <= THIN_ALPHA * lp.objective);
    }
}

#[test]
fn exhaustive_audit_counts_all_cuts() {
    let g = generate(&GenSpec::new(12, GenMode::Planar, 5)).unwrap();
    let audit = audit_cuts(g.embedding(), &[], &vec![1.0; g.num_edges()], AuditMode::Exhaustive).unwrap();
    assert_eq!(audit.cuts_audited, 2047);
}

#[test]
fn certificates_are_reproducible() {
    let g = generate(&GenSpec::new(11, GenMode::AddCrosscaps(2), 8)).unwrap();
    let config = SolveConfig { thin_audit: Some(AuditMode::Sample { cuts: 500, seed: 0 }), seed: 3, ..SolveConfig::default() };
    let a = serde_json::to_string(&solve(&g, &config).unwrap().certificate).unwrap();
    let b = serde_json::to_string(&solve(&g, &config).unwrap().certificate).unwrap();
    assert_eq!(a, b);
}
