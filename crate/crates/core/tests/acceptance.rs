//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with its measured numbers (run with `-- --nocapture` to see
//! them). Everything is oracle- or property-based plus exact reproduction
//! of the combinatorial constants; all expected values are recomputed
//! here, never copied from solver output.

use boxsweep_core::cases::{enumerate_cases, verify_case, ActivationCase};
use boxsweep_core::gmcs::GMcsTree;
use boxsweep_core::io::{generate_instance, WeightDist};
use boxsweep_core::mcs::McsTree;
use boxsweep_core::model::{region_weight, validate_instance, CoverageMode, Instance};
use boxsweep_core::oracle::{brute_force_1d, brute_force_k_box, brute_force_single_box};
use boxsweep_core::solver::{solve, solve_single_box, SolverConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

fn seeded_instance(seed: u64, n: usize) -> Instance {
    let raw = generate_instance(n, seed, WeightDist::UniformInt { w: 9 }, 1000.0);
    validate_instance(&raw).expect("generated instances are in general position")
}

#[test]
fn acceptance_01_two_box_symdiff_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC1);
    for trial in 0..300u64 {
        let n = rng.random_range(0..=9);
        let instance = seeded_instance(rng.random(), n);
        let solved = solve(
            &instance,
            &SolverConfig::new(2, CoverageMode::SymmetricDifference),
        )
        .unwrap();
        let expected = brute_force_k_box(&instance, 2, CoverageMode::SymmetricDifference).unwrap();
        assert_eq!(
            solved.objective, expected,
            "trial {trial}: solver {} != oracle {expected}",
            solved.objective
        );
    }
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < 300.0,
        "must finish under 5 minutes, took {elapsed:.1}s"
    );
    println!("ACCEPTANCE 01 two-box symdiff oracle equivalence: PASS (300 trials, {elapsed:.1}s)");
}

#[test]
fn acceptance_02_two_box_union_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC2);
    for trial in 0..300u64 {
        let n = rng.random_range(0..=9);
        let instance = seeded_instance(rng.random(), n);
        let solved = solve(&instance, &SolverConfig::new(2, CoverageMode::Union)).unwrap();
        let expected = brute_force_k_box(&instance, 2, CoverageMode::Union).unwrap();
        assert_eq!(
            solved.objective, expected,
            "trial {trial}: solver {} != oracle {expected}",
            solved.objective
        );
    }
    println!(
        "ACCEPTANCE 02 two-box union oracle equivalence: PASS (300 trials, {:.1}s)",
        start.elapsed().as_secs_f64()
    );
}

#[test]
fn acceptance_03_single_box_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC3);
    for trial in 0..200u64 {
        let n = rng.random_range(0..=30);
        let instance = seeded_instance(rng.random(), n);
        let solved = solve_single_box(&instance).unwrap();
        let expected = brute_force_single_box(&instance).unwrap();
        assert_eq!(solved.objective, expected, "trial {trial}");
    }
    println!("ACCEPTANCE 03 single-box oracle equivalence: PASS (200 trials, n <= 30)");
}

#[test]
fn acceptance_04_three_box_spot_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC4);
    for trial in 0..20u64 {
        let n = rng.random_range(0..=5);
        let instance = seeded_instance(rng.random(), n);
        let solved = solve(
            &instance,
            &SolverConfig::new(3, CoverageMode::SymmetricDifference).with_workers(2),
        )
        .unwrap();
        let expected = brute_force_k_box(&instance, 3, CoverageMode::SymmetricDifference).unwrap();
        assert_eq!(solved.objective, expected, "trial {trial}");
    }
    println!("ACCEPTANCE 04 three-box spot equivalence: PASS (20 trials, n <= 5)");
}

#[test]
fn acceptance_05_generalized_tree_matches_1d_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC5);
    for trial in 0..500u64 {
        let m = if trial % 2 == 0 { 3 } else { 5 };
        let n = rng.random_range(0..=12);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..m).map(|_| rng.random_range(-9i32..=9) as f64).collect())
            .collect();
        let tree = GMcsTree::build(m, &rows).unwrap();
        let (value, bounds) = tree.query();
        let (expected, _) = brute_force_1d(m, &rows).unwrap();
        assert_eq!(value, expected, "trial {trial}");
        assert_eq!(
            tree.evaluate_bounds(&bounds),
            value,
            "trial {trial} witness"
        );
    }
    // m = 1 degeneracy against the classical tree.
    for _ in 0..500u64 {
        let n = rng.random_range(0..=24);
        let weights: Vec<f64> = (0..n).map(|_| rng.random_range(-9i32..=9) as f64).collect();
        let rows: Vec<Vec<f64>> = weights.iter().map(|&w| vec![w]).collect();
        let classic = McsTree::build(&weights);
        let general = GMcsTree::build(1, &rows).unwrap();
        let (cv, cspan) = classic.query();
        let (gv, gbounds) = general.query();
        assert_eq!(cv, gv);
        assert_eq!(vec![cspan.start, cspan.end], gbounds);
    }
    println!("ACCEPTANCE 05 generalized-tree 1-D equivalence: PASS (500 + 500 trials)");
}

/// The 18 three-strip symmetric-difference activation matrices.
const SYMDIFF_18: [[[u8; 3]; 3]; 18] = [
    [[1, 1, 1], [1, 0, 1], [1, 1, 1]],
    [[1, 1, 0], [1, 0, 1], [1, 1, 0]],
    [[1, 0, 0], [1, 0, 1], [1, 0, 0]],
    [[0, 1, 1], [1, 0, 1], [0, 1, 1]],
    [[0, 1, 0], [1, 0, 1], [0, 1, 0]],
    [[0, 0, 1], [1, 0, 1], [0, 0, 1]],
    [[1, 1, 1], [1, 0, 1], [0, 1, 0]],
    [[1, 1, 0], [1, 0, 1], [0, 1, 1]],
    [[1, 0, 0], [1, 0, 1], [0, 0, 1]],
    [[0, 1, 1], [1, 0, 1], [1, 1, 0]],
    [[0, 1, 0], [1, 0, 1], [1, 1, 1]],
    [[0, 0, 1], [1, 0, 1], [1, 0, 0]],
    [[1, 1, 1], [0, 0, 0], [0, 1, 0]],
    [[1, 1, 0], [0, 0, 0], [0, 1, 1]],
    [[1, 0, 0], [0, 0, 0], [0, 0, 1]],
    [[0, 1, 1], [0, 0, 0], [1, 1, 0]],
    [[0, 1, 0], [0, 0, 0], [1, 1, 1]],
    [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
];

fn as_bits(case: &ActivationCase) -> Vec<Vec<u8>> {
    case.matrix
        .iter()
        .map(|row| row.iter().map(|&v| v as u8).collect())
        .collect()
}

#[test]
fn acceptance_06_case_matrix_reproduction() {
    let start = Instant::now();
    let set2 = enumerate_cases(2, CoverageMode::SymmetricDifference).unwrap();
    assert_eq!(set2.raw_configurations, 18);
    assert_eq!(set2.cases.len(), 18);
    let generated: std::collections::HashSet<Vec<Vec<u8>>> =
        set2.cases.iter().map(as_bits).collect();
    let fixture: std::collections::HashSet<Vec<Vec<u8>>> = SYMDIFF_18
        .iter()
        .map(|mat| mat.iter().map(|row| row.to_vec()).collect())
        .collect();
    assert_eq!(
        generated, fixture,
        "generator must reproduce the fixture set"
    );
    for case in &set2.cases {
        assert!(verify_case(case), "case {}", case.id);
    }
    let set3 = enumerate_cases(3, CoverageMode::SymmetricDifference).unwrap();
    assert_eq!(set3.raw_configurations, 1350);
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 1.0, "case generation must run under a second");
    println!(
        "ACCEPTANCE 06 case-matrix reproduction: PASS (18 matrices match, counts 18/1350, {elapsed:.3}s)"
    );
}

#[test]
fn acceptance_07_solution_self_consistency() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC7);
    let mut checked = 0usize;
    for trial in 0..100u64 {
        let instance = seeded_instance(rng.random(), 40);
        let mode = if trial % 2 == 0 {
            CoverageMode::SymmetricDifference
        } else {
            CoverageMode::Union
        };
        let two = solve(&instance, &SolverConfig::new(2, mode).with_workers(2)).unwrap();
        let one = solve_single_box(&instance).unwrap();
        for solution in [&two, &one] {
            assert_eq!(
                region_weight(&instance, &solution.boxes, solution.mode).unwrap(),
                solution.objective,
                "trial {trial}: direct evaluation disagrees"
            );
            for b in &solution.boxes {
                for p in instance.points() {
                    assert!(
                        p.x != b.x_lo && p.x != b.x_hi && p.y != b.y_lo && p.y != b.y_hi,
                        "trial {trial}: point on a box edge"
                    );
                }
            }
            checked += 1;
        }
    }
    println!("ACCEPTANCE 07 solution self-consistency: PASS ({checked} solutions at n = 40)");
}

#[test]
fn acceptance_08_dominance_and_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC8);
    for trial in 0..40u64 {
        let n = rng.random_range(0..=9);
        let instance = seeded_instance(rng.random(), n);
        let one = solve_single_box(&instance).unwrap().objective;
        assert!(one >= 0.0, "trial {trial}: objective must be nonnegative");
        for mode in [CoverageMode::SymmetricDifference, CoverageMode::Union] {
            let two = solve(&instance, &SolverConfig::new(2, mode))
                .unwrap()
                .objective;
            assert!(two >= one, "trial {trial} {mode}: {two} < {one}");
        }
    }
    println!("ACCEPTANCE 08 dominance and sign invariants: PASS (40 instances, both modes)");
}

#[test]
fn acceptance_09_update_rebuild_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACC9);

    let mut weights: Vec<f64> = (0..47)
        .map(|_| rng.random_range(-9i32..=9) as f64)
        .collect();
    let mut classic = McsTree::build(&weights);
    for _ in 0..1000 {
        let i = rng.random_range(0..weights.len());
        weights[i] = rng.random_range(-9i32..=9) as f64;
        classic.update(i, weights[i]).unwrap();
    }
    assert_eq!(classic.nodes(), McsTree::build(&weights).nodes());

    let m = 3;
    let mut rows: Vec<Vec<f64>> = (0..29)
        .map(|_| (0..m).map(|_| rng.random_range(-9i32..=9) as f64).collect())
        .collect();
    let mut general = GMcsTree::build(m, &rows).unwrap();
    for _ in 0..1000 {
        let i = rng.random_range(0..rows.len());
        let f: Vec<f64> = (0..m).map(|_| rng.random_range(-9i32..=9) as f64).collect();
        rows[i] = f.clone();
        general.update(i, &f).unwrap();
    }
    assert_eq!(general.nodes(), GMcsTree::build(m, &rows).unwrap().nodes());

    println!("ACCEPTANCE 09 update/rebuild equivalence: PASS (1000 updates per tree type)");
}

#[test]
fn acceptance_10_performance_smoke() {
    let instance = seeded_instance(0xACC10, 50);
    let config = SolverConfig::new(2, CoverageMode::SymmetricDifference);
    let start = Instant::now();
    let single = solve(&instance, &config).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < 60.0,
        "single-worker n = 50 run took {elapsed:.1}s, budget is 60s"
    );
    let multi = solve(&instance, &config.clone().with_workers(4)).unwrap();
    assert_eq!(single, multi, "worker count must not change the solution");
    println!(
        "ACCEPTANCE 10 performance smoke: PASS (n = 50, 18 cases, single worker {elapsed:.1}s < 60s; multi-worker identical)"
    );
}
