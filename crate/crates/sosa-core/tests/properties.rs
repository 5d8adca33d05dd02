//! Property tests for the pure pieces: normalization round trips,
//! reflection, probability mappings and merit selection.

use proptest::prelude::*;
use sosa_core::candidates::{generate, reflect_into_cube, PerturbationPolicy};
use sosa_core::optimizer::{
    distance_score, distance_score_from_raw, select_from_scores, select_next, surrogate_score,
    MeritWeights,
};
use sosa_core::sensitivity::probabilities;
use sosa_core::{make_test_function, Hypercube, Matrix};

proptest! {
    #[test]
    fn normalize_round_trip(
        d in 1usize..8,
        seed in any::<u64>(),
    ) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let lower: Vec<f64> = (0..d).map(|_| rng.gen_range(-50.0..49.0)).collect();
        let upper: Vec<f64> = lower.iter().map(|&a| a + rng.gen_range(0.5..60.0)).collect();
        let cube = Hypercube::new(lower.clone(), upper.clone()).unwrap();
        let x: Vec<f64> = lower
            .iter()
            .zip(&upper)
            .map(|(&a, &b)| rng.gen_range(a..=b))
            .collect();
        let back = cube.denormalize(&cube.normalize(&x).unwrap());
        for (orig, rt) in x.iter().zip(&back) {
            let scale = orig.abs().max(1.0);
            prop_assert!((orig - rt).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn reflection_lands_in_cube_and_is_idempotent(y in prop::collection::vec(-7.0..8.0f64, 1..6)) {
        let once = reflect_into_cube(&y).unwrap();
        prop_assert!(once.iter().all(|&v| (0.0..=1.0).contains(&v)));
        let twice = reflect_into_cube(&once).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn probability_mapping_properties(
        si in prop::collection::vec(0.0..10.0f64, 1..20),
        c1 in 0.01..1.0f64,
    ) {
        let p = probabilities(&si, c1);
        prop_assert!(p.iter().all(|&v| v >= c1 - 1e-15 && v <= 1.0 + 1e-15));
        let max = si.iter().cloned().fold(0.0f64, f64::max);
        if max == 0.0 {
            prop_assert!(p.iter().all(|&v| v == c1));
        } else {
            prop_assert!(p.iter().any(|&v| v == 1.0));
            // Scale invariance (up to rounding of the rescaled ratios).
            let scaled: Vec<f64> = si.iter().map(|v| v * 3.7).collect();
            for (a, b) in p.iter().zip(probabilities(&scaled, c1)) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
            // Monotonicity.
            for i in 0..si.len() {
                for j in 0..si.len() {
                    if si[i] >= si[j] {
                        prop_assert!(p[i] >= p[j]);
                    }
                }
            }
        }
    }

    #[test]
    fn scores_stay_in_unit_interval(values in prop::collection::vec(-1e6..1e6f64, 1..50)) {
        for v in surrogate_score(&values).unwrap() {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        let raw: Vec<f64> = values.iter().map(|v| v.abs()).collect();
        for v in distance_score_from_raw(&raw) {
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn argmin_invariant_under_increasing_affine_maps(
        values in prop::collection::vec(-100.0..100.0f64, 2..40),
        dists in prop::collection::vec(0.0..10.0f64, 2..40),
        wd in 0.0..=1.0f64,
        a in 0.001..50.0f64,
        b in -100.0..100.0f64,
    ) {
        let n = values.len().min(dists.len());
        let values = &values[..n];
        let dists = &dists[..n];
        let w = MeritWeights::from_wd(wd);
        let (idx, merits) = select_from_scores(values, dists, w).unwrap();
        prop_assert!(merits.iter().all(|&m| (0.0..=1.0 + 1e-12).contains(&m)));
        prop_assert!(merits.iter().all(|&m| m >= merits[idx]));
        let mapped: Vec<f64> = values.iter().map(|v| a * v + b).collect();
        let (idx2, _) = select_from_scores(&mapped, dists, w).unwrap();
        prop_assert_eq!(idx, idx2);
    }

    #[test]
    fn fused_selection_equals_spec_path(
        seed in any::<u64>(),
        t in 2usize..30,
        n in 1usize..20,
        wd in 0.0..=1.0f64,
    ) {
        use rand::{Rng, SeedableRng};
        let d = 4;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut cands = Matrix::with_cols(d);
        let mut evaluated = Matrix::with_cols(d);
        for _ in 0..t {
            let p: Vec<f64> = (0..d).map(|_| rng.gen()).collect();
            cands.push_row(&p);
        }
        for _ in 0..n {
            let p: Vec<f64> = (0..d).map(|_| rng.gen()).collect();
            evaluated.push_row(&p);
        }
        let values: Vec<f64> = (0..t).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let w = MeritWeights::from_wd(wd);
        let (via_spec, merits_spec) = select_next(&cands, &values, &evaluated, w).unwrap();

        // Independent naive distance recomputation: merits agree to
        // rounding and the chosen candidate is merit-minimal.
        let raw: Vec<f64> = (0..t)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        cands
                            .row(i)
                            .iter()
                            .zip(evaluated.row(j))
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum::<f64>()
                            .sqrt()
                    })
                    .fold(f64::INFINITY, f64::min)
            })
            .collect();
        let (_, merits_naive) = select_from_scores(&values, &raw, w).unwrap();
        for (a, b) in merits_spec.iter().zip(&merits_naive) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
        let naive_min = merits_naive.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!(merits_naive[via_spec] <= naive_min + 1e-9);
    }

    #[test]
    fn generator_min_dists_equal_distance_score_bitwise(
        seed in any::<u64>(),
        n in 1usize..15,
    ) {
        use rand::{Rng, SeedableRng};
        let d = 5;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut evaluated = Matrix::with_cols(d);
        for _ in 0..n {
            let p: Vec<f64> = (0..d).map(|_| rng.gen()).collect();
            evaluated.push_row(&p);
        }
        let best: Vec<f64> = (0..d).map(|_| rng.gen()).collect();
        let policy = PerturbationPolicy::all_coords(vec![0.2, 0.1]).unwrap();
        let set = generate(&best, &[(policy, 40)], &evaluated, 1e-9, &mut rng).unwrap();
        // The guard's distances are exactly what the scoring op computes.
        let (_, raw) = distance_score(set.points(), &evaluated);
        prop_assert_eq!(set.min_dists(), &raw[..]);
    }
}

#[test]
fn round_trip_on_benchmark_domains() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for name in ["ackley", "rastrigin", "levy", "keane", "michalewicz", "schoen"] {
        let obj = make_test_function(name, 6, 1).unwrap();
        let cube = obj.domain();
        for _ in 0..1000 {
            let x: Vec<f64> = cube
                .lower()
                .iter()
                .zip(cube.upper())
                .map(|(&a, &b)| rng.gen_range(a..=b))
                .collect();
            let back = cube.denormalize(&cube.normalize(&x).unwrap());
            for (orig, rt) in x.iter().zip(&back) {
                assert!(
                    (orig - rt).abs() <= 1e-12 * orig.abs().max(1.0),
                    "{name}: {orig} round-tripped to {rt}"
                );
            }
        }
    }
}
