//! Acceptance suite: one test per criterion, each printing a pass line
//! with the worst observed error and its runtime. Run with
//! `cargo test -p spinstar --test acceptance -- --nocapture` to see the
//! per-criterion report.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use spinstar::{
    appendix_cross_check, apply_channel, capacity_point, chi_eigenvalues, classical_capacity,
    coherence_factor, coherence_factor_bruteforce, eigenvalues_hermitian, ensemble_average,
    equal_coupling_coherence, joint_state, kraus_set, limited_entanglement_from_ratio, model_rng,
    quantum_capacity_from_ratio, recurrence_period, sample_random_model, short_time_flatness_check,
    von_neumann_entropy, Complex64, EnsembleConfig, HermitianOperator, ModelSpec,
};

fn pass(criterion: &str, detail: String, started: Instant) {
    println!(
        "acceptance {criterion}: pass ({detail}, {:.3} s)",
        started.elapsed().as_secs_f64()
    );
}

fn random_model(rng: &mut StdRng, n: usize, alpha: f64, beta: f64) -> ModelSpec {
    let g: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let om: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    ModelSpec::new(alpha, beta, g, om).unwrap()
}

#[test]
fn criterion_01_noiseless_start() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(1);
    let mut max_err = 0.0_f64;
    for _ in 0..50 {
        let n = rng.random_range(1..=12);
        let beta = rng.random_range(0.0..10.0);
        let m = random_model(&mut rng, n, 1.0, beta);
        let p = capacity_point(&m, 0.0, &[]).unwrap();
        max_err = max_err
            .max((p.q - 1.0).abs())
            .max((p.c_e - 2.0).abs())
            .max((p.q_e - 1.0).abs())
            .max((p.ratio_abs - 1.0).abs());
    }
    assert!(max_err <= 1e-12, "max error {max_err:.3e}");
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 1.0, "took {elapsed:.3} s, limit 1 s");
    pass(
        "criterion 1 (noiseless start)",
        format!("50 models, max |err| = {max_err:.3e}"),
        started,
    );
}

#[test]
fn criterion_02_oracle_equivalence() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(2);
    let mut max_rel = 0.0_f64;
    for n in 1..=16 {
        let beta = rng.random_range(0.0..3.0);
        let m = random_model(&mut rng, n, 1.0, beta);
        for _ in 0..10 {
            let t: f64 = rng.random_range(0.0..8.0);
            let a = coherence_factor(&m, t).unwrap();
            let b = coherence_factor_bruteforce(&m, t).unwrap();
            // relative to the partition-function scale: Pi/Z lives in the
            // unit disk, and Z bounds |Pi| from above
            max_rel = max_rel
                .max((a.decay() - b.decay()).norm())
                .max((a.ratio_abs() - b.ratio_abs()).abs());
        }
    }
    assert!(max_rel <= 1e-12, "max relative error {max_rel:.3e}");

    // analytic chi eigenvalues against the dense 4x4 eigendecomposition
    let mut max_chi = 0.0_f64;
    for _ in 0..40 {
        let n = rng.random_range(1..=10);
        let beta = rng.random_range(0.0..5.0);
        let m = random_model(&mut rng, n, 1.0, beta);
        let t: f64 = rng.random_range(0.0..6.0);
        let analytic = chi_eigenvalues(&coherence_factor(&m, t).unwrap()).unwrap();
        let numeric = eigenvalues_hermitian(&joint_state(&m, t).unwrap()).unwrap();
        for (a, b) in analytic.eigenvalues().iter().zip(numeric.eigenvalues()) {
            max_chi = max_chi.max((a - b).abs());
        }
        // and the full capacity route through entropies alone
        let q_entropy = 1.0 - von_neumann_entropy(&numeric).unwrap();
        let q_analytic =
            quantum_capacity_from_ratio(coherence_factor(&m, t).unwrap().ratio_abs()).unwrap();
        max_chi = max_chi.max((q_entropy - q_analytic).abs());
    }
    assert!(max_chi <= 1e-10, "max chi error {max_chi:.3e}");

    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 30.0, "took {elapsed:.3} s, limit 30 s");
    pass(
        "criterion 2 (oracle equivalence)",
        format!("product vs sum max rel = {max_rel:.3e}, chi max |err| = {max_chi:.3e}"),
        started,
    );
}

#[test]
fn criterion_03_kraus_structure() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(3);
    let mut max_err = 0.0_f64;
    for n in 1..=12 {
        let beta = rng.random_range(0.0..5.0);
        let m = random_model(&mut rng, n, 1.0, beta);
        let t: f64 = rng.random_range(0.0..5.0);
        let k = kraus_set(&m, t).unwrap();
        max_err = max_err
            .max((k.weight_sum() - 1.0).abs())
            .max(k.completeness_residual());

        // random input state: populations kept, coherence scaled by the ratio
        let p: f64 = rng.random_range(0.0..1.0);
        let bound = (p * (1.0 - p)).sqrt();
        let off = Complex64::from_polar(
            rng.random_range(0.0..=bound),
            rng.random_range(0.0..std::f64::consts::TAU),
        );
        let rho = HermitianOperator::new(
            2,
            vec![
                Complex64::new(p, 0.0),
                off,
                off.conj(),
                Complex64::new(1.0 - p, 0.0),
            ],
        )
        .unwrap();
        let out = apply_channel(&k, &rho).unwrap();
        let r = coherence_factor(&m, t).unwrap().ratio_abs();
        max_err = max_err
            .max((out.get(0, 0).re - p).abs())
            .max((out.get(1, 1).re - (1.0 - p)).abs())
            .max((out.get(0, 1).norm() - r * off.norm()).abs());
    }
    assert!(max_err <= 1e-12, "max error {max_err:.3e}");
    pass(
        "criterion 3 (Kraus structure)",
        format!("N <= 12, max |err| = {max_err:.3e}"),
        started,
    );
}

#[test]
fn criterion_04_capacity_identities() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(4);
    let mut max_err = 0.0_f64;
    for _ in 0..20 {
        let n = rng.random_range(1..=10);
        let beta = rng.random_range(0.0..10.0);
        let m = random_model(&mut rng, n, 1.0, beta);
        for k in 0..=100 {
            let t = k as f64 * 0.08;
            let p = capacity_point(&m, t, &[]).unwrap();
            max_err = max_err
                .max((p.c_e - (1.0 + p.q)).abs())
                .max((p.q_e - 0.5 * p.c_e).abs());
            assert_eq!(p.c_classical, 1.0);
        }
    }
    assert_eq!(classical_capacity(), 1.0);
    assert!(max_err <= 1e-14, "max error {max_err:.3e}");
    pass(
        "criterion 4 (capacity identities)",
        format!("C_E = 1 + Q and Q_E = C_E/2, max |err| = {max_err:.3e}"),
        started,
    );
}

#[test]
fn criterion_05_limited_entanglement_endpoints() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(5);
    let mut max_err = 0.0_f64;
    for _ in 0..20 {
        let n = rng.random_range(1..=10);
        let beta = rng.random_range(0.0..5.0);
        let m = random_model(&mut rng, n, 1.0, beta);
        let t: f64 = rng.random_range(0.0..6.0);
        let r = coherence_factor(&m, t).unwrap().ratio_abs();
        let c_e = 1.0 + quantum_capacity_from_ratio(r).unwrap();
        max_err = max_err
            .max((limited_entanglement_from_ratio(r, 0.0).unwrap() - 1.0).abs())
            .max((limited_entanglement_from_ratio(r, FRAC_PI_4).unwrap() - c_e).abs());

        // monotone nondecreasing on a 65-point theta grid
        let mut prev = f64::NEG_INFINITY;
        for j in 0..=64 {
            let theta = FRAC_PI_4 * j as f64 / 64.0;
            let v = limited_entanglement_from_ratio(r, theta).unwrap();
            assert!(
                v >= prev - 1e-12,
                "C_E_lim not monotone at theta = {theta}: {v} < {prev}"
            );
            prev = v;
        }
    }
    assert!(max_err <= 1e-12, "max endpoint error {max_err:.3e}");
    pass(
        "criterion 5 (limited-entanglement endpoints)",
        format!("20 models, max endpoint |err| = {max_err:.3e}, monotone on 65-point grid"),
        started,
    );
}

#[test]
fn criterion_06_appendix_argmax() {
    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(6);
    let mut max_term_drift = 0.0_f64;
    for _ in 0..20 {
        let n = rng.random_range(1..=8);
        let beta = rng.random_range(0.0..5.0);
        let m = random_model(&mut rng, n, 1.0, beta);
        let t: f64 = rng.random_range(0.0..6.0);
        let theta: f64 = rng.random_range(0.0..=FRAC_PI_4);

        let corner = appendix_cross_check(&m, t, theta, FRAC_PI_4, FRAC_PI_4).unwrap();
        let mut grid_max = f64::NEG_INFINITY;
        for i in 0..33 {
            for j in 0..33 {
                let x1 = FRAC_PI_4 * i as f64 / 32.0;
                let x2 = FRAC_PI_4 * j as f64 / 32.0;
                let terms = appendix_cross_check(&m, t, theta, x1, x2).unwrap();
                grid_max = grid_max.max(terms.total);
                max_term_drift = max_term_drift
                    .max((terms.term1 - corner.term1).abs())
                    .max((terms.term3 - corner.term3).abs());
            }
        }
        // equiprobable corner attains the grid maximum (ties allowed)
        assert!(
            corner.total >= grid_max - 1e-12,
            "corner {} below grid max {}",
            corner.total,
            grid_max
        );
    }
    assert!(max_term_drift <= 1e-12, "term drift {max_term_drift:.3e}");
    pass(
        "criterion 6 (appendix argmax)",
        format!("33x33 grid, 20 triples, term drift = {max_term_drift:.3e}"),
        started,
    );
}

#[test]
fn criterion_07_derived_fixture() {
    let started = Instant::now();
    // Oracle-confirmed values for N=1, g=1, Omega=0, alpha*t = pi/8,
    // recomputed here from scratch through the brute-force channel and
    // the dense eigendecomposition before the analytic path is trusted.
    let m = ModelSpec::new(1.0, 1.0, vec![1.0], vec![0.0]).unwrap();
    let t = FRAC_PI_8;

    let spectrum = eigenvalues_hermitian(&joint_state(&m, t).unwrap()).unwrap();
    let q_oracle = 1.0 - von_neumann_entropy(&spectrum).unwrap();
    let r_brute = coherence_factor_bruteforce(&m, t).unwrap().ratio_abs();
    assert!((r_brute - FRAC_PI_4.cos()).abs() <= 1e-14);

    let p = capacity_point(&m, t, &[FRAC_PI_8]).unwrap();
    assert!((p.q - q_oracle).abs() <= 1e-10);

    let fixture_q = 0.399_123_963_307_143_9;
    let fixture_ce_lim = 1.246_297_134_027_586_2;
    let max_err = (p.q - fixture_q)
        .abs()
        .max((p.c_e - (1.0 + fixture_q)).abs())
        .max((p.c_e_lim[0].1 - fixture_ce_lim).abs());
    assert!(max_err <= 1e-5, "max fixture error {max_err:.3e}");
    pass(
        "criterion 7 (derived fixture)",
        format!(
            "Q = {:.6}, C_E = {:.6}, C_E_lim(pi/8) = {:.6}, max |err| = {max_err:.3e}",
            p.q, p.c_e, p.c_e_lim[0].1
        ),
        started,
    );
}

#[test]
fn criterion_08_equal_coupling_recurrences() {
    let started = Instant::now();
    let (g, omega, alpha) = (1.0, 1.0, 1.0);
    let period = recurrence_period(g, alpha).unwrap();
    assert_eq!(period, FRAC_PI_2);

    let mut max_err = 0.0_f64;
    for &n in &[4usize, 100] {
        let model = ModelSpec::equal(n, alpha, 1.0, g, omega).unwrap();
        for k in 0..50 {
            let t = k as f64 * period / 25.0;
            let closed = equal_coupling_coherence(n, g, omega, alpha, 1.0, t).unwrap();
            let general = coherence_factor(&model, t).unwrap();
            max_err = max_err
                .max((closed.ratio_abs() - general.ratio_abs()).abs())
                .max(
                    (closed.log_abs_pi() - general.log_abs_pi()).abs()
                        / general.log_abs_pi().abs().max(1.0),
                );
            if n == 4 {
                let brute = coherence_factor_bruteforce(&model, t).unwrap();
                max_err =
                    max_err.max((closed.pi() - brute.pi()).norm() / brute.pi().norm().max(1.0));
            }
            // periodicity of the quantum capacity
            let q0 = quantum_capacity_from_ratio(closed.ratio_abs()).unwrap();
            let q1 = quantum_capacity_from_ratio(
                equal_coupling_coherence(n, g, omega, alpha, 1.0, t + period)
                    .unwrap()
                    .ratio_abs(),
            )
            .unwrap();
            assert!((q0 - q1).abs() <= 1e-10, "period broken at t = {t}");
        }
    }
    assert!(max_err <= 1e-12, "max path disagreement {max_err:.3e}");

    // beta = 0: full recurrences independently of N
    for &n in &[4usize, 100] {
        let q_min = quantum_capacity_from_ratio(
            equal_coupling_coherence(n, g, omega, alpha, 0.0, FRAC_PI_4)
                .unwrap()
                .ratio_abs(),
        )
        .unwrap();
        assert_eq!(q_min, 0.0, "Q at alpha*t = pi/4, N = {n}");
        let q_rev = quantum_capacity_from_ratio(
            equal_coupling_coherence(n, g, omega, alpha, 0.0, FRAC_PI_2)
                .unwrap()
                .ratio_abs(),
        )
        .unwrap();
        assert_eq!(q_rev, 1.0, "Q at alpha*t = pi/2, N = {n}");
    }
    pass(
        "criterion 8 (equal-coupling recurrences)",
        format!("N in {{4, 100}}, max path |err| = {max_err:.3e}, T_p periodic, full revival at beta = 0"),
        started,
    );
}

#[test]
fn criterion_09_temperature_ordering_and_decay() {
    let started = Instant::now();
    let grid: Vec<f64> = (0..=200).map(|k| k as f64 * 0.025).collect(); // [0, 5]
    for &n in &[4usize, 100] {
        let run = |beta: f64| {
            ensemble_average(&EnsembleConfig {
                n_bath: n,
                n_samples: 50,
                seed: 42,
                beta,
                alpha: 1.0,
                time_grid: grid.clone(),
            })
            .unwrap()
        };
        let cold = run(10.0);
        let hot = run(1.0);
        for (k, (c, h)) in cold.mean_q.iter().zip(&hot.mean_q).enumerate() {
            assert!(
                c >= &(h - 1e-12),
                "beta = 10 curve below beta = 1 at t = {} for N = {n}",
                grid[k]
            );
        }
        if n == 100 {
            // rapid decay with no visible recurrences
            let max_late = grid
                .iter()
                .zip(&hot.mean_q)
                .filter(|(t, _)| **t >= 1.0)
                .map(|(_, q)| *q)
                .fold(0.0_f64, f64::max);
            assert!(max_late < 0.05, "mean Q reached {max_late} on [1, 5]");
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "took {elapsed:.3} s, limit 60 s");
    pass(
        "criterion 9 (temperature ordering and decay)",
        "beta = 10 dominates beta = 1 pointwise for N in {4, 100}; N = 100 mean Q < 0.05 on [1, 5]"
            .to_string(),
        started,
    );
}

#[test]
fn criterion_10_saturation_and_short_times() {
    let started = Instant::now();
    // low-temperature saturation over one full period
    let grid: Vec<f64> = (0..=400).map(|k| k as f64 * FRAC_PI_2 / 400.0).collect();
    let min_q = spinstar::low_temperature_saturation_check(4, 1.0, 1.0, 1.0, 50.0, &grid).unwrap();
    assert!(min_q >= 0.999, "min Q = {min_q}");

    // short-time flatness for random baths
    let mut worst_deficit = 0.0_f64;
    let mut worst_ratio = 0.0_f64;
    for stream in 0..5 {
        let mut rng = model_rng(10, stream);
        let m = sample_random_model(4, 1.0, 1.0, &mut rng).unwrap();
        let deficits = short_time_flatness_check(&m, &[1e-4, 2e-4, 1e-3]).unwrap();
        worst_deficit = worst_deficit.max(deficits[2].1);
        // deficit(eps)/deficit(2 eps) < 1/2: super-linear vanishing
        if deficits[1].1 > 0.0 {
            worst_ratio = worst_ratio.max(deficits[0].1 / deficits[1].1);
        }
    }
    assert!(
        worst_deficit < 1e-4,
        "deficit at alpha*eps = 1e-3: {worst_deficit:.3e}"
    );
    assert!(worst_ratio < 0.5, "deficit ratio {worst_ratio}");
    pass(
        "criterion 10 (saturation and short times)",
        format!(
            "min Q = {min_q:.6} at beta = 50; deficit(1e-3) = {worst_deficit:.3e}, ratio = {worst_ratio:.3}"
        ),
        started,
    );
}
