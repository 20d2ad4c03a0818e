//! The `verify` subcommand: every analytic result recomputed against an
//! independent route, reported one line per check family.

use std::f64::consts::{FRAC_PI_4, TAU};
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use spinstar::{
    appendix_cross_check, apply_channel, chi_eigenvalues, coherence_factor,
    coherence_factor_bruteforce, eigenvalues_hermitian, equal_coupling_coherence, joint_state,
    kraus_set, limited_entanglement_from_ratio, quantum_capacity_from_ratio, recurrence_period,
    von_neumann_entropy, Complex64, HermitianOperator, ModelSpec, BRUTE_FORCE_MAX_BATH,
};

use crate::CliError;

struct Check {
    name: &'static str,
    max_err: f64,
    threshold: f64,
    detail: String,
}

fn random_model(rng: &mut StdRng, n: usize, beta: f64) -> ModelSpec {
    let g: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    let om: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
    ModelSpec::new(1.0, beta, g, om).unwrap()
}

pub fn run_verify(max_n: usize) -> Result<(), CliError> {
    if max_n < 1 {
        return Err(CliError::usage("--max-n must be >= 1".into()));
    }
    if max_n > BRUTE_FORCE_MAX_BATH {
        return Err(CliError::usage(format!(
            "--max-n {max_n} exceeds the brute-force limit of {BRUTE_FORCE_MAX_BATH} \
             (2^N enumeration); rerun with --max-n <= {BRUTE_FORCE_MAX_BATH}"
        )));
    }

    let started = Instant::now();
    let mut rng = StdRng::seed_from_u64(0xC0FFEE);
    let mut checks: Vec<Check> = Vec::new();

    // 1: identities at t = 0
    {
        let mut max_err = 0.0_f64;
        for _ in 0..20 {
            let n = rng.random_range(1..=max_n);
            let beta = rng.random_range(0.0..10.0);
            let m = random_model(&mut rng, n, beta);
            let cf = coherence_factor(&m, 0.0).unwrap();
            let q = quantum_capacity_from_ratio(cf.ratio_abs()).unwrap();
            max_err = max_err
                .max((cf.ratio_abs() - 1.0).abs())
                .max((q - 1.0).abs());
        }
        checks.push(Check {
            name: "noiseless start (ratio, Q at t = 0)",
            max_err,
            threshold: 1e-12,
            detail: "20 random models".into(),
        });
    }

    // 2: product form vs literal 2^N sum
    {
        let mut max_err = 0.0_f64;
        for n in 1..=max_n {
            let beta = rng.random_range(0.0..3.0);
            let m = random_model(&mut rng, n, beta);
            for _ in 0..5 {
                let t: f64 = rng.random_range(0.0..8.0);
                let a = coherence_factor(&m, t).unwrap();
                let b = coherence_factor_bruteforce(&m, t).unwrap();
                max_err = max_err
                    .max((a.decay() - b.decay()).norm())
                    .max((a.ratio_abs() - b.ratio_abs()).abs());
            }
        }
        checks.push(Check {
            name: "coherence product vs brute-force sum",
            max_err,
            threshold: 1e-12,
            detail: format!("N = 1..={max_n}, 5 times each"),
        });
    }

    // 3: Kraus weights, completeness, decay magnitude
    {
        let mut max_err = 0.0_f64;
        for n in 1..=max_n {
            let beta = rng.random_range(0.0..5.0);
            let m = random_model(&mut rng, n, beta);
            let t: f64 = rng.random_range(0.0..5.0);
            let k = kraus_set(&m, t).unwrap();
            let r = coherence_factor(&m, t).unwrap().ratio_abs();
            max_err = max_err
                .max((k.weight_sum() - 1.0).abs())
                .max(k.completeness_residual())
                .max((k.decay_factor().norm() - r).abs());
        }
        checks.push(Check {
            name: "Kraus weights, completeness, decay magnitude",
            max_err,
            threshold: 1e-12,
            detail: format!("N = 1..={max_n}"),
        });
    }

    // 4: channel action on random states
    {
        let mut max_err = 0.0_f64;
        for _ in 0..20 {
            let n = rng.random_range(1..=max_n);
            let beta = rng.random_range(0.0..5.0);
            let m = random_model(&mut rng, n, beta);
            let t: f64 = rng.random_range(0.0..5.0);
            let p: f64 = rng.random_range(0.0..1.0);
            let bound = (p * (1.0 - p)).sqrt();
            let off =
                Complex64::from_polar(rng.random_range(0.0..=bound), rng.random_range(0.0..TAU));
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
            let out = apply_channel(&kraus_set(&m, t).unwrap(), &rho).unwrap();
            let r = coherence_factor(&m, t).unwrap().ratio_abs();
            max_err = max_err
                .max((out.trace() - 1.0).abs())
                .max((out.get(0, 0).re - p).abs())
                .max((out.get(0, 1).norm() - r * off.norm()).abs());
        }
        checks.push(Check {
            name: "channel action (populations, coherence, trace)",
            max_err,
            threshold: 1e-12,
            detail: "20 random states".into(),
        });
    }

    // 5: analytic chi eigenvalues vs dense eigendecomposition
    {
        let mut max_err = 0.0_f64;
        for _ in 0..20 {
            let n = rng.random_range(1..=max_n);
            let beta = rng.random_range(0.0..5.0);
            let m = random_model(&mut rng, n, beta);
            let t: f64 = rng.random_range(0.0..6.0);
            let analytic = chi_eigenvalues(&coherence_factor(&m, t).unwrap()).unwrap();
            let numeric = eigenvalues_hermitian(&joint_state(&m, t).unwrap()).unwrap();
            for (a, b) in analytic.eigenvalues().iter().zip(numeric.eigenvalues()) {
                max_err = max_err.max((a - b).abs());
            }
            let q_entropy = 1.0 - von_neumann_entropy(&numeric).unwrap();
            let q_analytic =
                quantum_capacity_from_ratio(coherence_factor(&m, t).unwrap().ratio_abs()).unwrap();
            max_err = max_err.max((q_entropy - q_analytic).abs());
        }
        checks.push(Check {
            name: "chi eigenvalues vs 4x4 eigendecomposition",
            max_err,
            threshold: 1e-10,
            detail: "20 joint states".into(),
        });
    }

    // 6: limited-entanglement endpoints and monotonicity
    {
        let mut max_err = 0.0_f64;
        for _ in 0..20 {
            let r: f64 = rng.random_range(0.0..=1.0);
            let c_e = 1.0 + quantum_capacity_from_ratio(r).unwrap();
            max_err = max_err
                .max((limited_entanglement_from_ratio(r, 0.0).unwrap() - 1.0).abs())
                .max((limited_entanglement_from_ratio(r, FRAC_PI_4).unwrap() - c_e).abs());
            let mut prev = f64::NEG_INFINITY;
            for j in 0..=64 {
                let theta = FRAC_PI_4 * j as f64 / 64.0;
                let v = limited_entanglement_from_ratio(r, theta).unwrap();
                max_err = max_err.max((prev - v).max(0.0));
                prev = v;
            }
        }
        checks.push(Check {
            name: "limited-entanglement endpoints and monotonicity",
            max_err,
            threshold: 1e-12,
            detail: "20 ratios, 65-point theta grid".into(),
        });
    }

    // 7: appendix maximization grid
    {
        let mut max_err = 0.0_f64;
        for _ in 0..5 {
            let n = rng.random_range(1..=max_n);
            let beta = rng.random_range(0.0..5.0);
            let m = random_model(&mut rng, n, beta);
            let t: f64 = rng.random_range(0.0..6.0);
            let theta: f64 = rng.random_range(0.0..=FRAC_PI_4);
            let corner = appendix_cross_check(&m, t, theta, FRAC_PI_4, FRAC_PI_4).unwrap();
            let cap = limited_entanglement_from_ratio(
                coherence_factor(&m, t).unwrap().ratio_abs(),
                theta,
            )
            .unwrap();
            max_err = max_err.max((corner.total - cap).abs());
            for i in 0..17 {
                for j in 0..17 {
                    let x1 = FRAC_PI_4 * i as f64 / 16.0;
                    let x2 = FRAC_PI_4 * j as f64 / 16.0;
                    let terms = appendix_cross_check(&m, t, theta, x1, x2).unwrap();
                    max_err = max_err
                        .max((terms.term1 - corner.term1).abs())
                        .max((terms.term3 - corner.term3).abs())
                        .max((terms.total - corner.total).max(0.0));
                }
            }
        }
        checks.push(Check {
            name: "appendix grid argmax and term constancy",
            max_err,
            threshold: 1e-12,
            detail: "17x17 probability grid, 5 triples".into(),
        });
    }

    // 8: equal couplings: closed form and periodicity
    {
        let mut max_err = 0.0_f64;
        let n = max_n.min(8);
        let model = ModelSpec::equal(n, 1.0, 1.0, 1.0, 1.0).unwrap();
        let period = recurrence_period(1.0, 1.0).unwrap();
        for k in 0..40 {
            let t = k as f64 * period / 20.0;
            let closed = equal_coupling_coherence(n, 1.0, 1.0, 1.0, 1.0, t).unwrap();
            let general = coherence_factor(&model, t).unwrap();
            let brute = coherence_factor_bruteforce(&model, t).unwrap();
            max_err = max_err
                .max((closed.ratio_abs() - general.ratio_abs()).abs())
                .max((closed.decay() - brute.decay()).norm());
            let q0 = quantum_capacity_from_ratio(closed.ratio_abs()).unwrap();
            let q1 = quantum_capacity_from_ratio(
                equal_coupling_coherence(n, 1.0, 1.0, 1.0, 1.0, t + period)
                    .unwrap()
                    .ratio_abs(),
            )
            .unwrap();
            max_err = max_err.max((q0 - q1).abs());
        }
        checks.push(Check {
            name: "equal-coupling closed form and periodicity",
            max_err,
            threshold: 1e-10,
            detail: format!("N = {n}, 40 grid points over two periods"),
        });
    }

    let mut failures = 0;
    for check in &checks {
        let ok = check.max_err <= check.threshold;
        if !ok {
            failures += 1;
        }
        println!(
            "verify: {:<48} {}  max err {:.3e} (tol {:.1e}; {})",
            check.name,
            if ok { "pass" } else { "FAIL" },
            check.max_err,
            check.threshold,
            check.detail,
        );
    }
    println!(
        "verify: {}/{} checks passed at max_n = {max_n} in {:.2} s",
        checks.len() - failures,
        checks.len(),
        started.elapsed().as_secs_f64()
    );
    if failures > 0 {
        return Err(CliError::run(format!("{failures} verify check(s) failed")));
    }
    Ok(())
}
