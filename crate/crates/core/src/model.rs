//! The Ising spin-star dephasing channel.
//!
//! A central qubit couples diagonally to N non-interacting bath spins
//! prepared in a Gibbs state. The channel it generates is pure dephasing:
//! populations in the sigma_z basis are untouched while the off-diagonal
//! coherence is multiplied by a complex factor whose magnitude is
//! `|Pi_N(t)| / Z`, with
//!
//! ```text
//! Pi_N(t) = prod_n 2 cosh(beta*Omega_n/2 + 2i*alpha*t*g_n)
//! Z       = prod_n 2 cosh(beta*Omega_n/2)
//! ```
//!
//! The product form is evaluated in the log domain so bath sizes of 100+
//! never overflow; [`coherence_factor_bruteforce`] evaluates the literal
//! 2^N sum over bath configurations and serves as the oracle for it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{eigenvalues_hermitian, HermitianOperator};

/// Largest bath for which 2^N enumeration is allowed (about 10^6 terms).
pub const BRUTE_FORCE_MAX_BATH: usize = 20;

const RATIO_TOL: f64 = 1e-12;

type Mat2 = [[Complex64; 2]; 2];

fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (j, row) in out.iter_mut().enumerate() {
        for (k, v) in row.iter_mut().enumerate() {
            *v = a[j][0] * b[0][k] + a[j][1] * b[1][k];
        }
    }
    out
}

fn mat2_adjoint(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

/// `log|2 cosh(a + ib)|` and `arg cosh(a + ib)`, stable for large `|a|`.
///
/// Uses `cosh(a+ib) = e^{|a|}/2 * ((1+u) cos b + i sgn(a)(1-u) sin b)`
/// with `u = e^{-2|a|}`, so nothing overflows even for `a` in the
/// hundreds; `exp_m1` keeps `1 - u` accurate at tiny `|a|`.
pub(crate) fn log_two_cosh(a: f64, b: f64) -> (f64, f64) {
    let em = (-2.0 * a.abs()).exp_m1(); // u - 1, in [-1, 0]
    let (sb, cb) = b.sin_cos();
    let re = (2.0 + em) * cb;
    let im = -a.signum() * em * sb;
    let log_abs = a.abs() + 0.5 * (re * re + im * im).ln();
    (log_abs, im.atan2(re))
}

/// Full physical parameterization of one spin-star channel.
///
/// `alpha` is the overall coupling strength (frequency units), `beta`
/// the inverse bath temperature, and each bath spin n carries a
/// dimensionless coupling `g_n` and a frequency `Omega_n`. The system
/// frequency `omega0` is stored for completeness but never enters the
/// capacities: the interaction picture removes it.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    alpha: f64,
    beta: f64,
    couplings: Vec<f64>,
    frequencies: Vec<f64>,
    omega0: f64,
}

impl ModelSpec {
    /// Builds a model, warning (via `log`) when couplings or frequencies
    /// leave the nominal `[-1, 1]` interval. Use [`ModelSpec::strict`]
    /// to make that an error instead.
    pub fn new(alpha: f64, beta: f64, couplings: Vec<f64>, frequencies: Vec<f64>) -> Result<Self> {
        let spec = Self::validate_common(alpha, beta, couplings, frequencies)?;
        for (n, &g) in spec.couplings.iter().enumerate() {
            if !(-1.0..=1.0).contains(&g) {
                log::warn!("coupling g[{n}] = {g} outside the nominal interval [-1, 1]");
            }
        }
        for (n, &om) in spec.frequencies.iter().enumerate() {
            if !(-1.0..=1.0).contains(&om) {
                log::warn!("frequency omega[{n}] = {om} outside the nominal interval [-1, 1]");
            }
        }
        Ok(spec)
    }

    /// Like [`ModelSpec::new`] but rejects couplings or frequencies
    /// outside `[-1, 1]`.
    pub fn strict(
        alpha: f64,
        beta: f64,
        couplings: Vec<f64>,
        frequencies: Vec<f64>,
    ) -> Result<Self> {
        let spec = Self::validate_common(alpha, beta, couplings, frequencies)?;
        for (n, &g) in spec.couplings.iter().enumerate() {
            if !(-1.0..=1.0).contains(&g) {
                return Err(Error::InvalidModel(format!(
                    "strict mode: coupling g[{n}] = {g} outside [-1, 1]"
                )));
            }
        }
        for (n, &om) in spec.frequencies.iter().enumerate() {
            if !(-1.0..=1.0).contains(&om) {
                return Err(Error::InvalidModel(format!(
                    "strict mode: frequency omega[{n}] = {om} outside [-1, 1]"
                )));
            }
        }
        Ok(spec)
    }

    /// Bath with `n` spins all sharing coupling `g` and frequency `omega`.
    pub fn equal(n: usize, alpha: f64, beta: f64, g: f64, omega: f64) -> Result<Self> {
        Self::new(alpha, beta, vec![g; n], vec![omega; n])
    }

    fn validate_common(
        alpha: f64,
        beta: f64,
        couplings: Vec<f64>,
        frequencies: Vec<f64>,
    ) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::InvalidModel(format!(
                "alpha must be finite and positive, got {alpha}"
            )));
        }
        if !beta.is_finite() || beta < 0.0 {
            return Err(Error::InvalidModel(format!(
                "beta must be finite and nonnegative, got {beta}"
            )));
        }
        if couplings.is_empty() {
            return Err(Error::InvalidModel(
                "bath must have at least one spin".into(),
            ));
        }
        if couplings.len() != frequencies.len() {
            return Err(Error::InvalidModel(format!(
                "{} couplings but {} frequencies",
                couplings.len(),
                frequencies.len()
            )));
        }
        if couplings
            .iter()
            .chain(frequencies.iter())
            .any(|v| !v.is_finite())
        {
            return Err(Error::InvalidModel(
                "couplings and frequencies must be finite".into(),
            ));
        }
        Ok(Self {
            alpha,
            beta,
            couplings,
            frequencies,
            omega0: 0.0,
        })
    }

    /// Sets the system frequency omega0 (stored, not used by capacities).
    pub fn with_omega0(mut self, omega0: f64) -> Result<Self> {
        if !omega0.is_finite() {
            return Err(Error::InvalidModel(format!(
                "omega0 must be finite, got {omega0}"
            )));
        }
        self.omega0 = omega0;
        Ok(self)
    }

    pub fn n_bath(&self) -> usize {
        self.couplings.len()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    /// Thermal expectation of the bath coupling operator,
    /// `sum_n g_n tanh(-beta*Omega_n/2)`.
    ///
    /// Subtracting it from the Kraus phase energies shifts the channel's
    /// coherence factor by the global phase `exp(2i*alpha*t*shift)` and
    /// nothing else; only the magnitude enters the capacities.
    pub fn thermal_coupling_mean(&self) -> f64 {
        self.couplings
            .iter()
            .zip(&self.frequencies)
            .map(|(&g, &om)| g * (-0.5 * self.beta * om).tanh())
            .sum()
    }

    fn check_time(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidTime(t));
        }
        Ok(self.alpha * t)
    }

    fn check_brute_force(&self) -> Result<()> {
        let n = self.n_bath();
        if n > BRUTE_FORCE_MAX_BATH {
            return Err(Error::BathTooLarge {
                n,
                max: BRUTE_FORCE_MAX_BATH,
            });
        }
        Ok(())
    }
}

/// The pair (Pi_N(t), Z) that determines every capacity of the channel.
///
/// Stored in the log domain so that baths of hundreds of spins do not
/// overflow; `Pi_N` and `Z` themselves are materialized on demand and
/// may be infinite for extreme `beta * Omega * N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceFactor {
    log_abs_pi: f64,
    arg_pi: f64,
    log_z: f64,
    ratio_abs: f64,
}

impl CoherenceFactor {
    pub(crate) fn from_logs(log_abs_pi: f64, arg_pi: f64, log_z: f64) -> Result<Self> {
        if log_z.is_nan() || log_abs_pi.is_nan() || !arg_pi.is_finite() {
            return Err(Error::NonFinite(format!(
                "coherence factor logs: log|Pi| = {log_abs_pi}, arg = {arg_pi}, log Z = {log_z}"
            )));
        }
        let raw = (log_abs_pi - log_z).exp();
        if raw > 1.0 + RATIO_TOL {
            return Err(Error::NonFinite(format!(
                "|Pi_N|/Z = {raw} exceeds 1 beyond tolerance"
            )));
        }
        Ok(Self {
            log_abs_pi,
            arg_pi,
            log_z,
            ratio_abs: raw.clamp(0.0, 1.0),
        })
    }

    /// `Pi_N(t)` itself; infinite components for extreme parameters.
    pub fn pi(&self) -> Complex64 {
        Complex64::from_polar(self.log_abs_pi.exp(), self.arg_pi)
    }

    /// Partition function `Z`; `+inf` when it exceeds f64 range.
    pub fn z(&self) -> f64 {
        self.log_z.exp()
    }

    /// `log |Pi_N(t)|`, always finite except at exact zeros of `Pi_N`.
    pub fn log_abs_pi(&self) -> f64 {
        self.log_abs_pi
    }

    /// `arg Pi_N(t)` accumulated over bath spins (not wrapped).
    pub fn arg_pi(&self) -> f64 {
        self.arg_pi
    }

    /// `log Z`, always finite.
    pub fn log_z(&self) -> f64 {
        self.log_z
    }

    /// `|Pi_N(t)| / Z`, clamped to `[0, 1]`. Equals 1 exactly at `t = 0`.
    pub fn ratio_abs(&self) -> f64 {
        self.ratio_abs
    }

    /// The normalized coherence multiplier `Pi_N(t) / Z`.
    ///
    /// Lives in the closed unit disk, so it is materializable for any
    /// bath size. The channel multiplies the qubit's off-diagonal by
    /// this, times the global thermal-shift phase.
    pub fn decay(&self) -> Complex64 {
        Complex64::from_polar(self.ratio_abs, self.arg_pi)
    }
}

/// `log Z = sum_n log 2cosh(beta*Omega_n/2)`, finite for any bath size.
pub fn log_partition_function(m: &ModelSpec) -> f64 {
    m.frequencies()
        .iter()
        .map(|&om| log_two_cosh(0.5 * m.beta() * om, 0.0).0)
        .sum()
}

/// Partition function `Z = prod_n 2cosh(beta*Omega_n/2)`.
///
/// Accumulated in the log domain and exponentiated at the end, so the
/// result is `+inf` (never garbage) when Z exceeds f64 range; use
/// [`log_partition_function`] in that regime.
pub fn partition_function(m: &ModelSpec) -> f64 {
    log_partition_function(m).exp()
}

/// Coherence factor via the product form, `Pi_N = prod_n 2cosh(f_n(t))`
/// with `f_n = beta*Omega_n/2 + 2i*alpha*t*g_n`.
pub fn coherence_factor(m: &ModelSpec, t: f64) -> Result<CoherenceFactor> {
    let at = m.check_time(t)?;
    let mut log_abs = 0.0;
    let mut arg = 0.0;
    let mut log_z = 0.0;
    for (&g, &om) in m.couplings().iter().zip(m.frequencies()) {
        let a = 0.5 * m.beta() * om;
        let (l, ph) = log_two_cosh(a, 2.0 * at * g);
        log_abs += l;
        arg += ph;
        log_z += log_two_cosh(a, 0.0).0;
    }
    CoherenceFactor::from_logs(log_abs, arg, log_z)
}

/// Coherence factor via the literal 2^N sum over bath bit-strings.
///
/// This is the oracle for [`coherence_factor`]; it never takes the
/// product shortcut. Limited to `N <= 20`.
pub fn coherence_factor_bruteforce(m: &ModelSpec, t: f64) -> Result<CoherenceFactor> {
    m.check_brute_force()?;
    let at = m.check_time(t)?;
    let n = m.n_bath();
    // Kahan-compensated accumulators: the 2^N terms mostly cancel at
    // strong dephasing, so naive summation would lose digits.
    let mut pi_re = KahanSum::default();
    let mut pi_im = KahanSum::default();
    let mut z = KahanSum::default();
    for i in 0u64..(1 << n) {
        let mut s_re = 0.0;
        let mut s_im = 0.0;
        for (bit, (&g, &om)) in m.couplings().iter().zip(m.frequencies()).enumerate() {
            let sign = if (i >> bit) & 1 == 1 { -1.0 } else { 1.0 };
            s_re += 0.5 * m.beta() * om * sign;
            s_im += 2.0 * at * g * sign;
        }
        let w = (-s_re).exp();
        pi_re.add(w * s_im.cos());
        pi_im.add(-w * s_im.sin());
        z.add(w);
    }
    let pi = Complex64::new(pi_re.value(), pi_im.value());
    CoherenceFactor::from_logs(pi.norm().ln(), pi.arg(), z.value().ln())
}

#[derive(Debug, Default, Clone, Copy)]
struct KahanSum {
    sum: f64,
    compensation: f64,
}

impl KahanSum {
    fn add(&mut self, x: f64) {
        let y = x - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

/// One diagonal Kraus operator: `K = sqrt(weight) * exp(-i*alpha*t*phase_energy*sigma_z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrausOperator {
    /// Gibbs weight `lambda_i = exp(-beta E_i) / Z`.
    pub weight: f64,
    /// Shifted phase energy `E~_i = sum_n g_n [(-1)^{i_n} - tanh(-beta*Omega_n/2)]`.
    pub phase_energy: f64,
}

/// The 2^N diagonal Kraus operators of the channel at a fixed time.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    alpha_t: f64,
    operators: Vec<KrausOperator>,
}

impl KrausSet {
    pub fn operators(&self) -> &[KrausOperator] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// The dimensionless time `alpha * t` the set was built at.
    pub fn alpha_t(&self) -> f64 {
        self.alpha_t
    }

    /// `sum_i lambda_i`, which must equal 1.
    pub fn weight_sum(&self) -> f64 {
        self.operators.iter().map(|op| op.weight).sum()
    }

    /// Materializes the k-th operator as an explicit 2x2 matrix,
    /// `sqrt(weight) * diag(exp(-i phi), exp(+i phi))` with
    /// `phi = alpha*t*phase_energy`.
    pub fn matrix(&self, k: usize) -> [[Complex64; 2]; 2] {
        let op = &self.operators[k];
        let amp = op.weight.sqrt();
        let phi = self.alpha_t * op.phase_energy;
        [
            [
                amp * Complex64::from_polar(1.0, -phi),
                Complex64::new(0.0, 0.0),
            ],
            [
                Complex64::new(0.0, 0.0),
                amp * Complex64::from_polar(1.0, phi),
            ],
        ]
    }

    /// Off-diagonal multiplier `sum_i lambda_i exp(-2i*alpha*t*E~_i)`.
    ///
    /// Its magnitude equals `|Pi_N|/Z`; the thermal shift in the phase
    /// energies contributes only a global phase.
    pub fn decay_factor(&self) -> Complex64 {
        self.operators
            .iter()
            .map(|op| op.weight * Complex64::from_polar(1.0, -2.0 * self.alpha_t * op.phase_energy))
            .sum()
    }

    /// Frobenius norm of `sum_i K_i^dag K_i - I`.
    pub fn completeness_residual(&self) -> f64 {
        let mut acc = [[Complex64::new(0.0, 0.0); 2]; 2];
        for k in 0..self.len() {
            let mat = self.matrix(k);
            let prod = mat2_mul(&mat2_adjoint(&mat), &mat);
            for j in 0..2 {
                for l in 0..2 {
                    acc[j][l] += prod[j][l];
                }
            }
        }
        acc[0][0] -= 1.0;
        acc[1][1] -= 1.0;
        acc.iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Applies the channel by its definition, `sum_i K_i rho K_i^dag`,
    /// with explicit matrix products (no dephasing shortcut).
    pub fn apply(&self, rho: &HermitianOperator) -> Result<HermitianOperator> {
        validate_density_matrix(rho)?;
        let r: Mat2 = [
            [rho.get(0, 0), rho.get(0, 1)],
            [rho.get(1, 0), rho.get(1, 1)],
        ];
        let mut acc = [[Complex64::new(0.0, 0.0); 2]; 2];
        for k in 0..self.len() {
            let mat = self.matrix(k);
            let out = mat2_mul(&mat2_mul(&mat, &r), &mat2_adjoint(&mat));
            for j in 0..2 {
                for l in 0..2 {
                    acc[j][l] += out[j][l];
                }
            }
        }
        // Force the exact Hermitian mean of the accumulated roundoff.
        let off = 0.5 * (acc[0][1] + acc[1][0].conj());
        HermitianOperator::new(
            2,
            vec![
                Complex64::new(acc[0][0].re, 0.0),
                off,
                off.conj(),
                Complex64::new(acc[1][1].re, 0.0),
            ],
        )
    }
}

fn validate_density_matrix(rho: &HermitianOperator) -> Result<()> {
    if rho.dim() != 2 {
        return Err(Error::InvalidDensityMatrix(format!(
            "expected a qubit state (dim 2), got dim {}",
            rho.dim()
        )));
    }
    if (rho.trace() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidDensityMatrix(format!(
            "trace {} differs from 1",
            rho.trace()
        )));
    }
    let spectrum = eigenvalues_hermitian(rho)?;
    if spectrum.eigenvalues().iter().any(|&v| v < -1e-10) {
        return Err(Error::InvalidDensityMatrix(format!(
            "negative eigenvalue {:.3e}",
            spectrum.eigenvalues()[spectrum.len() - 1]
        )));
    }
    Ok(())
}

/// The 2^N diagonal Kraus operators at time `t`. Limited to `N <= 20`.
pub fn kraus_set(m: &ModelSpec, t: f64) -> Result<KrausSet> {
    m.check_brute_force()?;
    let at = m.check_time(t)?;
    let n = m.n_bath();
    let log_z = log_partition_function(m);
    let shifts: Vec<f64> = m
        .frequencies()
        .iter()
        .map(|&om| (-0.5 * m.beta() * om).tanh())
        .collect();
    let mut operators = Vec::with_capacity(1 << n);
    for i in 0u64..(1 << n) {
        let mut beta_e = 0.0;
        let mut e_tilde = 0.0;
        for (bit, (&g, &om)) in m.couplings().iter().zip(m.frequencies()).enumerate() {
            let sign = if (i >> bit) & 1 == 1 { -1.0 } else { 1.0 };
            beta_e += 0.5 * m.beta() * om * sign;
            e_tilde += g * (sign - shifts[bit]);
        }
        operators.push(KrausOperator {
            weight: (-beta_e - log_z).exp(),
            phase_energy: e_tilde,
        });
    }
    Ok(KrausSet {
        alpha_t: at,
        operators,
    })
}

/// Applies the channel `rho -> sum_i K_i rho K_i^dag` to a qubit state.
pub fn apply_channel(kraus: &KrausSet, rho: &HermitianOperator) -> Result<HermitianOperator> {
    kraus.apply(rho)
}

/// The joint system-reference state after sending half of a maximally
/// entangled pair through the channel.
///
/// A 4x4 density matrix with populations 1/2 on |00> and |11> and the
/// |00><11| coherence scaled by the channel's full decay factor. Its
/// spectrum is `{(1 + r)/2, (1 - r)/2, 0, 0}` with `r = |Pi_N|/Z`.
/// Uses the product-form coherence factor, so any bath size is allowed.
pub fn joint_state(m: &ModelSpec, t: f64) -> Result<HermitianOperator> {
    let cf = coherence_factor(m, t)?;
    let phase = cf.arg_pi() + 2.0 * m.alpha() * t * m.thermal_coupling_mean();
    let d = Complex64::from_polar(0.5 * cf.ratio_abs(), phase);
    let zero = Complex64::new(0.0, 0.0);
    let half = Complex64::new(0.5, 0.0);
    HermitianOperator::new(
        4,
        vec![
            half,
            zero,
            zero,
            d, //
            zero,
            zero,
            zero,
            zero, //
            zero,
            zero,
            zero,
            zero, //
            d.conj(),
            zero,
            zero,
            half,
        ],
    )
}
