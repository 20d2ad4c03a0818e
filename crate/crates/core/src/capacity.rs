//! Channel capacities of the spin-star dephasing channel.
//!
//! Every capacity is a function of the single scalar `r = |Pi_N(t)|/Z`:
//!
//! * classical capacity `C = 1` (the sigma_z basis is noiseless),
//! * quantum capacity `Q = 1 - H((1 + r)/2)`,
//! * entanglement-assisted classical capacity `C_E = 1 + Q`,
//! * entanglement-assisted quantum capacity `Q_E = C_E / 2`,
//! * limited-entanglement classical capacity `C_E_lim(theta)` for the
//!   orthogonal four-state ansatz at angle `theta` in `[0, pi/4]`,
//!
//! with `H` the binary entropy in bits.

use crate::error::{Error, Result};
use crate::model::{coherence_factor, CoherenceFactor, ModelSpec};
use crate::numerics::{binary_entropy, Spectrum};

use std::f64::consts::FRAC_PI_4;

const ANGLE_TOL: f64 = 1e-12;

/// Clamps roundoff-level negatives (>= -1e-12) to zero so downstream
/// CSV consumers never see -3e-17 where the exact value is 0.
fn clamp_capacity(x: f64) -> f64 {
    if (-1e-12..0.0).contains(&x) {
        0.0
    } else {
        x
    }
}

fn check_theta(theta: f64) -> Result<f64> {
    if !theta.is_finite() || !(-ANGLE_TOL..=FRAC_PI_4 + ANGLE_TOL).contains(&theta) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    Ok(theta.clamp(0.0, FRAC_PI_4))
}

/// Classical capacity: 1 bit per use, for every model and time.
///
/// States of the sigma_z eigenbasis pass through a dephasing channel
/// untouched, so one classical bit is transmitted noiselessly per use.
pub fn classical_capacity() -> f64 {
    1.0
}

/// The spectrum `{(1+r)/2, (1-r)/2, 0, 0}` of the joint system-reference
/// state, from the coherence factor alone.
pub fn chi_eigenvalues(cf: &CoherenceFactor) -> Result<Spectrum> {
    let r = cf.ratio_abs();
    Spectrum::new(vec![0.5 * (1.0 + r), 0.5 * (1.0 - r), 0.0, 0.0])
}

/// Quantum capacity as a function of `r = |Pi_N|/Z`.
pub fn quantum_capacity_from_ratio(ratio_abs: f64) -> Result<f64> {
    if !(0.0..=1.0 + ANGLE_TOL).contains(&ratio_abs) {
        return Err(Error::ProbabilityOutOfRange(ratio_abs));
    }
    let chi3 = 0.5 * (1.0 + ratio_abs.min(1.0));
    Ok(clamp_capacity(1.0 - binary_entropy(chi3)?))
}

/// Quantum capacity `Q(t) = 1 - H((1 + |Pi_N|/Z)/2)` in qubits per use.
pub fn quantum_capacity(m: &ModelSpec, t: f64) -> Result<f64> {
    quantum_capacity_from_ratio(coherence_factor(m, t)?.ratio_abs())
}

/// Entanglement-assisted classical capacity `C_E = 1 + Q` in bits per use.
pub fn entanglement_assisted_classical(m: &ModelSpec, t: f64) -> Result<f64> {
    Ok(1.0 + quantum_capacity(m, t)?)
}

/// Entanglement-assisted quantum capacity `Q_E = C_E / 2`.
pub fn entanglement_assisted_quantum(m: &ModelSpec, t: f64) -> Result<f64> {
    Ok(0.5 * entanglement_assisted_classical(m, t)?)
}

/// `C_E_lim(theta)` as a function of `r = |Pi_N|/Z`.
///
/// `H(cos^2 theta) + 1 - H(omega3)` with
/// `omega3 = (1 + sqrt((2 cos(theta) sin(theta) r)^2 + cos^2(2 theta)))/2`.
pub fn limited_entanglement_from_ratio(ratio_abs: f64, theta: f64) -> Result<f64> {
    let theta = check_theta(theta)?;
    if !(0.0..=1.0 + ANGLE_TOL).contains(&ratio_abs) {
        return Err(Error::ProbabilityOutOfRange(ratio_abs));
    }
    let r = ratio_abs.min(1.0);
    let (s, c) = theta.sin_cos();
    let disc = ((2.0 * c * s * r).powi(2) + (2.0 * theta).cos().powi(2)).sqrt();
    let omega3 = 0.5 * (1.0 + disc.min(1.0));
    Ok(binary_entropy(c * c)? + 1.0 - binary_entropy(omega3)?)
}

/// Classical capacity assisted by limited entanglement, for the
/// orthogonal four-state ansatz at angle `theta`.
///
/// Recovers the plain classical capacity 1 at `theta = 0` and the
/// unlimited `C_E` at `theta = pi/4`.
pub fn limited_entanglement_capacity(m: &ModelSpec, t: f64, theta: f64) -> Result<f64> {
    limited_entanglement_from_ratio(coherence_factor(m, t)?.ratio_abs(), theta)
}

/// Entanglement consumed per channel use by the ansatz at `theta`:
/// `H(cos^2 theta)` ebits. Monotone increasing on `[0, pi/4]`.
pub fn entanglement_cost(theta: f64) -> Result<f64> {
    let theta = check_theta(theta)?;
    let c = theta.cos();
    binary_entropy(c * c)
}

/// Inverts [`entanglement_cost`]: the unique `theta` in `[0, pi/4]`
/// whose ansatz consumes exactly `p_ebits` per use, by bisection to
/// 1e-12. Budgets above 1 ebit clamp to `pi/4`.
pub fn theta_from_budget(p_ebits: f64) -> Result<f64> {
    if !p_ebits.is_finite() || p_ebits < 0.0 {
        return Err(Error::NegativeBudget(p_ebits));
    }
    if p_ebits == 0.0 {
        return Ok(0.0);
    }
    if p_ebits >= 1.0 {
        return Ok(FRAC_PI_4);
    }
    let mut lo = 0.0_f64;
    let mut hi = FRAC_PI_4;
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if entanglement_cost(mid)? < p_ebits {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// An entanglement budget `P` (ebits per use) together with the ansatz
/// angle that spends exactly that much.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementBudget {
    p_ebits: f64,
    theta: f64,
}

impl EntanglementBudget {
    /// Budget of `p_ebits` per use; the angle follows by bisection.
    pub fn from_ebits(p_ebits: f64) -> Result<Self> {
        let theta = theta_from_budget(p_ebits)?;
        Ok(Self { p_ebits, theta })
    }

    /// Ansatz angle `theta`; the budget is its exact cost.
    pub fn from_theta(theta: f64) -> Result<Self> {
        let theta = check_theta(theta)?;
        Ok(Self {
            p_ebits: entanglement_cost(theta)?,
            theta,
        })
    }

    pub fn p_ebits(&self) -> f64 {
        self.p_ebits
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// The three terms of the limited-entanglement capacity under the
/// four-state ansatz with probabilities parametrized by `(x1, x2)`.
///
/// `total = term1 + term2 - term3`; only `term2` varies with the
/// probability parameters, and the total is maximized on the
/// equiprobable corner `x1 = x2 = pi/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppendixTerms {
    /// Mean input entropy `sum_i p_i S(rho_i) = H(cos^2 theta)`.
    pub term1: f64,
    /// Output entropy `H(cos^2 theta cos^2 x1 + sin^2 theta sin^2 x1)`.
    pub term2: f64,
    /// Mean output purification entropy `H(omega3)`.
    pub term3: f64,
    /// `term1 + term2 - term3`.
    pub total: f64,
}

/// Evaluates the limited-entanglement capacity expression away from the
/// equiprobable point, for verifying where the maximum sits.
pub fn appendix_cross_check(
    m: &ModelSpec,
    t: f64,
    theta: f64,
    x1: f64,
    x2: f64,
) -> Result<AppendixTerms> {
    let theta = check_theta(theta)?;
    let x1 = check_theta(x1)?;
    check_theta(x2)?; // the channel output is diagonal, so x2 cancels
    let ratio = coherence_factor(m, t)?.ratio_abs();

    let (st, ct) = theta.sin_cos();
    let term1 = binary_entropy(ct * ct)?;

    let (s1, c1) = x1.sin_cos();
    let upsilon1 = ct * ct * c1 * c1 + st * st * s1 * s1;
    let term2 = binary_entropy(upsilon1)?;

    let disc = ((2.0 * ct * st * ratio).powi(2) + (2.0 * theta).cos().powi(2)).sqrt();
    let term3 = binary_entropy(0.5 * (1.0 + disc.min(1.0)))?;

    Ok(AppendixTerms {
        term1,
        term2,
        term3,
        total: term1 + term2 - term3,
    })
}

/// All capacities of one channel at one time sample.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityPoint {
    pub t: f64,
    /// `|Pi_N(t)| / Z`.
    pub ratio_abs: f64,
    /// Quantum capacity, qubits per use.
    pub q: f64,
    /// Entanglement-assisted classical capacity, bits per use.
    pub c_e: f64,
    /// Entanglement-assisted quantum capacity, qubits per use.
    pub q_e: f64,
    /// Classical capacity, bits per use (always 1).
    pub c_classical: f64,
    /// `(theta, C_E_lim(theta))` for each requested angle; empty when no
    /// grid was requested.
    pub c_e_lim: Vec<(f64, f64)>,
}

/// Evaluates every capacity at time `t`, plus `C_E_lim` on the given
/// theta grid.
pub fn capacity_point(m: &ModelSpec, t: f64, theta_grid: &[f64]) -> Result<CapacityPoint> {
    let ratio_abs = coherence_factor(m, t)?.ratio_abs();
    let q = quantum_capacity_from_ratio(ratio_abs)?;
    let c_e = 1.0 + q;
    let c_e_lim = theta_grid
        .iter()
        .map(|&theta| Ok((theta, limited_entanglement_from_ratio(ratio_abs, theta)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CapacityPoint {
        t,
        ratio_abs,
        q,
        c_e,
        q_e: 0.5 * c_e,
        c_classical: classical_capacity(),
        c_e_lim,
    })
}
