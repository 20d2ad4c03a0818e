//! Small dense Hermitian linear algebra and entropy functions.
//!
//! Everything here operates on 2x2 or 4x4 matrices, which is all the
//! spin-star channel ever needs: the system qubit state and the joint
//! system-reference state. The eigensolver is a cyclic Jacobi iteration
//! on the real-symmetric embedding of the Hermitian matrix, so no
//! external linear-algebra dependency is required at this size.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Absolute tolerance for the Hermiticity and real-trace checks.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Eigenvalues below this are treated as exact zeros in entropy sums.
const ENTROPY_ZERO: f64 = 1e-15;

/// Density-matrix spectra may undershoot zero by at most this much.
const SPECTRUM_NEG_TOL: f64 = 1e-10;

fn ensure_finite(x: f64, what: &str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(format!("{what} = {x}")))
    }
}

/// Dense Hermitian matrix of dimension 2 or 4, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianOperator {
    /// Builds a Hermitian operator from row-major entries.
    ///
    /// Checks that the dimension is 2 or 4, that every entry is finite,
    /// that `entries[j][k] == conj(entries[k][j])` within `1e-12`, and
    /// that the trace is real within `1e-12`.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(Error::NotHermitian(format!(
                "dimension must be 2 or 4, got {dim}"
            )));
        }
        if entries.len() != dim * dim {
            return Err(Error::NotHermitian(format!(
                "expected {} entries for dim {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        for (idx, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite(format!("entry {idx} = {z}")));
            }
        }
        let mut residual: f64 = 0.0;
        for j in 0..dim {
            for k in j..dim {
                let d = entries[j * dim + k] - entries[k * dim + j].conj();
                residual = residual.max(d.norm());
            }
        }
        if residual > HERMITICITY_TOL {
            return Err(Error::NotHermitian(format!(
                "max |a[j][k] - conj(a[k][j])| = {residual:.3e} exceeds {HERMITICITY_TOL:.1e}"
            )));
        }
        let trace_im: f64 = (0..dim).map(|j| entries[j * dim + j].im).sum();
        if trace_im.abs() > HERMITICITY_TOL {
            return Err(Error::NotHermitian(format!(
                "imaginary trace {trace_im:.3e} exceeds {HERMITICITY_TOL:.1e}"
            )));
        }
        Ok(Self { dim, entries })
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Result<Self> {
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for j in 0..dim {
            entries[j * dim + j] = Complex64::new(1.0, 0.0);
        }
        Self::new(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Trace, which is real for a Hermitian matrix.
    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|j| self.get(j, j).re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Real-symmetric embedding `[[A, -B], [B, A]]` of `M = A + iB`.
    ///
    /// Its spectrum is that of `M` with every eigenvalue doubled.
    fn symmetric_embedding(&self) -> Vec<Vec<f64>> {
        let d = self.dim;
        let mut s = vec![vec![0.0; 2 * d]; 2 * d];
        for j in 0..d {
            for k in 0..d {
                let z = self.get(j, k);
                s[j][k] = z.re;
                s[j + d][k + d] = z.re;
                s[j][k + d] = -z.im;
                s[j + d][k] = z.im;
            }
        }
        s
    }
}

/// Real eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Wraps eigenvalues, sorting them in descending order.
    pub fn new(mut eigenvalues: Vec<f64>) -> Result<Self> {
        for &v in &eigenvalues {
            ensure_finite(v, "eigenvalue")?;
        }
        eigenvalues.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
        Ok(Self { eigenvalues })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Checks the density-matrix invariant: every eigenvalue in
    /// `[-1e-10, 1 + 1e-10]` and unit sum within `1e-10`.
    pub fn validate_density(&self) -> Result<()> {
        for &v in &self.eigenvalues {
            if v < -SPECTRUM_NEG_TOL {
                return Err(Error::InvalidSpectrum(format!(
                    "eigenvalue {v:.3e} below -{SPECTRUM_NEG_TOL:.1e}"
                )));
            }
            if v > 1.0 + SPECTRUM_NEG_TOL {
                return Err(Error::InvalidSpectrum(format!(
                    "eigenvalue {v} above 1 + {SPECTRUM_NEG_TOL:.1e}"
                )));
            }
        }
        let sum: f64 = self.eigenvalues.iter().sum();
        if (sum - 1.0).abs() > SPECTRUM_NEG_TOL {
            return Err(Error::InvalidSpectrum(format!(
                "eigenvalues sum to {sum}, expected 1"
            )));
        }
        Ok(())
    }
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix.
///
/// Sweeps until the off-diagonal Frobenius norm drops below
/// `1e-14 * ||S||_F`. Returns the eigenvalues (unsorted) together with
/// the accumulated rotation matrix, whose columns are eigenvectors.
fn jacobi_symmetric(mut s: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = s.len();
    let norm: f64 = s
        .iter()
        .flat_map(|row| row.iter())
        .map(|v| v * v)
        .sum::<f64>()
        .sqrt();
    let threshold = 1e-14 * norm.max(f64::MIN_POSITIVE);

    let mut vecs = vec![vec![0.0; n]; n];
    for (j, row) in vecs.iter_mut().enumerate() {
        row[j] = 1.0;
    }

    let off_norm = |s: &[Vec<f64>]| -> f64 {
        s.iter()
            .enumerate()
            .flat_map(|(p, row)| {
                row.iter()
                    .enumerate()
                    .filter(move |&(q, _)| q != p)
                    .map(|(_, v)| v * v)
            })
            .sum::<f64>()
            .sqrt()
    };

    // Quadratic convergence; 50 sweeps is far more than an 8x8 needs.
    for _ in 0..50 {
        if off_norm(&s) <= threshold {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = s[p][q];
                if apq.abs() <= threshold / (n as f64) {
                    continue;
                }
                let tau = (s[q][q] - s[p][p]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * c;

                for row in s.iter_mut() {
                    let skp = row[p];
                    let skq = row[q];
                    row[p] = c * skp - sn * skq;
                    row[q] = sn * skp + c * skq;
                }
                let (top, bottom) = s.split_at_mut(q);
                for (spk, sqk) in top[p].iter_mut().zip(bottom[0].iter_mut()) {
                    let a = *spk;
                    let b = *sqk;
                    *spk = c * a - sn * b;
                    *sqk = sn * a + c * b;
                }
                for row in vecs.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - sn * vq;
                    row[q] = sn * vp + c * vq;
                }
            }
        }
    }

    let eigenvalues = (0..n).map(|j| s[j][j]).collect();
    (eigenvalues, vecs)
}

/// All eigenvalues of a Hermitian matrix, sorted descending.
///
/// Diagonalizes the `2*dim x 2*dim` real-symmetric embedding, in which
/// each eigenvalue of the Hermitian matrix appears twice, and keeps one
/// copy of each pair.
pub fn eigenvalues_hermitian(m: &HermitianOperator) -> Result<Spectrum> {
    let (mut vals, _) = jacobi_symmetric(m.symmetric_embedding());
    vals.sort_by(|a, b| b.partial_cmp(a).expect("finite eigenvalues"));
    let deduped: Vec<f64> = vals.into_iter().step_by(2).collect();
    Spectrum::new(deduped)
}

/// One term of the entropy sum, with the convention `0 * log2(0) = 0`.
///
/// The zero branch is explicit (at `lambda <= 1e-15`) rather than taken
/// as a limit, so an exact zero never produces a NaN.
pub(crate) fn entropy_term(lambda: f64) -> f64 {
    if lambda <= ENTROPY_ZERO {
        0.0
    } else {
        -lambda * lambda.log2()
    }
}

/// Von Neumann entropy `-sum(lambda * log2(lambda))` in bits.
///
/// The spectrum must satisfy the density-matrix invariant.
pub fn von_neumann_entropy(s: &Spectrum) -> Result<f64> {
    s.validate_density()?;
    let entropy: f64 = s.eigenvalues.iter().map(|&v| entropy_term(v)).sum();
    // Roundoff on eigenvalues within a few ulp of 1 can leave a tiny
    // negative total; the exact value is in [0, log2(dim)].
    Ok(entropy.max(0.0))
}

/// Binary entropy `-p log2(p) - (1-p) log2(1-p)` in bits.
pub fn binary_entropy(p: f64) -> Result<f64> {
    ensure_finite(p, "probability")?;
    if !(-HERMITICITY_TOL..=1.0 + HERMITICITY_TOL).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    let p = p.clamp(0.0, 1.0);
    Ok((entropy_term(p) + entropy_term(1.0 - p)).max(0.0))
}
