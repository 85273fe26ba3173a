//! Hermitian eigendecomposition (cyclic complex Jacobi) and the spectral
//! functions used by the Petz maps: square root, support pseudo-inverse
//! square root and support projector.

use alloc::vec::Vec;

use super::{real, ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Relative asymmetry `‖m − m†‖_F / ‖m‖_F` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

/// Eigenvalues in descending order with matching orthonormal eigenvector
/// columns.
#[derive(Clone, Debug)]
pub struct HermitianEigensystem {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigensystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// `V · diag(f(λ)) · V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut acc = ZERO;
            for (k, &w) in weights.iter().enumerate() {
                if w != 0.0 {
                    acc += v[(i, k)] * v[(j, k)].conj() * w;
                }
            }
            acc
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }

    /// The support cutoff `τ = dim · 1e-12 · max|λ|` for this spectrum.
    pub fn cutoff(&self) -> f64 {
        spectral_cutoff(&self.eigenvalues)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Errors with `NotPsd` if any eigenvalue falls below `−τ`.
    pub fn check_psd(&self) -> Result<()> {
        let tau = self.cutoff();
        let min = self.min_eigenvalue();
        if min < -tau {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        Ok(())
    }

    /// Number of eigenvalues above `τ`.
    pub fn rank(&self) -> usize {
        let tau = self.cutoff();
        self.eigenvalues.iter().filter(|&&l| l > tau).count()
    }
}

/// Eigenvalue support cutoff: `dim · 1e-12 · max|λ|`.
pub fn spectral_cutoff(eigenvalues: &[f64]) -> f64 {
    let scale = eigenvalues.iter().fold(0.0f64, |m, &l| m.max(l.abs()));
    eigenvalues.len() as f64 * 1e-12 * scale
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Input is accepted when its relative asymmetry is within
/// [`HERMITIAN_TOL`]; the Hermitian part is then diagonalized.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigensystem> {
    let n = m.require_square("hermitian_eig")?;
    let asymmetry = m.hermitian_asymmetry();
    if asymmetry > HERMITIAN_TOL {
        return Err(Error::NotHermitian { asymmetry });
    }
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let norm = a.frobenius_norm();

    if n > 1 && norm > 0.0 {
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= 1e-14 * norm {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q, 1e-18 * norm);
                }
            }
        }
        if !converged && off_diagonal_norm(&a) > 1e-14 * norm {
            return Err(Error::NoConvergence);
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(HermitianEigensystem {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    libm::sqrt(acc)
}

/// One Jacobi rotation annihilating `a[p][q]`.
///
/// The pivot is first made real by a phase on column `q`, then a real
/// symmetric Schur rotation is applied; `U = diag-phase · J`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, skip_below: f64) {
    let apq = a[(p, q)];
    let mag = apq.norm();
    if mag <= skip_below {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let phase = apq / mag;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let tau = (aqq - app) / (2.0 * mag);
    let t = if tau >= 0.0 {
        1.0 / (tau + libm::sqrt(1.0 + tau * tau))
    } else {
        -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
    };
    let c = 1.0 / libm::sqrt(1.0 + t * t);
    let s = t * c;

    // U restricted to the (p, q) plane.
    let u_pp = real(c);
    let u_pq = real(s);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    let n = a.rows();
    // A ← A U (columns).
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    // A ← U† A (rows).
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = real(a[(p, p)].re);
    a[(q, q)] = real(a[(q, q)].re);
    // V ← V U.
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * u_pp + vkq * u_qp;
        v[(k, q)] = vkp * u_pq + vkq * u_qq;
    }
}

/// Square root of a PSD matrix. Eigenvalues at or below `τ` count as zero,
/// so the root has the same support as the other support-aware functions.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    eig.check_psd()?;
    let tau = eig.cutoff();
    Ok(eig.reconstruct_with(|l| if l > tau { libm::sqrt(l) } else { 0.0 }))
}

/// Support pseudo-inverse square root: `λ > τ ↦ λ^{-1/2}`, else 0.
pub fn support_inv_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    eig.check_psd()?;
    let tau = eig.cutoff();
    if eig.rank() == 0 {
        return Err(Error::ZeroOperator);
    }
    Ok(eig.reconstruct_with(|l| if l > tau { 1.0 / libm::sqrt(l) } else { 0.0 }))
}

/// Orthogonal projector onto the eigenspaces with eigenvalue above `τ`.
pub fn support_projector(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(m)?;
    eig.check_psd()?;
    let tau = eig.cutoff();
    Ok(eig.reconstruct_with(|l| if l > tau { 1.0 } else { 0.0 }))
}
