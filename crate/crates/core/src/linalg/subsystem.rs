//! Subsystem bookkeeping: partial traces, partial transposes and the
//! double-ket vectorization `|A⟩⟩ = Σ ⟨i,j|A|k,l⟩ |i,j,k,l⟩` on `S R S' R'`.

use alloc::vec;
use alloc::vec::Vec;

use super::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Splits every full basis index into (kept index, traced index).
struct Split {
    kept_dim: usize,
    traced_dim: usize,
    kept: Vec<usize>,
    traced: Vec<usize>,
}

fn split(dims: &[usize], traced: &[usize], side: usize) -> Result<Split> {
    let total: usize = dims.iter().product();
    if total != side {
        return Err(Error::DimensionMismatch {
            context: "subsystem dimensions",
            expected: side,
            found: total,
        });
    }
    let mut is_traced = vec![false; dims.len()];
    for &t in traced {
        if t >= dims.len() || is_traced[t] {
            return Err(Error::DimensionMismatch {
                context: "traced subsystem index",
                expected: dims.len(),
                found: t,
            });
        }
        is_traced[t] = true;
    }
    let mut kept = vec![0usize; total];
    let mut tr = vec![0usize; total];
    for idx in 0..total {
        let mut rem = idx;
        let (mut k, mut t) = (0usize, 0usize);
        let (mut k_stride, mut t_stride) = (1usize, 1usize);
        for (s, &d) in dims.iter().enumerate().rev() {
            let digit = rem % d;
            rem /= d;
            if is_traced[s] {
                t += digit * t_stride;
                t_stride *= d;
            } else {
                k += digit * k_stride;
                k_stride *= d;
            }
        }
        kept[idx] = k;
        tr[idx] = t;
    }
    let traced_dim: usize = dims
        .iter()
        .zip(&is_traced)
        .filter(|(_, &t)| t)
        .map(|(d, _)| d)
        .product();
    Ok(Split {
        kept_dim: total / traced_dim.max(1),
        traced_dim,
        kept,
        traced: tr,
    })
}

impl Split {
    fn groups(&self) -> Vec<Vec<(usize, usize)>> {
        let mut groups = vec![Vec::new(); self.traced_dim];
        for (full, (&k, &t)) in self.kept.iter().zip(&self.traced).enumerate() {
            groups[t].push((full, k));
        }
        groups
    }
}

/// Traces out the subsystems listed in `traced` (indices into `dims`).
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], traced: &[usize]) -> Result<ComplexMatrix> {
    let side = m.require_square("partial_trace")?;
    let sp = split(dims, traced, side)?;
    let mut out = ComplexMatrix::zeros(sp.kept_dim, sp.kept_dim);
    for group in sp.groups() {
        for &(i, ki) in &group {
            for &(j, kj) in &group {
                out[(ki, kj)] += m[(i, j)];
            }
        }
    }
    Ok(out)
}

/// `Tr_traced |v⟩⟨v|` without materializing the outer product.
pub fn partial_trace_pure(v: &[C64], dims: &[usize], traced: &[usize]) -> Result<ComplexMatrix> {
    let sp = split(dims, traced, v.len())?;
    let mut out = ComplexMatrix::zeros(sp.kept_dim, sp.kept_dim);
    for group in sp.groups() {
        for &(i, ki) in &group {
            let vi = v[i];
            if vi == ZERO {
                continue;
            }
            for &(j, kj) in &group {
                out[(ki, kj)] += vi * v[j].conj();
            }
        }
    }
    Ok(out)
}

/// Transposes the listed subsystems, leaving the others untouched.
pub fn partial_transpose(m: &ComplexMatrix, dims: &[usize], transposed: &[usize]) -> Result<ComplexMatrix> {
    let side = m.require_square("partial_transpose")?;
    let sp = split(dims, transposed, side)?;
    // full index = recombination of (kept, traced) digits; build the inverse map.
    let mut full_of = vec![0usize; side];
    for idx in 0..side {
        full_of[sp.kept[idx] * sp.traced_dim + sp.traced[idx]] = idx;
    }
    Ok(ComplexMatrix::from_fn(side, side, |i, j| {
        let (ki, ti) = (sp.kept[i], sp.traced[i]);
        let (kj, tj) = (sp.kept[j], sp.traced[j]);
        m[(
            full_of[ki * sp.traced_dim + tj],
            full_of[kj * sp.traced_dim + ti],
        )]
    }))
}

/// `|A⟩⟩` for an operator on `S ⊗ R`, as a vector on `S R S' R'`.
///
/// Component `(i, j, k, l)` is `⟨i,j|A|k,l⟩`; with row-major storage this is
/// exactly the flattened matrix.
pub fn double_ket(a: &ComplexMatrix, dim_s: usize, dim_r: usize) -> Result<Vec<C64>> {
    let side = a.require_square("double_ket")?;
    if side != dim_s * dim_r {
        return Err(Error::DimensionMismatch {
            context: "double_ket split",
            expected: side,
            found: dim_s * dim_r,
        });
    }
    Ok(a.as_slice().to_vec())
}
