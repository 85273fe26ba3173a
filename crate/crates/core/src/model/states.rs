//! Named qubit states, Pauli matrices and Bloch-vector conversions.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::{real, ComplexMatrix, C64, ONE, ZERO};

const H: f64 = core::f64::consts::FRAC_1_SQRT_2;

pub fn ket0() -> Vec<C64> {
    vec![ONE, ZERO]
}

pub fn ket1() -> Vec<C64> {
    vec![ZERO, ONE]
}

pub fn plus() -> Vec<C64> {
    vec![real(H), real(H)]
}

pub fn minus() -> Vec<C64> {
    vec![real(H), real(-H)]
}

pub fn plus_i() -> Vec<C64> {
    vec![real(H), C64::new(0.0, H)]
}

pub fn minus_i() -> Vec<C64> {
    vec![real(H), C64::new(0.0, -H)]
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn phi_plus() -> Vec<C64> {
    vec![real(H), ZERO, ZERO, real(H)]
}

/// The six Pauli eigenstates in the order `0, 1, +, −, +i, −i`.
pub fn pauli_eigenstates() -> [(&'static str, Vec<C64>); 6] {
    [
        ("0", ket0()),
        ("1", ket1()),
        ("+", plus()),
        ("-", minus()),
        ("+i", plus_i()),
        ("-i", minus_i()),
    ]
}

/// Bloch vectors of a regular tetrahedron with one vertex at `|0⟩`.
pub fn tetrahedron() -> [[f64; 3]; 4] {
    let s = libm::sqrt(2.0) / 3.0;
    let t = libm::sqrt(2.0 / 3.0);
    [
        [0.0, 0.0, 1.0],
        [2.0 * s, 0.0, -1.0 / 3.0],
        [-s, t, -1.0 / 3.0],
        [-s, -t, -1.0 / 3.0],
    ]
}

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ZERO, ONE], [ONE, ZERO]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ZERO, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), ZERO]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[1.0, -1.0])
}

/// `(𝟙 + x X + y Y + z Z)/2`.
pub fn bloch_matrix([x, y, z]: [f64; 3]) -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        [real((1.0 + z) / 2.0), C64::new(x / 2.0, -y / 2.0)],
        [C64::new(x / 2.0, y / 2.0), real((1.0 - z) / 2.0)],
    ])
}

/// Bloch vector of a 2×2 operator; `None` for other shapes.
pub fn bloch_vector(m: &ComplexMatrix) -> Option<[f64; 3]> {
    if m.rows() != 2 || m.cols() != 2 {
        return None;
    }
    let off = m[(1, 0)];
    Some([2.0 * off.re, 2.0 * off.im, (m[(0, 0)] - m[(1, 1)]).re])
}

/// `d²` rank-one projectors spanning the operator space of dimension `d`:
/// `|i⟩`, `(|i⟩+|j⟩)/√2` and `(|i⟩+i|j⟩)/√2` for `i < j`.
pub fn spanning_projectors(d: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        let mut k = vec![ZERO; d];
        k[i] = ONE;
        out.push(ComplexMatrix::projector(&k));
    }
    for i in 0..d {
        for j in i + 1..d {
            let mut k = vec![ZERO; d];
            k[i] = real(H);
            k[j] = real(H);
            out.push(ComplexMatrix::projector(&k));
            k[j] = C64::new(0.0, H);
            out.push(ComplexMatrix::projector(&k));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bloch_round_trip() {
        for r in tetrahedron() {
            let m = bloch_matrix(r);
            let back = bloch_vector(&m).unwrap();
            for (a, b) in r.iter().zip(back) {
                assert!((a - b).abs() < 1e-15);
            }
        }
        let p = ComplexMatrix::projector(&plus_i());
        let [x, y, z] = bloch_vector(&p).unwrap();
        assert!(x.abs() < 1e-15 && (y - 1.0).abs() < 1e-15 && z.abs() < 1e-15);
    }

    #[test]
    fn tetrahedron_vectors_are_unit_and_balanced() {
        let mut sum = [0.0; 3];
        for r in tetrahedron() {
            let n: f64 = r.iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-15);
            for (s, x) in sum.iter_mut().zip(r) {
                *s += x;
            }
        }
        assert!(sum.iter().all(|s| s.abs() < 1e-15));
    }
}
