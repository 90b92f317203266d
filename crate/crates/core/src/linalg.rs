//! Small dense complex linear-algebra helpers shared by the simulator and the
//! decomposition code.
//!
//! Register convention throughout the crate is little-endian: qubit 0 is the
//! least significant bit of a basis index. When an operator acts on a list of
//! targets, bit `i` of the operator's own index corresponds to `targets[i]`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Tensor product with `low` on the least significant qubits.
pub fn kron_le(low: &CMatrix, high: &CMatrix) -> CMatrix {
    high.kronecker(low)
}

/// Tensor product of `factors`, `factors[0]` on the lowest qubits.
pub fn tensor_all(factors: &[CMatrix]) -> CMatrix {
    let mut out = CMatrix::from_element(1, 1, ONE);
    for f in factors {
        out = kron_le(&out, f);
    }
    out
}

/// Row-major `[re, im]` pairs, the JSON layout for matrix payloads.
pub fn matrix_to_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
        .collect()
}

/// `acc += s * other`
pub fn add_scaled(acc: &mut CMatrix, s: f64, other: &CMatrix) {
    assert_eq!(acc.shape(), other.shape(), "shape mismatch in add_scaled");
    for (a, b) in acc.iter_mut().zip(other.iter()) {
        *a += b * s;
    }
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let prod = m.adjoint() * m;
    max_abs_diff(&prod, &identity(m.nrows())) <= tol
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && max_abs_diff(m, &m.adjoint()) <= tol
}

/// Eigen-decomposition of a Hermitian matrix. Eigenvectors are the columns of
/// the returned matrix, in the same order as the eigenvalues.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    // symmetrize first so tiny anti-Hermitian noise cannot leak in
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = SymmetricEigen::new(sym);
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

pub fn operator_norm_hermitian(m: &CMatrix) -> f64 {
    let (vals, _) = hermitian_eigen(m);
    vals.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

pub fn trace_norm_hermitian(m: &CMatrix) -> f64 {
    let (vals, _) = hermitian_eigen(m);
    vals.iter().map(|v| v.abs()).sum()
}

pub fn min_eigenvalue_hermitian(m: &CMatrix) -> f64 {
    let (vals, _) = hermitian_eigen(m);
    vals.iter().copied().fold(f64::INFINITY, f64::min)
}

/// `|v><w|`
pub fn outer(v: &[C64], w: &[C64]) -> CMatrix {
    CMatrix::from_fn(v.len(), w.len(), |r, c| v[r] * w[c].conj())
}

pub fn projector(v: &[C64]) -> CMatrix {
    outer(v, v)
}

pub fn basis_vector(dim: usize, index: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dim];
    v[index] = ONE;
    v
}

/// Number of qubits for a power-of-two dimension.
pub fn qubits_for_dim(dim: usize) -> Option<usize> {
    if dim.is_power_of_two() {
        Some(dim.trailing_zeros() as usize)
    } else {
        None
    }
}

/// Relabel the qubits of an operator on `n` qubits: qubit `i` of the input
/// becomes qubit `perm[i]` of the output.
pub fn permute_qubits(m: &CMatrix, perm: &[usize]) -> CMatrix {
    let n = perm.len();
    let dim = 1usize << n;
    assert_eq!(m.nrows(), dim);
    assert_eq!(m.ncols(), dim);
    let map = |idx: usize| -> usize {
        let mut out = 0;
        for (i, &p) in perm.iter().enumerate() {
            if idx >> i & 1 == 1 {
                out |= 1 << p;
            }
        }
        out
    };
    let table: Vec<usize> = (0..dim).map(map).collect();
    let mut out = CMatrix::zeros(dim, dim);
    for c in 0..dim {
        for r in 0..dim {
            out[(table[r], table[c])] = m[(r, c)];
        }
    }
    out
}

/// Partial transpose of an operator on a register of `n_low + n_high` qubits,
/// transposing the high block.
pub fn partial_transpose_high(m: &CMatrix, n_low: usize, n_high: usize) -> CMatrix {
    let dl = 1usize << n_low;
    let dh = 1usize << n_high;
    let dim = dl * dh;
    assert_eq!(m.nrows(), dim);
    CMatrix::from_fn(dim, dim, |r, c| {
        let (rl, rh) = (r % dl, r / dl);
        let (cl, ch) = (c % dl, c / dl);
        m[(rl + dl * ch, cl + dl * rh)]
    })
}

/// Standard gate matrices.
pub mod gates {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn m2(a: C64, b: C64, cc: C64, d: C64) -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[a, b, cc, d])
    }

    pub fn h() -> CMatrix {
        let s = c(FRAC_1_SQRT_2, 0.0);
        m2(s, s, s, -s)
    }
    pub fn x() -> CMatrix {
        m2(ZERO, ONE, ONE, ZERO)
    }
    pub fn y() -> CMatrix {
        m2(ZERO, -I, I, ZERO)
    }
    pub fn z() -> CMatrix {
        m2(ONE, ZERO, ZERO, -ONE)
    }
    pub fn s() -> CMatrix {
        m2(ONE, ZERO, ZERO, I)
    }
    pub fn sdg() -> CMatrix {
        m2(ONE, ZERO, ZERO, -I)
    }
    pub fn t() -> CMatrix {
        m2(ONE, ZERO, ZERO, C64::from_polar(1.0, std::f64::consts::FRAC_PI_4))
    }
    pub fn rx(theta: f64) -> CMatrix {
        let (s, co) = (theta / 2.0).sin_cos();
        m2(c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0))
    }
    pub fn ry(theta: f64) -> CMatrix {
        let (s, co) = (theta / 2.0).sin_cos();
        m2(c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0))
    }
    pub fn rz(theta: f64) -> CMatrix {
        m2(
            C64::from_polar(1.0, -theta / 2.0),
            ZERO,
            ZERO,
            C64::from_polar(1.0, theta / 2.0),
        )
    }
    /// CNOT on targets `[control, target]` (control is bit 0).
    pub fn cnot() -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = ONE;
        m[(3, 1)] = ONE;
        m[(2, 2)] = ONE;
        m[(1, 3)] = ONE;
        m
    }
    pub fn cz() -> CMatrix {
        let mut m = identity(4);
        m[(3, 3)] = -ONE;
        m
    }
    pub fn swap() -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = ONE;
        m[(2, 1)] = ONE;
        m[(1, 2)] = ONE;
        m[(3, 3)] = ONE;
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnot_flips_target_when_control_set() {
        // |c=1, t=0> is index 1; expect index 3
        let v = CMatrix::from_column_slice(4, 1, &basis_vector(4, 1));
        let out = gates::cnot() * v;
        assert!((out[(3, 0)] - ONE).norm() < 1e-15);
    }

    #[test]
    fn permute_swaps_roles() {
        let a = kron_le(&gates::x(), &gates::z());
        let b = permute_qubits(&a, &[1, 0]);
        assert!(max_abs_diff(&b, &kron_le(&gates::z(), &gates::x())) < 1e-15);
    }

    #[test]
    fn standard_gates_are_unitary() {
        for g in [
            gates::h(),
            gates::s(),
            gates::t(),
            gates::rx(0.3),
            gates::ry(1.1),
            gates::rz(-0.7),
            gates::cnot(),
            gates::cz(),
            gates::swap(),
        ] {
            assert!(is_unitary(&g, 1e-12));
        }
    }
}
