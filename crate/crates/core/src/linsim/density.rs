use super::kernel;
use super::observable::{HermitianObservable, Pauli};
use super::state::{i_pow, pauli_masks, StateVector};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64, ZERO};

/// Dense operator on `n_qubits` qubits. Usually a (possibly unnormalized)
/// quantum state, but signed combinations of states are allowed too.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    n_qubits: usize,
    mat: CMatrix,
}

impl DensityOperator {
    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        let n_qubits = linalg::qubits_for_dim(mat.nrows())
            .filter(|_| mat.is_square())
            .ok_or_else(|| Error::Dimension(format!("operator of shape {:?} is not 2^n square", mat.shape())))?;
        if !linalg::is_hermitian(&mat, 1e-10) {
            return Err(Error::Validation("density operator is not Hermitian within 1e-10".into()));
        }
        Ok(Self { n_qubits, mat })
    }

    pub(crate) fn from_matrix_unchecked(mat: CMatrix) -> Self {
        let n_qubits = mat.nrows().trailing_zeros() as usize;
        Self { n_qubits, mat }
    }

    pub fn zero_state(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        let mut mat = CMatrix::zeros(dim, dim);
        mat[(0, 0)] = linalg::ONE;
        Self { n_qubits, mat }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        Self {
            n_qubits,
            mat: linalg::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn from_pure(amps: &[C64]) -> Result<Self> {
        let sv = StateVector::from_amplitudes(amps.to_vec())?;
        Ok(Self::from_state(&sv))
    }

    pub fn from_state(sv: &StateVector) -> Self {
        Self {
            n_qubits: sv.n_qubits(),
            mat: linalg::projector(sv.amplitudes()),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    /// Positive semidefinite within `tol` and unit trace within 1e-9.
    pub fn is_physical(&self, tol: f64) -> bool {
        (self.trace() - 1.0).abs() <= 1e-9 && linalg::min_eigenvalue_hermitian(&self.mat) >= -tol
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue_hermitian(&self.mat)
    }

    fn check_targets(&self, targets: &[usize]) -> Result<()> {
        for (i, &t) in targets.iter().enumerate() {
            if t >= self.n_qubits {
                return Err(Error::Argument(format!("qubit {t} out of range for {} qubits", self.n_qubits)));
            }
            if targets[..i].contains(&t) {
                return Err(Error::Argument(format!("duplicate target qubit {t}")));
            }
        }
        Ok(())
    }

    pub fn apply_unitary(&mut self, u: &CMatrix, targets: &[usize]) -> Result<()> {
        self.check_targets(targets)?;
        if u.nrows() != 1 << targets.len() || !u.is_square() {
            return Err(Error::Dimension(format!("gate of shape {:?} on {} targets", u.shape(), targets.len())));
        }
        if !linalg::is_unitary(u, 1e-10) {
            return Err(Error::Validation("gate is not unitary within 1e-10".into()));
        }
        self.conjugate_unchecked(u, targets);
        Ok(())
    }

    /// `rho <- K rho K^dagger` for a square `K` on `targets`, no checks.
    pub(crate) fn conjugate_unchecked(&mut self, k: &CMatrix, targets: &[usize]) {
        let n = self.n_qubits;
        let bra: Vec<usize> = targets.iter().map(|t| t + n).collect();
        let kc = k.map(|z| z.conj());
        let data = self.mat.as_mut_slice();
        kernel::apply_matrix(data, 2 * n, targets, k);
        kernel::apply_matrix(data, 2 * n, &bra, &kc);
    }

    /// `sum_k w_k K_k rho K_k^dagger` for square Kraus operators on `targets`.
    pub(crate) fn signed_kraus_sum(&self, kraus: &[(f64, CMatrix)], targets: &[usize]) -> DensityOperator {
        let dim = self.mat.nrows();
        let mut acc = CMatrix::zeros(dim, dim);
        for (w, k) in kraus {
            let mut branch = self.clone();
            branch.conjugate_unchecked(k, targets);
            linalg::add_scaled(&mut acc, *w, &branch.mat);
        }
        Self::from_matrix_unchecked(acc)
    }

    /// Reduced operator on `keep`; qubit `i` of the result is `keep[i]`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityOperator> {
        self.check_targets(keep)?;
        let n = self.n_qubits;
        let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
        let keep_offsets = kernel::target_offsets(keep);
        let traced_offsets = kernel::target_offsets(&traced);
        let dk = keep_offsets.len();
        let mut out = CMatrix::zeros(dk, dk);
        for c in 0..dk {
            for r in 0..dk {
                let mut acc = ZERO;
                for t in &traced_offsets {
                    acc += self.mat[(keep_offsets[r] + t, keep_offsets[c] + t)];
                }
                out[(r, c)] = acc;
            }
        }
        Ok(Self {
            n_qubits: keep.len(),
            mat: out,
        })
    }

    /// `self ⊗ high`, with `self` on the low qubits.
    pub fn tensor(&self, high: &DensityOperator) -> DensityOperator {
        Self {
            n_qubits: self.n_qubits + high.n_qubits,
            mat: linalg::kron_le(&self.mat, &high.mat),
        }
    }

    /// `<v| rho |v>` on `qubit`, removing it (unnormalized post-measurement
    /// operator of the remaining qubits).
    pub(crate) fn project_remove(&self, qubit: usize, value: u8) -> DensityOperator {
        let n = self.n_qubits;
        let v = value as usize;
        let data = kernel::extract_subspace(self.mat.as_slice(), 2 * n, &[qubit, qubit + n], v | v << 1);
        let dim = 1 << (n - 1);
        Self {
            n_qubits: n - 1,
            mat: CMatrix::from_vec(dim, dim, data),
        }
    }

    /// Zero every entry whose ket or bra bit at `qubit` differs from `value`.
    pub(crate) fn project_in_place(&mut self, qubit: usize, value: u8) {
        let n = self.n_qubits;
        let bit_k = 1usize << qubit;
        let bit_b = 1usize << (qubit + n);
        let want_k = if value == 1 { bit_k } else { 0 };
        let want_b = if value == 1 { bit_b } else { 0 };
        for (i, z) in self.mat.as_mut_slice().iter_mut().enumerate() {
            if i & bit_k != want_k || i & bit_b != want_b {
                *z = ZERO;
            }
        }
    }

    /// Column-major entries: ket bits low, bra bits high.
    pub(crate) fn data_mut(&mut self) -> &mut [C64] {
        self.mat.as_mut_slice()
    }

    pub(crate) fn add_assign(&mut self, other: &DensityOperator) {
        self.mat += &other.mat;
    }

    /// Relabel qubits: qubit `i` becomes qubit `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> DensityOperator {
        Self {
            n_qubits: self.n_qubits,
            mat: linalg::permute_qubits(&self.mat, perm),
        }
    }

    pub fn expectation(&self, obs: &HermitianObservable) -> Result<f64> {
        if obs.n_qubits() != self.n_qubits {
            return Err(Error::Dimension(format!(
                "observable on {} qubits, operator on {}",
                obs.n_qubits(),
                self.n_qubits
            )));
        }
        Ok((obs.matrix() * &self.mat).trace().re)
    }

    /// `tr[P rho]` for a Pauli string given per qubit position.
    pub(crate) fn pauli_expectation(&self, paulis: &[(usize, Pauli)]) -> f64 {
        let (xmask, zmask, ny) = pauli_masks(paulis);
        let dim = self.mat.nrows();
        let mut acc = ZERO;
        // tr[P rho] = sum_c <c|P rho|c> with P|r> = phase(r) |r ^ x>
        for r in 0..dim {
            let sign = if (r & zmask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            acc += self.mat[(r, r ^ xmask)] * sign;
        }
        (acc * i_pow(ny)).re
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gates;

    fn bell() -> DensityOperator {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        DensityOperator::from_pure(&[C64::new(r, 0.0), ZERO, ZERO, C64::new(r, 0.0)]).unwrap()
    }

    #[test]
    fn bell_marginals_are_maximally_mixed() {
        let rho = bell();
        for q in 0..2 {
            let red = rho.partial_trace(&[q]).unwrap();
            assert!(linalg::max_abs_diff(red.matrix(), DensityOperator::maximally_mixed(1).matrix()) < 1e-12);
        }
    }

    #[test]
    fn product_trace_recovers_factor() {
        let mut a = DensityOperator::zero_state(1);
        a.apply_unitary(&gates::ry(0.4), &[0]).unwrap();
        let mut b = DensityOperator::zero_state(1);
        b.apply_unitary(&gates::rx(1.9), &[0]).unwrap();
        let ab = a.tensor(&b);
        let red = ab.partial_trace(&[0]).unwrap();
        assert!(linalg::max_abs_diff(red.matrix(), a.matrix()) < 1e-12);
    }

    #[test]
    fn trace_nothing_and_everything() {
        let rho = bell();
        assert_eq!(rho.partial_trace(&[0, 1]).unwrap(), rho);
        let scalar = rho.partial_trace(&[]).unwrap();
        assert_eq!(scalar.matrix().shape(), (1, 1));
        assert!((scalar.trace() - 1.0).abs() < 1e-12);
        assert!(matches!(rho.partial_trace(&[1, 1]), Err(Error::Argument(_))));
    }

    #[test]
    fn keep_order_permutes() {
        let a = DensityOperator::zero_state(1);
        let b = DensityOperator::maximally_mixed(1);
        let ab = a.tensor(&b);
        let ba = ab.partial_trace(&[1, 0]).unwrap();
        assert!(linalg::max_abs_diff(ba.matrix(), b.tensor(&a).matrix()) < 1e-12);
    }

    #[test]
    fn conjugation_matches_dense_product() {
        let mut rho = bell();
        let u = linalg::kron_le(&gates::h(), &gates::s());
        let expected = &u * rho.matrix() * u.adjoint();
        rho.apply_unitary(&u, &[0, 1]).unwrap();
        assert!(linalg::max_abs_diff(rho.matrix(), &expected) < 1e-12);
    }

    #[test]
    fn project_remove_extracts_block() {
        let rho = bell();
        let p0 = rho.project_remove(1, 0);
        assert!((p0.matrix()[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!(p0.matrix()[(1, 1)].norm() < 1e-12);
    }

    #[test]
    fn pauli_expectation_matches_dense() {
        let mut rho = bell();
        rho.apply_unitary(&gates::ry(0.3), &[1]).unwrap();
        for label in ["XX", "YY", "ZZ", "XZ", "IY"] {
            let obs = HermitianObservable::pauli(label).unwrap();
            let paulis: Vec<(usize, Pauli)> = label.chars().enumerate().map(|(i, c)| (i, Pauli::from_char(c).unwrap())).collect();
            let fast = rho.pauli_expectation(&paulis);
            let dense = rho.expectation(&obs).unwrap();
            assert!((fast - dense).abs() < 1e-12, "{label}");
        }
    }
}
