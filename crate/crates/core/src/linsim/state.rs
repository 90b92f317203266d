use rand::Rng;

use super::kernel;
use super::observable::{HermitianObservable, Pauli};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64, ONE, ZERO};

/// Below this projection norm an outcome is treated as impossible.
pub const ZERO_NORM_TOL: f64 = 1e-14;

/// Dense pure state on `n_qubits` qubits (little-endian amplitudes).
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0...0>`
    pub fn zero(n_qubits: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[0] = ONE;
        Self { n_qubits, amps }
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if index >= 1 << n_qubits {
            return Err(Error::Argument(format!("basis index {index} out of range for {n_qubits} qubits")));
        }
        Ok(Self {
            n_qubits,
            amps: linalg::basis_vector(1 << n_qubits, index),
        })
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let n_qubits = linalg::qubits_for_dim(amps.len())
            .ok_or_else(|| Error::Dimension(format!("amplitude vector of length {} is not a power of two", amps.len())))?;
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!("state norm^2 {norm} differs from 1")));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
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

    /// Apply a unitary to `targets`, validating unitarity and indices.
    pub fn apply_gate(&mut self, gate: &CMatrix, targets: &[usize]) -> Result<()> {
        self.check_targets(targets)?;
        if gate.nrows() != 1 << targets.len() {
            return Err(Error::Dimension(format!(
                "gate of size {} applied to {} targets",
                gate.nrows(),
                targets.len()
            )));
        }
        if !linalg::is_unitary(gate, 1e-10) {
            return Err(Error::Validation("gate is not unitary within 1e-10".into()));
        }
        self.apply_matrix_unchecked(gate, targets);
        debug_assert!((self.norm_sqr() - 1.0).abs() < 1e-9);
        Ok(())
    }

    /// Apply an arbitrary matrix with no checks (projectors, Kraus operators).
    pub(crate) fn apply_matrix_unchecked(&mut self, m: &CMatrix, targets: &[usize]) {
        kernel::apply_matrix(&mut self.amps, self.n_qubits, targets, m);
    }

    pub(crate) fn scale(&mut self, s: f64) {
        self.amps.iter_mut().for_each(|a| *a *= s);
    }

    /// Probability of reading `outcome` on `qubit` in the computational basis.
    pub fn prob_one(&self, qubit: usize) -> f64 {
        let bit = 1usize << qubit;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Collapse `qubit` onto `outcome` and renormalize.
    pub(crate) fn collapse_z(&mut self, qubit: usize, outcome: u8) -> Result<()> {
        let bit = 1usize << qubit;
        let keep = if outcome == 1 { bit } else { 0 };
        let mut norm = 0.0;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != keep {
                *a = ZERO;
            } else {
                norm += a.norm_sqr();
            }
        }
        if norm < ZERO_NORM_TOL * ZERO_NORM_TOL {
            return Err(Error::ZeroProbability {
                qubit,
                outcome,
                norm: norm.sqrt(),
            });
        }
        self.scale(1.0 / norm.sqrt());
        Ok(())
    }

    /// Sample a computational-basis measurement of `qubit`.
    pub(crate) fn measure_z<R: Rng + ?Sized>(&mut self, qubit: usize, rng: &mut R) -> u8 {
        let p1 = self.prob_one(qubit);
        let outcome = u8::from(rng.gen::<f64>() < p1);
        // the sampled branch has probability > 0 unless p1 is exactly 0 or 1
        // and the comparison picked the empty branch, which cannot happen
        self.collapse_z(qubit, outcome).expect("sampled outcome has nonzero probability");
        outcome
    }

    fn pauli_projector(pauli: Pauli, eigenvalue: i8) -> CMatrix {
        let half = C64::new(0.5, 0.0);
        let id = linalg::identity(2).scale(0.5);
        let p = pauli.matrix() * half;
        if eigenvalue > 0 {
            id + p
        } else {
            id - p
        }
    }

    fn single_pauli(basis: &HermitianObservable) -> Result<Pauli> {
        match basis.single_qubit_pauli() {
            Some(p @ (Pauli::X | Pauli::Y | Pauli::Z)) => Ok(p),
            _ => Err(Error::Argument("measurement basis must be a single-qubit X, Y or Z".into())),
        }
    }

    /// Born-rule measurement of a single-qubit Pauli. Returns the eigenvalue
    /// (+1 or -1) and the normalized post-measurement state.
    pub fn measure<R: Rng + ?Sized>(
        &self,
        basis: &HermitianObservable,
        target: usize,
        rng: &mut R,
    ) -> Result<(i8, StateVector)> {
        let pauli = Self::single_pauli(basis)?;
        self.check_targets(&[target])?;
        let mut plus = self.clone();
        plus.apply_matrix_unchecked(&Self::pauli_projector(pauli, 1), &[target]);
        let p_plus = plus.norm_sqr();
        let eigenvalue = if rng.gen::<f64>() < p_plus { 1 } else { -1 };
        let post = self.measure_forced(basis, target, eigenvalue)?;
        Ok((eigenvalue, post))
    }

    /// Post-measurement state for a forced outcome; errors when that outcome
    /// has (numerically) zero probability.
    pub fn measure_forced(&self, basis: &HermitianObservable, target: usize, eigenvalue: i8) -> Result<StateVector> {
        let pauli = Self::single_pauli(basis)?;
        self.check_targets(&[target])?;
        let mut post = self.clone();
        post.apply_matrix_unchecked(&Self::pauli_projector(pauli, eigenvalue), &[target]);
        let norm = post.norm_sqr().sqrt();
        if norm < ZERO_NORM_TOL {
            return Err(Error::ZeroProbability {
                qubit: target,
                outcome: u8::from(eigenvalue < 0),
                norm,
            });
        }
        post.scale(1.0 / norm);
        Ok(post)
    }

    /// Append `other` as the new most significant qubits.
    pub(crate) fn append(&mut self, other: &[C64]) {
        let mut amps = Vec::with_capacity(self.amps.len() * other.len());
        for &b in other {
            for &a in &self.amps {
                amps.push(a * b);
            }
        }
        self.n_qubits += other.len().trailing_zeros() as usize;
        self.amps = amps;
    }

    /// Remove a qubit that is known to be in computational state `value`.
    pub(crate) fn remove_collapsed(&mut self, qubit: usize, value: u8) {
        self.amps = kernel::extract_subspace(&self.amps, self.n_qubits, &[qubit], value as usize);
        self.n_qubits -= 1;
    }

    /// `<psi| P |psi>` for a Pauli string given per qubit position.
    pub(crate) fn pauli_expectation(&self, paulis: &[(usize, Pauli)]) -> f64 {
        let (xmask, zmask, ny) = pauli_masks(paulis);
        let mut acc = ZERO;
        for (k, a) in self.amps.iter().enumerate() {
            let sign = if (k & zmask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            acc += self.amps[k ^ xmask].conj() * a * sign;
        }
        (acc * i_pow(ny)).re
    }

    pub fn expectation(&self, obs: &HermitianObservable) -> Result<f64> {
        if obs.n_qubits() != self.n_qubits {
            return Err(Error::Dimension(format!(
                "observable on {} qubits, state on {}",
                obs.n_qubits(),
                self.n_qubits
            )));
        }
        let v = nalgebra::DVector::from_column_slice(&self.amps);
        Ok((v.adjoint() * obs.matrix() * &v)[(0, 0)].re)
    }
}

/// X-mask, Z-mask (Y contributes to both) and number of Y factors.
pub(crate) fn pauli_masks(paulis: &[(usize, Pauli)]) -> (usize, usize, u32) {
    let mut x = 0;
    let mut z = 0;
    let mut ny = 0;
    for &(q, p) in paulis {
        match p {
            Pauli::I => {}
            Pauli::X => x |= 1 << q,
            Pauli::Z => z |= 1 << q,
            Pauli::Y => {
                x |= 1 << q;
                z |= 1 << q;
                ny += 1;
            }
        }
    }
    (x, z, ny)
}

/// `i^k` (Y = i X Z).
pub(crate) fn i_pow(k: u32) -> C64 {
    match k % 4 {
        0 => C64::new(1.0, 0.0),
        1 => C64::new(0.0, 1.0),
        2 => C64::new(-1.0, 0.0),
        _ => C64::new(0.0, -1.0),
    }
}
