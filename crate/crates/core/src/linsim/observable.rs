use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, gates, CMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_char(ch: char) -> Option<Pauli> {
        match ch {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn matrix(self) -> CMatrix {
        match self {
            Pauli::I => linalg::identity(2),
            Pauli::X => gates::x(),
            Pauli::Y => gates::y(),
            Pauli::Z => gates::z(),
        }
    }
}

/// Parse a Pauli string; character `i` acts on qubit `i`.
pub fn parse_pauli_string(label: &str) -> Result<Vec<Pauli>> {
    label
        .chars()
        .enumerate()
        .map(|(i, ch)| {
            Pauli::from_char(ch.to_ascii_uppercase())
                .ok_or_else(|| Error::Argument(format!("invalid Pauli character {ch:?} at position {i} in {label:?}")))
        })
        .collect()
}

/// A Hermitian operator, optionally remembered as a Pauli string.
#[derive(Clone, Debug)]
pub struct HermitianObservable {
    n_qubits: usize,
    mat: CMatrix,
    pauli_label: Option<String>,
}

impl HermitianObservable {
    pub fn new(mat: CMatrix) -> Result<Self> {
        let n_qubits = linalg::qubits_for_dim(mat.nrows())
            .filter(|_| mat.is_square())
            .ok_or_else(|| Error::Dimension(format!("observable of shape {:?} is not 2^n square", mat.shape())))?;
        if !linalg::is_hermitian(&mat, 1e-10) {
            return Err(Error::Validation("observable is not Hermitian within 1e-10".into()));
        }
        Ok(Self {
            n_qubits,
            mat,
            pauli_label: None,
        })
    }

    pub fn pauli(label: &str) -> Result<Self> {
        let paulis = parse_pauli_string(label)?;
        let mats: Vec<CMatrix> = paulis.iter().map(|p| p.matrix()).collect();
        Ok(Self {
            n_qubits: paulis.len(),
            mat: linalg::tensor_all(&mats),
            pauli_label: Some(paulis.iter().map(|p| p.as_char()).collect()),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn pauli_label(&self) -> Option<&str> {
        self.pauli_label.as_deref()
    }

    /// The single-qubit Pauli this observable is, if any.
    pub fn single_qubit_pauli(&self) -> Option<Pauli> {
        match self.pauli_label.as_deref() {
            Some(l) if l.len() == 1 => Pauli::from_char(l.chars().next()?),
            _ => None,
        }
    }

    pub fn operator_norm(&self) -> f64 {
        linalg::operator_norm_hermitian(&self.mat)
    }

    /// Whether `||O|| <= 1` (the measure-and-prepare normal form bound).
    pub fn within_unit_norm(&self) -> bool {
        self.operator_norm() <= 1.0 + 1e-9
    }

    pub fn tensor(&self, high: &HermitianObservable) -> HermitianObservable {
        let label = match (&self.pauli_label, &high.pauli_label) {
            (Some(a), Some(b)) => Some(format!("{a}{b}")),
            _ => None,
        };
        HermitianObservable {
            n_qubits: self.n_qubits + high.n_qubits,
            mat: linalg::kron_le(&self.mat, &high.mat),
            pauli_label: label,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_string_is_little_endian() {
        let zi = HermitianObservable::pauli("ZI").unwrap();
        // qubit 0 carries Z: index 1 (qubit 0 set) gets -1
        assert_eq!(zi.matrix()[(1, 1)].re, -1.0);
        assert_eq!(zi.matrix()[(2, 2)].re, 1.0);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = gates::s();
        assert!(matches!(HermitianObservable::new(m), Err(Error::Validation(_))));
    }

    #[test]
    fn rejects_bad_pauli_char() {
        assert!(HermitianObservable::pauli("XQ").is_err());
    }
}
