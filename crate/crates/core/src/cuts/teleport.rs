//! Wire cuts by teleportation through a quasiprobabilistic Bell register.
//!
//! Per wire: CNOT(wire, anc_A), H(wire), measure wire -> a, measure anc_A -> b,
//! then X^b Z^a on anc_B, which now carries the wire state.

use crate::cuts::bell::{bell_coefficients, BellFamily, MAX_BELL_PAIRS};
use crate::error::{Error, Result};
use crate::linalg::{self, gates, CMatrix};
use crate::linsim::{choi_of, ChoiMatrix, DensityOperator};
use crate::qpd::{Qpd, QpdTerm, TargetChannel, TermAction};

/// Choi matrix of "teleport `n` wires through `register`", where `register`
/// is a `2n`-qubit operator with the A halves on the low `n` qubits. The
/// measurements and corrections are taken coherently, which yields the same
/// channel once the sender's qubits are discarded.
pub fn teleport_choi(n: usize, register: &CMatrix) -> Result<ChoiMatrix> {
    let d = 1usize << n;
    if register.shape() != (d * d, d * d) {
        return Err(Error::Dimension(format!(
            "register of shape {:?} for {n} teleported wires",
            register.shape()
        )));
    }
    let map = |x: &CMatrix| -> Result<CMatrix> {
        let mut rho = DensityOperator::from_matrix_unchecked(linalg::kron_le(x, register));
        for j in 0..n {
            let (wire, anc_a, anc_b) = (j, n + j, 2 * n + j);
            rho.conjugate_unchecked(&gates::cnot(), &[wire, anc_a]);
            rho.conjugate_unchecked(&gates::h(), &[wire]);
            rho.conjugate_unchecked(&gates::cnot(), &[anc_a, anc_b]);
            rho.conjugate_unchecked(&gates::cz(), &[wire, anc_b]);
        }
        let keep: Vec<usize> = (2 * n..3 * n).collect();
        Ok(rho.partial_trace(&keep)?.into_matrix())
    };
    choi_of(map, d, d)
}

/// Teleportation-based cut of `n` wires consuming `n` quasiprobabilistic
/// Bell pairs; kappa `2^(n+1) - 1`.
pub fn teleport_cut_qpd(n: usize) -> Result<Qpd> {
    if !(1..=MAX_BELL_PAIRS).contains(&n) {
        return Err(Error::Argument(format!(
            "teleport cut size must be in 1..={MAX_BELL_PAIRS}, got {n}"
        )));
    }
    let (plus, minus) = bell_coefficients(n);
    Qpd::new(
        format!("teleport_{n}"),
        vec![
            QpdTerm::new(
                plus,
                TermAction::Teleport {
                    n_wires: n,
                    family: BellFamily::Plus,
                },
            ),
            QpdTerm::new(
                minus,
                TermAction::Teleport {
                    n_wires: n,
                    family: BellFamily::Minus,
                },
            ),
        ],
        TargetChannel::Identity { n_qubits: n },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::bell::bell_projector;
    use crate::linsim::{HermitianObservable, StateVector};

    #[test]
    fn genuine_pair_teleports() {
        for n in 1..=2 {
            let c = teleport_choi(n, &bell_projector(n).unwrap()).unwrap();
            assert!(c.max_deviation(&ChoiMatrix::identity(1 << n)).unwrap() < 1e-12);
        }
    }

    #[test]
    fn qpd_reconstructs_identity() {
        for n in 1..=2 {
            let q = teleport_cut_qpd(n).unwrap();
            assert!(q.verify_choi().unwrap().passed);
        }
        assert_eq!(teleport_cut_qpd(2).unwrap().kappa(), 7.0);
        assert!(teleport_cut_qpd(0).is_err());
    }

    #[test]
    fn every_correction_path_recovers_the_input() {
        // qubits: 0 = input |0>, 1 = anc_A, 2 = anc_B
        let z = HermitianObservable::pauli("Z").unwrap();
        for (a, b) in [(1i8, 1i8), (1, -1), (-1, 1), (-1, -1)] {
            let mut s = StateVector::zero(3);
            s.apply_gate(&gates::h(), &[1]).unwrap();
            s.apply_gate(&gates::cnot(), &[1, 2]).unwrap();
            s.apply_gate(&gates::cnot(), &[0, 1]).unwrap();
            s.apply_gate(&gates::h(), &[0]).unwrap();
            let s = s.measure_forced(&z, 0, a).unwrap();
            let mut s = s.measure_forced(&z, 1, b).unwrap();
            if b == -1 {
                s.apply_gate(&gates::x(), &[2]).unwrap();
            }
            if a == -1 {
                s.apply_gate(&gates::z(), &[2]).unwrap();
            }
            let zz = HermitianObservable::pauli("IIZ").unwrap();
            assert!((s.expectation(&zz).unwrap() - 1.0).abs() < 1e-12, "{a} {b}");
        }
    }
}
