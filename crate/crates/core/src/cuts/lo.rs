//! Wire cut without classical communication: eight measure-and-prepare terms.

use crate::circuit::PrepState;
use crate::error::Result;
use crate::linsim::Pauli;
use crate::qpd::{Qpd, QpdTerm, TargetChannel, TermAction};

/// `(observable, prepared state, coefficient)` for a single wire.
pub const LO_TERMS: [(Pauli, PrepState, f64); 8] = [
    (Pauli::I, PrepState::Zero, 0.5),
    (Pauli::I, PrepState::One, 0.5),
    (Pauli::X, PrepState::Plus, 0.5),
    (Pauli::X, PrepState::Minus, -0.5),
    (Pauli::Y, PrepState::PlusI, 0.5),
    (Pauli::Y, PrepState::MinusI, -0.5),
    (Pauli::Z, PrepState::Zero, 0.5),
    (Pauli::Z, PrepState::One, -0.5),
];

/// Decomposition of the single-qubit identity channel.
pub fn lo_wire_cut_qpd() -> Qpd {
    lo_qpd_from_terms(&LO_TERMS)
}

/// Same construction with caller-supplied terms (for negative controls).
pub fn lo_qpd_from_terms(terms: &[(Pauli, PrepState, f64)]) -> Qpd {
    Qpd::new(
        "lo_wire_cut",
        terms
            .iter()
            .map(|&(p, s, a)| {
                QpdTerm::new(
                    a,
                    TermAction::MeasurePrepare {
                        paulis: vec![p],
                        prep: vec![s],
                    },
                )
            })
            .collect(),
        TargetChannel::Identity { n_qubits: 1 },
    )
    .expect("single-wire terms match the target")
}

/// Independent cuts of `n` wires.
pub fn lo_wire_cut_qpd_n(n: usize) -> Result<Qpd> {
    lo_wire_cut_qpd().power(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_and_distribution() {
        let q = lo_wire_cut_qpd();
        assert_eq!(q.kappa(), 4.0);
        let (p, s) = q.sampling_distribution().unwrap();
        assert!(p.iter().all(|&x| x == 0.125));
        assert_eq!(s.iter().filter(|&&x| x < 0.0).count(), 3);
    }

    #[test]
    fn reconstructs_identity() {
        let c = lo_wire_cut_qpd().verify_choi().unwrap();
        assert!(c.passed, "{}", c.max_deviation);
        let two = lo_wire_cut_qpd_n(2).unwrap();
        assert_eq!(two.kappa(), 16.0);
        assert!(two.verify_choi().unwrap().passed);
    }

    #[test]
    fn flipped_coefficient_fails() {
        let mut terms = LO_TERMS;
        terms[3].2 = 0.5;
        let c = lo_qpd_from_terms(&terms).verify_choi().unwrap();
        assert!(!c.passed);
        assert!(c.max_deviation >= 0.25);
    }

    #[test]
    fn swap_trick() {
        for n in 1..=3 {
            let q = lo_wire_cut_qpd_n(n).unwrap();
            let v = q.verify_swap_trick().unwrap();
            assert!((v - 4f64.powi(n as i32)).abs() < 1e-9);
            assert!(q.kappa() >= v.abs() - 1e-12);
        }
    }
}
