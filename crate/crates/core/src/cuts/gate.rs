//! CNOT gate cut into local operations (kappa 3).
//!
//! `CNOT = e^{i pi/4} e^{-i pi/4 Z_c} e^{-i pi/4 X_t} e^{i pi/4 Z_c X_t}` and, for
//! `U = e^{i pi/4 A⊗B}`,
//! `U rho U^dag = (rho + (A⊗B) rho (A⊗B)) / 2 + (R+ - R-)⊗M / 2 + M⊗(R+ - R-) / 2`
//! with `R± = Ad(e^{±i pi/4 A})` and `M` the signed projective measurement of
//! the respective Pauli.

use crate::linalg::{self, gates, CMatrix, C64};
use crate::linsim::Instrument;
use crate::qpd::{Qpd, QpdTerm, TargetChannel, TermAction};

/// `e^{i theta P}` for a Pauli `P`.
fn pauli_rotation(p: &CMatrix, theta: f64) -> CMatrix {
    linalg::identity(2).scale(theta.cos()) + p * C64::new(0.0, theta.sin())
}

/// Projective measurement of `p` with branch weights equal to the eigenvalue.
fn signed_measurement(p: &CMatrix, name: &str) -> Instrument {
    let plus = (linalg::identity(2) + p).scale(0.5);
    let minus = (linalg::identity(2) - p).scale(0.5);
    Instrument::projective(vec![(plus, 1.0, format!("{name}+")), (minus, -1.0, format!("{name}-"))])
        .expect("Pauli projectors form a measurement")
}

pub fn cnot_gate_cut_qpd() -> Qpd {
    let (z, x) = (gates::z(), gates::x());
    let quarter = std::f64::consts::FRAC_PI_4;
    let post_c = pauli_rotation(&z, -quarter);
    let post_t = pauli_rotation(&x, -quarter);
    let control = |inst: Instrument| inst.then(&post_c);
    let target = |inst: Instrument| inst.then(&post_t);
    let unitary = |m: CMatrix, label: &str| Instrument::unitary(m, label);
    let pair = |c: Instrument, t: Instrument| TermAction::Tensor(vec![TermAction::Instrument(control(c)), TermAction::Instrument(target(t))]);

    let terms = vec![
        QpdTerm::new(0.5, pair(Instrument::identity(2), Instrument::identity(2))),
        QpdTerm::new(0.5, pair(unitary(z.clone(), "Z"), unitary(x.clone(), "X"))),
        QpdTerm::new(0.5, pair(unitary(pauli_rotation(&z, quarter), "Rz+"), signed_measurement(&x, "MX"))),
        QpdTerm::new(-0.5, pair(unitary(pauli_rotation(&z, -quarter), "Rz-"), signed_measurement(&x, "MX"))),
        QpdTerm::new(0.5, pair(signed_measurement(&z, "MZ"), unitary(pauli_rotation(&x, quarter), "Rx+"))),
        QpdTerm::new(-0.5, pair(signed_measurement(&z, "MZ"), unitary(pauli_rotation(&x, -quarter), "Rx-"))),
    ];
    Qpd::new("cnot_gate_cut", terms, TargetChannel::Cnot).expect("two-qubit local terms")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kappa_three() {
        assert_eq!(cnot_gate_cut_qpd().kappa(), 3.0);
    }

    #[test]
    fn reconstructs_cnot() {
        let c = cnot_gate_cut_qpd().verify_choi().unwrap();
        assert!(c.passed, "{}", c.max_deviation);
    }
}
