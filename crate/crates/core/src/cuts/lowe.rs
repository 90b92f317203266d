//! Parallel cut of `n` wires as `(d+1) Psi_0 - d Psi_1`, where `Psi_0`
//! measures and re-prepares in a random basis from a 2-design and `Psi_1`
//! discards its input and prepares the maximally mixed state.

use crate::cuts::clifford::{two_design, MAX_DESIGN_QUBITS};
use crate::error::{Error, Result};
use crate::qpd::{Qpd, QpdTerm, TargetChannel, TermAction};

pub fn lowe_parallel_cut_qpd(n: usize) -> Result<Qpd> {
    if !(1..=MAX_DESIGN_QUBITS).contains(&n) {
        return Err(Error::Argument(format!(
            "random-basis cut supports 1..={MAX_DESIGN_QUBITS} wires, got {n}"
        )));
    }
    let d = (1usize << n) as f64;
    Qpd::new(
        format!("lowe_parallel_{n}"),
        vec![
            QpdTerm::new(
                d + 1.0,
                TermAction::RandomBasis {
                    n_qubits: n,
                    unitaries: two_design(n)?,
                },
            ),
            QpdTerm::new(-d, TermAction::Depolarize { n_qubits: n }),
        ],
        TargetChannel::Identity { n_qubits: n },
    )
}
