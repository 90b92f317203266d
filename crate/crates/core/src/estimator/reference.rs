//! Uncut reference: pure-state simulation that enumerates every
//! measurement outcome with its probability.

use crate::circuit::{Circuit, Op, PrepState};
use crate::error::{Error, Result};
use crate::linalg::{gates, CMatrix};
use crate::linsim::{Pauli, StateVector};

use super::Observable;

/// Branches kept before giving up.
const MAX_BRANCHES: usize = 1 << 20;

/// Probabilities below this are dropped.
const MIN_PROB: f64 = 1e-15;

struct Branch {
    prob: f64,
    state: StateVector,
    bits: Vec<u8>,
}

/// Unitary taking `|0>` to the product-state factor `s`.
fn prep_unitary(s: PrepState) -> CMatrix {
    let [a, b] = s.amplitudes();
    CMatrix::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()])
}

fn split(branches: Vec<Branch>, q: usize) -> Result<Vec<(u8, Branch)>> {
    let mut out = Vec::with_capacity(branches.len() * 2);
    for br in branches {
        let p1 = br.state.prob_one(q);
        for (v, p) in [(0u8, 1.0 - p1), (1u8, p1)] {
            if p * br.prob > MIN_PROB && p > MIN_PROB {
                let mut state = br.state.clone();
                state.collapse_z(q, v)?;
                out.push((
                    v,
                    Branch {
                        prob: br.prob * p,
                        state,
                        bits: br.bits.clone(),
                    },
                ));
            }
        }
    }
    if out.len() > MAX_BRANCHES {
        return Err(Error::BranchExplosion {
            count: out.len() as u128,
            cap: MAX_BRANCHES as u128,
        });
    }
    Ok(out)
}

/// Expectation of `obs` at the end of `circuit`, with cut markers ignored.
pub fn simulate_uncut(circuit: &Circuit, obs: &Observable) -> Result<f64> {
    circuit.validate()?;
    let terms = obs.parsed(circuit.n_qubits)?;
    let mut branches = vec![Branch {
        prob: 1.0,
        state: StateVector::zero(circuit.n_qubits),
        bits: vec![0; circuit.n_clbits],
    }];
    for (i, op) in circuit.ops.iter().enumerate() {
        match op {
            Op::Gate(g) => {
                let m = g.matrix();
                for br in &mut branches {
                    br.state.apply_gate(&m, &g.targets)?;
                }
            }
            Op::ClassicallyControlled { gate, clbit, value } => {
                let m = gate.matrix();
                for br in branches.iter_mut().filter(|b| b.bits[*clbit] == *value) {
                    br.state.apply_gate(&m, &gate.targets)?;
                }
            }
            Op::Measure { target, clbit } => {
                branches = split(branches, *target)?
                    .into_iter()
                    .map(|(v, mut br)| {
                        br.bits[*clbit] = v;
                        br
                    })
                    .collect();
            }
            Op::Prepare { target, state } => {
                let u = prep_unitary(*state);
                branches = split(branches, *target)?
                    .into_iter()
                    .map(|(v, mut br)| {
                        if v == 1 {
                            br.state.apply_gate(&gates::x(), &[*target])?;
                        }
                        br.state.apply_gate(&u, &[*target])?;
                        Ok(br)
                    })
                    .collect::<Result<_>>()?;
            }
            Op::Cut(_) => {}
            Op::Slot(_) => return Err(Error::Validation(format!("op {i}: slot ops only appear in subcircuits"))),
        }
    }
    let mut value = 0.0;
    for br in &branches {
        for (c, paulis) in &terms {
            let placed: Vec<(usize, Pauli)> = paulis.iter().copied().enumerate().collect();
            value += br.prob * c * br.state.pauli_expectation(&placed);
        }
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{self, C64};

    #[test]
    fn prep_unitaries_prepare_their_states() {
        for s in PrepState::ALL {
            let u = prep_unitary(s);
            assert!(linalg::is_unitary(&u, 1e-12));
            let col: Vec<C64> = u.column(0).iter().copied().collect();
            let want = s.amplitudes();
            assert!((col[0] - want[0]).norm() < 1e-12 && (col[1] - want[1]).norm() < 1e-12);
        }
    }

    #[test]
    fn bell_parity() {
        let mut c = Circuit::new(2, 0);
        c.h(0);
        c.cnot(0, 1);
        assert!((simulate_uncut(&c, &Observable::pauli("ZZ").unwrap()).unwrap() - 1.0).abs() < 1e-12);
        assert!((simulate_uncut(&c, &Observable::pauli("XX").unwrap()).unwrap() - 1.0).abs() < 1e-12);
        assert!(simulate_uncut(&c, &Observable::pauli("ZI").unwrap()).unwrap().abs() < 1e-12);
    }

    #[test]
    fn measured_and_reset_qubits() {
        let mut c = Circuit::new(2, 1);
        c.h(0);
        c.measure(0, 0);
        c.push(Op::Prepare {
            target: 0,
            state: PrepState::Plus,
        });
        // X on qubit 0 is 1 after reset to |+>, Z on qubit 0 is 0
        assert!((simulate_uncut(&c, &Observable::pauli("XI").unwrap()).unwrap() - 1.0).abs() < 1e-12);
        assert!(simulate_uncut(&c, &Observable::pauli("ZI").unwrap()).unwrap().abs() < 1e-12);
    }
}
