//! Benchmark circuits with their cut positions marked.

use super::Circuit;
use crate::error::{Error, Result};

pub const BUILTIN_NAMES: [&str; 5] = ["fig1a", "fig1b", "fig2a", "fig2b", "ghz"];

/// RY layer so the CNOT ladders act on a nontrivial product input.
fn input_layer(c: &mut Circuit) {
    for q in 0..c.n_qubits {
        c.ry(q, 0.3 + 0.45 * q as f64);
    }
}

/// Build a named benchmark circuit. `n` is the qubit count for `ghz`.
pub fn builtin(name: &str, n: Option<usize>) -> Result<Circuit> {
    let c = match name {
        "fig1a" => {
            // seven-qubit ladder through qubit 3; cuts w0, w1 move qubit 3 to
            // the lower block and back, g0..g2 cut the fan-out CNOTs instead
            let mut c = Circuit::new(7, 0);
            input_layer(&mut c);
            c.cnot(0, 3);
            c.cnot(1, 3);
            let a = c.cnot(2, 3);
            let g0 = c.cnot(3, 4);
            let g1 = c.cnot(3, 5);
            let g2 = c.cnot(3, 6);
            c.cnot(0, 3);
            c.cnot(1, 3);
            c.cnot(2, 3);
            c.wire_cut("w0", 3, a);
            c.wire_cut("w1", 3, g2);
            c.gate_cut("g0", g0);
            c.gate_cut("g1", g1);
            c.gate_cut("g2", g2);
            c
        }
        "fig1b" => {
            let mut c = Circuit::new(4, 0);
            input_layer(&mut c);
            let a = c.cnot(0, 1);
            c.cnot(2, 3);
            let mid = c.cnot(1, 2);
            c.cnot(0, 1);
            c.cnot(2, 3);
            c.wire_cut("w0", 1, a);
            c.wire_cut("w1", 1, mid);
            c.gate_cut("g0", mid);
            c
        }
        "fig2a" => {
            // qubits 1 and 2 leave the upper block in the same time slice
            let mut c = Circuit::new(4, 0);
            input_layer(&mut c);
            c.cnot(0, 1);
            let b = c.cnot(1, 2);
            let a = c.cnot(0, 1);
            c.cnot(2, 3);
            c.cnot(1, 3);
            c.cnot(1, 2);
            c.wire_cut("w0", 1, a);
            c.wire_cut("w1", 2, b);
            c
        }
        "fig2b" => {
            // qubit 1 alternates between blocks four times
            let mut c = Circuit::new(4, 0);
            input_layer(&mut c);
            let o0 = c.cnot(0, 1);
            c.cnot(2, 3);
            let o2 = c.cnot(1, 2);
            let o3 = c.cnot(0, 1);
            c.cnot(2, 3);
            let o5 = c.cnot(1, 2);
            c.cnot(0, 1);
            c.cnot(2, 3);
            for (i, at) in [o0, o2, o3, o5].into_iter().enumerate() {
                c.wire_cut(&format!("w{i}"), 1, at);
            }
            c
        }
        "ghz" => {
            let n = n.ok_or_else(|| Error::Argument("builtin ghz needs a qubit count n".into()))?;
            if n < 2 {
                return Err(Error::Argument(format!("ghz needs at least 2 qubits, got {n}")));
            }
            let mut c = Circuit::new(n, 0);
            c.h(0);
            let links: Vec<usize> = (1..n).map(|q| c.cnot(q - 1, q)).collect();
            // qubit i is cut right after it receives the entanglement
            for q in 1..n.saturating_sub(1) {
                c.wire_cut(&format!("w{q}"), q, links[q - 1]);
            }
            c
        }
        _ => {
            return Err(Error::Argument(format!(
                "unknown builtin circuit {name:?}; known: {}",
                BUILTIN_NAMES.join(", ")
            )))
        }
    };
    c.validate()?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtins_validate() {
        for name in BUILTIN_NAMES {
            builtin(name, Some(4)).unwrap();
        }
        assert!(builtin("fig9", None).is_err());
        assert!(builtin("ghz", None).is_err());
    }

    #[test]
    fn ghz_cut_count() {
        let c = builtin("ghz", Some(4)).unwrap();
        assert_eq!(c.cut_markers().count(), 2);
    }
}
