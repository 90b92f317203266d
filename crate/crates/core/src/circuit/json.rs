//! JSON wire format for circuits.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{Circuit, CutKind, CutMarker, Gate, GateKind, Op, PrepState, Slot, SlotRole};
use crate::error::{Error, Result};
use crate::linalg::{matrix_to_rows, CMatrix, C64};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCircuit {
    n_qubits: usize,
    #[serde(default)]
    n_clbits: usize,
    ops: Vec<Value>,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum RawOp {
    Gate(RawGate),
    Measure(RawMeasure),
    Prepare(RawPrepare),
    Ccontrol(RawControlled),
    Cut(RawCut),
    Slot(RawSlot),
}

#[derive(Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawGate {
    name: String,
    #[serde(default)]
    params: Vec<f64>,
    targets: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<[f64; 2]>>>,
}

/// The gate inside a `ccontrol` op may optionally repeat `"type": "gate"`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInnerGate {
    #[serde(rename = "type", default)]
    kind: Option<String>,
    name: String,
    #[serde(default)]
    params: Vec<f64>,
    targets: Vec<usize>,
    #[serde(default)]
    matrix: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasure {
    target: usize,
    clbit: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPrepare {
    target: usize,
    state: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawControlled {
    clbit: usize,
    value: u8,
    gate: RawInnerGate,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCut {
    id: String,
    kind: CutKind,
    qubit: usize,
    after_op: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSlot {
    site: usize,
    role: String,
    qubits: Vec<usize>,
}

fn matrix_from_rows(rows: &[Vec<[f64; 2]>]) -> std::result::Result<CMatrix, String> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err("unitary matrix must be square".into());
    }
    Ok(CMatrix::from_fn(n, n, |r, c| C64::new(rows[r][c][0], rows[r][c][1])))
}

fn build_gate(
    name: &str,
    params: Vec<f64>,
    targets: Vec<usize>,
    matrix: Option<Vec<Vec<[f64; 2]>>>,
) -> std::result::Result<Gate, String> {
    let kind: GateKind = name.parse()?;
    let gate = match (kind, matrix) {
        (GateKind::Unitary, Some(rows)) => Gate::unitary(matrix_from_rows(&rows)?, targets),
        (GateKind::Unitary, None) => return Err("unitary gate requires a \"matrix\" field".into()),
        (_, Some(_)) => return Err(format!("gate {name} does not take a matrix")),
        (_, None) => Gate::new(kind, params, targets),
    };
    gate.map_err(|e| e.to_string())
}

fn convert(raw: RawOp) -> std::result::Result<Op, String> {
    Ok(match raw {
        RawOp::Gate(g) => Op::Gate(build_gate(&g.name, g.params, g.targets, g.matrix)?),
        RawOp::Measure(m) => Op::Measure {
            target: m.target,
            clbit: m.clbit,
        },
        RawOp::Prepare(p) => Op::Prepare {
            target: p.target,
            state: PrepState::from_label(&p.state).ok_or_else(|| format!("unknown preparation state {:?}", p.state))?,
        },
        RawOp::Ccontrol(c) => {
            if let Some(k) = c.gate.kind.as_deref() {
                if k != "gate" {
                    return Err(format!("controlled op must be a gate, got type {k:?}"));
                }
            }
            Op::ClassicallyControlled {
                gate: build_gate(&c.gate.name, c.gate.params, c.gate.targets, c.gate.matrix)?,
                clbit: c.clbit,
                value: c.value,
            }
        }
        RawOp::Cut(c) => Op::Cut(CutMarker {
            id: c.id,
            kind: c.kind,
            qubit: c.qubit,
            after_op: c.after_op,
        }),
        RawOp::Slot(s) => Op::Slot(Slot {
            site: s.site,
            role: SlotRole::from_label(&s.role).ok_or_else(|| format!("unknown slot role {:?}", s.role))?,
            qubits: s.qubits,
        }),
    })
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let raw: RawCircuit = serde_json::from_str(text)
        .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    let mut ops = Vec::with_capacity(raw.ops.len());
    for (i, value) in raw.ops.into_iter().enumerate() {
        let loc = format!("ops[{i}]");
        let op_raw: RawOp = serde_json::from_value(value).map_err(|e| Error::parse(&loc, e.to_string()))?;
        ops.push(convert(op_raw).map_err(|m| Error::parse(&loc, m))?);
    }
    let circuit = Circuit {
        n_qubits: raw.n_qubits,
        n_clbits: raw.n_clbits,
        ops,
    };
    circuit.check().map_err(|(idx, msg)| match idx {
        Some(i) => Error::parse(format!("ops[{i}]"), msg),
        None => Error::parse("circuit", msg),
    })?;
    Ok(circuit)
}

fn gate_value(g: &Gate) -> Value {
    let mut v = json!({
        "name": g.kind.name(),
        "params": g.params,
        "targets": g.targets,
    });
    if let Some(m) = &g.matrix {
        v["matrix"] = json!(matrix_to_rows(m));
    }
    v
}

fn op_value(op: &Op) -> Value {
    match op {
        Op::Gate(g) => {
            let mut v = gate_value(g);
            v["type"] = json!("gate");
            v
        }
        Op::Measure { target, clbit } => json!({"type": "measure", "target": target, "clbit": clbit}),
        Op::Prepare { target, state } => json!({"type": "prepare", "target": target, "state": state.label()}),
        Op::ClassicallyControlled { gate, clbit, value } => {
            json!({"type": "ccontrol", "clbit": clbit, "value": value, "gate": gate_value(gate)})
        }
        Op::Cut(m) => json!({"type": "cut", "id": m.id, "kind": m.kind, "qubit": m.qubit, "after_op": m.after_op}),
        Op::Slot(s) => json!({"type": "slot", "site": s.site, "role": s.role.label(), "qubits": s.qubits}),
    }
}

pub fn circuit_to_value(c: &Circuit) -> Value {
    json!({
        "n_qubits": c.n_qubits,
        "n_clbits": c.n_clbits,
        "ops": c.ops.iter().map(op_value).collect::<Vec<_>>(),
    })
}

pub fn serialize_circuit(c: &Circuit) -> String {
    serde_json::to_string_pretty(&circuit_to_value(c)).expect("circuit JSON serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gates;

    fn bell() -> Circuit {
        let mut c = Circuit::new(2, 2);
        c.h(0);
        c.cnot(0, 1);
        c.measure(0, 0);
        c.measure(1, 1);
        c
    }

    #[test]
    fn bell_round_trip() {
        let c = bell();
        assert_eq!(parse_circuit(&serialize_circuit(&c)).unwrap(), c);
    }

    #[test]
    fn marker_round_trip() {
        let mut c = Circuit::new(2, 1);
        c.h(1);
        c.ry(1, 0.3);
        c.h(0);
        let a = c.cnot(0, 1);
        c.cnot(1, 0);
        c.wire_cut("w1", 1, a);
        c.push(Op::Prepare {
            target: 0,
            state: PrepState::MinusI,
        });
        c.push(Op::ClassicallyControlled {
            gate: Gate::unitary(gates::s(), vec![1]).unwrap(),
            clbit: 0,
            value: 1,
        });
        let back = parse_circuit(&serialize_circuit(&c)).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.find_cut("w1").unwrap().after_op, 3);
    }

    #[test]
    fn unknown_gate_names_op_index() {
        let text = r#"{"n_qubits": 2, "ops": [
            {"type": "gate", "name": "H", "targets": [0]},
            {"type": "gate", "name": "CNOTT", "targets": [0, 1]}]}"#;
        match parse_circuit(text) {
            Err(Error::Parse { location, message }) => {
                assert_eq!(location, "ops[1]");
                assert!(message.contains("CNOTT"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_fields_and_bad_indices_rejected() {
        let extra = r#"{"n_qubits": 1, "ops": [{"type": "gate", "name": "H", "targets": [0], "colour": 1}]}"#;
        assert!(matches!(parse_circuit(extra), Err(Error::Parse { .. })));
        let top = r#"{"n_qubits": 1, "ops": [], "depth": 3}"#;
        assert!(matches!(parse_circuit(top), Err(Error::Parse { .. })));
        let range = r#"{"n_qubits": 1, "ops": [{"type": "gate", "name": "H", "targets": [4]}]}"#;
        match parse_circuit(range) {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "ops[0]"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_circuit("{not json"), Err(Error::Parse { .. })));
    }
}
