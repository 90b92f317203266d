use serde_json::{json, Value};

use super::{Qpd, TermAction};
use crate::linalg::matrix_to_rows;

/// Matrix lists longer than this are summarized by their length.
const MAX_LISTED_UNITARIES: usize = 64;

fn action_json(a: &TermAction) -> Value {
    let mut v = match a {
        TermAction::MeasurePrepare { paulis, prep } => json!({
            "observable": paulis.iter().map(|p| p.as_char()).collect::<String>(),
            "observable_matrix": matrix_to_rows(&TermAction::observable_matrix(paulis)),
            "prep": prep.iter().map(|s| s.label()).collect::<Vec<_>>(),
            "prep_matrix": matrix_to_rows(&TermAction::prep_matrix(prep)),
        }),
        TermAction::RandomBasis { n_qubits, unitaries } => {
            let mut v = json!({"n_qubits": n_qubits, "n_unitaries": unitaries.len()});
            if unitaries.len() <= MAX_LISTED_UNITARIES {
                v["unitaries"] = json!(unitaries.iter().map(matrix_to_rows).collect::<Vec<_>>());
            }
            v
        }
        TermAction::Depolarize { n_qubits } => json!({"n_qubits": n_qubits}),
        TermAction::Instrument(inst) => json!({
            "branches": inst.branches().iter().map(|b| json!({
                "label": b.label,
                "weight": b.weight,
                "kraus": b.kraus_ops.iter().map(matrix_to_rows).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
        TermAction::BellState { n_pairs, family } => json!({"n_pairs": n_pairs, "family": family.label()}),
        TermAction::Teleport { n_wires, family } => json!({"n_wires": n_wires, "family": family.label()}),
        TermAction::Tensor(parts) => json!({"parts": parts.iter().map(action_json).collect::<Vec<_>>()}),
    };
    v["type"] = json!(a.kind());
    v
}

pub(super) fn qpd_to_json(q: &Qpd) -> Value {
    json!({
        "name": q.name(),
        "kappa": q.kappa(),
        "dim_in": q.target().dims().0,
        "dim_out": q.target().dims().1,
        "terms": q.terms().iter().map(|t| json!({
            "coeff": t.coeff,
            "action": action_json(&t.action),
        })).collect::<Vec<_>>(),
    })
}
