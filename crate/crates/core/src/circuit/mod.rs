//! Circuit representation with cut markers, partitioning into two
//! subcircuits, and cut-plan bookkeeping.

mod builtin;
mod comm;
mod factory;
mod json;
mod partition;
mod random;

use std::collections::HashSet;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, gates, CMatrix, C64, ONE, ZERO};

pub use builtin::{builtin, BUILTIN_NAMES};
pub use comm::{classify_communication, CommClassification};
pub use factory::{plan_factory, FactoryPlan};
pub use json::{parse_circuit, serialize_circuit};
pub use partition::{
    partition, AncillaPair, CommMessage, CutSite, PartitionedCircuit, ScheduledOp, Side, SiteKind,
};
pub use random::{random_cut_circuit, RandomCircuitConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    T,
    RX,
    RY,
    RZ,
    CNOT,
    CZ,
    SWAP,
    Unitary,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::S => "S",
            GateKind::T => "T",
            GateKind::RX => "RX",
            GateKind::RY => "RY",
            GateKind::RZ => "RZ",
            GateKind::CNOT => "CNOT",
            GateKind::CZ => "CZ",
            GateKind::SWAP => "SWAP",
            GateKind::Unitary => "unitary",
        }
    }

    fn fixed_arity(self) -> Option<usize> {
        match self {
            GateKind::CNOT | GateKind::CZ | GateKind::SWAP => Some(2),
            GateKind::Unitary => None,
            _ => Some(1),
        }
    }

    fn n_params(self) -> usize {
        match self {
            GateKind::RX | GateKind::RY | GateKind::RZ => 1,
            _ => 0,
        }
    }
}

impl FromStr for GateKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(match s {
            "H" => GateKind::H,
            "X" => GateKind::X,
            "Y" => GateKind::Y,
            "Z" => GateKind::Z,
            "S" => GateKind::S,
            "T" => GateKind::T,
            "RX" => GateKind::RX,
            "RY" => GateKind::RY,
            "RZ" => GateKind::RZ,
            "CNOT" | "CX" => GateKind::CNOT,
            "CZ" => GateKind::CZ,
            "SWAP" => GateKind::SWAP,
            "unitary" | "UNITARY" => GateKind::Unitary,
            _ => return Err(format!("unknown gate name {s:?}")),
        })
    }
}

/// A gate application. For two-qubit gates bit `i` of the matrix index acts
/// on `targets[i]`; CNOT targets are `[control, target]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub params: Vec<f64>,
    pub targets: Vec<usize>,
    /// Only for `GateKind::Unitary`.
    pub matrix: Option<CMatrix>,
}

impl Gate {
    pub fn new(kind: GateKind, params: Vec<f64>, targets: Vec<usize>) -> Result<Gate> {
        if kind == GateKind::Unitary {
            return Err(Error::Argument("unitary gates need a matrix; use Gate::unitary".into()));
        }
        let g = Gate {
            kind,
            params,
            targets,
            matrix: None,
        };
        g.check_shape()?;
        Ok(g)
    }

    pub fn unitary(matrix: CMatrix, targets: Vec<usize>) -> Result<Gate> {
        let g = Gate {
            kind: GateKind::Unitary,
            params: Vec::new(),
            targets,
            matrix: Some(matrix),
        };
        g.check_shape()?;
        Ok(g)
    }

    fn check_shape(&self) -> Result<()> {
        let arity = self.targets.len();
        match self.kind.fixed_arity() {
            Some(a) if a != arity => {
                return Err(Error::Argument(format!("{} takes {a} targets, got {arity}", self.kind.name())));
            }
            _ => {}
        }
        if self.params.len() != self.kind.n_params() {
            return Err(Error::Argument(format!(
                "{} takes {} parameters, got {}",
                self.kind.name(),
                self.kind.n_params(),
                self.params.len()
            )));
        }
        if self.params.iter().any(|p| !p.is_finite()) {
            return Err(Error::Argument("gate parameters must be finite".into()));
        }
        if let Some(m) = &self.matrix {
            if !(1..=2).contains(&arity) || m.shape() != (1 << arity, 1 << arity) {
                return Err(Error::Argument(format!(
                    "unitary literal of shape {:?} on {arity} targets (1 or 2 qubits supported)",
                    m.shape()
                )));
            }
            if !linalg::is_unitary(m, 1e-10) {
                return Err(Error::Validation("unitary literal is not unitary within 1e-10".into()));
            }
        }
        for (i, t) in self.targets.iter().enumerate() {
            if self.targets[..i].contains(t) {
                return Err(Error::Argument(format!("duplicate target {t}")));
            }
        }
        Ok(())
    }

    pub fn matrix(&self) -> CMatrix {
        let p = |i: usize| self.params[i];
        match self.kind {
            GateKind::H => gates::h(),
            GateKind::X => gates::x(),
            GateKind::Y => gates::y(),
            GateKind::Z => gates::z(),
            GateKind::S => gates::s(),
            GateKind::T => gates::t(),
            GateKind::RX => gates::rx(p(0)),
            GateKind::RY => gates::ry(p(0)),
            GateKind::RZ => gates::rz(p(0)),
            GateKind::CNOT => gates::cnot(),
            GateKind::CZ => gates::cz(),
            GateKind::SWAP => gates::swap(),
            GateKind::Unitary => self.matrix.clone().expect("unitary gate carries a matrix"),
        }
    }

    pub(crate) fn remapped(&self, map: impl Fn(usize) -> usize) -> Gate {
        Gate {
            targets: self.targets.iter().map(|&t| map(t)).collect(),
            ..self.clone()
        }
    }
}

/// Single-qubit states a `Prepare` op can reset a qubit to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrepState {
    Zero,
    One,
    Plus,
    Minus,
    PlusI,
    MinusI,
}

impl PrepState {
    pub const ALL: [PrepState; 6] = [
        PrepState::Zero,
        PrepState::One,
        PrepState::Plus,
        PrepState::Minus,
        PrepState::PlusI,
        PrepState::MinusI,
    ];

    pub fn label(self) -> &'static str {
        match self {
            PrepState::Zero => "0",
            PrepState::One => "1",
            PrepState::Plus => "+",
            PrepState::Minus => "-",
            PrepState::PlusI => "i",
            PrepState::MinusI => "-i",
        }
    }

    pub fn from_label(s: &str) -> Option<PrepState> {
        PrepState::ALL.into_iter().find(|p| p.label() == s)
    }

    pub fn amplitudes(self) -> [C64; 2] {
        let r = C64::new(FRAC_1_SQRT_2, 0.0);
        let ri = C64::new(0.0, FRAC_1_SQRT_2);
        match self {
            PrepState::Zero => [ONE, ZERO],
            PrepState::One => [ZERO, ONE],
            PrepState::Plus => [r, r],
            PrepState::Minus => [r, -r],
            PrepState::PlusI => [r, ri],
            PrepState::MinusI => [r, -ri],
        }
    }

    pub fn density(self) -> CMatrix {
        linalg::projector(&self.amplitudes())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutKind {
    Wire,
    Gate,
}

/// A cut position. Wire cuts act on `qubit` immediately after op `after_op`;
/// gate cuts name the two-qubit gate at index `after_op`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutMarker {
    pub id: String,
    pub kind: CutKind,
    pub qubit: usize,
    pub after_op: usize,
}

/// Role of a slot that stands in for one side of a cut in a subcircuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SlotRole {
    /// Sender half of a wire cut: consumes the listed qubits.
    Send,
    /// Receiver half of a wire cut: initializes the listed qubits.
    Receive,
    GateControl,
    GateTarget,
    /// Bell-register preparation on the A or B ancillas.
    BellPrepA,
    BellPrepB,
}

impl SlotRole {
    pub fn label(self) -> &'static str {
        match self {
            SlotRole::Send => "send",
            SlotRole::Receive => "receive",
            SlotRole::GateControl => "gate_control",
            SlotRole::GateTarget => "gate_target",
            SlotRole::BellPrepA => "bell_prep_a",
            SlotRole::BellPrepB => "bell_prep_b",
        }
    }

    pub fn from_label(s: &str) -> Option<SlotRole> {
        [
            SlotRole::Send,
            SlotRole::Receive,
            SlotRole::GateControl,
            SlotRole::GateTarget,
            SlotRole::BellPrepA,
            SlotRole::BellPrepB,
        ]
        .into_iter()
        .find(|r| r.label() == s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub site: usize,
    pub role: SlotRole,
    pub qubits: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Op {
    Gate(Gate),
    Measure { target: usize, clbit: usize },
    Prepare { target: usize, state: PrepState },
    ClassicallyControlled { gate: Gate, clbit: usize, value: u8 },
    Cut(CutMarker),
    Slot(Slot),
}

impl Op {
    /// Qubits a non-marker op acts on (empty for cut markers).
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Op::Gate(g) | Op::ClassicallyControlled { gate: g, .. } => g.targets.clone(),
            Op::Measure { target, .. } | Op::Prepare { target, .. } => vec![*target],
            Op::Cut(_) => Vec::new(),
            Op::Slot(s) => s.qubits.clone(),
        }
    }

    pub fn touches(&self, q: usize) -> bool {
        self.qubits().contains(&q)
    }

    pub fn is_marker(&self) -> bool {
        matches!(self, Op::Cut(_))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub n_qubits: usize,
    pub n_clbits: usize,
    pub ops: Vec<Op>,
}

impl Circuit {
    pub fn new(n_qubits: usize, n_clbits: usize) -> Self {
        Self {
            n_qubits,
            n_clbits,
            ops: Vec::new(),
        }
    }

    /// Append an op and return its index.
    pub fn push(&mut self, op: Op) -> usize {
        self.ops.push(op);
        self.ops.len() - 1
    }

    pub fn gate(&mut self, kind: GateKind, params: &[f64], targets: &[usize]) -> usize {
        let g = Gate::new(kind, params.to_vec(), targets.to_vec()).expect("well-formed builder gate");
        self.push(Op::Gate(g))
    }

    pub fn h(&mut self, q: usize) -> usize {
        self.gate(GateKind::H, &[], &[q])
    }

    pub fn ry(&mut self, q: usize, theta: f64) -> usize {
        self.gate(GateKind::RY, &[theta], &[q])
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> usize {
        self.gate(GateKind::CNOT, &[], &[control, target])
    }

    pub fn measure(&mut self, target: usize, clbit: usize) -> usize {
        self.push(Op::Measure { target, clbit })
    }

    pub fn wire_cut(&mut self, id: &str, qubit: usize, after_op: usize) -> usize {
        self.push(Op::Cut(CutMarker {
            id: id.to_string(),
            kind: CutKind::Wire,
            qubit,
            after_op,
        }))
    }

    pub fn gate_cut(&mut self, id: &str, gate_op: usize) -> usize {
        let qubit = self.ops[gate_op].qubits()[0];
        self.push(Op::Cut(CutMarker {
            id: id.to_string(),
            kind: CutKind::Gate,
            qubit,
            after_op: gate_op,
        }))
    }

    pub fn cut_markers(&self) -> impl Iterator<Item = &CutMarker> {
        self.ops.iter().filter_map(|op| match op {
            Op::Cut(m) => Some(m),
            _ => None,
        })
    }

    pub fn find_cut(&self, id: &str) -> Option<&CutMarker> {
        self.cut_markers().find(|m| m.id == id)
    }

    /// Index of the next non-marker op after `after` that touches `q`.
    pub fn next_op_on(&self, q: usize, after: usize) -> Option<usize> {
        (after + 1..self.ops.len()).find(|&i| !self.ops[i].is_marker() && self.ops[i].touches(q))
    }

    pub fn validate(&self) -> Result<()> {
        self.check().map_err(|(idx, msg)| match idx {
            Some(i) => Error::Validation(format!("op {i}: {msg}")),
            None => Error::Validation(msg),
        })
    }

    /// Structural checks; errors carry the offending op index when there is one.
    pub(crate) fn check(&self) -> std::result::Result<(), (Option<usize>, String)> {
        let mut ids = HashSet::new();
        for (i, op) in self.ops.iter().enumerate() {
            let err = |m: String| Err((Some(i), m));
            for q in op.qubits() {
                if q >= self.n_qubits {
                    return err(format!("qubit {q} out of range for {} qubits", self.n_qubits));
                }
            }
            match op {
                Op::Gate(g) | Op::ClassicallyControlled { gate: g, .. } => {
                    if let Err(e) = g.check_shape() {
                        return err(e.to_string());
                    }
                }
                Op::Slot(s) => {
                    for (j, q) in s.qubits.iter().enumerate() {
                        if s.qubits[..j].contains(q) {
                            return err(format!("duplicate slot qubit {q}"));
                        }
                    }
                }
                _ => {}
            }
            match op {
                Op::Measure { clbit, .. } | Op::ClassicallyControlled { clbit, .. } if *clbit >= self.n_clbits => {
                    return err(format!("clbit {clbit} out of range for {} clbits", self.n_clbits));
                }
                Op::ClassicallyControlled { value, .. } if *value > 1 => {
                    return err(format!("classical control value must be 0 or 1, got {value}"));
                }
                Op::Cut(m) => {
                    if !ids.insert(m.id.clone()) {
                        return err(format!("duplicate cut id {:?}", m.id));
                    }
                    if m.qubit >= self.n_qubits {
                        return err(format!("cut qubit {} out of range", m.qubit));
                    }
                    let anchor = match self.ops.get(m.after_op) {
                        Some(a) if !a.is_marker() => a,
                        _ => return err(format!("cut {:?} after_op {} is not an operation", m.id, m.after_op)),
                    };
                    match m.kind {
                        CutKind::Wire => {
                            if !anchor.touches(m.qubit) {
                                return err(format!(
                                    "wire cut {:?}: op {} does not act on qubit {}",
                                    m.id, m.after_op, m.qubit
                                ));
                            }
                            if self.next_op_on(m.qubit, m.after_op).is_none() {
                                return err(format!(
                                    "wire cut {:?}: no later op on qubit {} after op {}",
                                    m.id, m.qubit, m.after_op
                                ));
                            }
                        }
                        CutKind::Gate => match anchor {
                            Op::Gate(g) if g.kind == GateKind::CNOT && g.targets.contains(&m.qubit) => {}
                            _ => {
                                return err(format!(
                                    "gate cut {:?}: op {} is not a CNOT on qubit {}",
                                    m.id, m.after_op, m.qubit
                                ))
                            }
                        },
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }
}

/// Cutting method applied to every cut of a [`CutSpec`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CutMethod {
    LoPeng,
    LoccTeleport,
    LoccLoweParallel,
    GateCnot,
}

impl CutMethod {
    pub const ALL: [CutMethod; 4] = [
        CutMethod::LoPeng,
        CutMethod::LoccTeleport,
        CutMethod::LoccLoweParallel,
        CutMethod::GateCnot,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CutMethod::LoPeng => "lo_peng",
            CutMethod::LoccTeleport => "locc_teleport",
            CutMethod::LoccLoweParallel => "locc_lowe_parallel",
            CutMethod::GateCnot => "gate_cnot",
        }
    }

    pub fn is_wire(self) -> bool {
        self != CutMethod::GateCnot
    }
}

impl fmt::Display for CutMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CutMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CutMethod::ALL
            .into_iter()
            .find(|m| m.label() == s)
            .ok_or_else(|| Error::Argument(format!("unknown cut method {s:?}")))
    }
}

/// Which cuts to apply and how.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutSpec {
    pub cut_ids: Vec<String>,
    pub method: CutMethod,
    /// Bell pairs prepared per factory round (teleport method only).
    #[serde(default = "default_factory_size")]
    pub factory_size: usize,
    /// Explicit batches of cut ids; empty means automatic grouping.
    #[serde(default)]
    pub grouping: Vec<Vec<String>>,
}

fn default_factory_size() -> usize {
    1
}

impl CutSpec {
    pub fn new(cut_ids: &[&str], method: CutMethod) -> Self {
        Self {
            cut_ids: cut_ids.iter().map(|s| s.to_string()).collect(),
            method,
            factory_size: 1,
            grouping: Vec::new(),
        }
    }

    pub fn with_factory_size(mut self, k: usize) -> Self {
        self.factory_size = k;
        self
    }

    pub fn summary(&self) -> String {
        let mut s = format!("{}[{}]", self.method, self.cut_ids.join(","));
        if self.method == CutMethod::LoccTeleport {
            s.push_str(&format!(" k={}", self.factory_size));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bad_arity_rejected() {
        assert!(Gate::new(GateKind::CNOT, vec![], vec![0]).is_err());
        assert!(Gate::new(GateKind::RX, vec![], vec![0]).is_err());
        assert!(Gate::new(GateKind::H, vec![], vec![0]).is_ok());
    }

    #[test]
    fn wire_cut_must_sit_between_ops() {
        let mut c = Circuit::new(2, 0);
        let h = c.h(0);
        c.wire_cut("w", 0, h);
        assert!(c.validate().is_err());
        c.cnot(0, 1);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn gate_cut_must_name_cnot() {
        let mut c = Circuit::new(2, 0);
        let h = c.h(0);
        c.gate_cut("g", h);
        assert!(c.validate().is_err());
        let mut c = Circuit::new(2, 0);
        let g = c.cnot(0, 1);
        c.gate_cut("g", g);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn duplicate_cut_ids_rejected() {
        let mut c = Circuit::new(2, 0);
        let a = c.cnot(0, 1);
        c.cnot(0, 1);
        c.wire_cut("w", 0, a);
        c.wire_cut("w", 1, a);
        assert!(c.validate().is_err());
    }

    #[test]
    fn prep_states_are_normalized() {
        for p in PrepState::ALL {
            let a = p.amplitudes();
            assert!((a[0].norm_sqr() + a[1].norm_sqr() - 1.0).abs() < 1e-15);
            assert_eq!(PrepState::from_label(p.label()), Some(p));
        }
    }
}
