//! Quasiprobability decompositions: signed combinations of realizable
//! operations that reconstruct a target channel.

mod json;

use std::sync::Arc;

use rand::Rng;

use crate::circuit::PrepState;
use crate::cuts::bell::{bell_family_density, bell_projector, BellFamily};
use crate::cuts::teleport::teleport_choi;
use crate::error::{Error, Result};
use crate::linalg::{self, gates, CMatrix};
use crate::linsim::{ChoiMatrix, Instrument, Pauli};

/// Default tolerance for Choi-matrix equality.
pub const CHOI_TOL: f64 = 1e-10;

/// How a term is realized on the simulator.
#[derive(Clone, Debug)]
pub enum TermAction {
    /// `X -> tr[O X] rho` with `O` a Pauli string (identity allowed) and
    /// `rho` a product of single-qubit states. Character `k` of both acts on
    /// wire `k`.
    MeasurePrepare { paulis: Vec<Pauli>, prep: Vec<PrepState> },
    /// Measure in the basis `U|j>` for `U` drawn uniformly from `unitaries`
    /// and prepare the observed basis vector.
    RandomBasis { n_qubits: usize, unitaries: Arc<Vec<CMatrix>> },
    /// Discard the input and prepare the maximally mixed state.
    Depolarize { n_qubits: usize },
    /// Signed instrument; branch weights multiply the shot weight.
    Instrument(Instrument),
    /// Prepare one of the separable mixtures on a Bell register of
    /// `n_pairs` pairs (no input). A-side qubits are the low half.
    BellState { n_pairs: usize, family: BellFamily },
    /// Prepare a Bell-register mixture and teleport `n_wires` wires with it.
    Teleport { n_wires: usize, family: BellFamily },
    /// Independent actions on consecutive registers, first one lowest.
    Tensor(Vec<TermAction>),
}

impl TermAction {
    pub fn kind(&self) -> &'static str {
        match self {
            TermAction::MeasurePrepare { .. } => "measure_prepare",
            TermAction::RandomBasis { .. } => "random_basis",
            TermAction::Depolarize { .. } => "depolarize",
            TermAction::Instrument(_) => "instrument",
            TermAction::BellState { .. } => "bell_state",
            TermAction::Teleport { .. } => "teleport",
            TermAction::Tensor(_) => "tensor",
        }
    }

    /// `(dim_in, dim_out)`
    pub fn dims(&self) -> (usize, usize) {
        match self {
            TermAction::MeasurePrepare { paulis, .. } => (1 << paulis.len(), 1 << paulis.len()),
            TermAction::RandomBasis { n_qubits, .. } | TermAction::Depolarize { n_qubits } => {
                (1 << n_qubits, 1 << n_qubits)
            }
            TermAction::Instrument(i) => (i.dim_in(), i.dim_out()),
            TermAction::BellState { n_pairs, .. } => (1, 1 << (2 * n_pairs)),
            TermAction::Teleport { n_wires, .. } => (1 << n_wires, 1 << n_wires),
            TermAction::Tensor(parts) => parts.iter().fold((1, 1), |(i, o), p| {
                let (pi, po) = p.dims();
                (i * pi, o * po)
            }),
        }
    }

    pub fn observable_matrix(paulis: &[Pauli]) -> CMatrix {
        linalg::tensor_all(&paulis.iter().map(|p| p.matrix()).collect::<Vec<_>>())
    }

    pub fn prep_matrix(prep: &[PrepState]) -> CMatrix {
        linalg::tensor_all(&prep.iter().map(|s| s.density()).collect::<Vec<_>>())
    }

    pub fn choi(&self) -> Result<ChoiMatrix> {
        Ok(match self {
            TermAction::MeasurePrepare { paulis, prep } => {
                if paulis.len() != prep.len() {
                    return Err(Error::Dimension(format!(
                        "measure-prepare term with {} measured and {} prepared wires",
                        paulis.len(),
                        prep.len()
                    )));
                }
                let o = Self::observable_matrix(paulis);
                let rho = Self::prep_matrix(prep);
                let d = o.nrows();
                ChoiMatrix::new(d, d, linalg::kron_le(&o.transpose(), &rho))?
            }
            TermAction::RandomBasis { n_qubits, unitaries } => {
                let d = 1usize << n_qubits;
                if unitaries.is_empty() {
                    return Err(Error::Argument("random-basis term without unitaries".into()));
                }
                let mut acc = CMatrix::zeros(d * d, d * d);
                let w = 1.0 / unitaries.len() as f64;
                for u in unitaries.iter() {
                    for j in 0..d {
                        let v: Vec<_> = u.column(j).iter().copied().collect();
                        let p = linalg::projector(&v);
                        linalg::add_scaled(&mut acc, w, &linalg::kron_le(&p.transpose(), &p));
                    }
                }
                ChoiMatrix::new(d, d, acc)?
            }
            TermAction::Depolarize { n_qubits } => {
                let d = 1usize << n_qubits;
                ChoiMatrix::new(d, d, linalg::identity(d * d).scale(1.0 / d as f64))?
            }
            TermAction::Instrument(inst) => inst.choi(),
            TermAction::BellState { n_pairs, family } => ChoiMatrix::from_state(&bell_family_density(*n_pairs, *family)?),
            TermAction::Teleport { n_wires, family } => teleport_choi(*n_wires, &bell_family_density(*n_wires, *family)?)?,
            TermAction::Tensor(parts) => {
                let mut acc = ChoiMatrix::new(1, 1, CMatrix::from_element(1, 1, linalg::ONE))?;
                for p in parts {
                    acc = acc.tensor(&p.choi()?);
                }
                acc
            }
        })
    }

    /// `tr[O rho]` for measure-prepare terms (and tensors of them).
    fn swap_trace(&self) -> Option<f64> {
        match self {
            TermAction::MeasurePrepare { paulis, prep } => {
                let mut t = 1.0;
                for (p, s) in paulis.iter().zip(prep) {
                    t *= (p.matrix() * s.density()).trace().re;
                }
                Some(t)
            }
            TermAction::Tensor(parts) => parts.iter().map(|p| p.swap_trace()).product(),
            _ => None,
        }
    }

    fn tensor_parts(self) -> Vec<TermAction> {
        match self {
            TermAction::Tensor(parts) => parts,
            other => vec![other],
        }
    }
}

/// Channel a QPD reconstructs. Densified only on demand so that large
/// decompositions can be built for their coefficients alone.
#[derive(Clone, Debug, PartialEq)]
pub enum TargetChannel {
    Identity { n_qubits: usize },
    /// Preparation of `n_pairs` Bell pairs, A-side qubits low.
    BellPairs { n_pairs: usize },
    Cnot,
    Tensor(Box<TargetChannel>, Box<TargetChannel>),
}

impl TargetChannel {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            TargetChannel::Identity { n_qubits } => (1 << n_qubits, 1 << n_qubits),
            TargetChannel::BellPairs { n_pairs } => (1, 1 << (2 * n_pairs)),
            TargetChannel::Cnot => (4, 4),
            TargetChannel::Tensor(a, b) => {
                let ((ai, ao), (bi, bo)) = (a.dims(), b.dims());
                (ai * bi, ao * bo)
            }
        }
    }

    pub fn choi(&self) -> Result<ChoiMatrix> {
        Ok(match self {
            TargetChannel::Identity { n_qubits } => ChoiMatrix::identity(1 << n_qubits),
            TargetChannel::BellPairs { n_pairs } => ChoiMatrix::from_state(&bell_projector(*n_pairs)?),
            TargetChannel::Cnot => ChoiMatrix::from_kraus(4, 4, &[(1.0, gates::cnot())]),
            TargetChannel::Tensor(a, b) => a.choi()?.tensor(&b.choi()?),
        })
    }
}

#[derive(Clone, Debug)]
pub struct QpdTerm {
    pub coeff: f64,
    pub action: TermAction,
}

impl QpdTerm {
    pub fn new(coeff: f64, action: TermAction) -> Self {
        Self { coeff, action }
    }
}

/// Result of comparing a QPD against its target channel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChoiCheck {
    pub passed: bool,
    pub max_deviation: f64,
}

#[derive(Clone, Debug)]
pub struct Qpd {
    name: String,
    terms: Vec<QpdTerm>,
    target: TargetChannel,
}

impl Qpd {
    pub fn new(name: impl Into<String>, terms: Vec<QpdTerm>, target: TargetChannel) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Argument("a QPD needs at least one term".into()));
        }
        let dims = target.dims();
        for (i, t) in terms.iter().enumerate() {
            if t.action.dims() != dims {
                return Err(Error::Dimension(format!(
                    "term {i} maps {:?} but the target maps {dims:?}",
                    t.action.dims()
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            terms,
            target,
        })
    }

    /// Single-term QPD of the identity channel on `n_qubits`.
    pub fn identity(n_qubits: usize) -> Self {
        let d = 1 << n_qubits;
        Self::new(
            format!("identity_{n_qubits}"),
            vec![QpdTerm::new(1.0, TermAction::Instrument(Instrument::identity(d)))],
            TargetChannel::Identity { n_qubits },
        )
        .expect("identity QPD is well formed")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn terms(&self) -> &[QpdTerm] {
        &self.terms
    }

    pub fn target(&self) -> &TargetChannel {
        &self.target
    }

    /// One-norm of the coefficients.
    pub fn kappa(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.abs()).sum()
    }

    /// Term probabilities `|a_i| / kappa` and signs.
    pub fn sampling_distribution(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let kappa = self.kappa();
        if !(kappa > 0.0) {
            return Err(Error::Argument(format!("QPD {} has zero one-norm", self.name)));
        }
        Ok(self.terms.iter().map(|t| (t.coeff.abs() / kappa, t.coeff.signum())).unzip())
    }

    /// Draw a term index with probability `|a_i| / kappa`.
    pub fn sample_term<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let kappa = self.kappa();
        let mut u = rng.gen::<f64>() * kappa;
        for (i, t) in self.terms.iter().enumerate() {
            u -= t.coeff.abs();
            if u < 0.0 {
                return i;
            }
        }
        self.terms.iter().rposition(|t| t.coeff != 0.0).unwrap_or(0)
    }

    /// `sum_i a_i Choi(F_i)`
    pub fn reconstructed_choi(&self) -> Result<ChoiMatrix> {
        let (di, dout) = self.target.dims();
        let mut acc = ChoiMatrix::zeros(di, dout);
        for t in &self.terms {
            acc.add_scaled(t.coeff, &t.action.choi()?);
        }
        Ok(acc)
    }

    pub fn verify_choi(&self) -> Result<ChoiCheck> {
        self.verify_choi_with_tol(CHOI_TOL)
    }

    pub fn verify_choi_with_tol(&self, tol: f64) -> Result<ChoiCheck> {
        let dev = self.reconstructed_choi()?.max_deviation(&self.target.choi()?)?;
        Ok(ChoiCheck {
            passed: dev <= tol,
            max_deviation: dev,
        })
    }

    /// `sum_i a_i tr[O_i rho_i]` for a QPD whose terms are all of
    /// measure-and-prepare form. Equals `4^n` for any valid decomposition of
    /// the `n`-qubit identity channel.
    pub fn verify_swap_trick(&self) -> Result<f64> {
        let mut total = 0.0;
        for (i, t) in self.terms.iter().enumerate() {
            let tr = t.action.swap_trace().ok_or_else(|| {
                Error::Argument(format!("term {i} ({}) is not of measure-and-prepare form", t.action.kind()))
            })?;
            total += t.coeff * tr;
        }
        Ok(total)
    }

    /// All pairwise products of terms, `self` acting on the low register.
    pub fn tensor(&self, high: &Qpd) -> Qpd {
        let mut terms = Vec::with_capacity(self.terms.len() * high.terms.len());
        for a in &self.terms {
            for b in &high.terms {
                let mut parts = a.action.clone().tensor_parts();
                parts.extend(b.action.clone().tensor_parts());
                let action = merge_measure_prepare(parts);
                terms.push(QpdTerm::new(a.coeff * b.coeff, action));
            }
        }
        Qpd {
            name: format!("{}*{}", self.name, high.name),
            terms,
            target: TargetChannel::Tensor(Box::new(self.target.clone()), Box::new(high.target.clone())),
        }
    }

    /// `self` tensored with itself `n` times.
    pub fn power(&self, n: usize) -> Result<Qpd> {
        if n == 0 {
            return Err(Error::Argument("tensor power must be at least 1".into()));
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = out.tensor(self);
        }
        out.name = format!("{}^{n}", self.name);
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json::qpd_to_json(self)
    }
}

/// Products of measure-and-prepare terms are again measure-and-prepare.
fn merge_measure_prepare(parts: Vec<TermAction>) -> TermAction {
    if parts.iter().all(|p| matches!(p, TermAction::MeasurePrepare { .. })) {
        let mut all_p = Vec::new();
        let mut all_s = Vec::new();
        for p in parts {
            if let TermAction::MeasurePrepare { paulis, prep } = p {
                all_p.extend(paulis);
                all_s.extend(prep);
            }
        }
        return TermAction::MeasurePrepare {
            paulis: all_p,
            prep: all_s,
        };
    }
    if parts.len() == 1 {
        return parts.into_iter().next().expect("one part");
    }
    TermAction::Tensor(parts)
}
