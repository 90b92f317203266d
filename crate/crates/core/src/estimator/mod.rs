//! Recombination of cut circuits: exact summation over every term and
//! measurement branch, and Monte Carlo sampling of the same sum.

mod exact;
mod mc;
mod probe;
mod program;
mod reference;

use serde::{Deserialize, Serialize};

use crate::circuit::{CutMethod, PartitionedCircuit, SiteKind};
use crate::cuts::{bell_qpd, cnot_gate_cut_qpd, lo_wire_cut_qpd_n, lowe_parallel_cut_qpd};
use crate::error::{Error, Result};
use crate::linsim::{parse_pauli_string, Pauli};
use crate::qpd::Qpd;

pub use exact::{estimate_exact, BRANCH_CAP};
pub use mc::estimate_mc;
pub use probe::{overhead_probe, probe_circuit, ProbeResult, DEFAULT_REPETITIONS};
pub use reference::simulate_uncut;

/// Real combination of Pauli strings over the logical qubits of the uncut
/// circuit; character `i` of each string acts on qubit `i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observable {
    pub pauli_terms: Vec<(f64, String)>,
}

impl Observable {
    pub fn new(pauli_terms: Vec<(f64, String)>) -> Result<Self> {
        let obs = Self { pauli_terms };
        obs.validate()?;
        Ok(obs)
    }

    pub fn pauli(label: &str) -> Result<Self> {
        Self::new(vec![(1.0, label.to_string())])
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self {
            pauli_terms: vec![(1.0, "I".repeat(n_qubits))],
        }
    }

    /// Product of `Z` on `qubits`.
    pub fn z_on(n_qubits: usize, qubits: &[usize]) -> Self {
        let label: String = (0..n_qubits).map(|q| if qubits.contains(&q) { 'Z' } else { 'I' }).collect();
        Self {
            pauli_terms: vec![(1.0, label)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pauli_terms.is_empty() {
            return Err(Error::Argument("observable has no terms".into()));
        }
        let n = self.pauli_terms[0].1.len();
        for (c, label) in &self.pauli_terms {
            if !c.is_finite() {
                return Err(Error::Argument(format!("coefficient {c} of {label:?} is not finite")));
            }
            if label.len() != n {
                return Err(Error::Argument(format!("Pauli strings of lengths {n} and {} in one observable", label.len())));
            }
            parse_pauli_string(label)?;
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.pauli_terms.first().map_or(0, |t| t.1.len())
    }

    /// Sum of absolute coefficients; bounds the operator norm.
    pub fn one_norm(&self) -> f64 {
        self.pauli_terms.iter().map(|(c, _)| c.abs()).sum()
    }

    pub(crate) fn parsed(&self, n_qubits: usize) -> Result<Vec<(f64, Vec<Pauli>)>> {
        self.validate()?;
        if self.n_qubits() != n_qubits {
            return Err(Error::Dimension(format!(
                "observable on {} qubits, circuit has {n_qubits}",
                self.n_qubits()
            )));
        }
        self.pauli_terms
            .iter()
            .map(|(c, l)| Ok((*c, parse_pauli_string(l)?)))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    MonteCarlo,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::MonteCarlo => "monte_carlo",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub value: f64,
    pub mode: Mode,
    /// Shots drawn, or the number of joint branches summed in exact mode.
    pub shots: u64,
    /// Product of the site `kappa`s.
    pub kappa: f64,
    /// Unbiased sample variance of the per-shot values (0 in exact mode).
    pub empirical_variance: f64,
    pub std_error: f64,
    /// `(kappa * ||obs||_1)^2`, the second moment of every per-shot value.
    pub predicted_variance_bound: f64,
    pub seed: u64,
    pub method: String,
}

/// Default decomposition for every site of a partition.
pub fn assign_qpds(p: &PartitionedCircuit) -> Result<Vec<Qpd>> {
    p.sites
        .iter()
        .map(|site| match &site.kind {
            SiteKind::Wire { method: CutMethod::LoPeng, .. } => lo_wire_cut_qpd_n(site.width),
            SiteKind::Wire { method: CutMethod::LoccLoweParallel, .. } => lowe_parallel_cut_qpd(site.width),
            SiteKind::Wire { method, .. } => Err(Error::Spec(format!("no wire-site decomposition for method {method}"))),
            SiteKind::BellPairs { .. } => bell_qpd(site.width),
            SiteKind::Gate { .. } => Ok(cnot_gate_cut_qpd()),
        })
        .collect()
}

/// Check that `qpds` matches the sites of `p` in count and dimensions.
fn check_assignment(p: &PartitionedCircuit, qpds: &[Qpd]) -> Result<()> {
    if qpds.len() != p.sites.len() {
        return Err(Error::Argument(format!("{} decompositions for {} cut sites", qpds.len(), p.sites.len())));
    }
    for (i, (site, q)) in p.sites.iter().zip(qpds).enumerate() {
        let w = site.width;
        let want = match site.kind {
            SiteKind::Wire { .. } => (1 << w, 1 << w),
            SiteKind::BellPairs { .. } => (1, 1 << (2 * w)),
            SiteKind::Gate { .. } => (4, 4),
        };
        if q.target().dims() != want {
            return Err(Error::Dimension(format!(
                "site {i}: decomposition {:?} has dims {:?}, site needs {want:?}",
                q.name(),
                q.target().dims()
            )));
        }
    }
    Ok(())
}

fn total_kappa(qpds: &[Qpd]) -> f64 {
    qpds.iter().map(Qpd::kappa).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observable_validation() {
        assert!(Observable::new(vec![]).is_err());
        assert!(Observable::new(vec![(1.0, "ZZ".into()), (0.5, "Z".into())]).is_err());
        assert!(Observable::pauli("ZQ").is_err());
        let o = Observable::new(vec![(1.0, "ZZ".into()), (-0.5, "XI".into())]).unwrap();
        assert_eq!(o.one_norm(), 1.5);
        assert!(o.parsed(3).is_err());
        assert_eq!(Observable::z_on(4, &[0, 3]).pauli_terms[0].1, "ZIIZ");
    }
}
