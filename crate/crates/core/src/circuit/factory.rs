use serde::Serialize;

use crate::error::{Error, Result};

/// Entanglement-factory schedule: cuts grouped greedily in time order into
/// rounds of at most `k` Bell pairs, all rounds sharing the same `2k`
/// ancillas.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactoryPlan {
    pub k: usize,
    /// Indices into the input cut list, per round.
    pub rounds: Vec<Vec<usize>>,
}

/// `2^(m+1) - 1`: one-norm of the joint decomposition of `m` Bell pairs.
pub fn bell_kappa(m: usize) -> f64 {
    2f64.powi(m as i32 + 1) - 1.0
}

impl FactoryPlan {
    pub fn kappa_per_round(&self) -> Vec<f64> {
        self.rounds.iter().map(|r| bell_kappa(r.len())).collect()
    }

    pub fn total_kappa(&self) -> f64 {
        self.kappa_per_round().iter().product()
    }

    pub fn total_overhead(&self) -> f64 {
        self.total_kappa().powi(2)
    }

    /// Nominal sampling overhead per cut for full rounds, `(2^(k+1)-1)^(2/k)`.
    pub fn effective_overhead_per_cut(&self) -> f64 {
        bell_kappa(self.k).powf(2.0 / self.k as f64)
    }

    pub fn ancilla_qubits(&self) -> usize {
        2 * self.rounds.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Group cuts at the given circuit positions into factory rounds of size `k`.
pub fn plan_factory(cut_positions: &[usize], k: usize) -> Result<FactoryPlan> {
    if k < 1 {
        return Err(Error::Argument("factory size k must be at least 1".into()));
    }
    let mut order: Vec<usize> = (0..cut_positions.len()).collect();
    order.sort_by_key(|&i| (cut_positions[i], i));
    Ok(FactoryPlan {
        k,
        rounds: order.chunks(k).map(|c| c.to_vec()).collect(),
    })
}
