//! Empirical sampling overhead on a fixed benchmark family: `n` entangled
//! wires cut in one time slice, measured in the parity basis.

use serde::Serialize;

use super::{assign_qpds, estimate_mc, total_kappa, Observable};
use crate::circuit::{partition, Circuit, CutMethod, CutSpec};
use crate::error::{Error, Result};

pub const DEFAULT_REPETITIONS: usize = 20;

/// `n` qubits rotated and chained by CNOTs, every wire cut right after its
/// last entangling gate, then rotated again. Returns the circuit, the cut
/// ids and the `Z...Z` parity observable.
pub fn probe_circuit(n: usize) -> Result<(Circuit, Vec<String>, Observable)> {
    if n == 0 {
        return Err(Error::Argument("probe needs at least one wire".into()));
    }
    let mut c = Circuit::new(n, 0);
    let mut last = vec![0; n];
    for (q, l) in last.iter_mut().enumerate() {
        *l = c.ry(q, 0.4 + 0.3 * q as f64);
    }
    for q in 0..n.saturating_sub(1) {
        let op = c.cnot(q, q + 1);
        last[q] = op;
        last[q + 1] = op;
    }
    let ids: Vec<String> = (0..n).map(|q| format!("p{q}")).collect();
    for (q, id) in ids.iter().enumerate() {
        c.wire_cut(id, q, last[q]);
    }
    for q in 0..n {
        c.ry(q, 0.2 + 0.25 * q as f64);
    }
    Ok((c, ids, Observable::z_on(n, &(0..n).collect::<Vec<_>>())))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProbeResult {
    pub method: String,
    pub n: usize,
    pub shots: u64,
    /// Mean over repetitions of the per-shot sample variance
    /// (variance of the mean times shots).
    pub statistic: f64,
    pub per_repetition: Vec<f64>,
    pub kappa: f64,
}

pub fn overhead_probe(method: CutMethod, n: usize, shots: u64, repetitions: usize, seed: u64) -> Result<ProbeResult> {
    if !method.is_wire() {
        return Err(Error::Argument(format!("overhead probe cuts wires; method {method} cuts gates")));
    }
    if repetitions == 0 {
        return Err(Error::Argument("at least one repetition is required".into()));
    }
    let (c, ids, obs) = probe_circuit(n)?;
    let ids: Vec<&str> = ids.iter().map(String::as_str).collect();
    let spec = CutSpec::new(&ids, method).with_factory_size(n);
    let p = partition(&c, &spec)?;
    let qpds = assign_qpds(&p)?;
    let per_repetition = (0..repetitions as u64)
        .map(|r| Ok(estimate_mc(&p, &qpds, &obs, shots, seed.wrapping_add(r))?.empirical_variance))
        .collect::<Result<Vec<f64>>>()?;
    Ok(ProbeResult {
        method: method.label().to_string(),
        n,
        shots,
        statistic: per_repetition.iter().sum::<f64>() / repetitions as f64,
        per_repetition,
        kappa: total_kappa(&qpds),
    })
}
