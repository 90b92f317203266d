//! Exact recombination by density-operator propagation.
//!
//! Branches are keyed by the classical register; a measurement splits every
//! branch and branches are merged again once a bit is dead. Each site
//! applies the coefficient-weighted sum of its terms as one superoperator,
//! which by linearity equals summing the separately propagated terms.

use std::collections::BTreeMap;

use super::program::{compile, Instr, Program};
use super::{check_assignment, total_kappa, EstimateReport, Mode, Observable};
use crate::circuit::{PartitionedCircuit, SiteKind};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ONE};
use crate::linsim::{kernel, DensityOperator, Pauli};
use crate::qpd::{Qpd, TermAction};

/// Largest number of joint branches exact mode accepts.
pub const BRANCH_CAP: u128 = 1_000_000;

/// Relative tolerance for splitting a prepared register into pair factors.
const FACTOR_TOL: f64 = 1e-12;

/// Joint term/branch count: per site the summed branch counts of its terms,
/// times two outcomes per mid-circuit measurement.
pub(crate) fn branch_count(qpds: &[Qpd], n_measurements: usize) -> u128 {
    fn term_branches(a: &TermAction) -> u128 {
        match a {
            TermAction::Instrument(i) => i.branches().len() as u128,
            TermAction::Tensor(parts) => parts.iter().map(term_branches).fold(1u128, u128::saturating_mul),
            _ => 1,
        }
    }
    let per_site = qpds
        .iter()
        .map(|q| q.terms().iter().map(|t| term_branches(&t.action)).sum::<u128>())
        .fold(1u128, u128::saturating_mul);
    let meas = if n_measurements >= 127 { u128::MAX } else { 1u128 << n_measurements };
    per_site.saturating_mul(meas)
}

/// `S[(o + d_out o'), (i + d_in i')] = J[i + d_in o, i' + d_in o']`.
fn superoperator(qpd: &Qpd) -> Result<(CMatrix, usize, usize)> {
    let choi = qpd.reconstructed_choi()?;
    let (di, dout) = (choi.dim_in(), choi.dim_out());
    let j = choi.matrix();
    let s = CMatrix::from_fn(dout * dout, di * di, |r, c| {
        let (o, o2) = (r % dout, r / dout);
        let (i, i2) = (c % di, c / di);
        j[(i + di * o, i2 + di * o2)]
    });
    Ok((s, di, dout))
}

struct ExactState {
    /// Physical qubit stored at each position of the branch operators.
    active: Vec<usize>,
    branches: BTreeMap<u128, DensityOperator>,
    /// Prepared but not yet touched registers.
    pending: Vec<(Vec<usize>, CMatrix)>,
}

impl ExactState {
    fn new() -> Self {
        Self {
            active: Vec::new(),
            branches: BTreeMap::from([(0u128, DensityOperator::from_matrix_unchecked(CMatrix::from_element(1, 1, ONE)))]),
            pending: Vec::new(),
        }
    }

    fn pos(&self, q: usize) -> Option<usize> {
        self.active.iter().position(|&a| a == q)
    }

    fn allocate(&mut self, qubits: &[usize], mat: &CMatrix) {
        let high = DensityOperator::from_matrix_unchecked(mat.clone());
        for rho in self.branches.values_mut() {
            *rho = rho.tensor(&high);
        }
        self.active.extend_from_slice(qubits);
    }

    fn ensure(&mut self, q: usize) -> usize {
        if let Some(p) = self.pos(q) {
            return p;
        }
        if let Some(g) = self.pending.iter().position(|(qs, _)| qs.contains(&q)) {
            let (qs, mat) = self.pending.swap_remove(g);
            self.allocate(&qs, &mat);
        } else {
            let mut zero = CMatrix::zeros(2, 2);
            zero[(0, 0)] = ONE;
            self.allocate(&[q], &zero);
        }
        self.pos(q).expect("allocated")
    }

    fn discard(&mut self, q: usize) {
        if self.pos(q).is_none() && !self.pending.iter().any(|(qs, _)| qs.contains(&q)) {
            return;
        }
        let p = self.ensure(q);
        let keep: Vec<usize> = (0..self.active.len()).filter(|&i| i != p).collect();
        for rho in self.branches.values_mut() {
            *rho = rho.partial_trace(&keep).expect("valid positions");
        }
        self.active.remove(p);
    }

    fn check_cap(&self) -> Result<()> {
        if self.branches.len() as u128 > BRANCH_CAP {
            return Err(Error::BranchExplosion {
                count: self.branches.len() as u128,
                cap: BRANCH_CAP,
            });
        }
        Ok(())
    }

    fn rekey(&mut self, f: impl Fn(u128) -> u128) {
        let old = std::mem::take(&mut self.branches);
        for (k, rho) in old {
            merge(&mut self.branches, f(k), rho);
        }
    }
}

fn merge(map: &mut BTreeMap<u128, DensityOperator>, key: u128, rho: DensityOperator) {
    match map.get_mut(&key) {
        Some(acc) => acc.add_assign(&rho),
        None => {
            map.insert(key, rho);
        }
    }
}

fn set_bit(key: u128, c: usize, v: u8) -> u128 {
    (key & !(1u128 << c)) | (u128::from(v) << c)
}

/// Pair factors `(a_j, b_j)` of an operator on `[a_0..a_{w-1}, b_0..b_{w-1}]`
/// when it is a product over pairs.
fn pair_factors(m: &CMatrix, w: usize) -> Option<Vec<CMatrix>> {
    let rho = DensityOperator::from_matrix_unchecked(m.clone());
    let factors: Vec<CMatrix> = (0..w)
        .map(|j| rho.partial_trace(&[j, w + j]).expect("valid positions").into_matrix())
        .collect();
    // pair j occupies positions 2j, 2j+1 of the product
    let product = linalg::tensor_all(&factors);
    let perm: Vec<usize> = (0..2 * w).map(|q| if q < w { 2 * q } else { 2 * (q - w) + 1 }).collect();
    let reordered = linalg::permute_qubits(m, &perm);
    let scale = linalg::max_abs(m).max(1.0);
    (linalg::max_abs_diff(&product, &reordered) <= FACTOR_TOL * scale).then_some(factors)
}

struct SiteOp {
    superop: CMatrix,
    dim_in: usize,
    bell: bool,
}

fn run(prog: &Program, p: &PartitionedCircuit, qpds: &[Qpd]) -> Result<ExactState> {
    let sites: Vec<SiteOp> = qpds
        .iter()
        .zip(&p.sites)
        .map(|(q, site)| {
            let (superop, dim_in, _) = superoperator(q)?;
            Ok(SiteOp {
                superop,
                dim_in,
                bell: matches!(site.kind, SiteKind::BellPairs { .. }),
            })
        })
        .collect::<Result<_>>()?;
    if prog.n_clbits > 128 {
        return Err(Error::Argument(format!("exact mode supports at most 128 classical bits, got {}", prog.n_clbits)));
    }

    let mut st = ExactState::new();
    for ins in &prog.instrs {
        match ins {
            Instr::Gate { matrix, qubits } => {
                let pos: Vec<usize> = qubits.iter().map(|&q| st.ensure(q)).collect();
                for rho in st.branches.values_mut() {
                    rho.conjugate_unchecked(matrix, &pos);
                }
            }
            Instr::CGate { matrix, qubits, clbit, value } => {
                let pos: Vec<usize> = qubits.iter().map(|&q| st.ensure(q)).collect();
                for (k, rho) in st.branches.iter_mut() {
                    if (k >> clbit) as u8 & 1 == *value {
                        rho.conjugate_unchecked(matrix, &pos);
                    }
                }
            }
            Instr::Measure { qubit, clbit } => {
                let pos = st.ensure(*qubit);
                let old = std::mem::take(&mut st.branches);
                for (k, rho) in old {
                    for v in 0..2u8 {
                        let mut part = rho.clone();
                        part.project_in_place(pos, v);
                        if linalg::max_abs(part.matrix()) > 0.0 {
                            merge(&mut st.branches, set_bit(k, *clbit, v), part);
                        }
                    }
                }
                st.check_cap()?;
            }
            Instr::Prepare { qubit, state } => {
                st.discard(*qubit);
                st.allocate(&[*qubit], &state.density());
            }
            Instr::Copy { from, to } => {
                let (from, to) = (*from, *to);
                st.rekey(|k| set_bit(k, to, (k >> from) as u8 & 1));
            }
            Instr::FreeBit { clbit } => {
                let c = *clbit;
                st.rekey(|k| set_bit(k, c, 0));
            }
            Instr::Free { qubit } => st.discard(*qubit),
            Instr::Site { site, inputs, outputs } => {
                let op = &sites[*site];
                if inputs == outputs {
                    let pos: Vec<usize> = inputs.iter().map(|&q| st.ensure(q)).collect();
                    let n = st.active.len();
                    let targets: Vec<usize> = pos.iter().copied().chain(pos.iter().map(|p| p + n)).collect();
                    for rho in st.branches.values_mut() {
                        kernel::apply_matrix(rho.data_mut(), 2 * n, &targets, &op.superop);
                    }
                    continue;
                }
                for &q in outputs {
                    st.discard(q);
                }
                if inputs.is_empty() {
                    let d = 1usize << outputs.len();
                    let m = CMatrix::from_fn(d, d, |r, c| op.superop[(r + d * c, 0)]);
                    let w = outputs.len() / 2;
                    match (op.bell && w > 1).then(|| pair_factors(&m, w)).flatten() {
                        Some(factors) => {
                            for (j, f) in factors.into_iter().enumerate() {
                                st.pending.push((vec![outputs[j], outputs[w + j]], f));
                            }
                        }
                        None => st.allocate(outputs, &m),
                    }
                    continue;
                }
                debug_assert_eq!(op.dim_in, 1 << inputs.len());
                let in_pos: Vec<usize> = inputs.iter().map(|&q| st.ensure(q)).collect();
                let mut zeros = CMatrix::zeros(1 << outputs.len(), 1 << outputs.len());
                zeros[(0, 0)] = ONE;
                st.allocate(outputs, &zeros);
                let out_pos: Vec<usize> = outputs.iter().map(|&q| st.pos(q).expect("allocated")).collect();
                let n = st.active.len();
                let src: Vec<usize> = in_pos.iter().copied().chain(in_pos.iter().map(|p| p + n)).collect();
                let dst: Vec<usize> = out_pos.iter().copied().chain(out_pos.iter().map(|p| p + n)).collect();
                for rho in st.branches.values_mut() {
                    kernel::apply_moving(rho.data_mut(), 2 * n, &src, &dst, &op.superop);
                }
                let mut sorted = in_pos;
                sorted.sort_unstable_by(|a, b| b.cmp(a));
                for p in sorted {
                    for rho in st.branches.values_mut() {
                        *rho = rho.project_remove(p, 0);
                    }
                    st.active.remove(p);
                }
            }
        }
    }
    Ok(st)
}

pub fn estimate_exact(p: &PartitionedCircuit, qpds: &[Qpd], obs: &Observable) -> Result<EstimateReport> {
    check_assignment(p, qpds)?;
    let terms = obs.parsed(p.n_logical())?;
    let prog = compile(p)?;
    let count = branch_count(qpds, prog.n_measurements);
    if count > BRANCH_CAP {
        return Err(Error::BranchExplosion { count, cap: BRANCH_CAP });
    }
    let mut st = run(&prog, p, qpds)?;
    let pos: Vec<usize> = prog.final_qubits.iter().map(|&q| st.ensure(q)).collect();
    let mut value = 0.0;
    for rho in st.branches.values() {
        for (c, paulis) in &terms {
            let placed: Vec<(usize, Pauli)> = paulis.iter().enumerate().map(|(q, &pa)| (pos[q], pa)).collect();
            value += c * rho.pauli_expectation(&placed);
        }
    }
    let kappa = total_kappa(qpds);
    Ok(EstimateReport {
        value,
        mode: Mode::Exact,
        shots: count as u64,
        kappa,
        empirical_variance: 0.0,
        std_error: 0.0,
        predicted_variance_bound: (kappa * obs.one_norm()).powi(2),
        seed: 0,
        method: p.spec.summary(),
    })
}
