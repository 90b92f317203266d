use super::choi::ChoiMatrix;
use super::density::DensityOperator;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

#[derive(Clone, Debug)]
pub struct InstrumentBranch {
    pub kraus_ops: Vec<CMatrix>,
    /// +1 or -1
    pub weight: f64,
    pub label: String,
}

impl InstrumentBranch {
    pub fn new(kraus_ops: Vec<CMatrix>, weight: f64, label: impl Into<String>) -> Self {
        Self {
            kraus_ops,
            weight,
            label: label.into(),
        }
    }
}

/// Finite set of weighted completely positive branches whose unweighted sum
/// is trace non-increasing.
#[derive(Clone, Debug)]
pub struct Instrument {
    dim_in: usize,
    dim_out: usize,
    branches: Vec<InstrumentBranch>,
}

impl Instrument {
    pub fn new(branches: Vec<InstrumentBranch>) -> Result<Self> {
        let first = branches
            .iter()
            .flat_map(|b| b.kraus_ops.first())
            .next()
            .ok_or_else(|| Error::Validation("instrument has no Kraus operators".into()))?;
        let (dim_out, dim_in) = first.shape();
        let mut total = CMatrix::zeros(dim_in, dim_in);
        for b in &branches {
            if b.weight != 1.0 && b.weight != -1.0 {
                return Err(Error::Validation(format!("branch {:?} has weight {}, expected +-1", b.label, b.weight)));
            }
            for k in &b.kraus_ops {
                if k.shape() != (dim_out, dim_in) {
                    return Err(Error::Dimension(format!(
                        "Kraus operator of shape {:?} in branch {:?}, expected {:?}",
                        k.shape(),
                        b.label,
                        (dim_out, dim_in)
                    )));
                }
                total += k.adjoint() * k;
            }
        }
        let top = linalg::hermitian_eigen(&total).0.into_iter().fold(f64::NEG_INFINITY, f64::max);
        if top > 1.0 + 1e-9 {
            return Err(Error::Validation(format!(
                "instrument is trace increasing: largest eigenvalue of sum K^dagger K is {top}"
            )));
        }
        Ok(Self {
            dim_in,
            dim_out,
            branches,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self::unitary(linalg::identity(dim), "id")
    }

    pub fn unitary(u: CMatrix, label: &str) -> Self {
        let d = u.nrows();
        Self {
            dim_in: d,
            dim_out: d,
            branches: vec![InstrumentBranch::new(vec![u], 1.0, label)],
        }
    }

    /// Projective measurement with one branch per projector.
    pub fn projective(projectors: Vec<(CMatrix, f64, String)>) -> Result<Self> {
        Self::new(
            projectors
                .into_iter()
                .map(|(p, w, l)| InstrumentBranch::new(vec![p], w, l))
                .collect(),
        )
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn branches(&self) -> &[InstrumentBranch] {
        &self.branches
    }

    /// All Kraus operators with their branch weight.
    pub fn signed_kraus(&self) -> Vec<(f64, CMatrix)> {
        self.branches
            .iter()
            .flat_map(|b| b.kraus_ops.iter().map(move |k| (b.weight, k.clone())))
            .collect()
    }

    /// Per-branch images of a matrix `x`.
    pub fn apply_to_matrix(&self, x: &CMatrix) -> Result<Vec<(f64, CMatrix)>> {
        if x.shape() != (self.dim_in, self.dim_in) {
            return Err(Error::Dimension(format!("input of shape {:?} for instrument on dimension {}", x.shape(), self.dim_in)));
        }
        Ok(self
            .branches
            .iter()
            .map(|b| {
                let mut acc = CMatrix::zeros(self.dim_out, self.dim_out);
                for k in &b.kraus_ops {
                    acc += k * x * k.adjoint();
                }
                (b.weight, acc)
            })
            .collect())
    }

    /// The signed map `sum_b w_b E_b(x)`.
    pub fn signed_map(&self, x: &CMatrix) -> Result<CMatrix> {
        let mut acc = CMatrix::zeros(self.dim_out, self.dim_out);
        for (w, m) in self.apply_to_matrix(x)? {
            linalg::add_scaled(&mut acc, w, &m);
        }
        Ok(acc)
    }

    pub fn choi(&self) -> ChoiMatrix {
        ChoiMatrix::from_kraus(self.dim_in, self.dim_out, &self.signed_kraus())
    }

    /// Post-compose every Kraus operator with `u`.
    pub fn then(&self, u: &CMatrix) -> Instrument {
        Instrument {
            dim_in: self.dim_in,
            dim_out: u.nrows(),
            branches: self
                .branches
                .iter()
                .map(|b| InstrumentBranch::new(b.kraus_ops.iter().map(|k| u * k).collect(), b.weight, b.label.clone()))
                .collect(),
        }
    }

    /// Product instrument with `self` on the low qubits.
    pub fn tensor(&self, high: &Instrument) -> Instrument {
        let mut branches = Vec::with_capacity(self.branches.len() * high.branches.len());
        for b in &high.branches {
            for a in &self.branches {
                let mut kraus = Vec::with_capacity(a.kraus_ops.len() * b.kraus_ops.len());
                for kb in &b.kraus_ops {
                    for ka in &a.kraus_ops {
                        kraus.push(linalg::kron_le(ka, kb));
                    }
                }
                branches.push(InstrumentBranch::new(kraus, a.weight * b.weight, format!("{}|{}", a.label, b.label)));
            }
        }
        Instrument {
            dim_in: self.dim_in * high.dim_in,
            dim_out: self.dim_out * high.dim_out,
            branches,
        }
    }
}

/// Apply a square instrument to `targets` of `state`; one unnormalized
/// output per branch, paired with its weight.
pub fn apply_instrument(state: &DensityOperator, inst: &Instrument, targets: &[usize]) -> Result<Vec<(f64, DensityOperator)>> {
    if inst.dim_in != inst.dim_out || inst.dim_in != 1 << targets.len() {
        return Err(Error::Dimension(format!(
            "instrument {}->{} applied to {} targets",
            inst.dim_in,
            inst.dim_out,
            targets.len()
        )));
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= state.n_qubits() || targets[..i].contains(&t) {
            return Err(Error::Argument(format!("invalid instrument target {t}")));
        }
    }
    Ok(inst
        .branches
        .iter()
        .map(|b| {
            let kraus: Vec<(f64, CMatrix)> = b.kraus_ops.iter().map(|k| (1.0, k.clone())).collect();
            (b.weight, state.signed_kraus_sum(&kraus, targets))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, gates};

    fn p(i: usize) -> CMatrix {
        linalg::projector(&linalg::basis_vector(2, i))
    }

    #[test]
    fn identity_instrument_is_noop() {
        let mut rho = DensityOperator::zero_state(1);
        rho.apply_unitary(&gates::ry(0.8), &[0]).unwrap();
        let out = apply_instrument(&rho, &Instrument::identity(2), &[0]).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].0, 1.0);
        assert!(linalg::max_abs_diff(out[0].1.matrix(), rho.matrix()) < 1e-15);
    }

    #[test]
    fn z_measure_prepare_on_plus() {
        let mut rho = DensityOperator::zero_state(1);
        rho.apply_unitary(&gates::h(), &[0]).unwrap();
        let inst = Instrument::projective(vec![(p(0), 1.0, "0".into()), (p(1), 1.0, "1".into())]).unwrap();
        let out = apply_instrument(&rho, &inst, &[0]).unwrap();
        for (_, branch) in &out {
            assert!((branch.trace() - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn signed_branches_give_z_expectation() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 0)] = c(0.7, 0.0);
        m[(1, 1)] = c(0.3, 0.0);
        let rho = DensityOperator::from_matrix(m).unwrap();
        let inst = Instrument::projective(vec![(p(0), 1.0, "+".into()), (p(1), -1.0, "-".into())]).unwrap();
        let out = apply_instrument(&rho, &inst, &[0]).unwrap();
        assert!((out[0].1.trace() - 0.7).abs() < 1e-12 && out[0].0 == 1.0);
        assert!((out[1].1.trace() - 0.3).abs() < 1e-12 && out[1].0 == -1.0);
        let signed: f64 = out.iter().map(|(w, r)| w * r.trace()).sum();
        assert!((signed - 0.4).abs() < 1e-12);
    }

    #[test]
    fn trace_increasing_rejected() {
        let r = Instrument::new(vec![
            InstrumentBranch::new(vec![linalg::identity(2)], 1.0, "a"),
            InstrumentBranch::new(vec![p(0)], 1.0, "b"),
        ]);
        assert!(matches!(r, Err(Error::Validation(_))));
    }

    #[test]
    fn tensor_branches_multiply_weights() {
        let m = Instrument::projective(vec![(p(0), 1.0, "+".into()), (p(1), -1.0, "-".into())]).unwrap();
        let mm = m.tensor(&m);
        assert_eq!(mm.branches().len(), 4);
        let weights: Vec<f64> = mm.branches().iter().map(|b| b.weight).collect();
        assert_eq!(weights, vec![1.0, -1.0, -1.0, 1.0]);
        assert!(mm.choi().max_deviation(&m.choi().tensor(&m.choi())).unwrap() < 1e-12);
    }
}
