use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64, ZERO};

/// Choi matrix `sum_ij |i><j| ⊗ Phi(|i><j|)` with the input factor on the low
/// index: row `i + dim_in * o` pairs input basis state `i` with output `o`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChoiMatrix {
    dim_in: usize,
    dim_out: usize,
    mat: CMatrix,
}

impl ChoiMatrix {
    pub fn new(dim_in: usize, dim_out: usize, mat: CMatrix) -> Result<Self> {
        let d = dim_in * dim_out;
        if mat.shape() != (d, d) {
            return Err(Error::Dimension(format!(
                "Choi matrix of shape {:?} for dims {dim_in} -> {dim_out}",
                mat.shape()
            )));
        }
        Ok(Self { dim_in, dim_out, mat })
    }

    pub fn zeros(dim_in: usize, dim_out: usize) -> Self {
        let d = dim_in * dim_out;
        Self {
            dim_in,
            dim_out,
            mat: CMatrix::zeros(d, d),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_kraus(dim, dim, &[(1.0, linalg::identity(dim))])
    }

    /// Choi matrix of `X -> sum_k w_k K_k X K_k^dagger`.
    pub fn from_kraus(dim_in: usize, dim_out: usize, kraus: &[(f64, CMatrix)]) -> Self {
        let d = dim_in * dim_out;
        let mut mat = CMatrix::zeros(d, d);
        for (w, k) in kraus {
            assert_eq!(k.shape(), (dim_out, dim_in), "Kraus operator shape");
            let v: Vec<C64> = (0..d).map(|idx| k[(idx / dim_in, idx % dim_in)]).collect();
            for c in 0..d {
                let vc = v[c].conj() * *w;
                if vc == ZERO {
                    continue;
                }
                for r in 0..d {
                    mat[(r, c)] += v[r] * vc;
                }
            }
        }
        Self { dim_in, dim_out, mat }
    }

    /// Choi matrix of a state preparation (`dim_in = 1`).
    pub fn from_state(state: &CMatrix) -> Self {
        Self {
            dim_in: 1,
            dim_out: state.nrows(),
            mat: state.clone(),
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        linalg::is_hermitian(&self.mat, tol)
    }

    /// Apply the represented map to `x`.
    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.shape() != (self.dim_in, self.dim_in) {
            return Err(Error::Dimension(format!(
                "input of shape {:?} for a map on dimension {}",
                x.shape(),
                self.dim_in
            )));
        }
        let (di, dout) = (self.dim_in, self.dim_out);
        Ok(CMatrix::from_fn(dout, dout, |o, o2| {
            let mut acc = ZERO;
            for j in 0..di {
                for i in 0..di {
                    acc += x[(i, j)] * self.mat[(i + di * o, j + di * o2)];
                }
            }
            acc
        }))
    }

    pub fn max_deviation(&self, other: &ChoiMatrix) -> Result<f64> {
        if (self.dim_in, self.dim_out) != (other.dim_in, other.dim_out) {
            return Err(Error::Dimension(format!(
                "comparing maps {}->{} and {}->{}",
                self.dim_in, self.dim_out, other.dim_in, other.dim_out
            )));
        }
        Ok(linalg::max_abs_diff(&self.mat, &other.mat))
    }

    pub(crate) fn add_scaled(&mut self, coeff: f64, other: &ChoiMatrix) {
        linalg::add_scaled(&mut self.mat, coeff, &other.mat);
    }

    /// Choi matrix of `self ⊗ high` (input and output of `self` on the low side).
    pub fn tensor(&self, high: &ChoiMatrix) -> ChoiMatrix {
        let big = linalg::kron_le(&self.mat, &high.mat);
        let (i1, o1, i2, o2) = (self.dim_in, self.dim_out, high.dim_in, high.dim_out);
        let d1 = i1 * o1;
        let total = d1 * i2 * o2;
        // kron index: (a1 + i1*b1) + d1*(a2 + i2*b2); target: a1 + i1*a2 + i1*i2*(b1 + o1*b2)
        let table: Vec<usize> = (0..total)
            .map(|idx| {
                let (lo, hi) = (idx % d1, idx / d1);
                let (a1, b1) = (lo % i1, lo / i1);
                let (a2, b2) = (hi % i2, hi / i2);
                a1 + i1 * a2 + i1 * i2 * (b1 + o1 * b2)
            })
            .collect();
        let mut mat = CMatrix::zeros(total, total);
        for c in 0..total {
            for r in 0..total {
                mat[(table[r], table[c])] = big[(r, c)];
            }
        }
        ChoiMatrix {
            dim_in: i1 * i2,
            dim_out: o1 * o2,
            mat,
        }
    }

    /// Signed Kraus decomposition from the Hermitian eigen-decomposition;
    /// eigenvalues with magnitude at most `tol` are dropped.
    pub fn signed_kraus(&self, tol: f64) -> Vec<(f64, CMatrix)> {
        let (vals, vecs) = linalg::hermitian_eigen(&self.mat);
        let (di, dout) = (self.dim_in, self.dim_out);
        let mut out = Vec::new();
        for (idx, &lam) in vals.iter().enumerate() {
            if lam.abs() <= tol {
                continue;
            }
            let s = lam.abs().sqrt();
            let col = vecs.column(idx);
            let k = CMatrix::from_fn(dout, di, |o, i| col[i + di * o] * s);
            out.push((lam.signum(), k));
        }
        out
    }
}

/// Choi matrix of a linear map given as a callable on `dim_in`-square
/// matrices. Linearity is spot-checked on three random inputs.
pub fn choi_of<F>(map: F, dim_in: usize, dim_out: usize) -> Result<ChoiMatrix>
where
    F: Fn(&CMatrix) -> Result<CMatrix>,
{
    let d = dim_in * dim_out;
    let mut mat = CMatrix::zeros(d, d);
    let mut images = Vec::with_capacity(dim_in * dim_in);
    for j in 0..dim_in {
        for i in 0..dim_in {
            let mut e = CMatrix::zeros(dim_in, dim_in);
            e[(i, j)] = linalg::ONE;
            let img = map(&e)?;
            if img.shape() != (dim_out, dim_out) {
                return Err(Error::Argument(format!(
                    "map returned shape {:?}, expected {dim_out}x{dim_out}",
                    img.shape()
                )));
            }
            for o2 in 0..dim_out {
                for o in 0..dim_out {
                    mat[(i + dim_in * o, j + dim_in * o2)] = img[(o, o2)];
                }
            }
            images.push(img);
        }
    }
    let choi = ChoiMatrix { dim_in, dim_out, mat };
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_c401);
    for _ in 0..3 {
        let x = CMatrix::from_fn(dim_in, dim_in, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let direct = map(&x)?;
        let via = choi.apply(&x)?;
        let scale = linalg::max_abs(&via).max(1.0);
        let dev = linalg::max_abs_diff(&direct, &via) / scale;
        if dev > 1e-9 {
            return Err(Error::NonLinear(dev));
        }
    }
    Ok(choi)
}
