//! Separable decomposition of a register of Bell pairs.
//!
//! With `d = 2^n`, `|Phi> = sum_x |x>_A |x>_B / sqrt(d)` and
//! `Phi = d rho_plus - (d - 1) rho_minus`, where
//! * `rho_minus` is uniform over `|i>_A |j>_B` with `i != j`;
//! * `rho_plus` averages `|v> <v| ⊗ |v*> <v*|` over `v = sum_x i^{t_x} |x> / sqrt(d)`
//!   with independent uniform `t_x in {0, 1, 2, 3}`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64, I, ONE, ZERO};
use crate::qpd::{Qpd, QpdTerm, TargetChannel, TermAction};

pub const MAX_BELL_PAIRS: usize = 10;
/// Largest register for which the samplers' full support is enumerated.
pub const MAX_ENUMERATED_PAIRS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BellFamily {
    Plus,
    Minus,
}

impl BellFamily {
    pub fn label(self) -> &'static str {
        match self {
            BellFamily::Plus => "rho_plus",
            BellFamily::Minus => "rho_minus",
        }
    }
}

fn check_pairs(n: usize) -> Result<usize> {
    if !(1..=MAX_BELL_PAIRS).contains(&n) {
        return Err(Error::Argument(format!(
            "Bell register size must be in 1..={MAX_BELL_PAIRS}, got {n}"
        )));
    }
    Ok(1 << n)
}

/// `(2^n, -(2^n - 1))`
pub fn bell_coefficients(n: usize) -> (f64, f64) {
    let d = 2f64.powi(n as i32);
    (d, -(d - 1.0))
}

/// Projector onto `n` Bell pairs; A register on the low `n` qubits.
pub fn bell_projector(n: usize) -> Result<CMatrix> {
    let d = check_pairs(n)?;
    let mut v = vec![ZERO; d * d];
    for x in 0..d {
        v[x + d * x] = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    }
    Ok(linalg::projector(&v))
}

/// Density of a family in closed form.
pub fn bell_family_density(n: usize, family: BellFamily) -> Result<CMatrix> {
    let d = check_pairs(n)?;
    let dd = d * d;
    let df = d as f64;
    Ok(match family {
        BellFamily::Minus => CMatrix::from_fn(dd, dd, |r, c| {
            if r == c && r % d != r / d {
                C64::new(1.0 / (df * (df - 1.0)), 0.0)
            } else {
                ZERO
            }
        }),
        // second moment of the phase average: entries survive when both
        // phase differences cancel pairwise
        BellFamily::Plus => CMatrix::from_fn(dd, dd, |r, c| {
            let (x, y, x2, y2) = (r % d, r / d, c % d, c / d);
            if (x == x2 && y == y2) || (x == y && x2 == y2) {
                C64::new(1.0 / (df * df), 0.0)
            } else {
                ZERO
            }
        }),
    })
}

/// Density of a family by summing its sampler's full support (`n <= 3`).
pub fn enumerated_family_density(n: usize, family: BellFamily) -> Result<CMatrix> {
    let d = check_pairs(n)?;
    if n > MAX_ENUMERATED_PAIRS {
        return Err(Error::Argument(format!(
            "enumeration is limited to {MAX_ENUMERATED_PAIRS} pairs, got {n}"
        )));
    }
    let dd = d * d;
    let mut acc = CMatrix::zeros(dd, dd);
    match family {
        BellFamily::Minus => {
            let w = 1.0 / (d * (d - 1)) as f64;
            for i in 0..d {
                for j in (0..d).filter(|&j| j != i) {
                    acc[(i + d * j, i + d * j)] += C64::new(w, 0.0);
                }
            }
        }
        BellFamily::Plus => {
            let count = 1usize << (2 * d);
            let w = 1.0 / count as f64;
            let phases = [ONE, I, -ONE, -I];
            let mut vec = vec![ZERO; dd];
            for config in 0..count {
                let v: Vec<C64> = (0..d).map(|x| phases[(config >> (2 * x)) & 3]).collect();
                for y in 0..d {
                    for x in 0..d {
                        vec[x + d * y] = v[x] * v[y].conj() / d as f64;
                    }
                }
                for c in 0..dd {
                    let vc = vec[c].conj() * w;
                    for r in 0..dd {
                        acc[(r, c)] += vec[r] * vc;
                    }
                }
            }
        }
    }
    Ok(acc)
}

/// Draw one product state of a family: amplitudes for the A and B registers.
pub fn sample_bell_product<R: Rng + ?Sized>(n: usize, family: BellFamily, rng: &mut R) -> (Vec<C64>, Vec<C64>) {
    let d = 1usize << n;
    match family {
        BellFamily::Minus => {
            let i = rng.gen_range(0..d);
            let mut j = rng.gen_range(0..d - 1);
            if j >= i {
                j += 1;
            }
            (linalg::basis_vector(d, i), linalg::basis_vector(d, j))
        }
        BellFamily::Plus => {
            let phases = [ONE, I, -ONE, -I];
            let norm = 1.0 / (d as f64).sqrt();
            let v: Vec<C64> = (0..d).map(|_| phases[rng.gen_range(0..4)] * norm).collect();
            let w = v.iter().map(|z| z.conj()).collect();
            (v, w)
        }
    }
}

/// QPD of `n` Bell pairs into two separable state preparations.
pub fn bell_qpd(n: usize) -> Result<Qpd> {
    check_pairs(n)?;
    let (plus, minus) = bell_coefficients(n);
    Qpd::new(
        format!("bell_pairs_{n}"),
        vec![
            QpdTerm::new(
                plus,
                TermAction::BellState {
                    n_pairs: n,
                    family: BellFamily::Plus,
                },
            ),
            QpdTerm::new(
                minus,
                TermAction::BellState {
                    n_pairs: n,
                    family: BellFamily::Minus,
                },
            ),
        ],
        TargetChannel::BellPairs { n_pairs: n },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn kappa_values() {
        for (n, k) in [(1, 3.0), (2, 7.0), (3, 15.0), (10, 2047.0)] {
            assert_eq!(bell_qpd(n).unwrap().kappa(), k);
        }
        assert!(bell_qpd(0).is_err());
        assert!(bell_qpd(11).is_err());
    }

    #[test]
    fn closed_form_matches_enumeration() {
        for n in 1..=2 {
            for fam in [BellFamily::Plus, BellFamily::Minus] {
                let a = bell_family_density(n, fam).unwrap();
                let b = enumerated_family_density(n, fam).unwrap();
                assert!(linalg::max_abs_diff(&a, &b) < 1e-12, "{n} {fam:?}");
            }
        }
    }

    #[test]
    fn single_pair_minus_state() {
        let m = enumerated_family_density(1, BellFamily::Minus).unwrap();
        let mut expect = CMatrix::zeros(4, 4);
        expect[(1, 1)] = C64::new(0.5, 0.0);
        expect[(2, 2)] = C64::new(0.5, 0.0);
        assert!(linalg::max_abs_diff(&m, &expect) < 1e-15);
    }

    #[test]
    fn densified_identity() {
        for n in 1..=3 {
            let (a, b) = bell_coefficients(n);
            let mut acc = enumerated_family_density(n, BellFamily::Plus).unwrap().scale(a);
            linalg::add_scaled(&mut acc, b, &enumerated_family_density(n, BellFamily::Minus).unwrap());
            assert!(linalg::max_abs_diff(&acc, &bell_projector(n).unwrap()) < 1e-10);
        }
    }

    #[test]
    fn families_are_states_and_plus_is_ppt() {
        for n in 1..=2 {
            for fam in [BellFamily::Plus, BellFamily::Minus] {
                let m = bell_family_density(n, fam).unwrap();
                assert!((m.trace().re - 1.0).abs() < 1e-10);
                assert!(linalg::min_eigenvalue_hermitian(&m) > -1e-9);
            }
            let pt = linalg::partial_transpose_high(&bell_family_density(n, BellFamily::Plus).unwrap(), n, n);
            assert!(linalg::min_eigenvalue_hermitian(&pt) > -1e-9);
        }
    }

    #[test]
    fn sampler_averages_to_density() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for fam in [BellFamily::Plus, BellFamily::Minus] {
            let shots = 20_000;
            let mut acc = CMatrix::zeros(4, 4);
            for _ in 0..shots {
                let (a, b) = sample_bell_product(1, fam, &mut rng);
                let v: Vec<C64> = (0..4).map(|k| a[k % 2] * b[k / 2]).collect();
                linalg::add_scaled(&mut acc, 1.0 / shots as f64, &linalg::projector(&v));
            }
            assert!(linalg::max_abs_diff(&acc, &bell_family_density(1, fam).unwrap()) < 0.02);
        }
    }
}
