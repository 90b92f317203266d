//! Finite unitary ensembles whose measure-and-prepare average is a 2-design:
//! Clifford groups for one and two qubits, mutually unbiased bases for three.

use std::collections::{HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::linalg::{self, gates, CMatrix, ONE};

/// Rounded matrix entries after fixing the global phase.
fn phase_key(m: &CMatrix) -> Vec<i64> {
    let pivot = m.iter().find(|z| z.norm() > 1e-6).copied().unwrap_or(ONE);
    let fix = pivot.conj() / pivot.norm();
    m.iter()
        .flat_map(|z| {
            let w = z * fix;
            [(w.re * 1e6).round() as i64, (w.im * 1e6).round() as i64]
        })
        .collect()
}

/// Group generated by `generators`, one representative per global phase.
pub fn generate_group(generators: &[CMatrix]) -> Vec<CMatrix> {
    let d = generators[0].nrows();
    let start = linalg::identity(d);
    let mut seen = HashSet::from([phase_key(&start)]);
    let mut out = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(g) = queue.pop_front() {
        for h in generators {
            let next = h * &g;
            if seen.insert(phase_key(&next)) {
                out.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    out
}

pub fn single_qubit_cliffords() -> Vec<CMatrix> {
    generate_group(&[gates::h(), gates::s()])
}

pub fn two_qubit_cliffords() -> Vec<CMatrix> {
    let id = linalg::identity(2);
    generate_group(&[
        linalg::kron_le(&gates::h(), &id),
        linalg::kron_le(&id, &gates::h()),
        linalg::kron_le(&gates::s(), &id),
        linalg::kron_le(&id, &gates::s()),
        gates::cnot(),
    ])
}

/// Symplectic product of `(x, z)` bit vectors packed as `x | z << n`.
fn symplectic(u: usize, v: usize, n: usize) -> u32 {
    let mask = (1 << n) - 1;
    let (ux, uz, vx, vz) = (u & mask, u >> n, v & mask, v >> n);
    ((ux & vz).count_ones() + (uz & vx).count_ones()) % 2
}

/// Hermitian Pauli `i^{x.z} X^x Z^z` for packed `(x, z)`.
fn pauli_of(v: usize, n: usize) -> CMatrix {
    let factors: Vec<CMatrix> = (0..n)
        .map(|q| match ((v >> q) & 1, (v >> (n + q)) & 1) {
            (0, 0) => linalg::identity(2),
            (1, 0) => gates::x(),
            (0, 1) => gates::z(),
            _ => gates::y(),
        })
        .collect();
    linalg::tensor_all(&factors)
}

/// Nonzero vectors of every Lagrangian subspace of `F_2^{2n}`.
fn lagrangians(n: usize) -> Vec<Vec<usize>> {
    let total = 1usize << (2 * n);
    let mut found: HashSet<Vec<usize>> = HashSet::new();
    let mut span = vec![0usize];
    fn extend(n: usize, total: usize, span: &mut Vec<usize>, start: usize, found: &mut HashSet<Vec<usize>>) {
        if span.len() == 1 << n {
            let mut s: Vec<usize> = span[1..].to_vec();
            s.sort_unstable();
            found.insert(s);
            return;
        }
        for v in start..total {
            if span.contains(&v) || span.iter().any(|&u| symplectic(u, v, n) == 1) {
                continue;
            }
            let old = span.len();
            for k in 0..old {
                let w = span[k] ^ v;
                span.push(w);
            }
            extend(n, total, span, v + 1, found);
            span.truncate(old);
        }
    }
    extend(n, total, &mut span, 1, &mut found);
    let mut out: Vec<Vec<usize>> = found.into_iter().collect();
    out.sort();
    out
}

/// `2^n + 1` Lagrangians covering every nonzero vector exactly once.
fn lagrangian_partition(n: usize) -> Option<Vec<Vec<usize>>> {
    let all = lagrangians(n);
    let goal = (1usize << n) + 1;
    fn search(all: &[Vec<usize>], used: &mut Vec<bool>, chosen: &mut Vec<usize>, covered: &mut HashSet<usize>, goal: usize, total: usize) -> bool {
        if chosen.len() == goal {
            return covered.len() == total;
        }
        // smallest uncovered vector must be covered by the next choice
        let target = (1..=total).find(|v| !covered.contains(v)).expect("uncovered vector");
        for (i, l) in all.iter().enumerate() {
            if used[i] || !l.contains(&target) || l.iter().any(|v| covered.contains(v)) {
                continue;
            }
            used[i] = true;
            chosen.push(i);
            covered.extend(l.iter().copied());
            if search(all, used, chosen, covered, goal, total) {
                return true;
            }
            for v in l {
                covered.remove(v);
            }
            chosen.pop();
            used[i] = false;
        }
        false
    }
    let mut used = vec![false; all.len()];
    let mut chosen = Vec::new();
    let mut covered = HashSet::new();
    let total = (1usize << (2 * n)) - 1;
    search(&all, &mut used, &mut chosen, &mut covered, goal, total).then(|| chosen.into_iter().map(|i| all[i].clone()).collect())
}

/// Basis unitaries (columns are basis vectors) of a complete set of mutually
/// unbiased bases, one per Lagrangian of a stabilizer partition.
pub fn mutually_unbiased_bases(n: usize) -> Result<Vec<CMatrix>> {
    let parts = lagrangian_partition(n).ok_or_else(|| Error::Argument(format!("no Lagrangian partition for {n} qubits")))?;
    let d = 1usize << n;
    let mut bases = Vec::with_capacity(parts.len());
    for l in parts {
        // independent generators: greedily pick vectors outside the current span
        let mut gens: Vec<usize> = Vec::new();
        let mut span = vec![0usize];
        for &v in &l {
            if !span.contains(&v) {
                gens.push(v);
                let old = span.len();
                for k in 0..old {
                    let w = span[k] ^ v;
                    span.push(w);
                }
            }
        }
        let paulis: Vec<CMatrix> = gens.iter().map(|&g| pauli_of(g, n)).collect();
        let mut u = CMatrix::zeros(d, d);
        for signs in 0..d {
            let mut proj = linalg::identity(d);
            for (k, p) in paulis.iter().enumerate() {
                let s = if (signs >> k) & 1 == 0 { 1.0 } else { -1.0 };
                let half = (linalg::identity(d) + p.scale(s)).scale(0.5);
                proj = half * proj;
            }
            let col = (0..d)
                .max_by(|&a, &b| proj.column(a).norm().total_cmp(&proj.column(b).norm()))
                .expect("nonempty");
            let v = proj.column(col).clone_owned();
            let v = v.scale(1.0 / v.norm());
            u.set_column(signs, &v);
        }
        bases.push(u);
    }
    Ok(bases)
}

pub const MAX_DESIGN_QUBITS: usize = 3;

/// Cached ensemble used by the random-basis cut on `n` wires.
pub fn two_design(n: usize) -> Result<Arc<Vec<CMatrix>>> {
    static CACHE: [OnceLock<Arc<Vec<CMatrix>>>; MAX_DESIGN_QUBITS] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    if !(1..=MAX_DESIGN_QUBITS).contains(&n) {
        return Err(Error::Argument(format!(
            "2-design available for 1..={MAX_DESIGN_QUBITS} qubits, got {n}"
        )));
    }
    Ok(CACHE[n - 1]
        .get_or_init(|| {
            Arc::new(match n {
                1 => single_qubit_cliffords(),
                2 => two_qubit_cliffords(),
                _ => mutually_unbiased_bases(n).expect("complete MUB set exists for three qubits"),
            })
        })
        .clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        assert_eq!(single_qubit_cliffords().len(), 24);
        assert_eq!(two_qubit_cliffords().len(), 11520);
    }

    #[test]
    fn lagrangian_counts() {
        assert_eq!(lagrangians(1).len(), 3);
        assert_eq!(lagrangians(2).len(), 15);
        assert_eq!(lagrangians(3).len(), 135);
    }

    #[test]
    fn bases_are_mutually_unbiased() {
        for n in 1..=3 {
            let bases = mutually_unbiased_bases(n).unwrap();
            let d = 1usize << n;
            assert_eq!(bases.len(), d + 1);
            for (i, a) in bases.iter().enumerate() {
                assert!(linalg::is_unitary(a, 1e-10));
                for b in &bases[i + 1..] {
                    let overlap = a.adjoint() * b;
                    for z in overlap.iter() {
                        assert!((z.norm_sqr() - 1.0 / d as f64).abs() < 1e-10);
                    }
                }
            }
        }
    }
}
