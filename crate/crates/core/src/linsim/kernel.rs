//! Index-arithmetic kernels over flat amplitude buffers.
//!
//! A density matrix stored column-major is a vector over `2n` bits whose low
//! `n` bits are the ket index and high `n` bits the bra index, so every
//! density update reduces to two vector updates.

use crate::linalg::{CMatrix, C64, ZERO};

/// Offsets of the `2^k` sub-indices spanned by `targets` (bit `i` of the
/// sub-index goes to bit `targets[i]`).
pub(crate) fn target_offsets(targets: &[usize]) -> Vec<usize> {
    let dim = 1usize << targets.len();
    (0..dim)
        .map(|j| {
            targets
                .iter()
                .enumerate()
                .filter(|(i, _)| j >> i & 1 == 1)
                .map(|(_, &t)| 1usize << t)
                .sum()
        })
        .collect()
}

/// Spread `x` over the bit positions not in `sorted_targets`.
#[inline]
pub(crate) fn insert_zeros(mut x: usize, sorted_targets: &[usize]) -> usize {
    for &t in sorted_targets {
        let low = x & ((1usize << t) - 1);
        x = ((x >> t) << (t + 1)) | low;
    }
    x
}

/// `data <- (M on targets) data`, where `data` spans `nbits` bits.
pub(crate) fn apply_matrix(data: &mut [C64], nbits: usize, targets: &[usize], m: &CMatrix) {
    let k = targets.len();
    let dim = 1usize << k;
    debug_assert_eq!(data.len(), 1usize << nbits);
    debug_assert_eq!(m.nrows(), dim);
    debug_assert_eq!(m.ncols(), dim);
    if k == 0 {
        let s = m[(0, 0)];
        data.iter_mut().for_each(|a| *a *= s);
        return;
    }
    if k == 1 {
        let t = targets[0];
        let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        let stride = 1usize << t;
        let mut base = 0;
        while base < data.len() {
            for i in base..base + stride {
                let a = data[i];
                let b = data[i + stride];
                data[i] = m00 * a + m01 * b;
                data[i + stride] = m10 * a + m11 * b;
            }
            base += 2 * stride;
        }
        return;
    }
    let offsets = target_offsets(targets);
    let mut sorted = targets.to_vec();
    sorted.sort_unstable();
    let row_major: Vec<C64> = (0..dim * dim).map(|i| m[(i / dim, i % dim)]).collect();
    let mut buf = vec![ZERO; dim];
    let outer = 1usize << (nbits - k);
    for x in 0..outer {
        let base = insert_zeros(x, &sorted);
        for (j, off) in offsets.iter().enumerate() {
            buf[j] = data[base + off];
        }
        for (r, off) in offsets.iter().enumerate() {
            let row = &row_major[r * dim..(r + 1) * dim];
            let mut acc = ZERO;
            for (a, b) in row.iter().zip(buf.iter()) {
                acc += a * b;
            }
            data[base + off] = acc;
        }
    }
}

/// Map the block where `dst` bits are zero into the block where `src` bits
/// are zero: `y = M x` with `x` indexed by the `src` bits and `y` by the
/// `dst` bits, for every assignment of the remaining bits. Entries with
/// nonzero `dst` bits on input are assumed to vanish.
pub(crate) fn apply_moving(data: &mut [C64], nbits: usize, src: &[usize], dst: &[usize], m: &CMatrix) {
    let src_offsets = target_offsets(src);
    let dst_offsets = target_offsets(dst);
    debug_assert_eq!(m.ncols(), src_offsets.len());
    debug_assert_eq!(m.nrows(), dst_offsets.len());
    let mut sorted: Vec<usize> = src.iter().chain(dst).copied().collect();
    sorted.sort_unstable();
    let row_major: Vec<C64> = (0..m.nrows() * m.ncols()).map(|i| m[(i / m.ncols(), i % m.ncols())]).collect();
    let mut buf = vec![ZERO; src_offsets.len()];
    for x in 0..1usize << (nbits - sorted.len()) {
        let base = insert_zeros(x, &sorted);
        for (j, off) in src_offsets.iter().enumerate() {
            buf[j] = data[base + off];
            data[base + off] = ZERO;
        }
        for (r, off) in dst_offsets.iter().enumerate() {
            let row = &row_major[r * buf.len()..(r + 1) * buf.len()];
            data[base + off] = row.iter().zip(&buf).map(|(a, b)| a * b).sum();
        }
    }
}

/// Keep only the entries whose bits at `positions` equal `values`, dropping
/// those bits from the index.
pub(crate) fn extract_subspace(data: &[C64], nbits: usize, positions: &[usize], values: usize) -> Vec<C64> {
    let k = positions.len();
    let mut sorted: Vec<(usize, usize)> = positions
        .iter()
        .enumerate()
        .map(|(i, &p)| (p, values >> i & 1))
        .collect();
    sorted.sort_unstable();
    let sorted_pos: Vec<usize> = sorted.iter().map(|&(p, _)| p).collect();
    let fixed: usize = sorted.iter().map(|&(p, v)| v << p).sum();
    let out_len = 1usize << (nbits - k);
    let mut out = Vec::with_capacity(out_len);
    for x in 0..out_len {
        out.push(data[insert_zeros(x, &sorted_pos) | fixed]);
    }
    out
}
