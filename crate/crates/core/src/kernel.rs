//! In-place amplitude kernels. Qubit `q` is bit `q` of the basis index.

use crate::linalg::{c64, cis, Mat2, Mat4, C64};
use crate::math;

/// Inserts a zero bit at position `q` of `i`.
#[inline(always)]
pub(crate) fn insert_zero_bit(i: usize, q: usize) -> usize {
    let low = i & ((1usize << q) - 1);
    ((i >> q) << (q + 1)) | low
}

#[inline(always)]
fn for_each_pair(amps: &mut [C64], q: usize, mut f: impl FnMut(&mut C64, &mut C64)) {
    let bit = 1usize << q;
    for chunk in amps.chunks_exact_mut(2 * bit) {
        let (lo, hi) = chunk.split_at_mut(bit);
        for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
            f(a0, a1);
        }
    }
}

pub(crate) fn apply_ry(amps: &mut [C64], q: usize, theta: f64) {
    let (s, c) = math::sincos(0.5 * theta);
    for_each_pair(amps, q, |a0, a1| {
        let (x0, x1) = (*a0, *a1);
        *a0 = x0 * c - x1 * s;
        *a1 = x0 * s + x1 * c;
    });
}

pub(crate) fn apply_rz(amps: &mut [C64], q: usize, theta: f64) {
    let p1 = cis(0.5 * theta);
    let p0 = p1.conj();
    for_each_pair(amps, q, |a0, a1| {
        *a0 *= p0;
        *a1 *= p1;
    });
}

pub(crate) fn apply_h(amps: &mut [C64], q: usize) {
    let r = math::FRAC_1_SQRT_2;
    for_each_pair(amps, q, |a0, a1| {
        let (x0, x1) = (*a0, *a1);
        *a0 = (x0 + x1) * r;
        *a1 = (x0 - x1) * r;
    });
}

pub(crate) fn apply_x(amps: &mut [C64], q: usize) {
    for_each_pair(amps, q, core::mem::swap);
}

/// `e^{−iθ Z⊗Z/2}`: phase `e^{−iθ/2}` on even parity, `e^{iθ/2}` on odd.
pub(crate) fn apply_rzz(amps: &mut [C64], q0: usize, q1: usize, theta: f64) {
    let odd = cis(0.5 * theta);
    let even = odd.conj();
    for (i, a) in amps.iter_mut().enumerate() {
        if ((i >> q0) ^ (i >> q1)) & 1 == 0 {
            *a *= even;
        } else {
            *a *= odd;
        }
    }
}

pub(crate) fn apply_cz(amps: &mut [C64], q0: usize, q1: usize) {
    let mask = (1usize << q0) | (1usize << q1);
    let quarter = amps.len() / 4;
    let (lo, hi) = if q0 < q1 { (q0, q1) } else { (q1, q0) };
    for i in 0..quarter {
        let idx = insert_zero_bit(insert_zero_bit(i, lo), hi) | mask;
        amps[idx] = -amps[idx];
    }
}

/// Local index is `2·bit(q0) + bit(q1)`.
pub(crate) fn apply_mat4(amps: &mut [C64], q0: usize, q1: usize, m: &Mat4) {
    let (b0, b1) = (1usize << q0, 1usize << q1);
    let (lo, hi) = if q0 < q1 { (q0, q1) } else { (q1, q0) };
    let quarter = amps.len() / 4;
    for i in 0..quarter {
        let base = insert_zero_bit(insert_zero_bit(i, lo), hi);
        let idx = [base, base | b1, base | b0, base | b0 | b1];
        let x = [amps[idx[0]], amps[idx[1]], amps[idx[2]], amps[idx[3]]];
        for (r, &dst) in idx.iter().enumerate() {
            let row = &m[r];
            amps[dst] = row[0] * x[0] + row[1] * x[1] + row[2] * x[2] + row[3] * x[3];
        }
    }
}

pub(crate) fn ry_matrix(theta: f64) -> Mat2 {
    let (s, c) = math::sincos(0.5 * theta);
    [[c64(c, 0.0), c64(-s, 0.0)], [c64(s, 0.0), c64(c, 0.0)]]
}

pub(crate) fn rz_matrix(theta: f64) -> Mat2 {
    let p = cis(0.5 * theta);
    [[p.conj(), c64(0.0, 0.0)], [c64(0.0, 0.0), p]]
}
