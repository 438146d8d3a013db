//! Small dense linear algebra: fixed 2×2/4×4 complex matrices, a row-major
//! complex matrix with Jacobi SVD and Hermitian eigensolver, and the real
//! symmetric tridiagonal machinery used by the ground-state solvers.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::math;

pub type C64 = Complex<f64>;
pub type Mat2 = [[C64; 2]; 2];
pub type Mat4 = [[C64; 4]; 4];

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };
pub const I: C64 = C64 { re: 0.0, im: 1.0 };

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64 { re, im }
}

/// `e^{i phi}`.
#[inline]
pub fn cis(phi: f64) -> C64 {
    let (s, c) = math::sincos(phi);
    c64(c, s)
}

pub fn mat2_identity() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for r in 0..2 {
        for c in 0..2 {
            out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

pub fn mat2_adjoint(a: &Mat2) -> Mat2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

pub fn mat4_identity() -> Mat4 {
    let mut m = [[ZERO; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ONE;
    }
    m
}

pub fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[ZERO; 4]; 4];
    for r in 0..4 {
        for k in 0..4 {
            let ark = a[r][k];
            if ark == ZERO {
                continue;
            }
            for c in 0..4 {
                out[r][c] += ark * b[k][c];
            }
        }
    }
    out
}

pub fn mat4_adjoint(a: &Mat4) -> Mat4 {
    let mut out = [[ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            out[r][c] = a[c][r].conj();
        }
    }
    out
}

pub fn mat4_conj(a: &Mat4) -> Mat4 {
    let mut out = *a;
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x = x.conj();
        }
    }
    out
}

/// Kronecker product with `a` on the high local bit: index `2*ia + ib`.
pub fn kron2(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = [[ZERO; 4]; 4];
    for ar in 0..2 {
        for ac in 0..2 {
            for br in 0..2 {
                for bc in 0..2 {
                    out[2 * ar + br][2 * ac + bc] = a[ar][ac] * b[br][bc];
                }
            }
        }
    }
    out
}

pub fn mat4_is_real(a: &Mat4, tol: f64) -> bool {
    a.iter().flatten().all(|x| x.im.abs() <= tol)
}

/// `max |(U†U − I)_{ij}|`.
pub fn unitarity_deviation4(u: &Mat4) -> f64 {
    let p = mat4_mul(&mat4_adjoint(u), u);
    let mut dev = 0.0f64;
    for r in 0..4 {
        for c in 0..4 {
            let target = if r == c { ONE } else { ZERO };
            dev = dev.max((p[r][c] - target).norm());
        }
    }
    dev
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_mat4(m: &Mat4) -> Self {
        Self::from_fn(4, 4, |r, c| m[r][c])
    }

    pub fn to_mat4(&self) -> Mat4 {
        assert!(self.rows == 4 && self.cols == 4, "to_mat4 needs a 4x4 matrix");
        let mut out = [[ZERO; 4]; 4];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x = self[(r, c)];
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matmul shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == ZERO {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |(A†A − I)_{ij}|` for square `A`.
    pub fn unitarity_deviation(&self) -> f64 {
        self.adjoint().matmul(self).max_abs_diff(&Self::identity(self.cols))
    }
}

impl core::ops::Index<(usize, usize)> for CMatrix {
    type Output = C64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl core::ops::IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[C64]) -> f64 {
    math::sqrt(a.iter().map(|x| x.norm_sqr()).sum())
}

/// Extends orthonormal `columns` (each of length `dim`) to a full orthonormal
/// basis. Free columns are seeded from canonical basis vectors, pivoting on
/// the one with the largest residual, with two Gram-Schmidt passes.
pub fn complete_orthonormal(columns: &[Vec<C64>], dim: usize) -> Vec<Vec<C64>> {
    extend_orthonormal(columns, dim, dim)
}

/// Like [`complete_orthonormal`] but stops at `count` columns.
pub(crate) fn extend_orthonormal(columns: &[Vec<C64>], dim: usize, count: usize) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = columns.to_vec();
    while basis.len() < count.min(dim) {
        let mut best: Option<(f64, Vec<C64>)> = None;
        for i in 0..dim {
            let mut v = vec![ZERO; dim];
            v[i] = ONE;
            for _ in 0..2 {
                for b in &basis {
                    let p = dot(b, &v);
                    for (x, y) in v.iter_mut().zip(b) {
                        *x -= p * y;
                    }
                }
            }
            let n = norm(&v);
            if best.as_ref().is_none_or(|(bn, _)| n > *bn + 1e-12) {
                best = Some((n, v));
            }
        }
        let (n, mut v) = best.expect("dim > 0");
        for x in v.iter_mut() {
            *x /= n;
        }
        basis.push(v);
    }
    basis
}

/// Thin singular value decomposition `A = U diag(s) V†` with `s` descending.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `rows × cols`, orthonormal columns (completed where `s` vanishes).
    pub u: CMatrix,
    pub s: Vec<f64>,
    /// `cols × cols` unitary.
    pub v: CMatrix,
}

const SVD_MAX_SWEEPS: usize = 60;

/// One-sided (Hestenes) Jacobi SVD. Requires `rows ≥ cols`.
pub fn svd(a: &CMatrix) -> Result<Svd> {
    let (m, n) = (a.rows, a.cols);
    if m < n {
        return Err(crate::error::invalid("svd requires rows >= cols"));
    }
    // Column-major working copies.
    let mut cols: Vec<Vec<C64>> = (0..n).map(|c| a.column(c)).collect();
    let mut vcols: Vec<Vec<C64>> = (0..n)
        .map(|c| {
            let mut e = vec![ZERO; n];
            e[c] = ONE;
            e
        })
        .collect();
    // Columns below this squared norm are numerically zero; rotating them
    // against others only churns round-off.
    let fro2: f64 = cols.iter().flatten().map(|x| x.norm_sqr()).sum();
    let tiny = 1e-28 * fro2;
    let mut converged = n < 2;
    for _ in 0..SVD_MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|x| x.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|x| x.norm_sqr()).sum();
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if alpha <= tiny || beta <= tiny || g == 0.0 || g <= 1e-15 * math::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + math::sqrt(1.0 + zeta * zeta))
                } else {
                    -1.0 / (-zeta + math::sqrt(1.0 + zeta * zeta))
                };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = c * t;
                let e = phase.conj();
                rotate_pair(&mut cols, p, q, c, s, e);
                rotate_pair(&mut vcols, p, q, c, s, e);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::NoConvergence { what: "Jacobi SVD", iterations: SVD_MAX_SWEEPS });
    }
    let mut order: Vec<(f64, usize)> = cols.iter().enumerate().map(|(i, c)| (norm(c), i)).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0).then(x.1.cmp(&y.1)));
    let smax = order.first().map_or(0.0, |x| x.0);
    let cutoff = smax * 1e-14 * m as f64;
    let mut s = Vec::with_capacity(n);
    let mut ucols: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut v = CMatrix::zeros(n, n);
    for (k, &(sigma, idx)) in order.iter().enumerate() {
        s.push(sigma);
        for r in 0..n {
            v[(r, k)] = vcols[idx][r];
        }
        if sigma > cutoff && sigma > 0.0 {
            ucols.push(cols[idx].iter().map(|x| x / sigma).collect());
        }
    }
    let full = extend_orthonormal(&ucols, m, n);
    let mut u = CMatrix::zeros(m, n);
    for (k, col) in full.iter().take(n).enumerate() {
        for r in 0..m {
            u[(r, k)] = col[r];
        }
    }
    Ok(Svd { u, s, v })
}

/// `(x_p, x_q) ← (c x_p − s e x_q, s x_p + c e x_q)`.
fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, s: f64, e: C64) {
    let (lo, hi) = cols.split_at_mut(q);
    let (xp, xq) = (&mut lo[p], &mut hi[0]);
    for (a, b) in xp.iter_mut().zip(xq.iter_mut()) {
        let bp = *b * e;
        let ap = *a;
        *a = ap * c - bp * s;
        *b = ap * s + bp * c;
    }
}

const EIGH_MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigensolver for a small Hermitian matrix. Returns ascending
/// eigenvalues and the eigenvectors as columns.
pub fn hermitian_eigen(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let n = a.rows;
    assert_eq!(n, a.cols, "hermitian_eigen needs a square matrix");
    let mut m = a.clone();
    let mut v = CMatrix::identity(n);
    let scale: f64 = m.data.iter().map(|x| x.norm_sqr()).sum::<f64>().max(1e-300);
    let mut done = false;
    for _ in 0..EIGH_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| m[(r, c)].norm_sqr())
            .sum();
        if off <= 1e-30 * scale {
            done = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let g = apq.norm();
                if g <= 1e-300 {
                    continue;
                }
                let e = (apq / g).conj();
                let zeta = (m[(q, q)].re - m[(p, p)].re) / (2.0 * g);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + math::sqrt(1.0 + zeta * zeta))
                } else {
                    -1.0 / (-zeta + math::sqrt(1.0 + zeta * zeta))
                };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = c * t;
                // Columns: A ← A U, with U restricted to (p, q).
                for r in 0..n {
                    let ap = m[(r, p)];
                    let aq = m[(r, q)] * e;
                    m[(r, p)] = ap * c - aq * s;
                    m[(r, q)] = ap * s + aq * c;
                    let vp = v[(r, p)];
                    let vq = v[(r, q)] * e;
                    v[(r, p)] = vp * c - vq * s;
                    v[(r, q)] = vp * s + vq * c;
                }
                // Rows: A ← U† A.
                let ec = e.conj();
                for col in 0..n {
                    let ap = m[(p, col)];
                    let aq = m[(q, col)] * ec;
                    m[(p, col)] = ap * c - aq * s;
                    m[(q, col)] = ap * s + aq * c;
                }
            }
        }
    }
    if !done {
        return Err(Error::NoConvergence { what: "Hermitian Jacobi", iterations: EIGH_MAX_SWEEPS });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(x, x)].re.total_cmp(&m[(y, y)].re));
    let evals = order.iter().map(|&i| m[(i, i)].re).collect();
    let evecs = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((evals, evecs))
}

fn transpose_in_place(z: &mut [f64], n: usize) {
    for r in 0..n {
        for c in r + 1..n {
            z.swap(r * n + c, c * n + r);
        }
    }
}

// tred2 and tql2 index `z` column-major so their inner loops run over
// contiguous memory; a symmetric input reads the same either way.

/// Householder reduction of a real symmetric `n × n` matrix to tridiagonal
/// form. On return `z` holds the orthogonal transform, `d` the diagonal and
/// `e[1..]` the sub-diagonal.
fn tred2(z: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    tred2_reduce(z, n, d, e);
    tred2_accumulate(z, n, d, e);
}

/// Reduction half of [`tred2`]: leaves reflector `i` in column `i` of `z`
/// above the diagonal with its norm term in `d[i]`, the tridiagonal diagonal
/// on the diagonal of `z`, and the sub-diagonal in `e[1..]`.
fn tred2_reduce(z: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    let idx = |r: usize, c: usize| c * n + r;
    for j in 0..n {
        d[j] = z[idx(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for &dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = z[idx(i - 1, j)];
                z[idx(i, j)] = 0.0;
                z[idx(j, i)] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = math::sqrt(h);
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                f = d[j];
                z[idx(j, i)] = f;
                g = e[j] + z[idx(j, j)] * f;
                for k in j + 1..i {
                    g += z[idx(k, j)] * d[k];
                    e[k] += z[idx(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    z[idx(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = z[idx(i - 1, j)];
                z[idx(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }
}

/// Builds the orthogonal transform from the reflectors left by
/// [`tred2_reduce`], leaving the tridiagonal in `d` and `e`.
fn tred2_accumulate(z: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) {
    let idx = |r: usize, c: usize| c * n + r;
    for i in 0..n - 1 {
        z[idx(n - 1, i)] = z[idx(i, i)];
        z[idx(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = z[idx(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += z[idx(k, i + 1)] * z[idx(k, j)];
                }
                for k in 0..=i {
                    z[idx(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            z[idx(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = z[idx(n - 1, j)];
        z[idx(n - 1, j)] = 0.0;
    }
    z[idx(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL on a symmetric tridiagonal matrix (`d` diagonal, `e[1..]`
/// sub-diagonal), accumulating rotations into `z`. Eigenvalues
/// come back ascending with matching eigenvector columns.
fn tql2(z: &mut [f64], n: usize, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let idx = |r: usize, c: usize| c * n + r;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(Error::NoConvergence { what: "tridiagonal QL", iterations: 60 });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = math::hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().take(n).skip(l + 2) {
                    *di -= h;
                }
                f += h;
                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = math::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let zk1 = z[idx(k, i + 1)];
                        let zk = z[idx(k, i)];
                        z[idx(k, i + 1)] = s * zk + c * zk1;
                        z[idx(k, i)] = c * zk - s * zk1;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    // Selection sort keeps the eigenvector columns aligned.
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        for j in i + 1..n {
            if d[j] < d[k] {
                k = j;
            }
        }
        if k != i {
            d.swap(i, k);
            for r in 0..n {
                z.swap(idx(r, i), idx(r, k));
            }
        }
    }
    Ok(())
}

/// Eigen-decomposition of a real symmetric tridiagonal matrix given its
/// diagonal and off-diagonal (`off.len() == diag.len() − 1`). Returns
/// ascending eigenvalues and the row-major eigenvector matrix (columns).
pub fn symmetric_tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    assert_eq!(off.len() + 1, n, "off-diagonal length must be n - 1");
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[1..].copy_from_slice(off);
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tql2(&mut z, n, &mut d, &mut e)?;
    transpose_in_place(&mut z, n);
    Ok((d, z))
}

/// Full eigen-decomposition of a dense real symmetric row-major matrix.
/// Returns ascending eigenvalues and eigenvectors as columns (row-major).
pub fn symmetric_eigen(a: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    assert_eq!(a.len(), n * n, "matrix size mismatch");
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut z = a.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(&mut z, n, &mut d, &mut e);
    tql2(&mut z, n, &mut d, &mut e)?;
    transpose_in_place(&mut z, n);
    Ok((d, z))
}

/// Lowest eigenpair of a dense real symmetric row-major matrix: Householder
/// tridiagonalization, Sturm bisection for the eigenvalue, then inverse
/// iteration on the tridiagonal and back-transformation through the
/// reflectors. Never forms the full eigenvector matrix.
pub fn symmetric_lowest_eigenpair(a: &[f64], n: usize) -> Result<(f64, Vec<f64>)> {
    assert_eq!(a.len(), n * n, "matrix size mismatch");
    if n == 0 {
        return Err(Error::InvalidArgument("empty matrix".into()));
    }
    let mut z = a.to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2_reduce(&mut z, n, &mut d, &mut e);
    e[0] = 0.0;
    let diag: Vec<f64> = (0..n).map(|i| z[i * n + i]).collect();
    let lambda = tridiagonal_lowest_eigenvalue(&diag, &e);
    let mut v = tridiagonal_inverse_iteration(&diag, &e, lambda);
    // Q = P_{n−1}⋯P_1 with P_m = I − u uᵀ/h acting on the first m entries.
    for i in 0..n - 1 {
        let h = d[i + 1];
        if h != 0.0 {
            let u = &z[(i + 1) * n..(i + 1) * n + i + 1];
            let g: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() / h;
            v.iter_mut().zip(u).for_each(|(x, a)| *x -= g * a);
        }
    }
    let s = math::sqrt(v.iter().map(|x| x * x).sum());
    v.iter_mut().for_each(|x| *x /= s);
    Ok((lambda, v))
}

/// Number of eigenvalues of the tridiagonal `(d, e[1..])` below `x`.
fn sturm_count(d: &[f64], e: &[f64], x: f64, tiny: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        q = d[i] - x - if i == 0 { 0.0 } else { e[i] * e[i] / q };
        if q.abs() < tiny {
            q = -tiny;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn tridiagonal_lowest_eigenvalue(d: &[f64], e: &[f64]) -> f64 {
    let n = d.len();
    let off = |i: usize| if i < n { e[i].abs() } else { 0.0 };
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let r = off(i) * (i > 0) as u8 as f64 + off(i + 1);
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    let tiny = f64::MIN_POSITIVE.max(f64::EPSILON * (hi.abs().max(lo.abs()) + 1.0) * 1e-3);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(d, e, mid, tiny) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Inverse iteration for `T − λI` with a partially pivoted tridiagonal LU.
fn tridiagonal_inverse_iteration(d: &[f64], e: &[f64], lambda: f64) -> Vec<f64> {
    let n = d.len();
    if n == 1 {
        return vec![1.0];
    }
    let scale = d.iter().chain(e.iter()).fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let tiny = f64::EPSILON * scale;
    let mut dl: Vec<f64> = e[1..].to_vec();
    let mut dd: Vec<f64> = d.iter().map(|x| x - lambda).collect();
    let mut du: Vec<f64> = e[1..].to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut swapped = vec![false; n - 1];
    for i in 0..n - 1 {
        if dd[i].abs() >= dl[i].abs() {
            if dd[i].abs() < tiny {
                dd[i] = tiny;
            }
            let f = dl[i] / dd[i];
            dl[i] = f;
            dd[i + 1] -= f * du[i];
        } else {
            let f = dd[i] / dl[i];
            dd[i] = dl[i];
            dl[i] = f;
            let t = du[i];
            du[i] = dd[i + 1];
            dd[i + 1] = t - f * dd[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] *= -f;
            }
            swapped[i] = true;
        }
    }
    if dd[n - 1].abs() < tiny {
        dd[n - 1] = tiny;
    }
    let mut b = vec![1.0; n];
    for _ in 0..4 {
        for i in 0..n - 1 {
            if swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= dl[i] * b[i];
        }
        b[n - 1] /= dd[n - 1];
        b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dd[n - 2];
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / dd[i];
        }
        let s = math::sqrt(b.iter().map(|x| x * x).sum());
        b.iter_mut().for_each(|x| *x /= s);
    }
    b
}
