//! Dense complex eigensolver: balancing, Householder reduction to upper
//! Hessenberg form, and implicit single-shift QR iteration with Wilkinson
//! shifts, deflation, and periodic exceptional shifts.
//!
//! Used as the cross-validation oracle for windowed operator matrices; block
//! spectra normally take the exact structured path instead.

use num_complex::Complex64;

use crate::cmatrix::CMatrix;
use crate::error::{Error, Result};

/// Default cap on the matrix dimension accepted by [`eigenvalues`].
pub const DIMENSION_CAP: usize = 2000;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// All eigenvalues of a dense complex square matrix.
///
/// Deterministic for fixed input; fails with [`Error::NonConvergence`] if a
/// submatrix resists `30·dim` total sweeps.
pub fn eigenvalues(matrix: &CMatrix) -> Result<Vec<Complex64>> {
    eigenvalues_capped(matrix, DIMENSION_CAP)
}

pub fn eigenvalues_capped(matrix: &CMatrix, cap: usize) -> Result<Vec<Complex64>> {
    let n = matrix.dim();
    if n > cap {
        return Err(Error::DimensionCap { dim: n, cap });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = matrix.clone();
    balance(&mut h);
    hessenberg(&mut h);
    qr_eigenvalues(h)
}

/// Parlett–Reinsch balancing with power-of-two scale factors; an exact
/// diagonal similarity, so eigenvalues are untouched.
fn balance(a: &mut CMatrix) {
    let n = a.dim();
    let radix = 2.0f64;
    loop {
        let mut done = true;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    col += a[(j, i)].norm();
                    row += a[(i, j)].norm();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            let mut c = col;
            let mut r = row;
            while c < r / radix {
                c *= radix;
                r /= radix;
                f *= radix;
            }
            while c >= r * radix {
                c /= radix;
                r *= radix;
                f /= radix;
            }
            if c + r < 0.95 * total {
                done = false;
                let g = 1.0 / f;
                for j in 0..n {
                    a[(i, j)] *= g;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// Unitary similarity reduction to upper Hessenberg form via complex
/// Householder reflectors.
fn hessenberg(a: &mut CMatrix) {
    let n = a.dim();
    if n < 3 {
        return;
    }
    let mut v = vec![ZERO; n];
    for j in 0..n - 2 {
        let mut norm_sqr = 0.0;
        for i in j + 1..n {
            norm_sqr += a[(i, j)].norm_sqr();
        }
        let norm = norm_sqr.sqrt();
        if norm <= f64::MIN_POSITIVE {
            continue;
        }
        let x0 = a[(j + 1, j)];
        let phase = if x0 == ZERO { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let len = n - (j + 1);
        for (t, i) in (j + 1..n).enumerate() {
            v[t] = a[(i, j)];
        }
        v[0] -= alpha;
        let vv: f64 = v[..len].iter().map(|z| z.norm_sqr()).sum();
        if vv <= f64::MIN_POSITIVE {
            continue;
        }
        let beta = 2.0 / vv;
        // Left: A <- (I - beta v v*) A on rows j+1.., columns j..n.
        for c in j..n {
            let mut w = ZERO;
            for (t, i) in (j + 1..n).enumerate() {
                w += v[t].conj() * a[(i, c)];
            }
            w *= beta;
            for (t, i) in (j + 1..n).enumerate() {
                a[(i, c)] -= w * v[t];
            }
        }
        // Right: A <- A (I - beta v v*) on columns j+1.., all rows.
        for r in 0..n {
            let mut w = ZERO;
            for (t, i) in (j + 1..n).enumerate() {
                w += a[(r, i)] * v[t];
            }
            w *= beta;
            for (t, i) in (j + 1..n).enumerate() {
                a[(r, i)] -= w * v[t].conj();
            }
        }
        a[(j + 1, j)] = alpha;
        for i in j + 2..n {
            a[(i, j)] = ZERO;
        }
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` with real `c` sending `(x, y)` to
/// `(r, 0)`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let xm = x.norm();
    if xm == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let norm = (x.norm_sqr() + y.norm_sqr()).sqrt();
    let phase = x / xm;
    (xm / norm, phase * y.conj() / norm)
}

/// Eigenvalues of the trailing 2x2 of the active block; returns the one
/// closer to the bottom-right entry (Wilkinson shift).
fn wilkinson_shift(h: &CMatrix, hi: usize) -> Complex64 {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = (a + d) * 0.5 + disc;
    let m2 = (a + d) * 0.5 - disc;
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

/// One implicit single-shift QR sweep on the active block `lo..=hi`.
fn sweep(h: &mut CMatrix, lo: usize, hi: usize, shift: Complex64) {
    let mut x = h[(lo, lo)] - shift;
    let mut y = h[(lo + 1, lo)];
    for k in lo..hi {
        let (c, s) = givens(x, y);
        let col_start = if k > lo { k - 1 } else { lo };
        for col in col_start..=hi {
            let t1 = h[(k, col)];
            let t2 = h[(k + 1, col)];
            h[(k, col)] = c * t1 + s * t2;
            h[(k + 1, col)] = -s.conj() * t1 + c * t2;
        }
        let row_end = hi.min(k + 2);
        for row in lo..=row_end {
            let t1 = h[(row, k)];
            let t2 = h[(row, k + 1)];
            h[(row, k)] = c * t1 + s.conj() * t2;
            h[(row, k + 1)] = -s * t1 + c * t2;
        }
        if k > lo {
            // The bulge below the subdiagonal was annihilated exactly.
            h[(k + 1, k - 1)] = ZERO;
        }
        if k + 1 < hi {
            x = h[(k + 1, k)];
            y = h[(k + 2, k)];
        }
    }
}

fn qr_eigenvalues(mut h: CMatrix) -> Result<Vec<Complex64>> {
    let n = h.dim();
    let mut eigs = vec![ZERO; n];
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let max_total = 30 * n;
    let mut total = 0usize;
    let mut stall = 0usize;
    loop {
        if hi == 0 {
            eigs[0] = h[(0, 0)];
            break;
        }
        // Find the top of the active block, deflating negligible subdiagonals.
        let mut lo = hi;
        while lo > 0 {
            let s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let thresh = f64::EPSILON * if s == 0.0 { scale } else { s };
            if h[(lo, lo - 1)].norm() <= thresh {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eigs[hi] = h[(hi, hi)];
            hi -= 1;
            stall = 0;
            continue;
        }
        total += 1;
        stall += 1;
        if total > max_total {
            return Err(Error::NonConvergence { dim: hi - lo + 1 });
        }
        let shift = if stall % 10 == 0 {
            // Exceptional shift to break symmetric stalls.
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(&h, hi)
        };
        sweep(&mut h, lo, hi, shift);
    }
    Ok(eigs)
}

/// Numerical rank by full-pivot Gaussian elimination: pivots with modulus
/// at most `tol · max(1, max |entry|)` are treated as zero.
pub fn numerical_rank(matrix: &CMatrix, tol: f64) -> usize {
    let mut a = matrix.clone();
    let n = a.dim();
    let thresh = tol * a.max_abs().max(1.0);
    let mut rank = 0;
    for step in 0..n {
        let mut best = (step, step);
        let mut best_val = 0.0;
        for i in step..n {
            for j in step..n {
                let v = a[(i, j)].norm();
                if v > best_val {
                    best_val = v;
                    best = (i, j);
                }
            }
        }
        if best_val <= thresh {
            break;
        }
        let (pi, pj) = best;
        for j in 0..n {
            let t = a[(step, j)];
            a[(step, j)] = a[(pi, j)];
            a[(pi, j)] = t;
        }
        for i in 0..n {
            let t = a[(i, step)];
            a[(i, step)] = a[(i, pj)];
            a[(i, pj)] = t;
        }
        let pivot = a[(step, step)];
        for i in step + 1..n {
            let f = a[(i, step)] / pivot;
            if f == ZERO {
                continue;
            }
            for j in step..n {
                let v = a[(step, j)];
                a[(i, j)] -= f * v;
            }
        }
        rank += 1;
    }
    rank
}
