//! Shared numerical kernels: finite-difference weights on arbitrary nodes,
//! monotone cubic interpolation, composite quadrature, and the polar
//! projection onto the unitary (J-commuting orthogonal) group.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Finite-difference weights for the `m`-th derivative at `x0` from the
/// nodes `x` (Fornberg's recurrence). `x` need not be uniform or contain `x0`.
pub fn fd_weights(x: &[f64], x0: f64, m: usize) -> Vec<f64> {
    let n = x.len();
    assert!(n > m, "need more than {m} nodes for derivative order {m}");
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = m.min(i);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - x0;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// Window of node indices around `i` for an `m`-th derivative stencil.
/// Interior windows are centered (4th-order or better); near the boundary the
/// window shifts one-sided keeping the same width.
pub fn stencil_window(len: usize, i: usize, m: usize) -> std::ops::Range<usize> {
    let w = (m + 5).min(len);
    let half = w / 2;
    let lo = i.saturating_sub(half).min(len - w);
    lo..lo + w
}

/// Strided stencil node indices around `i` for an `m`-th derivative on a
/// possibly very fine grid. Derivative noise grows like spacing^{-m} from
/// the roundoff already present in the samples, so on dense grids the
/// stencil skips nodes to keep at most ~200 effective steps per domain;
/// the high-order weights keep truncation negligible at that spacing.
pub fn strided_stencil(len: usize, i: usize, m: usize) -> Vec<usize> {
    let stride = ((len - 1) / 200).max(1);
    let w = (m + 5).min((len - 1) / stride + 1);
    let half = w / 2;
    let lo = i
        .saturating_sub(half * stride)
        .min(len - 1 - (w - 1) * stride);
    (0..w).map(|j| lo + j * stride).collect()
}

/// `m`-th derivative of the sampled function `values` on the grid `params`,
/// evaluated at grid index `i`.
pub fn derivative_at(params: &[f64], values: &[f64], i: usize, m: usize) -> f64 {
    let idx = strided_stencil(params.len(), i, m);
    let nodes: Vec<f64> = idx.iter().map(|&j| params[j]).collect();
    let w = fd_weights(&nodes, params[i], m);
    w.iter()
        .zip(idx.iter().map(|&j| values[j]))
        .map(|(wi, vi)| wi * vi)
        .sum()
}

/// Monotone (Fritsch–Carlson) cubic Hermite interpolant.
pub struct Pchip {
    x: Vec<f64>,
    y: Vec<f64>,
    d: Vec<f64>,
}

impl Pchip {
    pub fn new(x: &[f64], y: &[f64]) -> Self {
        assert!(x.len() == y.len() && x.len() >= 2);
        let n = x.len();
        let h: Vec<f64> = (0..n - 1).map(|i| x[i + 1] - x[i]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
        let mut d = vec![0.0; n];
        for i in 1..n - 1 {
            if delta[i - 1] * delta[i] <= 0.0 {
                d[i] = 0.0;
            } else {
                let w1 = 2.0 * h[i] + h[i - 1];
                let w2 = h[i] + 2.0 * h[i - 1];
                d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
            }
        }
        d[0] = Self::end_slope(h[0], h.get(1).copied().unwrap_or(h[0]), delta[0], *delta.get(1).unwrap_or(&delta[0]));
        d[n - 1] = Self::end_slope(
            h[n - 2],
            h.get(n.wrapping_sub(3)).copied().unwrap_or(h[n - 2]),
            delta[n - 2],
            *delta.get(n.wrapping_sub(3)).unwrap_or(&delta[n - 2]),
        );
        Pchip { x: x.to_vec(), y: y.to_vec(), d }
    }

    fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
        let mut s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if s * d0 <= 0.0 {
            s = 0.0;
        } else if d0 * d1 < 0.0 && s.abs() > 3.0 * d0.abs() {
            s = 3.0 * d0;
        }
        s
    }

    pub fn eval(&self, t: f64) -> f64 {
        let n = self.x.len();
        let i = match self.x.binary_search_by(|v| v.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        };
        let h = self.x[i + 1] - self.x[i];
        let u = (t - self.x[i]) / h;
        let (u2, u3) = (u * u, u * u * u);
        let h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        let h10 = u3 - 2.0 * u2 + u;
        let h01 = -2.0 * u3 + 3.0 * u2;
        let h11 = u3 - u2;
        h00 * self.y[i] + h * h10 * self.d[i] + h01 * self.y[i + 1] + h * h11 * self.d[i + 1]
    }
}

/// Cumulative integral of `f` on the grid `t`: per interval, 3-point
/// Gauss–Legendre applied to the cubic interpolant on a 4-node window,
/// so the rule is exact on cubics up to the grid boundary.
pub fn cumulative_integral(t: &[f64], f: &[f64]) -> Vec<f64> {
    let n = t.len();
    assert!(n >= 3 && n == f.len());
    // Gauss–Legendre nodes/weights on [-1, 1]
    let gauss = [
        (-(0.6_f64).sqrt(), 5.0 / 9.0),
        (0.0, 8.0 / 9.0),
        ((0.6_f64).sqrt(), 5.0 / 9.0),
    ];
    let width = 4.min(n);
    let mut s = vec![0.0; n];
    for i in 0..n - 1 {
        let lo = i.saturating_sub(1).min(n - width);
        let nodes = &t[lo..lo + width];
        let (a, b) = (t[i], t[i + 1]);
        let mut inc = 0.0;
        for (u, w) in gauss {
            let tq = 0.5 * (a + b) + 0.5 * (b - a) * u;
            let interp = fd_weights(nodes, tq, 0);
            let fq: f64 = interp.iter().zip(&f[lo..lo + width]).map(|(c, v)| c * v).sum();
            inc += w * fq;
        }
        s[i + 1] = s[i] + 0.5 * (b - a) * inc;
    }
    s
}

/// Realification of a complex n×n matrix `P + iQ` acting on coefficient
/// vectors ordered (x-part, y-part): the block matrix [[P, −Q], [Q, P]].
pub fn realify(c: &DMatrix<Complex64>) -> DMatrix<f64> {
    let n = c.nrows();
    let mut r = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = c[(i, j)];
            r[(i, j)] = z.re;
            r[(i, j + n)] = -z.im;
            r[(i + n, j)] = z.im;
            r[(i + n, j + n)] = z.re;
        }
    }
    r
}

/// Inverse of [`realify`]; averages the blocks, which orthogonally projects a
/// general real matrix onto the J-commuting subspace.
pub fn complexify(r: &DMatrix<f64>) -> DMatrix<Complex64> {
    let n = r.nrows() / 2;
    DMatrix::from_fn(n, n, |i, j| {
        Complex64::new(
            0.5 * (r[(i, j)] + r[(i + n, j + n)]),
            0.5 * (r[(i + n, j)] - r[(i, j + n)]),
        )
    })
}

/// Nearest J-commuting orthogonal matrix: project onto the J-commuting
/// subspace, then take the unitary polar factor.
pub fn project_unitary(r: &DMatrix<f64>) -> DMatrix<f64> {
    let c = complexify(r);
    let svd = c.svd(true, true);
    let u = svd.u.expect("svd u");
    let v_t = svd.v_t.expect("svd v_t");
    realify(&(u * v_t))
}

/// Singular values of a complex matrix, descending.
pub fn complex_singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// Singular values of a real matrix, descending.
pub fn real_singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    let svd = m.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    sv
}

/// The standard complex structure on coefficient vectors: (a, b) ↦ (−b, a).
pub fn j0_apply(v: &DVector<f64>) -> DVector<f64> {
    let n = v.len() / 2;
    let mut out = DVector::zeros(2 * n);
    for j in 0..n {
        out[j] = -v[n + j];
        out[n + j] = v[j];
    }
    out
}

/// The matrix of [`j0_apply`].
pub fn j0_matrix(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        m[(j, n + j)] = -1.0;
        m[(n + j, j)] = 1.0;
    }
    m
}

/// Real 2n-vector (x-part, y-part) as a complex n-vector.
pub fn to_complex_vec(v: &DVector<f64>) -> DVector<Complex64> {
    let n = v.len() / 2;
    DVector::from_fn(n, |j, _| Complex64::new(v[j], v[n + j]))
}

/// Complex n-vector as a real 2n-vector (x-part, y-part).
pub fn to_real_vec(v: &DVector<Complex64>) -> DVector<f64> {
    let n = v.len();
    let mut out = DVector::zeros(2 * n);
    for j in 0..n {
        out[j] = v[j].re;
        out[n + j] = v[j].im;
    }
    out
}

/// `count` uniform samples from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2);
    let h = (b - a) / (count - 1) as f64;
    (0..count).map(|i| a + h * i as f64).collect()
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}
