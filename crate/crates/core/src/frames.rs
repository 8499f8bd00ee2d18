//! Adapted moving frames along unit-speed curves, p-curvatures and contact
//! normality, and the Darboux-derivative matrix of the frame lift.

use nalgebra::{DMatrix, DVector};

use crate::curve::{HorizontalJet, SampledCurve};
use crate::error::{Error, Result};
use crate::heis::{HPoint, Symmetry};
use crate::numerics::{derivative_at, j0_apply};

/// Relative rank tolerance used when orthonormalizing an osculating span.
pub const FRAME_RANK_TOL: f64 = 1e-8;

/// Maximum frame rotation between adjacent samples before the grid is
/// declared too coarse.
pub const MAX_FRAME_ANGLE: f64 = 0.5;

/// The lifted frame (γ; e₁…e_{2n}, T) at one parameter value.
#[derive(Debug, Clone)]
pub struct FrameState {
    pub base: HPoint,
    /// coefficients of e₁…e_{2n} in the left-invariant basis
    pub e: Vec<DVector<f64>>,
}

impl FrameState {
    /// The rotation block with columns e₁…e_{2n}.
    pub fn rotation_matrix(&self) -> DMatrix<f64> {
        let dim = self.e[0].len();
        DMatrix::from_fn(dim, dim, |i, j| self.e[j][i])
    }

    /// The frame as an element of `PSH(n)`.
    pub fn to_symmetry(&self) -> Result<Symmetry> {
        Symmetry::new(self.rotation_matrix(), self.base.clone())
    }
}

/// Sequential orthonormalization of v₁…v_k, projecting out both the span of
/// e₁…e_{j−1} and of Je₁…Je_{j−1} at each step, so the resulting vectors are
/// Hermitian-orthonormal. Signs are fixed by ⟨e_j, v_j⟩ > 0.
pub fn orthonormalize_hermitian(reals: &[DVector<f64>], tol: f64) -> Result<Vec<DVector<f64>>> {
    let mut frame: Vec<DVector<f64>> = Vec::with_capacity(reals.len());
    let mut scale = 1.0f64;
    for (step, v) in reals.iter().enumerate() {
        scale = scale.max(v.norm());
        let mut w = v.clone();
        for e in &frame {
            let je = j0_apply(e);
            w -= e * w.dot(e);
            w -= &je * w.dot(&je);
        }
        let norm = w.norm();
        if norm <= tol * scale.max(1.0) {
            return Err(Error::Degenerate { rank: step, order: reals.len() });
        }
        frame.push(w / norm);
    }
    Ok(frame)
}

/// Build the full J-adapted frame at one point from a jet of order k:
/// e₁…e_k by Hermitian Gram–Schmidt on β′…β^{(k)}, then e_{n+j} = Je_j.
/// For k = n the frame is complete; smaller k leaves the remaining slots to
/// the caller.
pub fn build_frame(base: &HPoint, jet: &HorizontalJet, tol: f64) -> Result<FrameState> {
    let n = base.n();
    let k = jet.order();
    if k > n {
        return Err(Error::InvalidArgument(format!("jet order {k} exceeds ambient dimension {n}")));
    }
    let partial = orthonormalize_hermitian(&jet.real_derivs(), tol)?;
    if k < n {
        return Err(Error::Degenerate { rank: k, order: n });
    }
    let mut e = vec![DVector::zeros(2 * n); 2 * n];
    for j in 0..n {
        e[n + j] = j0_apply(&partial[j]);
        e[j] = partial[j].clone();
    }
    let state = FrameState { base: base.clone(), e };
    let gram_residual = {
        let r = state.rotation_matrix();
        let gram = r.transpose() * &r;
        crate::numerics::max_abs(&(gram - DMatrix::identity(2 * n, 2 * n)))
    };
    if gram_residual > 1e-6 {
        return Err(Error::Conditioning(format!(
            "frame orthonormality residual {gram_residual:.3e}"
        )));
    }
    Ok(state)
}

/// Sampled invariants (κ₁…κ_k, τ) of a unit-speed curve.
#[derive(Debug, Clone)]
pub struct InvariantProfile {
    /// the Heisenberg dimension the profile determines (= number of
    /// p-curvatures)
    pub n: usize,
    pub s_grid: Vec<f64>,
    pub kappas: Vec<Vec<f64>>,
    pub tau: Vec<f64>,
}

impl InvariantProfile {
    pub fn new(n: usize, s_grid: Vec<f64>, kappas: Vec<Vec<f64>>, tau: Vec<f64>) -> Result<Self> {
        if kappas.len() != n {
            return Err(Error::InvalidArgument(format!(
                "expected {n} p-curvature arrays, got {}",
                kappas.len()
            )));
        }
        let len = s_grid.len();
        if tau.len() != len || kappas.iter().any(|k| k.len() != len) {
            return Err(Error::InvalidArgument("invariant arrays must share the grid length".into()));
        }
        if len < 2 {
            return Err(Error::InvalidArgument("profile grid needs at least two samples".into()));
        }
        Ok(InvariantProfile { n, s_grid, kappas, tau })
    }

    /// Evaluate analytic invariant functions on a uniform grid.
    pub fn from_fns(
        n: usize,
        s_grid: Vec<f64>,
        kappa_fns: &[&dyn Fn(f64) -> f64],
        tau_fn: &dyn Fn(f64) -> f64,
    ) -> Result<Self> {
        let kappas = kappa_fns
            .iter()
            .map(|f| s_grid.iter().map(|s| f(*s)).collect())
            .collect();
        let tau = s_grid.iter().map(|s| tau_fn(*s)).collect();
        InvariantProfile::new(n, s_grid, kappas, tau)
    }

    pub fn len(&self) -> usize {
        self.s_grid.len()
    }
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn step(&self) -> f64 {
        (self.s_grid[self.s_grid.len() - 1] - self.s_grid[0]) / (self.s_grid.len() - 1) as f64
    }

    /// Per-invariant sup-norm differences (κ₁…κ_n, then τ).
    pub fn sup_diffs(&self, other: &InvariantProfile) -> Result<Vec<f64>> {
        if self.n != other.n || self.len() != other.len() {
            return Err(Error::InvalidArgument(
                "profiles must share dimension and grid length".into(),
            ));
        }
        let sup = |a: &[f64], b: &[f64]| {
            a.iter().zip(b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
        };
        let mut out: Vec<f64> = self
            .kappas
            .iter()
            .zip(&other.kappas)
            .map(|(a, b)| sup(a, b))
            .collect();
        out.push(sup(&self.tau, &other.tau));
        Ok(out)
    }
}

/// Frame fields and invariants of a unit-speed curve at the given order.
/// The frame is built pointwise, made sign-coherent along the grid, and
/// differentiated with the same finite-difference stencils as the curve.
pub fn invariants_along(c: &SampledCurve, order: usize) -> Result<InvariantProfile> {
    if !c.is_arclength() {
        return Err(Error::InvalidArgument(
            "invariants are defined along unit-speed curves; reparametrize first".into(),
        ));
    }
    let npts = c.len();
    let n = c.n();
    if order == 0 || order > n {
        return Err(Error::InvalidArgument(format!("order {order} out of range 1..={n}")));
    }
    // pointwise partial frames e_1..e_order
    let mut fields: Vec<Vec<DVector<f64>>> = Vec::with_capacity(npts);
    let mut tau = Vec::with_capacity(npts);
    for i in 0..npts {
        let jet = c.derivatives_at(i, order)?;
        tau.push(jet.tau);
        fields.push(orthonormalize_hermitian(&jet.real_derivs(), FRAME_RANK_TOL)?);
    }
    // sign coherence scan, then a resolution check on the aligned fields
    for j in 0..order {
        for i in 1..npts {
            let d = fields[i][j].dot(&fields[i - 1][j]);
            if d < 0.0 {
                let flipped = -&fields[i][j];
                fields[i][j] = flipped;
            }
            let aligned = fields[i][j].dot(&fields[i - 1][j]).clamp(-1.0, 1.0);
            if aligned.acos() > MAX_FRAME_ANGLE {
                return Err(Error::Resolution(format!(
                    "frame e_{} rotates by {:.3} rad between samples {} and {}",
                    j + 1,
                    aligned.acos(),
                    i - 1,
                    i
                )));
            }
        }
    }
    // κ_j = ⟨e_j', e_{j+1}⟩ for j < order, κ_order = ⟨e_order', J e_order⟩
    let dim = 2 * n;
    let mut kappas = vec![vec![0.0; npts]; order];
    for j in 0..order {
        // coefficient arrays of e_{j+1}
        let arrays: Vec<Vec<f64>> = (0..dim)
            .map(|d| (0..npts).map(|i| fields[i][j][d]).collect())
            .collect();
        for i in 0..npts {
            let deriv = DVector::from_fn(dim, |d, _| derivative_at(c.params(), &arrays[d], i, 1));
            let partner = if j + 1 < order {
                fields[i][j + 1].clone()
            } else {
                j0_apply(&fields[i][j])
            };
            kappas[j][i] = deriv.dot(&partner);
        }
    }
    InvariantProfile::new(order, c.params().to_vec(), kappas, tau)
}

/// The Darboux matrix φ(s_i): the value of the Maurer–Cartan pullback of the
/// frame lift, expressed in the (2n+2)×(2n+2) matrix representation.
pub fn darboux_matrix(profile: &InvariantProfile, i: usize) -> DMatrix<f64> {
    let kappas: Vec<f64> = profile.kappas.iter().map(|k| k[i]).collect();
    darboux_from_values(profile.n, &kappas, profile.tau[i])
}

/// The Darboux matrix from pointwise invariant values.
pub fn darboux_from_values(n: usize, kappas: &[f64], tau: f64) -> DMatrix<f64> {
    assert_eq!(kappas.len(), n);
    let dim = 2 * n + 2;
    let mut m = DMatrix::zeros(dim, dim);
    // dγ = e₁ ds + T τ ds
    m[(1, 0)] = 1.0;
    m[(dim - 1, 0)] = tau;
    m[(dim - 1, n + 1)] = -1.0;
    // tridiagonal κ pattern, duplicated on the J-conjugate block
    for j in 1..n {
        let k = kappas[j - 1];
        m[(j + 1, j)] = k;
        m[(j, j + 1)] = -k;
        m[(n + j + 1, n + j)] = k;
        m[(n + j, n + j + 1)] = -k;
    }
    // κ_n couples e_n with e_{2n} = Je_n
    let kn = kappas[n - 1];
    m[(2 * n, n)] = kn;
    m[(n, 2 * n)] = -kn;
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{j0_matrix, linspace, max_abs};
    use num_complex::Complex64;

    #[test]
    fn frame_h1_from_unit_velocity() {
        let base = HPoint::origin(1);
        let jet = HorizontalJet {
            beta_derivs: vec![DVector::from_vec(vec![Complex64::new(1.0, 0.0)])],
            tau: 0.0,
        };
        let f = build_frame(&base, &jet, FRAME_RANK_TOL).unwrap();
        assert_eq!(f.e[0].as_slice(), &[1.0, 0.0]);
        assert_eq!(f.e[1].as_slice(), &[0.0, 1.0]);
    }

    #[test]
    fn frame_h2_one_gram_schmidt_step() {
        // β′ = (1, 0), β″ = (c, 1) real: e₁ = (1,0,0,0), e₂ = (0,1,0,0)
        let base = HPoint::origin(2);
        let jet = HorizontalJet {
            beta_derivs: vec![
                DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]),
                DVector::from_vec(vec![Complex64::new(2.5, 0.0), Complex64::new(1.0, 0.0)]),
            ],
            tau: 0.0,
        };
        let f = build_frame(&base, &jet, FRAME_RANK_TOL).unwrap();
        assert!((f.e[0].clone() - DVector::from_vec(vec![1.0, 0.0, 0.0, 0.0])).abs().max() < 1e-14);
        assert!((f.e[1].clone() - DVector::from_vec(vec![0.0, 1.0, 0.0, 0.0])).abs().max() < 1e-14);
        // J-adaptation
        assert!((f.e[2].clone() - j0_apply(&f.e[0])).abs().max() < 1e-14);
        assert!((f.e[3].clone() - j0_apply(&f.e[1])).abs().max() < 1e-14);
    }

    #[test]
    fn degenerate_jet_rejected() {
        let base = HPoint::origin(2);
        let jet = HorizontalJet {
            beta_derivs: vec![
                DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]),
                // J-image of β′ lies in the projected-out span
                DVector::from_vec(vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)]),
            ],
            tau: 0.0,
        };
        assert!(matches!(
            build_frame(&base, &jet, FRAME_RANK_TOL),
            Err(Error::Degenerate { .. })
        ));
    }

    #[test]
    fn darboux_n1_pattern() {
        let m = darboux_from_values(1, &[0.7], 0.3);
        let expect = DMatrix::from_row_slice(4, 4, &[
            0.0, 0.0, 0.0, 0.0,
            1.0, 0.0, -0.7, 0.0,
            0.0, 0.7, 0.0, 0.0,
            0.3, 0.0, -1.0, 0.0,
        ]);
        assert!(max_abs(&(m - expect)) < 1e-15);
    }

    #[test]
    fn darboux_zero_invariants() {
        let m = darboux_from_values(2, &[0.0, 0.0], 0.0);
        let mut count = 0;
        for v in m.iter() {
            if *v != 0.0 {
                count += 1;
            }
        }
        assert_eq!(count, 2);
        assert_eq!(m[(1, 0)], 1.0);
        assert_eq!(m[(5, 3)], -1.0); // (2n+1, n+1) with n = 2
    }

    #[test]
    fn darboux_n2_hand_pattern() {
        let (k1, k2, tau) = (1.3, -0.4, 0.2);
        let m = darboux_from_values(2, &[k1, k2], tau);
        let expect = DMatrix::from_row_slice(6, 6, &[
            0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
            1.0, 0.0, -k1, 0.0, 0.0, 0.0,
            0.0, k1, 0.0, 0.0, -k2, 0.0,
            0.0, 0.0, 0.0, 0.0, -k1, 0.0,
            0.0, 0.0, k2, k1, 0.0, 0.0,
            tau, 0.0, 0.0, -1.0, 0.0, 0.0,
        ]);
        assert!(max_abs(&(m - expect)) < 1e-15, "hand transcription of the Darboux block pattern");
    }

    #[test]
    fn darboux_block_is_skew_and_j_conjugate() {
        let n = 3;
        let m = darboux_from_values(n, &[0.9, -1.1, 0.5], 0.7);
        let block = m.view((1, 1), (2 * n, 2 * n)).into_owned();
        assert!(max_abs(&(&block + block.transpose())) < 1e-15);
        let j0 = j0_matrix(n);
        assert!(max_abs(&(&block * &j0 - &j0 * &block)) < 1e-15);
    }

    #[test]
    fn straight_line_invariants_vanish() {
        let grid = linspace(0.0, 1.0, 201);
        let c = SampledCurve::from_fn(1, &grid, |t| vec![t, 0.0, 0.0])
            .unwrap()
            .with_arclength_flag(true);
        let p = invariants_along(&c, 1).unwrap();
        for v in &p.kappas[0] {
            assert!(v.abs() < 1e-9);
        }
        for v in &p.tau {
            assert!(v.abs() < 1e-9);
        }
    }

    #[test]
    fn orientation_reversal_negates_tau() {
        let grid = linspace(0.0, 1.0, 401);
        let f = |t: f64| vec![t.sin(), 1.0 - t.cos(), 0.3 * t];
        let c = SampledCurve::from_fn(1, &grid, f).unwrap().with_arclength_flag(true);
        let rev = SampledCurve::from_fn(1, &grid, |t| f(1.0 - t))
            .unwrap()
            .with_arclength_flag(true);
        let p = invariants_along(&c, 1).unwrap();
        let pr = invariants_along(&rev, 1).unwrap();
        let npts = p.len();
        for i in 0..npts {
            assert!((p.tau[i] + pr.tau[npts - 1 - i]).abs() < 1e-7);
        }
    }
}
