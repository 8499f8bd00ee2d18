//! Order detection by Wronskian rank tests, the totally-real predicate, and
//! reduction of degenerate curves into a lower Heisenberg group by an
//! explicit rigid motion.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::{HorizontalJet, SampledCurve};
use crate::error::{Error, Result};
use crate::frames::orthonormalize_hermitian;
use crate::heis::{group_inv, HPoint, Symmetry};
use crate::numerics::{complex_singular_values, real_singular_values, realify, to_complex_vec};

/// Default relative singular-value threshold for rank decisions.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Residual bound for a successful reduction.
pub const REDUCTION_TOL: f64 = 1e-6;

/// Outcome of the order classification of a curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderReport {
    pub order: usize,
    /// worst-case rank margin σ_k / max(σ₁, 1) over the grid, per k = 1…n
    pub margins: Vec<f64>,
    pub totally_real: bool,
    pub nondegenerate: bool,
}

/// Rank margin of the complex matrix [β′ … β^{(k)}]: σ_k / max(σ₁, 1).
pub fn wronskian_margin(jet: &HorizontalJet, k: usize) -> f64 {
    let n = jet.beta_derivs[0].len();
    let m = DMatrix::from_fn(n, k, |i, j| jet.beta_derivs[j][i]);
    let sv = complex_singular_values(&m);
    sv[k - 1] / sv[0].max(1.0)
}

/// Whether β′ ∧ ⋯ ∧ β^{(k)} ≠ 0, as a relative complex-rank test.
pub fn wronskian_nonzero(jet: &HorizontalJet, tol: f64) -> bool {
    wronskian_margin(jet, jet.order()) > tol
}

/// Rank margin of the real matrix [v₁ … v_k, Jv₁ … Jv_k]: σ_{2k} / max(σ₁, 1).
pub fn totally_real_margin(jet: &HorizontalJet) -> f64 {
    let k = jet.order();
    let reals = jet.real_derivs();
    let dim = reals[0].len();
    let m = DMatrix::from_fn(dim, 2 * k, |i, j| {
        if j < k {
            reals[j][i]
        } else {
            crate::numerics::j0_apply(&reals[j - k])[i]
        }
    });
    let sv = real_singular_values(&m);
    sv[2 * k - 1] / sv[0].max(1.0)
}

/// Whether the real span of the jet meets its own J-image only at 0.
pub fn totally_real(jet: &HorizontalJet, tol: f64) -> bool {
    totally_real_margin(jet) > tol
}

/// Classify the order of a horizontally regular curve: the largest k ≤ n
/// with the k-th Wronskian nonzero at every grid point (descending scan),
/// plus the totally-real predicate on the order-k jets.
pub fn curve_order(c: &SampledCurve, tol: f64) -> Result<OrderReport> {
    let n = c.n();
    let npts = c.len();
    // jets of maximal order once per point; sub-jets share the columns
    let jets: Vec<HorizontalJet> = (0..npts)
        .map(|i| c.derivatives_at(i, n))
        .collect::<Result<Vec<_>>>()?;
    let mut margins = vec![f64::INFINITY; n];
    for k in 1..=n {
        for jet in &jets {
            margins[k - 1] = margins[k - 1].min(wronskian_margin(jet, k));
        }
    }
    let order = match (1..=n).rev().find(|k| margins[k - 1] > tol) {
        Some(k) => k,
        None => {
            return Err(Error::NumericalInconsistency(
                "no order k >= 1 passes the Wronskian test; curve is not horizontally regular"
                    .into(),
            ))
        }
    };
    let mut tr = true;
    for jet in &jets {
        let sub = HorizontalJet {
            beta_derivs: jet.beta_derivs[..order].to_vec(),
            tau: jet.tau,
        };
        if !totally_real(&sub, tol) {
            tr = false;
            break;
        }
    }
    Ok(OrderReport {
        order,
        margins,
        totally_real: tr,
        nondegenerate: order == n && tr,
    })
}

/// Result of moving a degenerate curve into the subgroup `H_k × {0}`.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub symmetry: Symmetry,
    pub curve: SampledCurve,
    /// sup norm of the rotated-out complex coordinates
    pub residual: f64,
}

/// Extend Hermitian-orthonormal complex columns to a full unitary matrix.
fn extend_to_unitary(n: usize, cols: &[DVector<Complex64>]) -> DMatrix<Complex64> {
    let mut basis: Vec<DVector<Complex64>> = cols.to_vec();
    for j in 0..n {
        if basis.len() == n {
            break;
        }
        let mut w = DVector::from_fn(n, |i, _| {
            if i == j {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        for b in &basis {
            let proj = b.dotc(&w);
            w -= b * proj;
        }
        let norm = w.norm();
        if norm > 0.5 {
            w /= Complex64::new(norm, 0.0);
            basis.push(w);
        }
    }
    assert_eq!(basis.len(), n, "unitary extension must complete");
    DMatrix::from_fn(n, n, |i, j| basis[j][i])
}

/// Build the symmetry of Prop-style reduction: left-translate γ(0) to the
/// origin, then rotate the order-k osculating span onto ℂ^k ⊂ ℂ^n. For a
/// curve of exact order k the transformed curve has its last n−k complex
/// coordinates ≡ 0.
pub fn reduce_degenerate(c: &SampledCurve, order: usize, tol: f64) -> Result<Reduction> {
    let n = c.n();
    if order >= n {
        return Err(Error::InvalidArgument(format!(
            "reduction applies to degenerate curves; order {order} is not below n = {n}"
        )));
    }
    let jet = c.derivatives_at(0, order)?;
    let frame = orthonormalize_hermitian(&jet.real_derivs(), tol)?;
    let eps: Vec<DVector<Complex64>> = frame.iter().map(to_complex_vec).collect();
    let u = extend_to_unitary(n, &eps);
    // U† sends the osculating columns to the first k standard basis vectors
    let rotation = realify(&u.adjoint());
    let rot_sym = Symmetry::new(rotation, HPoint::origin(n))?;
    let translate = Symmetry::from_translation(group_inv(c.point(0)));
    let phi = rot_sym.compose(&translate)?;
    let transformed = c.transform(&phi)?;
    let mut residual = 0.0f64;
    for p in transformed.points() {
        for j in order..n {
            residual = residual.max(p.x()[j].abs()).max(p.y()[j].abs());
        }
    }
    if residual > REDUCTION_TOL {
        return Err(Error::Misclassification { residual, tol: REDUCTION_TOL });
    }
    Ok(Reduction { symmetry: phi, curve: transformed, residual })
}
