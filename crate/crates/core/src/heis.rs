//! The ambient geometry: Heisenberg group operations, the contact/CR
//! structure with its Levi metric, and the rigid-motion group `PSH(n)` with
//! its (2n+2)×(2n+2) matrix representation.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{j0_apply, j0_matrix, max_abs, project_unitary, realify};

/// Tolerance for group membership of rotation blocks.
pub const ROTATION_TOL: f64 = 1e-12;

/// A point of `H_n ≅ ℝ^{2n+1}` with coordinates (x₁…x_n, y₁…y_n, z).
#[derive(Debug, Clone, PartialEq)]
pub struct HPoint {
    n: usize,
    x: DVector<f64>,
    y: DVector<f64>,
    z: f64,
}

impl HPoint {
    pub fn new(x: DVector<f64>, y: DVector<f64>, z: f64) -> Result<Self> {
        if x.len() != y.len() || x.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "x and y must be nonempty of equal length, got {} and {}",
                x.len(),
                y.len()
            )));
        }
        Ok(HPoint { n: x.len(), x, y, z })
    }

    pub fn origin(n: usize) -> Self {
        HPoint {
            n,
            x: DVector::zeros(n),
            y: DVector::zeros(n),
            z: 0.0,
        }
    }

    /// Build from flat coordinates (x₁…x_n, y₁…y_n, z).
    pub fn from_coords(coords: &[f64]) -> Result<Self> {
        if coords.len() < 3 || coords.len() % 2 == 0 {
            return Err(Error::InvalidArgument(format!(
                "coordinate vector length must be odd and >= 3, got {}",
                coords.len()
            )));
        }
        let n = coords.len() / 2;
        Ok(HPoint {
            n,
            x: DVector::from_column_slice(&coords[..n]),
            y: DVector::from_column_slice(&coords[n..2 * n]),
            z: coords[2 * n],
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn x(&self) -> &DVector<f64> {
        &self.x
    }
    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }
    pub fn z(&self) -> f64 {
        self.z
    }

    /// Flat coordinates (x₁…x_n, y₁…y_n, z).
    pub fn coords(&self) -> Vec<f64> {
        let mut c = Vec::with_capacity(2 * self.n + 1);
        c.extend(self.x.iter());
        c.extend(self.y.iter());
        c.push(self.z);
        c
    }

    /// The horizontal part (x, y) as a stacked 2n-vector.
    pub fn xy(&self) -> DVector<f64> {
        let mut v = DVector::zeros(2 * self.n);
        v.rows_mut(0, self.n).copy_from(&self.x);
        v.rows_mut(self.n, self.n).copy_from(&self.y);
        v
    }

    /// The horizontal part as a complex n-vector β = x + iy.
    pub fn beta(&self) -> DVector<Complex64> {
        DVector::from_fn(self.n, |j, _| Complex64::new(self.x[j], self.y[j]))
    }

    pub fn dist_sup(&self, other: &HPoint) -> f64 {
        self.coords()
            .iter()
            .zip(other.coords())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Group multiplication: the z-component picks up the symplectic cross term
/// Σ (y_j x̃_j − x_j ỹ_j).
pub fn group_mul(p: &HPoint, q: &HPoint) -> Result<HPoint> {
    if p.n != q.n {
        return Err(Error::DimensionMismatch { expected: p.n, got: q.n });
    }
    let cross: f64 = (0..p.n).map(|j| p.y[j] * q.x[j] - p.x[j] * q.y[j]).sum();
    Ok(HPoint {
        n: p.n,
        x: &p.x + &q.x,
        y: &p.y + &q.y,
        z: p.z + q.z + cross,
    })
}

/// Group inverse: coordinate negation.
pub fn group_inv(p: &HPoint) -> HPoint {
    HPoint {
        n: p.n,
        x: -&p.x,
        y: -&p.y,
        z: -p.z,
    }
}

/// A tangent vector in the left-invariant frame: coefficients of e̊₁…e̊_{2n}
/// plus a T-coefficient, at a base point.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub base: HPoint,
    pub xi_coeffs: DVector<f64>,
    pub t_coeff: f64,
}

impl TangentVector {
    pub fn new(base: HPoint, xi_coeffs: DVector<f64>, t_coeff: f64) -> Result<Self> {
        if xi_coeffs.len() != 2 * base.n() {
            return Err(Error::InvalidArgument(format!(
                "xi_coeffs must have length {}, got {}",
                2 * base.n(),
                xi_coeffs.len()
            )));
        }
        Ok(TangentVector { base, xi_coeffs, t_coeff })
    }
}

/// The CR structure J on the contact plane: e̊_j ↦ e̊_{n+j}, e̊_{n+j} ↦ −e̊_j.
/// Only defined on horizontal vectors.
pub fn j_apply(v: &TangentVector) -> Result<TangentVector> {
    if v.t_coeff != 0.0 {
        return Err(Error::InvalidArgument(
            "J acts on the contact plane only; t_coeff must be zero".into(),
        ));
    }
    Ok(TangentVector {
        base: v.base.clone(),
        xi_coeffs: j0_apply(&v.xi_coeffs),
        t_coeff: 0.0,
    })
}

/// The Levi metric, making {e̊_a, T} orthonormal.
pub fn levi_inner(u: &TangentVector, v: &TangentVector) -> Result<f64> {
    if u.base != v.base {
        return Err(Error::InvalidArgument("levi_inner requires a common base point".into()));
    }
    Ok(u.xi_coeffs.dot(&v.xi_coeffs) + u.t_coeff * v.t_coeff)
}

/// The contact form θ = dz + Σ (x_j dy_j − y_j dx_j) on a coordinate vector
/// (dx, dy, dz) at `base`; equals the T-coefficient of the frame
/// decomposition of the vector.
pub fn contact_theta(base: &HPoint, d: &[f64]) -> Result<f64> {
    let n = base.n();
    if d.len() != 2 * n + 1 {
        return Err(Error::InvalidArgument(format!(
            "coordinate vector must have length {}, got {}",
            2 * n + 1,
            d.len()
        )));
    }
    let mut theta = d[2 * n];
    for j in 0..n {
        theta += base.x[j] * d[n + j] - base.y[j] * d[j];
    }
    Ok(theta)
}

/// A rigid motion of `H_n`: a unitary rotation of the contact plane followed
/// by a left translation, Φ(q) = p ∘ (R·q̂, z_q).
#[derive(Debug, Clone)]
pub struct Symmetry {
    n: usize,
    rotation: DMatrix<f64>,
    translation: HPoint,
}

impl Symmetry {
    /// Construct from a rotation block and a translation. The rotation is
    /// polar-projected onto the J₀-commuting orthogonal group; construction
    /// fails if the input is further than 1e−6 from the group.
    pub fn new(rotation: DMatrix<f64>, translation: HPoint) -> Result<Self> {
        let n = translation.n();
        if rotation.nrows() != 2 * n || rotation.ncols() != 2 * n {
            return Err(Error::DimensionMismatch { expected: 2 * n, got: rotation.nrows() });
        }
        let projected = project_unitary(&rotation);
        if max_abs(&(&projected - &rotation)) > 1e-6 {
            return Err(Error::InvalidArgument(
                "rotation block is not close to a unitary (J-commuting orthogonal) matrix".into(),
            ));
        }
        Ok(Symmetry { n, rotation: projected, translation })
    }

    pub fn identity(n: usize) -> Self {
        Symmetry {
            n,
            rotation: DMatrix::identity(2 * n, 2 * n),
            translation: HPoint::origin(n),
        }
    }

    pub fn from_translation(p: HPoint) -> Self {
        let n = p.n();
        Symmetry {
            n,
            rotation: DMatrix::identity(2 * n, 2 * n),
            translation: p,
        }
    }

    /// From a complex unitary acting on β = x + iy (no translation).
    pub fn from_unitary(u: &DMatrix<Complex64>) -> Result<Self> {
        let n = u.nrows();
        if u.ncols() != n {
            return Err(Error::InvalidArgument("unitary must be square".into()));
        }
        Symmetry::new(realify(u), HPoint::origin(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn rotation(&self) -> &DMatrix<f64> {
        &self.rotation
    }
    pub fn translation(&self) -> &HPoint {
        &self.translation
    }

    /// Φ(q) = p ∘ (R·q̂, z_q).
    pub fn apply(&self, q: &HPoint) -> Result<HPoint> {
        if self.n != q.n() {
            return Err(Error::DimensionMismatch { expected: self.n, got: q.n() });
        }
        let rq = &self.rotation * q.xy();
        let rotated = HPoint {
            n: self.n,
            x: rq.rows(0, self.n).into_owned(),
            y: rq.rows(self.n, self.n).into_owned(),
            z: q.z,
        };
        group_mul(&self.translation, &rotated)
    }

    /// Composition: (Φ₁ ∘ Φ₂)(q) = Φ₁(Φ₂(q)).
    pub fn compose(&self, other: &Symmetry) -> Result<Symmetry> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        let translation = self.apply(&other.translation)?;
        Ok(Symmetry {
            n: self.n,
            rotation: &self.rotation * &other.rotation,
            translation,
        })
    }

    pub fn inverse(&self) -> Symmetry {
        let rt = self.rotation.transpose();
        let p_inv = group_inv(&self.translation);
        let rp = &rt * p_inv.xy();
        Symmetry {
            n: self.n,
            rotation: rt,
            translation: HPoint {
                n: self.n,
                x: rp.rows(0, self.n).into_owned(),
                y: rp.rows(self.n, self.n).into_owned(),
                z: p_inv.z,
            },
        }
    }

    /// The (2n+2)×(2n+2) matrix M with M·(1; q) = (1; Φ(q)).
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let n = self.n;
        let dim = 2 * n + 2;
        let mut m = DMatrix::zeros(dim, dim);
        m[(0, 0)] = 1.0;
        let p = &self.translation;
        for a in 0..2 * n {
            m[(1 + a, 0)] = p.xy()[a];
            for b in 0..2 * n {
                m[(1 + a, 1 + b)] = self.rotation[(a, b)];
            }
        }
        m[(dim - 1, 0)] = p.z;
        // last row: (y_pᵀ, −x_pᵀ) R in the frame columns
        let mut w = DVector::zeros(2 * n);
        w.rows_mut(0, n).copy_from(&p.y);
        w.rows_mut(n, n).copy_from(&(-&p.x));
        let row = w.transpose() * &self.rotation;
        for b in 0..2 * n {
            m[(dim - 1, 1 + b)] = row[b];
        }
        m[(dim - 1, dim - 1)] = 1.0;
        m
    }

    /// Reconstruct a symmetry from its matrix image, validating the block
    /// structure against [`Symmetry::to_matrix`].
    pub fn from_matrix(m: &DMatrix<f64>, tol: f64) -> Result<Symmetry> {
        let dim = m.nrows();
        if dim < 4 || dim % 2 != 0 || m.ncols() != dim {
            return Err(Error::InvalidArgument(format!("bad symmetry matrix shape {dim}x{}", m.ncols())));
        }
        let n = (dim - 2) / 2;
        let rotation = m.view((1, 1), (2 * n, 2 * n)).into_owned();
        let mut coords = Vec::with_capacity(2 * n + 1);
        for a in 0..2 * n {
            coords.push(m[(1 + a, 0)]);
        }
        coords.push(m[(dim - 1, 0)]);
        let translation = HPoint::from_coords(&coords)?;
        let sym = Symmetry::new(rotation, translation)?;
        let residual = max_abs(&(sym.to_matrix() - m));
        if residual > tol {
            return Err(Error::NumericalInconsistency(format!(
                "matrix is not a symmetry matrix: reconstruction residual {residual:.3e}"
            )));
        }
        Ok(sym)
    }

    /// Residuals of the group-membership invariants:
    /// (‖RᵀR − I‖∞, ‖RJ₀ − J₀R‖∞).
    pub fn rotation_residuals(&self) -> (f64, f64) {
        let n = self.n;
        let gram = self.rotation.transpose() * &self.rotation;
        let ortho = max_abs(&(gram - DMatrix::identity(2 * n, 2 * n)));
        let j0 = j0_matrix(n);
        let comm = max_abs(&(&self.rotation * &j0 - &j0 * &self.rotation));
        (ortho, comm)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dvector;

    fn pt(coords: &[f64]) -> HPoint {
        HPoint::from_coords(coords).unwrap()
    }

    #[test]
    fn group_law_hand_example() {
        // (1,0,0) ∘ (0,1,0) = (1,1,−1) in H_1
        let p = pt(&[1.0, 0.0, 0.0]);
        let q = pt(&[0.0, 1.0, 0.0]);
        let r = group_mul(&p, &q).unwrap();
        assert_eq!(r.coords(), vec![1.0, 1.0, -1.0]);
    }

    #[test]
    fn identity_and_inverse() {
        let p = pt(&[0.3, -1.2, 0.7, 0.1, 2.0]);
        let o = HPoint::origin(2);
        assert_eq!(group_mul(&o, &p).unwrap(), p);
        assert_eq!(group_mul(&p, &o).unwrap(), p);
        let q = group_inv(&p);
        assert!(group_mul(&p, &q).unwrap().dist_sup(&o) == 0.0);
        assert!(group_mul(&q, &p).unwrap().dist_sup(&o) == 0.0);
        assert_eq!(group_inv(&pt(&[1.0, 2.0, 3.0])).coords(), vec![-1.0, -2.0, -3.0]);
    }

    #[test]
    fn associativity_random_triples() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for n in 1..=3usize {
            for _ in 0..1000 {
                let rand_pt = |next: &mut dyn FnMut() -> f64| {
                    let coords: Vec<f64> = (0..2 * n + 1).map(|_| next()).collect();
                    HPoint::from_coords(&coords).unwrap()
                };
                let a = rand_pt(&mut next);
                let b = rand_pt(&mut next);
                let c = rand_pt(&mut next);
                let lhs = group_mul(&group_mul(&a, &b).unwrap(), &c).unwrap();
                let rhs = group_mul(&a, &group_mul(&b, &c).unwrap()).unwrap();
                assert!(lhs.dist_sup(&rhs) <= 1e-12);
            }
        }
    }

    #[test]
    fn j_on_frame_vectors() {
        let base = HPoint::origin(1);
        let e1 = TangentVector::new(base.clone(), dvector![1.0, 0.0], 0.0).unwrap();
        let je1 = j_apply(&e1).unwrap();
        assert_eq!(je1.xi_coeffs, dvector![0.0, 1.0]);
        let e2 = TangentVector::new(base.clone(), dvector![0.0, 1.0], 0.0).unwrap();
        let je2 = j_apply(&e2).unwrap();
        assert_eq!(je2.xi_coeffs, dvector![-1.0, 0.0]);
        // J² = −Id
        let v = TangentVector::new(HPoint::origin(2), dvector![0.1, -0.4, 2.0, 0.5], 0.0).unwrap();
        let jjv = j_apply(&j_apply(&v).unwrap()).unwrap();
        assert!((jjv.xi_coeffs + &v.xi_coeffs).abs().max() < 1e-15);
    }

    #[test]
    fn j_rejects_vertical_vectors() {
        let v = TangentVector::new(HPoint::origin(1), dvector![1.0, 0.0], 0.5).unwrap();
        assert!(j_apply(&v).is_err());
    }

    #[test]
    fn levi_inner_orthonormal_and_j_compatible() {
        let base = HPoint::origin(2);
        let e1 = TangentVector::new(base.clone(), dvector![1.0, 0.0, 0.0, 0.0], 0.0).unwrap();
        let e3 = TangentVector::new(base.clone(), dvector![0.0, 0.0, 1.0, 0.0], 0.0).unwrap();
        assert_eq!(levi_inner(&e1, &e1).unwrap(), 1.0);
        assert_eq!(levi_inner(&e1, &e3).unwrap(), 0.0);
        let u = TangentVector::new(base.clone(), dvector![0.3, -0.2, 1.1, 0.4], 0.0).unwrap();
        let v = TangentVector::new(base.clone(), dvector![-0.5, 0.9, 0.2, -1.3], 0.0).unwrap();
        let lhs = levi_inner(&j_apply(&u).unwrap(), &j_apply(&v).unwrap()).unwrap();
        let rhs = levi_inner(&u, &v).unwrap();
        assert!((lhs - rhs).abs() < 1e-15);
    }

    #[test]
    fn contact_theta_examples() {
        let o = HPoint::origin(2);
        assert_eq!(contact_theta(&o, &[1.0, 0.0, 0.0, 0.0, 0.0]).unwrap(), 0.0);
        // at (x,y,z)=(0,1,0) in H_1, θ(∂x) = −y = −1
        let p = pt(&[0.0, 1.0, 0.0]);
        assert_eq!(contact_theta(&p, &[1.0, 0.0, 0.0]).unwrap(), -1.0);
        // θ annihilates the left-invariant horizontal frame at any base point:
        // e̊_j has coordinate components (dx_j, 0, y_j), e̊_{n+j} has (0, dy_j, −x_j)
        let q = pt(&[0.4, -0.3, 1.2, 0.8, 5.0]);
        let e1 = [1.0, 0.0, 0.0, 0.0, q.y()[0]];
        let e4 = [0.0, 0.0, 0.0, 1.0, -q.x()[1]];
        assert!(contact_theta(&q, &e1).unwrap().abs() < 1e-15);
        assert!(contact_theta(&q, &e4).unwrap().abs() < 1e-15);
    }

    #[test]
    fn symmetry_apply_identity_translation_rotation() {
        let p = pt(&[0.5, -0.25, 1.5]);
        let id = Symmetry::identity(1);
        assert_eq!(id.apply(&p).unwrap(), p);

        let q = pt(&[1.0, 2.0, -0.5]);
        let tr = Symmetry::from_translation(q.clone());
        assert_eq!(tr.apply(&p).unwrap(), group_mul(&q, &p).unwrap());

        let theta: f64 = 1.1;
        let rot = realify(&DMatrix::from_row_slice(1, 1, &[Complex64::from_polar(1.0, theta)]));
        let r = Symmetry::new(rot, HPoint::origin(1)).unwrap();
        assert!(r.apply(&HPoint::origin(1)).unwrap().dist_sup(&HPoint::origin(1)) < 1e-15);
    }

    #[test]
    fn matrix_action_matches_apply() {
        let theta: f64 = 0.4;
        let rot = realify(&DMatrix::from_row_slice(1, 1, &[Complex64::from_polar(1.0, theta)]));
        let phi = Symmetry::new(rot, pt(&[0.7, -0.2, 0.9])).unwrap();
        let q = pt(&[0.1, 0.6, -1.4]);
        let m = phi.to_matrix();
        let mut xq = DVector::zeros(4);
        xq[0] = 1.0;
        for (k, c) in q.coords().iter().enumerate() {
            xq[1 + k] = *c;
        }
        let img = m * xq;
        let direct = phi.apply(&q).unwrap();
        assert!((img[0] - 1.0).abs() < 1e-15);
        for (k, c) in direct.coords().iter().enumerate() {
            assert!((img[1 + k] - c).abs() < 1e-13);
        }
    }

    #[test]
    fn matrix_of_translation_by_e1() {
        let phi = Symmetry::from_translation(pt(&[1.0, 0.0, 0.0]));
        let m = phi.to_matrix();
        assert_eq!(m.column(0).as_slice(), &[1.0, 1.0, 0.0, 0.0]);
        assert_eq!(m.row(3).transpose().as_slice(), &[0.0, 0.0, -1.0, 1.0]);
    }

    #[test]
    fn matrix_homomorphism() {
        let u1 = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8),
            Complex64::new(0.0, 0.8), Complex64::new(0.6, 0.0),
        ]);
        let phi1 = Symmetry::new(realify(&u1), pt(&[0.1, 0.2, 0.3, 0.4, 0.5])).unwrap();
        let theta: f64 = -0.9;
        let u2 = DMatrix::from_diagonal(&dvector![
            Complex64::from_polar(1.0, theta),
            Complex64::from_polar(1.0, 2.0 * theta)
        ]);
        let phi2 = Symmetry::new(realify(&u2), pt(&[-1.0, 0.5, 0.0, 1.5, -0.7])).unwrap();
        let lhs = phi1.compose(&phi2).unwrap().to_matrix();
        let rhs = phi1.to_matrix() * phi2.to_matrix();
        assert!(max_abs(&(lhs - rhs)) <= 1e-12);
    }

    #[test]
    fn inverse_composes_to_identity() {
        let theta: f64 = 0.3;
        let rot = realify(&DMatrix::from_row_slice(1, 1, &[Complex64::from_polar(1.0, theta)]));
        let phi = Symmetry::new(rot, pt(&[0.7, -0.2, 0.9])).unwrap();
        let id = phi.compose(&phi.inverse()).unwrap().to_matrix();
        assert!(max_abs(&(id - DMatrix::identity(4, 4))) < 1e-14);
    }

    #[test]
    fn rotation_invariants_after_construction() {
        // a slightly perturbed unitary gets projected back onto the group
        let mut rot = realify(&DMatrix::from_row_slice(1, 1, &[Complex64::from_polar(1.0, 0.2)]));
        rot[(0, 1)] += 1e-7;
        let phi = Symmetry::new(rot, HPoint::origin(1)).unwrap();
        let (ortho, comm) = phi.rotation_residuals();
        assert!(ortho <= ROTATION_TOL && comm <= ROTATION_TOL);
    }

    #[test]
    fn maurer_cartan_block_pattern_at_identity() {
        // finite differences of to_matrix along one-parameter subgroups
        // through the identity: zero top row, skew J-commuting 2n-block,
        // last row (ω^{2n+1}, ω^{n+j}, −ω^j, 0).
        let n = 2;
        let h = 1e-6;
        let j0 = j0_matrix(n);
        // translation directions and a rotation direction
        let mut dirs: Vec<Box<dyn Fn(f64) -> Symmetry>> = Vec::new();
        for a in 0..2 * n + 1 {
            dirs.push(Box::new(move |t: f64| {
                let mut coords = vec![0.0; 2 * n + 1];
                coords[a] = t;
                Symmetry::from_translation(HPoint::from_coords(&coords).unwrap())
            }));
        }
        dirs.push(Box::new(move |t: f64| {
            let u = DMatrix::from_diagonal(&dvector![
                Complex64::from_polar(1.0, t),
                Complex64::from_polar(1.0, -0.5 * t)
            ]);
            Symmetry::from_unitary(&u).unwrap()
        }));
        for dir in &dirs {
            let omega = (dir(h).to_matrix() - dir(-h).to_matrix()) / (2.0 * h);
            // top row zero, last column zero
            for c in 0..2 * n + 2 {
                assert!(omega[(0, c)].abs() < 1e-9);
                assert!(omega[(c, 2 * n + 1)].abs() < 1e-9);
            }
            let block = omega.view((1, 1), (2 * n, 2 * n)).into_owned();
            assert!(max_abs(&(&block + block.transpose())) < 1e-9, "skew block");
            assert!(max_abs(&(&block * &j0 - &j0 * &block)) < 1e-9, "J-commuting block");
            // last row: entries over frame columns are (ω^{n+j}, −ω^j)
            for j in 0..n {
                let w_j = omega[(1 + j, 0)];
                let w_nj = omega[(1 + n + j, 0)];
                assert!((omega[(2 * n + 1, 1 + j)] - w_nj).abs() < 1e-9);
                assert!((omega[(2 * n + 1, 1 + n + j)] + w_j).abs() < 1e-9);
            }
        }
    }
}
