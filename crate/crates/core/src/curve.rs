//! Sampled curves in `H_n`: derivative jets of the horizontal projection β,
//! the ξ/T decomposition of velocities, horizontal-regularity testing, and
//! reparametrization by horizontal arc length.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::heis::{HPoint, Symmetry, TangentVector};
use crate::numerics::{cumulative_integral, fd_weights, linspace, strided_stencil, to_real_vec, Pchip};

/// Default absolute tolerance on |β′| for horizontal regularity.
pub const DEFAULT_REGULARITY_TOL: f64 = 1e-8;

/// Minimum number of samples: enough support for the interior stencils plus
/// one-sided boundaries.
pub const MIN_SAMPLES: usize = 9;

/// A curve γ: I → H_n sampled on a strictly increasing parameter grid.
#[derive(Debug, Clone)]
pub struct SampledCurve {
    n: usize,
    params: Vec<f64>,
    points: Vec<HPoint>,
    is_arclength: bool,
    /// coordinate arrays, one per dimension (x₁…x_n, y₁…y_n, z)
    coords: Vec<Vec<f64>>,
}

/// Derivatives β′…β^{(k)} of the horizontal projection at one parameter
/// value, together with the T-coefficient τ of the velocity.
#[derive(Debug, Clone)]
pub struct HorizontalJet {
    pub beta_derivs: Vec<DVector<Complex64>>,
    pub tau: f64,
}

impl HorizontalJet {
    pub fn order(&self) -> usize {
        self.beta_derivs.len()
    }

    /// The real 2n-vector images of β^{(1)}…β^{(k)}.
    pub fn real_derivs(&self) -> Vec<DVector<f64>> {
        self.beta_derivs.iter().map(to_real_vec).collect()
    }
}

impl SampledCurve {
    pub fn new(n: usize, params: Vec<f64>, points: Vec<HPoint>, is_arclength: bool) -> Result<Self> {
        if params.len() != points.len() {
            return Err(Error::InvalidArgument(format!(
                "{} params but {} points",
                params.len(),
                points.len()
            )));
        }
        if params.len() < MIN_SAMPLES {
            return Err(Error::InvalidArgument(format!(
                "need at least {MIN_SAMPLES} samples, got {}",
                params.len()
            )));
        }
        for w in params.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::InvalidArgument("params must be strictly increasing".into()));
            }
        }
        for p in &points {
            if p.n() != n {
                return Err(Error::DimensionMismatch { expected: n, got: p.n() });
            }
        }
        if is_arclength {
            let h0 = params[1] - params[0];
            for w in params.windows(2) {
                if ((w[1] - w[0]) - h0).abs() > 1e-12 * h0.abs().max(1.0) {
                    return Err(Error::InvalidArgument(
                        "arc-length curves require a uniform parameter grid".into(),
                    ));
                }
            }
        }
        let dim = 2 * n + 1;
        let mut coords = vec![Vec::with_capacity(points.len()); dim];
        for p in &points {
            for (d, c) in p.coords().into_iter().enumerate() {
                coords[d].push(c);
            }
        }
        Ok(SampledCurve { n, params, points, is_arclength, coords })
    }

    /// Sample an analytic curve `f: t -> coordinates` on `grid`.
    pub fn from_fn(n: usize, grid: &[f64], f: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        let points = grid
            .iter()
            .map(|t| HPoint::from_coords(&f(*t)))
            .collect::<Result<Vec<_>>>()?;
        SampledCurve::new(n, grid.to_vec(), points, false)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn len(&self) -> usize {
        self.params.len()
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn params(&self) -> &[f64] {
        &self.params
    }
    pub fn points(&self) -> &[HPoint] {
        &self.points
    }
    pub fn point(&self, i: usize) -> &HPoint {
        &self.points[i]
    }
    pub fn is_arclength(&self) -> bool {
        self.is_arclength
    }
    pub fn coord_array(&self, dim: usize) -> &[f64] {
        &self.coords[dim]
    }

    pub fn with_arclength_flag(mut self, flag: bool) -> Self {
        self.is_arclength = flag;
        self
    }

    /// Coordinate derivatives at grid index `i`, derivative order `m`, of
    /// the left-translated curve `γ(s_i)⁻¹ ∘ γ`. The translated window stays
    /// O(h) near the origin, which removes most of the cancellation error of
    /// differencing O(1) coordinates; β-derivatives are unchanged by the
    /// translation, and the z-derivative becomes θ(γ′) directly when m = 1.
    fn coord_derivative(&self, i: usize, m: usize) -> Vec<f64> {
        let idx = strided_stencil(self.params.len(), i, m);
        let nodes: Vec<f64> = idx.iter().map(|&j| self.params[j]).collect();
        let w = fd_weights(&nodes, self.params[i], m);
        let p = &self.points[i];
        let n = self.n;
        let mut out = vec![0.0; 2 * n + 1];
        for (wi, t) in w.iter().zip(idx) {
            let q = &self.points[t];
            let mut zq = q.z() - p.z();
            for j in 0..n {
                out[j] += wi * (q.x()[j] - p.x()[j]);
                out[n + j] += wi * (q.y()[j] - p.y()[j]);
                zq += p.x()[j] * q.y()[j] - p.y()[j] * q.x()[j];
            }
            out[2 * n] += wi * zq;
        }
        out
    }

    /// Finite-difference estimates of β′…β^{(k)} and τ at grid index `i`.
    pub fn derivatives_at(&self, i: usize, k: usize) -> Result<HorizontalJet> {
        let npts = self.params.len();
        if k == 0 || k > 6.min(npts - 1) {
            return Err(Error::InvalidArgument(format!(
                "derivative order {k} out of range for a grid of {npts} samples"
            )));
        }
        let mut beta_derivs = Vec::with_capacity(k);
        let mut tau = 0.0;
        for m in 1..=k {
            let d = self.coord_derivative(i, m);
            beta_derivs.push(DVector::from_fn(self.n, |j, _| Complex64::new(d[j], d[self.n + j])));
            if m == 1 {
                tau = d[2 * self.n];
            }
        }
        Ok(HorizontalJet { beta_derivs, tau })
    }

    /// Velocity split into the contact-plane coefficients and the
    /// T-coefficient τ.
    pub fn velocity_decomposition(&self, i: usize) -> TangentVector {
        let d = self.coord_derivative(i, 1);
        let xi = DVector::from_column_slice(&d[..2 * self.n]);
        TangentVector {
            base: self.points[i].clone(),
            xi_coeffs: xi,
            t_coeff: d[2 * self.n],
        }
    }

    /// |β′| at every grid point.
    pub fn horizontal_speeds(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                let d = self.coord_derivative(i, 1);
                d[..2 * self.n].iter().map(|v| v * v).sum::<f64>().sqrt()
            })
            .collect()
    }

    pub fn min_horizontal_speed(&self) -> f64 {
        self.horizontal_speeds().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn is_horizontally_regular(&self, tol: f64) -> bool {
        self.min_horizontal_speed() > tol
    }

    /// Reparametrize by horizontal arc length: `m_samples` uniform values of
    /// s(t) = ∫ |β′| dt, with monotone cubic inversion and interpolation.
    pub fn arclength_reparametrize(&self, m_samples: usize) -> Result<SampledCurve> {
        if !self.is_horizontally_regular(DEFAULT_REGULARITY_TOL) {
            return Err(Error::NotHorizontallyRegular {
                min_speed: self.min_horizontal_speed(),
                tol: DEFAULT_REGULARITY_TOL,
            });
        }
        if m_samples < MIN_SAMPLES {
            return Err(Error::InvalidArgument(format!(
                "need at least {MIN_SAMPLES} output samples"
            )));
        }
        let speeds = self.horizontal_speeds();
        let s_nodes = cumulative_integral(&self.params, &speeds);
        let total = *s_nodes.last().unwrap();
        let t_of_s = Pchip::new(&s_nodes, &self.params);
        let s_grid = linspace(0.0, total, m_samples);
        let interpolants: Vec<Pchip> = self
            .coords
            .iter()
            .map(|arr| Pchip::new(&self.params, arr))
            .collect();
        let points = s_grid
            .iter()
            .map(|s| {
                let t = t_of_s.eval(*s);
                let coords: Vec<f64> = interpolants.iter().map(|p| p.eval(t)).collect();
                HPoint::from_coords(&coords)
            })
            .collect::<Result<Vec<_>>>()?;
        SampledCurve::new(self.n, s_grid, points, true)
    }

    /// Apply a rigid motion pointwise.
    pub fn transform(&self, phi: &Symmetry) -> Result<SampledCurve> {
        let points = self
            .points
            .iter()
            .map(|p| phi.apply(p))
            .collect::<Result<Vec<_>>>()?;
        SampledCurve::new(self.n, self.params.clone(), points, self.is_arclength)
    }

    /// Keep the first `k` complex coordinates (and z), producing a curve in
    /// `H_k`. The dropped coordinates are returned as their sup norm, so the
    /// caller can check the curve actually lay in the subgroup.
    pub fn project_to_subgroup(&self, k: usize) -> Result<(SampledCurve, f64)> {
        if k == 0 || k >= self.n {
            return Err(Error::InvalidArgument(format!(
                "subgroup dimension {k} must be in 1..{}",
                self.n
            )));
        }
        let mut residual = 0.0f64;
        let points = self
            .points
            .iter()
            .map(|p| {
                for j in k..self.n {
                    residual = residual.max(p.x()[j].abs()).max(p.y()[j].abs());
                }
                let mut coords = Vec::with_capacity(2 * k + 1);
                coords.extend(p.x().iter().take(k));
                coords.extend(p.y().iter().take(k));
                coords.push(p.z());
                HPoint::from_coords(&coords)
            })
            .collect::<Result<Vec<_>>>()?;
        let c = SampledCurve::new(k, self.params.clone(), points, self.is_arclength)?;
        Ok((c, residual))
    }

    /// Embed into `H_m` (m > n) by zero-padding the extra complex coordinates.
    pub fn embed_in(&self, m: usize) -> Result<SampledCurve> {
        if m <= self.n {
            return Err(Error::InvalidArgument(format!("embedding target {m} must exceed {}", self.n)));
        }
        let points = self
            .points
            .iter()
            .map(|p| {
                let mut coords = vec![0.0; 2 * m + 1];
                for j in 0..self.n {
                    coords[j] = p.x()[j];
                    coords[m + j] = p.y()[j];
                }
                coords[2 * m] = p.z();
                HPoint::from_coords(&coords)
            })
            .collect::<Result<Vec<_>>>()?;
        SampledCurve::new(m, self.params.clone(), points, self.is_arclength)
    }
}
