//! Closed-form horizontal geodesics of `H_n`: unit-speed curves with
//! constant p-curvature κ₁ = −2λ, zero contact normality, and order 1.
//! Used both as a generator and as the ground-truth oracle family.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::curve::SampledCurve;
use crate::error::{Error, Result};
use crate::heis::HPoint;

/// Threshold below which the trigonometric forms switch to their series
/// limits in λ.
const SMALL_LAMBDA: f64 = 1e-6;

/// Initial data of a horizontal geodesic: base point, vertical offset, and
/// unit horizontal velocity (A, B).
#[derive(Debug, Clone)]
pub struct GeodesicSpec {
    pub n: usize,
    pub lambda: f64,
    pub x0: DVector<f64>,
    pub y0: DVector<f64>,
    pub t0: f64,
    pub a: DVector<f64>,
    pub b: DVector<f64>,
}

impl GeodesicSpec {
    pub fn new(
        n: usize,
        lambda: f64,
        x0: DVector<f64>,
        y0: DVector<f64>,
        t0: f64,
        a: DVector<f64>,
        b: DVector<f64>,
    ) -> Result<Self> {
        for v in [&x0, &y0, &a, &b] {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: v.len() });
            }
        }
        let speed2 = a.norm_squared() + b.norm_squared();
        if (speed2 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "initial horizontal velocity must be unit: Σ(A² + B²) = {speed2}"
            )));
        }
        Ok(GeodesicSpec { n, lambda, x0, y0, t0, a, b })
    }

    /// Canonical representative: start at the origin with velocity e̊₁.
    pub fn canonical(n: usize, lambda: f64) -> Self {
        let mut a = DVector::zeros(n);
        a[0] = 1.0;
        GeodesicSpec {
            n,
            lambda,
            x0: DVector::zeros(n),
            y0: DVector::zeros(n),
            t0: 0.0,
            a,
            b: DVector::zeros(n),
        }
    }

    /// sin(2λs)/(2λ), with the series limit near λ = 0.
    fn sigma(&self, s: f64) -> f64 {
        let l = self.lambda;
        if l.abs() < SMALL_LAMBDA {
            let l2 = (2.0 * l) * (2.0 * l);
            s - l2 * s.powi(3) / 6.0 + l2 * l2 * s.powi(5) / 120.0
        } else {
            (2.0 * l * s).sin() / (2.0 * l)
        }
    }

    /// (1 − cos(2λs))/(2λ), with the series limit near λ = 0.
    fn versine(&self, s: f64) -> f64 {
        let l = self.lambda;
        if l.abs() < SMALL_LAMBDA {
            l * s * s - l.powi(3) * s.powi(4) / 3.0 + 2.0 / 45.0 * l.powi(5) * s.powi(6)
        } else {
            (1.0 - (2.0 * l * s).cos()) / (2.0 * l)
        }
    }

    /// (1/2λ)(s − sin(2λs)/(2λ)), with the series limit near λ = 0.
    fn vertical(&self, s: f64) -> f64 {
        let l = self.lambda;
        if l.abs() < SMALL_LAMBDA {
            l * s.powi(3) / 3.0 - l.powi(3) * s.powi(5) / 15.0 + 2.0 / 315.0 * l.powi(5) * s.powi(7)
        } else {
            (s - self.sigma(s)) / (2.0 * l)
        }
    }

    /// The point γ(s).
    pub fn point(&self, s: f64) -> HPoint {
        let sg = self.sigma(s);
        let v = self.versine(s);
        let n = self.n;
        let mut coords = vec![0.0; 2 * n + 1];
        let mut z = self.t0 + self.vertical(s);
        for j in 0..n {
            coords[j] = self.x0[j] + self.a[j] * sg + self.b[j] * v;
            coords[n + j] = self.y0[j] - self.a[j] * v + self.b[j] * sg;
            z += (self.a[j] * self.x0[j] + self.b[j] * self.y0[j]) * v
                - (self.b[j] * self.x0[j] - self.a[j] * self.y0[j]) * sg;
        }
        coords[2 * n] = z;
        HPoint::from_coords(&coords).expect("geodesic coordinates")
    }

    /// Analytic β′(s) = (A + iB) e^{−2iλs}.
    pub fn beta_prime(&self, s: f64) -> DVector<Complex64> {
        let phase = Complex64::from_polar(1.0, -2.0 * self.lambda * s);
        DVector::from_fn(self.n, |j, _| Complex64::new(self.a[j], self.b[j]) * phase)
    }

    /// Analytic β″(s) = −2iλ β′(s).
    pub fn beta_second(&self, s: f64) -> DVector<Complex64> {
        self.beta_prime(s) * Complex64::new(0.0, -2.0 * self.lambda)
    }
}

/// Sample a geodesic on a uniform arc-length grid.
pub fn geodesic_curve(spec: &GeodesicSpec, s_grid: &[f64]) -> Result<SampledCurve> {
    let points: Vec<HPoint> = s_grid.iter().map(|s| spec.point(*s)).collect();
    SampledCurve::new(spec.n, s_grid.to_vec(), points, true)
}
