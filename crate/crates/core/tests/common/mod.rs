//! Shared helpers for the integration suites: seeded RNG and random
//! rigid motions.

use heiscurve::{HPoint, Symmetry};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random unitary via QR of a complex matrix with uniform entries.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    m.qr().q()
}

/// Random element of PSH(n): left translation composed with a unitary
/// rotation.
pub fn random_symmetry(n: usize, rng: &mut ChaCha8Rng) -> Symmetry {
    let rot = Symmetry::from_unitary(&random_unitary(n, rng)).expect("unitary rotation");
    let coords: Vec<f64> = (0..2 * n + 1).map(|_| 2.0 * rng.gen::<f64>() - 1.0).collect();
    let trans = Symmetry::from_translation(HPoint::from_coords(&coords).expect("point"));
    trans.compose(&rot).expect("composition")
}

/// Print the standard one-line verdict and fail the test on a violation.
pub fn verdict(id: usize, name: &str, pass: bool) {
    println!("ACCEPTANCE {id} ({name}): {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "acceptance criterion {id} ({name}) failed");
}
