//! Randomized invariants of the algebraic core: group axioms, the matrix
//! representation, rank-margin monotonicity, and monotone interpolation.

use heiscurve::classify::wronskian_margin;
use heiscurve::curve::HorizontalJet;
use heiscurve::heis::{group_inv, group_mul, HPoint, Symmetry};
use heiscurve::numerics::{max_abs, Pchip};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::collection::vec;
use proptest::prelude::*;

fn point(n: usize, coords: &[f64]) -> HPoint {
    HPoint::from_coords(&coords[..2 * n + 1]).unwrap()
}

fn unitary(n: usize, entries: &[f64]) -> DMatrix<Complex64> {
    let m = DMatrix::from_fn(n, n, |i, j| {
        Complex64::new(entries[2 * (i * n + j)], entries[2 * (i * n + j) + 1])
    });
    m.qr().q()
}

proptest! {
    #[test]
    fn group_axioms(
        n in 1usize..4,
        a in vec(-10.0..10.0f64, 7),
        b in vec(-10.0..10.0f64, 7),
        c in vec(-10.0..10.0f64, 7),
    ) {
        let (p, q, r) = (point(n, &a), point(n, &b), point(n, &c));
        let left = group_mul(&group_mul(&p, &q).unwrap(), &r).unwrap();
        let right = group_mul(&p, &group_mul(&q, &r).unwrap()).unwrap();
        prop_assert!(left.dist_sup(&right) < 1e-9);
        let e = group_mul(&p, &group_inv(&p)).unwrap();
        prop_assert!(e.dist_sup(&HPoint::origin(n)) < 1e-9);
    }

    #[test]
    fn symmetry_matrix_representation_is_a_homomorphism(
        n in 1usize..4,
        ua in vec(-1.0..1.0f64, 18),
        ub in vec(-1.0..1.0f64, 18),
        ta in vec(-2.0..2.0f64, 7),
        tb in vec(-2.0..2.0f64, 7),
    ) {
        let a = Symmetry::from_translation(point(n, &ta))
            .compose(&Symmetry::from_unitary(&unitary(n, &ua)).unwrap())
            .unwrap();
        let b = Symmetry::from_translation(point(n, &tb))
            .compose(&Symmetry::from_unitary(&unitary(n, &ub)).unwrap())
            .unwrap();
        let composed = a.compose(&b).unwrap().to_matrix();
        let product = a.to_matrix() * b.to_matrix();
        prop_assert!(max_abs(&(composed - product)) < 1e-10);
        // apply() agrees with the matrix action on (1; q)
        let q = point(n, &tb);
        let mut col = vec![1.0];
        col.extend(q.coords());
        let image = a.to_matrix() * DVector::from_vec(col);
        let applied = a.apply(&q).unwrap();
        let via_matrix: Vec<f64> = image.iter().skip(1).copied().collect();
        prop_assert!(applied.dist_sup(&HPoint::from_coords(&via_matrix).unwrap()) < 1e-10);
    }

    #[test]
    fn wronskian_margins_never_increase_with_order(
        n in 1usize..4,
        entries in vec(-5.0..5.0f64, 18),
    ) {
        let derivs: Vec<DVector<Complex64>> = (0..3)
            .map(|k| {
                DVector::from_fn(n, |j, _| {
                    Complex64::new(entries[6 * k + 2 * j], entries[6 * k + 2 * j + 1])
                })
            })
            .collect();
        let jet = HorizontalJet { beta_derivs: derivs, tau: 0.0 };
        let mut last = f64::INFINITY;
        for k in 1..=3usize.min(n) {
            let margin = wronskian_margin(&jet, k);
            prop_assert!(margin <= last + 1e-12);
            last = margin;
        }
    }

    #[test]
    fn pchip_stays_within_data_range(
        mut ys in vec(0.0..1.0f64, 12),
        t in 0.0..1.0f64,
    ) {
        // strictly increasing data via cumulative sums
        let mut acc = 0.0;
        for y in ys.iter_mut() {
            acc += *y + 1e-3;
            *y = acc;
        }
        let xs: Vec<f64> = (0..12).map(|i| i as f64 / 11.0).collect();
        let p = Pchip::new(&xs, &ys);
        let v = p.eval(t);
        prop_assert!(v >= ys[0] - 1e-12 && v <= ys[11] + 1e-12);
    }
}
