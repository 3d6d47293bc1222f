use momentkit::basis::{order_set, Family, MethodSpec};
use momentkit::engine::{decompose, Interp, Mapping, MomentSet, Rule, Scheme, Strategy};
use momentkit::harness::accuracy_scheme;
use momentkit::image::synthetic;
use momentkit::invariants::{
    flusser_invariant, magnitude_features, nn_classify, rotate_image, rotate_moments, FlusserRecipe,
};
use momentkit::Complex64;
use proptest::prelude::*;

#[test]
fn quarter_turns_are_recognised_exactly() {
    let gallery = synthetic::gallery(6, 48, 11).unwrap();
    for family in Family::ALL {
        let method = MethodSpec::new(family).unwrap();
        let scheme = Scheme::default_for(&method, 6);
        let features = |img: &momentkit::image::Image| magnitude_features(&decompose(img, &method, 6, &scheme).unwrap());
        let entries: Vec<(String, _)> = gallery.iter().map(|(l, img)| (l.clone(), features(img))).collect();
        for (label, img) in &gallery {
            for angle in [90.0, 180.0, 270.0] {
                let rotated = rotate_image(img, angle, Interp::Bilinear).unwrap();
                let q = features(&rotated);
                assert_eq!(nn_classify(&q, &entries).unwrap(), label, "{family} {angle}");
                let base = &entries.iter().find(|(l, _)| l == label).unwrap().1;
                assert!(q.distance(base).unwrap() <= 1e-12 * base.norm(), "{family} {angle}");
            }
        }
    }
}

#[test]
fn arbitrary_rotations_keep_features_close() {
    let image = synthetic::photo_like(128, 21).unwrap();
    for family in Family::ALL {
        let method = MethodSpec::new(family).unwrap();
        let scheme = accuracy_scheme(&method);
        for k in [5, 10, 20] {
            let base = magnitude_features(&decompose(&image, &method, k, &scheme).unwrap());
            for angle in [10.0, 37.0, 135.0, 301.0] {
                let rotated = rotate_image(&image, angle, Interp::Bilinear).unwrap();
                let v = magnitude_features(&decompose(&rotated, &method, k, &scheme).unwrap());
                let rel = v.distance(&base).unwrap() / base.norm();
                assert!(rel < 0.05, "{family} K={k} {angle}: {rel}");
            }
        }
    }
}

fn synthetic_moments(values: Vec<(f64, f64)>) -> MomentSet {
    let method = MethodSpec::new(Family::Pzm).unwrap();
    let k = 5;
    let n = order_set(&method, k).len();
    let v: Vec<Complex64> = values.into_iter().take(n).map(|(a, b)| Complex64::new(a, b)).collect();
    let scheme = Scheme::new(Mapping::Incircle, Rule::Zoa, Strategy::Naive);
    MomentSet::from_values(method, k, scheme, 16, v).unwrap()
}

proptest! {
    #[test]
    fn flusser_products_are_rotation_invariant(
        values in prop::collection::vec((0.1f64..2.0, -2.0f64..2.0), 36),
        phi in -7.0f64..7.0,
        n1 in 1i32..=5, n2 in 1i32..=5, n3 in 0i32..=5,
        p in 1i32..=3, q in 1i32..=3,
    ) {
        // m1 * p = m2 * q with m1 = q and m2 = p.
        let (m1, m2) = (q.min(n1), p.min(n2));
        prop_assume!(m1 * p == m2 * q);
        let recipe = FlusserRecipe::new(&[(n1, m1, p), (n2, -m2, q), (n3, 0, 1)]).unwrap();
        let ms = synthetic_moments(values);
        let before = flusser_invariant(&ms, &recipe).unwrap();
        let after = flusser_invariant(&rotate_moments(&ms, phi), &recipe).unwrap();
        prop_assert!((before - after).norm() <= 1e-12 * before.norm().max(1.0));
    }

    #[test]
    fn magnitudes_ignore_phase(values in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 36), phi in -7.0f64..7.0) {
        let ms = synthetic_moments(values);
        let a = magnitude_features(&ms);
        let b = magnitude_features(&rotate_moments(&ms, phi));
        for (x, y) in a.values.iter().zip(&b.values) {
            prop_assert!((x - y).abs() <= 1e-15 * x.max(1.0));
        }
    }
}
