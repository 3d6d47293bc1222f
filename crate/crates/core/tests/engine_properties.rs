mod common;

use momentkit::basis::{Family, MethodSpec};
use momentkit::engine::{
    decompose, decompose_fft, decompose_polar_direct, reconstruct, reconstruct_field, with_threads, Mapping, Rule,
    Scheme, Strategy as Sum,
};
use momentkit::image::{synthetic, Image};
use momentkit::metrics::msre_on;
use proptest::prelude::*;

fn image_strategy() -> impl Strategy<Value = Image> {
    prop_oneof![Just(8usize), Just(12), Just(16)]
        .prop_flat_map(|n| prop::collection::vec(0.0f64..=1.0, n * n).prop_map(move |px| Image::new(n, px).unwrap()))
}

fn family_strategy() -> impl Strategy<Value = MethodSpec> {
    prop::sample::select(Family::ALL.to_vec()).prop_map(|f| MethodSpec::new(f).unwrap())
}

fn schemes(method: &MethodSpec) -> Vec<Scheme> {
    let mut out = vec![
        Scheme::default_for(method, 0),
        Scheme::new(Mapping::Incircle, Rule::Zoa, Sum::Naive),
        Scheme::new(Mapping::Incircle, Rule::Upsample(2), Sum::Symmetric).with_strict(true),
        Scheme::new(Mapping::Circumcircle, Rule::Gauss(2), Sum::Recursive),
        Scheme::new(Mapping::Polar, Rule::Gauss(3), Sum::Recursive).with_rings(5),
    ];
    if method.family().is_harmonic() {
        out.push(Scheme::new(Mapping::Polar, Rule::default(), Sum::Fft).with_fft_size(20));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hermitian_symmetry(image in image_strategy(), method in family_strategy()) {
        prop_assume!(!method.family().has_complex_radial());
        for scheme in schemes(&method) {
            let ms = decompose(&image, &method, 4, &scheme).unwrap();
            for (idx, v) in ms.iter() {
                if let Some(w) = ms.get(idx.n, -idx.m) {
                    prop_assert!((v - w.conj()).norm() < 1e-12, "{} {} {:?}", method.label(), scheme.label(), idx);
                }
            }
        }
    }

    #[test]
    fn linearity(f in image_strategy(), seed in 0u64..1000, a in 0.0f64..0.5, b in 0.0f64..0.5, method in family_strategy()) {
        let g = synthetic::photo_like(f.size(), seed).unwrap();
        let h = f.blend(a, &g, b).unwrap();
        for scheme in schemes(&method) {
            let mf = decompose(&f, &method, 3, &scheme).unwrap();
            let mg = decompose(&g, &method, 3, &scheme).unwrap();
            let mh = decompose(&h, &method, 3, &scheme).unwrap();
            for ((x, y), z) in mf.values().iter().zip(mg.values()).zip(mh.values()) {
                prop_assert!((x * a + y * b - z).norm() < 1e-12, "{} {}", method.label(), scheme.label());
            }
        }
    }

    #[test]
    fn energy_grows_with_order(image in image_strategy(), method in family_strategy()) {
        // The default FFT grid grows with K; the trend is over one sampling.
        let scheme = Scheme::default_for(&method, 0).with_fft_size(24);
        let mut last = 0.0;
        for k in 0..=5 {
            let e = decompose(&image, &method, k, &scheme).unwrap().energy();
            prop_assert!(e >= last, "{} K={k}: {e} < {last}", method.label());
            last = e;
        }
    }

    #[test]
    fn symmetric_matches_naive(image in image_strategy(), method in family_strategy(), strict in any::<bool>()) {
        let naive = Scheme::new(Mapping::Incircle, Rule::Upsample(2), Sum::Naive).with_strict(strict);
        let sym = Scheme { strategy: Sum::Symmetric, ..naive };
        let a = decompose(&image, &method, 5, &naive).unwrap();
        let b = decompose(&image, &method, 5, &sym).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((x - y).norm() <= 1e-10 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn fft_matches_direct_polar(image in image_strategy(), family in prop::sample::select(vec![
        Family::Rhfm, Family::Efm, Family::Pcet, Family::Pct, Family::Pst, Family::Grhfm, Family::Gpcet, Family::Gpct, Family::Gpst,
    ]), alpha in 0.5f64..3.0) {
        let method = if family.is_fractional() { MethodSpec::fractional(family, alpha).unwrap() } else { MethodSpec::new(family).unwrap() };
        let a = decompose_fft(&image, &method, 6, 24).unwrap();
        let b = decompose_polar_direct(&image, &method, 6, 24).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((x - y).norm() <= 1e-6);
        }
    }
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let image = synthetic::photo_like(24, 3).unwrap();
    for family in Family::ALL {
        let method = MethodSpec::new(family).unwrap();
        for scheme in schemes(&method) {
            let one = with_threads(1, || decompose(&image, &method, 6, &scheme)).unwrap().unwrap();
            let three = with_threads(3, || decompose(&image, &method, 6, &scheme)).unwrap().unwrap();
            let again = with_threads(3, || decompose(&image, &method, 6, &scheme)).unwrap().unwrap();
            assert_eq!(one, three, "{family} {}", scheme.label());
            assert_eq!(three, again);
        }
    }
}

#[test]
fn empty_order_set_reconstructs_to_zero() {
    let image = synthetic::photo_like(16, 1).unwrap();
    let pst = MethodSpec::new(Family::Pst).unwrap();
    let ms = decompose(&image, &pst, 0, &Scheme::default_for(&pst, 0)).unwrap();
    assert!(ms.is_empty());
    assert!(reconstruct_field(&ms, 16).unwrap().iter().all(|&v| v == 0.0));
}

#[test]
fn low_order_unity_reconstruction() {
    let zm = MethodSpec::new(Family::Zm).unwrap();
    let scheme = Scheme::new(Mapping::Incircle, Rule::Upsample(3), Sum::Recursive).with_strict(true);
    let unity = synthetic::unity(64).unwrap();
    let ms = decompose(&unity, &zm, 2, &scheme).unwrap();
    let rec = reconstruct(&ms, 64).unwrap();
    let err = msre_on(&unity, &rec, scheme.mapping).unwrap();
    assert!(err < 1e-4, "{err:e}");
}

#[test]
fn rejects_bad_requests() {
    let image = synthetic::unity(9).unwrap();
    let zm = MethodSpec::new(Family::Zm).unwrap();
    let sym = Scheme::new(Mapping::Incircle, Rule::Zoa, Sum::Symmetric);
    assert!(decompose(&image, &zm, 3, &sym).is_err());
    let fft = Scheme::new(Mapping::Polar, Rule::Zoa, Sum::Fft);
    assert!(decompose(&image, &zm, 3, &fft).is_err());
    let pcet = MethodSpec::new(Family::Pcet).unwrap();
    assert!(decompose_fft(&image, &pcet, 10, 12).is_err());
}
