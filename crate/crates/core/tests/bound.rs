mod common;

use holocurve::bound::{
    harvest_tie_points, preprocess_zeros, prop1_check, prop4_bound, theorem_constant, verify_theorem, DEFAULT_EPSILON,
    TAIL_FRACTION, TAIL_SLACK,
};
use holocurve::characteristic::characteristic_area;
use holocurve::curve::{CurveComponent, HolomorphicCurve};
use holocurve::poly::ComplexPoly;
use holocurve::Error;
use num_complex::Complex64;

use common::{fixture, geometric, GALLERY};

#[test]
fn gallery_passes_every_check() {
    let grid = geometric(1.0, 50.0, 16);
    for name in GALLERY {
        let f = fixture(name);
        let report = verify_theorem(&f, &grid, DEFAULT_EPSILON);
        assert!(report.errors.is_empty(), "{name}: {:?}", report.errors);
        assert!(report.verdicts.all(), "{name}: {:?}", report.verdicts);
        assert_eq!(report.characteristic.len(), grid.len());
    }
}

#[test]
fn report_is_consistent_with_its_inputs() {
    let grid = geometric(1.0, 50.0, 16);
    for name in GALLERY {
        let f = fixture(name);
        let r = verify_theorem(&f, &grid, DEFAULT_EPSILON);
        let n = f.n() as f64;
        let ceiling = 3.0 * 4f64.powf(f.sigma()) * r.k * (n + 1.0);
        assert!((r.c0_ceiling - ceiling).abs() <= 1e-12 * ceiling.max(1.0), "{name}");
        assert_eq!(r.b_ceiling, f.sigma());
        assert_eq!(r.theorem_constant, theorem_constant(f.n(), f.sigma(), DEFAULT_EPSILON));
        if let Some(k) = f.k() {
            assert_eq!(r.k, k);
            assert_eq!(r.k_source, "declared");
        } else {
            assert_eq!(r.k_source, "estimated");
        }
        for row in &r.characteristic {
            let bound = r.k * r.theorem_constant * row.r.powf(f.sigma() + 1.0);
            assert!((row.bound - bound).abs() <= 1e-12 * bound.max(1.0));
            assert!(
                (row.prop4_bound - prop4_bound(f.n(), f.sigma(), r.k, row.r)).abs() <= 1e-12 * row.prop4_bound.max(1.0)
            );
        }
    }
}

#[test]
fn tail_domination_by_the_area_route() {
    // independent of the Jensen values stored in the report
    let grid = geometric(1.0, 50.0, 16);
    let tail = ((1.0 - TAIL_FRACTION) * grid.len() as f64).floor() as usize;
    for name in GALLERY {
        let f = fixture(name);
        let r = verify_theorem(&f, &grid, DEFAULT_EPSILON);
        for row in &r.characteristic[tail..] {
            let t = characteristic_area(&f, row.r, 1e-8).unwrap();
            assert!(
                t <= row.bound * (1.0 + TAIL_SLACK),
                "{name} r={}: {t} > {}",
                row.r,
                row.bound
            );
        }
    }
}

#[test]
fn theorem_constant_values() {
    assert!((theorem_constant(1, 0.0, 0.01) - 28.02).abs() < 1e-12);
    assert!((theorem_constant(1, 0.0, 0.01) - (24.0 + 2.0 * 2.01)).abs() < 1e-12);
    // n = 2, sigma = 1: 6 * 4 * 2 * 9 / 2 + 2.01^2 * 3
    assert!((theorem_constant(2, 1.0, 0.01) - (216.0 + 3.0 * 2.01 * 2.01)).abs() < 1e-10);
    assert_eq!(prop4_bound(1, 0.0, 1.0, 2.0), 48.0);
}

#[test]
fn theorem_constant_is_increasing() {
    for &sigma in &[0.0, 0.5, 1.0, 2.5] {
        for n in 1..10 {
            assert!(theorem_constant(n + 1, sigma, 0.01) > theorem_constant(n, sigma, 0.01));
        }
    }
    for n in 1..6 {
        let mut prev = theorem_constant(n, 0.0, 0.01);
        for i in 1..20 {
            let c = theorem_constant(n, 0.25 * i as f64, 0.01);
            assert!(c > prev, "n={n}");
            prev = c;
        }
    }
}

#[test]
fn gradient_gap_at_harvested_ties() {
    for name in GALLERY {
        let f = fixture(name);
        let ties = harvest_tie_points(&f, &[1.0, 3.0, 10.0], 8, 0.5, 10.0);
        let points: Vec<Complex64> = ties.iter().map(|t| t.z).collect();
        let out = prop1_check(&f, &points).unwrap();
        assert!(out.ok, "{name}: {out:?}");
        assert_eq!(out.points, points.len());
        for t in &ties {
            let lm = f.component_log_moduli(t.z);
            let gap = (lm.u[t.m] - lm.u[t.k]).abs();
            assert!(gap <= 1e-8 * (1.0 + lm.full_max.abs()), "{name} tie at {}: {gap}", t.z);
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn zero_preprocessing() {
    let z = ComplexPoly::new(vec![c(0.0, 0.0), c(1.0, 0.0)]);
    // f0 with zeros is left alone
    let lin = HolomorphicCurve::new(vec![CurveComponent::Poly(z.clone()), CurveComponent::one()], 0.0, None).unwrap();
    assert_eq!(preprocess_zeros(&lin, c(1.0, 0.0)).unwrap(), lin);
    // f0 = f1 = e^z: c = -1 kills f0, c = 1 leaves 2 e^z which is zero-free
    let pair = HolomorphicCurve::new(
        vec![
            CurveComponent::ExpPoly(z.clone()),
            CurveComponent::ExpPoly(z.clone()),
            CurveComponent::one(),
        ],
        0.0,
        None,
    )
    .unwrap();
    assert!(matches!(
        preprocess_zeros(&pair, c(-1.0, 0.0)),
        Err(Error::Validation(_))
    ));
    assert!(matches!(
        preprocess_zeros(&pair, c(1.0, 0.0)),
        Err(Error::Unsupported(_))
    ));
}

#[test]
fn jump_asymptotics_of_normalized_example() {
    // (g, e^z, e^{-z}) times e^z, with g = z: exponent difference 2z
    let z = ComplexPoly::from_real(&[0.0, 1.0]);
    let f = HolomorphicCurve::new(
        vec![
            CurveComponent::PolyExp {
                factor: z.clone(),
                exponent: z.clone(),
            },
            CurveComponent::ExpPoly(ComplexPoly::from_real(&[0.0, 2.0])),
            CurveComponent::one(),
        ],
        0.0,
        None,
    )
    .unwrap();
    let r = verify_theorem(&f, &geometric(1.0, 30.0, 12), DEFAULT_EPSILON);
    assert_eq!(r.b, Some(0.0));
    assert!((r.c0 - 1.0 / std::f64::consts::PI).abs() < 1e-12, "{}", r.c0);
    assert!((r.c0_ceiling - 9.0 * r.k).abs() < 1e-12);
    assert!(r.k >= 1.0 / (9.0 * std::f64::consts::PI));
    assert!(r.verdicts.prop3, "{r:?}");
}
