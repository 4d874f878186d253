use holocurve::characteristic::{characteristic_area, characteristic_jensen};
use holocurve::curve::{spherical_derivative_of, CurveComponent, HolomorphicCurve};
use holocurve::lemmas::{green_disc, verify_lemma1, verify_lemma2, Disc, DiscHarmonic, DiscSuperharmonic};
use holocurve::locus::count_branch_bound;
use holocurve::poly::ComplexPoly;
use num_complex::Complex64;
use proptest::prelude::*;

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn poly(max_deg: usize) -> impl Strategy<Value = ComplexPoly> {
    prop::collection::vec(coeff(), 0..=max_deg + 1).prop_map(ComplexPoly::new)
}

fn first_component(max_deg: usize) -> impl Strategy<Value = CurveComponent> {
    prop_oneof![
        poly(3).prop_map(CurveComponent::Poly),
        poly(max_deg).prop_map(CurveComponent::ExpPoly),
        (poly(3), poly(max_deg)).prop_map(|(factor, exponent)| CurveComponent::PolyExp { factor, exponent }),
    ]
}

fn curve() -> impl Strategy<Value = HolomorphicCurve> {
    (1..=3usize, 0..3usize)
        .prop_flat_map(|(n, si)| {
            let sigma = [0.0, 0.5, 1.0][si];
            let deg = (2.0 * sigma + 2.0) as usize;
            (
                Just(sigma),
                first_component(deg),
                prop::collection::vec(poly(deg).prop_map(CurveComponent::ExpPoly), n - 1),
            )
        })
        .prop_map(|(sigma, f0, middle)| {
            let mut comps = vec![f0];
            comps.extend(middle);
            comps.push(CurveComponent::one());
            HolomorphicCurve::new(comps, sigma, None).expect("generated curve is valid")
        })
}

fn point(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..radius, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn log_norm_is_nonnegative(f in curve(), z in point(4.0)) {
        prop_assert!(f.log_norm_u(z) >= 0.0);
    }

    #[test]
    fn log_norm_sandwich(f in curve(), z in point(4.0)) {
        let lm = f.component_log_moduli(z);
        let gap = f.log_norm_u(z) - lm.full_max;
        let ceiling = 0.5 * ((f.n() + 1) as f64).ln();
        prop_assert!(gap >= -1e-12 && gap <= ceiling + 1e-12, "gap {gap} ceiling {ceiling}");
    }

    #[test]
    fn spherical_derivative_ignores_common_factor(f in curve(), g in poly(3), z in point(3.0)) {
        let scaled: Vec<CurveComponent> = f.components().iter().map(|c| c.times_exp(&g)).collect();
        let a = f.spherical_derivative(z);
        let b = spherical_derivative_of(&scaled, z);
        // when ||f'|| = 0 the scaled form cancels terms of size |g'|
        let floor = 1e-15 * (1.0 + g.derivative().eval(z).norm());
        prop_assert!(rel_close(a, b, 1e-12) || (a - b).abs() <= floor, "{a} vs {b}");
    }

    #[test]
    fn spherical_derivative_ignores_order(f in curve(), z in point(3.0), rot in 0usize..4) {
        let mut comps = f.components().to_vec();
        comps.reverse();
        let k = rot % comps.len();
        comps.rotate_left(k);
        let a = f.spherical_derivative(z);
        let b = spherical_derivative_of(&comps, z);
        prop_assert!(rel_close(a, b, 1e-12), "{a} vs {b}");
    }

    #[test]
    fn characteristic_is_monotone(f in curve(), r1 in 0.1..2.0f64, dr in 0.01..1.5f64) {
        let r2 = r1 + dr;
        let j1 = characteristic_jensen(&f, r1, 1e-10).unwrap();
        let j2 = characteristic_jensen(&f, r2, 1e-10).unwrap();
        prop_assert!(j1 <= j2 + 1e-9, "Jensen {j1} > {j2}");
        let a1 = characteristic_area(&f, r1, 1e-10).unwrap();
        let a2 = characteristic_area(&f, r2, 1e-10).unwrap();
        prop_assert!(a1 <= a2 + 1e-9, "area {a1} > {a2}");
    }

    #[test]
    fn green_kernel_symmetric_nonnegative(z in point(0.99), zeta in point(0.99)) {
        prop_assume!((z - zeta).norm() > 1e-6);
        let g1 = green_disc(z, zeta).unwrap();
        let g2 = green_disc(zeta, z).unwrap();
        prop_assert!(g1 >= 0.0);
        prop_assert!((g1 - g2).abs() <= 1e-12 * g1.max(1.0));
        let edge = Complex64::from_polar(1.0, z.arg());
        prop_assert!(green_disc(edge, zeta).unwrap() <= 1e-12);
    }
}

/// `|w'| / (1 + |w|^2)` evaluated straight from the formulas for `w = f_0`.
fn classical(f0: &CurveComponent, z: Complex64) -> f64 {
    let (w, dw) = match f0 {
        CurveComponent::Poly(q) => q.eval_with_derivative(z),
        CurveComponent::ExpPoly(p) => {
            let (v, d) = p.eval_with_derivative(z);
            (v.exp(), d * v.exp())
        }
        CurveComponent::PolyExp { factor, exponent } => {
            let (q, dq) = factor.eval_with_derivative(z);
            let (p, dp) = exponent.eval_with_derivative(z);
            (q * p.exp(), (dq + q * dp) * p.exp())
        }
    };
    dw.norm() / (1.0 + w.norm_sqr())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn one_dimensional_formula(f0 in first_component(2), z in point(3.0)) {
        let f = HolomorphicCurve::new(vec![f0.clone(), CurveComponent::one()], 0.0, None).unwrap();
        let a = f.spherical_derivative(z);
        let b = classical(&f0, z);
        prop_assert!(rel_close(a, b, 1e-12) || (a - b).abs() < 1e-300, "{a} vs {b}");
    }
}

fn tuple(sigma: f64) -> impl Strategy<Value = Vec<ComplexPoly>> {
    let deg = (2.0 * sigma + 2.0).floor() as usize;
    prop::collection::vec(poly(deg), 1..=5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn branch_count_bound((sigma, polys) in (0usize..3).prop_flat_map(|si| {
        let sigma = [0.0, 0.5, 1.0][si];
        (Just(sigma), tuple(sigma))
    })) {
        let c = count_branch_bound(&polys, sigma);
        prop_assert!(c.ok, "{c:?} for {polys:?}");
    }

    #[test]
    fn lemma_checks_are_affine_covariant(
        center in point(5.0),
        radius in 0.2..5.0f64,
        theta in 0.0..std::f64::consts::TAU,
        q in poly(4),
        rho in 0.0..0.9f64,
        phi in 0.0..std::f64::consts::TAU,
    ) {
        let disc = Disc { center, radius };
        let kernel = DiscHarmonic::poisson_kernel(disc, theta + 1.0, 1.0 + rho);
        let z1 = disc.to_global(Complex64::from_polar(1.0, theta));
        let direct = verify_lemma1(&kernel, z1).unwrap().margin;
        let mapped = verify_lemma1(&kernel.to_unit_disc(), Complex64::from_polar(1.0, theta)).unwrap().margin;
        prop_assert!((direct - mapped).abs() <= 1e-9 * direct.abs().max(1.0));

        // superharmonic with a polynomial harmonic part vanishing at z1
        let shift = q.eval(z1);
        let harmonic_poly = &q - &ComplexPoly::constant(Complex64::new(shift.re, 0.0));
        let h = DiscHarmonic::real_part_poly(disc, harmonic_poly, 0.0);
        let atom = disc.to_global(Complex64::from_polar(rho, phi));
        prop_assume!((rho - 0.5).abs() > 1e-3);
        let v = DiscSuperharmonic::new(vec![(atom, 1.0)], h).unwrap();
        let direct = verify_lemma2(&v, z1).unwrap();
        let mapped = verify_lemma2(&v.to_unit_disc(), Complex64::from_polar(1.0, theta)).unwrap();
        prop_assert!((direct.margin - mapped.margin).abs() <= 1e-9 * direct.rhs.abs().max(1.0));
    }
}
