//! Nevanlinna-Cartan characteristic by two independent routes, the Riesz
//! counting function, and the characteristic of the reduced curve.
//!
//! * Jensen route: circle mean of `u = log ||f||` minus `u(0)`.
//! * Area route: `T(r) = int_0^r n(t)/t dt` with
//!   `n(t) = (1/pi) int_{|z|<=t} ||f'||^2 dm`. Swapping the order of
//!   integration gives `T(r) = int_0^r 2 s log(r/s) A(s) ds` where `A(s)` is
//!   the angular mean of `||f'||^2` on `|z| = s`; it is evaluated after the
//!   substitution `s = r x^2`, which makes the integrand `C^2` at the origin.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::curve::HolomorphicCurve;
use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::quadrature::{adaptive_gauss_legendre, periodic_mean};

pub const DEFAULT_TOL: f64 = 1e-8;
/// Allowed `|T_area - T_jensen|` in cross-checks.
pub const CROSS_CHECK_TOL: f64 = 1e-6;

/// Inner (angular) tolerance relative to the outer radial one.
const INNER_TOL_FACTOR: f64 = 1e-2;

fn check_radius(op: &str, r: f64, tol: f64) -> Result<()> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Input(format!("{op}: radius must be positive, got {r}")));
    }
    if !(tol > 0.0) {
        return Err(Error::Input(format!("{op}: tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// Angular mean of `||f'||^2` on `|z| = s`.
pub fn angular_mean_fs2(curve: &HolomorphicCurve, s: f64, tol: f64) -> Result<f64> {
    if s == 0.0 {
        let d = curve.spherical_derivative(Complex64::new(0.0, 0.0));
        return Ok(d * d);
    }
    let q = periodic_mean(
        "spherical derivative angular mean",
        |t| curve.spherical_derivative(Complex64::from_polar(s, t)).powi(2),
        tol,
        curve.angular_nodes(s),
    )?;
    Ok(q.value)
}

/// `T(r)` as a circle average of `u` minus `u(0)`.
///
/// No zero-correction term is needed when `f_0(0) = 0`: `u` itself is
/// averaged and `u(0) >= 0` is finite because `f_n = 1`.
pub fn characteristic_jensen(curve: &HolomorphicCurve, r: f64, tol: f64) -> Result<f64> {
    check_radius("characteristic_jensen", r, tol)?;
    let q = periodic_mean(
        "characteristic_jensen",
        |t| curve.log_norm_u(Complex64::from_polar(r, t)),
        tol,
        curve.angular_nodes(r),
    )?;
    Ok(q.value - curve.log_norm_u(Complex64::new(0.0, 0.0)))
}

/// `T(r)` as the logarithmic area integral of `||f'||^2`.
pub fn characteristic_area(curve: &HolomorphicCurve, r: f64, tol: f64) -> Result<f64> {
    check_radius("characteristic_area", r, tol)?;
    if curve.is_constant() {
        return Ok(0.0);
    }
    let inner_tol = tol * INNER_TOL_FACTOR;
    let failure = std::cell::Cell::new(None::<Error>);
    let integrand = |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        match angular_mean_fs2(curve, r * x * x, inner_tol) {
            Ok(a) => 8.0 * r * r * x.powi(3) * (-x.ln()) * a,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    let q = adaptive_gauss_legendre("characteristic_area", integrand, 0.0, 1.0, tol, 1e-300, 4)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(q.value)
}

/// Riesz (Cartan) mass of `|z| <= t`: `(1/pi) int_{|z|<=t} ||f'||^2 dm`.
pub fn counting_function(curve: &HolomorphicCurve, t: f64, tol: f64) -> Result<f64> {
    check_radius("counting_function", t, tol)?;
    if curve.is_constant() {
        return Ok(0.0);
    }
    let inner_tol = tol * INNER_TOL_FACTOR;
    let failure = std::cell::Cell::new(None::<Error>);
    let integrand = |x: f64| match angular_mean_fs2(curve, t * x, inner_tol) {
        Ok(a) => 2.0 * t * t * x * a,
        Err(e) => {
            failure.set(Some(e));
            0.0
        }
    };
    let q = adaptive_gauss_legendre("counting_function", integrand, 0.0, 1.0, tol, 1e-300, 4)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(q.value)
}

/// `u*(z) = max_j Re P_j(z)`.
pub fn max_real_part(polys: &[ComplexPoly], z: Complex64) -> f64 {
    polys.iter().map(|p| p.eval(z).re).fold(f64::NEG_INFINITY, f64::max)
}

/// Angles in `[0, 2 pi)` where `Re (P_i - P_j)(r e^{i theta})` changes sign,
/// over all pairs: the candidate kinks of `u*` on the circle.
pub fn circle_kinks(polys: &[ComplexPoly], r: f64) -> Vec<f64> {
    let mut kinks = Vec::new();
    for i in 0..polys.len() {
        for j in (i + 1)..polys.len() {
            let diff = &polys[i] - &polys[j];
            let Some(d) = diff.degree() else { continue };
            if d == 0 {
                continue;
            }
            kinks.extend(diff.scan_real_part_zeros(r, 4 * d + 16));
        }
    }
    kinks.sort_by(f64::total_cmp);
    kinks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    kinks
}

/// Characteristic of the reduced curve given its exponents:
/// circle mean of `max_j Re P_j` minus its value at 0, integrated arc by arc
/// between kinks.
pub fn reduced_characteristic_of(polys: &[ComplexPoly], r: f64, tol: f64) -> Result<f64> {
    check_radius("reduced_characteristic", r, tol)?;
    if polys.is_empty() {
        return Err(Error::Input("reduced_characteristic needs n >= 1".into()));
    }
    let ustar = |t: f64| max_real_part(polys, Complex64::from_polar(r, t));
    let mut breaks = vec![0.0];
    breaks.extend(circle_kinks(polys, r).into_iter().filter(|&t| t > 0.0));
    breaks.push(2.0 * PI);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    // scale for the absolute floor: typical size of u* on the circle
    let scale = polys
        .iter()
        .flat_map(|p| p.coeffs().iter().enumerate().map(|(k, c)| c.norm() * r.powi(k as i32)))
        .fold(1.0, f64::max);
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let q = adaptive_gauss_legendre(
            "reduced_characteristic",
            ustar,
            w[0],
            w[1],
            tol,
            tol * scale * (w[1] - w[0]),
            1,
        )?;
        total += q.value;
    }
    Ok(total / (2.0 * PI) - max_real_part(polys, Complex64::new(0.0, 0.0)))
}

pub fn reduced_characteristic(curve: &HolomorphicCurve, r: f64, tol: f64) -> Result<f64> {
    reduced_characteristic_of(&curve.reduced_exponents(), r, tol)
}

/// `nu(t) ~ (T*(t(1+h)) - T*(t(1-h))) / (2h)`, the Riesz mass of `u*` in
/// `|z| <= t` recovered from the Jensen route by a central difference in
/// `log t`.
pub fn reduced_counting_fd(polys: &[ComplexPoly], t: f64, h: f64, tol: f64) -> Result<f64> {
    let hi = reduced_characteristic_of(polys, t * (1.0 + h), tol)?;
    let lo = reduced_characteristic_of(polys, t * (1.0 - h), tol)?;
    Ok((hi - lo) / (2.0 * h))
}

/// Both routes of `T` and `n(t)` on a radius grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CharacteristicTable {
    pub radii: Vec<f64>,
    pub t_area: Vec<f64>,
    pub t_jensen: Vec<f64>,
    pub n_counting: Vec<f64>,
}

pub const CHARACTERISTIC_CSV_HEADER: &str = "r,T_area,T_jensen,n_t";

impl CharacteristicTable {
    pub fn compute(curve: &HolomorphicCurve, radii: &[f64], tol: f64) -> Result<Self> {
        let mut sorted = radii.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut table = CharacteristicTable {
            radii: sorted.clone(),
            t_area: Vec::with_capacity(sorted.len()),
            t_jensen: Vec::with_capacity(sorted.len()),
            n_counting: Vec::with_capacity(sorted.len()),
        };
        for &r in &sorted {
            table.t_area.push(characteristic_area(curve, r, tol)?);
            table.t_jensen.push(characteristic_jensen(curve, r, tol)?);
            table.n_counting.push(counting_function(curve, r, tol)?);
        }
        Ok(table)
    }

    /// Largest `|T_area - T_jensen|` over the grid.
    pub fn max_route_gap(&self) -> f64 {
        self.t_area
            .iter()
            .zip(&self.t_jensen)
            .map(|(a, j)| (a - j).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CHARACTERISTIC_CSV_HEADER);
        out.push('\n');
        for i in 0..self.radii.len() {
            out.push_str(&format!(
                "{},{},{},{}\n",
                self.radii[i], self.t_area[i], self.t_jensen[i], self.n_counting[i]
            ));
        }
        out
    }
}
