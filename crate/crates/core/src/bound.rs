//! Checks of the four intermediate estimates and the assembled growth bound
//! `limsup T(r) / r^{sigma+1} <= K C(n, sigma)`.
//!
//! Limsup claims are tested on the tail (largest quarter) of a radius grid
//! with 10% slack.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::characteristic::{characteristic_jensen, max_real_part, reduced_characteristic, DEFAULT_TOL};
use crate::curve::{tie_tolerance, CurveComponent, HolomorphicCurve};
use crate::error::{Error, Result};
use crate::locus::{regularity_radius, trace_branches, LocusSummary};
use crate::quadrature::{bisect, periodic_sup};

pub const DEFAULT_EPSILON: f64 = 0.01;
/// Relative slack on tail inequalities.
pub const TAIL_SLACK: f64 = 0.10;
/// Fraction of the radius grid treated as the tail.
pub const TAIL_FRACTION: f64 = 0.25;
/// Relative tolerance on the first estimate's margin.
pub const PROP1_TOL: f64 = 1e-8;

/// Replace `f_0` by `f_0 + c f_1` to give `f_0` zeros.
///
/// Curves whose `f_0` already has zeros are returned unchanged. When `f_0`
/// is zero-free the sum stays in the closed-form class only if
/// `P_0 - P_1` is constant, in which case it is again zero-free (or
/// identically zero), so every such request is rejected with a hint.
pub fn preprocess_zeros(curve: &HolomorphicCurve, c: Complex64) -> Result<HolomorphicCurve> {
    let comps = curve.components();
    let CurveComponent::ExpPoly(p0) = &comps[0] else {
        return Ok(curve.clone());
    };
    let p1 = comps[1].exponent();
    let diff = p0 - &p1;
    if diff.is_constant() {
        let factor = diff.eval(Complex64::new(0.0, 0.0)).exp() + c;
        if factor.norm() == 0.0 {
            return Err(Error::Validation(format!(
                "f0 + ({c}) f1 vanishes identically; choose another c"
            )));
        }
        return Err(Error::Unsupported(format!(
            "f0 + ({c}) f1 = ({factor}) exp(P1) is still zero-free; supply f0 with zeros directly"
        )));
    }
    Err(Error::Unsupported(
        "f0 + c f1 with non-constant P0 - P1 has no closed form here; supply f0 with zeros directly".into(),
    ))
}

/// A point where two of `u_0..u_n` tie for the maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TiePoint {
    #[serde(serialize_with = "ser_complex")]
    pub z: Complex64,
    pub m: usize,
    pub k: usize,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prop1Outcome {
    /// `min (n+1)||f'|| - |grad u_m - grad u_k|` over all tied pairs.
    pub worst_margin: f64,
    /// Worst margin divided by its local scale.
    pub worst_relative: f64,
    pub points: usize,
    pub ok: bool,
}

/// Gradient bound at tie points: `|grad u_m - grad u_k| <= (n+1)||f'||`.
pub fn prop1_check(curve: &HolomorphicCurve, points: &[Complex64]) -> Result<Prop1Outcome> {
    let n1 = (curve.n() + 1) as f64;
    let mut worst_margin = f64::INFINITY;
    let mut worst_relative = f64::INFINITY;
    for &z in points {
        let lm = curve.component_log_moduli(z);
        if lm.full_argmax.len() < 2 {
            return Err(Error::Input(format!(
                "no tie among the maximal log-moduli at z = {z} (max {}, argmax {:?})",
                lm.full_max, lm.full_argmax
            )));
        }
        let lhs = n1 * curve.spherical_derivative(z);
        for (a, &m) in lm.full_argmax.iter().enumerate() {
            for &k in &lm.full_argmax[a + 1..] {
                let gap = (curve.log_gradient(m, z) - curve.log_gradient(k, z)).norm();
                let margin = lhs - gap;
                worst_margin = worst_margin.min(margin);
                worst_relative = worst_relative.min(margin / gap.max(lhs).max(1.0));
            }
        }
    }
    Ok(Prop1Outcome {
        worst_margin,
        worst_relative,
        points: points.len(),
        ok: points.is_empty() || worst_relative >= -PROP1_TOL,
    })
}

/// Accept a root of `u_m - u_k` if the pair also dominates every other index.
fn dominant_tie(curve: &HolomorphicCurve, z: Complex64, m: usize, k: usize) -> Option<TiePoint> {
    let lm = curve.component_log_moduli(z);
    let (um, uk) = (lm.u[m], lm.u[k]);
    if !um.is_finite() {
        return None;
    }
    let eta = tie_tolerance(lm.full_max);
    ((um - uk).abs() <= eta && um >= lm.full_max - eta).then_some(TiePoint { z, m, k })
}

/// Tie points of pairs over the full index set `0..=n`, located by sign
/// changes of `u_m - u_k` along the given circles and along `rays` rays
/// spanning `[r_lo, r_hi]`.
pub fn harvest_tie_points(
    curve: &HolomorphicCurve,
    circles: &[f64],
    rays: usize,
    r_lo: f64,
    r_hi: f64,
) -> Vec<TiePoint> {
    let n = curve.n();
    let diff = |m: usize, k: usize, z: Complex64| {
        let u = curve.component_log_moduli(z).u;
        u[m] - u[k]
    };
    let mut out = Vec::new();
    let mut scan = |m: usize, k: usize, path: &dyn Fn(f64) -> Complex64, lo: f64, hi: f64, steps: usize| {
        let h = (hi - lo) / steps as f64;
        let g = |s: f64| diff(m, k, path(s));
        let mut prev = g(lo);
        for i in 1..=steps {
            let s = lo + i as f64 * h;
            let cur = g(s);
            if prev.is_finite() && cur.is_finite() && (prev > 0.0) != (cur > 0.0) {
                let root = bisect(g, s - h, s, 1e-14 * hi.abs().max(1.0));
                if let Some(tp) = dominant_tie(curve, path(root), m, k) {
                    out.push(tp);
                }
            }
            prev = cur;
        }
    };
    for m in 0..=n {
        for k in (m + 1)..=n {
            for &r in circles {
                let steps = curve.angular_nodes(r);
                scan(m, k, &|t| Complex64::from_polar(r, t), 0.0, 2.0 * PI, steps);
            }
            if rays > 0 && r_lo < r_hi {
                for q in 0..rays {
                    let theta = 2.0 * PI * (q as f64 + 0.5) / rays as f64;
                    let dir = Complex64::from_polar(1.0, theta);
                    scan(m, k, &|s| dir * s, r_lo, r_hi, 512);
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prop2Row {
    pub r: f64,
    /// `sup_{|z|=r} (u - u*)`
    pub gap: f64,
    /// `K (2+eps)^{sigma+1} (n+1) r^{sigma+1}`
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop2Table {
    pub rows: Vec<Prop2Row>,
    /// Smallest grid radius from which on every row satisfies the bound.
    pub threshold: Option<f64>,
    /// The bound holds on the grid tail.
    pub ok: bool,
}

fn tail_start(len: usize) -> usize {
    let tail = ((len as f64 * TAIL_FRACTION).ceil() as usize).clamp(1, len.max(1));
    len.saturating_sub(tail)
}

/// `sup (u - u*)` on each circle against the second estimate.
pub fn prop2_margin(curve: &HolomorphicCurve, k: f64, epsilon: f64, radii: &[f64]) -> Prop2Table {
    let n = curve.n() as f64;
    let s1 = curve.sigma() + 1.0;
    let exps = curve.reduced_exponents();
    let mut sorted = radii.to_vec();
    sorted.sort_by(f64::total_cmp);
    let rows: Vec<Prop2Row> = sorted
        .iter()
        .map(|&r| {
            let gap = periodic_sup(
                |t| {
                    let z = Complex64::from_polar(r, t);
                    curve.log_norm_u(z) - max_real_part(&exps, z)
                },
                2 * curve.angular_nodes(r),
            )
            .1;
            Prop2Row {
                r,
                gap,
                bound: k * (2.0 + epsilon).powf(s1) * (n + 1.0) * r.powf(s1),
            }
        })
        .collect();
    // bounded terms are invisible to the asymptotic statement; the
    // sandwich constant covers them, including the constant curve with K = 0
    let allowance = 0.5 * (n + 1.0).ln();
    let holds = |row: &Prop2Row| row.gap <= row.bound + allowance;
    let first_good = rows.iter().rposition(|row| !holds(row)).map_or(0, |i| i + 1);
    let threshold = rows.get(first_good).map(|row| row.r);
    let ok = rows[tail_start(rows.len())..].iter().all(holds);
    Prop2Table { rows, threshold, ok }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prop3Check {
    /// `None` when there are no active branches.
    pub b: Option<f64>,
    pub b_ceiling: f64,
    pub c0: f64,
    pub c0_ceiling: f64,
    pub b_ok: bool,
    pub c0_ok: bool,
}

/// Jump-density exponent and coefficient against `sigma` and
/// `3 4^sigma K (n+1)`.
pub fn prop3_check(locus: Option<&LocusSummary>, n: usize, sigma: f64, k: f64) -> Prop3Check {
    let c0_ceiling = 3.0 * 4f64.powf(sigma) * k * (n as f64 + 1.0);
    let (b, c0) = match locus {
        Some(l) if l.b.is_finite() => (Some(l.b), l.c0),
        _ => (None, 0.0),
    };
    Prop3Check {
        b,
        b_ceiling: sigma,
        c0,
        c0_ceiling,
        b_ok: b.is_none_or(|b| b <= sigma + 1e-6),
        c0_ok: b.is_none() || c0 <= c0_ceiling * (1.0 + 1e-6),
    }
}

/// `6 4^sigma K n (n+1)^2 / (sigma+1) * r^{sigma+1}`.
pub fn prop4_bound(n: usize, sigma: f64, k: f64, r: f64) -> f64 {
    prop4_constant(n, sigma, k) * r.powf(sigma + 1.0)
}

fn prop4_constant(n: usize, sigma: f64, k: f64) -> f64 {
    let n = n as f64;
    6.0 * 4f64.powf(sigma) * k * n * (n + 1.0).powi(2) / (sigma + 1.0)
}

/// `C(n, sigma) = 6 4^sigma n (n+1)^2 / (sigma+1) + (2+eps)^{sigma+1} (n+1)`.
pub fn theorem_constant(n: usize, sigma: f64, epsilon: f64) -> f64 {
    let nf = n as f64;
    prop4_constant(n, sigma, 1.0) + (2.0 + epsilon).powf(sigma + 1.0) * (nf + 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CharacteristicRow {
    pub r: f64,
    pub t: f64,
    /// `K C(n, sigma) r^{sigma+1}`
    pub bound: f64,
    /// `T*(r)`
    pub t_reduced: f64,
    pub prop4_bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub prop1: bool,
    pub prop2: bool,
    pub prop3: bool,
    pub prop4: bool,
    pub theorem: bool,
    /// `T(2r) <= 2^{2 sigma + 2} T(r) (1 + slack)` on the tail.
    pub doubling: bool,
}

impl Verdicts {
    pub fn all(&self) -> bool {
        self.prop1 && self.prop2 && self.prop3 && self.prop4 && self.theorem && self.doubling
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub sigma: f64,
    #[serde(rename = "K")]
    pub k: f64,
    /// "declared" or "estimated"
    pub k_source: &'static str,
    pub epsilon: f64,
    pub prop1_worst: f64,
    pub prop1_points: usize,
    pub prop2_margin_curve: Vec<Prop2Row>,
    pub prop2_threshold: Option<f64>,
    pub b: Option<f64>,
    pub b_ceiling: f64,
    pub c0: f64,
    pub c0_ceiling: f64,
    pub prop4_constant: f64,
    pub theorem_constant: f64,
    pub characteristic: Vec<CharacteristicRow>,
    pub verdicts: Verdicts,
    /// Failed sub-computations; each forces its verdict to false.
    pub errors: Vec<String>,
}

impl BoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }
}

/// Run every check on `r_grid` and assemble the report. Sub-check failures
/// are recorded, never propagated.
pub fn verify_theorem(curve: &HolomorphicCurve, r_grid: &[f64], epsilon: f64) -> BoundReport {
    let mut errors = Vec::new();
    let n = curve.n();
    let sigma = curve.sigma();
    let s1 = sigma + 1.0;
    let mut grid: Vec<f64> = r_grid.iter().copied().filter(|r| *r > 0.0 && r.is_finite()).collect();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    if grid.is_empty() {
        errors.push("empty radius grid".to_string());
    }
    let (r_lo, r_hi) = (
        grid.first().copied().unwrap_or(1.0),
        grid.last().copied().unwrap_or(1.0),
    );

    let (k, k_source) = match curve.k() {
        Some(k) => (k, "declared"),
        // K bounds a limsup at infinity, so estimate it on the outer half
        None => match curve.estimate_growth(
            grid.get(grid.len() / 2).copied().unwrap_or(r_lo).min(r_hi / 2.0),
            r_hi,
            12,
        ) {
            Ok(est) => (est.k_hat, "estimated"),
            Err(e) => {
                errors.push(format!("K estimate: {e}"));
                (f64::NAN, "estimated")
            }
        },
    };
    let c = theorem_constant(n, sigma, epsilon);
    let tail = tail_start(grid.len());

    // characteristic and the reduced one
    let mut characteristic = Vec::with_capacity(grid.len());
    let mut theorem_ok = !grid.is_empty();
    let mut prop4_ok = true;
    for (i, &r) in grid.iter().enumerate() {
        let t = characteristic_jensen(curve, r, DEFAULT_TOL).unwrap_or_else(|e| {
            errors.push(format!("T({r}): {e}"));
            f64::NAN
        });
        let t_reduced = reduced_characteristic(curve, r, DEFAULT_TOL).unwrap_or_else(|e| {
            errors.push(format!("T*({r}): {e}"));
            f64::NAN
        });
        let bound = k * c * r.powf(s1);
        let p4 = prop4_bound(n, sigma, k, r);
        if i >= tail {
            theorem_ok &= t <= bound * (1.0 + TAIL_SLACK) + 1e-12;
            prop4_ok &= t_reduced <= p4 * (1.0 + TAIL_SLACK) + 1e-12;
        }
        characteristic.push(CharacteristicRow {
            r,
            t,
            bound,
            t_reduced,
            prop4_bound: p4,
        });
    }

    let mut doubling = true;
    let envelope = 2f64.powf(2.0 * sigma + 2.0) * (1.0 + TAIL_SLACK);
    for row in &characteristic[tail..] {
        match characteristic_jensen(curve, 2.0 * row.r, DEFAULT_TOL) {
            Ok(t2) => doubling &= t2 <= envelope * row.t + 1e-12,
            Err(e) => {
                errors.push(format!("T({}): {e}", 2.0 * row.r));
                doubling = false;
            }
        }
    }

    let ties = harvest_tie_points(curve, &grid, 16, r_lo, r_hi);
    let points: Vec<Complex64> = ties.iter().map(|t| t.z).collect();
    let (prop1_worst, prop1_ok) = match prop1_check(curve, &points) {
        Ok(o) => (o.worst_margin, o.ok),
        Err(e) => {
            errors.push(format!("tie points: {e}"));
            (f64::NAN, false)
        }
    };

    let p2 = prop2_margin(curve, k, epsilon, &grid);

    let exps = curve.reduced_exponents();
    let locus = match regularity_radius(&exps) {
        Err(Error::LocusEmpty) => None,
        Err(e) => {
            errors.push(format!("locus: {e}"));
            None
        }
        Ok(r0) => match trace_branches(&exps, r0, (4.0 * r0).max(r_hi)) {
            Ok(l) => Some(l),
            Err(e) => {
                errors.push(format!("locus: {e}"));
                None
            }
        },
    };
    let p3 = prop3_check(locus.as_ref(), n, sigma, k);
    let locus_failed = errors.iter().any(|e| e.starts_with("locus"));

    let verdicts = Verdicts {
        prop1: prop1_ok,
        prop2: p2.ok && k.is_finite(),
        prop3: p3.b_ok && p3.c0_ok && !locus_failed,
        prop4: prop4_ok,
        theorem: theorem_ok,
        doubling,
    };
    BoundReport {
        n,
        sigma,
        k,
        k_source,
        epsilon,
        prop1_worst,
        prop1_points: points.len(),
        prop2_margin_curve: p2.rows,
        prop2_threshold: p2.threshold,
        b: p3.b,
        b_ceiling: p3.b_ceiling,
        c0: p3.c0,
        c0_ceiling: p3.c0_ceiling,
        prop4_constant: prop4_constant(n, sigma, k),
        theorem_constant: c,
        characteristic,
        verdicts,
        errors,
    }
}
