//! Holomorphic curves `C -> P^n` in polynomial-exponential closed form.
//!
//! Every component is `Q(z) e^{P(z)}` for polynomials `Q`, `P`; the three
//! variants fix `P = 0` or `Q = 1`. All evaluation goes through
//! (log-modulus, phase) pairs so that `Re P` in the thousands never
//! overflows, and the spherical derivative is assembled from components
//! rescaled by their common maximum before anything is exponentiated.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::quadrature::periodic_sup;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest log-modulus for which the plain value is still representable.
const LOG_MAX_F64: f64 = 709.0;

#[derive(Clone, PartialEq)]
pub enum CurveComponent {
    /// `Q(z)`
    Poly(ComplexPoly),
    /// `e^{P(z)}`
    ExpPoly(ComplexPoly),
    /// `Q(z) e^{P(z)}`
    PolyExp { factor: ComplexPoly, exponent: ComplexPoly },
}

impl fmt::Debug for CurveComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveComponent::Poly(q) => write!(f, "Poly[{q:?}]"),
            CurveComponent::ExpPoly(p) => write!(f, "exp[{p:?}]"),
            CurveComponent::PolyExp { factor, exponent } => {
                write!(f, "[{factor:?}]*exp[{exponent:?}]")
            }
        }
    }
}

/// Result of [`eval_component`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentValue {
    /// `log|f(z)|`, `-inf` at a zero.
    pub log_modulus: f64,
    /// `f(z)/|f(z)|`, or 1 at a zero.
    pub phase: Complex64,
    /// `f(z)` when it is representable as an `f64` pair.
    pub value: Option<Complex64>,
}

/// Local data of one component at a point: `f = e^{re_exp} * rot * q` and
/// `f' = e^{re_exp} * rot * dq`.
#[derive(Debug, Clone, Copy)]
struct Jet {
    re_exp: f64,
    rot: Complex64,
    q: Complex64,
    dq: Complex64,
}

fn unit(w: Complex64) -> Complex64 {
    let m = w.norm();
    if m == 0.0 || !m.is_finite() {
        ONE
    } else {
        w / m
    }
}

impl Jet {
    fn log_modulus(&self) -> f64 {
        self.re_exp + self.q.norm().ln()
    }

    /// `f * e^{-shift}`
    fn scaled_value(&self, shift: f64) -> Complex64 {
        (self.re_exp - shift + self.q.norm().ln()).exp() * self.rot * unit(self.q)
    }

    /// `f' * e^{-shift}`
    fn scaled_derivative(&self, shift: f64) -> Complex64 {
        (self.re_exp - shift + self.dq.norm().ln()).exp() * self.rot * unit(self.dq)
    }
}

impl CurveComponent {
    /// The constant function 1.
    pub fn one() -> Self {
        CurveComponent::ExpPoly(ComplexPoly::zero())
    }

    /// Polynomial factor `Q` (1 for `ExpPoly`).
    pub fn factor(&self) -> ComplexPoly {
        match self {
            CurveComponent::Poly(q) => q.clone(),
            CurveComponent::ExpPoly(_) => ComplexPoly::constant(ONE),
            CurveComponent::PolyExp { factor, .. } => factor.clone(),
        }
    }

    /// Exponent `P` (0 for `Poly`).
    pub fn exponent(&self) -> ComplexPoly {
        match self {
            CurveComponent::Poly(_) => ComplexPoly::zero(),
            CurveComponent::ExpPoly(p) => p.clone(),
            CurveComponent::PolyExp { exponent, .. } => exponent.clone(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CurveComponent::Poly(_) => "poly",
            CurveComponent::ExpPoly(_) => "exppoly",
            CurveComponent::PolyExp { .. } => "polyexp",
        }
    }

    /// Multiply by `e^{extra}` without normalizing.
    pub fn times_exp(&self, extra: &ComplexPoly) -> Self {
        match self {
            CurveComponent::Poly(q) => CurveComponent::PolyExp {
                factor: q.clone(),
                exponent: extra.clone(),
            },
            CurveComponent::ExpPoly(p) => CurveComponent::ExpPoly(p + extra),
            CurveComponent::PolyExp { factor, exponent } => CurveComponent::PolyExp {
                factor: factor.clone(),
                exponent: exponent + extra,
            },
        }
    }

    fn jet(&self, z: Complex64) -> Jet {
        let (p, dp) = match self {
            CurveComponent::Poly(_) => (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
            CurveComponent::ExpPoly(p) | CurveComponent::PolyExp { exponent: p, .. } => p.eval_with_derivative(z),
        };
        let (q, dq) = match self {
            CurveComponent::ExpPoly(_) => (ONE, Complex64::new(0.0, 0.0)),
            CurveComponent::Poly(q) | CurveComponent::PolyExp { factor: q, .. } => q.eval_with_derivative(z),
        };
        Jet {
            re_exp: p.re,
            rot: Complex64::from_polar(1.0, p.im),
            q,
            dq: dq + dp * q,
        }
    }

    /// `f'/f` at `z`; infinite modulus at a zero of the factor.
    pub fn log_derivative(&self, z: Complex64) -> Complex64 {
        let j = self.jet(z);
        j.dq / j.q
    }

    /// Number of phase windings of the component per unit angle on `|z| = r`,
    /// bounded crudely by the coefficient sizes.
    fn angular_bandwidth(&self, r: f64) -> f64 {
        let exp_part: f64 = self
            .exponent()
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| k as f64 * c.norm() * r.powi(k as i32))
            .sum();
        exp_part + self.factor().degree().unwrap_or(0) as f64
    }
}

/// Evaluate one component in log domain.
pub fn eval_component(c: &CurveComponent, z: Complex64) -> ComponentValue {
    let j = c.jet(z);
    let log_modulus = j.log_modulus();
    let phase = j.rot * unit(j.q);
    let value = if log_modulus == f64::NEG_INFINITY {
        Some(Complex64::new(0.0, 0.0))
    } else if log_modulus < LOG_MAX_F64 {
        Some(log_modulus.exp() * phase)
    } else {
        None
    };
    ComponentValue {
        log_modulus,
        phase,
        value,
    }
}

/// `log sqrt(sum |f_j|^2)` for an arbitrary (not necessarily normalized)
/// homogeneous representation, by log-sum-exp.
pub fn log_norm_of(components: &[CurveComponent], z: Complex64) -> f64 {
    let logs: Vec<f64> = components.iter().map(|c| c.jet(z).log_modulus()).collect();
    log_norm_from_logs(&logs)
}

fn log_norm_from_logs(logs: &[f64]) -> f64 {
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = logs.iter().map(|l| (2.0 * (l - top)).exp()).sum();
    top + 0.5 * s.ln()
}

/// Fubini-Study derivative of an arbitrary homogeneous representation.
///
/// All components are divided by `e^S`, `S = max_j log|f_j|`, before the
/// Wronskian sum is formed; the factor cancels between numerator and
/// `||f||^2`.
pub fn spherical_derivative_of(components: &[CurveComponent], z: Complex64) -> f64 {
    let jets: Vec<Jet> = components.iter().map(|c| c.jet(z)).collect();
    let shift = jets.iter().map(Jet::log_modulus).fold(f64::NEG_INFINITY, f64::max);
    if !shift.is_finite() {
        return if shift == f64::NEG_INFINITY { f64::NAN } else { 0.0 };
    }
    let g: Vec<Complex64> = jets.iter().map(|j| j.scaled_value(shift)).collect();
    let h: Vec<Complex64> = jets.iter().map(|j| j.scaled_derivative(shift)).collect();
    let norm2: f64 = g.iter().map(|v| v.norm_sqr()).sum();
    let mut wronski2 = 0.0;
    for i in 0..g.len() {
        for j in (i + 1)..g.len() {
            wronski2 += (h[i] * g[j] - g[i] * h[j]).norm_sqr();
        }
    }
    wronski2.sqrt() / norm2
}

/// A holomorphic curve `(f_0, ..., f_n)` with `f_n = 1` and `f_1..f_n`
/// zero-free, together with its growth data `sigma` and `K`.
#[derive(Debug, Clone, PartialEq)]
pub struct HolomorphicCurve {
    components: Vec<CurveComponent>,
    sigma: f64,
    k: Option<f64>,
}

/// Output of [`HolomorphicCurve::component_log_moduli`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogModuli {
    /// `u_j = log|f_j|` for `j = 0..=n`.
    pub u: Vec<f64>,
    /// `u* = max_{1<=j<=n} u_j`.
    pub reduced_max: f64,
    /// Indices in `1..=n` within the tie tolerance of `u*`.
    pub reduced_argmax: Vec<usize>,
    /// `max_{0<=j<=n} u_j`.
    pub full_max: f64,
    /// Indices in `0..=n` within the tie tolerance of the full maximum.
    pub full_argmax: Vec<usize>,
}

/// Tie tolerance for argmax sets: `1e-9 * max(1, |u|)`.
pub fn tie_tolerance(max: f64) -> f64 {
    1e-9 * max.abs().max(1.0)
}

fn argmax_within(u: &[f64], offset: usize) -> (f64, Vec<usize>) {
    let top = u.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let eta = tie_tolerance(top);
    let set = u
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= top - eta)
        .map(|(j, _)| j + offset)
        .collect();
    (top, set)
}

/// Output of [`HolomorphicCurve::estimate_growth`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthEstimate {
    pub sigma_hat: f64,
    pub k_hat: f64,
    /// `(r, sup_{|z|=r} ||f'||)` per sampled circle.
    pub circle_sups: Vec<(f64, f64)>,
}

impl HolomorphicCurve {
    /// Build and validate a curve.
    pub fn new(components: Vec<CurveComponent>, sigma: f64, k: Option<f64>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::Validation(
                "a curve needs at least two components (n >= 1)".into(),
            ));
        }
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::Validation(format!(
                "sigma must be finite and nonnegative, got {sigma}"
            )));
        }
        if let Some(k) = k {
            if !(k.is_finite() && k > 0.0) {
                return Err(Error::Validation(format!("K must be positive, got {k}")));
            }
        }
        let n = components.len() - 1;
        let max_deg = (2.0 * sigma + 2.0).floor() as usize;
        for (j, c) in components.iter().enumerate().skip(1) {
            let CurveComponent::ExpPoly(p) = c else {
                return Err(Error::Validation(format!(
                    "component {j} must be nonvanishing (exppoly), got \"{}\"",
                    c.kind()
                )));
            };
            if let Some(d) = p.degree() {
                if d > max_deg {
                    return Err(Error::Validation(format!(
                        "component {j}: exponent degree {d} exceeds floor(2*sigma+2) = {max_deg}"
                    )));
                }
            }
        }
        if !components[n].exponent().is_zero() {
            return Err(Error::Validation(format!(
                "component {n} must be the constant 1 (exppoly with empty exponent)"
            )));
        }
        Ok(HolomorphicCurve { components, sigma, k })
    }

    pub fn n(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[CurveComponent] {
        &self.components
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn k(&self) -> Option<f64> {
        self.k
    }

    pub fn with_k(mut self, k: Option<f64>) -> Self {
        self.k = k;
        self
    }

    /// Exponents `P_1, ..., P_n` of the zero-free components.
    pub fn reduced_exponents(&self) -> Vec<ComplexPoly> {
        self.components[1..].iter().map(CurveComponent::exponent).collect()
    }

    /// True when every component is constant.
    pub fn is_constant(&self) -> bool {
        self.components
            .iter()
            .all(|c| c.factor().is_constant() && c.exponent().degree().is_none_or(|d| d == 0))
    }

    pub fn log_norm_u(&self, z: Complex64) -> f64 {
        log_norm_of(&self.components, z)
    }

    pub fn spherical_derivative(&self, z: Complex64) -> f64 {
        spherical_derivative_of(&self.components, z)
    }

    pub fn component_log_moduli(&self, z: Complex64) -> LogModuli {
        let u: Vec<f64> = self.components.iter().map(|c| c.jet(z).log_modulus()).collect();
        let (reduced_max, reduced_argmax) = argmax_within(&u[1..], 1);
        let (full_max, full_argmax) = argmax_within(&u, 0);
        LogModuli {
            u,
            reduced_max,
            reduced_argmax,
            full_max,
            full_argmax,
        }
    }

    /// `grad u_j = conj(f_j'/f_j)` as a complex number.
    pub fn log_gradient(&self, j: usize, z: Complex64) -> Complex64 {
        self.components[j].log_derivative(z).conj()
    }

    /// Crude upper bound on how fast `u` and `||f'||` oscillate in angle on
    /// `|z| = r`; used to size angular grids.
    pub fn angular_bandwidth(&self, r: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.angular_bandwidth(r))
            .fold(0.0, f64::max)
    }

    /// Angular grid size resolving `u` and `||f'||` on `|z| = r`.
    pub fn angular_nodes(&self, r: f64) -> usize {
        let nodes = 16.0 * self.angular_bandwidth(r) + 64.0;
        (nodes.min((1u64 << 21) as f64) as usize).next_power_of_two()
    }

    /// `sup_{|z|=r} ||f'||`.
    pub fn circle_sup_derivative(&self, r: f64) -> f64 {
        let scan = self.angular_nodes(r) * 2;
        periodic_sup(|t| self.spherical_derivative(Complex64::from_polar(r, t)), scan).1
    }

    /// Estimate `sigma` and `K` from circle suprema of `||f'||` on
    /// geometrically spaced radii in `[r_min, r_max]`.
    pub fn estimate_growth(&self, r_min: f64, r_max: f64, circles: usize) -> Result<GrowthEstimate> {
        if !(r_min > 0.0 && r_min < r_max) {
            return Err(Error::Input(format!(
                "estimate_growth needs 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if circles < 4 {
            return Err(Error::Input(format!(
                "estimate_growth needs at least 4 circles, got {circles}"
            )));
        }
        let ratio = (r_max / r_min).ln() / (circles - 1) as f64;
        let circle_sups: Vec<(f64, f64)> = (0..circles)
            .map(|i| {
                let r = r_min * (ratio * i as f64).exp();
                (r, self.circle_sup_derivative(r))
            })
            .collect();
        let usable: Vec<(f64, f64)> = circle_sups
            .iter()
            .filter(|(_, s)| *s > 1e-300)
            .map(|&(r, s)| (r.ln(), s.ln()))
            .collect();
        if usable.len() < 2 {
            return Ok(GrowthEstimate {
                sigma_hat: 0.0,
                k_hat: 0.0,
                circle_sups,
            });
        }
        let m = usable.len() as f64;
        let mx = usable.iter().map(|p| p.0).sum::<f64>() / m;
        let my = usable.iter().map(|p| p.1).sum::<f64>() / m;
        let sxy: f64 = usable.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = usable.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sigma_hat = sxy / sxx;
        let k_hat = circle_sups
            .iter()
            .map(|&(r, s)| s / r.powf(self.sigma))
            .fold(0.0, f64::max);
        Ok(GrowthEstimate {
            sigma_hat,
            k_hat,
            circle_sups,
        })
    }
}
