//! Equal-value locus of `u* = max_j Re P_j` and the Riesz measure it carries.
//!
//! Outside the regularity radius `r0` every level set `Re (P_i - P_j) = 0`
//! with `d = deg(P_i - P_j) >= 1` consists of exactly `2d` smooth arcs, each
//! crossing every circle `|z| = r > r0` once and transversally: `r0` is at
//! least twice the modulus of every root of `D D'`, so `arg D` is strictly
//! increasing along such circles. Branches are therefore started on
//! `|z| = r0` and continued outward by a tangent predictor and a Newton
//! corrector onto `Re D = 0`.
//!
//! A branch point carries mass only where the pair actually separates the
//! dominance regions of `u*`: `u_i = u_j` is maximal and, across the curve,
//! `u_i` wins on one side and `u_j` on the other.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::curve::tie_tolerance;
use crate::error::{Error, Result};
use crate::poly::ComplexPoly;

/// Newton corrector step tolerance relative to `max(1, |z|)`.
const CORRECTOR_TOL: f64 = 1e-12;
const CORRECTOR_MAX_ITERS: usize = 40;
/// Smallest admissible step relative to `|z|` before continuation gives up.
const MIN_STEP: f64 = 1e-12;
/// Gates for fitted vs symbolic asymptotics.
pub const EXPONENT_GATE: f64 = 0.05;
pub const COEFFICIENT_GATE: f64 = 0.05;

/// One sample along a traced branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint {
    #[serde(serialize_with = "ser_complex")]
    pub z: Complex64,
    /// Chord length from the previous point (0 for the first).
    pub arclen: f64,
    /// Jump density `J(z)/(2 pi)` with `J = |(P_i - P_j)'(z)|`.
    pub density: f64,
    /// Whether the pair separates two dominance regions of `u*` here.
    pub active: bool,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

/// One traced arc `Gamma_k` of the equal-value set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocusBranch {
    /// 1-based exponent indices `(i, j)`, `i < j`.
    pub pair: (usize, usize),
    pub trace: Vec<TracePoint>,
    /// Symbolic exponent of `J/(2 pi) ~ c_k |z|^{b_k}`.
    pub b_k: f64,
    pub c_k: f64,
    /// Dominance holds at the outer end of the trace.
    pub active: bool,
}

pub const BRANCH_CSV_HEADER: &str = "re,im,arclen,density";

impl LocusBranch {
    /// `int J/(2 pi) |dz|` over the active part of the trace within `|z| <= t`.
    pub fn active_mass_within(&self, t: f64) -> f64 {
        let mut mass = 0.0;
        for w in self.trace.windows(2) {
            let (a, b) = (w[0], w[1]);
            if !(a.active && b.active) {
                continue;
            }
            let (ra, rb) = (a.z.norm(), b.z.norm());
            if ra >= t {
                break;
            }
            let seg = 0.5 * b.arclen * (a.density + b.density);
            if rb <= t {
                mass += seg;
            } else {
                let lambda = (t - ra) / (rb - ra);
                let rho = a.density + lambda * (b.density - a.density);
                mass += 0.5 * lambda * b.arclen * (a.density + rho);
                break;
            }
        }
        mass
    }

    pub fn active_mass(&self) -> f64 {
        self.active_mass_within(f64::INFINITY)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(BRANCH_CSV_HEADER);
        out.push('\n');
        for p in &self.trace {
            out.push_str(&format!("{},{},{},{}\n", p.z.re, p.z.im, p.arclen, p.density));
        }
        out
    }
}

/// All branches traced on `r0 < |z| <= r_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocusSummary {
    pub r0: f64,
    pub r_max: f64,
    pub branches: Vec<LocusBranch>,
    /// `max b_k` over active branches, `-inf` when there are none.
    pub b: f64,
    /// `max c_k` among active branches attaining `b`, 0 when there are none.
    pub c0: f64,
}

#[derive(Serialize)]
struct BranchJson {
    pair: (usize, usize),
    b_k: f64,
    c_k: f64,
    active: bool,
    points: usize,
    mass: f64,
}

#[derive(Serialize)]
struct SummaryJson {
    r0: f64,
    r_max: f64,
    b: Option<f64>,
    c0: f64,
    total_mass: f64,
    branches: Vec<BranchJson>,
}

impl LocusSummary {
    /// `nu(t) - nu(r0)` accumulated from the traces.
    pub fn riesz_mass_within(&self, t: f64) -> f64 {
        self.branches.iter().map(|b| b.active_mass_within(t)).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let s = SummaryJson {
            r0: self.r0,
            r_max: self.r_max,
            b: self.b.is_finite().then_some(self.b),
            c0: self.c0,
            total_mass: self.riesz_mass_within(f64::INFINITY),
            branches: self
                .branches
                .iter()
                .map(|b| BranchJson {
                    pair: b.pair,
                    b_k: b.b_k,
                    c_k: b.c_k,
                    active: b.active,
                    points: b.trace.len(),
                    mass: b.active_mass(),
                })
                .collect(),
        };
        serde_json::to_value(s).expect("summary is plain data")
    }
}

/// Pairs `(i, j)` (1-based) whose difference has degree at least one, with
/// that difference.
fn nonconstant_pairs(polys: &[ComplexPoly]) -> Vec<((usize, usize), ComplexPoly)> {
    let mut out = Vec::new();
    for i in 0..polys.len() {
        for j in (i + 1)..polys.len() {
            let d = &polys[i] - &polys[j];
            if d.degree().is_some_and(|k| k >= 1) {
                out.push(((i + 1, j + 1), d));
            }
        }
    }
    out
}

/// `r0 = 2 (1 + max_{i<j} max_{k<d} |a_k/a_d|)`, coefficients taken from
/// `(P_i - P_j)(P_i - P_j)'`, i.e. twice the largest Cauchy root bound.
pub fn regularity_radius(polys: &[ComplexPoly]) -> Result<f64> {
    if polys.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::LocusEmpty);
    }
    let ratio = nonconstant_pairs(polys)
        .iter()
        .filter_map(|(_, d)| (d * &d.derivative()).cauchy_ratio())
        .fold(0.0, f64::max);
    Ok(2.0 * (1.0 + ratio))
}

/// Whether pair `(i, j)` (0-based) separates dominance regions at `z`.
fn pair_separates(polys: &[ComplexPoly], i: usize, j: usize, z: Complex64) -> bool {
    let jets: Vec<(f64, Complex64)> = polys
        .iter()
        .map(|p| {
            let (v, dv) = p.eval_with_derivative(z);
            (v.re, dv)
        })
        .collect();
    let top = jets.iter().map(|j| j.0).fold(f64::NEG_INFINITY, f64::max);
    let eta = tie_tolerance(top);
    if jets[i].0 < top - eta || jets[j].0 < top - eta {
        return false;
    }
    // unit normal pointing to Re(P_i - P_j) > 0
    let grad = (jets[i].1 - jets[j].1).conj();
    if grad.norm() == 0.0 {
        return false;
    }
    let normal = grad / grad.norm();
    let slopes: Vec<(usize, f64)> = jets
        .iter()
        .enumerate()
        .filter(|(_, j)| j.0 >= top - eta)
        .map(|(m, j)| (m, (j.1 * normal).re))
        .collect();
    let smax = slopes.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    let smin = slopes.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let slope_eta = 1e-9 * smax.abs().max(smin.abs()).max(1.0);
    let winner_plus = slopes.iter().find(|s| s.1 >= smax - slope_eta).map(|s| s.0);
    let winner_minus = slopes.iter().find(|s| s.1 <= smin + slope_eta).map(|s| s.0);
    winner_plus == Some(i) && winner_minus == Some(j)
}

struct Tracer<'a> {
    polys: &'a [ComplexPoly],
    diff: ComplexPoly,
    ddiff: ComplexPoly,
    pair: (usize, usize),
}

impl Tracer<'_> {
    fn re_diff(&self, z: Complex64) -> f64 {
        self.diff.eval(z).re
    }

    /// `grad Re D` as a complex number.
    fn grad(&self, z: Complex64) -> Complex64 {
        self.ddiff.eval(z).conj()
    }

    fn density(&self, z: Complex64) -> f64 {
        self.ddiff.eval(z).norm() / (2.0 * PI)
    }

    fn active(&self, z: Complex64) -> bool {
        pair_separates(self.polys, self.pair.0 - 1, self.pair.1 - 1, z)
    }

    fn correct(&self, mut z: Complex64) -> Option<Complex64> {
        for _ in 0..CORRECTOR_MAX_ITERS {
            let g = self.grad(z);
            let g2 = g.norm_sqr();
            if g2 == 0.0 {
                return None;
            }
            let step = g * (-self.re_diff(z) / g2);
            z += step;
            if step.norm() <= CORRECTOR_TOL * z.norm().max(1.0) {
                return Some(z);
            }
        }
        None
    }

    /// Point of the branch on `|z| = r` starting from angle `theta`.
    fn land_on_circle(&self, r: f64, mut theta: f64) -> Option<Complex64> {
        for _ in 0..CORRECTOR_MAX_ITERS {
            let z = Complex64::from_polar(r, theta);
            let g = self.re_diff(z);
            let dg = (self.ddiff.eval(z) * Complex64::i() * z).re;
            if dg == 0.0 {
                return None;
            }
            let step = g / dg;
            theta -= step;
            if step.abs() <= 1e-15 * theta.abs().max(1.0) {
                return Some(Complex64::from_polar(r, theta));
            }
        }
        None
    }

    fn outward_tangent(&self, z: Complex64) -> Complex64 {
        let g = self.grad(z);
        let t = Complex64::i() * g / g.norm();
        if (t * z.conj()).re < 0.0 {
            -t
        } else {
            t
        }
    }

    fn point(&self, z: Complex64, prev: Option<Complex64>) -> TracePoint {
        TracePoint {
            z,
            arclen: prev.map_or(0.0, |p| (z - p).norm()),
            density: self.density(z),
            active: self.active(z),
        }
    }

    /// Boundary point between an active and an inactive sample, located by
    /// bisection along the chord with each probe corrected onto the curve.
    fn transition(&self, a: Complex64, b: Complex64, a_active: bool) -> Option<Complex64> {
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            let z = self.correct(a + (b - a) * mid)?;
            if self.active(z) == a_active {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.correct(a + (b - a) * hi)
    }

    fn trace(&self, start: Complex64, r_max: f64) -> Result<Vec<TracePoint>> {
        let fail = |z| Error::Continuation {
            pair: self.pair,
            last_good: z,
        };
        let mut points = vec![self.point(start, None)];
        let mut z = start;
        let mut h = z.norm() / 100.0;
        while z.norm() < r_max * (1.0 - 1e-14) {
            let cap = z.norm() / 100.0;
            h = h.min(cap);
            let pred = z + self.outward_tangent(z) * h;
            let next = self
                .correct(pred)
                .filter(|c| (c - pred).norm() < 0.5 * h && c.norm() > z.norm());
            let Some(mut next) = next else {
                h *= 0.5;
                if h < MIN_STEP * z.norm() {
                    return Err(fail(z));
                }
                continue;
            };
            if next.norm() > r_max {
                next = self.land_on_circle(r_max, next.arg()).ok_or_else(|| fail(z))?;
                if (next - z).norm() > 2.0 * h {
                    return Err(fail(z));
                }
            }
            let p = self.point(next, Some(z));
            let last = *points.last().expect("trace starts non-empty");
            if p.active != last.active {
                if let Some(c) = self.transition(z, next, last.active) {
                    let mut cp = self.point(c, Some(z));
                    cp.active = true;
                    points.push(cp);
                    points.push(self.point(next, Some(c)));
                    z = next;
                    h *= 1.5;
                    continue;
                }
            }
            points.push(p);
            z = next;
            h *= 1.5;
        }
        Ok(points)
    }
}

/// Trace every branch of the equal-value set on `r0 < |z| <= r_max`.
pub fn trace_branches(polys: &[ComplexPoly], r0: f64, r_max: f64) -> Result<LocusSummary> {
    if !(r0 > 0.0 && r_max > r0) {
        return Err(Error::Input(format!(
            "trace_branches needs 0 < r0 < r_max, got r0 = {r0}, r_max = {r_max}"
        )));
    }
    let mut branches = Vec::new();
    for (pair, diff) in nonconstant_pairs(polys) {
        let tracer = Tracer {
            polys,
            ddiff: diff.derivative(),
            diff,
            pair,
        };
        let d = tracer.diff.degree().expect("nonconstant pair") as f64;
        let lead = tracer.diff.leading().expect("nonconstant pair").norm();
        let b_k = d - 1.0;
        let c_k = d * lead / (2.0 * PI);
        for theta in tracer.diff.real_part_zeros_on_circle(r0) {
            let start = Complex64::from_polar(r0, theta);
            let trace = tracer.trace(start, r_max)?;
            let active = trace.last().is_some_and(|p| p.active);
            branches.push(LocusBranch {
                pair,
                trace,
                b_k,
                c_k,
                active,
            });
        }
    }
    let b = branches
        .iter()
        .filter(|br| br.active)
        .map(|br| br.b_k)
        .fold(f64::NEG_INFINITY, f64::max);
    let c0 = branches
        .iter()
        .filter(|br| br.active && br.b_k == b)
        .map(|br| br.c_k)
        .fold(0.0, f64::max);
    Ok(LocusSummary {
        r0,
        r_max,
        branches,
        b,
        c0,
    })
}

/// Fitted asymptotics of one branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticFit {
    pub b_k: f64,
    pub c_k: f64,
    /// Least-squares slope of `log(J/2pi)` against `log|z|`.
    pub fitted_b: f64,
    /// `exp(mean(log(J/2pi) - b_k log|z|))`: coefficient with the symbolic
    /// exponent held fixed.
    pub fitted_c: f64,
}

/// Symbolic `(b_k, c_k)` of a branch, validated against its outer half.
pub fn branch_asymptotics(branch: &LocusBranch) -> Result<AsymptoticFit> {
    let (Some(first), Some(last)) = (branch.trace.first(), branch.trace.last()) else {
        return Err(Error::Input("empty branch trace".into()));
    };
    if last.z.norm() < 4.0 * first.z.norm() * (1.0 - 1e-12) {
        return Err(Error::Asymptotics {
            pair: branch.pair,
            detail: format!(
                "trace spans |z| in [{}, {}], need r_max >= 4 r0",
                first.z.norm(),
                last.z.norm()
            ),
        });
    }
    let outer = &branch.trace[branch.trace.len() / 2..];
    let pts: Vec<(f64, f64)> = outer.iter().map(|p| (p.z.norm().ln(), p.density.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let fitted_b = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let fitted_c = (my - branch.b_k * mx).exp();
    let fit = AsymptoticFit {
        b_k: branch.b_k,
        c_k: branch.c_k,
        fitted_b,
        fitted_c,
    };
    if (fitted_b - branch.b_k).abs() > EXPONENT_GATE || (fitted_c / branch.c_k - 1.0).abs() > COEFFICIENT_GATE {
        return Err(Error::Asymptotics {
            pair: branch.pair,
            detail: format!(
                "fit (b, c) = ({fitted_b:.4}, {fitted_c:.4}) vs symbolic ({}, {:.4})",
                branch.b_k, branch.c_k
            ),
        });
    }
    Ok(fit)
}

/// `nu(t) - nu(r0)` for `u* = max_j Re P_j`, as the jump-density line
/// integral over the active parts of all branches.
pub fn riesz_of_max(polys: &[ComplexPoly], t: f64, r0: f64) -> Result<f64> {
    if !(t > r0) {
        return Err(Error::Input(format!(
            "riesz_of_max needs t > r0, got t = {t}, r0 = {r0}"
        )));
    }
    if nonconstant_pairs(polys).is_empty() {
        return Ok(0.0);
    }
    Ok(trace_branches(polys, r0, t)?.riesz_mass_within(t))
}

/// Asymptotic branch count against the `2n(n-1)(sigma+1)` ceiling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BranchCount {
    pub count: u64,
    pub bound: u64,
    pub ok: bool,
}

/// `count = sum_{i<j} 2 deg(P_i - P_j)` over pairs with `Re(P_i - P_j) != 0`.
pub fn count_branch_bound(polys: &[ComplexPoly], sigma: f64) -> BranchCount {
    let count: u64 = nonconstant_pairs(polys)
        .iter()
        .map(|(_, d)| 2 * d.degree().expect("nonconstant") as u64)
        .sum();
    let n = polys.len() as f64;
    let bound = (2.0 * n * (n - 1.0) * (sigma + 1.0)).ceil() as u64;
    BranchCount {
        count,
        bound,
        ok: count <= bound,
    }
}
