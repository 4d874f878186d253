//! Quadrature and 1-D root/extremum helpers shared by the analysis modules.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Outcome of a converged quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

/// Hard cap on trapezoid nodes per circle.
pub const MAX_PERIODIC_NODES: usize = 1 << 22;
/// Hard cap on adaptive Gauss-Legendre panels.
pub const MAX_PANELS: usize = 200_000;

const GL_ORDER: usize = 20;

/// Mean of a `2 pi`-periodic function over one period, by the trapezoidal
/// rule with node doubling.
///
/// Converged when two successive estimates differ by at most
/// `tol * max(1, |mean|)`. `min_nodes` must resolve the integrand's
/// bandwidth, otherwise aliasing can fake convergence.
pub fn periodic_mean<F>(op: &'static str, f: F, tol: f64, min_nodes: usize) -> Result<Quad>
where
    F: Fn(f64) -> f64,
{
    let mut n = min_nodes.max(8).next_power_of_two();
    let h = |n: usize| 2.0 * PI / n as f64;
    let mut sum: f64 = (0..n).map(|k| f(k as f64 * h(n))).sum();
    let mut mean = sum / n as f64;
    let mut evaluations = n;
    loop {
        if 2 * n > MAX_PERIODIC_NODES {
            return Err(Error::Budget {
                op,
                estimate: mean,
                error_bound: f64::NAN,
            });
        }
        // midpoints of the current grid complete the doubled grid
        let hn = h(n);
        let mid: f64 = (0..n).map(|k| f((k as f64 + 0.5) * hn)).sum();
        evaluations += n;
        sum += mid;
        n *= 2;
        let refined = sum / n as f64;
        let err = (refined - mean).abs();
        mean = refined;
        if err <= tol * mean.abs().max(1.0) {
            return Ok(Quad {
                value: mean,
                error: err,
                evaluations,
            });
        }
    }
}

fn gl_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(GL_ORDER))
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` (Newton iteration on `P_n`).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            // p1 = P_n(x), p0 = P_{n-1}(x)
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (x, w) = gl_rule();
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    x.iter().zip(w).map(|(xi, wi)| wi * f(c + h * xi)).sum::<f64>() * h
}

/// Adaptive Gauss-Legendre integration of `f` over `[a, b]`.
///
/// A panel is accepted when its single-panel estimate and the sum over its
/// two halves agree to within its share of `max(rel_tol * |I|, abs_tol)`,
/// where `|I|` is the running integral magnitude.
pub fn adaptive_gauss_legendre<F>(
    op: &'static str,
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    initial_panels: usize,
) -> Result<Quad>
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return Ok(Quad {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        });
    }
    let m = initial_panels.max(1);
    let width = b - a;
    let per_panel = GL_ORDER;
    let mut stack: Vec<(f64, f64, f64)> = (0..m)
        .map(|k| {
            let lo = a + width * k as f64 / m as f64;
            let hi = a + width * (k + 1) as f64 / m as f64;
            (lo, hi, gl_panel(&f, lo, hi))
        })
        .collect();
    let scale: f64 = stack.iter().map(|p| p.2.abs()).sum();
    let target = (rel_tol * scale).max(abs_tol);
    let mut evaluations = m * per_panel;
    let mut value = 0.0;
    let mut error = 0.0;
    let mut panels = m;
    while let Some((lo, hi, whole)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = gl_panel(&f, lo, mid);
        let right = gl_panel(&f, mid, hi);
        evaluations += 2 * per_panel;
        let diff = (left + right - whole).abs();
        let share = target * (hi - lo).abs() / width.abs();
        if diff <= share || (hi - lo).abs() <= 1e-14 * width.abs().max(1.0) {
            value += left + right;
            error += diff;
            continue;
        }
        panels += 1;
        if panels > MAX_PANELS {
            let rest: f64 = stack.iter().map(|p| p.2).sum();
            return Err(Error::Budget {
                op,
                estimate: value + left + right + rest,
                error_bound: error + diff,
            });
        }
        stack.push((mid, hi, right));
        stack.push((lo, mid, left));
    }
    Ok(Quad {
        value,
        error,
        evaluations,
    })
}

/// Root of `g` in `[a, b]` given a sign change, by bisection to `x_tol`.
pub fn bisect<G: Fn(f64) -> f64>(g: G, mut a: f64, mut b: f64, x_tol: f64) -> f64 {
    let mut ga = g(a);
    if ga == 0.0 {
        return a;
    }
    for _ in 0..200 {
        if (b - a).abs() <= x_tol {
            break;
        }
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if (gm > 0.0) == (ga > 0.0) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Maximizer and maximum of a unimodal `f` on `[a, b]` by golden-section search.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, x_tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..300 {
        if (b - a).abs() <= x_tol {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Supremum of a `2 pi`-periodic function: dense scan, then golden-section
/// refinement around the best few samples.
pub fn periodic_sup<F: Fn(f64) -> f64>(f: F, scan: usize) -> (f64, f64) {
    let n = scan.max(16);
    let h = 2.0 * PI / n as f64;
    let samples: Vec<f64> = (0..n).map(|k| f(k as f64 * h)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| samples[j].total_cmp(&samples[i]));
    let mut best = (order[0] as f64 * h, samples[order[0]]);
    for &k in order.iter().take(4) {
        let t = k as f64 * h;
        let (tm, fm) = golden_max(&f, t - h, t + h, 1e-14);
        if fm > best.1 {
            best = (tm, fm);
        }
    }
    best
}
