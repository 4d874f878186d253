//! Dense polynomials with complex coefficients.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Dense polynomial `sum_k coeffs[k] z^k`.
///
/// The coefficient vector is kept trimmed: the last stored coefficient is
/// nonzero, and the zero polynomial stores no coefficients at all.
#[derive(Clone, PartialEq, Default)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        ComplexPoly { coeffs }
    }

    pub fn zero() -> Self {
        ComplexPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` stands for degree minus infinity (the zero polynomial).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree as a real number, `-inf` for the zero polynomial.
    pub fn degree_f64(&self) -> f64 {
        self.degree().map_or(f64::NEG_INFINITY, |d| d as f64)
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut p = zero;
        let mut dp = zero;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `Q(a + R w)` as a polynomial in `w`.
    pub fn compose_affine(&self, a: Complex64, r: f64) -> Self {
        // Horner over polynomials: acc <- acc * (a + R w) + c
        let lin = ComplexPoly::new(vec![a, Complex64::new(r, 0.0)]);
        self.coeffs.iter().rev().fold(ComplexPoly::zero(), |acc, &c| {
            &(&acc * &lin) + &ComplexPoly::constant(c)
        })
    }

    /// `max_{k<d} |a_k / a_d|`, or `None` when the polynomial has no roots
    /// (zero or nonzero constant).
    pub fn cauchy_ratio(&self) -> Option<f64> {
        let d = self.degree()?;
        if d == 0 {
            return None;
        }
        let lead = self.coeffs[d].norm();
        Some(self.coeffs[..d].iter().map(|c| c.norm() / lead).fold(0.0, f64::max))
    }

    /// Cauchy's bound `1 + max_{k<d}|a_k/a_d|` on the moduli of all roots.
    pub fn cauchy_root_bound(&self) -> Option<f64> {
        self.cauchy_ratio().map(|m| 1.0 + m)
    }

    /// True when `Re P` vanishes identically, i.e. `P` is a purely imaginary
    /// constant.
    pub fn real_part_vanishes(&self) -> bool {
        match self.coeffs.len() {
            0 => true,
            1 => self.coeffs[0].re == 0.0,
            _ => false,
        }
    }

    /// Angles in `[0, 2 pi)`, sorted, where `Re P(r e^{i theta})` changes
    /// sign. There are at most `2 deg P`; the scan is refined until that many
    /// are found or the grid gets very fine.
    pub fn real_part_zeros_on_circle(&self, r: f64) -> Vec<f64> {
        let d = self.degree().unwrap_or(0);
        let mut seeds = 32 * d.max(1);
        loop {
            let roots = self.scan_real_part_zeros(r, seeds);
            if roots.len() == 2 * d || seeds >= 1 << 16 {
                return roots;
            }
            seeds *= 4;
        }
    }

    /// One pass of [`Self::real_part_zeros_on_circle`] on `seeds` nodes:
    /// sign changes between nodes, bisected and then Newton-polished.
    pub fn scan_real_part_zeros(&self, r: f64, seeds: usize) -> Vec<f64> {
        if self.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let dp = self.derivative();
        let g = |t: f64| self.eval(Complex64::from_polar(r, t)).re;
        let dg = |t: f64| {
            let z = Complex64::from_polar(r, t);
            (dp.eval(z) * Complex64::i() * z).re
        };
        let h = TAU / seeds as f64;
        // an irrational phase keeps scan nodes off roots at rational angles
        let phase = 0.381_966_011_250_105 * h;
        let nodes: Vec<f64> = (0..=seeds).map(|k| phase + k as f64 * h).collect();
        let values: Vec<f64> = nodes.iter().map(|&t| g(t)).collect();
        let mut roots: Vec<f64> = Vec::new();
        for k in 1..=seeds {
            let (ga, gb) = (values[k - 1], values[k]);
            if (ga > 0.0) == (gb > 0.0) {
                continue;
            }
            let (mut a, mut b) = (nodes[k - 1], nodes[k]);
            let a_positive = ga > 0.0;
            while b - a > 1e-14 {
                let m = 0.5 * (a + b);
                if (g(m) > 0.0) == a_positive {
                    a = m;
                } else {
                    b = m;
                }
            }
            let mut t = 0.5 * (a + b);
            for _ in 0..2 {
                let slope = dg(t);
                if slope != 0.0 {
                    let next = t - g(t) / slope;
                    if next >= nodes[k - 1] && next <= nodes[k] {
                        t = next;
                    }
                }
            }
            let t = t.rem_euclid(TAU);
            if roots.iter().all(|&s| circular_gap(s, t) > 1e-9) {
                roots.push(t);
            }
        }
        roots.sort_by(f64::total_cmp);
        roots
    }
}

fn circular_gap(a: f64, b: f64) -> f64 {
    let x = (a - b).rem_euclid(TAU);
    x.min(TAU - x)
}

impl fmt::Debug for ComplexPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() != 0.0)
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})z"),
                _ => format!("({c})z^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;
    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        ComplexPoly::new(
            (0..n)
                .map(|k| self.coeffs.get(k).copied().unwrap_or(zero) + rhs.coeffs.get(k).copied().unwrap_or(zero))
                .collect(),
        )
    }
}

impl Neg for &ComplexPoly {
    type Output = ComplexPoly;
    fn neg(self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;
    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        self + &(-rhs)
    }
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;
    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPoly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPoly::new(out)
    }
}
