//! Disc potential theory: the Green kernel of the unit disc, nonnegative
//! harmonic and superharmonic functions on discs, and randomized harnesses
//! for the two boundary-gradient lemmas
//!
//! * harmonic `v >= 0` on `B(a,R)`, `v(z1) = 0` on the boundary:
//!   `v(a) <= 2R |grad v(z1)|`;
//! * superharmonic `v >= 0`, `v(z1) = 0`:
//!   `mu_v(B(a, R/2)) <= 3R |grad v(z1)|`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::quadrature::{golden_max, periodic_sup};

/// Boundary grid size for generated Poisson data.
pub const POISSON_GRID: usize = 4096;
/// Tolerance on `v(z1) = 0` and on `|z1 - a| = R`.
pub const BOUNDARY_ZERO_TOL: f64 = 1e-10;
/// Allowed negative slack on lemma margins.
pub const MARGIN_TOL: f64 = 1e-8;
/// Generated atoms stay this far (relative to `R`) from `|zeta - a| = R/2`.
pub const ATOM_REJECTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Disc {
    #[serde(serialize_with = "ser_complex")]
    pub center: Complex64,
    pub radius: f64,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

impl Disc {
    pub fn unit() -> Self {
        Disc {
            center: Complex64::new(0.0, 0.0),
            radius: 1.0,
        }
    }

    pub fn to_local(&self, z: Complex64) -> Complex64 {
        (z - self.center) / self.radius
    }

    pub fn to_global(&self, w: Complex64) -> Complex64 {
        self.center + w * self.radius
    }
}

/// Green function of the unit disc with pole at `zeta`:
/// `log|1 - z conj(zeta)| - log|z - zeta|`.
pub fn green_disc(z: Complex64, zeta: Complex64) -> Result<f64> {
    if z.norm() > 1.0 + 1e-12 || zeta.norm() >= 1.0 {
        return Err(Error::Input(format!(
            "green_disc needs |z| <= 1 and |zeta| < 1, got z = {z}, zeta = {zeta}"
        )));
    }
    if z == zeta {
        return Err(Error::Pole(z));
    }
    let g = (1.0 - z * zeta.conj()).norm().ln() - (z - zeta).norm().ln();
    Ok(g.max(0.0))
}

/// `grad_z G(z, zeta)` as a complex number.
pub fn green_gradient(z: Complex64, zeta: Complex64) -> Complex64 {
    // grad log|h| = conj(h'/h)
    (-zeta.conj() / (1.0 - z * zeta.conj())).conj() - (1.0 / (z - zeta)).conj()
}

/// `|dG/d|z||` at a point of the unit circle.
pub fn green_normal_derivative(z: Complex64, zeta: Complex64) -> f64 {
    let radial = z / z.norm();
    (green_gradient(z, zeta) * radial.conj()).re.abs()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreenMinimum {
    pub value: f64,
    #[serde(serialize_with = "ser_complex")]
    pub z: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub zeta: Complex64,
}

/// Minimize `|dG/d|z||(z, zeta)` over `|z| = 1` and `|zeta| = zeta_modulus`.
pub fn minimize_green_boundary_derivative(zeta_modulus: f64) -> GreenMinimum {
    let scan = 64;
    let mut best = GreenMinimum {
        value: f64::INFINITY,
        z: Complex64::new(1.0, 0.0),
        zeta: Complex64::new(zeta_modulus, 0.0),
    };
    for k in 0..scan {
        let psi = 2.0 * PI * k as f64 / scan as f64;
        let zeta = Complex64::from_polar(zeta_modulus, psi);
        let (phi, neg) = periodic_sup(
            |phi| -green_normal_derivative(Complex64::from_polar(1.0, phi), zeta),
            256,
        );
        if -neg < best.value {
            best = GreenMinimum {
                value: -neg,
                z: Complex64::from_polar(1.0, phi),
                zeta,
            };
        }
    }
    // polish the pole angle with the boundary angle re-optimized inside
    let psi0 = best.zeta.arg();
    let h = 2.0 * PI / scan as f64;
    let inner = |psi: f64| {
        let zeta = Complex64::from_polar(zeta_modulus, psi);
        periodic_sup(
            |phi| -green_normal_derivative(Complex64::from_polar(1.0, phi), zeta),
            256,
        )
    };
    let (psi, _) = golden_max(|psi| inner(psi).1, psi0 - h, psi0 + h, 1e-10);
    let (phi, neg) = inner(psi);
    if -neg <= best.value {
        best = GreenMinimum {
            value: -neg,
            z: Complex64::from_polar(1.0, phi),
            zeta: Complex64::from_polar(zeta_modulus, psi),
        };
    }
    best
}

/// How a nonnegative harmonic function on a disc is given.
#[derive(Debug, Clone, PartialEq)]
pub enum HarmonicRepr {
    /// Nonnegative boundary values on a uniform angle grid (local angle
    /// `theta_k = 2 pi k / N`); `v` is their Poisson integral.
    PoissonData(Vec<f64>),
    /// `v(z) = Re Q(z) + constant` in global coordinates.
    RealPartPoly { poly: ComplexPoly, constant: f64 },
    /// `weight * Re((p + w)/(p - w))` with `p = e^{i pole_angle}` and `w` the
    /// local coordinate: the Poisson kernel of a boundary point, harmonic
    /// inside and vanishing on the rest of the circle.
    PoissonKernel { pole_angle: f64, weight: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscHarmonic {
    pub disc: Disc,
    pub repr: HarmonicRepr,
    /// Analytic `F` in local coordinates with `v = Re F` (Poisson data only).
    spectrum: ComplexPoly,
}

/// `F(w) = c_0 + sum 2 c_k w^k` from the DFT of boundary samples, so that
/// `Re F` on the circle interpolates the data. Coefficients below
/// `1e-15` of the largest are dropped as noise.
fn poisson_spectrum(samples: &[f64]) -> ComplexPoly {
    let n = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let mut coeffs: Vec<Complex64> = (0..n.div_ceil(2))
        .map(|k| {
            let scale = if k == 0 { 1.0 } else { 2.0 };
            buf[k] * (scale / n as f64)
        })
        .collect();
    let top = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    for c in &mut coeffs {
        if c.norm() <= 1e-15 * top {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    ComplexPoly::new(coeffs)
}

impl DiscHarmonic {
    pub fn poisson_data(disc: Disc, samples: Vec<f64>) -> Result<Self> {
        if samples.len() < 8 {
            return Err(Error::Validation("Poisson data needs at least 8 samples".into()));
        }
        if let Some(bad) = samples.iter().find(|s| !(**s >= 0.0)) {
            return Err(Error::Validation(format!(
                "Poisson data must be nonnegative, found {bad}"
            )));
        }
        let spectrum = poisson_spectrum(&samples);
        Ok(DiscHarmonic {
            disc,
            repr: HarmonicRepr::PoissonData(samples),
            spectrum,
        })
    }

    pub fn real_part_poly(disc: Disc, poly: ComplexPoly, constant: f64) -> Self {
        DiscHarmonic {
            disc,
            repr: HarmonicRepr::RealPartPoly { poly, constant },
            spectrum: ComplexPoly::zero(),
        }
    }

    pub fn poisson_kernel(disc: Disc, pole_angle: f64, weight: f64) -> Self {
        DiscHarmonic {
            disc,
            repr: HarmonicRepr::PoissonKernel { pole_angle, weight },
            spectrum: ComplexPoly::zero(),
        }
    }

    pub fn zero(disc: Disc) -> Self {
        Self::real_part_poly(disc, ComplexPoly::zero(), 0.0)
    }

    pub fn value(&self, z: Complex64) -> f64 {
        let w = self.disc.to_local(z);
        match &self.repr {
            HarmonicRepr::PoissonData(_) => self.spectrum.eval(w).re,
            HarmonicRepr::RealPartPoly { poly, constant } => poly.eval(z).re + constant,
            HarmonicRepr::PoissonKernel { pole_angle, weight } => {
                let p = Complex64::from_polar(1.0, *pole_angle);
                weight * ((p + w) / (p - w)).re
            }
        }
    }

    /// `grad v(z)` as a complex number, in global coordinates.
    pub fn gradient(&self, z: Complex64) -> Complex64 {
        let w = self.disc.to_local(z);
        let r = self.disc.radius;
        match &self.repr {
            HarmonicRepr::PoissonData(_) => self.spectrum.derivative().eval(w).conj() / r,
            HarmonicRepr::RealPartPoly { poly, .. } => poly.derivative().eval(z).conj(),
            HarmonicRepr::PoissonKernel { pole_angle, weight } => {
                let p = Complex64::from_polar(1.0, *pole_angle);
                (2.0 * p / ((p - w) * (p - w))).conj() * (*weight / r)
            }
        }
    }

    /// Same function expressed on the unit disc via `z = a + R w`.
    pub fn to_unit_disc(&self) -> Self {
        let mut out = self.clone();
        out.disc = Disc::unit();
        if let HarmonicRepr::RealPartPoly { poly, constant } = &self.repr {
            out.repr = HarmonicRepr::RealPartPoly {
                poly: poly.compose_affine(self.disc.center, self.disc.radius),
                constant: *constant,
            };
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscSuperharmonic {
    /// Atoms `(zeta, weight)` of the Riesz measure, global coordinates.
    pub masses: Vec<(Complex64, f64)>,
    pub harmonic: DiscHarmonic,
}

impl DiscSuperharmonic {
    pub fn new(masses: Vec<(Complex64, f64)>, harmonic: DiscHarmonic) -> Result<Self> {
        let disc = harmonic.disc;
        for &(zeta, w) in &masses {
            if !(w > 0.0) {
                return Err(Error::Validation(format!("atom weight must be positive, got {w}")));
            }
            if disc.to_local(zeta).norm() >= 1.0 {
                return Err(Error::Validation(format!("atom {zeta} lies outside the open disc")));
            }
        }
        Ok(DiscSuperharmonic { masses, harmonic })
    }

    pub fn disc(&self) -> Disc {
        self.harmonic.disc
    }

    pub fn value(&self, z: Complex64) -> Result<f64> {
        let disc = self.disc();
        let w = disc.to_local(z);
        let mut v = self.harmonic.value(z);
        for &(zeta, weight) in &self.masses {
            v += weight * green_disc(w, disc.to_local(zeta))?;
        }
        Ok(v)
    }

    pub fn gradient(&self, z: Complex64) -> Complex64 {
        let disc = self.disc();
        let w = disc.to_local(z);
        let atoms: Complex64 = self
            .masses
            .iter()
            .map(|&(zeta, weight)| green_gradient(w, disc.to_local(zeta)) * weight)
            .sum();
        atoms / disc.radius + self.harmonic.gradient(z)
    }

    /// Riesz mass of the open disc `B(a, R/2)`.
    pub fn inner_mass(&self) -> f64 {
        let disc = self.disc();
        self.masses
            .iter()
            .filter(|(zeta, _)| (zeta - disc.center).norm() < 0.5 * disc.radius)
            .map(|(_, w)| w)
            .sum()
    }

    pub fn to_unit_disc(&self) -> Self {
        let disc = self.disc();
        DiscSuperharmonic {
            masses: self.masses.iter().map(|&(zeta, w)| (disc.to_local(zeta), w)).collect(),
            harmonic: self.harmonic.to_unit_disc(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma1Check {
    /// `v(a)`
    pub lhs: f64,
    /// `2R |grad v(z1)|`
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Lemma2Check {
    /// `mu_v(B(a, R/2))`
    pub mass: f64,
    /// `3R |grad v(z1)|`
    pub rhs: f64,
    pub margin: f64,
}

fn check_boundary_point(disc: Disc, z1: Complex64) -> Result<()> {
    let rel = ((z1 - disc.center).norm() - disc.radius).abs() / disc.radius;
    if rel > BOUNDARY_ZERO_TOL {
        return Err(Error::Input(format!(
            "z1 = {z1} is not on the boundary of B({}, {})",
            disc.center, disc.radius
        )));
    }
    Ok(())
}

fn check_zero(value: f64, z1: Complex64) -> Result<()> {
    if value.abs() > BOUNDARY_ZERO_TOL {
        return Err(Error::Input(format!("v(z1) = {value:e} at z1 = {z1}, expected 0")));
    }
    Ok(())
}

pub fn verify_lemma1(v: &DiscHarmonic, z1: Complex64) -> Result<Lemma1Check> {
    check_boundary_point(v.disc, z1)?;
    check_zero(v.value(z1), z1)?;
    let lhs = v.value(v.disc.center);
    let rhs = 2.0 * v.disc.radius * v.gradient(z1).norm();
    Ok(Lemma1Check {
        lhs,
        rhs,
        margin: rhs - lhs,
    })
}

pub fn verify_lemma2(v: &DiscSuperharmonic, z1: Complex64) -> Result<Lemma2Check> {
    let disc = v.disc();
    check_boundary_point(disc, z1)?;
    for &(zeta, _) in &v.masses {
        if ((zeta - disc.center).norm() - 0.5 * disc.radius).abs() <= 1e-12 * disc.radius {
            return Err(Error::Input(format!("atom {zeta} lies on the circle |zeta - a| = R/2")));
        }
    }
    check_zero(v.value(z1)?, z1)?;
    let mass = v.inner_mass();
    let rhs = 3.0 * disc.radius * v.gradient(z1).norm();
    Ok(Lemma2Check {
        mass,
        rhs,
        margin: rhs - mass,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Instance {
    pub v: DiscHarmonic,
    pub z1: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma2Instance {
    pub v: DiscSuperharmonic,
    pub z1: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaFamily {
    pub lemma1: Vec<Lemma1Instance>,
    pub lemma2: Vec<Lemma2Instance>,
}

fn random_disc(rng: &mut ChaCha8Rng) -> Disc {
    Disc {
        center: Complex64::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0)),
        radius: rng.random_range(0.2..5.0),
    }
}

/// Samples of `|q(e^{i theta})|^2` with `q(w) = (w - e^{i theta1}) s(w)` for
/// a random polynomial `s`: nonnegative with a zero at `theta1`.
fn vanishing_density(rng: &mut ChaCha8Rng, theta1: f64) -> Vec<f64> {
    let deg = rng.random_range(0..=6);
    let s = ComplexPoly::new(
        (0..=deg)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect(),
    );
    let root = Complex64::from_polar(1.0, theta1);
    let q = &ComplexPoly::new(vec![-root, Complex64::new(1.0, 0.0)]) * &s;
    let q = if q.is_zero() {
        ComplexPoly::new(vec![-root, Complex64::new(1.0, 0.0)])
    } else {
        q
    };
    (0..POISSON_GRID)
        .map(|k| {
            let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / POISSON_GRID as f64);
            q.eval(w).norm_sqr()
        })
        .collect()
}

/// Deterministic family of `count` instances for each lemma.
pub fn random_lemma_family(seed: u64, count: usize) -> LemmaFamily {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lemma1 = Vec::with_capacity(count);
    for _ in 0..count {
        let disc = random_disc(&mut rng);
        let theta1 = rng.random_range(0.0..2.0 * PI);
        let density = vanishing_density(&mut rng, theta1);
        let v = DiscHarmonic::poisson_data(disc, density).expect("generated density is valid");
        lemma1.push(Lemma1Instance {
            v,
            z1: disc.to_global(Complex64::from_polar(1.0, theta1)),
        });
    }
    let mut lemma2 = Vec::with_capacity(count);
    for _ in 0..count {
        let disc = random_disc(&mut rng);
        let theta1 = rng.random_range(0.0..2.0 * PI);
        let atoms = rng.random_range(1..=5);
        let mut masses = Vec::with_capacity(atoms);
        while masses.len() < atoms {
            let rho: f64 = rng.random_range(0.0f64..0.98).sqrt();
            if (rho - 0.5).abs() < ATOM_REJECTION {
                continue;
            }
            let w = Complex64::from_polar(rho, rng.random_range(0.0..2.0 * PI));
            masses.push((disc.to_global(w), rng.random_range(0.05..2.0)));
        }
        let harmonic = if rng.random_bool(0.5) {
            DiscHarmonic::zero(disc)
        } else {
            let density = vanishing_density(&mut rng, theta1);
            DiscHarmonic::poisson_data(disc, density).expect("generated density is valid")
        };
        lemma2.push(Lemma2Instance {
            v: DiscSuperharmonic::new(masses, harmonic).expect("generated atoms are valid"),
            z1: disc.to_global(Complex64::from_polar(1.0, theta1)),
        });
    }
    LemmaFamily { lemma1, lemma2 }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaFailure {
    pub lemma: u8,
    pub index: usize,
    pub margin: f64,
}

/// Harness report: per-instance margins, minima, and failures.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub seed: u64,
    pub count: usize,
    pub lemma1_margins: Vec<f64>,
    pub lemma2_margins: Vec<f64>,
    pub lemma1_min_margin: f64,
    pub lemma2_min_margin: f64,
    pub green_minimum: GreenMinimum,
    pub failures: Vec<LemmaFailure>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run_lemma_harness(seed: u64, count: usize) -> Result<LemmaReport> {
    let family = random_lemma_family(seed, count);
    let mut failures = Vec::new();
    let mut lemma1_margins = Vec::with_capacity(count);
    for (index, inst) in family.lemma1.iter().enumerate() {
        let m = verify_lemma1(&inst.v, inst.z1)?.margin;
        if m < -MARGIN_TOL {
            failures.push(LemmaFailure {
                lemma: 1,
                index,
                margin: m,
            });
        }
        lemma1_margins.push(m);
    }
    let mut lemma2_margins = Vec::with_capacity(count);
    for (index, inst) in family.lemma2.iter().enumerate() {
        let m = verify_lemma2(&inst.v, inst.z1)?.margin;
        if m < -MARGIN_TOL {
            failures.push(LemmaFailure {
                lemma: 2,
                index,
                margin: m,
            });
        }
        lemma2_margins.push(m);
    }
    let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(LemmaReport {
        seed,
        count,
        lemma1_min_margin: min(&lemma1_margins),
        lemma2_min_margin: min(&lemma2_margins),
        lemma1_margins,
        lemma2_margins,
        green_minimum: minimize_green_boundary_derivative(0.5),
        failures,
    })
}
