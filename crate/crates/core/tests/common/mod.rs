#![allow(dead_code)]

use std::path::PathBuf;

use holocurve::cli::load_curve;
use holocurve::HolomorphicCurve;

pub const GALLERY: [&str; 5] = ["linear", "exp", "zexp_plane", "gauss", "gauss_plane"];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.toml"))
}

pub fn fixture(name: &str) -> HolomorphicCurve {
    load_curve(&fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn geometric(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let step = (hi / lo).ln() / (count - 1) as f64;
    (0..count).map(|i| lo * (step * i as f64).exp()).collect()
}
