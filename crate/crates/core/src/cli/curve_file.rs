//! TOML curve specifications.
//!
//! ```toml
//! n = 1
//! sigma = 0.0
//! K = 0.5            # optional
//!
//! [[components]]     # f_0
//! type = "exppoly"
//! coeffs = [[0.0, 0.0], [1.0, 0.0]]
//!
//! [[components]]     # f_1 = 1
//! type = "exppoly"
//! coeffs = []
//! ```
//!
//! `poly` and `exppoly` take `coeffs`; `polyexp` takes `factor` and
//! `exponent`. Coefficients are `[re, im]` pairs in ascending degree.

use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::curve::{CurveComponent, HolomorphicCurve};
use crate::error::{Error, Result};
use crate::poly::ComplexPoly;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveSpec {
    n: usize,
    sigma: f64,
    #[serde(rename = "K")]
    k: Option<f64>,
    components: Vec<ComponentSpec>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum ComponentSpec {
    Poly {
        coeffs: Vec<[f64; 2]>,
    },
    Exppoly {
        coeffs: Vec<[f64; 2]>,
    },
    Polyexp {
        factor: Vec<[f64; 2]>,
        exponent: Vec<[f64; 2]>,
    },
}

fn poly(coeffs: &[[f64; 2]]) -> ComplexPoly {
    ComplexPoly::new(coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect())
}

impl ComponentSpec {
    fn build(&self) -> CurveComponent {
        match self {
            ComponentSpec::Poly { coeffs } => CurveComponent::Poly(poly(coeffs)),
            ComponentSpec::Exppoly { coeffs } => CurveComponent::ExpPoly(poly(coeffs)),
            ComponentSpec::Polyexp { factor, exponent } => CurveComponent::PolyExp {
                factor: poly(factor),
                exponent: poly(exponent),
            },
        }
    }
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Line of the `j`-th `[[components]]` header (1-based lines).
fn component_line(text: &str, j: usize) -> usize {
    text.lines()
        .enumerate()
        .filter(|(_, l)| l.trim_start().starts_with("[[components]]"))
        .nth(j)
        .map_or(1, |(i, _)| i + 1)
}

fn line_of_key(text: &str, key: &str) -> usize {
    text.lines()
        .position(|l| {
            let l = l.trim_start();
            l.strip_prefix(key)
                .is_some_and(|rest| rest.trim_start().starts_with('='))
        })
        .map_or(1, |i| i + 1)
}

/// Parse and validate a curve specification.
pub fn parse_curve(text: &str) -> Result<HolomorphicCurve> {
    let spec: CurveSpec = toml::from_str(text).map_err(|e| Error::Parse {
        line: e.span().map_or(1, |s| line_of_offset(text, s.start)),
        message: e.message().to_string(),
    })?;
    if spec.components.len() != spec.n + 1 {
        return Err(Error::Parse {
            line: line_of_key(text, "n"),
            message: format!(
                "n = {} needs {} components, found {}",
                spec.n,
                spec.n + 1,
                spec.components.len()
            ),
        });
    }
    let components = spec.components.iter().map(ComponentSpec::build).collect();
    HolomorphicCurve::new(components, spec.sigma, spec.k).map_err(|e| {
        let message = e.to_string();
        let line = if let Some(j) = message
            .strip_prefix("component ")
            .and_then(|rest| rest.split(|c: char| !c.is_ascii_digit()).next())
            .and_then(|d| d.parse::<usize>().ok())
        {
            component_line(text, j)
        } else if message.starts_with("sigma") {
            line_of_key(text, "sigma")
        } else if message.starts_with('K') {
            line_of_key(text, "K")
        } else {
            1
        };
        Error::Parse { line, message }
    })
}

pub fn load_curve(path: &Path) -> Result<HolomorphicCurve> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_curve(&text)
}
