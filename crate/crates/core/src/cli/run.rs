use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::json;

use super::curve_file::load_curve;
use super::{CommandKind, RunConfig};
use crate::bound::{theorem_constant, verify_theorem};
use crate::characteristic::{
    characteristic_area, characteristic_jensen, reduced_characteristic, CharacteristicTable, CROSS_CHECK_TOL,
};
use crate::curve::HolomorphicCurve;
use crate::error::{Error, Result};
use crate::lemmas::run_lemma_harness;
use crate::locus::{branch_asymptotics, count_branch_bound, regularity_radius, trace_branches};

/// What a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// All verdicts in scope are true.
    pub passed: bool,
    pub artifacts: Vec<PathBuf>,
    /// Human-readable summary for standard output.
    pub summary: String,
}

struct Writer {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Writer {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        Ok(Writer {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn put(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.written.push(path);
        Ok(())
    }

    fn put_json(&mut self, name: &str, value: &serde_json::Value) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).expect("json value");
        text.push('\n');
        self.put(name, &text)
    }
}

fn curve(cfg: &RunConfig) -> Result<HolomorphicCurve> {
    let path = cfg
        .input
        .as_ref()
        .ok_or_else(|| Error::Input(format!("{} needs --input", cfg.command.name())))?;
    load_curve(path)
}

pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let mut out = Writer::new(&cfg.out)?;
    let (passed, summary) = match cfg.command {
        CommandKind::Analyze => analyze(cfg, &mut out)?,
        CommandKind::Characteristic => characteristic(cfg, &mut out)?,
        CommandKind::Locus => locus(cfg, &mut out)?,
        CommandKind::Lemmas => lemmas(cfg, &mut out)?,
        CommandKind::VerifyBound => verify_bound(cfg, &mut out)?,
    };
    Ok(RunOutcome {
        passed,
        artifacts: out.written,
        summary,
    })
}

fn analyze(cfg: &RunConfig, out: &mut Writer) -> Result<(bool, String)> {
    let f = curve(cfg)?;
    let growth = f.estimate_growth(cfg.r_min, cfg.r_max, 12)?;
    let radii = cfg.radii();
    let mut t_jensen = Vec::new();
    let mut t_area = Vec::new();
    let mut t_reduced = Vec::new();
    for &r in &radii {
        t_jensen.push(characteristic_jensen(&f, r, cfg.tol)?);
        t_area.push(characteristic_area(&f, r, cfg.tol)?);
        t_reduced.push(reduced_characteristic(&f, r, cfg.tol)?);
    }
    let gap = t_jensen
        .iter()
        .zip(&t_area)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let routes_agree = gap <= CROSS_CHECK_TOL;
    let origin = Complex64::new(0.0, 0.0);
    out.put_json(
        "analyze.json",
        &json!({
            "n": f.n(),
            "sigma": f.sigma(),
            "K": f.k(),
            "sigma_hat": growth.sigma_hat,
            "K_hat": growth.k_hat,
            "u_at_0": f.log_norm_u(origin),
            "spherical_derivative_at_0": f.spherical_derivative(origin),
            "radii": radii,
            "T_jensen": t_jensen,
            "T_area": t_area,
            "T_reduced": t_reduced,
            "route_gap": gap,
            "theorem_constant": theorem_constant(f.n(), f.sigma(), cfg.epsilon),
            "verdicts": { "routes_agree": routes_agree },
        }),
    )?;
    let summary = format!(
        "n = {}  sigma = {}  sigma_hat = {:.4}  K_hat = {:.4}\nT({}) = {:.8}  route gap = {:.2e}  {}",
        f.n(),
        f.sigma(),
        growth.sigma_hat,
        growth.k_hat,
        cfg.r_max,
        t_jensen.last().copied().unwrap_or(f64::NAN),
        gap,
        verdict(routes_agree)
    );
    Ok((routes_agree, summary))
}

fn characteristic(cfg: &RunConfig, out: &mut Writer) -> Result<(bool, String)> {
    let f = curve(cfg)?;
    let table = CharacteristicTable::compute(&f, &cfg.radii(), cfg.tol)?;
    out.put("characteristic.csv", &table.to_csv())?;
    let gap = table.max_route_gap();
    let ok = gap <= CROSS_CHECK_TOL;
    Ok((ok, format!("max |T_area - T_jensen| = {gap:.2e}  {}", verdict(ok))))
}

fn locus(cfg: &RunConfig, out: &mut Writer) -> Result<(bool, String)> {
    let f = curve(cfg)?;
    let exps = f.reduced_exponents();
    let count = count_branch_bound(&exps, f.sigma());
    let r0 = match regularity_radius(&exps) {
        Err(Error::LocusEmpty) => {
            out.put_json(
                "locus.json",
                &json!({ "r0": null, "branches": [], "branch_count": count }),
            )?;
            return Ok((count.ok, "locus empty: all exponents coincide".to_string()));
        }
        other => other?,
    };
    if cfg.r_max <= r0 {
        return Err(Error::Input(format!(
            "--rmax = {} must exceed the regularity radius r0 = {r0}",
            cfg.r_max
        )));
    }
    let summary = trace_branches(&exps, r0, cfg.r_max)?;
    let check_fits = cfg.r_max >= 4.0 * r0;
    let mut fits = Vec::new();
    let mut ok = count.ok;
    let mut seen = std::collections::HashMap::new();
    for branch in &summary.branches {
        let k = seen.entry(branch.pair).or_insert(0usize);
        out.put(
            &format!("branch_{}_{}_{}.csv", branch.pair.0, branch.pair.1, k),
            &branch.to_csv(),
        )?;
        *k += 1;
        if check_fits {
            match branch_asymptotics(branch) {
                Ok(fit) => fits.push(json!(fit)),
                Err(e) => {
                    ok = false;
                    fits.push(json!({ "pair": branch.pair, "error": e.to_string() }));
                }
            }
        }
    }
    let mut doc = summary.to_json();
    doc["branch_count"] = json!(count);
    doc["asymptotic_fits"] = json!(fits);
    out.put_json("locus.json", &doc)?;
    let text = format!(
        "r0 = {r0:.4}  branches = {}  count {} <= {}  nu({}) - nu(r0) = {:.6}  {}",
        summary.branches.len(),
        count.count,
        count.bound,
        cfg.r_max,
        summary.riesz_mass_within(cfg.r_max),
        verdict(ok)
    );
    Ok((ok, text))
}

fn lemmas(cfg: &RunConfig, out: &mut Writer) -> Result<(bool, String)> {
    let report = run_lemma_harness(cfg.seed, cfg.count)?;
    let green_ok = (report.green_minimum.value - 1.0 / 3.0).abs() <= 1e-9;
    let ok = report.passed() && green_ok;
    out.put_json("lemmas.json", &json!(report))?;
    Ok((
        ok,
        format!(
            "seed {}  count {}  min margins {:.3e} / {:.3e}  failures {}  Green minimum {:.12}  {}",
            report.seed,
            report.count,
            report.lemma1_min_margin,
            report.lemma2_min_margin,
            report.failures.len(),
            report.green_minimum.value,
            verdict(ok)
        ),
    ))
}

fn verify_bound(cfg: &RunConfig, out: &mut Writer) -> Result<(bool, String)> {
    let f = curve(cfg)?;
    let report = verify_theorem(&f, &cfg.radii(), cfg.epsilon);
    let mut text = report.to_json();
    text.push('\n');
    out.put("bound.json", &text)?;
    let mut prop2 = String::from("r,gap,bound\n");
    for row in &report.prop2_margin_curve {
        prop2.push_str(&format!("{},{},{}\n", row.r, row.gap, row.bound));
    }
    out.put("prop2.csv", &prop2)?;
    let mut ch = String::from("r,T,bound,T_reduced,prop4_bound\n");
    for row in &report.characteristic {
        ch.push_str(&format!(
            "{},{},{},{},{}\n",
            row.r, row.t, row.bound, row.t_reduced, row.prop4_bound
        ));
    }
    out.put("characteristic_bound.csv", &ch)?;

    let v = report.verdicts;
    let mut s = format!(
        "n = {}  sigma = {}  K = {} ({})  C(n, sigma) = {:.4}\n",
        report.n, report.sigma, report.k, report.k_source, report.theorem_constant
    );
    let rows = [
        (
            "gradient at ties",
            format!(
                "worst margin {:.3e} over {} points",
                report.prop1_worst, report.prop1_points
            ),
            v.prop1,
        ),
        (
            "u - u* growth",
            format!("threshold {:?}", report.prop2_threshold),
            v.prop2,
        ),
        (
            "jump asymptotics",
            format!(
                "b = {:?} <= {}, c0 = {:.4} <= {:.4}",
                report.b, report.b_ceiling, report.c0, report.c0_ceiling
            ),
            v.prop3,
        ),
        (
            "reduced characteristic",
            format!("constant {:.4}", report.prop4_constant),
            v.prop4,
        ),
        ("T(r) <= K C r^(sigma+1)", String::new(), v.theorem),
        ("doubling envelope", String::new(), v.doubling),
    ];
    for (name, detail, ok) in rows {
        s.push_str(&format!("{:<26} {:<5} {detail}\n", name, verdict(ok)));
    }
    for e in &report.errors {
        s.push_str(&format!("error: {e}\n"));
    }
    Ok((v.all(), s.trim_end().to_string()))
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}
