use crate::args::{
    CurveArgs, Format, Grid, MarginalArgs, MethodArg, ModelArgs, SampleArgs, SymmetryArg, TwinArgs, WeightArg,
};
use crate::output::{emit, num, resolve_sink, write_atomic, Meta, Sink, Table};
use etaue::bessel::{BesselModel, BesselWeightParams};
use etaue::gaussian::{
    gap_probability_real_twin, jpd_eigen, jpd_eigen_real_twin, marginal_p1, marginal_p2, marginal_p3, GaussianEnsemble,
};
use etaue::sampling::run_experiment;
use etaue::{Error, Result};
use serde_json::{json, Value};
use std::fs;
use std::path::{Path, PathBuf};

pub const TWIN_TOLERANCE: f64 = 1e-12;

fn ext(f: Format) -> &'static str {
    match f {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}

fn weight_name(w: WeightArg) -> &'static str {
    match w {
        WeightArg::Gaussian => "gaussian",
        WeightArg::Bessel => "bessel",
    }
}

fn model_meta(m: &ModelArgs) -> Value {
    let mut v = json!({ "weight": weight_name(m.weight), "eta": m.eta });
    match m.weight {
        WeightArg::Gaussian => {
            let sym = if m.symmetry == SymmetryArg::Real { "real" } else { "unitary" };
            v["symmetry"] = json!(sym);
        }
        WeightArg::Bessel => {
            v["zeta"] = json!(2.0 * m.eta - 1.0);
            v["alpha"] = json!(m.alpha);
        }
    }
    v
}

fn grid_meta(g: &Grid) -> Value {
    json!(format!("{}:{}:{}", g.lo, g.hi, g.n))
}

/// A closed-form curve for the selected model, validated before any evaluation.
enum Curve {
    Gaussian(GaussianEnsemble),
    /// Real-symmetric twin at `η̂`.
    Twin(f64),
    Bessel(Box<BesselModel>),
}

impl Curve {
    fn new(m: &ModelArgs) -> Result<Self> {
        m.params().validate()?;
        Ok(match (m.weight, m.symmetry) {
            (WeightArg::Gaussian, SymmetryArg::Unitary) => Curve::Gaussian(GaussianEnsemble::new(m.eta)?),
            (WeightArg::Gaussian, SymmetryArg::Real) => Curve::Twin(m.eta),
            (WeightArg::Bessel, _) => {
                Curve::Bessel(Box::new(BesselModel::new(BesselWeightParams::new(m.eta, m.alpha)?)))
            }
        })
    }

    fn density(&self, l: f64, method: MethodArg) -> Result<f64> {
        match self {
            Curve::Gaussian(g) => g.spectral_density(l),
            // the twin shares its eigenvalue jpd, hence ρ, with the unitary η = (η̂ + 1)/2
            Curve::Twin(h) => GaussianEnsemble::new((h + 1.0) / 2.0)?.spectral_density(l),
            Curve::Bessel(b) => b.spectral_density(l, method.into()),
        }
    }

    fn spacing(&self, s: f64) -> Result<f64> {
        match self {
            Curve::Gaussian(g) => g.gap_probability(s),
            Curve::Twin(h) => gap_probability_real_twin(s, *h),
            Curve::Bessel(b) => b.gap_probability(s),
        }
    }
}

fn curve_command(
    name: &str,
    a: &CurveArgs,
    argv: &[String],
    default_grid: Grid,
    columns: [&'static str; 2],
) -> Result<()> {
    let curve = Curve::new(&a.model)?;
    let grid = a.grid.unwrap_or(default_grid);
    let mut rows = Vec::with_capacity(grid.n);
    for x in grid.points() {
        let y = if name == "density" { curve.density(x, a.method)? } else { curve.spacing(x)? };
        rows.push(vec![x, y]);
    }
    let mut meta = model_meta(&a.model);
    meta["grid"] = grid_meta(&grid);
    if name == "density" && a.model.weight == WeightArg::Bessel {
        meta["method"] = json!(if a.method == MethodArg::Direct { "direct" } else { "reduced" });
    }
    let meta = Meta::new(argv, meta);
    let table = Table { columns: columns.to_vec(), rows };
    let sink = resolve_sink(&a.output.out, &format!("{name}.{}", ext(a.output.format)));
    emit(&sink, &table.render(&meta, a.output.format, &[]))?;
    Ok(())
}

pub fn density(a: &CurveArgs, argv: &[String]) -> Result<()> {
    curve_command("density", a, argv, Grid { lo: -4.0, hi: 4.0, n: 401 }, ["lambda", "rho"])
}

pub fn spacing(a: &CurveArgs, argv: &[String]) -> Result<()> {
    curve_command("spacing", a, argv, Grid { lo: 0.0, hi: 6.0, n: 301 }, ["s", "p"])
}

pub fn marginal(a: &MarginalArgs, argv: &[String]) -> Result<()> {
    etaue::EnsembleParams::gaussian(a.eta).validate()?;
    let mut rows = Vec::with_capacity(a.grid.n);
    for x in a.grid.points() {
        let v = match a.order {
            1 => marginal_p1(x, a.eta)?,
            2 => marginal_p2(x, a.y, a.eta)?,
            _ => marginal_p3(x, a.y, a.t, a.eta)?,
        };
        rows.push(vec![x, v]);
    }
    let mut meta = json!({ "weight": "gaussian", "eta": a.eta, "order": a.order, "grid": grid_meta(&a.grid) });
    if a.order >= 2 {
        meta["y"] = json!(a.y);
    }
    if a.order == 3 {
        meta["t"] = json!(a.t);
    }
    let meta = Meta::new(argv, meta);
    let table = Table { columns: vec!["x", "value"], rows };
    let sink = resolve_sink(&a.output.out, &format!("marginal.{}", ext(a.output.format)));
    emit(&sink, &table.render(&meta, a.output.format, &[]))?;
    Ok(())
}

/// `dir/stem.csv` → `dir/stem.summary.json`.
pub fn summary_path(main: &Path) -> PathBuf {
    let stem = main.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "sample".into());
    main.with_file_name(format!("{stem}.summary.json"))
}

pub fn sample(a: &SampleArgs, argv: &[String]) -> Result<()> {
    let params = a.model.params();
    params.validate()?;
    let r = run_experiment(params, a.n as usize, a.seed, a.bins as usize, a.range, a.workers as usize)?;
    let mut meta = model_meta(&a.model);
    meta["n"] = json!(a.n);
    meta["seed"] = json!(a.seed);
    meta["bins"] = json!(a.bins);
    meta["range"] = json!(format!("{}:{}", a.range.0, a.range.1));
    let meta = Meta::new(argv, meta);
    let rows = r
        .samples
        .iter()
        .map(|m| {
            let (e, p) = (m.entries, m.pair);
            vec![e.x, e.y, e.t, e.s, p.lambda1, p.lambda2, p.spacing]
        })
        .collect();
    let table = Table { columns: vec!["x", "y", "t", "s", "lambda1", "lambda2", "spacing"], rows };
    let mut summary = serde_json::to_value(&r).expect("experiment result serializes");
    // wall time varies between runs; the files must not
    if let Some(o) = summary.as_object_mut() {
        o.remove("elapsed_seconds");
    }
    let summary = json!({ "meta": meta, "summary": summary });
    match resolve_sink(&a.output.out, &format!("sample.{}", ext(a.output.format))) {
        Sink::File(p) => {
            write_atomic(&p, table.render(&meta, a.output.format, &[]).as_bytes())?;
            let text = serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n";
            if let Err(e) = write_atomic(&summary_path(&p), text.as_bytes()) {
                let _ = fs::remove_file(&p);
                return Err(e.into());
            }
        }
        // no file to sit beside, so the summary rides in the table's own header
        Sink::Stdout => emit(&Sink::Stdout, &table.render(&meta, a.output.format, &[("summary", summary)]))?,
    }
    eprintln!(
        "sample: n = {}, KS(density) = {:.5}, KS(spacing) = {:.5}",
        r.n_samples, r.gof_density.ks_distance, r.gof_spacing.ks_distance
    );
    Ok(())
}

pub fn twin_check(a: &TwinArgs, argv: &[String]) -> Result<()> {
    if !(0.5..=1.0).contains(&a.eta) {
        return Err(Error::Domain(format!("twin check needs eta in [1/2, 1], got {}", a.eta)));
    }
    let eta_hat = 2.0 * a.eta - 1.0;
    let pts: Vec<f64> = a.grid.points().collect();
    let mut rows = Vec::with_capacity(pts.len() * pts.len());
    let mut worst: f64 = 0.0;
    for &l1 in &pts {
        for &l2 in &pts {
            let u = jpd_eigen(l1, l2, a.eta)?;
            let r = jpd_eigen_real_twin(l1, l2, eta_hat)?;
            let d = (u - r).abs();
            worst = worst.max(d);
            rows.push(vec![l1, l2, u, r, d]);
        }
    }
    let pass = worst < TWIN_TOLERANCE;
    let meta = Meta::new(argv, json!({ "eta": a.eta, "eta_hat": eta_hat, "grid": grid_meta(&a.grid) }));
    let table = Table { columns: vec!["lambda1", "lambda2", "unitary", "real", "abs_diff"], rows };
    let extra = [("max_abs_diff", json!(num(worst))), ("tolerance", json!(TWIN_TOLERANCE)), ("pass", json!(pass))];
    let sink = resolve_sink(&a.output.out, &format!("twin-check.{}", ext(a.output.format)));
    emit(&sink, &table.render(&meta, a.output.format, &extra))?;
    eprintln!("twin-check: eta = {}, eta_hat = {eta_hat}, max |diff| = {worst:.3e}", a.eta);
    if !pass {
        return Err(Error::Validation(format!("max |jpd_U - jpd_R| = {worst:.3e} exceeds {TWIN_TOLERANCE:e}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_sits_beside_samples() {
        assert_eq!(summary_path(Path::new("out/run.csv")), PathBuf::from("out/run.summary.json"));
        assert_eq!(summary_path(Path::new("run")), PathBuf::from("run.summary.json"));
    }
}
