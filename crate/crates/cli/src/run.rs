use std::fmt;
use std::fs;
use std::path::PathBuf;

use kummer_core::checks::{self, Status};
use kummer_core::io::{CsvTable, SpectralDataset};
use kummer_core::meanfield::{self, BifurcationKind, BifurcationLocation, Location};
use kummer_core::semiclassics::{self, Regime};
use kummer_core::{quantum, ModelSpec};
use serde_json::json;

use crate::config::{CommandKind, Options, RunConfig};
use crate::svg::{Chart, Series};

#[derive(Debug)]
pub enum RunError {
    Compute(kummer_core::Error),
    Io { path: PathBuf, source: std::io::Error },
    Serialize(serde_json::Error),
    ChecksFailed(usize),
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Compute(e) => write!(f, "{e}"),
            RunError::Io { path, source } => write!(f, "cannot write {}: {source}", path.display()),
            RunError::Serialize(e) => write!(f, "serialization failed: {e}"),
            RunError::ChecksFailed(k) => write!(f, "verify: {k} invariant check(s) failed"),
        }
    }
}

impl From<kummer_core::Error> for RunError {
    fn from(e: kummer_core::Error) -> Self {
        RunError::Compute(e)
    }
}

impl From<serde_json::Error> for RunError {
    fn from(e: serde_json::Error) -> Self {
        RunError::Serialize(e)
    }
}

/// Files produced by a command, written in order by [`Writer::flush`].
#[derive(Debug, Default)]
pub struct Writer {
    files: Vec<(String, String)>,
}

impl Writer {
    fn add(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }

    fn csv(&mut self, name: &str, table: &CsvTable) {
        self.add(name, table.to_csv_string());
    }

    fn flush(self, dir: &PathBuf) -> Result<Vec<PathBuf>, RunError> {
        fs::create_dir_all(dir).map_err(|source| RunError::Io { path: dir.clone(), source })?;
        let mut written = Vec::with_capacity(self.files.len());
        for (name, contents) in self.files {
            let path = dir.join(name);
            fs::write(&path, contents).map_err(|source| RunError::Io { path: path.clone(), source })?;
            written.push(path);
        }
        Ok(written)
    }
}

pub fn run(config: &RunConfig) -> Result<Vec<PathBuf>, RunError> {
    let mut w = Writer::default();
    let spec = &config.model;
    match (&config.command, &config.options) {
        (CommandKind::Spectrum, _) => spectrum(spec, config.plot, &mut w)?,
        (CommandKind::FixedPoints, _) => fixed_points(spec, config.plot, &mut w)?,
        (CommandKind::Bifurcations, _) => bifurcations(spec, &mut w)?,
        (CommandKind::Sweep, &Options::Sweep { eps_min, eps_max, eps_steps }) => {
            let grid: Vec<f64> = (0..eps_steps)
                .map(|k| eps_min + (eps_max - eps_min) * k as f64 / (eps_steps - 1) as f64)
                .collect();
            sweep(spec, &grid, config.jobs, config.plot, &mut w)?
        }
        (CommandKind::Trajectory, &Options::Trajectory { p, q, t_end, dt }) => {
            trajectory(spec, p, q, t_end, dt, config.plot, &mut w)?
        }
        (CommandKind::Quantize, _) => quantize(spec, config.plot, &mut w)?,
        (CommandKind::Dos, &Options::Dos { bins }) => dos(spec, bins, config.plot, &mut w)?,
        (CommandKind::KummerMesh, &Options::Mesh { n_theta, n_p }) => {
            mesh(spec, n_theta, n_p, config.plot, &mut w)?
        }
        (CommandKind::Verify, _) => return verify(spec, w, &config.out),
        (command, options) => unreachable!("options {options:?} do not belong to {command:?}"),
    }
    w.flush(&config.out)
}

fn stability_rate(fp: &meanfield::FixedPoint) -> f64 {
    match fp.stability {
        meanfield::Stability::Center { frequency } => frequency,
        meanfield::Stability::Saddle { exponent } => exponent,
        meanfield::Stability::Degenerate => 0.0,
    }
}

fn location_code(loc: Location) -> f64 {
    match loc {
        Location::Interior => 0.0,
        Location::NorthPole => 1.0,
        Location::SouthPole => -1.0,
    }
}

fn spectrum(spec: &ModelSpec, plot: bool, w: &mut Writer) -> Result<(), RunError> {
    let res = quantum::eigen_spectrum(spec)?;
    let mut t = CsvTable::new(["index", "energy_scaled", "energy_raw"]).with_model(spec);
    for (i, (e, raw)) in res.scaled_eigenvalues.iter().zip(&res.raw_eigenvalues).enumerate() {
        t.push(vec![i as f64, *e, *raw]);
    }
    w.csv("spectrum.csv", &t);
    let mut ds = SpectralDataset::new(*spec);
    ds.scaled_eigenvalues = res.scaled_eigenvalues.clone();
    w.add("spectrum.json", ds.to_json()?);
    if plot {
        let last = (res.scaled_eigenvalues.len() - 1) as f64;
        let mut chart = Chart::new(&title(spec, "spectrum"), "level index", "eta E").with(
            Series::scatter(res.scaled_eigenvalues.iter().enumerate().map(|(i, e)| (i as f64, *e)).collect(), 0, 1.5)
                .labelled("exact"),
        );
        for fp in meanfield::find_fixed_points(spec) {
            chart = chart.with(Series::line(vec![(0.0, fp.energy), (last, fp.energy)], 1));
        }
        w.add("spectrum.svg", chart.render());
    }
    Ok(())
}

fn fixed_points(spec: &ModelSpec, plot: bool, w: &mut Writer) -> Result<(), RunError> {
    let points = meanfield::find_fixed_points(spec);
    let mut t = CsvTable::new(["p", "q", "sx", "energy", "poincare_index", "rate", "location"]).with_model(spec);
    for fp in &points {
        t.push(vec![
            fp.p,
            fp.q.unwrap_or(f64::NAN),
            fp.sx,
            fp.energy,
            f64::from(fp.stability.index()),
            stability_rate(fp),
            location_code(fp.location),
        ]);
    }
    w.csv("fixed_points.csv", &t);
    let (lo, hi) = meanfield::energy_range(spec);
    let doc = json!({
        "spec": spec,
        "fixed_points": points,
        "energy_range": [lo, hi],
        "poincare_index_sum": meanfield::poincare_index_sum(&points),
    });
    w.add("fixed_points.json", serde_json::to_string_pretty(&doc)?);
    if plot {
        let grid: Vec<f64> = (0..=400).map(|k| -0.5 + k as f64 / 400.0).collect();
        let mut lower = Vec::with_capacity(grid.len());
        let mut upper = Vec::with_capacity(grid.len());
        for &p in &grid {
            let (um, up) = meanfield::potentials(spec, p)?;
            lower.push((p, um));
            upper.push((p, up));
        }
        let chart = Chart::new(&title(spec, "potential curves"), "p", "U")
            .with(Series::line(lower, 0).labelled("U-"))
            .with(Series::line(upper, 1).labelled("U+"))
            .with(Series::scatter(points.iter().map(|f| (f.p, f.energy)).collect(), 2, 3.0).labelled("fixed points"));
        w.add("potentials.svg", chart.render());
    }
    Ok(())
}

fn bifurcations(spec: &ModelSpec, w: &mut Writer) -> Result<(), RunError> {
    let events = meanfield::classify_bifurcations(spec)?;
    let mut t = CsvTable::new(["eps_critical", "kind", "location", "p", "energy"])
        .with_model(spec)
        .meta("kind_codes", "0=saddle-node 1=transcritical")
        .meta("location_codes", "0=inflection 1=north-pole -1=south-pole");
    for e in &events {
        let kind = match e.kind {
            BifurcationKind::SaddleNode => 0.0,
            BifurcationKind::Transcritical => 1.0,
        };
        let (loc, p) = match e.location {
            BifurcationLocation::Inflection { p } => (0.0, p),
            BifurcationLocation::NorthPole => (1.0, 0.5),
            BifurcationLocation::SouthPole => (-1.0, -0.5),
        };
        t.push(vec![e.eps_critical, kind, loc, p, e.energy]);
    }
    w.csv("bifurcations.csv", &t);
    let doc = json!({ "spec": spec, "bifurcations": events });
    w.add("bifurcations.json", serde_json::to_string_pretty(&doc)?);
    Ok(())
}

fn sweep(spec: &ModelSpec, grid: &[f64], jobs: Option<usize>, plot: bool, w: &mut Writer) -> Result<(), RunError> {
    let rows = quantum::sweep_epsilon(spec, grid, jobs)?;
    let dim = spec.dim();
    let mut columns = vec!["eps".to_string()];
    columns.extend((0..dim).map(|k| format!("E{k}")));
    let mut levels = CsvTable::new(columns).with_model(spec).meta("eps", "swept");
    let mut fps = CsvTable::new(["eps", "p", "energy", "poincare_index", "location"]).with_model(spec);
    for row in &rows {
        let mut line = Vec::with_capacity(dim + 1);
        line.push(row.eps);
        line.extend(&row.scaled_eigenvalues);
        levels.push(line);
        for fp in &row.fixed_points {
            fps.push(vec![row.eps, fp.p, fp.energy, f64::from(fp.stability.index()), location_code(fp.location)]);
        }
    }
    w.csv("sweep.csv", &levels);
    w.csv("sweep_fixed_points.csv", &fps);
    let mut ds = SpectralDataset::new(*spec);
    ds.sweep = rows.clone();
    w.add("sweep.json", ds.to_json()?);
    if plot {
        let mut chart = Chart::new(&title(spec, "eigenvalue fan"), "eps", "eta E");
        for k in 0..dim {
            chart = chart.with(Series::line(rows.iter().map(|r| (r.eps, r.scaled_eigenvalues[k])).collect(), 5));
        }
        let mut centers = Vec::new();
        let mut saddles = Vec::new();
        for r in &rows {
            for fp in &r.fixed_points {
                match fp.stability.index() {
                    1 => centers.push((r.eps, fp.energy)),
                    _ => saddles.push((r.eps, fp.energy)),
                }
            }
        }
        chart = chart
            .with(Series::scatter(centers, 0, 1.5).labelled("centers"))
            .with(Series::scatter(saddles, 1, 1.5).labelled("saddles"));
        w.add("sweep.svg", chart.render());
    }
    Ok(())
}

fn trajectory(spec: &ModelSpec, p: f64, q: f64, t_end: f64, dt: f64, plot: bool, w: &mut Writer) -> Result<(), RunError> {
    let start = meanfield::from_canonical(spec, p, q)?;
    let rec = meanfield::integrate_trajectory(spec, start, t_end, dt)?;
    let mut t = CsvTable::new(["t", "sx", "sy", "sz", "energy"])
        .with_model(spec)
        .meta("dt", dt)
        .meta("drift_h", kummer_core::io::format_float(rec.drift_h))
        .meta("drift_c", kummer_core::io::format_float(rec.drift_c));
    for (time, s) in rec.times.iter().zip(&rec.states) {
        t.push(vec![*time, s[0], s[1], s[2], meanfield::energy(spec, *s)]);
    }
    w.csv("trajectory.csv", &t);
    if plot {
        let comp = |i: usize| rec.times.iter().zip(&rec.states).map(|(t, s)| (*t, s[i])).collect::<Vec<_>>();
        let chart = Chart::new(&title(spec, "trajectory"), "t", "s")
            .with(Series::line(comp(0), 0).labelled("sx"))
            .with(Series::line(comp(1), 1).labelled("sy"))
            .with(Series::line(comp(2), 2).labelled("sz"));
        w.add("trajectory.svg", chart.render());
    }
    Ok(())
}

fn regime_code(r: Regime) -> f64 {
    match r {
        Regime::SingleWell => 0.0,
        Regime::DoubleWellBelow => 1.0,
        Regime::AboveBarrier => 2.0,
    }
}

fn quantize(spec: &ModelSpec, plot: bool, w: &mut Writer) -> Result<(), RunError> {
    let exact = quantum::eigen_spectrum(spec)?;
    let wkb = semiclassics::quantize_double_well(spec)?;
    let max_dev = wkb
        .levels
        .iter()
        .zip(&exact.scaled_eigenvalues)
        .map(|(l, e)| (l.energy - e).abs())
        .fold(0.0, f64::max);
    let mut t = CsvTable::new(["nu", "energy_wkb", "energy_exact", "deviation", "regime", "mirrored"])
        .with_model(spec)
        .meta("regime_codes", "0=single-well 1=double-well-below 2=above-barrier")
        .meta("max_abs_deviation", kummer_core::io::format_float(max_dev));
    for (l, e) in wkb.levels.iter().zip(&exact.scaled_eigenvalues) {
        t.push(vec![l.nu as f64, l.energy, *e, l.energy - e, regime_code(l.regime), f64::from(u8::from(l.mirrored))]);
    }
    w.csv("quantize.csv", &t);
    let mut ds = SpectralDataset::new(*spec);
    ds.scaled_eigenvalues = exact.scaled_eigenvalues.clone();
    ds.semiclassical = Some(wkb.clone());
    w.add("quantize.json", ds.to_json()?);
    if plot {
        let chart = Chart::new(&title(spec, "WKB minus exact"), "eta E", "deviation")
            .with(Series::line(wkb.levels.iter().zip(&exact.scaled_eigenvalues).map(|(l, e)| (*e, l.energy - e)).collect(), 0))
            .with(Series::scatter(wkb.levels.iter().zip(&exact.scaled_eigenvalues).map(|(l, e)| (*e, l.energy - e)).collect(), 0, 2.0));
        w.add("quantize.svg", chart.render());
    }
    Ok(())
}

const DOS_CURVE_POINTS: usize = 1001;

fn dos(spec: &ModelSpec, bins: usize, plot: bool, w: &mut Writer) -> Result<(), RunError> {
    let exact = quantum::eigen_spectrum(spec)?;
    let hist = quantum::dos_histogram(&exact, bins)?;
    let mut t = CsvTable::new(["bin_lo", "bin_hi", "center", "density_exact", "density_semiclassical"]).with_model(spec);
    let mut averages = Vec::with_capacity(bins);
    for (k, d) in hist.density.iter().enumerate() {
        let (lo, hi) = (hist.bin_edges[k], hist.bin_edges[k + 1]);
        let sc = semiclassics::bin_average_density(spec, lo, hi)?;
        averages.push(sc);
        t.push(vec![lo, hi, 0.5 * (lo + hi), *d, sc]);
    }
    w.csv("dos_bins.csv", &t);

    let (e_lo, e_hi) = meanfield::energy_range(spec);
    let energies: Vec<f64> = (1..DOS_CURVE_POINTS - 1)
        .map(|k| e_lo + (e_hi - e_lo) * k as f64 / (DOS_CURVE_POINTS - 1) as f64)
        .collect();
    let curve = semiclassics::dos_curve(spec, &energies)?;
    let mut c = CsvTable::new(["energy", "density"]).with_model(spec);
    for pt in &curve.points {
        c.push(vec![pt.energy, pt.density]);
    }
    w.csv("dos_curve.csv", &c);

    let mut ds = SpectralDataset::new(*spec);
    ds.scaled_eigenvalues = exact.scaled_eigenvalues.clone();
    ds.histogram = Some(hist.clone());
    ds.dos = Some(curve.clone());
    w.add("dos.json", ds.to_json()?);
    if plot {
        let bars = hist.density.iter().enumerate().map(|(k, d)| (hist.bin_edges[k], hist.bin_edges[k + 1], *d)).collect();
        let chart = Chart::new(&title(spec, "density of states"), "eta E", "density")
            .with(Series::bars(bars, 0).labelled("exact"))
            .with(Series::line(curve.points.iter().map(|p| (p.energy, p.density)).collect(), 1).labelled("T / 2 pi"))
            .with(Series::scatter(hist.centers().into_iter().zip(averages).collect(), 2, 1.5).labelled("bin average"));
        w.add("dos.svg", chart.render());
    }
    Ok(())
}

fn mesh(spec: &ModelSpec, n_theta: usize, n_p: usize, plot: bool, w: &mut Writer) -> Result<(), RunError> {
    let mesh = meanfield::kummer_mesh(spec, n_theta, n_p)?;
    let mut t = CsvTable::new(["i_p", "j_theta", "sx", "sy", "sz"])
        .with_model(spec)
        .meta("n_theta", n_theta)
        .meta("n_p", n_p);
    for (k, s) in mesh.points.iter().enumerate() {
        t.push(vec![(k / n_theta) as f64, (k % n_theta) as f64, s[0], s[1], s[2]]);
    }
    w.csv("kummer_mesh.csv", &t);
    if plot {
        let profile: Vec<(f64, f64)> = (0..=400)
            .map(|k| {
                let p = -0.5 + k as f64 / 400.0;
                (p, meanfield::radius(spec, p).unwrap_or(0.0))
            })
            .collect();
        let mirror = profile.iter().map(|&(p, r)| (p, -r)).collect();
        let chart = Chart::new(&title(spec, "Kummer shape profile"), "sz", "sx")
            .with(Series::line(profile, 0))
            .with(Series::line(mirror, 0));
        w.add("kummer_mesh.svg", chart.render());
    }
    Ok(())
}

fn verify(spec: &ModelSpec, mut w: Writer, out: &PathBuf) -> Result<Vec<PathBuf>, RunError> {
    let results = checks::run_checks(spec);
    println!("{:<34} {:<6} {:>12} {:>10}  detail", "check", "status", "value", "tolerance");
    for r in &results {
        let status = match r.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        };
        println!("{:<34} {:<6} {:>12.3e} {:>10.1e}  {}", r.name, status, r.value, r.tolerance, r.detail);
    }
    let doc = json!({ "spec": spec, "checks": results });
    w.add("verify.json", serde_json::to_string_pretty(&doc)?);
    let written = w.flush(out)?;
    let failed = results.iter().filter(|r| r.status == Status::Fail).count();
    if failed > 0 {
        return Err(RunError::ChecksFailed(failed));
    }
    Ok(written)
}

fn title(spec: &ModelSpec, what: &str) -> String {
    format!(
        "{what}: (m,n)=({},{}) N={} eps={} v={}",
        spec.m(),
        spec.n(),
        spec.particles(),
        spec.eps(),
        spec.v()
    )
}
