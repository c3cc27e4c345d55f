//! Invariant suite run by `kummer verify`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::algebra;
use crate::error::Result;
use crate::meanfield;
use crate::model::ModelSpec;
use crate::quantum;
use crate::semiclassics;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: Status,
    /// Measured error (or `NaN` when skipped).
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn measure(name: &'static str, value: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        let status = if value <= tolerance { Status::Pass } else { Status::Fail };
        CheckResult {
            name,
            status,
            value,
            tolerance,
            detail: detail.into(),
        }
    }

    fn skip(name: &'static str, detail: impl Into<String>) -> Self {
        CheckResult {
            name,
            status: Status::Skip,
            value: f64::NAN,
            tolerance: f64::NAN,
            detail: detail.into(),
        }
    }

    fn from_result(name: &'static str, tolerance: f64, r: Result<(f64, String)>) -> Self {
        match r {
            Ok((value, detail)) => Self::measure(name, value, tolerance, detail),
            Err(err) => CheckResult {
                name,
                status: Status::Fail,
                value: f64::NAN,
                tolerance,
                detail: err.to_string(),
            },
        }
    }
}

fn grid(count: usize, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    (0..count).map(move |k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
}

fn check_eta(spec: &ModelSpec) -> CheckResult {
    let expected = 1.0 / (spec.particles() as f64 / spec.mn() as f64 + 1.0);
    CheckResult::measure("eta", (spec.eta() - expected).abs(), 0.0, format!("eta = {}", spec.eta()))
}

fn check_identities(spec: &ModelSpec) -> CheckResult {
    let r = quantum::identity_residuals(spec);
    CheckResult::measure(
        "algebra identities",
        r.max_residual(),
        1e-9,
        format!("Casimir constant {:.3e}", r.casimir_value),
    )
}

fn check_swap(spec: &ModelSpec) -> CheckResult {
    let swapped = spec.swapped();
    let h = spec.half_index();
    let worst = grid(101, -h - 1.0, h + 1.0)
        .map(|z| {
            let a = algebra::eval_f(spec, z);
            let b = algebra::eval_f(&swapped, -z);
            (a + b).abs() / a.abs().max(1.0)
        })
        .fold(0.0, f64::max);
    CheckResult::measure("F swap antisymmetry", worst, 1e-12, "F_(m,n)(z) = -F_(n,m)(-z)")
}

fn check_classical(spec: &ModelSpec) -> CheckResult {
    let dg = meanfield::g_polynomial(spec).derivative();
    let worst = grid(1001, -0.5, 0.5)
        .map(|p| {
            let r = meanfield::radius(spec, p).unwrap_or(f64::NAN);
            let e1 = (dg.eval(p) - 2.0 * meanfield::f_classical(spec, p)).abs();
            let e2 = (meanfield::g_classical(spec, p) + r * r).abs();
            e1.max(e2)
        })
        .fold(0.0, f64::max);
    CheckResult::measure("classical f, g, r", worst, 1e-10, "g' = 2f and g = -r^2 on 1001 points")
}

fn check_fixed_points(spec: &ModelSpec) -> CheckResult {
    let points = meanfield::find_fixed_points(spec);
    let worst = points
        .iter()
        .filter_map(|fp| {
            let q = fp.q?;
            let s = meanfield::from_canonical(spec, fp.p, q).ok()?;
            Some((meanfield::energy(spec, s) - fp.energy).abs())
        })
        .fold(0.0, f64::max);
    CheckResult::measure(
        "fixed-point energies",
        worst,
        1e-10,
        format!("{} fixed points", points.len()),
    )
}

fn check_spectrum(spec: &ModelSpec) -> Vec<CheckResult> {
    let result = match quantum::eigen_spectrum(spec) {
        Ok(r) => r,
        Err(err) => {
            let fail = |name| CheckResult::from_result(name, 0.0, Err(err.clone()));
            return vec![fail("eigen residual"), fail("spectrum within classical range")];
        }
    };
    let residual = quantum::spot_check_residual(&result, 8);
    let (lo, hi) = meanfield::energy_range(spec);
    let slack = 3.0 * spec.eta();
    let outside = result
        .scaled_eigenvalues
        .iter()
        .map(|&e| (lo - slack - e).max(e - hi - slack).max(0.0))
        .fold(0.0, f64::max);
    let histogram = quantum::dos_histogram(&result, 50).map(|h| (h.integral() - 1.0).abs());
    vec![
        CheckResult::measure("eigen residual", residual, 1e-10, "relative to |H|"),
        CheckResult::measure(
            "spectrum within classical range",
            outside,
            0.0,
            format!("[{lo:.6}, {hi:.6}] widened by 3 eta"),
        ),
        CheckResult::from_result(
            "histogram normalization",
            1e-12,
            histogram.map(|v| (v, "50 bins".to_string())),
        ),
    ]
}

fn check_trajectory(spec: &ModelSpec) -> CheckResult {
    let r = meanfield::from_canonical(spec, 0.1, 0.3)
        .and_then(|s| meanfield::integrate_trajectory(spec, s, 10.0, 1e-3))
        .map(|rec| (rec.drift_h.max(rec.drift_c), "t = 10, dt = 1e-3".to_string()));
    CheckResult::from_result("trajectory conservation", 1e-9, r)
}

fn check_semiclassics(spec: &ModelSpec) -> Vec<CheckResult> {
    if spec.v() == 0.0 {
        return vec![
            CheckResult::skip("semiclassical level count", "v = 0"),
            CheckResult::skip("period = dS/dE", "v = 0"),
        ];
    }
    let count = semiclassics::quantize_double_well(spec).map(|s| {
        (
            (s.levels.len() as f64 - spec.dim() as f64).abs(),
            format!("{} levels", s.levels.len()),
        )
    });
    let period = (|| -> Result<(f64, String)> {
        let (lo, hi) = meanfield::energy_range(spec);
        let saddles = semiclassics::saddle_energies(spec)?;
        let energy = grid(9, lo, hi)
            .skip(1)
            .take(7)
            .max_by(|a, b| {
                let da = saddles.iter().map(|s| (s - a).abs()).fold(f64::INFINITY, f64::min);
                let db = saddles.iter().map(|s| (s - b).abs()).fold(f64::INFINITY, f64::min);
                da.total_cmp(&db)
            })
            .unwrap_or(0.5 * (lo + hi));
        let h = 1e-5 * (hi - lo);
        let ds = (semiclassics::total_action(spec, energy + h)?
            - semiclassics::total_action(spec, energy - h)?)
            / (2.0 * h);
        let t = semiclassics::period_T(spec, energy)?;
        Ok(((ds - t).abs() / t, format!("E = {energy:.6}, T/2pi = {:.6}", t / (2.0 * PI))))
    })();
    vec![
        CheckResult::from_result("semiclassical level count", 0.0, count),
        CheckResult::from_result("period = dS/dE", 1e-5, period),
    ]
}

/// Runs every invariant for `spec`.
pub fn run_checks(spec: &ModelSpec) -> Vec<CheckResult> {
    let mut out = vec![
        check_eta(spec),
        check_identities(spec),
        check_swap(spec),
        check_classical(spec),
        check_fixed_points(spec),
    ];
    out.extend(check_spectrum(spec));
    out.push(check_trajectory(spec));
    out.extend(check_semiclassics(spec));
    out
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    results.iter().all(|r| r.status != Status::Fail)
}
