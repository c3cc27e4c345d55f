//! Mean-field limit on Kummer shapes.
//!
//! Classical phase space is the surface `s_x² + s_y² = r²(s_z)` with
//! `p = s_z ∈ [-½, ½]` and canonical angle `q`, so that
//! `s_x = r(p) cos q`, `s_y = r(p) sin q`. The Hamiltonian is
//! `H = ε s_z + v s_x`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::numerics::{polish_root, Poly};

/// Tolerance on `|p| ≤ ½` before a domain error is raised.
const POLE_SLACK: f64 = 1e-12;
/// `|ε² + v² f'(p)|` below which a fixed point is reported as degenerate.
const DEGENERATE_TOL: f64 = 1e-10;
/// Initial points farther than this from `C = 0` are rejected.
const SURFACE_TOL: f64 = 1e-10;

fn pw(x: f64, k: u32) -> f64 {
    if k == 0 {
        1.0
    } else {
        x.powi(k as i32)
    }
}

/// `c · A^a · B^b` with the convention that a zero coefficient kills the term
/// regardless of (possibly negative) exponents.
fn term(c: f64, a: f64, ea: i64, b: f64, eb: i64) -> f64 {
    if c == 0.0 {
        return 0.0;
    }
    debug_assert!(ea >= 0 && eb >= 0);
    c * pw(a, ea as u32) * pw(b, eb as u32)
}

/// `m^{2-n} n^{2-m}`, equal to `r0²`.
pub fn shape_constant(spec: &ModelSpec) -> f64 {
    let m = f64::from(spec.m());
    let n = f64::from(spec.n());
    m.powi(2 - spec.n() as i32) * n.powi(2 - spec.m() as i32)
}

/// Kummer shape `r(p) = r0 (½+p)^{m/2} (½-p)^{n/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KummerGeometry {
    pub spec: ModelSpec,
    pub r0: f64,
}

impl KummerGeometry {
    pub fn new(spec: &ModelSpec) -> Self {
        KummerGeometry {
            spec: *spec,
            r0: shape_constant(spec).sqrt(),
        }
    }

    pub fn radius(&self, p: f64) -> Result<f64> {
        radius(&self.spec, p)
    }
}

fn check_p(op: &'static str, p: f64) -> Result<f64> {
    if !p.is_finite() || p.abs() > 0.5 + POLE_SLACK {
        return Err(Error::domain(op, format!("p = {p} outside [-1/2, 1/2]")));
    }
    Ok(p.clamp(-0.5, 0.5))
}

/// `r(p)`; domain error outside `[-½, ½]`.
pub fn radius(spec: &ModelSpec, p: f64) -> Result<f64> {
    let p = check_p("meanfield::radius", p)?;
    Ok(radius_unchecked(spec, p))
}

pub(crate) fn radius_unchecked(spec: &ModelSpec, p: f64) -> f64 {
    let a = (0.5 + p).max(0.0);
    let b = (0.5 - p).max(0.0);
    let r0 = shape_constant(spec).sqrt();
    r0 * a.powf(0.5 * f64::from(spec.m())) * b.powf(0.5 * f64::from(spec.n()))
}

/// `r'(p)` on the open interval.
pub fn radius_derivative(spec: &ModelSpec, p: f64) -> f64 {
    let a = 0.5 + p;
    let b = 0.5 - p;
    let m = f64::from(spec.m());
    let n = f64::from(spec.n());
    radius_unchecked(spec, p) * 0.5 * (m / a - n / b)
}

/// Classical commutator function
/// `f(p) = ½ m^{2-n} n^{2-m} (n A^m B^{n-1} - m A^{m-1} B^n)`, `A = ½+p`, `B = ½-p`.
pub fn f_classical(spec: &ModelSpec, p: f64) -> f64 {
    let (m, n) = (i64::from(spec.m()), i64::from(spec.n()));
    let a = 0.5 + p;
    let b = 0.5 - p;
    0.5 * shape_constant(spec)
        * (term(n as f64, a, m, b, n - 1) - term(m as f64, a, m - 1, b, n))
}

/// `f'(p)`.
pub fn f_prime(spec: &ModelSpec, p: f64) -> f64 {
    let (m, n) = (i64::from(spec.m()), i64::from(spec.n()));
    let (mf, nf) = (m as f64, n as f64);
    let a = 0.5 + p;
    let b = 0.5 - p;
    let d1 = term(mf, a, m - 1, b, n - 1) - term(nf - 1.0, a, m, b, (n - 2).max(0));
    let d2 = term(mf - 1.0, a, (m - 2).max(0), b, n) - term(nf, a, m - 1, b, n - 1);
    0.5 * shape_constant(spec) * (nf * d1 - mf * d2)
}

/// Classical Casimir function `g(p) = -m^{2-n} n^{2-m} A^m B^n`.
pub fn g_classical(spec: &ModelSpec, p: f64) -> f64 {
    let a = 0.5 + p;
    let b = 0.5 - p;
    -shape_constant(spec) * pw(a, spec.m()) * pw(b, spec.n())
}

/// `(½+p)^a (½-p)^b` as a polynomial in `p`.
pub(crate) fn pole_factors(a: u32, b: u32) -> Poly {
    &Poly::linear(0.5, 1.0).powi(a) * &Poly::linear(0.5, -1.0).powi(b)
}

/// `g` as a polynomial in `p`.
pub fn g_polynomial(spec: &ModelSpec) -> Poly {
    pole_factors(spec.m(), spec.n()).scale(-shape_constant(spec))
}

/// `f = g'/2` as a polynomial in `p`.
pub fn f_polynomial(spec: &ModelSpec) -> Poly {
    g_polynomial(spec).derivative().scale(0.5)
}

/// Potential curves `(U-, U+)` with `U±(p) = εp ± |v| r(p)`.
pub fn potentials(spec: &ModelSpec, p: f64) -> Result<(f64, f64)> {
    let p = check_p("meanfield::potentials", p)?;
    let base = spec.eps() * p;
    let rv = spec.v().abs() * radius_unchecked(spec, p);
    Ok((base - rv, base + rv))
}

/// Casimir function `C(s) = s_x² + s_y² + g(s_z)`; zero on the Kummer shape.
pub fn casimir(spec: &ModelSpec, s: [f64; 3]) -> f64 {
    s[0] * s[0] + s[1] * s[1] + g_classical(spec, s[2])
}

/// Classical energy `H(s) = ε s_z + v s_x`.
pub fn energy(spec: &ModelSpec, s: [f64; 3]) -> f64 {
    spec.eps() * s[2] + spec.v() * s[0]
}

/// Point on the Kummer shape from canonical coordinates.
pub fn from_canonical(spec: &ModelSpec, p: f64, q: f64) -> Result<[f64; 3]> {
    let r = radius(spec, p)?;
    Ok([r * q.cos(), r * q.sin(), p.clamp(-0.5, 0.5)])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Stability {
    Center { frequency: f64 },
    Saddle { exponent: f64 },
    Degenerate,
}

impl Stability {
    /// From `ω² = ε² + v² f'(p)`.
    pub fn from_omega_sq(omega_sq: f64) -> Self {
        if omega_sq.abs() < DEGENERATE_TOL {
            Stability::Degenerate
        } else if omega_sq > 0.0 {
            Stability::Center {
                frequency: omega_sq.sqrt(),
            }
        } else {
            Stability::Saddle {
                exponent: (-omega_sq).sqrt(),
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Stability::Center { .. } => "center",
            Stability::Saddle { .. } => "saddle",
            Stability::Degenerate => "degenerate",
        }
    }

    /// Poincaré index: +1 for centers, -1 for saddles.
    pub fn index(&self) -> i32 {
        match self {
            Stability::Center { .. } => 1,
            Stability::Saddle { .. } => -1,
            Stability::Degenerate => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Location {
    Interior,
    NorthPole,
    SouthPole,
}

/// Classical stationary point (`s_y = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub p: f64,
    /// `0` or `π`; `None` at a pole where the angle is undefined.
    pub q: Option<f64>,
    pub sx: f64,
    pub energy: f64,
    pub stability: Stability,
    pub location: Location,
}

/// `ε² + v² f'(p)`
pub fn omega_squared(spec: &ModelSpec, p: f64) -> f64 {
    spec.eps() * spec.eps() + spec.v() * spec.v() * f_prime(spec, p)
}

/// Residual of the interior fixed-point condition with the pole factors
/// cleared to nonnegative powers.
pub fn fixed_point_residual(spec: &ModelSpec) -> Poly {
    let (m, n) = (spec.m() as i64, spec.n() as i64);
    let (mf, nf) = (m as f64, n as f64);
    let v = spec.v();
    let eps = spec.eps();
    let lin = Poly::linear(nf - mf, 2.0 * (nf + mf));
    let lhs = (&pole_factors((m - 2).max(0) as u32, (n - 2).max(0) as u32) * &(&lin * &lin))
        .scale(v * v);
    let rhs = pole_factors((2 - m).max(0) as u32, (2 - n).max(0) as u32)
        .scale(16.0 * eps * eps / shape_constant(spec));
    &lhs - &rhs
}

/// Real roots of `poly` on the open interval `(-½, ½)`, including double roots.
pub(crate) fn interior_roots(poly: &Poly) -> Vec<f64> {
    let scale = poly.coeffs().iter().fold(0.0_f64, |a, c| a.max(c.abs())).max(1e-300);
    let mut roots = isolated_roots(poly, -0.5, 0.5, scale);
    roots.sort_by(|a, b| a.total_cmp(b));
    roots.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    roots
}

/// Roots on `(lo, hi)`, isolated between consecutive critical points where
/// `poly` is monotone. Critical points with `|poly| ≤ 1e-11 scale` are
/// reported as double roots.
fn isolated_roots(poly: &Poly, lo: f64, hi: f64, scale: f64) -> Vec<f64> {
    match poly.degree() {
        0 => return Vec::new(),
        1 => {
            let c = poly.coeffs();
            let x = -c[0] / c[1];
            return if x > lo && x < hi { vec![x] } else { Vec::new() };
        }
        _ => {}
    }
    let dpoly = poly.derivative();
    let critical = isolated_roots(&dpoly, lo, hi, scale);
    let mut breaks = Vec::with_capacity(critical.len() + 2);
    breaks.push(lo);
    breaks.extend(&critical);
    breaks.push(hi);
    let mut roots = Vec::new();
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (poly.eval(a), poly.eval(b));
        if fa * fb < 0.0 {
            roots.push(polish_root(|x| poly.eval(x), |x| dpoly.eval(x), a, b, 1e-15));
        }
    }
    for &c in &critical {
        if poly.eval(c).abs() <= 1e-11 * scale && !roots.iter().any(|r| (r - c).abs() < 1e-6) {
            roots.push(c);
        }
    }
    roots
}

fn interior_point(spec: &ModelSpec, p: f64, q: f64, sx: f64, energy: f64) -> FixedPoint {
    FixedPoint {
        p,
        q: Some(q),
        sx,
        energy,
        stability: Stability::from_omega_sq(omega_squared(spec, p)),
        location: Location::Interior,
    }
}

fn pole_point(spec: &ModelSpec, location: Location) -> FixedPoint {
    let p = if location == Location::NorthPole { 0.5 } else { -0.5 };
    FixedPoint {
        p,
        q: None,
        sx: 0.0,
        energy: spec.eps() * p,
        stability: Stability::from_omega_sq(omega_squared(spec, p)),
        location,
    }
}

/// All classical fixed points, sorted by energy.
///
/// Interior points solve `ε s_x = v f(p)` with `s_x = ±r(p)`; the north pole is
/// fixed for `n > 1`, the south pole for `m > 1`.
pub fn find_fixed_points(spec: &ModelSpec) -> Vec<FixedPoint> {
    let eps = spec.eps();
    let v = spec.v();
    let mut out = Vec::new();
    if v == 0.0 {
        // H = ε s_z: only the poles of the shape are stationary
        out.push(pole_point(spec, Location::SouthPole));
        out.push(pole_point(spec, Location::NorthPole));
    } else if eps == 0.0 {
        for p in interior_roots(&f_polynomial(spec)) {
            let r = radius_unchecked(spec, p);
            out.push(interior_point(spec, p, 0.0, r, v * r));
            out.push(interior_point(spec, p, PI, -r, -v * r));
        }
    } else {
        for p in interior_roots(&fixed_point_residual(spec)) {
            let r = radius_unchecked(spec, p);
            let (sx, q) = if v * f_classical(spec, p) / eps >= 0.0 { (r, 0.0) } else { (-r, PI) };
            out.push(interior_point(spec, p, q, sx, eps * p + v * sx));
        }
    }
    if v != 0.0 {
        if spec.n() > 1 {
            out.push(pole_point(spec, Location::NorthPole));
        }
        if spec.m() > 1 {
            out.push(pole_point(spec, Location::SouthPole));
        }
    }
    out.sort_by(|a, b| a.energy.total_cmp(&b.energy).then(a.p.total_cmp(&b.p)));
    out
}

/// Sum of Poincaré indices.
pub fn poincare_index_sum(points: &[FixedPoint]) -> i32 {
    points.iter().map(|fp| fp.stability.index()).sum()
}

/// Global classical energy range `(E_min, E_max)` over the Kummer shape.
pub fn energy_range(spec: &ModelSpec) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for fp in find_fixed_points(spec) {
        lo = lo.min(fp.energy);
        hi = hi.max(fp.energy);
    }
    // the poles are always on the shape even when not fixed points
    for p in [-0.5, 0.5] {
        lo = lo.min(spec.eps() * p);
        hi = hi.max(spec.eps() * p);
    }
    (lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BifurcationKind {
    SaddleNode,
    Transcritical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "at", rename_all = "snake_case")]
pub enum BifurcationLocation {
    Inflection { p: f64 },
    NorthPole,
    SouthPole,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BifurcationEvent {
    pub eps_critical: f64,
    pub kind: BifurcationKind,
    pub location: BifurcationLocation,
    /// Energy of the fixed point taking part in the bifurcation.
    pub energy: f64,
}

/// Inflection points of `r` on `(-½, ½)`: roots of
/// `(mB - nA)² = 2mB² + 2nA²`.
pub fn inflection_points(spec: &ModelSpec) -> Vec<f64> {
    let (mf, nf) = (f64::from(spec.m()), f64::from(spec.n()));
    let a = Poly::linear(0.5, 1.0);
    let b = Poly::linear(0.5, -1.0);
    let diff = &b.scale(mf) - &a.scale(nf);
    let poly = &(&diff * &diff) - &(&(&b * &b).scale(2.0 * mf) + &(&a * &a).scale(2.0 * nf));
    let c = poly.coeffs();
    let mut roots = Vec::new();
    match poly.degree() {
        2 => {
            let disc = c[1] * c[1] - 4.0 * c[2] * c[0];
            if disc >= 0.0 {
                let sq = disc.sqrt();
                // numerically stable pair
                let qv = -0.5 * (c[1] + sq.copysign(c[1]));
                if qv != 0.0 {
                    roots.push(qv / c[2]);
                    roots.push(c[0] / qv);
                } else {
                    roots.push(0.0);
                }
            }
        }
        1 => roots.push(-c[0] / c[1]),
        _ => {}
    }
    let mut roots: Vec<f64> = roots
        .into_iter()
        .filter(|p| p.abs() < 0.5 - 1e-12)
        .collect();
    roots.sort_by(|x, y| x.total_cmp(y));
    roots.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
    roots
}

/// Bifurcation events as functions of `ε` at the model's `v`, sorted by `|ε_c|`.
pub fn classify_bifurcations(spec: &ModelSpec) -> Result<Vec<BifurcationEvent>> {
    let v = spec.v();
    if v == 0.0 {
        return Err(Error::invalid(
            "meanfield::classify_bifurcations",
            "v must be nonzero",
        ));
    }
    let mut out = Vec::new();
    for p in inflection_points(spec) {
        let slope = radius_derivative(spec, p);
        for eps_c in [v * slope, -v * slope] {
            let energy = v * v / eps_c * f_classical(spec, p) + eps_c * p;
            out.push(BifurcationEvent {
                eps_critical: eps_c,
                kind: BifurcationKind::SaddleNode,
                location: BifurcationLocation::Inflection { p },
                energy,
            });
        }
    }
    if spec.m() == 2 {
        let c = v.abs() * 2f64.powf(1.0 - 0.5 * f64::from(spec.n()));
        for eps_c in [c, -c] {
            out.push(BifurcationEvent {
                eps_critical: eps_c,
                kind: BifurcationKind::Transcritical,
                location: BifurcationLocation::SouthPole,
                energy: -0.5 * eps_c,
            });
        }
    }
    if spec.n() == 2 {
        let c = v.abs() * 2f64.powf(1.0 - 0.5 * f64::from(spec.m()));
        for eps_c in [c, -c] {
            out.push(BifurcationEvent {
                eps_critical: eps_c,
                kind: BifurcationKind::Transcritical,
                location: BifurcationLocation::NorthPole,
                energy: 0.5 * eps_c,
            });
        }
    }
    out.sort_by(|a, b| {
        a.eps_critical
            .abs()
            .total_cmp(&b.eps_critical.abs())
            .then(a.eps_critical.total_cmp(&b.eps_critical))
    });
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub states: Vec<[f64; 3]>,
    /// Largest `|H(t) - H(0)|` along the trajectory.
    pub drift_h: f64,
    /// Largest `|C(t) - C(0)|` along the trajectory.
    pub drift_c: f64,
}

fn flow(spec: &ModelSpec, s: [f64; 3]) -> [f64; 3] {
    let eps = spec.eps();
    let v = spec.v();
    [
        -eps * s[1],
        eps * s[0] - v * f_classical(spec, s[2]),
        v * s[1],
    ]
}

fn axpy(s: [f64; 3], h: f64, k: [f64; 3]) -> [f64; 3] {
    [s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]]
}

/// Classical equations of motion integrated with fixed-step RK4.
pub fn integrate_trajectory(
    spec: &ModelSpec,
    initial: [f64; 3],
    t_end: f64,
    dt: f64,
) -> Result<TrajectoryRecord> {
    const OP: &str = "meanfield::integrate_trajectory";
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::invalid(OP, format!("dt must be positive (got {dt})")));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(Error::invalid(OP, format!("t_end must be nonnegative (got {t_end})")));
    }
    if initial.iter().any(|x| !x.is_finite()) {
        return Err(Error::invalid(OP, "initial state is not finite"));
    }
    let c0 = casimir(spec, initial);
    if c0.abs() > SURFACE_TOL {
        return Err(Error::OffSurface { residual: c0 });
    }
    let h0 = energy(spec, initial);
    let steps = (t_end / dt).round() as usize;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut s = initial;
    times.push(0.0);
    states.push(s);
    let (mut drift_h, mut drift_c) = (0.0_f64, 0.0_f64);
    for k in 1..=steps {
        let k1 = flow(spec, s);
        let k2 = flow(spec, axpy(s, 0.5 * dt, k1));
        let k3 = flow(spec, axpy(s, 0.5 * dt, k2));
        let k4 = flow(spec, axpy(s, dt, k3));
        for i in 0..3 {
            s[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        drift_h = drift_h.max((energy(spec, s) - h0).abs());
        drift_c = drift_c.max((casimir(spec, s) - c0).abs());
        times.push(k as f64 * dt);
        states.push(s);
    }
    Ok(TrajectoryRecord {
        times,
        states,
        drift_h,
        drift_c,
    })
}

/// Vertices of the Kummer shape on a `(p, θ)` grid.
///
/// Row-major with `p` outer (from `-½` to `½` inclusive) and `θ` inner
/// (`2πj/n_theta`, `j = 0..n_theta`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KummerMesh {
    pub n_theta: usize,
    pub n_p: usize,
    pub points: Vec<[f64; 3]>,
}

pub fn kummer_mesh(spec: &ModelSpec, n_theta: usize, n_p: usize) -> Result<KummerMesh> {
    if n_theta < 2 || n_p < 2 {
        return Err(Error::invalid(
            "meanfield::kummer_mesh",
            format!("resolutions must be at least 2 (got n_theta = {n_theta}, n_p = {n_p})"),
        ));
    }
    let mut points = Vec::with_capacity(n_theta * n_p);
    for i in 0..n_p {
        let p = -0.5 + i as f64 / (n_p - 1) as f64;
        let r = radius_unchecked(spec, p);
        for j in 0..n_theta {
            let theta = 2.0 * PI * j as f64 / n_theta as f64;
            points.push([r * theta.cos(), r * theta.sin(), p]);
        }
    }
    Ok(KummerMesh {
        n_theta,
        n_p,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: u32, n: u32, eps: f64) -> ModelSpec {
        ModelSpec::new(m, n, u64::from(m * n) * 40, eps, 1.0).unwrap()
    }

    #[test]
    fn radius_examples() {
        assert!((radius(&spec(2, 1, 0.0), 0.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((radius(&spec(3, 3, 0.0), 0.0).unwrap() - 1.0 / 24.0).abs() < 1e-15);
        let s = spec(2, 2, 0.0);
        for p in [-0.4, 0.1, 0.3] {
            assert!((radius(&s, p).unwrap() - (0.25 - p * p)).abs() < 1e-15);
        }
        assert!(radius(&s, 0.6).is_err());
        assert_eq!(radius(&s, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn classical_functions_closed_forms() {
        let s = spec(2, 1, 0.0);
        for p in [-0.3, 0.0, 0.2] {
            assert!((f_classical(&s, p) - (-0.25 + p + 3.0 * p * p)).abs() < 1e-15);
            let g = -0.25 - 0.5 * p + p * p + 2.0 * p * p * p;
            assert!((g_classical(&s, p) - g).abs() < 1e-15);
        }
        let s = spec(1, 1, 0.0);
        assert!((f_classical(&s, 0.3) - 0.3).abs() < 1e-15);
        assert!((g_classical(&s, 0.3) - (0.09 - 0.25)).abs() < 1e-15);
        let s = spec(2, 2, 0.0);
        assert!((f_classical(&s, 0.2) - 2.0 * 0.2 * (0.25 - 0.04)).abs() < 1e-15);
    }

    #[test]
    fn f_prime_matches_polynomial() {
        for (m, n) in [(1, 1), (2, 1), (1, 3), (3, 3), (4, 1), (4, 3)] {
            let s = spec(m, n, 0.0);
            let df = f_polynomial(&s).derivative();
            for p in [-0.5, -0.21, 0.0, 0.37, 0.5] {
                assert!((f_prime(&s, p) - df.eval(p)).abs() < 1e-13, "({m},{n}) p={p}");
                assert!((f_classical(&s, p) - f_polynomial(&s).eval(p)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn potentials_join_at_poles() {
        let s = spec(2, 1, 0.5);
        assert_eq!(potentials(&s, 0.5).unwrap(), (0.25, 0.25));
        let (lo, hi) = potentials(&s, 0.0).unwrap();
        assert!((lo + 0.5).abs() < 1e-15 && (hi - 0.5).abs() < 1e-15);
    }

    #[test]
    fn fixed_points_21() {
        let fps = find_fixed_points(&spec(2, 1, 0.5));
        assert_eq!(fps.len(), 3);
        let south = fps.iter().find(|f| f.location == Location::SouthPole).unwrap();
        assert!((south.energy + 0.25).abs() < 1e-15);
        assert!(matches!(south.stability, Stability::Saddle { .. }));
        let interior: Vec<_> = fps.iter().filter(|f| f.location == Location::Interior).collect();
        assert!((interior[0].p).abs() < 1e-12 && (interior[0].energy + 0.5).abs() < 1e-12);
        assert!((interior[1].p - 5.0 / 18.0).abs() < 1e-12);
        assert!((interior[1].energy - 0.657_407_407_407_407_4).abs() < 1e-12);
    }

    #[test]
    fn fixed_points_at_zero_eps() {
        let fps = find_fixed_points(&spec(2, 2, 0.0));
        let interior: Vec<_> = fps.iter().filter(|f| f.location == Location::Interior).collect();
        assert_eq!(interior.len(), 2);
        assert!(interior.iter().all(|f| f.p.abs() < 1e-14));
        assert!((interior[0].energy + 0.25).abs() < 1e-14);
        assert!((interior[1].energy - 0.25).abs() < 1e-14);
    }

    #[test]
    fn inflection_points_and_critical_values() {
        let p = inflection_points(&spec(3, 3, 0.0));
        assert_eq!(p.len(), 2);
        assert!((p[1] - 1.0 / 8f64.sqrt()).abs() < 1e-15);
        let ev = classify_bifurcations(&spec(2, 1, 0.0)).unwrap();
        assert!(ev.iter().any(|e| e.kind == BifurcationKind::Transcritical
            && (e.eps_critical - 2f64.sqrt()).abs() < 1e-14));
        assert!(classify_bifurcations(&ModelSpec::new(1, 1, 2, 0.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn trajectory_rejects_off_surface_and_stays_put_at_center() {
        let s = spec(2, 2, 0.6);
        assert!(matches!(
            integrate_trajectory(&s, [0.0, 0.0, 0.3], 1.0, 0.01),
            Err(Error::OffSurface { .. })
        ));
        let center = find_fixed_points(&s)
            .into_iter()
            .find(|f| f.location == Location::Interior)
            .unwrap();
        let start = [center.sx, 0.0, center.p];
        let rec = integrate_trajectory(&s, start, 1.0, 0.01).unwrap();
        assert!(rec.drift_h < 1e-15 && rec.drift_c < 1e-15);
        let last = rec.states.last().unwrap();
        assert!((last[2] - center.p).abs() < 1e-14);
    }

    #[test]
    fn mesh_lies_on_shape() {
        let s = spec(3, 3, 0.0);
        let mesh = kummer_mesh(&s, 8, 5).unwrap();
        assert_eq!(mesh.points.len(), 40);
        assert!(mesh.points.iter().all(|pt| casimir(&s, *pt).abs() < 1e-15));
        assert!(kummer_mesh(&s, 1, 5).is_err());
    }
}
