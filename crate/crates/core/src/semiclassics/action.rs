//! Phase-space areas, tunneling integrals and the phase correction.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::landscape::{Barrier, Landscape, Region, TurningPointSet};
use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::numerics::{arg_gamma_half, GaussLegendre};

/// Quadrature order for action integrals.
pub(crate) const ACTION_ORDER: usize = 96;
const ACOS_CLAMP: f64 = 1e-12;

/// Value of `q(p, E) = arccos x`: an angle in the allowed region, or the
/// magnitude `arccosh |x|` of the imaginary angle in a forbidden region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum AngleQ {
    Allowed(f64),
    Forbidden(f64),
}

pub(crate) fn q_of_x(x: f64) -> AngleQ {
    if x.abs() <= 1.0 + ACOS_CLAMP {
        AngleQ::Allowed(x.clamp(-1.0, 1.0).acos())
    } else {
        AngleQ::Forbidden(x.abs().acosh())
    }
}

/// `q(p, E) = arccos((E - εp)/(|v| r(p)))`.
pub fn angle_q(spec: &ModelSpec, p: f64, energy: f64) -> Result<AngleQ> {
    const OP: &str = "semiclassics::angle_q";
    if p.abs() > 0.5 {
        return Err(Error::domain(OP, format!("p = {p} outside [-1/2, 1/2]")));
    }
    let r = crate::meanfield::radius_unchecked(spec, p);
    let num = energy - spec.eps() * p;
    if r == 0.0 || spec.v() == 0.0 {
        if num == 0.0 {
            return Ok(AngleQ::Allowed(0.0));
        }
        return Err(Error::domain(OP, format!("p = {p} is a pole of the shape")));
    }
    Ok(q_of_x(num / (spec.v().abs() * r)))
}

pub(crate) struct Actions<'a> {
    pub land: &'a Landscape,
    gl: GaussLegendre,
}

/// Complex Gauss-Legendre integral along the straight segment `a → b` with
/// square-root behaviour at both ends.
fn segment_integral<F: Fn(Complex64) -> Complex64>(
    gl: &GaussLegendre,
    a: Complex64,
    b: Complex64,
    f: F,
) -> Complex64 {
    let d = b - a;
    let re = gl.integrate_sqrt_endpoints(0.0, 1.0, |s| f(a + d * s).re);
    let im = gl.integrate_sqrt_endpoints(0.0, 1.0, |s| f(a + d * s).im);
    Complex64::new(re, im) * d
}

impl<'a> Actions<'a> {
    pub fn new(land: &'a Landscape) -> Self {
        Actions {
            land,
            gl: GaussLegendre::new(ACTION_ORDER),
        }
    }

    /// `S̃ = ∫ q(p) dp` over an allowed region.
    pub fn s_tilde(&self, energy: f64, region: &Region) -> f64 {
        self.gl
            .integrate_sqrt_endpoints(region.lo.p, region.hi.p, |p| {
                match q_of_x(self.land.x(p, energy)) {
                    AngleQ::Allowed(q) => q,
                    AngleQ::Forbidden(_) => {
                        if self.land.x(p, energy) > 0.0 {
                            0.0
                        } else {
                            PI
                        }
                    }
                }
            })
    }

    /// Area of the part of `{H ≤ E}` bounded by the orbit in `region`.
    pub fn region_area(&self, energy: f64, region: &Region) -> f64 {
        2.0 * PI * (region.len() + region.full_measure()) - 2.0 * self.s_tilde(energy, region)
    }

    /// Total area of `{H ≤ E}`, from 0 at the band bottom to 2π at the top.
    pub fn total(&self, set: &TurningPointSet) -> f64 {
        if set.out_of_band {
            return if set.energy > self.land.e_max { 2.0 * PI } else { 0.0 };
        }
        let regions: f64 = set.regions.iter().map(|r| self.region_area(set.energy, r)).sum();
        regions + 2.0 * PI * set.detached_full
    }

    pub fn total_at(&self, energy: f64) -> f64 {
        self.total(&self.land.turning_points(energy))
    }

    /// `(1/πη) ∫ arccosh|x| dp` across a forbidden gap.
    pub fn tunneling_below(&self, energy: f64, gap: (f64, f64)) -> f64 {
        let integral = self.gl.integrate_sqrt_endpoints(gap.0, gap.1, |p| {
            match q_of_x(self.land.x(p, energy)) {
                AngleQ::Forbidden(k) => k,
                AngleQ::Allowed(_) => 0.0,
            }
        });
        integral / (PI * self.land.eta())
    }

    /// Continuation above the barrier between the complex turning points
    /// `t`, `t̄`; negative and vanishing at the barrier top.
    pub fn tunneling_above(&self, energy: f64, t: Complex64) -> f64 {
        let height = t.im.abs();
        let integral = self.gl.integrate_sqrt_endpoints(-height, height, |y| {
            let w = -self.land.x_complex(Complex64::new(t.re, y), energy);
            w.acos().re
        });
        -integral / (PI * self.land.eta())
    }

    /// Real part of the area from a real turning point to a complex one.
    pub fn complex_part_area(&self, energy: f64, from: f64, to: Complex64) -> f64 {
        let z = segment_integral(&self.gl, Complex64::new(from, 0.0), to, |p| {
            Complex64::new(2.0 * PI, 0.0) - self.land.x_complex(p, energy).acos() * 2.0
        });
        z.re
    }
}

/// Semiclassical actions of a double-well energy shell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActionSet {
    pub energy: f64,
    /// Total area of `{H ≤ E}`.
    pub s: f64,
    pub s_l: f64,
    pub s_r: f64,
    pub s_eps: f64,
    pub s_phi: f64,
    pub kappa: f64,
}

/// `S_φ = arg Γ(½ + iS) - S log|S| + S`, with `S_φ(0) = 0`.
pub fn phase_correction(s_eps: f64) -> f64 {
    if s_eps == 0.0 {
        return 0.0;
    }
    arg_gamma_half(s_eps) - s_eps * s_eps.abs().ln() + s_eps
}

impl Actions<'_> {
    /// Left/right areas and tunneling integral for the well pair separated by
    /// `barrier` (a local maximum of `U-`).
    pub fn double_well(&self, energy: f64, barrier: Barrier) -> Result<ActionSet> {
        const OP: &str = "semiclassics::tunneling_integral";
        let set = self.land.turning_points(energy);
        let s = self.total(&set);
        let (s_l, s_r, s_eps) = if energy < barrier.energy {
            let left: Vec<&Region> = set.regions.iter().filter(|r| r.hi.p <= barrier.p).collect();
            let right: Vec<&Region> = set.regions.iter().filter(|r| r.lo.p >= barrier.p).collect();
            if left.len() > 1 || right.len() > 1 {
                return Err(Error::BranchInconsistency {
                    op: OP,
                    detail: format!("more than two allowed regions at E = {energy}"),
                });
            }
            let s_l = left.first().map_or(0.0, |r| self.region_area(energy, r));
            let s_r = right.first().map_or(0.0, |r| self.region_area(energy, r));
            let lo = left.first().map_or_else(|| self.well_bottom(-0.5, barrier.p), |r| r.hi.p);
            let hi = right.first().map_or_else(|| self.well_bottom(barrier.p, 0.5), |r| r.lo.p);
            (s_l, s_r, self.tunneling_below(energy, (lo, hi)))
        } else {
            let region = set
                .regions
                .iter()
                .find(|r| r.lo.p - r.full_lo < barrier.p && r.hi.p + r.full_hi > barrier.p)
                .ok_or_else(|| Error::BranchInconsistency {
                    op: OP,
                    detail: format!("no allowed region straddles the barrier at E = {energy}"),
                })?;
            let (t, _) = self
                .land
                .complex_turning_pair(energy, barrier.p)
                .ok_or_else(|| Error::BranchInconsistency {
                    op: OP,
                    detail: format!("no complex turning points above the barrier at E = {energy}"),
                })?;
            let s_l = self.complex_part_area(energy, region.lo.p, t) + 2.0 * PI * region.full_lo;
            let s_r = -self.complex_part_area(energy, region.hi.p, t) + 2.0 * PI * region.full_hi;
            (s_l, s_r, self.tunneling_above(energy, t))
        };
        Ok(ActionSet {
            energy,
            s,
            s_l,
            s_r,
            s_eps,
            s_phi: phase_correction(s_eps),
            kappa: (-PI * s_eps).exp(),
        })
    }

    /// Location of the minimum of `U-` on `[a, b]` (an empty well).
    fn well_bottom(&self, a: f64, b: f64) -> f64 {
        let target = self.land.lower_min_on(a, b);
        let mut best = a;
        let mut best_val = f64::INFINITY;
        let steps = 400;
        for k in 0..=steps {
            let p = a + (b - a) * k as f64 / steps as f64;
            let u = self.land.u(super::Branch::Lower, p);
            if (u - target).abs() < best_val {
                best_val = (u - target).abs();
                best = p;
            }
        }
        best
    }
}

/// Area of the sublevel set bounded by the orbit in `region`:
/// `2π(p_hi - p_lo + attached pole measure) - 2S̃`.
pub fn action_area(spec: &ModelSpec, energy: f64, region: &Region) -> Result<f64> {
    let land = Landscape::new(spec)?;
    Ok(Actions::new(&land).region_area(energy, region))
}

/// Total phase-space area of `{H ≤ E}`.
pub fn total_action(spec: &ModelSpec, energy: f64) -> Result<f64> {
    let land = Landscape::new(spec)?;
    Ok(Actions::new(&land).total_at(energy))
}

/// Tunneling integral `S_ε` at `E` for the barrier nearest `near_p` (a local
/// maximum of `U-`); positive below the barrier top and negative above it.
pub fn tunneling_integral(spec: &ModelSpec, energy: f64, near_p: f64) -> Result<f64> {
    let land = Landscape::new(spec)?;
    let barrier = land
        .lower_barriers
        .iter()
        .copied()
        .min_by(|a, b| (a.p - near_p).abs().total_cmp(&(b.p - near_p).abs()))
        .ok_or_else(|| {
            Error::invalid("semiclassics::tunneling_integral", "the lower potential has no barrier")
        })?;
    Ok(Actions::new(&land).double_well(energy, barrier)?.s_eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angle_examples() {
        assert_eq!(q_of_x(1.0), AngleQ::Allowed(0.0));
        assert_eq!(q_of_x(1.0 + 1e-13), AngleQ::Allowed(0.0));
        assert!(matches!(q_of_x(0.0), AngleQ::Allowed(q) if (q - PI / 2.0).abs() < 1e-15));
        assert!(matches!(q_of_x(1f64.cosh()), AngleQ::Forbidden(k) if (k - 1.0).abs() < 1e-15));
        let s = ModelSpec::new(2, 1, 40, 0.5, 1.0).unwrap();
        assert!(angle_q(&s, -0.5, 0.3).is_err());
        assert!(angle_q(&s, 0.7, 0.3).is_err());
    }

    #[test]
    fn phase_correction_values() {
        assert_eq!(phase_correction(0.0), 0.0);
        assert!((phase_correction(1.0) - 0.044_992_275_657_430_89).abs() < 1e-12);
        assert!((phase_correction(30.0) - 0.001_388_978_941_131_952_9).abs() < 1e-12);
        assert!((phase_correction(-3.0) + 0.013_982_405_082_110_092).abs() < 1e-12);
    }

    #[test]
    fn su2_half_area() {
        let s = ModelSpec::new(1, 1, 40, 0.0, 1.0).unwrap();
        assert!((total_action(&s, 0.0).unwrap() - PI).abs() < 1e-10);
        assert!(total_action(&s, -0.5 - 1e-9).unwrap() == 0.0);
        assert!((total_action(&s, 0.5 + 1e-9).unwrap() - 2.0 * PI).abs() < 1e-15);
    }
}
