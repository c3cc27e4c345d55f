//! Classical period and the semiclassical density of states.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::action::Actions;
use super::landscape::Landscape;
use crate::error::{Error, Result};
use crate::model::ModelSpec;
use crate::numerics::gauss_chebyshev;

const MIN_ORDER: usize = 64;
const MAX_ORDER: usize = 1 << 18;
const PERIOD_RTOL: f64 = 1e-11;
/// Energies closer than this to a saddle are skipped by [`dos_curve`].
pub const SADDLE_EXCLUSION: f64 = 1e-6;

pub(crate) fn period_in(land: &Landscape, energy: f64) -> Result<f64> {
    const OP: &str = "semiclassics::period_t";
    if !(energy > land.e_min && energy < land.e_max) {
        return Err(Error::OutOfBand {
            op: OP,
            energy,
            lo: land.e_min,
            hi: land.e_max,
        });
    }
    let width = land.e_max - land.e_min;
    if land
        .saddle_energies
        .iter()
        .any(|&s| (s - energy).abs() <= 1e-12 * width)
    {
        return Err(Error::SaddleSingularity { op: OP, energy });
    }
    let set = land.turning_points(energy);
    let shell = land.shell_polynomial(energy);
    let mut total = 0.0;
    for region in &set.regions {
        let (lo, hi) = (region.lo.p, region.hi.p);
        let q = shell.deflate(lo).deflate(hi).scale(-1.0);
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let integrand = |x: f64| {
            let value = q.eval(mid + half * x);
            1.0 / value.abs().max(f64::MIN_POSITIVE).sqrt()
        };
        let mut order = MIN_ORDER;
        let mut prev = gauss_chebyshev(order, integrand);
        loop {
            order *= 2;
            let next = gauss_chebyshev(order, integrand);
            if (next - prev).abs() <= PERIOD_RTOL * next.abs() {
                prev = next;
                break;
            }
            if order >= MAX_ORDER {
                return Err(Error::NoConvergence {
                    op: OP,
                    detail: format!("period quadrature at E = {energy} did not settle by order {order}"),
                });
            }
            prev = next;
        }
        total += 2.0 * prev;
    }
    Ok(total)
}

/// Classical period `T(E) = Σ 2∫ dp/√Π` over the allowed regions, with
/// `Π = v²r² - (E - εp)²`. Equals `dS/dE`.
#[allow(non_snake_case)]
pub fn period_T(spec: &ModelSpec, energy: f64) -> Result<f64> {
    period_in(&Landscape::new(spec)?, energy)
}

/// Scaled energies of interior saddles and degenerate points, where the
/// period diverges.
pub fn saddle_energies(spec: &ModelSpec) -> Result<Vec<f64>> {
    Ok(Landscape::new(spec)?.saddle_energies)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DosPoint {
    pub energy: f64,
    /// `T(E)/2π`, the density of levels per unit `E` divided by `1/η`.
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DosCurve {
    pub points: Vec<DosPoint>,
    pub saddle_energies: Vec<f64>,
}

/// Semiclassical density `T/2π` at each in-band energy away from saddles.
pub fn dos_curve(spec: &ModelSpec, energies: &[f64]) -> Result<DosCurve> {
    let land = Landscape::new(spec)?;
    let mut points = Vec::with_capacity(energies.len());
    for &energy in energies {
        if !(energy > land.e_min && energy < land.e_max)
            || land
                .saddle_energies
                .iter()
                .any(|&s| (s - energy).abs() < SADDLE_EXCLUSION)
        {
            continue;
        }
        points.push(DosPoint {
            energy,
            density: period_in(&land, energy)? / (2.0 * PI),
        });
    }
    Ok(DosCurve {
        points,
        saddle_energies: land.saddle_energies.clone(),
    })
}

/// Mean of `T/2π` over `[lo, hi]`, computed exactly as `ΔS/(2πΔE)`.
pub fn bin_average_density(spec: &ModelSpec, lo: f64, hi: f64) -> Result<f64> {
    if !(hi > lo) {
        return Err(Error::invalid(
            "semiclassics::bin_average_density",
            format!("empty interval [{lo}, {hi}]"),
        ));
    }
    let land = Landscape::new(spec)?;
    let act = Actions::new(&land);
    Ok((act.total_at(hi) - act.total_at(lo)) / (2.0 * PI * (hi - lo)))
}
