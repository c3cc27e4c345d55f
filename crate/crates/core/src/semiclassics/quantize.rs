//! WKB quantization of the scaled spectrum.
//!
//! Single wells obey `S(E_ν) = 2πη(ν + ½)` with `S` the area of `{H ≤ E}`.
//! A pair of wells in `U-` separated by a barrier obeys
//! `√(1+κ²) cos((S_l+S_r)/2η - S_φ) = -cos((S_l-S_r)/2η)`, continued above
//! the barrier top with complex turning points. Double wells in `U+` are
//! handled on the mirror model `ε → -ε`, whose spectrum is the negated one.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::action::Actions;
use super::landscape::{Barrier, Landscape};
use crate::error::{Error, Result};
use crate::model::ModelSpec;

/// Tunneling integral above the barrier at which the matching condition is
/// replaced by single-well quantization of the merged region (`κ = e^{2π}`).
const SWITCH_S_EPS: f64 = -2.0;
const ENERGY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    SingleWell,
    DoubleWellBelow,
    AboveBarrier,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemiclassicalLevel {
    pub nu: usize,
    /// Scaled energy `ηE_ν`.
    pub energy: f64,
    pub regime: Regime,
    /// Derived from the mirror model (an upper-potential double well).
    pub mirrored: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemiclassicalSpectrum {
    pub spec: ModelSpec,
    pub levels: Vec<SemiclassicalLevel>,
}

impl SemiclassicalSpectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }
}

struct Quantizer<'a> {
    land: &'a Landscape,
    act: Actions<'a>,
}

impl<'a> Quantizer<'a> {
    fn new(land: &'a Landscape) -> Self {
        Quantizer {
            land,
            act: Actions::new(land),
        }
    }

    fn two_pi_eta(&self) -> f64 {
        2.0 * PI * self.land.eta()
    }

    fn area(&self, energy: f64) -> f64 {
        self.act.total_at(energy)
    }

    /// Energy in `[lo, hi]` at which the total area equals `target`.
    fn solve_area(&self, target: f64, mut lo: f64, mut hi: f64) -> f64 {
        while hi - lo > ENERGY_TOL {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.area(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Single-well level `ν` over the whole band (`ν = -1` and `ν = dim`
    /// map to the band edges).
    fn single_level(&self, nu: i64) -> f64 {
        if nu < 0 {
            return self.land.e_min;
        }
        if nu >= self.land.spec.dim() as i64 {
            return self.land.e_max;
        }
        let target = self.two_pi_eta() * (nu as f64 + 0.5);
        self.solve_area(target, self.land.e_min, self.land.e_max)
    }

    /// Midpoint between consecutive single-well levels inside `[lo, hi]`
    /// nearest to `target`; `target` itself when there is none.
    fn midpoint_near(&self, target: f64, lo: f64, hi: f64) -> f64 {
        let k = (self.area(target) / self.two_pi_eta() - 0.5).floor() as i64;
        let mut best = target;
        let mut best_dist = f64::INFINITY;
        for j in (k - 1)..=(k + 1) {
            let mid = 0.5 * (self.single_level(j) + self.single_level(j + 1));
            if mid >= lo && mid <= hi && (mid - target).abs() < best_dist {
                best = mid;
                best_dist = (mid - target).abs();
            }
        }
        best
    }

    /// Single-well levels whose quantized area lies in `(s_lo, s_hi)`.
    fn single_levels_between(&self, e_lo: f64, e_hi: f64) -> Vec<f64> {
        let s_lo = self.area(e_lo);
        let s_hi = self.area(e_hi);
        let first = (s_lo / self.two_pi_eta() - 0.5).ceil().max(0.0) as i64;
        let mut out = Vec::new();
        let mut nu = first;
        loop {
            let target = self.two_pi_eta() * (nu as f64 + 0.5);
            if target >= s_hi {
                break;
            }
            if target > s_lo {
                out.push(self.solve_area(target, e_lo, e_hi));
            }
            nu += 1;
        }
        out
    }

    /// `h± = (S_l+S_r)/2η - S_φ ∓ arccos(-cos((S_l-S_r)/2η)/√(1+κ²))`; levels
    /// sit where either equals a multiple of 2π.
    fn h_pair(&self, energy: f64, barrier: Barrier) -> Result<(f64, f64)> {
        let eta = self.land.eta();
        let e = if (energy - barrier.energy).abs() < 1e-14 {
            barrier.energy - 1e-14
        } else {
            energy
        };
        let set = self.act.double_well(e, barrier)?;
        let a = (set.s_l + set.s_r) / (2.0 * eta);
        let b = (set.s_l - set.s_r) / (2.0 * eta);
        let c = (-b.cos() / (1.0 + set.kappa * set.kappa).sqrt()).clamp(-1.0, 1.0);
        let ac = c.acos();
        Ok((a - set.s_phi - ac, a - set.s_phi + ac))
    }

    fn s_eps(&self, energy: f64, barrier: Barrier) -> Result<f64> {
        Ok(self.act.double_well(energy, barrier)?.s_eps)
    }

    /// Levels of the matching condition in `(lo, hi]`.
    fn matching_levels(&self, lo: f64, hi: f64, barrier: Barrier) -> Result<Vec<(f64, Regime)>> {
        let expected = (self.area(hi) - self.area(lo)) / self.two_pi_eta();
        let cells = (16.0 * (expected + 2.0)).ceil().max(64.0) as usize;
        let grid: Vec<f64> = (0..=cells)
            .map(|k| lo + (hi - lo) * k as f64 / cells as f64)
            .map(|e| if e == lo { lo + 1e-12 * (hi - lo) } else { e })
            .collect();
        let values = grid
            .iter()
            .map(|&e| self.h_pair(e, barrier))
            .collect::<Result<Vec<_>>>()?;
        let mut out = Vec::new();
        for which in 0..2 {
            let pick = |v: (f64, f64)| if which == 0 { v.0 } else { v.1 };
            for i in 0..cells {
                let (h0, h1) = (pick(values[i]), pick(values[i + 1]));
                let (a, b) = if h0 <= h1 { (h0, h1) } else { (h1, h0) };
                let k_lo = (a / (2.0 * PI)).floor() as i64 + 1;
                let k_hi = (b / (2.0 * PI)).floor() as i64;
                for k in k_lo..=k_hi {
                    let target = 2.0 * PI * k as f64;
                    let g = |e: f64| -> Result<f64> { Ok(pick(self.h_pair(e, barrier)?) - target) };
                    let (mut el, mut eh) = (grid[i], grid[i + 1]);
                    let mut gl = h0 - target;
                    while eh - el > ENERGY_TOL {
                        let mid = 0.5 * (el + eh);
                        if mid <= el || mid >= eh {
                            break;
                        }
                        let gm = g(mid)?;
                        if (gm < 0.0) == (gl < 0.0) {
                            el = mid;
                            gl = gm;
                        } else {
                            eh = mid;
                        }
                    }
                    let e = 0.5 * (el + eh);
                    let regime = if e < barrier.energy {
                        Regime::DoubleWellBelow
                    } else {
                        Regime::AboveBarrier
                    };
                    out.push((e, regime));
                }
            }
        }
        Ok(out)
    }

    /// Levels below `cut`, where every pair of allowed regions is separated by
    /// a forbidden gap under `U-`.
    fn levels_below(&self, cut: f64) -> Result<Vec<(f64, Regime)>> {
        let barriers: Vec<Barrier> = self
            .land
            .lower_barriers
            .iter()
            .copied()
            .filter(|b| b.energy < cut)
            .collect();
        let single = |lo: f64, hi: f64| -> Vec<(f64, Regime)> {
            self.single_levels_between(lo, hi)
                .into_iter()
                .map(|e| (e, Regime::SingleWell))
                .collect()
        };
        match barriers.as_slice() {
            [] => Ok(single(self.land.e_min, cut)),
            [barrier] => {
                let barrier = *barrier;
                let bottom_l = self.land.lower_min_on(-0.5, barrier.p);
                let bottom_r = self.land.lower_min_on(barrier.p, 0.5);
                let e1 = bottom_l.max(bottom_r);
                let e1 = self.midpoint_near(e1, self.land.e_min, e1);
                self.check_barrier_continuity(barrier)?;
                let e_sw = if self.merged_s_eps(cut, barrier)? < SWITCH_S_EPS {
                    let (mut lo, mut hi) = (barrier.energy, cut);
                    while hi - lo > 1e-10 * (self.land.e_max - self.land.e_min) {
                        let mid = 0.5 * (lo + hi);
                        if self.merged_s_eps(mid, barrier)? > SWITCH_S_EPS {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    self.midpoint_near(lo, barrier.energy.max(e1), lo)
                } else {
                    cut
                };
                let mut out = single(self.land.e_min, e1);
                out.extend(self.matching_levels(e1, e_sw, barrier)?);
                out.extend(single(e_sw, cut));
                Ok(out)
            }
            _ => Err(Error::BranchInconsistency {
                op: "semiclassics::quantize_double_well",
                detail: format!(
                    "{} barriers in the lower potential; at most two wells are supported",
                    barriers.len()
                ),
            }),
        }
    }

    /// `S_ε` above the barrier, `-∞` once the two wells no longer share an
    /// allowed region.
    fn merged_s_eps(&self, energy: f64, barrier: Barrier) -> Result<f64> {
        match self.act.double_well(energy, barrier) {
            Ok(set) => Ok(set.s_eps),
            Err(Error::BranchInconsistency { .. }) if energy > barrier.energy => Ok(f64::NEG_INFINITY),
            Err(err) => Err(err),
        }
    }

    fn check_barrier_continuity(&self, barrier: Barrier) -> Result<()> {
        let delta = 1e-9 * (self.land.e_max - self.land.e_min);
        let below = self.s_eps(barrier.energy - delta, barrier)?;
        let above = self.s_eps(barrier.energy + delta, barrier)?;
        let jump = (above - below).abs();
        if jump > 1e-2 || !jump.is_finite() {
            return Err(Error::BranchDiscontinuity { jump });
        }
        Ok(())
    }
}

fn finish(spec: &ModelSpec, mut raw: Vec<(f64, Regime, bool)>, op: &'static str) -> Result<SemiclassicalSpectrum> {
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));
    if raw.len() != spec.dim() {
        return Err(Error::LevelCount {
            op,
            expected: spec.dim(),
            found: raw.len(),
            detail: format!("(m, n) = ({}, {}), eps = {}", spec.m(), spec.n(), spec.eps()),
        });
    }
    Ok(SemiclassicalSpectrum {
        spec: *spec,
        levels: raw
            .into_iter()
            .enumerate()
            .map(|(nu, (energy, regime, mirrored))| SemiclassicalLevel {
                nu,
                energy,
                regime,
                mirrored,
            })
            .collect(),
    })
}

/// `S(E_ν) = 2πη(ν + ½)` for models with a single allowed region at every
/// energy.
pub fn quantize_single_well(spec: &ModelSpec) -> Result<SemiclassicalSpectrum> {
    let land = Landscape::new(spec)?;
    if !land.lower_barriers.is_empty() || !land.upper_barriers.is_empty() {
        return Err(Error::NotSingleWell {
            detail: format!(
                "{} barrier(s) in U-, {} in U+",
                land.lower_barriers.len(),
                land.upper_barriers.len()
            ),
        });
    }
    let q = Quantizer::new(&land);
    let raw = (0..spec.dim() as i64)
        .map(|nu| (q.single_level(nu), Regime::SingleWell, false))
        .collect();
    finish(spec, raw, "semiclassics::quantize_single_well")
}

/// Full semiclassical spectrum including tunneling between two wells of
/// either potential curve. Reduces to single-well quantization where only
/// one allowed region exists.
pub fn quantize_double_well(spec: &ModelSpec) -> Result<SemiclassicalSpectrum> {
    const OP: &str = "semiclassics::quantize_double_well";
    let land = Landscape::new(spec)?;
    let mirror_spec = spec.with_eps(-spec.eps());
    let mirror = Landscape::new(&mirror_spec)?;
    let lo_w = land
        .lower_barriers
        .iter()
        .map(|b| b.energy)
        .fold(land.e_min, f64::max);
    let hi_w = land
        .upper_barriers
        .iter()
        .map(|b| b.energy)
        .fold(land.e_max, f64::min);
    if lo_w >= hi_w {
        return Err(Error::BranchInconsistency {
            op: OP,
            detail: format!(
                "barrier of U- at {lo_w} lies above a barrier of U+ at {hi_w}; overlapping double wells are not supported"
            ),
        });
    }
    let q = Quantizer::new(&land);
    let cut = q.midpoint_near(0.5 * (lo_w + hi_w), lo_w, hi_w);
    let qm = Quantizer::new(&mirror);
    let mut raw: Vec<(f64, Regime, bool)> = q
        .levels_below(cut)?
        .into_iter()
        .map(|(e, r)| (e, r, false))
        .collect();
    raw.extend(
        qm.levels_below(-cut)?
            .into_iter()
            .map(|(e, r)| (-e, r, r != Regime::SingleWell)),
    );
    finish(spec, raw, OP)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn su2_levels() {
        let s = ModelSpec::new(1, 1, 2, 0.0, 1.0).unwrap();
        let spec = quantize_single_well(&s).unwrap();
        let e = spec.energies();
        for (a, b) in e.iter().zip([-1.0 / 3.0, 0.0, 1.0 / 3.0]) {
            assert!((a - b).abs() < 1e-9, "{e:?}");
        }
    }

    #[test]
    fn single_well_rejects_double_well() {
        let s = ModelSpec::new(4, 1, 160, 0.3, 1.0).unwrap();
        assert!(matches!(quantize_single_well(&s), Err(Error::NotSingleWell { .. })));
    }
}
