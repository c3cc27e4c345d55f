//! Potential curves `U±(p) = εp ± |v| r(p)` and the turning points of an
//! energy shell.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::meanfield::{self, Location, Stability};
use crate::model::ModelSpec;
use crate::numerics::{bracketed_root, Poly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `U-`
    Lower,
    /// `U+`
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurningPoint {
    pub p: f64,
    pub branch: Branch,
}

/// Classically allowed interval `U-(p) < E < U+(p)` between two turning
/// points. `full_lo`/`full_hi` are the lengths of adjacent pole intervals on
/// which `E > U+` (the orbit encloses the pole there).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub lo: TurningPoint,
    pub hi: TurningPoint,
    pub full_lo: f64,
    pub full_hi: f64,
}

impl Region {
    pub fn len(&self) -> f64 {
        self.hi.p - self.lo.p
    }

    pub fn full_measure(&self) -> f64 {
        self.full_lo + self.full_hi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurningPointSet {
    pub energy: f64,
    pub real_points: Vec<TurningPoint>,
    pub regions: Vec<Region>,
    /// Length of `E > U+` intervals not attached to any region.
    pub detached_full: f64,
    /// Complex turning point (upper half plane) continuing a barrier when
    /// two allowed regions have merged.
    pub complex_pair: Option<(Complex64, Complex64)>,
    pub out_of_band: bool,
}

/// A saddle of the classical flow that separates two wells: a local maximum of
/// `U-` or a local minimum of `U+`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Barrier {
    pub p: f64,
    pub energy: f64,
}

/// Precomputed shape information for repeated energy-shell queries.
#[derive(Debug, Clone)]
pub(crate) struct Landscape {
    pub spec: ModelSpec,
    pub abs_v: f64,
    lower_breaks: Vec<f64>,
    upper_breaks: Vec<f64>,
    pub lower_barriers: Vec<Barrier>,
    pub upper_barriers: Vec<Barrier>,
    pub saddle_energies: Vec<f64>,
    pub e_min: f64,
    pub e_max: f64,
}

impl Landscape {
    pub fn new(spec: &ModelSpec) -> Result<Self> {
        if spec.v() == 0.0 {
            return Err(Error::invalid(
                "semiclassics",
                "v must be nonzero for a semiclassical treatment",
            ));
        }
        let mut lower_breaks = Vec::new();
        let mut upper_breaks = Vec::new();
        let mut lower_barriers = Vec::new();
        let mut upper_barriers = Vec::new();
        let mut saddle_energies = Vec::new();
        for fp in meanfield::find_fixed_points(spec) {
            if !matches!(fp.stability, Stability::Center { .. }) {
                saddle_energies.push(fp.energy);
            }
            if fp.location != Location::Interior {
                continue;
            }
            let branch = if spec.v() * fp.sx > 0.0 {
                Branch::Upper
            } else {
                Branch::Lower
            };
            let is_saddle = matches!(fp.stability, Stability::Saddle { .. });
            let barrier = Barrier {
                p: fp.p,
                energy: fp.energy,
            };
            match branch {
                Branch::Lower => {
                    lower_breaks.push(fp.p);
                    if is_saddle {
                        lower_barriers.push(barrier);
                    }
                }
                Branch::Upper => {
                    upper_breaks.push(fp.p);
                    if is_saddle {
                        upper_barriers.push(barrier);
                    }
                }
            }
        }
        lower_breaks.sort_by(f64::total_cmp);
        upper_breaks.sort_by(f64::total_cmp);
        saddle_energies.sort_by(f64::total_cmp);
        saddle_energies.dedup();
        let (e_min, e_max) = meanfield::energy_range(spec);
        Ok(Landscape {
            spec: *spec,
            abs_v: spec.v().abs(),
            lower_breaks,
            upper_breaks,
            lower_barriers,
            upper_barriers,
            saddle_energies,
            e_min,
            e_max,
        })
    }

    pub fn eta(&self) -> f64 {
        self.spec.eta()
    }

    pub fn radius(&self, p: f64) -> f64 {
        meanfield::radius_unchecked(&self.spec, p)
    }

    pub fn u(&self, branch: Branch, p: f64) -> f64 {
        let r = self.abs_v * self.radius(p);
        match branch {
            Branch::Lower => self.spec.eps() * p - r,
            Branch::Upper => self.spec.eps() * p + r,
        }
    }

    fn breaks(&self, branch: Branch) -> &[f64] {
        match branch {
            Branch::Lower => &self.lower_breaks,
            Branch::Upper => &self.upper_breaks,
        }
    }

    /// Monotone pieces `[a, b]` of `U±`.
    pub fn pieces(&self, branch: Branch) -> Vec<(f64, f64)> {
        let mut nodes = vec![-0.5];
        nodes.extend_from_slice(self.breaks(branch));
        nodes.push(0.5);
        nodes.windows(2).map(|w| (w[0], w[1])).collect()
    }

    /// Minimum of `U-` on `[a, b]`.
    pub fn lower_min_on(&self, a: f64, b: f64) -> f64 {
        let mut best = self.u(Branch::Lower, a).min(self.u(Branch::Lower, b));
        for &p in &self.lower_breaks {
            if p > a && p < b {
                best = best.min(self.u(Branch::Lower, p));
            }
        }
        best
    }

    /// `(E - εp) / (|v| r(p))`
    pub fn x(&self, p: f64, energy: f64) -> f64 {
        (energy - self.spec.eps() * p) / (self.abs_v * self.radius(p))
    }

    /// Complex continuation of [`Landscape::x`] with principal powers.
    pub fn x_complex(&self, p: Complex64, energy: f64) -> Complex64 {
        let (m, n) = (f64::from(self.spec.m()), f64::from(self.spec.n()));
        let r0 = meanfield::shape_constant(&self.spec).sqrt();
        let a = Complex64::new(0.5, 0.0) + p;
        let b = Complex64::new(0.5, 0.0) - p;
        let r = a.powf(0.5 * m) * b.powf(0.5 * n) * r0;
        (Complex64::new(energy, 0.0) - p * self.spec.eps()) / (r * self.abs_v)
    }

    /// `Π(p) = v² r²(p) - (E - εp)² = (U+ - E)(E - U-)`.
    pub fn shell_polynomial(&self, energy: f64) -> Poly {
        let lin = Poly::linear(energy, -self.spec.eps());
        let vr2 = meanfield::pole_factors(self.spec.m(), self.spec.n())
            .scale(self.spec.v() * self.spec.v() * meanfield::shape_constant(&self.spec));
        &vr2 - &(&lin * &lin)
    }

    pub fn turning_points(&self, energy: f64) -> TurningPointSet {
        let mut set = TurningPointSet {
            energy,
            real_points: Vec::new(),
            regions: Vec::new(),
            detached_full: 0.0,
            complex_pair: None,
            out_of_band: false,
        };
        if energy < self.e_min || energy > self.e_max {
            set.out_of_band = true;
            if energy > self.e_max {
                set.detached_full = 1.0;
            }
            return set;
        }
        let mut points = Vec::new();
        for branch in [Branch::Lower, Branch::Upper] {
            for (a, b) in self.pieces(branch) {
                let ua = self.u(branch, a) - energy;
                let ub = self.u(branch, b) - energy;
                if ua == 0.0 && ub == 0.0 {
                    continue;
                }
                let p = if ua == 0.0 {
                    a
                } else if ub == 0.0 {
                    b
                } else if ua.signum() != ub.signum() {
                    bracketed_root(|p| self.u(branch, p) - energy, a, b, 1e-16)
                } else {
                    continue;
                };
                if p.abs() >= 0.5 {
                    continue;
                }
                points.push(TurningPoint { p, branch });
            }
        }
        points.sort_by(|a, b| a.p.total_cmp(&b.p));
        points.dedup_by(|a, b| a.branch == b.branch && (a.p - b.p).abs() < 1e-15);
        set.real_points = points.clone();

        #[derive(Clone, Copy, PartialEq)]
        enum Kind {
            Empty,
            Full,
            Allowed,
        }
        let mut nodes = vec![-0.5];
        nodes.extend(points.iter().map(|t| t.p));
        nodes.push(0.5);
        let mut cells: Vec<(f64, f64, Kind)> = Vec::new();
        for w in nodes.windows(2) {
            if w[1] <= w[0] {
                continue;
            }
            let mid = 0.5 * (w[0] + w[1]);
            let kind = if energy < self.u(Branch::Lower, mid) {
                Kind::Empty
            } else if energy > self.u(Branch::Upper, mid) {
                Kind::Full
            } else {
                Kind::Allowed
            };
            match cells.last_mut() {
                Some(last) if last.2 == kind => last.1 = w[1],
                _ => cells.push((w[0], w[1], kind)),
            }
        }
        let label = |p: f64| -> TurningPoint {
            points
                .iter()
                .copied()
                .min_by(|a, b| (a.p - p).abs().total_cmp(&(b.p - p).abs()))
                .filter(|t| (t.p - p).abs() < 1e-12)
                .unwrap_or(TurningPoint {
                    p,
                    branch: if energy < self.spec.eps() * p {
                        Branch::Lower
                    } else {
                        Branch::Upper
                    },
                })
        };
        let count = cells.len();
        for (i, &(a, b, kind)) in cells.iter().enumerate() {
            match kind {
                Kind::Allowed => {
                    let mut full_lo = 0.0;
                    let mut full_hi = 0.0;
                    if i > 0 && cells[i - 1].2 == Kind::Full && cells[i - 1].0 == -0.5 {
                        full_lo = cells[i - 1].1 - cells[i - 1].0;
                    }
                    if i + 1 < count && cells[i + 1].2 == Kind::Full && cells[i + 1].1 == 0.5 {
                        full_hi = cells[i + 1].1 - cells[i + 1].0;
                    }
                    set.regions.push(Region {
                        lo: label(a),
                        hi: label(b),
                        full_lo,
                        full_hi,
                    });
                }
                Kind::Full => {
                    let at_pole = a == -0.5 || b == 0.5;
                    let neighbour_allowed = (i > 0 && cells[i - 1].2 == Kind::Allowed)
                        || (i + 1 < count && cells[i + 1].2 == Kind::Allowed);
                    if !(at_pole && neighbour_allowed) {
                        set.detached_full += b - a;
                    }
                }
                Kind::Empty => {}
            }
        }
        if set.regions.len() == 1 {
            let region = set.regions[0];
            let barrier = self
                .lower_barriers
                .iter()
                .chain(self.upper_barriers.iter())
                .find(|bar| {
                    bar.p > region.lo.p && bar.p < region.hi.p && {
                        let lower = self.lower_barriers.contains(bar);
                        if lower {
                            energy > bar.energy
                        } else {
                            energy < bar.energy
                        }
                    }
                })
                .copied();
            if let Some(bar) = barrier {
                set.complex_pair = self.complex_turning_pair(energy, bar.p);
            }
        }
        set
    }

    /// Complex conjugate roots of the shell polynomial nearest `near`.
    pub fn complex_turning_pair(&self, energy: f64, near: f64) -> Option<(Complex64, Complex64)> {
        let poly = self.shell_polynomial(energy);
        poly.complex_roots()
            .into_iter()
            .filter(|z| z.im > 1e-14)
            .min_by(|a, b| {
                let da = (a - Complex64::new(near, 0.0)).norm();
                let db = (b - Complex64::new(near, 0.0)).norm();
                da.total_cmp(&db)
            })
            .map(|z| (z, z.conj()))
    }
}

/// Real and complex turning points of the energy shell at scaled energy `E`.
pub fn turning_points(spec: &ModelSpec, energy: f64) -> Result<TurningPointSet> {
    Ok(Landscape::new(spec)?.turning_points(energy))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(m: u32, n: u32, eps: f64) -> ModelSpec {
        ModelSpec::new(m, n, u64::from(m * n) * 40, eps, 1.0).unwrap()
    }

    #[test]
    fn single_region_21() {
        let l = Landscape::new(&spec(2, 1, 1.5)).unwrap();
        let set = l.turning_points(0.0);
        assert_eq!(set.real_points.len(), 2);
        assert_eq!(set.regions.len(), 1);
        assert_eq!(set.regions[0].lo.branch, Branch::Upper);
        assert_eq!(set.regions[0].hi.branch, Branch::Lower);
        let poly = l.shell_polynomial(0.0);
        for t in &set.real_points {
            assert!(poly.eval(t.p).abs() < 1e-14);
        }
    }

    #[test]
    fn double_well_41() {
        let l = Landscape::new(&spec(4, 1, 0.3)).unwrap();
        let bar = l.lower_barriers[0];
        let set = l.turning_points(bar.energy - 0.005);
        assert_eq!(set.regions.len(), 2);
        assert!(set.regions[0].full_lo > 0.0);
        assert!(set.complex_pair.is_none());
        let above = l.turning_points(bar.energy + 0.005);
        assert_eq!(above.regions.len(), 1);
        let (t, _) = above.complex_pair.unwrap();
        assert!((t.re - bar.p).abs() < 0.05);
    }

    #[test]
    fn out_of_band() {
        let l = Landscape::new(&spec(2, 2, 0.2)).unwrap();
        assert!(l.turning_points(l.e_min - 0.1).out_of_band);
        assert!(Landscape::new(&ModelSpec::new(1, 1, 2, 1.0, 0.0).unwrap()).is_err());
    }
}
