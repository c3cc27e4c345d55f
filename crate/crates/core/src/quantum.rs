//! Many-particle operators on the fixed-`N` subspace.
//!
//! In the Fock basis `|μ⟩`, `μ = 0..=N/mn`, the operator `s_z` is diagonal
//! and `s_±` are single-step ladders with `⟨μ+1|s_+|μ⟩ = √β_{μ+1}`, so every
//! operator here is a real symmetric tridiagonal matrix. `s_y = -iK` with the
//! real antisymmetric `K = (s_+ - s_-)/2` is never formed as a complex matrix.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra;
use crate::error::{Error, Result};
use crate::meanfield::{self, FixedPoint};
use crate::model::ModelSpec;
use crate::numerics::{inverse_iteration, residual_norm, tridiagonal_eigenvalues};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OperatorKind {
    Sx,
    /// Off-diagonal magnitudes of `s_y`; element `(μ+1, μ)` is `+i·offdiag[μ]`
    /// and element `(μ, μ+1)` is `-i·offdiag[μ]`.
    Sy,
    Sz,
    H,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalOperator {
    pub kind: OperatorKind,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl TridiagonalOperator {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Operators {
    pub sx: TridiagonalOperator,
    pub sy: TridiagonalOperator,
    pub sz: TridiagonalOperator,
    pub h: TridiagonalOperator,
}

/// Ladder coefficient
/// `β_μ = N^{2-m-n} (μm)!/(μm-m)! · (N/m-μn+n)!/(N/m-μn)!`.
///
/// `β_0 = β_{N/mn+1} = 0` close the chain. Each of the `m+n` integer factors
/// is divided by `N^{(m+n-2)/(m+n)}` as it is multiplied in.
pub fn beta(spec: &ModelSpec, mu: u64) -> Result<f64> {
    if mu > spec.max_index() + 1 {
        return Err(Error::domain(
            "quantum::beta",
            format!("mu = {mu} outside 0..={}", spec.max_index() + 1),
        ));
    }
    let (m, n) = (i64::from(spec.m()), i64::from(spec.n()));
    let big_n = spec.particles() as i64;
    let mu = mu as i64;
    let per_factor = (spec.particles() as f64).powf((m + n - 2) as f64 / (m + n) as f64);
    let top_a = mu * m;
    let top_b = big_n / m - mu * n + n;
    let mut acc = 1.0;
    for k in 0..m {
        acc *= (top_a - k) as f64 / per_factor;
    }
    for k in 0..n {
        acc *= (top_b - k) as f64 / per_factor;
    }
    // factors never go negative inside the chain; a zero factor closes it
    Ok(acc.max(0.0))
}

/// `√β_{μ+1}` for `μ = 0..dim-1`.
pub fn ladder(spec: &ModelSpec) -> Vec<f64> {
    (1..spec.dim() as u64)
        .map(|mu| beta(spec, mu).expect("index within chain").sqrt())
        .collect()
}

pub fn build_operators(spec: &ModelSpec) -> Operators {
    let dim = spec.dim();
    let h = spec.half_index();
    let lad = ladder(spec);
    let half: Vec<f64> = lad.iter().map(|x| 0.5 * x).collect();
    let sz_diag: Vec<f64> = (0..dim).map(|mu| mu as f64 - h).collect();
    Operators {
        sx: TridiagonalOperator {
            kind: OperatorKind::Sx,
            diag: vec![0.0; dim],
            offdiag: half.clone(),
        },
        sy: TridiagonalOperator {
            kind: OperatorKind::Sy,
            diag: vec![0.0; dim],
            offdiag: half.clone(),
        },
        sz: TridiagonalOperator {
            kind: OperatorKind::Sz,
            diag: sz_diag.clone(),
            offdiag: vec![0.0; dim.saturating_sub(1)],
        },
        h: TridiagonalOperator {
            kind: OperatorKind::H,
            diag: sz_diag.iter().map(|z| spec.eps() * z).collect(),
            offdiag: half.iter().map(|x| spec.v() * x).collect(),
        },
    }
}

/// Real square matrix stored by diagonals `-w..=w`.
#[derive(Debug, Clone)]
struct Band {
    dim: usize,
    w: usize,
    /// `data[d][i]` holds entry `(i, i + d - w)`.
    data: Vec<Vec<f64>>,
}

impl Band {
    fn zeros(dim: usize, w: usize) -> Self {
        Band {
            dim,
            w,
            data: vec![vec![0.0; dim]; 2 * w + 1],
        }
    }

    fn from_tridiag(diag: &[f64], lower: &[f64], upper: &[f64]) -> Self {
        let mut b = Band::zeros(diag.len(), 1);
        for i in 0..diag.len() {
            b.set(i, i, diag[i]);
        }
        for i in 0..lower.len() {
            b.set(i + 1, i, lower[i]);
            b.set(i, i + 1, upper[i]);
        }
        b
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        let d = j as isize - i as isize + self.w as isize;
        if d < 0 || d > 2 * self.w as isize {
            0.0
        } else {
            self.data[d as usize][i]
        }
    }

    fn set(&mut self, i: usize, j: usize, x: f64) {
        let d = (j as isize - i as isize + self.w as isize) as usize;
        self.data[d][i] = x;
    }

    fn mul(&self, other: &Band) -> Band {
        let w = self.w + other.w;
        let mut out = Band::zeros(self.dim, w);
        for i in 0..self.dim {
            let k_lo = i.saturating_sub(self.w);
            let k_hi = (i + self.w).min(self.dim - 1);
            for k in k_lo..=k_hi {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let j_lo = k.saturating_sub(other.w);
                let j_hi = (k + other.w).min(self.dim - 1);
                for j in j_lo..=j_hi {
                    let idx = (j as isize - i as isize + w as isize) as usize;
                    out.data[idx][i] += a * other.get(k, j);
                }
            }
        }
        out
    }

    fn combine(&self, other: &Band, alpha: f64) -> Band {
        let w = self.w.max(other.w);
        let mut out = Band::zeros(self.dim, w);
        for i in 0..self.dim {
            for j in i.saturating_sub(w)..=(i + w).min(self.dim - 1) {
                out.set(i, j, self.get(i, j) + alpha * other.get(i, j));
            }
        }
        out
    }

    fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .flat_map(|d| d.iter())
            .fold(0.0_f64, |a, x| a.max(x.abs()))
    }
}

/// Residuals of the algebra relations on the matrix representation, each
/// measured relative to the largest entry of the terms involved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityResiduals {
    /// `[s_z, s_x] = i s_y`
    pub sz_sx: f64,
    /// `[s_y, s_z] = i s_x`
    pub sy_sz: f64,
    /// `[s_x, s_y] = i F(s_z)`
    pub sx_sy: f64,
    /// Scalar value `c` of `s_x² + s_y² + G(s_z)`.
    pub casimir_value: f64,
    /// Largest deviation of the Casimir matrix from `c·I`.
    pub casimir_deviation: f64,
}

impl IdentityResiduals {
    pub fn max_residual(&self) -> f64 {
        self.sz_sx
            .max(self.sy_sz)
            .max(self.sx_sy)
            .max(self.casimir_deviation)
    }
}

/// Checks the commutation relations and Casimir scalarity on the Fock matrices.
pub fn identity_residuals(spec: &ModelSpec) -> IdentityResiduals {
    let ops = build_operators(spec);
    let dim = spec.dim();
    let zeros = vec![0.0; dim];
    let lad = &ops.sx.offdiag;
    let neg: Vec<f64> = lad.iter().map(|x| -x).collect();
    let sx = Band::from_tridiag(&zeros, lad, lad);
    // K = (s_+ - s_-)/2 is real antisymmetric with s_y = -iK
    let k = Band::from_tridiag(&zeros, lad, &neg);
    let sz = Band::from_tridiag(&ops.sz.diag, &zeros[1..], &zeros[1..]);
    let f_diag: Vec<f64> = ops.sz.diag.iter().map(|&z| algebra::eval_f(spec, z)).collect();
    let g_diag: Vec<f64> = ops.sz.diag.iter().map(|&z| algebra::eval_g(spec, z)).collect();
    let fm = Band::from_tridiag(&f_diag, &zeros[1..], &zeros[1..]);
    let gm = Band::from_tridiag(&g_diag, &zeros[1..], &zeros[1..]);
    let comm = |a: &Band, b: &Band| a.mul(b).combine(&b.mul(a), -1.0);
    let rel = |r: &Band, scale: f64| r.max_abs() / scale.max(f64::MIN_POSITIVE);

    // [s_z, s_x] = i s_y = K
    let c1 = comm(&sz, &sx);
    let sz_sx = rel(&c1.combine(&k, -1.0), c1.max_abs().max(k.max_abs()));
    // [s_y, s_z] = i s_x  <=>  [K, s_z] = -s_x
    let c2 = comm(&k, &sz);
    let sy_sz = rel(&c2.combine(&sx, 1.0), c2.max_abs().max(sx.max_abs()));
    // [s_x, s_y] = i F  <=>  [s_x, K] = -F
    let c3 = comm(&sx, &k);
    let sx_sy = rel(&c3.combine(&fm, 1.0), c3.max_abs().max(fm.max_abs()));
    // s_x² + s_y² + G = s_x² - K² + G
    let cas = sx.mul(&sx).combine(&k.mul(&k), -1.0).combine(&gm, 1.0);
    let c = (0..dim).map(|i| cas.get(i, i)).sum::<f64>() / dim as f64;
    let mut dev = 0.0_f64;
    for i in 0..dim {
        for j in i.saturating_sub(cas.w)..=(i + cas.w).min(dim - 1) {
            let target = if i == j { c } else { 0.0 };
            dev = dev.max((cas.get(i, j) - target).abs());
        }
    }
    let scale = sx.mul(&sx).max_abs().max(gm.max_abs()).max(1.0);
    IdentityResiduals {
        sz_sx,
        sy_sz,
        sx_sy,
        casimir_value: c,
        casimir_deviation: dev / scale,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub spec: ModelSpec,
    /// `η E_ν`, ascending.
    pub scaled_eigenvalues: Vec<f64>,
    /// `E_ν`, ascending.
    pub raw_eigenvalues: Vec<f64>,
}

impl SpectrumResult {
    /// Smallest gap between consecutive raw eigenvalues.
    pub fn min_gap(&self) -> f64 {
        self.raw_eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }
}

/// All eigenvalues of `H = ε s_z + v s_x`.
pub fn eigen_spectrum(spec: &ModelSpec) -> Result<SpectrumResult> {
    let ops = build_operators(spec);
    let raw = tridiagonal_eigenvalues(&ops.h.diag, &ops.h.offdiag)?;
    let eta = spec.eta();
    Ok(SpectrumResult {
        spec: *spec,
        scaled_eigenvalues: raw.iter().map(|e| eta * e).collect(),
        raw_eigenvalues: raw,
    })
}

/// Largest `‖Hx - λx‖ / ‖H‖` over eigenpairs recomputed by inverse iteration,
/// using at most `samples` evenly spread eigenvalues.
pub fn spot_check_residual(result: &SpectrumResult, samples: usize) -> f64 {
    let ops = build_operators(&result.spec);
    let norm = ops
        .h
        .diag
        .iter()
        .map(|d| d.abs())
        .chain(ops.h.offdiag.iter().map(|o| 2.0 * o.abs()))
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let n = result.raw_eigenvalues.len();
    let step = (n / samples.max(1)).max(1);
    (0..n)
        .step_by(step)
        .map(|i| {
            let lambda = result.raw_eigenvalues[i];
            let x = inverse_iteration(&ops.h.diag, &ops.h.offdiag, lambda);
            residual_norm(&ops.h.diag, &ops.h.offdiag, lambda, &x) / norm
        })
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DosHistogram {
    pub bin_edges: Vec<f64>,
    /// `counts / (total · width)`
    pub density: Vec<f64>,
}

impl DosHistogram {
    pub fn bin_width(&self) -> f64 {
        self.bin_edges[1] - self.bin_edges[0]
    }

    pub fn centers(&self) -> Vec<f64> {
        self.bin_edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn integral(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.bin_width()
    }
}

/// Probability-density histogram of `values` over `range` (default: their
/// min/max). Values outside the range are dropped from the counts but not
/// from the normalization.
pub fn histogram_density(
    values: &[f64],
    bins: usize,
    range: Option<(f64, f64)>,
) -> Result<DosHistogram> {
    const OP: &str = "quantum::dos_histogram";
    if values.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    if bins < 2 {
        return Err(Error::invalid(OP, format!("bins must be at least 2 (got {bins})")));
    }
    let (lo, hi) = range.unwrap_or_else(|| {
        values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| {
            (a.min(x), b.max(x))
        })
    });
    if !(hi > lo) {
        return Err(Error::invalid(OP, format!("degenerate range [{lo}, {hi}]")));
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in values {
        if x < lo || x > hi {
            continue;
        }
        let k = (((x - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let total = values.len() as f64;
    Ok(DosHistogram {
        bin_edges: (0..=bins).map(|k| lo + k as f64 * width).collect(),
        density: counts.iter().map(|&c| c as f64 / (total * width)).collect(),
    })
}

pub fn dos_histogram(result: &SpectrumResult, bins: usize) -> Result<DosHistogram> {
    histogram_density(&result.scaled_eigenvalues, bins, None)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub eps: f64,
    pub scaled_eigenvalues: Vec<f64>,
    pub fixed_points: Vec<FixedPoint>,
}

/// Spectrum and classical fixed points at every `ε` of `eps_grid`.
///
/// Grid points run on a pool of `jobs` threads (`None`: rayon default).
pub fn sweep_epsilon(
    template: &ModelSpec,
    eps_grid: &[f64],
    jobs: Option<usize>,
) -> Result<Vec<SweepRow>> {
    if eps_grid.is_empty() {
        return Err(Error::invalid("quantum::sweep_epsilon", "empty epsilon grid"));
    }
    let work = || -> Result<Vec<SweepRow>> {
        eps_grid
            .par_iter()
            .map(|&eps| {
                let spec = template.with_eps(eps);
                let spectrum = eigen_spectrum(&spec)?;
                Ok(SweepRow {
                    eps,
                    scaled_eigenvalues: spectrum.scaled_eigenvalues,
                    fixed_points: meanfield::find_fixed_points(&spec),
                })
            })
            .collect()
    };
    match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::invalid("quantum::sweep_epsilon", e.to_string()))?
            .install(work),
        None => work(),
    }
}
