//! Structure polynomials of the polynomially deformed su(2) algebra.
//!
//! The operators `s_x`, `s_y`, `s_z` close under `[s_x, s_y] = i F(s_z)`
//! with Casimir `s_x² + s_y² + G(s_z)`. On the fixed-`N` subspace every
//! function of `s_z` is diagonal, so `P`, `F` and `G` are represented by
//! their scalar values at `s_z` eigenvalues `z = μ - N/(2mn)`. The arguments
//! here are always the unscaled `z`; η-scaling lives in the mean-field layer.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::meanfield;
use crate::model::ModelSpec;

/// Largest polynomial order of `F` accepted by [`phi_from_alpha`].
pub const MAX_PHI_ORDER: usize = 8;

/// `(z, value)` pair of a structure polynomial evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolySample {
    pub z: f64,
    pub value: f64,
}

/// Auxiliary polynomial
/// `P(z) = Π_{μ=1}^m (h + z + μ/m) · Π_{ν=1}^n (h - z - 1 + ν/n)`, `h = N/(2mn)`,
/// evaluated as a running product of its linear factors.
pub fn eval_p(spec: &ModelSpec, z: f64) -> f64 {
    let h = spec.half_index();
    let m = f64::from(spec.m());
    let n = f64::from(spec.n());
    let a: f64 = (1..=spec.m()).map(|mu| h + z + f64::from(mu) / m).product();
    let b: f64 = (1..=spec.n())
        .map(|nu| h - z - 1.0 + f64::from(nu) / n)
        .product();
    a * b
}

/// `n^n m^m / N^{m+n-2}`
pub fn structure_prefactor(spec: &ModelSpec) -> f64 {
    let m = spec.m() as i32;
    let n = spec.n() as i32;
    let big_n = spec.particles() as f64;
    f64::from(n).powi(n) * f64::from(m).powi(m) / big_n.powi(m + n - 2)
}

/// Commutator polynomial `F(z) = -(c/2) (P(z) - P(z-1))`.
pub fn eval_f(spec: &ModelSpec, z: f64) -> f64 {
    -0.5 * structure_prefactor(spec) * (eval_p(spec, z) - eval_p(spec, z - 1.0))
}

/// Casimir polynomial `G(z) = -(c/2) (P(z) + P(z-1))`.
pub fn eval_g(spec: &ModelSpec, z: f64) -> f64 {
    -0.5 * structure_prefactor(spec) * (eval_p(spec, z) + eval_p(spec, z - 1.0))
}

pub fn sample_f(spec: &ModelSpec, z: f64) -> PolySample {
    PolySample {
        z,
        value: eval_f(spec, z),
    }
}

pub fn sample_g(spec: &ModelSpec, z: f64) -> PolySample {
    PolySample {
        z,
        value: eval_g(spec, z),
    }
}

/// Coefficients (ascending) of `φ(J0)` with `φ(0) = 0` and
/// `F(J0) = ½(φ(J0) - φ(J0 - 1))` for `F(J0) = Σ α_j J0^j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiPolynomial {
    pub coeffs: Vec<f64>,
}

impl PhiPolynomial {
    pub fn eval(&self, z: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * z + c)
    }
}

type Q = Ratio<i64>;

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i as i64 + 1))
}

/// Bernoulli numbers `B_0..=B_upto` (convention `B_1 = -1/2`), exact.
pub fn bernoulli_numbers(upto: usize) -> Vec<Ratio<i64>> {
    let mut b: Vec<Q> = vec![Q::from_integer(1)];
    for n in 1..=upto {
        let s: Q = (0..n)
            .map(|k| b[k] * Q::from_integer(binomial(n + 1, k)))
            .fold(Q::from_integer(0), |acc, x| acc + x);
        b.push(-s / Q::from_integer(n as i64 + 1));
    }
    b
}

/// `φ` from the Bernoulli-polynomial representation
/// `φ(J0) = 2 Σ_j (-1)^{j+1}/(j+1) · α_j (B_{j+1}(-J0) - B_{j+1})`.
///
/// The rational coefficient table is built exactly and converted to floating
/// point once.
pub fn phi_from_alpha(alpha: &[f64]) -> Result<PhiPolynomial> {
    if alpha.is_empty() {
        return Err(Error::invalid("algebra::phi_from_alpha", "alpha is empty"));
    }
    let k = alpha.len() - 1;
    if k > MAX_PHI_ORDER {
        return Err(Error::invalid(
            "algebra::phi_from_alpha",
            format!("order {k} exceeds the supported maximum {MAX_PHI_ORDER}"),
        ));
    }
    let bern = bernoulli_numbers(k + 1);
    let mut coeffs = vec![0.0; k + 2];
    for (j, &a) in alpha.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let order = j + 1;
        // B_{j+1}(-z) - B_{j+1} = Σ_{p≥1} C(j+1, p) B_{j+1-p} (-1)^p z^p
        for (p, coeff) in coeffs.iter_mut().enumerate().take(order + 1).skip(1) {
            let sign = if (j + 1 + p) % 2 == 0 { 1 } else { -1 };
            let r = Q::from_integer(2 * sign * binomial(order, p)) * bern[order - p]
                / Q::from_integer(order as i64);
            *coeff += a * (*r.numer() as f64 / *r.denom() as f64);
        }
    }
    Ok(PhiPolynomial { coeffs })
}

/// Largest residual of `F(z) = ½(φ(z) - φ(z-1))` over `samples`, measured
/// relative to `max(1, |F(z)|)`.
pub fn verify_f_phi(alpha: &[f64], samples: &[f64]) -> Result<f64> {
    let phi = phi_from_alpha(alpha)?;
    let f = |z: f64| alpha.iter().rev().fold(0.0, |acc, &c| acc * z + c);
    Ok(samples
        .iter()
        .map(|&z| {
            let fz = f(z);
            (fz - 0.5 * phi_difference(&phi, z)).abs() / fz.abs().max(1.0)
        })
        .fold(0.0, f64::max))
}

/// `φ(z) - φ(z-1)` summed termwise with `z^p - (z-1)^p = Σ_i z^i (z-1)^{p-1-i}`.
fn phi_difference(phi: &PhiPolynomial, z: f64) -> f64 {
    let w = z - 1.0;
    phi.coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(p, &c)| {
            let diff: f64 = (0..p)
                .map(|i| z.powi(i as i32) * w.powi((p - 1 - i) as i32))
                .sum();
            c * diff
        })
        .sum()
}

/// `[a^m, a†^m]` at number-operator eigenvalue `occupancy`:
/// `Π_{μ=1}^m (j + μ) - Π_{μ=1}^m (j + 1 - μ)`.
pub fn oscillator_commutator_poly(m: u32, occupancy: u64) -> i128 {
    let j = i128::from(occupancy);
    let up: i128 = (1..=i128::from(m)).map(|mu| j + mu).product();
    let down: i128 = (1..=i128::from(m)).map(|mu| j + 1 - mu).product();
    up - down
}

/// Largest deviation `|η F(z_μ) - f(η z_μ)|` over the spectrum of `s_z`.
pub fn classical_limit_error(spec: &ModelSpec) -> f64 {
    let eta = spec.eta();
    let h = spec.half_index();
    (0..spec.dim())
        .map(|mu| {
            let z = mu as f64 - h;
            (eta * eval_f(spec, z) - meanfield::f_classical(spec, eta * z)).abs()
        })
        .fold(0.0, f64::max)
}
