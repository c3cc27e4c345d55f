//! Symmetric tridiagonal eigenproblem.
//!
//! Eigenvalues come from the implicit-shift QL iteration (the `tql1` variant
//! without eigenvector accumulation), which needs only the diagonal and the
//! off-diagonal and costs O(n^2) overall. Eigenvectors are only needed for
//! residual spot checks and are obtained by inverse iteration.

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// All eigenvalues of the symmetric tridiagonal matrix with diagonal `diag`
/// and off-diagonal `off` (`off[i]` couples rows `i` and `i+1`), ascending.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if off.len() + 1 != n {
        return Err(Error::invalid(
            "numerics::tridiagonal_eigenvalues",
            format!("off-diagonal length {} for dimension {n}", off.len()),
        ));
    }
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS {
                return Err(Error::NoConvergence {
                    op: "numerics::tridiagonal_eigenvalues",
                    detail: format!("QL iteration stalled at index {l}"),
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0_f64, 1.0_f64, 0.0_f64);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // underflow: split the matrix and restart this block
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.total_cmp(b));
    Ok(d)
}

/// Normalized eigenvector for an (approximate) eigenvalue `lambda` by inverse
/// iteration with a tridiagonal LU factorization using partial pivoting.
pub fn inverse_iteration(diag: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    let n = diag.len();
    let scale = diag
        .iter()
        .chain(off.iter())
        .fold(0.0_f64, |acc, x| acc.max(x.abs()))
        .max(1.0);
    let shift = lambda + scale * 1e-13;
    let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.01 * (i % 7) as f64).collect();
    for _ in 0..3 {
        x = solve_shifted(diag, off, shift, &x);
        let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            break;
        }
        x.iter_mut().for_each(|v| *v /= norm);
    }
    x
}

fn solve_shifted(diag: &[f64], off: &[f64], shift: f64, rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    if n == 1 {
        let piv = diag[0] - shift;
        return vec![rhs[0] / if piv == 0.0 { f64::EPSILON } else { piv }];
    }
    // Row i holds entries at columns i, i+1, i+2 after elimination.
    let mut a0: Vec<f64> = diag.iter().map(|d| d - shift).collect();
    let mut a1: Vec<f64> = off.to_vec();
    a1.push(0.0);
    let mut a2 = vec![0.0; n];
    let mut sub: Vec<f64> = off.to_vec();
    let mut b = rhs.to_vec();
    for i in 0..n - 1 {
        // rows i and i+1 compete for the pivot in column i
        if sub[i].abs() > a0[i].abs() {
            let (r0, r1, r2) = (a0[i], a1[i], a2[i]);
            a0[i] = sub[i];
            a1[i] = a0[i + 1];
            a2[i] = if i + 1 < n - 1 { a1[i + 1] } else { 0.0 };
            sub[i] = r0;
            a0[i + 1] = r1;
            if i + 1 < n - 1 {
                a1[i + 1] = r2;
            }
            b.swap(i, i + 1);
        }
        let piv = if a0[i] == 0.0 { f64::EPSILON } else { a0[i] };
        let factor = sub[i] / piv;
        a0[i + 1] -= factor * a1[i];
        if i + 1 < n - 1 {
            a1[i + 1] -= factor * a2[i];
        }
        b[i + 1] -= factor * b[i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        if i + 1 < n {
            acc -= a1[i] * x[i + 1];
        }
        if i + 2 < n {
            acc -= a2[i] * x[i + 2];
        }
        let piv = if a0[i] == 0.0 { f64::EPSILON } else { a0[i] };
        x[i] = acc / piv;
    }
    x
}

/// `||T x - lambda x||_2` for the tridiagonal `T`.
pub fn residual_norm(diag: &[f64], off: &[f64], lambda: f64, x: &[f64]) -> f64 {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut y = (diag[i] - lambda) * x[i];
            if i > 0 {
                y += off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                y += off[i] * x[i + 1];
            }
            y * y
        })
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_chain_spectrum() {
        // diag 0, off 1: eigenvalues 2 cos(k pi / (n+1))
        let n = 50;
        let eig = tridiagonal_eigenvalues(&vec![0.0; n], &vec![1.0; n - 1]).unwrap();
        let mut exact: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        exact.sort_by(|a, b| a.total_cmp(b));
        for (a, b) in eig.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn handles_split_blocks_and_trivial_sizes() {
        assert_eq!(tridiagonal_eigenvalues(&[3.0], &[]).unwrap(), vec![3.0]);
        let eig = tridiagonal_eigenvalues(&[1.0, 2.0, 5.0], &[0.0, 0.0]).unwrap();
        assert_eq!(eig, vec![1.0, 2.0, 5.0]);
        assert!(tridiagonal_eigenvalues(&[1.0, 2.0], &[]).is_err());
    }

    #[test]
    fn inverse_iteration_residual() {
        let diag: Vec<f64> = (0..30).map(|i| (i as f64 * 0.37).sin()).collect();
        let off: Vec<f64> = (0..29).map(|i| 0.5 + 0.1 * (i as f64).cos()).collect();
        let eig = tridiagonal_eigenvalues(&diag, &off).unwrap();
        for &lambda in &eig {
            let x = inverse_iteration(&diag, &off, lambda);
            assert!(residual_norm(&diag, &off, lambda, &x) < 1e-12);
        }
    }
}
