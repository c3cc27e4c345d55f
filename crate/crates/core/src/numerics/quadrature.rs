//! Fixed-order quadrature rules.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(order, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// `∫_a^b f(x) dx`
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// `∫_a^b f(x) dx` for integrands with square-root behaviour at both
    /// endpoints, using `x = mid + half * sin(theta)`.
    pub fn integrate_sqrt_endpoints<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.integrate(-0.5 * PI, 0.5 * PI, |theta| {
            f(mid + half * theta.sin()) * half * theta.cos()
        })
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// `(P_n(x), P_n'(x))`
fn legendre(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if order == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=order {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = order as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Chebyshev (first kind) rule: `∫_{-1}^{1} f(x)/sqrt(1-x^2) dx ≈ (π/n) Σ f(x_k)`.
/// Integrates `g(θ)` over `[0, π]` when written as `f(cos θ)`.
pub fn gauss_chebyshev<F: FnMut(f64) -> f64>(order: usize, mut f: F) -> f64 {
    let n = order as f64;
    (1..=order)
        .map(|k| f(((2 * k - 1) as f64 * PI / (2.0 * n)).cos()))
        .sum::<f64>()
        * PI
        / n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_exact_for_polynomials() {
        let gl = GaussLegendre::new(8);
        // exact up to degree 15
        let v = gl.integrate(-1.0, 2.0, |x| x.powi(15) - 3.0 * x.powi(4));
        let exact = (2f64.powi(16) - 1.0) / 16.0 - 3.0 * (32.0 + 1.0) / 5.0;
        assert!((v - exact).abs() < 1e-10 * exact.abs());
        let w: f64 = gl.points().map(|(_, w)| w).sum();
        assert!((w - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sqrt_endpoint_rule() {
        // area of a half disk of radius 1
        let gl = GaussLegendre::new(24);
        let v = gl.integrate_sqrt_endpoints(-1.0, 1.0, |x| (1.0 - x * x).max(0.0).sqrt());
        assert!((v - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn chebyshev_weight() {
        // ∫ x^2 / sqrt(1-x^2) = π/2
        let v = gauss_chebyshev(5, |x| x * x);
        assert!((v - PI / 2.0).abs() < 1e-14);
    }
}
