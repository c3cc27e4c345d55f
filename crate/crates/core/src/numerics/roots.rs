//! Bracketed scalar root finding.

/// Root of `f` in `[a, b]` given a sign change, by bisection with
/// opportunistic secant steps. Returns the midpoint of the final bracket.
pub fn bracketed_root<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    debug_assert!(fa.signum() != fb.signum(), "no sign change in bracket");
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= tol || mid == a || mid == b {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Bisection down to `tol`, then safeguarded Newton polishing with `df`.
pub fn polish_root<F, D>(f: F, df: D, a: f64, b: f64, tol: f64) -> f64
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let mut x = bracketed_root(&f, lo, hi, tol.max(1e-15));
    for _ in 0..4 {
        let d = df(x);
        if d == 0.0 || !d.is_finite() {
            break;
        }
        let next = x - f(x) / d;
        if !(lo..=hi).contains(&next) || (next - x).abs() > 10.0 * tol.max(1e-15) {
            break;
        }
        if (next - x).abs() < 1e-17 {
            x = next;
            break;
        }
        x = next;
    }
    x
}

/// Sign-change brackets of `f` sampled at `grid` (assumed sorted).
/// Exact zeros on the grid are reported as degenerate brackets.
pub fn sign_change_brackets<F: Fn(f64) -> f64>(f: F, grid: &[f64]) -> Vec<(f64, f64)> {
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut out = Vec::new();
    for i in 0..grid.len().saturating_sub(1) {
        let (fa, fb) = (values[i], values[i + 1]);
        if fa == 0.0 {
            out.push((grid[i], grid[i]));
        } else if fb != 0.0 && fa.signum() != fb.signum() {
            out.push((grid[i], grid[i + 1]));
        }
    }
    if let Some(&last) = values.last() {
        if last == 0.0 {
            let x = grid[grid.len() - 1];
            out.push((x, x));
        }
    }
    out
}

/// Open grid on `(lo, hi)` clustered towards both ends (Chebyshev spacing),
/// excluding the endpoints themselves.
pub fn clustered_open_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    (0..count)
        .map(|k| {
            let t = std::f64::consts::PI * (k as f64 + 0.5) / count as f64;
            mid - half * t.cos()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cubic_root() {
        let f = |x: f64| x * x * x - 2.0;
        let r = polish_root(f, |x| 3.0 * x * x, 0.0, 2.0, 1e-14);
        assert!((r - 2f64.cbrt()).abs() < 1e-14);
    }

    #[test]
    fn brackets_on_grid() {
        let grid = clustered_open_grid(-0.5, 0.5, 64);
        assert!(grid[0] > -0.5 && grid[63] < 0.5);
        let br = sign_change_brackets(|x| (x - 0.1) * (x + 0.3), &grid);
        assert_eq!(br.len(), 2);
    }
}
