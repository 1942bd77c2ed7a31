//! Gauss–Legendre rules and adaptive interval bisection.

use crate::error::{Error, Result};
use std::sync::OnceLock;

/// Nodes and weights on `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// `n`-point Gauss–Legendre rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let pn = if n == 1 { x } else { p1 };
                let pm = if n == 1 { 1.0 } else { p0 };
                dp = nf * (x * pn - pm) / (x * x - 1.0);
                let dx = pn / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussRule { nodes, weights }
    }

    /// Apply on `[a, b]`.
    pub fn integrate(&self, f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c + h * x);
        }
        s * h
    }

    /// Mapped nodes and weights on `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (c + h * x, w * h))
    }
}

/// Shared 20-point rule.
pub fn gl20() -> &'static GaussRule {
    static RULE: OnceLock<GaussRule> = OnceLock::new();
    RULE.get_or_init(|| GaussRule::new(20))
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

/// Adaptive integration on `[a, b]`: an interval is accepted when the
/// 20-point rule on it agrees with the sum over its two halves.
///
/// The tolerance is `max(atol, rtol·∫|f|)`, distributed by interval length.
pub fn adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, atol: f64, rtol: f64) -> Result<Integral> {
    if b <= a {
        return Ok(Integral { value: 0.0, error: 0.0 });
    }
    let rule = gl20();
    let abs_scale = rule.integrate(&|x| f(x).abs(), a, b);
    let tol = atol.max(rtol * abs_scale);
    let total = b - a;
    let mut stack = vec![(a, b, rule.integrate(&f, a, b), 0_u32)];
    let (mut sum, mut comp, mut err) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut unresolved = 0usize;
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.integrate(&f, lo, mid);
        let right = rule.integrate(&f, mid, hi);
        let halves = left + right;
        let diff = (halves - whole).abs();
        // below the rounding floor further bisection cannot help
        let local_tol = (tol * (hi - lo) / total).max(64.0 * f64::EPSILON * (left.abs() + right.abs()));
        if diff <= local_tol || depth >= 40 || mid <= lo || mid >= hi {
            if diff > local_tol {
                unresolved += 1;
            }
            let y = halves - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            err += diff;
        } else {
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }
    if !sum.is_finite() {
        return Err(Error::NonConvergence {
            what: "adaptive quadrature",
            detail: format!("non-finite integral on [{a}, {b}]"),
        });
    }
    if unresolved > 0 && err > 10.0 * tol {
        return Err(Error::NonConvergence {
            what: "adaptive quadrature",
            detail: format!("error estimate {err:e} on [{a}, {b}] above tolerance {tol:e}"),
        });
    }
    Ok(Integral { value: sum, error: err })
}

/// Adaptive integration over consecutive sub-intervals given by `edges`.
pub fn adaptive_cells(
    f: impl Fn(f64) -> f64,
    edges: &[f64],
    atol: f64,
    rtol: f64,
) -> Result<Integral> {
    let n = edges.len().saturating_sub(1).max(1);
    let mut value = 0.0;
    let mut error = 0.0;
    for w in edges.windows(2) {
        let part = adaptive(&f, w[0], w[1], atol / n as f64, rtol)?;
        value += part.value;
        error += part.error;
    }
    Ok(Integral { value, error })
}
