//! Dormand–Prince 5(4) with adaptive steps, for small fixed-size systems.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Tolerances {
    pub fn new(rtol: f64, atol: f64) -> Self {
        Tolerances { rtol, atol, max_steps: 2_000_000 }
    }
}

/// How an integration ended.
#[derive(Debug, Clone, Copy)]
pub enum Outcome<const N: usize> {
    /// Reached the end point.
    Done([f64; N]),
    /// The stop predicate fired after an accepted step at `t`.
    Stopped(f64, [f64; N]),
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrate `y' = f(t, y)` from `t0` to `t1` (either direction).
pub fn integrate<const N: usize>(
    mut f: impl FnMut(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    t1: f64,
    y0: [f64; N],
    tol: Tolerances,
    mut stop: impl FnMut(f64, &[f64; N]) -> bool,
) -> Result<Outcome<N>> {
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(Outcome::Done(y0));
    }
    let dir = span.signum();
    let mut t = t0;
    let mut y = y0;
    let mut k = [[0.0; N]; 7];
    k[0] = f(t, &y);
    let mut h = initial_step(&k[0], &y, span.abs(), tol);
    let mut steps = 0usize;
    loop {
        let remaining = (t1 - t) * dir;
        if remaining <= 1e-14 * span.abs() {
            return Ok(Outcome::Done(y));
        }
        let last = h >= remaining;
        if last {
            h = remaining;
        }
        steps += 1;
        if steps > tol.max_steps {
            return Err(Error::NonConvergence {
                what: "Runge-Kutta integration",
                detail: format!("step limit reached at t = {t}"),
            });
        }
        for s in 1..7 {
            let mut ys = y;
            for (i, ysi) in ys.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s][j] * kj[i];
                }
                *ysi += dir * h * acc;
            }
            k[s] = f(t + dir * C[s] * h, &ys);
        }
        let mut ynew = y;
        let mut err = 0.0;
        for i in 0..N {
            let mut acc = 0.0;
            let mut eacc = 0.0;
            for s in 0..6 {
                acc += A[6][s] * k[s][i];
            }
            for s in 0..7 {
                eacc += E[s] * k[s][i];
            }
            ynew[i] = y[i] + dir * h * acc;
            let sc = tol.atol + tol.rtol * y[i].abs().max(ynew[i].abs());
            let e = h * eacc / sc;
            err += e * e;
        }
        let err = (err / N as f64).sqrt();
        if !err.is_finite() || ynew.iter().any(|v| !v.is_finite()) {
            h *= 0.25;
            if h < 1e-300 {
                return Err(Error::NonConvergence {
                    what: "Runge-Kutta integration",
                    detail: format!("non-finite state at t = {t}"),
                });
            }
            continue;
        }
        if err <= 1.0 {
            t = if last { t1 } else { t + dir * h };
            y = ynew;
            k[0] = k[6];
            if stop(t, &y) {
                return Ok(Outcome::Stopped(t, y));
            }
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h *= fac;
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
    }
}

fn initial_step<const N: usize>(f0: &[f64; N], y0: &[f64; N], span: f64, tol: Tolerances) -> f64 {
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..N {
        let sc = tol.atol + tol.rtol * y0[i].abs();
        d0 += (y0[i] / sc).powi(2);
        d1 += (f0[i] / sc).powi(2);
    }
    let (d0, d1) = ((d0 / N as f64).sqrt(), (d1 / N as f64).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(span).max(1e-12 * span)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_and_oscillator() {
        let tol = Tolerances::new(1e-12, 1e-14);
        let out = integrate(|_, y: &[f64; 1]| [-y[0]], 0.0, 3.0, [1.0], tol, |_, _| false).unwrap();
        let Outcome::Done(y) = out else { panic!() };
        assert!((y[0] - (-3.0f64).exp()).abs() < 1e-12);
        let out = integrate(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, 10.0, [0.0, 1.0], tol, |_, _| false)
            .unwrap();
        let Outcome::Done(y) = out else { panic!() };
        assert!((y[0] - 10f64.sin()).abs() < 1e-10);
        // backwards
        let out = integrate(|_, y: &[f64; 1]| [y[0]], 2.0, 0.0, [1.0], tol, |_, _| false).unwrap();
        let Outcome::Done(y) = out else { panic!() };
        assert!((y[0] - (-2.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn stop_predicate() {
        let tol = Tolerances::new(1e-10, 1e-12);
        let out = integrate(|_, _y: &[f64; 1]| [1.0], 0.0, 5.0, [0.0], tol, |_, y| y[0] > 2.0).unwrap();
        match out {
            Outcome::Stopped(t, y) => assert!(t > 2.0 && (y[0] - t).abs() < 1e-12),
            Outcome::Done(_) => panic!("should stop"),
        }
    }
}
