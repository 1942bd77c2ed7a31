//! Generalized Legendre polynomials `P_{ℓ,d}` (Gegenbauer, normalized to
//! `P_{ℓ,d}(1) = 1`), zonal functions and spherical-harmonic dimensions.

use super::gamma::gamma;
use std::f64::consts::PI;

/// `|S^{d−1}| = 2π^{d/2}/Γ(d/2)`.
pub fn sphere_area(d: usize) -> f64 {
    assert!(d >= 1);
    match d {
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        4 => 2.0 * PI * PI,
        _ => 2.0 * PI.powf(d as f64 / 2.0) / gamma(d as f64 / 2.0),
    }
}

/// Volume of the unit ball, `|S^{d−1}|/d`.
pub fn ball_volume(d: usize) -> f64 {
    sphere_area(d) / d as f64
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `N_{ℓ,d} = C(ℓ+d−1, ℓ) − C(ℓ+d−3, ℓ−2)`, the dimension of degree-ℓ spherical harmonics.
pub fn dim_spherical(ell: usize, d: usize) -> u128 {
    assert!(d >= 2);
    let (l, d) = (ell as u128, d as u128);
    let a = binomial(l + d - 1, l);
    let b = if l >= 2 { binomial(l + d - 3, l - 2) } else { 0 };
    a - b
}

/// `N_{ℓ,d}` as a float; exact while it fits in 53 bits.
pub fn dim_spherical_f64(ell: usize, d: usize) -> f64 {
    if d == 2 {
        return if ell == 0 { 1.0 } else { 2.0 };
    }
    let (l, dd) = (ell as f64, d as f64);
    // (2ℓ+d−2)/(ℓ+d−2) · C(ℓ+d−2, d−2) computed as a float product
    let mut c = 1.0;
    for i in 1..=(d - 2) {
        c *= (l + i as f64) / i as f64;
    }
    ((2.0 * l + dd - 2.0) / (l + dd - 2.0) * c).round()
}

/// `P_{ℓ,d}(t)` by the three-term recurrence, valid for all real `t`.
pub fn legendre_p(ell: usize, d: usize, t: f64) -> f64 {
    assert!(d >= 2);
    let lam = (d as f64 - 2.0) / 2.0;
    if ell == 0 {
        return 1.0;
    }
    let mut p0 = 1.0;
    let mut p1 = t;
    for n in 1..ell {
        let nf = n as f64;
        let p2 = ((2.0 * nf + 2.0 * lam) * t * p1 - nf * p0) / (nf + 2.0 * lam);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Zonal function `Z_{ℓ,d}(t) = N_{ℓ,d} P_{ℓ,d}(t) / |S^{d−1}|`.
pub fn zonal(ell: usize, d: usize, t: f64) -> f64 {
    dim_spherical_f64(ell, d) * legendre_p(ell, d, t) / sphere_area(d)
}

/// A float carried with a separate binary exponent: `mant · 2^exp`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mant: f64,
    pub exp: i32,
}

impl Scaled {
    pub fn ln_abs(&self) -> f64 {
        self.mant.abs().ln() + self.exp as f64 * std::f64::consts::LN_2
    }
}

/// The homogeneous polynomials `y^ℓ P_{ℓ,d}(x/y)` for `ℓ = 0..=lmax`.
///
/// These stay finite as `y → 0`, which is how the Born series is evaluated
/// at `t = 1 − s²/(2κ)` with `x = κ − s²/2`, `y = κ`.
pub fn homogeneous_legendre(lmax: usize, d: usize, x: f64, y: f64) -> Vec<Scaled> {
    let lam = (d as f64 - 2.0) / 2.0;
    let y2 = y * y;
    let mut out = Vec::with_capacity(lmax + 1);
    let mut exp = 0_i32;
    let mut h0 = 1.0;
    let mut h1 = x;
    out.push(Scaled { mant: 1.0, exp: 0 });
    if lmax >= 1 {
        out.push(Scaled { mant: h1, exp: 0 });
    }
    const BIG: f64 = 1.0e150; // about 2^498
    const SHIFT: i32 = 498;
    let down = 2.0_f64.powi(-SHIFT);
    for n in 1..lmax {
        let nf = n as f64;
        let mut h2 = ((2.0 * nf + 2.0 * lam) * x * h1 - nf * y2 * h0) / (nf + 2.0 * lam);
        let m = h2.abs().max(h1.abs());
        if m > BIG {
            h2 *= down;
            h1 *= down;
            exp += SHIFT;
        } else if m < 1.0 / BIG && m > 0.0 {
            h2 /= down;
            h1 /= down;
            exp -= SHIFT;
        }
        out.push(Scaled { mant: h2, exp });
        h0 = h1;
        h1 = h2;
    }
    out
}
