//! Real-order Bessel functions built around the entire function
//! `H_ν(w) = Σ_n (−w/4)^n Γ(ν+1) / (n! Γ(ν+n+1))`, so that
//! `J_ν(x) = (x/2)^ν H_ν(x²) / Γ(ν+1)` and `I_ν(x) = (x/2)^ν H_ν(−x²) / Γ(ν+1)`.

use super::gamma::{gamma, ln_gamma};

const SERIES_LIMIT: f64 = 64.0;

/// `H_ν(w)`, normalized so that `H_ν(0) = 1`.
pub fn reduced_bessel(nu: f64, w: f64) -> f64 {
    if w == 0.0 {
        return 1.0;
    }
    if w < 0.0 || w <= SERIES_LIMIT || w < 4.0 * (nu + 1.0) {
        return reduced_series(nu, w);
    }
    let x = w.sqrt();
    let ln_pref = ln_gamma(nu + 1.0) + nu * (2.0 / x).ln();
    miller_j(nu, x) * ln_pref.exp()
}

fn reduced_series(nu: f64, w: f64) -> f64 {
    let q = -w / 4.0;
    let mut term = 1.0_f64;
    let mut peak = 1.0_f64;
    let mut sum = 1.0;
    let mut comp = 0.0;
    let mut n = 0.0;
    loop {
        n += 1.0;
        term *= q / (n * (nu + n));
        peak = peak.max(term.abs());
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        let past_peak = n * (nu + n) > q.abs();
        if past_peak && term.abs() <= 1e-18 * peak.max(sum.abs()) || !sum.is_finite() {
            break;
        }
    }
    sum
}

/// `J_ν(x)` for `ν ≥ 0`, `x ≥ 0`.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    assert!(nu >= 0.0 && x >= 0.0, "bessel_j needs nu >= 0, x >= 0");
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let w = x * x;
    if w <= SERIES_LIMIT || w < 4.0 * (nu + 1.0) {
        let ln_pref = nu * (x / 2.0).ln() - ln_gamma(nu + 1.0);
        reduced_series(nu, w) * ln_pref.exp()
    } else {
        miller_j(nu, x)
    }
}

/// `I_ν(x)` for `ν ≥ 0`, `x ≥ 0`.
pub fn bessel_i(nu: f64, x: f64) -> f64 {
    assert!(nu >= 0.0 && x >= 0.0, "bessel_i needs nu >= 0, x >= 0");
    if x == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let ln_pref = nu * (x / 2.0).ln() - ln_gamma(nu + 1.0);
    reduced_series(nu, -x * x) * ln_pref.exp()
}

/// Backward recurrence for `J_{μ+n}`, normalized with the Neumann sum
/// `(x/2)^μ = Σ_k (μ+2k) Γ(μ+k)/k! · J_{μ+2k}(x)`.
fn miller_j(nu: f64, x: f64) -> f64 {
    let n = nu.floor() as usize;
    let mu = nu - n as f64;
    let top = (n as f64).max(x);
    let mut m = (top + 30.0 + (50.0 * top).sqrt()).ceil() as usize;
    if m % 2 == 1 {
        m += 1;
    }
    // Neumann coefficients a_j for even indices 2j.
    let half = m / 2;
    let mut a = vec![0.0; half + 1];
    a[0] = gamma(mu + 1.0);
    let mut g = gamma(mu + 1.0);
    for (j, aj) in a.iter_mut().enumerate().skip(1) {
        if j > 1 {
            g *= (mu + j as f64 - 1.0) / j as f64;
        }
        *aj = (mu + 2.0 * j as f64) * g;
    }

    let mut f_next = 0.0;
    let mut f = 1e-300;
    let mut sum = 0.0;
    let mut target = 0.0;
    let mut k = m;
    loop {
        if k == n {
            target = f;
        }
        if k.is_multiple_of(2) {
            sum += a[k / 2] * f;
        }
        if k == 0 {
            break;
        }
        let f_prev = 2.0 * (mu + k as f64) / x * f - f_next;
        f_next = f;
        f = f_prev;
        k -= 1;
        if f.abs() > 1e250 {
            f *= 1e-250;
            f_next *= 1e-250;
            sum *= 1e-250;
            target *= 1e-250;
        }
    }
    target * (x / 2.0).powf(mu) / sum
}

/// `R_ν(w) = √w J_{ν+1}(√w)/J_ν(√w)`, continued analytically to `w < 0`
/// (where it equals `−√|w| I_{ν+1}/I_ν`). Evaluated by the continued fraction
/// `w / (2(ν+1) − w / (2(ν+2) − …))` with modified Lentz.
pub fn bessel_ratio(nu: f64, w: f64) -> f64 {
    if w == 0.0 {
        return 0.0;
    }
    const TINY: f64 = 1e-300;
    let mut f = TINY;
    let mut c = f;
    let mut d = 0.0;
    let limit = 200_000 + 20 * w.abs().sqrt() as usize;
    for k in 1..limit {
        let a = if k == 1 { w } else { -w };
        let b = 2.0 * (nu + k as f64);
        d = b + a * d;
        if d == 0.0 {
            d = TINY;
        }
        c = b + a / c;
        if c == 0.0 {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    f
}

/// `k`-th positive zero of `J_ν`.
pub fn bessel_zero(nu: f64, k: usize) -> f64 {
    assert!(nu >= 0.0 && k >= 1);
    let h = 0.05;
    let mut x0 = nu.max(h);
    let mut f0 = bessel_j(nu, x0);
    let mut found = 0;
    loop {
        let x1 = x0 + h;
        let f1 = bessel_j(nu, x1);
        if f0 == 0.0 || f0.signum() != f1.signum() {
            found += 1;
            if found == k {
                return bisect(|x| bessel_j(nu, x), x0, x1);
            }
        }
        x0 = x1;
        f0 = f1;
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}
