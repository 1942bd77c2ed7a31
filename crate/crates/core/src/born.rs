//! κ-moments, Born coefficients and the Fourier series of the Born approximation.
//!
//! Coefficients are carried in the κ-free form: for a sequence
//! `a_ℓ = κ^ℓ e^{g_ℓ} m_ℓ` with `e^{g_ℓ} = 1/(4^ν Γ(ν+1)²)`, `ν = ℓ + ν_d`,
//! only the moderate-sized `m_ℓ` are stored. That keeps every term of
//! `(2π)^d Σ a_ℓ Z_{ℓ,d}(1 − |ξ|²/(2κ))` finite for large ℓ and small |κ|.

use crate::error::{Error, Result};
use crate::forward::{dtn_difference, linearization_bound, DtnSpectrum, EntryStatus};
use crate::potential::RadialPotential;
use crate::quad;
use crate::specfun::{
    bessel_i, dim_spherical_f64, gamma, homogeneous_legendre, legendre_p, ln_phi_sq_scale, nu_d,
    reduced_bessel, sphere_area,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A coefficient sequence that can be summed into a radial Fourier transform.
pub trait SeriesCoefficients: Sync {
    fn dimension(&self) -> usize;
    fn energy(&self) -> f64;
    /// `m_ℓ` for `ℓ = 0..=L`.
    fn reduced(&self) -> &[f64];
    /// Absolute error of `m_ℓ`.
    fn reduced_error(&self, ell: usize) -> f64;
    /// Bound on `|m_ℓ|` for `ℓ` beyond the stored range.
    fn tail_envelope(&self, ell: usize) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MomentSource {
    Quadrature,
    FromSpectrum,
}

/// κ-moments `σ_ℓ[q,κ] = ∫₀¹ q φ_ℓ(√κ r)² r^{d−1} dr` in reduced form.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSequence {
    pub d: usize,
    pub kappa: f64,
    /// `m_ℓ = ∫₀¹ q r^{2ℓ+d−1} H_ν(κr²)² dr`.
    pub reduced: Vec<f64>,
    pub errors: Vec<f64>,
    /// `sup |q|`, used by the tail bound.
    pub sup_bound: f64,
    pub source: MomentSource,
}

impl MomentSequence {
    /// `σ_ℓ` itself (underflows to 0 for large ℓ).
    pub fn sigma(&self, ell: usize) -> f64 {
        unreduce(self.reduced[ell], ell, self.d, self.kappa)
    }
}

impl SeriesCoefficients for MomentSequence {
    fn dimension(&self) -> usize {
        self.d
    }
    fn energy(&self) -> f64 {
        self.kappa
    }
    fn reduced(&self) -> &[f64] {
        &self.reduced
    }
    fn reduced_error(&self, ell: usize) -> f64 {
        self.errors[ell]
    }
    fn tail_envelope(&self, ell: usize) -> f64 {
        let nu = ell as f64 + nu_d(self.d);
        let h = if self.kappa < 0.0 { reduced_bessel(nu, self.kappa).powi(2) } else { 1.0 };
        self.sup_bound * h / (2 * ell + self.d) as f64
    }
}

fn unreduce(m: f64, ell: usize, d: usize, kappa: f64) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    if kappa == 0.0 {
        return if ell == 0 { m * ln_phi_sq_scale(0, d).exp() } else { 0.0 };
    }
    let ln = ell as f64 * kappa.abs().ln() + ln_phi_sq_scale(ell, d) + m.abs().ln();
    let sign = if kappa < 0.0 && ell % 2 == 1 { -m.signum() } else { m.signum() };
    sign * ln.exp()
}

/// `∫₀¹ q r^{2ℓ+d−1} H_ν(κr²)² dr`, cell by cell.
pub fn reduced_moment(q: &RadialPotential, ell: usize, d: usize, kappa: f64) -> Result<quad::Integral> {
    let nu = ell as f64 + nu_d(d);
    let p = (2 * ell + d - 1) as i32;
    let f = |r: f64| {
        let h = reduced_bessel(nu, kappa * r * r);
        q.value(r) * r.powi(p) * h * h
    };
    quad::adaptive_cells(f, &q.cell_edges(), 1e-300, 1e-14)
}

/// `σ_ℓ[q,κ]`.
pub fn moment(q: &RadialPotential, ell: usize, d: usize, kappa: f64) -> Result<f64> {
    Ok(unreduce(reduced_moment(q, ell, d, kappa)?.value, ell, d, kappa))
}

/// `σ_ℓ[q,κ]/φ_ℓ(√κ)² = ∫₀¹ q (φ_ℓ(√κ r)/φ_ℓ(√κ))² r^{d−1} dr`.
pub fn normalized_moment(q: &RadialPotential, ell: usize, d: usize, kappa: f64) -> Result<f64> {
    let h = reduced_bessel(ell as f64 + nu_d(d), kappa);
    if h == 0.0 || !h.is_finite() {
        return Err(Error::DirichletPole { ell, kappa, radius: 1.0 });
    }
    Ok(reduced_moment(q, ell, d, kappa)?.value / (h * h))
}

/// Moments for `ℓ = 0..=lmax`.
pub fn moments(q: &RadialPotential, d: usize, kappa: f64, lmax: usize) -> Result<MomentSequence> {
    q.validate()?;
    let mut reduced = Vec::with_capacity(lmax + 1);
    let mut errors = Vec::with_capacity(lmax + 1);
    for ell in 0..=lmax {
        let m = reduced_moment(q, ell, d, kappa)?;
        reduced.push(m.value);
        errors.push(m.error + 4.0 * f64::EPSILON * m.value.abs());
    }
    Ok(MomentSequence {
        d,
        kappa,
        reduced,
        errors,
        sup_bound: q.sup_norm(),
        source: MomentSource::Quadrature,
    })
}

/// Born coefficients `c_ℓ = δ_ℓ φ_ℓ(√κ)²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BornSeries {
    pub d: usize,
    pub kappa: f64,
    pub delta: Vec<f64>,
    /// `c_ℓ`; underflows to zero well before the reduced form loses information.
    pub coeff: Vec<f64>,
    /// `m_ℓ = δ_ℓ H_ν(κ)²`.
    pub reduced: Vec<f64>,
    /// Absolute error of `reduced`.
    pub errors: Vec<f64>,
    /// Absolute error of `delta`.
    pub delta_errors: Vec<f64>,
    /// First ℓ from which `|c_{ℓ+1}/c_ℓ| < 1` holds for the rest of the stored range.
    pub decay_onset: Option<usize>,
    /// `A` in the envelope `|δ_ℓ| ≤ A/(2ℓ+d)` used beyond the stored range.
    pub envelope: f64,
}

impl BornSeries {
    pub fn lmax(&self) -> usize {
        self.delta.len() - 1
    }

    /// Zero series of length `lmax + 1`.
    pub fn zero(d: usize, kappa: f64, lmax: usize) -> BornSeries {
        from_deltas(d, kappa, vec![0.0; lmax + 1], vec![0.0; lmax + 1])
    }

    pub fn truncated(&self, lmax: usize) -> BornSeries {
        let n = (lmax + 1).min(self.delta.len());
        from_deltas(self.d, self.kappa, self.delta[..n].to_vec(), self.delta_errors[..n].to_vec())
    }

    /// Certified bound on the dropped tail at `|ξ| = xi`.
    pub fn tail_bound(&self, xi: f64) -> f64 {
        tail_sum(self, xi)
    }
}

impl SeriesCoefficients for BornSeries {
    fn dimension(&self) -> usize {
        self.d
    }
    fn energy(&self) -> f64 {
        self.kappa
    }
    fn reduced(&self) -> &[f64] {
        &self.reduced
    }
    fn reduced_error(&self, ell: usize) -> f64 {
        self.errors[ell]
    }
    fn tail_envelope(&self, ell: usize) -> f64 {
        let h2 = reduced_bessel(ell as f64 + nu_d(self.d), self.kappa).powi(2);
        self.envelope * h2 / (2 * ell + self.d) as f64
    }
}

fn from_deltas(d: usize, kappa: f64, delta: Vec<f64>, delta_err: Vec<f64>) -> BornSeries {
    let n = delta.len();
    let mut reduced = Vec::with_capacity(n);
    let mut errors = Vec::with_capacity(n);
    let mut coeff = Vec::with_capacity(n);
    let mut envelope = 0.0_f64;
    for ell in 0..n {
        let h2 = reduced_bessel(ell as f64 + nu_d(d), kappa).powi(2);
        reduced.push(delta[ell] * h2);
        errors.push(delta_err[ell] * h2);
        coeff.push(unreduce(delta[ell] * h2, ell, d, kappa));
        envelope = envelope.max(2.0 * delta[ell].abs() * (2 * ell + d) as f64);
    }
    let log_c: Vec<f64> = (0..n)
        .map(|l| {
            if reduced[l] == 0.0 {
                f64::NEG_INFINITY
            } else {
                let k = if kappa == 0.0 { 0.0 } else { l as f64 * kappa.abs().ln() };
                k + ln_phi_sq_scale(l, d) + reduced[l].abs().ln()
            }
        })
        .collect();
    let mut decay_onset = None;
    if kappa != 0.0 && n >= 2 {
        let mut onset = n - 1;
        while onset > 0 && log_c[onset] < log_c[onset - 1] {
            onset -= 1;
        }
        if onset < n - 1 {
            decay_onset = Some(onset);
        }
    }
    BornSeries { d, kappa, delta, coeff, reduced, errors, delta_errors: delta_err, decay_onset, envelope }
}

/// Assemble `c_ℓ` from the spectrum's directly computed differences `δ_ℓ`.
pub fn born_coefficients(spec: &DtnSpectrum) -> Result<BornSeries> {
    if spec.lambda.is_empty() {
        return Err(Error::Invalid("empty spectrum".into()));
    }
    let mut err = Vec::with_capacity(spec.delta.len());
    for ell in 0..spec.delta.len() {
        if spec.status[ell] == EntryStatus::NearDirichletPole
            && !spec.delta[ell].is_finite()
        {
            return Err(Error::DirichletPole { ell, kappa: spec.kappa, radius: 1.0 });
        }
        err.push(spec.error[ell]);
    }
    Ok(from_deltas(spec.d, spec.kappa, spec.delta.clone(), err))
}

/// Value of the series together with its error budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierValue {
    pub value: f64,
    /// Bound on the dropped terms `ℓ > L`.
    pub tail_bound: f64,
    /// Estimate of rounding and coefficient error in the kept terms.
    pub rounding: f64,
}

fn log_const(d: usize) -> f64 {
    d as f64 * (2.0 * PI).ln() - sphere_area(d).ln()
}

/// Individual terms `(2π)^d a_ℓ Z_{ℓ,d}(1 − |ξ|²/(2κ))`, `ℓ = 0..=L`.
///
/// Each term is a plain product of its factors with the binary exponents
/// collected separately; going through logarithms would cost `|ln t|·ε`
/// per term, which the cancelling sum cannot afford.
pub fn fourier_terms<S: SeriesCoefficients + ?Sized>(series: &S, xi: f64) -> Vec<f64> {
    let (d, kappa) = (series.dimension(), series.energy());
    let m = series.reduced();
    let lmax = m.len().saturating_sub(1);
    let hom = homogeneous_legendre(lmax, d, kappa - 0.5 * xi * xi, kappa);
    let c = (2.0 * PI).powi(d as i32) / sphere_area(d);
    // e^{g_ℓ} = 1/(4^ν Γ(ν+1)²) by its ratio recurrence, as mantissa and exponent
    let nu0 = nu_d(d);
    let (mut g, mut gexp) = (1.0 / (4.0_f64.powf(nu0) * gamma(nu0 + 1.0).powi(2)), 0_i32);
    let mut out = Vec::with_capacity(m.len());
    for ell in 0..m.len() {
        if ell > 0 {
            let nu = ell as f64 + nu0;
            g /= 4.0 * nu * nu;
            if g < 1e-150 {
                g *= 2.0_f64.powi(498);
                gexp -= 498;
            }
        }
        if m[ell] == 0.0 || hom[ell].mant == 0.0 {
            out.push(0.0);
            continue;
        }
        let mant = m[ell] * g * dim_spherical_f64(ell, d) * c * hom[ell].mant;
        out.push(ldexp(mant, gexp + hom[ell].exp));
    }
    out
}

/// `x·2^k`, exact unless the result leaves the normal range.
fn ldexp(mut x: f64, mut k: i32) -> f64 {
    while k > 1000 {
        x *= 2.0_f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 {
        x *= 2.0_f64.powi(-1000);
        k += 1000;
    }
    x * 2.0_f64.powi(k)
}

fn tail_sum<S: SeriesCoefficients + ?Sized>(series: &S, xi: f64) -> f64 {
    let (d, kappa) = (series.dimension(), series.energy());
    let lstart = series.reduced().len();
    let x = kappa - 0.5 * xi * xi;
    // |κ^ℓ P_ℓ(x/κ)| ≤ ρ^ℓ
    let rho = if x.abs() >= kappa.abs() {
        x.abs() + (x * x - kappa * kappa).max(0.0).sqrt()
    } else {
        kappa.abs()
    };
    if rho == 0.0 {
        return 0.0;
    }
    let c = log_const(d);
    let mut total = 0.0;
    let mut prev_ln = f64::NAN;
    for ell in lstart..lstart + 20_000 {
        let env = series.tail_envelope(ell);
        if env == 0.0 {
            return total;
        }
        let ln = env.ln()
            + ln_phi_sq_scale(ell, d)
            + dim_spherical_f64(ell, d).ln()
            + c
            + ell as f64 * rho.ln();
        let term = ln.exp();
        total += term;
        // ratio in log form so underflowed terms still terminate
        let ratio = (ln - prev_ln).exp();
        if ratio < 0.5 && term <= 1e-20 * total.max(f64::MIN_POSITIVE) {
            return total + term * ratio / (1.0 - ratio);
        }
        prev_ln = ln;
    }
    f64::INFINITY
}

/// `(2π)^d Σ_{ℓ≤L} a_ℓ Z_{ℓ,d}(1 − |ξ|²/(2κ))` with tail and rounding bounds.
///
/// With `tol = Some(τ)`, fails with `TailNotCertified` if the tail bound
/// exceeds τ and with `PrecisionLoss` if the rounding estimate does.
/// The reduced form makes `κ = 0` a regular (limit) point of the formula.
pub fn fourier_series_eval<S: SeriesCoefficients + ?Sized>(
    series: &S,
    xi: f64,
    tol: Option<f64>,
) -> Result<FourierValue> {
    if !(xi >= 0.0) {
        return Err(Error::Domain(format!("|xi| = {xi} must be non-negative")));
    }
    let terms = fourier_terms(series, xi);
    let (mut sum, mut comp, mut rounding) = (0.0_f64, 0.0_f64, 0.0_f64);
    let m = series.reduced();
    for (ell, &t) in terms.iter().enumerate() {
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
        let rel = if m[ell] != 0.0 { series.reduced_error(ell) / m[ell].abs() } else { 0.0 };
        rounding += t.abs() * (rel + 4.0 * (ell as f64 + 4.0) * f64::EPSILON);
    }
    let tail_bound = tail_sum(series, xi);
    let out = FourierValue { value: sum, tail_bound, rounding };
    if let Some(tol) = tol {
        if !(tail_bound <= tol) {
            return Err(Error::TailNotCertified { xi, bound: tail_bound, tol });
        }
        if !(rounding <= tol) {
            return Err(Error::PrecisionLoss { xi, bound: rounding, tol });
        }
    }
    Ok(out)
}

/// `F q^B_κ(0) = ∫ q^B_κ`.
pub fn fourier_at_zero<S: SeriesCoefficients + ?Sized>(series: &S) -> f64 {
    fourier_series_eval(series, 0.0, None).map(|v| v.value).unwrap_or(f64::NAN)
}

/// κ → 0 value by Richardson extrapolation from energies `κ_ε` and `κ_ε/2`.
pub fn kappa_zero_fourier<S: SeriesCoefficients + ?Sized>(eps: &S, half: &S, xi: f64) -> Result<f64> {
    let (k1, k2) = (eps.energy(), half.energy());
    if k1 == 0.0 || (k2 - 0.5 * k1).abs() > 1e-12 * k1.abs() {
        return Err(Error::Invalid(format!(
            "extrapolation needs energies k and k/2, got {k1} and {k2}"
        )));
    }
    let f1 = fourier_series_eval(eps, xi, None)?.value;
    let f2 = fourier_series_eval(half, xi, None)?.value;
    Ok(2.0 * f2 - f1)
}

/// κ → 0 limit of `4^{ℓ+ν}Γ(ℓ+d/2)² σ_ℓ/κ^ℓ` (the Hausdorff moment `∫₀¹ q r^{2ℓ+d−1} dr`),
/// by Richardson extrapolation.
pub fn rescaled_moment_limit(eps: &MomentSequence, half: &MomentSequence, ell: usize) -> f64 {
    2.0 * half.reduced[ell] - eps.reduced[ell]
}

/// One row of [`linearization_gap`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub ell: usize,
    pub delta: f64,
    pub linearized: f64,
    pub gap: f64,
    pub bound: f64,
    /// The bound is only claimed for `κ ≤ −‖q‖_∞`.
    pub bound_applies: bool,
}

impl GapRow {
    pub fn within_bound(&self) -> bool {
        !self.bound_applies || self.gap <= self.bound
    }
}

/// Per-ℓ gap between `δ_ℓ` and the normalized moment, next to its bound.
pub fn linearization_gap(
    q: &RadialPotential,
    d: usize,
    kappa: f64,
    lmax: usize,
    tol: f64,
) -> Result<Vec<GapRow>> {
    let sup = q.sup_norm();
    let applies = kappa <= -sup;
    (0..=lmax)
        .map(|ell| {
            let delta = dtn_difference(q, ell, d, kappa, tol)?;
            let linearized = normalized_moment(q, ell, d, kappa)?;
            Ok(GapRow {
                ell,
                delta,
                linearized,
                gap: (delta - linearized).abs(),
                bound: linearization_bound(sup, ell, d, kappa),
                bound_applies: applies,
            })
        })
        .collect()
}

/// `∫_{S^{d−1}} (P_ℓ e_{ζ₁})(P_ℓ e_{ζ₂})` for the exponentials `e_ζ = e^{ζ·x}` with
/// `ζ·ζ = −κ > 0`, `ζ₁ + ζ₂ = −iξ`, from the explicit projection onto degree-ℓ
/// harmonics and the Funk–Hecke formula.
pub fn cgo_pairing_factor(ell: usize, d: usize, kappa: f64, xi: f64) -> Result<f64> {
    if kappa >= 0.0 {
        return Err(Error::Domain("the exponential pairing is evaluated for kappa < 0".into()));
    }
    let nud = nu_d(d);
    let x = (-kappa).sqrt();
    let n = dim_spherical_f64(ell, d);
    let g = gamma(d as f64 / 2.0);
    let proj = g * n * (2.0 / x).powf(nud) * bessel_i(ell as f64 + nud, x);
    let t = 1.0 - xi * xi / (2.0 * kappa);
    // ζ̂₁·ζ̂₂ = −t
    let fh = sphere_area(d) / n * legendre_p(ell, d, -t);
    Ok(proj * proj * fh)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forward::dtn_spectrum;

    fn ball(a: f64) -> RadialPotential {
        if a >= 1.0 {
            RadialPotential::constant(1.0)
        } else {
            RadialPotential::piecewise(vec![a, 1.0], vec![1.0, 0.0]).unwrap()
        }
    }

    fn ball_ft(a: f64, s: f64) -> f64 {
        if s == 0.0 {
            return 4.0 * PI * a.powi(3) / 3.0;
        }
        4.0 * PI * ((a * s).sin() - a * s * (a * s).cos()) / s.powi(3)
    }

    #[test]
    fn moment_examples() {
        let c = 1.7;
        let q = RadialPotential::constant(c);
        assert!((moment(&q, 0, 3, 0.0).unwrap() - 2.0 * c / (3.0 * PI)).abs() < 1e-15);
        assert_eq!(moment(&q, 2, 3, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn fourier_of_ball_indicators() {
        for &a in &[1.0 / 3.0, 2.0 / 3.0, 1.0] {
            for &kappa in &[-1.0, -2.0] {
                let m = moments(&ball(a), 3, kappa, 90).unwrap();
                for i in 0..=20 {
                    let s = i as f64;
                    let v = fourier_series_eval(&m, s, None).unwrap();
                    let exact = ball_ft(a, s);
                    assert!((v.value - exact).abs() < 1e-8, "a={a} k={kappa} s={s}: {} vs {exact}", v.value);
                }
            }
        }
    }

    #[test]
    fn value_at_zero_is_zonal_sum() {
        let m = moments(&ball(0.5), 3, -1.0, 30).unwrap();
        let direct: f64 = (0..=30)
            .map(|l| (2.0 * PI).powi(3) * m.sigma(l) * dim_spherical_f64(l, 3) / sphere_area(3))
            .sum();
        let v = fourier_series_eval(&m, 0.0, None).unwrap().value;
        assert!((v - direct).abs() < 1e-12 * direct.abs());
    }

    #[test]
    fn born_of_zero_is_zero() {
        let zero = RadialPotential::constant(0.0);
        let spec = dtn_spectrum(&zero, 3, -1.0, 10, 1e-9, None).unwrap();
        let b = born_coefficients(&spec).unwrap();
        assert!(b.coeff.iter().all(|&c| c == 0.0));
        assert_eq!(fourier_at_zero(&b), 0.0);
    }

    #[test]
    fn born_constant_ground_coefficient() {
        // q ≡ c at κ = 0: c₀ = λ₀[c,0]·φ₀(0)² with λ₀[c,0] = λ₀[0,−c]
        let c = 0.8;
        let spec = dtn_spectrum(&RadialPotential::constant(c), 3, 0.0, 4, 1e-10, None).unwrap();
        let b = born_coefficients(&spec).unwrap();
        let exact = crate::forward::dtn_free(0, 3, -c).unwrap() * 2.0 / PI;
        assert!((b.coeff[0] - exact).abs() < 1e-10);
        assert!(b.coeff[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn zero_energy_limit() {
        let q = ball(0.6);
        let e = moments(&q, 3, 1e-4, 8).unwrap();
        let h = moments(&q, 3, 5e-5, 8).unwrap();
        for ell in 0..=5 {
            let haus = 0.6_f64.powi(2 * ell as i32 + 3) / (2 * ell + 3) as f64;
            assert!((rescaled_moment_limit(&e, &h, ell) - haus).abs() < 1e-6);
        }
        let e = moments(&q, 3, -1e-4, 40).unwrap();
        let h = moments(&q, 3, -5e-5, 40).unwrap();
        for s in [0.0, 1.0, 5.0] {
            let v = kappa_zero_fourier(&e, &h, s).unwrap();
            assert!((v - ball_ft(0.6, s)).abs() < 1e-6);
        }
    }

    #[test]
    fn cgo_pairing_matches_series_terms() {
        let q = RadialPotential::piecewise(vec![1.0 / 3.0, 2.0 / 3.0, 1.0], vec![2.0, 1.0, 2.0]).unwrap();
        let kappa = -2.0;
        let spec = dtn_spectrum(&q, 3, kappa, 10, 1e-10, None).unwrap();
        let b = born_coefficients(&spec).unwrap();
        for xi in [0.0, 1.5, 4.0] {
            let terms = fourier_terms(&b, xi);
            for ell in 0..=10 {
                let p = b.delta[ell] * cgo_pairing_factor(ell, 3, kappa, xi).unwrap();
                assert!((p - terms[ell]).abs() <= 1e-9 * p.abs().max(1e-300), "l={ell}");
            }
        }
    }

    #[test]
    fn tail_bound_for_truncation() {
        let m = moments(&ball(2.0 / 3.0), 3, -1.5, 60).unwrap();
        for s in [2.0, 8.0, 15.0] {
            let short = MomentSequence { reduced: m.reduced[..=30].to_vec(), errors: m.errors[..=30].to_vec(), ..m.clone() };
            let a = fourier_series_eval(&short, s, None).unwrap();
            let b = fourier_series_eval(&m, s, None).unwrap();
            assert!((a.value - b.value).abs() <= a.tail_bound, "s={s}");
        }
    }
}
