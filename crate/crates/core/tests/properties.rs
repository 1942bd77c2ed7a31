use calderon_born::born::{fourier_series_eval, moments, MomentSequence};
use calderon_born::forward::{dtn_eigenvalue, dtn_free};
use calderon_born::specfun::{bessel_j, legendre_p};
use calderon_born::{l1_annulus, RadialPotential};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;

fn config(cases: u32, seed: u64) -> ProptestConfig {
    ProptestConfig { cases, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..ProptestConfig::default() }
}

fn potential() -> impl Strategy<Value = RadialPotential> {
    (prop::collection::vec(0.05..0.95_f64, 0..4), prop::collection::vec(-3.0..3.0_f64, 4)).prop_map(|(mut b, v)| {
        b.sort_by(f64::total_cmp);
        b.dedup_by(|x, y| (*x - *y).abs() < 0.02);
        b.push(1.0);
        let v = v[..b.len()].to_vec();
        RadialPotential::piecewise(b, v).unwrap()
    })
}

proptest! {
    #![proptest_config(config(64, 11))]

    #[test]
    fn legendre_is_one_at_one(ell in 0usize..80, d in 2usize..9) {
        prop_assert!((legendre_p(ell, d, 1.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bessel_three_term_recurrence(nu in 1.0..20.0_f64, x in 0.5..30.0_f64) {
        let (a, b, c) = (bessel_j(nu - 1.0, x), bessel_j(nu, x), bessel_j(nu + 1.0, x));
        let scale = a.abs().max(b.abs()).max(c.abs());
        prop_assert!((a + c - 2.0 * nu / x * b).abs() <= 1e-11 * scale * (1.0 + 2.0 * nu / x), "nu = {nu}, x = {x}");
    }

    #[test]
    fn shift_and_halfline(q in potential(), c in -4.0..4.0_f64, kappa in -10.0..10.0_f64, r in 0.01..1.0_f64) {
        let s = q.clone().shifted(c);
        prop_assert!((s.value(r) - q.value(r) - c).abs() < 1e-14);
        let t = -r.ln();
        let qh = q.to_halfline(kappa);
        prop_assert!((qh.eval(t) - r * r * (q.value(r) - kappa)).abs() < 1e-12);
    }

    #[test]
    fn l1_annulus_is_a_metric(a in potential(), b in potential(), inner in 0.0..0.9_f64) {
        let ab = l1_annulus(&a, &b, inner, 3).unwrap();
        let ba = l1_annulus(&b, &a, inner, 3).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - ba).abs() <= 1e-12 * ab.max(1.0));
        prop_assert_eq!(l1_annulus(&a, &a, inner, 3).unwrap(), 0.0);
    }
}

proptest! {
    #![proptest_config(config(16, 12))]

    #[test]
    fn constant_shift_covariance(c in -5.0..3.0_f64, kappa in -20.0..2.0_f64, ell in 0usize..15) {
        let q = RadialPotential::constant(c);
        let (v, _) = dtn_eigenvalue(&q, ell, 3, kappa, 1e-10).unwrap();
        let f = dtn_free(ell, 3, kappa - c).unwrap();
        prop_assert!((v - f).abs() <= 1e-7 * f.abs().max(1.0), "{v} vs {f}");
    }

    #[test]
    fn fourier_is_linear_in_the_moments(a in potential(), b in potential(), kappa in -5.0..-0.5_f64, xi in 0.0..8.0_f64) {
        let ma = moments(&a, 3, kappa, 30).unwrap();
        let mb = moments(&b, 3, kappa, 30).unwrap();
        let sum = MomentSequence {
            reduced: ma.reduced.iter().zip(&mb.reduced).map(|(x, y)| x + y).collect(),
            errors: ma.errors.iter().zip(&mb.errors).map(|(x, y)| x + y).collect(),
            sup_bound: ma.sup_bound + mb.sup_bound,
            ..ma.clone()
        };
        let fa = fourier_series_eval(&ma, xi, None).unwrap();
        let fb = fourier_series_eval(&mb, xi, None).unwrap();
        let fs = fourier_series_eval(&sum, xi, None).unwrap();
        let slack = fa.rounding + fb.rounding + fs.rounding + 1e-14;
        prop_assert!((fs.value - fa.value - fb.value).abs() <= slack);
    }
}
