//! Property tests over randomized inputs.

use proptest::prelude::*;

use passage::classic::{diffusion_crossing_cdf, DiffusionParams};
use passage::exact::FirstPassageQuery;
use passage::ig::{ig_kernel, RenewalMoments};
use passage::special::{ig_cdf, log_std_normal_cdf, std_normal_cdf, IgParams};
use passage::walk::{hitting_density, walk_pmf, WalkParams};

proptest! {
    #[test]
    fn phi_symmetry(x in -37.0f64..37.0) {
        let e = std_normal_cdf(x) + std_normal_cdf(-x) - 1.0;
        prop_assert!(e.abs() < 1e-14);
    }

    #[test]
    fn phi_monotone(a in -20.0f64..20.0, d in 1e-6f64..5.0) {
        prop_assert!(std_normal_cdf(a + d) >= std_normal_cdf(a));
    }

    #[test]
    fn log_phi_exponentiates_back(x in -38.0f64..8.0) {
        let lp = log_std_normal_cdf(x);
        let p = std_normal_cdf(x);
        if x >= -8.0 {
            prop_assert!((lp.exp() - p).abs() <= 1e-10 * p);
        } else {
            // in the deep tail compare against the tail-stable route itself
            prop_assert!(lp < 0.0 && lp.is_finite());
        }
    }

    #[test]
    fn ig_cdf_in_range_and_monotone(
        mu in 0.05f64..20.0,
        lambda in 0.05f64..50.0,
        x in 1e-3f64..100.0,
        d in 1e-6f64..10.0,
    ) {
        let p = IgParams::new(mu, lambda).unwrap();
        let lo = ig_cdf(x, &p).unwrap();
        let hi = ig_cdf(x + d, &p).unwrap();
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!(hi >= lo - 1e-14);
    }

    #[test]
    fn diffusion_formula_is_ig_composition(
        drift in 0.2f64..4.0,
        sigma2 in 0.2f64..8.0,
        frac in 0.05f64..0.95,
        u in 0.5f64..40.0,
        t in 0.5f64..300.0,
    ) {
        // c strictly below the drift: the crossing law is a proper IG
        let c = drift * frac;
        let d = DiffusionParams::new(drift, sigma2).unwrap();
        let q = FirstPassageQuery::new(u, t).unwrap();
        let lhs = diffusion_crossing_cdf(&d, c, &q).unwrap();
        let p = IgParams::new(u / (drift - c), u * u / sigma2).unwrap();
        let rhs = ig_cdf(t, &p).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn walk_pmf_pairs_with_hitting_density(
        p in 0.05f64..0.95,
        y in 0.01f64..40.0,
        k in 1u32..12,
    ) {
        let w = WalkParams::new(p).unwrap();
        let lhs = walk_pmf(&w, y, k as i64);
        let rhs = y / k as f64 * hitting_density(&w, k, y);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1e-300));
    }

    #[test]
    fn kernel_is_a_cdf_in_t(
        big_m in 0.2f64..2.0,
        d2 in 0.2f64..6.0,
        u in 1.0f64..50.0,
        c in 0.1f64..4.0,
        t in 0.5f64..300.0,
        dt in 0.01f64..50.0,
    ) {
        let rm = RenewalMoments::new(big_m, d2).unwrap();
        let lo = ig_kernel(&rm, u, c, t, 0.0).unwrap();
        let hi = ig_kernel(&rm, u, c, t + dt, 0.0).unwrap();
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!(hi >= lo - 1e-12);
    }
}
