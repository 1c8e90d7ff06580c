use std::f64::consts::PI;

use arm_core::quadrature::periodic_trapezoid;
use arm_core::specfun::{bessel_j, hyp1f1, kummer_rhs, laguerre_real, spherical_harmonic};
use arm_core::spectra::config::{Mode, ParallelGrid, Range};
use arm_core::spectra::emit::{parse_csv, parse_json, render};
use arm_core::{angular_combo, co2_preset, int2_closed, run_scan, Complex64, OutputFormat, ScanConfig};
use proptest::prelude::*;

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).map(|i| f64::from(n - i) / f64::from(i + 1)).product()
}

proptest! {
    #[test]
    fn laguerre_is_terminating_1f1(n in 0u32..9, alpha in 0u32..7, x in 0.0f64..20.0) {
        let f = hyp1f1(
            Complex64::new(-(n as f64), 0.0),
            Complex64::new(alpha as f64 + 1.0, 0.0),
            Complex64::new(x, 0.0),
        ).unwrap();
        let expected = binomial(n + alpha, n) * f.re;
        let l = laguerre_real(n, alpha, x);
        prop_assert!((l - expected).abs() <= 1e-11 * expected.abs().max(1.0), "{l} vs {expected}");
    }

    #[test]
    fn bessel_matches_integral_representation(m in 0u32..7, x in 0.0f64..30.0) {
        // J_m(x) = (1/2π) ∫_0^{2π} cos(mθ - x sin θ) dθ
        let oracle = periodic_trapezoid(128, |t| Complex64::new((m as f64 * t - x * t.sin()).cos(), 0.0)).re / (2.0 * PI);
        let j = bessel_j(m, x);
        prop_assert!((j - oracle).abs() <= 1e-12, "J_{m}({x}) = {j} vs {oracle}");
    }

    #[test]
    fn kummer_transformation_holds(a in -3.0f64..5.0, b in 0.2f64..6.0, r in 0.0f64..8.0, th in -PI..PI) {
        let z = Complex64::from_polar(r, th);
        let (a, b) = (Complex64::new(a, 0.0), Complex64::new(b, 0.0));
        let lhs = hyp1f1(a, b, z).unwrap();
        let rhs = kummer_rhs(a, b, z).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1e-300));
    }

    #[test]
    fn negative_order_harmonics_are_conjugates(l in 0u32..6, m in 0i32..6, th in 0.0f64..PI, ph in -PI..PI) {
        prop_assume!(m as u32 <= l);
        let y = spherical_harmonic(l, m, th, ph).unwrap();
        let yn = spherical_harmonic(l, -m, th, ph).unwrap();
        let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((yn - y.conj() * sign).norm() <= 1e-14);
    }

    #[test]
    fn int2_zero_order_matches_table(m in -5i32..=5, mu in -5i32..=5, xi in 0.1f64..4.0) {
        let combo = angular_combo(m, mu);
        // the central zero has exactly order |m + μ|
        let small = int2_closed(&combo, 0, xi, 1e-3);
        let smaller = int2_closed(&combo, 0, xi, 5e-4);
        let order = (small / smaller).log2();
        prop_assert!((order - combo.power() as f64).abs() < 1e-3, "order {order}");
    }

    #[test]
    fn toml_round_trip(count in 1usize..50, tau in 0.1f64..5.0, phase in -3.0f64..3.0) {
        let mut cfg = co2_preset();
        cfg.grid.p_perp.count = count;
        cfg.field.phase = phase;
        cfg.crude.as_mut().unwrap().tau_t = tau;
        let text = cfg.to_toml_string().unwrap();
        prop_assert_eq!(ScanConfig::from_toml_str(&text).unwrap(), cfg);
    }
}

fn small_physical_config() -> ScanConfig {
    let mut cfg = co2_preset();
    cfg.mode = Mode::Both;
    cfg.grid.p_par = ParallelGrid::List(vec![-0.2, 0.0, 0.3]);
    cfg.grid.p_perp = Range {
        min: 0.0,
        max: 1.2,
        count: 5,
    };
    cfg.grid.phi_p = Range {
        min: 0.0,
        max: 3.0,
        count: 3,
    };
    cfg
}

#[test]
fn scan_is_bitwise_deterministic_across_thread_counts() {
    let cfg = small_physical_config();
    let many = run_scan(&cfg).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let one = pool.install(|| run_scan(&cfg)).unwrap();
    assert_eq!(many.len(), one.len());
    assert!(many.iter().zip(&one).all(|(a, b)| a.same_bits(b)));
}

#[test]
fn both_mode_sum_is_direct_plus_correlation() {
    let recs = run_scan(&small_physical_config()).unwrap();
    assert_eq!(recs.len(), 45 * 2 * 3);
    assert!(recs.iter().all(|r| !r.channel_tag.contains("#error")));
    for chunk in recs.chunks(3) {
        let (d, c, s) = (&chunk[0], &chunk[1], &chunk[2]);
        assert!(d.channel_tag.ends_with(":direct") && s.channel_tag.ends_with(":sum"));
        let sum = Complex64::new(d.re_a + c.re_a, d.im_a + c.im_a);
        assert!((sum - Complex64::new(s.re_a, s.im_a)).norm() <= 1e-15 * sum.norm().max(1e-300));
    }
}

#[test]
fn rendered_output_round_trips_bit_exactly() {
    let recs = run_scan(&small_physical_config()).unwrap();
    for format in [OutputFormat::Csv, OutputFormat::Json] {
        let text = render(&recs, format).unwrap();
        let back = match format {
            OutputFormat::Csv => parse_csv(&text).unwrap(),
            OutputFormat::Json => parse_json(&text).unwrap(),
        };
        assert!(recs.iter().zip(&back).all(|(a, b)| a.same_bits(b)), "{format:?}");
    }
}

#[test]
fn coherent_sum_respects_triangle_bound() {
    let recs = run_scan(&small_physical_config()).unwrap();
    for chunk in recs.chunks(3) {
        let (d, c, s) = (chunk[0].prob, chunk[1].prob, chunk[2].prob);
        assert!(s <= 2.0 * (d + c) * (1.0 + 1e-15));
    }
}

#[test]
fn single_axis_point_of_m1_channel_is_zero() {
    let mut cfg = small_physical_config();
    cfg.mode = Mode::Direct;
    cfg.channels.truncate(1);
    cfg.grid.p_par = ParallelGrid::Single(0.1);
    cfg.grid.p_perp = Range {
        min: 0.0,
        max: 0.0,
        count: 1,
    };
    cfg.grid.phi_p = Range {
        min: 0.0,
        max: 0.0,
        count: 1,
    };
    let recs = run_scan(&cfg).unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0].prob, 0.0);
}
