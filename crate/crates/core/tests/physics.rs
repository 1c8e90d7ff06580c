use arm_core::correlation::{CorrelationOptions, DampingConvention};
use arm_core::{
    a2_yield, direct_yield, saddle_solve, z_s, ChannelTransition, Complex64, DirectOptions, LaserField,
    Momentum, MultipoleTerm, OrbitalSpec, SlowFactors,
};

fn field() -> LaserField {
    LaserField::monochromatic(0.05, 0.057, 0.0).unwrap()
}

fn dipole_transition(orb: &OrbitalSpec, delta_ip: f64) -> ChannelTransition {
    let term = MultipoleTerm::constant(1, 0, Complex64::new(1.0, 0.0)).unwrap();
    ChannelTransition::new(delta_ip, 0.0, orb.ipn(), *orb, vec![term]).unwrap()
}

#[test]
fn correlation_channel_beats_direct_ionization_of_deep_channel() {
    let f = field();
    let p = Momentum::new(0.0, 0.3, 0.0);
    let shallow = OrbitalSpec::from_ip(1, 0, 0.5, 1.0, 0.0).unwrap();
    let deep = OrbitalSpec::from_ip(1, 0, 1.5, 1.0, 0.0).unwrap();
    let opts = CorrelationOptions::default();
    let a2 = a2_yield(&p, &dipole_transition(&shallow, 1.0), &f, 200.0, 64, &opts).unwrap();
    let a1 = direct_yield(
        &deep,
        1.0,
        &p,
        &f,
        &SlowFactors::default(),
        200.0,
        &DirectOptions::default(),
    )
    .unwrap();
    let ratio = a2.value().norm() / a1.value().norm();
    // tunnelling through the shallow channel wins by orders of magnitude
    assert!(ratio > 1e3, "ratio {ratio:e}");
}

#[test]
fn large_gap_limit_matches_endpoint_expansion() {
    let f = field();
    // off the crest, so the trajectory still moves at the tunnel exit
    let p = Momentum::new(0.2, 0.3, 0.0);
    let orb = OrbitalSpec::from_ip(1, 0, 0.5, 1.0, 0.0).unwrap();
    let s = saddle_solve(&f, &p, orb.ipn(), 0).unwrap();
    let opts = CorrelationOptions::default();
    let a2 = |d: f64| {
        a2_yield(&p, &dipole_transition(&orb, d), &f, 200.0, 256, &opts)
            .unwrap()
            .value()
    };

    // undamped integrand g ∝ z_s^{-2}; Watson's lemma gives
    // Δ (a2(Δ)/a2(2Δ) - 2) → -g'(τ)/g(τ) = 2 z_s'(τ)/z_s(τ)
    let h = 1e-6;
    let z = |xi: f64| z_s(&f, p.p_par, s.t_s, s.t_s - Complex64::i() * xi);
    let tau = s.tau_t;
    let limit = (z(tau + h) - z(tau - h)) / (h * z(tau));

    let errs: Vec<f64> = [2.0, 4.0, 8.0, 16.0]
        .iter()
        .map(|&d| {
            let r = a2(d) / a2(2.0 * d);
            (d * (r - 2.0) - limit).norm() / limit.norm()
        })
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(errs[3] < 0.1, "{errs:?}");
}

#[test]
fn damping_conventions_differ() {
    let f = field();
    let p = Momentum::new(0.1, 0.2, 0.0);
    let orb = OrbitalSpec::from_ip(1, 0, 0.5, 1.0, 0.0).unwrap();
    let tr = dipole_transition(&orb, 0.5);
    let published = a2_yield(&p, &tr, &f, 200.0, 64, &CorrelationOptions::default()).unwrap();
    let current = CorrelationOptions {
        damping: DampingConvention::CurrentWork,
        ..CorrelationOptions::default()
    };
    let current = a2_yield(&p, &tr, &f, 200.0, 64, &current).unwrap();
    assert!((published.value() - current.value()).norm() > 1e-3 * published.value().norm());
}

#[test]
fn sign_toggle_flips_odd_m() {
    let f = field();
    let p = Momentum::new(0.1, 0.4, 0.7);
    let slow = SlowFactors::default();
    for m in [-1, 1, 2] {
        let orb = OrbitalSpec::from_ip(2, m, 0.5, 1.0, 0.0).unwrap();
        let plus = direct_yield(&orb, 0.0, &p, &f, &slow, 200.0, &DirectOptions::default()).unwrap();
        let minus_opts = DirectOptions {
            sign_toggle: -1,
            ..DirectOptions::default()
        };
        let minus = direct_yield(&orb, 0.0, &p, &f, &slow, 200.0, &minus_opts).unwrap();
        let expected = if m % 2 == 0 { 1.0 } else { -1.0 };
        assert!((minus.value() - plus.value() * expected).norm() <= 1e-14 * plus.value().norm());
    }
}

#[test]
fn half_cycle_symmetry_of_direct_yield() {
    // A(t + π/ω) = -A(t): burst 1 at p_∥ is burst 0 at -p_∥
    let f = field();
    let orb = OrbitalSpec::from_ip(1, 0, 0.5, 1.0, 0.0).unwrap();
    let slow = SlowFactors::default();
    let at = |p_par: f64, burst: i32| {
        let opts = DirectOptions {
            burst,
            ..DirectOptions::default()
        };
        direct_yield(
            &orb,
            0.0,
            &Momentum::new(p_par, 0.3, 0.0),
            &f,
            &slow,
            200.0,
            &opts,
        )
        .unwrap()
        .probability()
    };
    for p_par in [0.0, 0.2, -0.4] {
        let (a, b) = (at(p_par, 1), at(-p_par, 0));
        assert!((a / b - 1.0).abs() < 1e-10, "{p_par}: {a:e} vs {b:e}");
    }
}

#[test]
fn coulomb_correction_enhances_yield() {
    let f = field();
    let orb = OrbitalSpec::from_ip(0, 0, 0.5, 1.0, 1.0).unwrap();
    let p = Momentum::new(0.2, 0.1, 0.0);
    let slow = SlowFactors::default();
    let plain = direct_yield(&orb, 0.0, &p, &f, &slow, 200.0, &DirectOptions::default()).unwrap();
    let opts = DirectOptions {
        coulomb_correction: true,
        ..DirectOptions::default()
    };
    let corrected = direct_yield(&orb, 0.0, &p, &f, &slow, 200.0, &opts).unwrap();
    // the attractive core lowers the barrier
    assert!(corrected.probability() > plain.probability());
}

#[test]
fn deeper_binding_suppresses_direct_yield() {
    let f = field();
    let slow = SlowFactors::default();
    for p in [Momentum::new(0.0, 0.2, 0.0), Momentum::new(0.3, 0.5, 1.0)] {
        let prob = |ip: f64| {
            let orb = OrbitalSpec::from_ip(1, 0, ip, 1.0, 0.0).unwrap();
            direct_yield(&orb, 0.0, &p, &f, &slow, 200.0, &DirectOptions::default())
                .unwrap()
                .probability()
        };
        let probs: Vec<f64> = [0.4, 0.8, 1.6].map(prob).to_vec();
        assert!(probs.windows(2).all(|w| w[1] < w[0]), "{probs:?}");
    }
}
