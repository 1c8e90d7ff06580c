//! First-order (direct tunnelling) amplitude for hydrogenic orbitals.
//!
//! The orbital enters through its asymptotic form
//! `C κ^{3/2} e^{-κr}/(κr) (κr)^{Q/κ} Y_lm`, which after the saddle-point
//! treatment collapses to the structure factor
//! `R(p) = K₀/√(iS_V'') e^{imφ_p} (p_⊥/κ)^{|m|}`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{saddle_solve, volkov_phase, z_s, LaserField, SaddleResult};
use crate::quadrature::{periodic_trapezoid, GaussLegendreRule};
use crate::specfun::spherical_harmonic;
use crate::types::{factorial, i_pow, sign_pow, ComplexAmplitude, Momentum};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Hydrogenic Dyson orbital parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitalSpec {
    pub m: i32,
    pub l: u32,
    /// `κ = √(2 I_p,n)`.
    pub kappa: f64,
    /// Asymptotic normalization `C_κl`.
    pub c_kl: f64,
    /// Net ion charge.
    pub q: f64,
}

impl OrbitalSpec {
    pub fn new(l: u32, m: i32, kappa: f64, c_kl: f64, q: f64) -> Result<Self> {
        if m.unsigned_abs() > l {
            return Err(Error::Domain(format!(
                "|m| = {} exceeds l = {l}",
                m.unsigned_abs()
            )));
        }
        if !(kappa > 0.0) {
            return Err(Error::Domain(format!("kappa must be positive, got {kappa}")));
        }
        if !(q >= 0.0) || !c_kl.is_finite() {
            return Err(Error::Domain(format!(
                "need Q >= 0 and finite C (got Q = {q}, C = {c_kl})"
            )));
        }
        Ok(Self { m, l, kappa, c_kl, q })
    }

    /// Orbital whose `κ` is fixed by the channel's ionization potential.
    pub fn from_ip(l: u32, m: i32, ipn: f64, c_kl: f64, q: f64) -> Result<Self> {
        if !(ipn > 0.0) {
            return Err(Error::Domain(format!(
                "ionization potential must be positive, got {ipn}"
            )));
        }
        Self::new(l, m, (2.0 * ipn).sqrt(), c_kl, q)
    }

    pub fn ipn(&self) -> f64 {
        0.5 * self.kappa * self.kappa
    }

    pub fn abs_m(&self) -> u32 {
        self.m.unsigned_abs()
    }
}

pub type GroundAmplitude = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;
pub type StarkFactor = Arc<dyn Fn(Complex64, Complex64) -> Complex64 + Send + Sync>;

/// Slowly varying prefactors: the ground-state amplitude `a_g(t)` and the
/// Stark factor `b(t, t')`. Both default to the constant 1.
#[derive(Clone)]
pub struct SlowFactors {
    pub a_g: GroundAmplitude,
    pub b: StarkFactor,
}

impl Default for SlowFactors {
    fn default() -> Self {
        Self {
            a_g: Arc::new(|_| Complex64::new(1.0, 0.0)),
            b: Arc::new(|_, _| Complex64::new(1.0, 0.0)),
        }
    }
}

impl fmt::Debug for SlowFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SlowFactors(..)")
    }
}

/// `K₀ = C√κ (-1)^{l+m} i^{m+1}/(2^m m!) √[(2l+1)(l+m)!/(4π(l-m)!)]`.
///
/// Negative `m` uses `|m|` throughout plus an extra `(-1)^{|m|}`, which is
/// what `Y_{l,-m} = (-1)^m Y_lm*` produces in the angular integral.
pub fn k0_constant(orb: &OrbitalSpec) -> Complex64 {
    let am = orb.abs_m();
    let l = orb.l;
    let mag = orb.c_kl * orb.kappa.sqrt() / (2f64.powi(am as i32) * factorial(am))
        * ((2 * l + 1) as f64 * factorial(l + am) / (4.0 * PI * factorial(l - am))).sqrt();
    let mut sign = sign_pow((l + am) as i64);
    if orb.m < 0 {
        sign *= sign_pow(am as i64);
    }
    i_pow(am as i64 + 1) * (sign * mag)
}

/// `K₀/√(i S_V''(t_s))`, the parallel-momentum prefactor.
pub fn k_parallel(orb: &OrbitalSpec, saddle: &SaddleResult) -> Result<Complex64> {
    if saddle.s_v_pp.norm() == 0.0 {
        return Err(Error::ZeroCurvature);
    }
    Ok(k0_constant(orb) / (I * saddle.s_v_pp).sqrt())
}

/// Structure factor `R(p) = K₀/√(iS_V'') e^{imφ_p} (p_⊥/κ)^{|m|}`.
pub fn r_factor(orb: &OrbitalSpec, p: &Momentum, saddle: &SaddleResult) -> Result<Complex64> {
    let k = k_parallel(orb, saddle)?;
    let radial = (p.p_perp / orb.kappa).powi(orb.abs_m() as i32);
    Ok(k * Complex64::from_polar(radial, orb.m as f64 * p.phi_p))
}

/// Boundary-sphere integral that `R(p)` approximates, evaluated by
/// quadrature at finite radius `a`:
///
/// `C κ^{3/2} i a e^{-κa} / (2π √(iS_V'')) ∫dΩ e^{-i v(t_s) a cosθ - i p_⊥ a sinθ cos(φ-φ_p)} Y_lm(θ, φ)`.
///
/// The `(κa)^{±Q/κ}` factors of the orbital and of the boundary cancel and
/// are left out. The result tends to [`r_factor`] as `κa → ∞`.
pub fn r_factor_oracle(orb: &OrbitalSpec, p: &Momentum, saddle: &SaddleResult, a: f64) -> Result<Complex64> {
    if saddle.s_v_pp.norm() == 0.0 {
        return Err(Error::ZeroCurvature);
    }
    if !(a > 0.0) {
        return Err(Error::Domain(format!(
            "boundary radius must be positive, got {a}"
        )));
    }
    let kappa = orb.kappa;
    let v = saddle.v_par_ts;
    let rule = GaussLegendreRule::new(20);
    let panels = 48 + (4.0 * (kappa * a).sqrt()) as usize;

    // returns the integral and the integral of its modulus, the latter as
    // the scale for the doubling check when the integral itself vanishes
    let angular = |n_phi: usize| -> Result<(Complex64, f64)> {
        let h = PI / panels as f64;
        let mut total = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for k in 0..panels {
            let lo = k as f64 * h;
            for (theta, w) in rule.nodes_on(lo, lo + h) {
                let (st, ct) = theta.sin_cos();
                // e^{-κa} folded into the exponent to avoid overflow
                let radial = (-I * v * a * ct - kappa * a).exp();
                let mut abs_phi = 0.0;
                let mut err = None;
                let phi_part = periodic_trapezoid(n_phi, |phi| {
                    let phase = -p.p_perp * a * st * (phi - p.phi_p).cos();
                    match spherical_harmonic(orb.l, orb.m, theta, phi) {
                        Ok(y) => {
                            abs_phi += y.norm();
                            y * Complex64::from_polar(1.0, phase)
                        }
                        Err(e) => {
                            err = Some(e);
                            Complex64::new(0.0, 0.0)
                        }
                    }
                });
                if let Some(e) = err {
                    return Err(e);
                }
                total += radial * phi_part * (st * w);
                scale += radial.norm() * abs_phi * TAU / n_phi as f64 * st * w;
            }
        }
        Ok((total, scale))
    };

    let mut n_phi = 16 + 2 * (p.p_perp * a).ceil() as usize + 2 * orb.abs_m() as usize;
    let (mut prev, _) = angular(n_phi)?;
    let mut converged = None;
    while n_phi <= 8192 {
        n_phi *= 2;
        let (next, scale) = angular(n_phi)?;
        if (next - prev).norm() <= 1e-12 * next.norm().max(scale) {
            converged = Some(next);
            break;
        }
        prev = next;
    }
    let integral = converged.ok_or_else(|| {
        Error::QuadratureFailure(format!(
            "azimuthal trapezoid failed its doubling check at {n_phi} points"
        ))
    })?;

    let pref = I * orb.c_kl * kappa.powf(1.5) * a / (TAU * (I * saddle.s_v_pp).sqrt());
    Ok(pref * integral)
}

/// Evaluation options shared by the amplitude routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DirectOptions {
    /// Half-cycle of the field whose ionization burst is used.
    pub burst: i32,
    /// Multiply by the monopole Coulomb phase.
    pub coulomb_correction: bool,
    /// `+1`: no extra sign; `-1`: include the extra `(-1)^m`
    /// (`(-1)^{m+μ}` in the correlation amplitude).
    pub sign_toggle: i8,
}

impl Default for DirectOptions {
    fn default() -> Self {
        Self {
            burst: 0,
            coulomb_correction: false,
            sign_toggle: 1,
        }
    }
}

impl DirectOptions {
    pub(crate) fn sign_for(&self, m_total: i64) -> f64 {
        if self.sign_toggle < 0 {
            sign_pow(m_total)
        } else {
            1.0
        }
    }
}

/// Monopole Coulomb phase `exp(i Q ∫_{t_κ}^{T} dτ / r(τ))` along the
/// parallel trajectory `r(τ) = √(z(τ)²)`, `z(τ) = ∫_{t_s}^{τ}(p_∥ + A)`.
///
/// The lower limit `t_κ = t_s - i/κ²` sits where the trajectory has moved
/// `1/κ` from the origin; the path runs straight down to `Re t_s` and then
/// along the real axis.
pub fn coulomb_phase(
    orb: &OrbitalSpec,
    p: &Momentum,
    field: &LaserField,
    saddle: &SaddleResult,
    t_final: f64,
) -> Result<Complex64> {
    if orb.q == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let t_kappa = saddle.t_s - I / (orb.kappa * orb.kappa);
    let t0 = Complex64::new(saddle.t0, 0.0);
    let tf = Complex64::new(t_final, 0.0);
    let rule = GaussLegendreRule::new(20);
    let inv_r = |tau: Complex64| {
        let z = z_s(field, p.p_par, saddle.t_s, tau);
        1.0 / (z * z).sqrt()
    };
    let under = rule.integrate_segment_composite(t_kappa, t0, 32, inv_r);
    let panels = 32 + ((t_final - saddle.t0).abs() / 2.0) as usize;
    let real = rule.integrate_segment_composite(t0, tf, panels, inv_r);
    let phase = I * orb.q * (under + real);
    if !phase.is_finite() {
        return Err(Error::ZeroTrajectory { xi: 0.0 });
    }
    Ok(phase.exp())
}

/// First-order amplitude
/// `a_g(t_s) b(t_0,t_s) R(p) e^{-iE_n t_0} e^{-(i/2)∫_{t_s}^T(p+A)²} e^{iI_p,n t_s} W_C`.
pub fn direct_yield(
    orb: &OrbitalSpec,
    energy_n: f64,
    p: &Momentum,
    field: &LaserField,
    slow: &SlowFactors,
    t_final: f64,
    opts: &DirectOptions,
) -> Result<ComplexAmplitude> {
    let ipn = orb.ipn();
    let saddle = saddle_solve(field, p, ipn, opts.burst)?;
    direct_yield_at(orb, energy_n, p, field, slow, t_final, opts, &saddle)
}

/// [`direct_yield`] with a precomputed saddle point.
#[allow(clippy::too_many_arguments)]
pub fn direct_yield_at(
    orb: &OrbitalSpec,
    energy_n: f64,
    p: &Momentum,
    field: &LaserField,
    slow: &SlowFactors,
    t_final: f64,
    opts: &DirectOptions,
    saddle: &SaddleResult,
) -> Result<ComplexAmplitude> {
    let t_s = saddle.t_s;
    let t0 = Complex64::new(saddle.t0, 0.0);
    let r = r_factor(orb, p, saddle)?;
    let coulomb = if opts.coulomb_correction {
        coulomb_phase(orb, p, field, saddle, t_final)?
    } else {
        Complex64::new(1.0, 0.0)
    };
    let exponent = -I * energy_n * saddle.t0
        + volkov_phase(field, p, t_s, Complex64::new(t_final, 0.0))
        + I * orb.ipn() * t_s;
    let amp =
        (slow.a_g)(t_s) * (slow.b)(t0, t_s) * r * exponent.exp() * coulomb * opts.sign_for(orb.m as i64);
    Ok(ComplexAmplitude(amp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> LaserField {
        LaserField::monochromatic(0.05, 0.057, 0.0).unwrap()
    }

    #[test]
    fn k0_values() {
        let s = OrbitalSpec::new(0, 0, 1.0, 1.0, 0.0).unwrap();
        let k = k0_constant(&s);
        assert!((k - I / (4.0 * PI).sqrt()).norm() < 1e-15);

        let p = OrbitalSpec::new(1, 1, 1.0, 1.0, 0.0).unwrap();
        let k = k0_constant(&p);
        assert!((k - Complex64::new(-0.5 * (6.0 / (4.0 * PI)).sqrt(), 0.0)).norm() < 1e-15);

        let a = OrbitalSpec::new(1, 0, 1.0, 1.0, 0.0).unwrap();
        let b = OrbitalSpec::new(1, 0, 4.0, 2.0, 0.0).unwrap();
        assert!((k0_constant(&b) - k0_constant(&a) * 4.0).norm() < 1e-14);
    }

    #[test]
    fn orbital_validation() {
        assert!(OrbitalSpec::new(1, 2, 1.0, 1.0, 0.0).is_err());
        assert!(OrbitalSpec::new(1, 1, 0.0, 1.0, 0.0).is_err());
        assert!(OrbitalSpec::from_ip(0, 0, -0.5, 1.0, 1.0).is_err());
        let o = OrbitalSpec::from_ip(0, 0, 0.5, 1.0, 1.0).unwrap();
        assert!((o.kappa - 1.0).abs() < 1e-15);
    }

    #[test]
    fn r_factor_structure() {
        let f = field();
        let s0 = OrbitalSpec::new(0, 0, 1.0, 1.0, 0.0).unwrap();
        let sat = |p: &Momentum| saddle_solve(&f, p, 0.5, 0).unwrap();
        let p1 = Momentum::new(0.1, 0.2, 0.3);
        let p2 = Momentum::new(0.1, 0.2, 2.3);
        let sad = sat(&p1);
        assert_eq!(
            r_factor(&s0, &p1, &sad).unwrap(),
            r_factor(&s0, &p2, &sad).unwrap()
        );

        let s1 = OrbitalSpec::new(1, 1, 1.0, 1.0, 0.0).unwrap();
        let p0 = Momentum::new(0.1, 0.0, 0.3);
        assert_eq!(r_factor(&s1, &p0, &sat(&p0)).unwrap().norm(), 0.0);
        let a = r_factor(&s1, &p1, &sad).unwrap();
        let b = r_factor(&s1, &p1.with_phi(p1.phi_p + PI), &sad).unwrap();
        assert!((a + b).norm() < 1e-15 * a.norm().max(1.0));

        let mut flat = sad;
        flat.s_v_pp = Complex64::new(0.0, 0.0);
        assert_eq!(r_factor(&s1, &p1, &flat), Err(Error::ZeroCurvature));
    }

    #[test]
    fn oracle_vanishes_for_m1_on_axis() {
        let f = field();
        let orb = OrbitalSpec::new(1, 1, 1.0, 1.0, 0.0).unwrap();
        let p = Momentum::new(0.0, 0.0, 0.0);
        let sad = saddle_solve(&f, &p, 0.5, 0).unwrap();
        let v = r_factor_oracle(&orb, &p, &sad, 20.0).unwrap();
        let scale = k_parallel(&orb, &sad).unwrap().norm();
        assert!(v.norm() < 1e-12 * scale);
    }

    #[test]
    fn direct_damping_and_phase_covariance() {
        let f = field();
        let slow = SlowFactors::default();
        let opts = DirectOptions::default();
        let p = Momentum::new(0.05, 0.2, 0.4);
        let t_final = 300.0;
        let weak = OrbitalSpec::from_ip(1, 1, 0.5, 1.0, 0.0).unwrap();
        let strong = OrbitalSpec::from_ip(1, 1, 1.0, 1.0, 0.0).unwrap();
        let aw = direct_yield(&weak, 0.0, &p, &f, &slow, t_final, &opts).unwrap();
        let as_ = direct_yield(&strong, 0.0, &p, &f, &slow, t_final, &opts).unwrap();
        assert!(as_.probability() < aw.probability());

        let delta = 0.77;
        let rotated = direct_yield(
            &weak,
            0.0,
            &p.with_phi(p.phi_p + delta),
            &f,
            &slow,
            t_final,
            &opts,
        )
        .unwrap();
        let expected = aw.value() * Complex64::from_polar(1.0, delta);
        assert!((rotated.value() - expected).norm() <= 1e-14 * expected.norm());

        let axis = Momentum::new(0.05, 0.0, 0.4);
        assert_eq!(
            direct_yield(&weak, 0.0, &axis, &f, &slow, t_final, &opts)
                .unwrap()
                .probability(),
            0.0
        );
    }

    #[test]
    fn direct_factor_assembly() {
        let f = field();
        let orb = OrbitalSpec::from_ip(0, 0, 0.5, 1.3, 0.0).unwrap();
        let p = Momentum::new(0.0, 0.25, 0.0);
        let t_final = 250.0;
        let a = direct_yield(
            &orb,
            0.0,
            &p,
            &f,
            &SlowFactors::default(),
            t_final,
            &DirectOptions::default(),
        )
        .unwrap();
        let sad = saddle_solve(&f, &p, 0.5, 0).unwrap();
        // magnitudes of each factor evaluated independently
        let k = (k0_constant(&orb) / (I * sad.s_v_pp).sqrt()).norm();
        let damping = (-0.5 * sad.tau_t).exp();
        let transverse = (-0.5 * p.p_perp * p.p_perp * sad.tau_t).exp();
        let par = Momentum::new(p.p_par, 0.0, 0.0);
        let parallel = volkov_phase(&f, &par, sad.t_s, Complex64::new(t_final, 0.0))
            .exp()
            .norm();
        let expected = k * damping * transverse * parallel;
        assert!((a.value().norm() - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn coulomb_phase_is_unity_without_charge_and_finite_with_it() {
        let f = field();
        let p = Momentum::new(0.3, 0.1, 0.0);
        let neutral = OrbitalSpec::from_ip(0, 0, 0.5, 1.0, 0.0).unwrap();
        let sad = saddle_solve(&f, &p, 0.5, 0).unwrap();
        assert_eq!(
            coulomb_phase(&neutral, &p, &f, &sad, 200.0).unwrap(),
            Complex64::new(1.0, 0.0)
        );
        let ion = OrbitalSpec::from_ip(0, 0, 0.5, 1.0, 1.0).unwrap();
        let w = coulomb_phase(&ion, &p, &f, &sad, 200.0).unwrap();
        assert!(w.is_finite() && w.norm() > 0.0);
        let opts = DirectOptions {
            coulomb_correction: true,
            ..DirectOptions::default()
        };
        let a = direct_yield(&ion, 0.0, &p, &f, &SlowFactors::default(), 200.0, &opts).unwrap();
        assert!(a.value().is_finite());
    }

    #[test]
    fn sign_toggle_flips_odd_m() {
        let f = field();
        let orb = OrbitalSpec::from_ip(1, 1, 0.5, 1.0, 0.0).unwrap();
        let p = Momentum::new(0.0, 0.3, 0.0);
        let slow = SlowFactors::default();
        let a = direct_yield(&orb, 0.0, &p, &f, &slow, 200.0, &DirectOptions::default()).unwrap();
        let opts = DirectOptions {
            sign_toggle: -1,
            ..DirectOptions::default()
        };
        let b = direct_yield(&orb, 0.0, &p, &f, &slow, 200.0, &opts).unwrap();
        assert_eq!(a.value(), -b.value());
    }
}
