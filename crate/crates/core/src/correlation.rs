//! Second-order, correlation-driven amplitude.
//!
//! An electron tunnelling from channel `n` is kicked by a multipole
//! `Q_λμ Y_λμ / r^{λ+1}` of the ion while still under the barrier, leaving the
//! ion in channel `m`. The transverse integral over the interaction point
//! has a closed form in generalized Laguerre polynomials ([`int2_closed`]);
//! the remaining integral over the imaginary interaction time `ξ` is done
//! by Gauss–Legendre quadrature in [`a2_yield`].

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::direct::{k_parallel, OrbitalSpec, SlowFactors, StarkFactor};
use crate::error::{Error, Result};
use crate::field::{parallel_action_integral, saddle_solve, volkov_phase, z_s, LaserField, SaddleResult};
use crate::quadrature::{adaptive_gauss_legendre, AdaptiveOutcome, GaussLegendreRule};
use crate::specfun::{bessel_j, hyp1f1, laguerre_real};
use crate::types::{factorial, i_pow, int_pow, sign_pow, ComplexAmplitude, Momentum};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Half-sum quantities of a magnetic transfer `m → m + μ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AngularCombo {
    pub m: i32,
    pub mu: i32,
    /// `(|m| + |μ| - |m+μ|)/2`, the Laguerre degree (number of rings).
    pub sym_minus: u32,
    /// `(|m| + |μ| + |m+μ|)/2`.
    pub sym_plus: u32,
    /// `(|m+μ| + |μ| - |m|)/2`, the power of `ξ`.
    pub asym: u32,
}

impl AngularCombo {
    /// `|m + μ|`: order of the central zero and of the Laguerre parameter.
    pub fn power(&self) -> u32 {
        (self.m + self.mu).unsigned_abs()
    }
}

pub fn angular_combo(m: i32, mu: i32) -> AngularCombo {
    let (am, amu, amm) = (m.unsigned_abs(), mu.unsigned_abs(), (m + mu).unsigned_abs());
    let combo = AngularCombo {
        m,
        mu,
        sym_minus: (am + amu - amm) / 2,
        sym_plus: (am + amu + amm) / 2,
        asym: (amm + amu - am) / 2,
    };
    // case table: same signs add, opposite signs cancel down to the smaller
    debug_assert_eq!(
        combo.sym_minus,
        if m.signum() * mu.signum() >= 0 {
            0
        } else {
            am.min(amu)
        }
    );
    debug_assert_eq!(
        combo.asym,
        if m.signum() * mu.signum() >= 0 {
            amu
        } else {
            amu.saturating_sub(am)
        }
    );
    combo
}

/// Closed form of the transverse integral,
/// `2^N N! ξ^{asym+j} p_⊥^ν e^{-x} L_N^{(ν)}(x)` with `N = sym_minus + j`,
/// `ν = |m+μ|`, `x = ξ p_⊥²/2`.
pub fn int2_closed(combo: &AngularCombo, j: u32, xi: f64, p_perp: f64) -> f64 {
    let n = combo.sym_minus + j;
    let nu = combo.power();
    let x = 0.5 * xi * p_perp * p_perp;
    2f64.powi(n as i32)
        * factorial(n)
        * xi.powi((combo.asym + j) as i32)
        * p_perp.powi(nu as i32)
        * (-x).exp()
        * laguerre_real(n, nu, x)
}

/// The same integral before Kummer's transformation:
/// `2^N ξ^{asym+j} p_⊥^ν Γ(sym_plus+j+1)/Γ(ν+1) ₁F₁(sym_plus+j+1; ν+1; -x)`.
pub fn int2_hypergeometric(combo: &AngularCombo, j: u32, xi: f64, p_perp: f64) -> Result<f64> {
    let n = combo.sym_minus + j;
    let nu = combo.power();
    let x = 0.5 * xi * p_perp * p_perp;
    let a = (combo.sym_plus + j + 1) as f64;
    let f = hyp1f1(
        Complex64::new(a, 0.0),
        Complex64::new((nu + 1) as f64, 0.0),
        Complex64::new(-x, 0.0),
    )?;
    Ok(2f64.powi(n as i32)
        * xi.powi((combo.asym + j) as i32)
        * p_perp.powi(nu as i32)
        * factorial(combo.sym_plus + j)
        / factorial(nu)
        * f.re)
}

/// Transverse integral by direct quadrature,
/// `∫_0^∞ ρ^{|m|+|μ|+2j+1}/ξ^{|m|+1} e^{-ρ²/2ξ} J_ν(p_⊥ρ) dρ`,
/// with the value and `∫|integrand|`.
pub fn int2_oracle_detailed(combo: &AngularCombo, j: u32, xi: f64, p_perp: f64) -> Result<AdaptiveOutcome> {
    if !(xi > 0.0) {
        return Err(Error::Domain(format!("xi must be positive, got {xi}")));
    }
    let am = combo.m.unsigned_abs();
    let amu = combo.mu.unsigned_abs();
    let k = am + amu + 2 * j + 1;
    let nu = combo.power();
    let rho_max = (2.0 * xi).sqrt() * (8 + am + amu + 2 * j) as f64;
    let norm = xi.powi(am as i32 + 1);

    // |J| <= 1: the tail is at most ∫_R^∞ ρ^k e^{-ρ²/2ξ} dρ / ξ^{|m|+1}
    //   = (2ξ)^{(k+1)/2}/2 Γ((k+1)/2, R²/2ξ) / ξ^{|m|+1}
    let s = 0.5 * (k + 1) as f64;
    let x = rho_max * rho_max / (2.0 * xi);
    let gamma_tail = x.powf(s - 1.0) * (-x).exp() / (1.0 - (s - 1.0) / x);
    let bound = 0.5 * (2.0 * xi).powf(s) * gamma_tail / norm;

    let out = adaptive_gauss_legendre(
        |rho| rho.powi(k as i32) / norm * (-rho * rho / (2.0 * xi)).exp() * bessel_j(nu, p_perp * rho),
        0.0,
        rho_max,
        1e-12,
        1e-300,
        100_000,
    )?;
    if bound >= 1e-13 * out.abs_integral.max(1.0) {
        return Err(Error::TailBoundExceeded { bound });
    }
    Ok(out)
}

pub fn int2_oracle(combo: &AngularCombo, j: u32, xi: f64, p_perp: f64) -> Result<f64> {
    int2_oracle_detailed(combo, j, xi, p_perp).map(|o| o.value)
}

/// `C_{mμλ} = [i^μ i^{|m|+|μ|+|m+μ|} / (-1)^{λ+m}] [2^{sym_minus} sym_minus! / (2^{|μ|}|μ|!)]
/// √[(2λ+1)(λ+|μ|)!/(4π(λ-|μ|)!)]`.
pub fn c_constant(combo: &AngularCombo, lambda: u32) -> Result<Complex64> {
    let amu = combo.mu.unsigned_abs();
    if amu > lambda {
        return Err(Error::Domain(format!("|mu| = {amu} exceeds lambda = {lambda}")));
    }
    let am = combo.m.unsigned_abs();
    let phase =
        i_pow(combo.mu as i64 + (am + amu + combo.power()) as i64) * sign_pow(lambda as i64 + combo.m as i64);
    let ratio = 2f64.powi(combo.sym_minus as i32) * factorial(combo.sym_minus)
        / (2f64.powi(amu as i32) * factorial(amu));
    let norm =
        ((2 * lambda + 1) as f64 * factorial(lambda + amu) / (4.0 * PI * factorial(lambda - amu))).sqrt();
    Ok(phase * (ratio * norm))
}

pub type MultipoleMoment = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// One multipole `Q_λμ(ξ) Y_λμ / r^{λ+1}` of the ion's correlation field.
#[derive(Clone)]
pub struct MultipoleTerm {
    pub lambda: u32,
    pub mu: i32,
    pub q: MultipoleMoment,
}

impl fmt::Debug for MultipoleTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultipoleTerm")
            .field("lambda", &self.lambda)
            .field("mu", &self.mu)
            .finish_non_exhaustive()
    }
}

impl MultipoleTerm {
    pub fn new(lambda: u32, mu: i32, q: MultipoleMoment) -> Result<Self> {
        if mu.unsigned_abs() > lambda {
            return Err(Error::Domain(format!(
                "|mu| = {} exceeds lambda = {lambda}",
                mu.unsigned_abs()
            )));
        }
        Ok(Self { lambda, mu, q })
    }

    pub fn constant(lambda: u32, mu: i32, q: Complex64) -> Result<Self> {
        Self::new(lambda, mu, Arc::new(move |_| q))
    }
}

/// A transition from tunnelling channel `n` to final ionic channel `m`.
#[derive(Clone)]
pub struct ChannelTransition {
    pub e_m: f64,
    pub e_n: f64,
    pub ipn: f64,
    /// `E_m - E_n`.
    pub delta_ip: f64,
    pub multipoles: Vec<MultipoleTerm>,
    pub orbital: OrbitalSpec,
    /// `a_g` and the channel-`n` Stark factor `b_n(t'', t_s)`.
    pub slow: SlowFactors,
    /// Channel-`m` Stark factor `b_m(t_0, t'')`.
    pub b_m: StarkFactor,
}

impl fmt::Debug for ChannelTransition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChannelTransition")
            .field("e_m", &self.e_m)
            .field("e_n", &self.e_n)
            .field("ipn", &self.ipn)
            .field("delta_ip", &self.delta_ip)
            .field("multipoles", &self.multipoles)
            .field("orbital", &self.orbital)
            .finish_non_exhaustive()
    }
}

impl ChannelTransition {
    pub fn new(
        e_m: f64,
        e_n: f64,
        ipn: f64,
        orbital: OrbitalSpec,
        multipoles: Vec<MultipoleTerm>,
    ) -> Result<Self> {
        let delta_ip = e_m - e_n;
        if !(delta_ip >= 0.0) {
            return Err(Error::InconsistentChannel(format!(
                "E_m - E_n = {delta_ip} is negative; only upward transitions are supported"
            )));
        }
        if !(ipn > 0.0) {
            return Err(Error::InconsistentChannel(format!(
                "I_p,n = {ipn} must be positive"
            )));
        }
        if (orbital.ipn() - ipn).abs() > 1e-12 * ipn {
            return Err(Error::InconsistentChannel(format!(
                "orbital kappa^2/2 = {} does not match I_p,n = {ipn}",
                orbital.ipn()
            )));
        }
        Ok(Self {
            e_m,
            e_n,
            ipn,
            delta_ip,
            multipoles,
            orbital,
            slow: SlowFactors::default(),
            b_m: SlowFactors::default().b,
        })
    }
}

/// Which way the channel-energy gap damps the `ξ` integrand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DampingConvention {
    /// `e^{-ΔI_p(τ_T - ξ)}`: interactions early under the barrier are suppressed.
    #[default]
    Published,
    /// `e^{-ΔI_p ξ}`.
    CurrentWork,
}

impl DampingConvention {
    pub fn factor(&self, delta_ip: f64, tau_t: f64, xi: f64) -> f64 {
        match self {
            DampingConvention::Published => (-delta_ip * (tau_t - xi)).exp(),
            DampingConvention::CurrentWork => (-delta_ip * xi).exp(),
        }
    }
}

/// Options for the correlation amplitude.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationOptions {
    pub burst: i32,
    /// Highest small-angle order kept.
    pub j_max: u32,
    /// `D_1, D_2, ...`; `D_0 = 1` is implied.
    pub d_table: Vec<f64>,
    pub sign_toggle: i8,
    pub damping: DampingConvention,
    /// Radius below which the interaction is excluded from the `ξ`
    /// integral; `None` means the tunnel entrance `1/κ`.
    pub inner_radius: Option<f64>,
}

impl Default for CorrelationOptions {
    fn default() -> Self {
        Self {
            burst: 0,
            j_max: 0,
            d_table: Vec::new(),
            sign_toggle: 1,
            damping: DampingConvention::Published,
            inner_radius: None,
        }
    }
}

impl CorrelationOptions {
    pub fn d_coefficient(&self, j: u32) -> Result<f64> {
        if j == 0 {
            return Ok(1.0);
        }
        self.d_table.get(j as usize - 1).copied().ok_or_else(|| {
            Error::Config(format!(
                "D_{j} requested but the D table has {} entries",
                self.d_table.len()
            ))
        })
    }
}

/// `(-z_s)^{-power} K₀/√(i v(t_s) F(t_s)) e^{-(i/2)∫_{t_s}^{t2}(p_∥+A)²}`.
pub fn parallel_saddle_factor(
    orb: &OrbitalSpec,
    p_par: f64,
    t2: Complex64,
    field: &LaserField,
    saddle: &SaddleResult,
    power: u32,
) -> Result<Complex64> {
    let z = z_s(field, p_par, saddle.t_s, t2);
    if z.norm() == 0.0 {
        return Err(Error::ZeroTrajectory {
            xi: (I * (t2 - saddle.t_s)).re,
        });
    }
    let k = k_parallel(orb, saddle)?;
    let phase = (-I * 0.5 * parallel_action_integral(field, p_par, saddle.t_s, t2)).exp();
    Ok(k * phase / int_pow(-z, power))
}

/// Interaction integral at imaginary time `ξ` (so `t'' = t_s - iξ`) for a
/// single multipole.
#[allow(clippy::too_many_arguments)]
pub fn int1(
    p: &Momentum,
    xi: f64,
    trans: &ChannelTransition,
    term: &MultipoleTerm,
    field: &LaserField,
    saddle: &SaddleResult,
    opts: &CorrelationOptions,
) -> Result<Complex64> {
    let orb = &trans.orbital;
    let combo = angular_combo(orb.m, term.mu);
    let c = c_constant(&combo, term.lambda)?;
    let t2 = saddle.t_s - I * xi;
    let nu = combo.power();
    let x = 0.5 * xi * p.p_perp * p.p_perp;

    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..=opts.j_max {
        let d = opts.d_coefficient(j)?;
        let power = term.lambda + combo.mu.unsigned_abs() + 2 * j + 1;
        let psf = parallel_saddle_factor(orb, p.p_par, t2, field, saddle, power)?;
        sum += psf * d * xi.powi((combo.asym + j) as i32) * laguerre_real(combo.sym_minus + j, nu, x);
    }
    let pref = c * (term.q)(xi) / orb.kappa.powi(orb.abs_m() as i32)
        * Complex64::from_polar(
            p.p_perp.powi(nu as i32) * (-x).exp(),
            (combo.m + combo.mu) as f64 * p.phi_p,
        );
    Ok(pref * sum)
}

/// Lower end of the `ξ` contour: the imaginary time at which the parallel
/// trajectory has moved a distance `r_in` from the origin.
pub fn xi_inner(p_par: f64, field: &LaserField, saddle: &SaddleResult, r_in: f64) -> Result<f64> {
    let dist = |xi: f64| z_s(field, p_par, saddle.t_s, saddle.t_s - I * xi).norm();
    let (mut lo, mut hi) = (0.0, saddle.tau_t);
    if dist(hi) < r_in {
        return Err(Error::Domain(format!(
            "trajectory never leaves the inner radius {r_in} under the barrier"
        )));
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if dist(mid) < r_in {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

#[allow(clippy::too_many_arguments)]
fn xi_integral(
    p: &Momentum,
    trans: &ChannelTransition,
    term: &MultipoleTerm,
    field: &LaserField,
    saddle: &SaddleResult,
    opts: &CorrelationOptions,
    xi_lo: f64,
    nodes: usize,
) -> Result<Complex64> {
    let combo = angular_combo(trans.orbital.m, term.mu);
    let nu = combo.power();
    let tau = saddle.tau_t;
    let t0 = Complex64::new(saddle.t0, 0.0);
    let rule = GaussLegendreRule::new(nodes);
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..=opts.j_max {
        let d = opts.d_coefficient(j)?;
        let power = term.lambda + combo.mu.unsigned_abs() + 2 * j + 1;
        let mut err = None;
        // ξ = e^u straightens the algebraic growth towards small ξ
        let val = rule.integrate_complex(xi_lo.ln(), tau.ln(), |u| {
            let xi = u.exp();
            let t2 = saddle.t_s - I * xi;
            let z = z_s(field, p.p_par, saddle.t_s, t2);
            if z.norm() == 0.0 {
                err = Some(Error::ZeroTrajectory { xi });
                return Complex64::new(0.0, 0.0);
            }
            let slow = (trans.b_m)(t0, t2) * (trans.slow.b)(t2, saddle.t_s);
            slow * (term.q)(xi) / int_pow(-z, power)
                * (xi.powi((combo.asym + j) as i32)
                    * laguerre_real(combo.sym_minus + j, nu, 0.5 * xi * p.p_perp * p.p_perp)
                    * opts.damping.factor(trans.delta_ip, tau, xi)
                    * xi)
        });
        if let Some(e) = err {
            return Err(e);
        }
        total += val * d;
    }
    Ok(total)
}

/// Correlation-driven amplitude summed over the multipoles of one channel
/// transition, with `quad_points` Gauss–Legendre nodes on the `ξ` contour.
///
/// The result is checked against a run with twice the nodes and rejected
/// with [`Error::QuadratureUnconverged`] if the two differ by more than
/// `1e-8` relative.
pub fn a2_yield(
    p: &Momentum,
    trans: &ChannelTransition,
    field: &LaserField,
    t_final: f64,
    quad_points: usize,
    opts: &CorrelationOptions,
) -> Result<ComplexAmplitude> {
    let saddle = saddle_solve(field, p, trans.ipn, opts.burst)?;
    a2_yield_at(p, trans, field, t_final, quad_points, opts, &saddle)
}

/// [`a2_yield`] with a precomputed saddle point.
pub fn a2_yield_at(
    p: &Momentum,
    trans: &ChannelTransition,
    field: &LaserField,
    t_final: f64,
    quad_points: usize,
    opts: &CorrelationOptions,
    saddle: &SaddleResult,
) -> Result<ComplexAmplitude> {
    if quad_points < 16 {
        return Err(Error::Domain(format!(
            "quad_points must be at least 16, got {quad_points}"
        )));
    }
    let (coarse, fine) = a2_pair(p, trans, field, t_final, quad_points, opts, saddle)?;
    let change = (fine - coarse).norm();
    if change > 1e-8 * fine.norm() {
        return Err(Error::QuadratureUnconverged {
            rel_change: change / fine.norm(),
        });
    }
    Ok(ComplexAmplitude(coarse))
}

/// The amplitude at `quad_points` and `2 quad_points` nodes.
pub fn a2_pair(
    p: &Momentum,
    trans: &ChannelTransition,
    field: &LaserField,
    t_final: f64,
    quad_points: usize,
    opts: &CorrelationOptions,
    saddle: &SaddleResult,
) -> Result<(Complex64, Complex64)> {
    let orb = &trans.orbital;
    let r_in = opts.inner_radius.unwrap_or(1.0 / orb.kappa);
    let xi_lo = xi_inner(p.p_par, field, saddle, r_in)?;
    let k = k_parallel(orb, saddle)?;

    let outer = -I
        * (trans.slow.a_g)(saddle.t_s)
        * (volkov_phase(field, p, saddle.t_s, Complex64::new(t_final, 0.0)) - I * trans.e_n * saddle.t0
            + I * trans.ipn * saddle.t_s)
            .exp();

    let mut coarse = Complex64::new(0.0, 0.0);
    let mut fine = Complex64::new(0.0, 0.0);
    for term in &trans.multipoles {
        let combo = angular_combo(orb.m, term.mu);
        let c = c_constant(&combo, term.lambda)?;
        let pref = c / orb.kappa.powi(orb.abs_m() as i32)
            * k
            * Complex64::from_polar(
                p.p_perp.powi(combo.power() as i32),
                (combo.m + combo.mu) as f64 * p.phi_p,
            )
            * (-I)
            * opts.sign_for(combo.m as i64 + combo.mu as i64);
        coarse += pref * xi_integral(p, trans, term, field, saddle, opts, xi_lo, quad_points)?;
        fine += pref * xi_integral(p, trans, term, field, saddle, opts, xi_lo, 2 * quad_points)?;
    }
    Ok((outer * coarse, outer * fine))
}

impl CorrelationOptions {
    fn sign_for(&self, m_total: i64) -> f64 {
        if self.sign_toggle < 0 {
            sign_pow(m_total)
        } else {
            1.0
        }
    }
}

/// Location of the maximum of `ξ^s e^{-ΔI_p ξ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiPeak {
    pub xi: f64,
    /// The damping form the maximizer refers to. Under the default
    /// `e^{-ΔI_p(τ_T-ξ)}` the weight grows monotonically and has no
    /// interior maximum.
    pub convention: DampingConvention,
}

pub fn xi_peak(power_s: f64, delta_ip: f64) -> XiPeak {
    XiPeak {
        xi: power_s / delta_ip,
        convention: DampingConvention::CurrentWork,
    }
}

/// `∫_0^∞ L_n^{(α)}(ξ) e^{-ξ} dξ` by composite Gauss–Legendre on `[0, 80]`.
pub fn cancellation_probe(n: u32, alpha: u32) -> f64 {
    let rule = GaussLegendreRule::new(20);
    rule.integrate_composite(0.0, 80.0, 16, |xi| {
        Complex64::new(laguerre_real(n, alpha, xi) * (-xi).exp(), 0.0)
    })
    .re
}

/// The `ξ`-integrated radial factor
/// `∫_0^{τ_T} ξ^{asym} L_{sym_minus}^{(ν)}(ξp_⊥²/2) e^{-ΔI_p(τ_T-ξ)} dξ`.
pub fn crude_radial_factor(combo: &AngularCombo, tau_t: f64, p_perp: f64, delta_ip: f64) -> f64 {
    let rule = GaussLegendreRule::new(40);
    let nu = combo.power();
    rule.integrate(0.0, tau_t, |xi| {
        xi.powi(combo.asym as i32)
            * laguerre_real(combo.sym_minus, nu, 0.5 * xi * p_perp * p_perp)
            * (-delta_ip * (tau_t - xi)).exp()
    })
}

/// `p_⊥^ν e^{-τ_T p_⊥²/2}` times [`crude_radial_factor`].
pub fn crude_distribution(combo: &AngularCombo, tau_t: f64, p_perp: f64, delta_ip: f64) -> f64 {
    p_perp.powi(combo.power() as i32)
        * (-0.5 * tau_t * p_perp * p_perp).exp()
        * crude_radial_factor(combo, tau_t, p_perp, delta_ip)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direct::k0_constant;
    use crate::field::LaserField;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn combo_examples() {
        let a = angular_combo(1, 1);
        assert_eq!((a.sym_minus, a.power()), (0, 2));
        let b = angular_combo(1, -1);
        assert_eq!((b.sym_minus, b.power()), (1, 0));
        let d = angular_combo(-5, 5);
        assert_eq!((d.sym_minus, d.power()), (5, 0));
    }

    #[test]
    fn int2_examples() {
        let z = angular_combo(0, 0);
        let v = int2_closed(&z, 0, 1.7, 0.4);
        assert!((v - (-0.5f64 * 1.7 * 0.16).exp()).abs() < 1e-15);
        assert!((int2_oracle(&z, 0, 1.7, 0.4).unwrap() - v).abs() < 1e-10);
        assert!((int2_oracle(&z, 0, 1.3, 0.0).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(int2_closed(&angular_combo(1, 1), 0, 1.0, 0.0), 0.0);

        // L_1^{(0)}(1) = 0, so the m=1, μ=-1 case vanishes exactly here
        let r = angular_combo(1, -1);
        let closed = int2_closed(&r, 0, 2.0, 1.0);
        let oracle = int2_oracle_detailed(&r, 0, 2.0, 1.0).unwrap();
        assert!(closed.abs() < 1e-15);
        assert!((closed - oracle.value).abs() < 1e-9 * oracle.abs_integral);
    }

    #[test]
    fn int2_hypergeometric_route() {
        for (m, mu) in [(0, 0), (1, 1), (2, -1), (-3, 2)] {
            let combo = angular_combo(m, mu);
            for j in 0..3 {
                let a = int2_closed(&combo, j, 1.0, 0.5);
                let b = int2_hypergeometric(&combo, j, 1.0, 0.5).unwrap();
                assert!(
                    (a - b).abs() <= 1e-12 * a.abs().max(1e-3),
                    "{m} {mu} {j}: {a} {b}"
                );
            }
        }
    }

    #[test]
    fn c_constant_examples() {
        let v = c_constant(&angular_combo(0, 0), 0).unwrap();
        assert!((v - c(1.0 / (4.0 * PI).sqrt())).norm() < 1e-15);
        let v = c_constant(&angular_combo(1, 1), 1).unwrap();
        assert!((v - I * 0.5 * (6.0 / (4.0 * PI)).sqrt()).norm() < 1e-15);
        assert!(c_constant(&angular_combo(0, 2), 1).is_err());
    }

    #[test]
    fn xi_peak_and_probe() {
        assert_eq!(xi_peak(2.0, 1.0).xi, 2.0);
        assert_eq!(xi_peak(0.0, 1.0).xi, 0.0);
        assert_eq!(xi_peak(3.0, 0.5).xi, 6.0);
        assert!(cancellation_probe(1, 0).abs() < 1e-12);
        assert!((cancellation_probe(0, 0) - 1.0).abs() < 1e-12);
        assert!(cancellation_probe(2, 0).abs() < 1e-12);
    }

    #[test]
    fn crude_panels() {
        let e = std::f64::consts::E;
        let ring = angular_combo(1, -1);
        for p in [0.0, 0.5, 1.0, 2.0] {
            let exact = (1.0 - 1.0 / e) - p * p / (2.0 * e);
            assert!((crude_radial_factor(&ring, 1.0, p, 1.0) - exact).abs() < 1e-14);
        }
        let zero = angular_combo(1, 1);
        assert_eq!(crude_distribution(&zero, 1.0, 0.0, 1.0), 0.0);
        let p: f64 = 0.3;
        let expected = p * p * (-0.5 * p * p).exp() / e;
        assert!((crude_distribution(&zero, 1.0, p, 1.0) - expected).abs() < 1e-15);
    }

    fn channel(m: i32, mu: i32, lambda: u32) -> (LaserField, ChannelTransition) {
        let field = LaserField::monochromatic(0.05, 0.057, 0.0).unwrap();
        let orb = OrbitalSpec::from_ip(1, m, 0.5064, 1.0, 1.0).unwrap();
        let term = MultipoleTerm::constant(lambda, mu, Complex64::new(0.8, 0.1)).unwrap();
        let tr = ChannelTransition::new(0.158, 0.0, 0.5064, orb, vec![term]).unwrap();
        (field, tr)
    }

    #[test]
    fn channel_validation() {
        let orb = OrbitalSpec::from_ip(1, 1, 0.5, 1.0, 1.0).unwrap();
        assert!(ChannelTransition::new(0.0, 0.1, 0.5, orb, vec![]).is_err());
        assert!(ChannelTransition::new(0.1, 0.0, 0.6, orb, vec![]).is_err());
        assert!(MultipoleTerm::constant(1, 2, c(1.0)).is_err());
    }

    #[test]
    fn int1_vanishes_without_moment_and_on_axis() {
        let (field, tr) = channel(1, 1, 1);
        let p = Momentum::new(0.0, 0.0, 0.0);
        let sad = saddle_solve(&field, &p, tr.ipn, 0).unwrap();
        let opts = CorrelationOptions::default();
        let v = int1(&p, 0.5 * sad.tau_t, &tr, &tr.multipoles[0], &field, &sad, &opts).unwrap();
        assert_eq!(v.norm(), 0.0);
        let zero_q = MultipoleTerm::constant(1, 1, c(0.0)).unwrap();
        let p = Momentum::new(0.0, 0.2, 0.0);
        let sad = saddle_solve(&field, &p, tr.ipn, 0).unwrap();
        let v = int1(&p, 0.5 * sad.tau_t, &tr, &zero_q, &field, &sad, &opts).unwrap();
        assert_eq!(v.norm(), 0.0);
    }

    #[test]
    fn int1_factor_decomposition() {
        let (field, tr) = channel(1, -1, 2);
        let p = Momentum::new(0.02, 0.3, 0.4);
        let sad = saddle_solve(&field, &p, tr.ipn, 0).unwrap();
        let xi = 0.5 * sad.tau_t;
        let opts = CorrelationOptions::default();
        let got = int1(&p, xi, &tr, &tr.multipoles[0], &field, &sad, &opts).unwrap();

        let combo = angular_combo(1, -1);
        let t2 = sad.t_s - I * xi;
        let z = z_s(&field, p.p_par, sad.t_s, t2);
        let k = k0_constant(&tr.orbital) / (I * sad.s_v_pp).sqrt();
        let volkov = volkov_phase(&field, &p, sad.t_s, t2).exp();
        // the transverse integral without its 2^N N! and Gaussian (those sit in C and the Volkov factor)
        let x = 0.5 * xi * p.p_perp * p.p_perp;
        let transverse = int2_closed(&combo, 0, xi, p.p_perp)
            / (2f64.powi(combo.sym_minus as i32) * factorial(combo.sym_minus))
            / (-x).exp();
        let expected = c_constant(&combo, 2).unwrap() * Complex64::new(0.8, 0.1) / tr.orbital.kappa
            * k
            * volkov
            * transverse
            / (-z).powi(2 + 1 + 1);
        assert!(
            (got - expected).norm() <= 1e-12 * expected.norm(),
            "{got} {expected}"
        );
    }

    #[test]
    fn parallel_factor_scaling() {
        let (field, tr) = channel(1, 1, 1);
        let p = Momentum::new(0.0, 0.1, 0.0);
        let sad = saddle_solve(&field, &p, tr.ipn, 0).unwrap();
        let t2 = sad.t_s - I * 3.0;
        let z = z_s(&field, 0.0, sad.t_s, t2);
        let f1 = parallel_saddle_factor(&tr.orbital, 0.0, t2, &field, &sad, 1).unwrap();
        let f3 = parallel_saddle_factor(&tr.orbital, 0.0, t2, &field, &sad, 3).unwrap();
        assert!((f3 - f1 / (z * z)).norm() <= 1e-14 * f1.norm());
        assert!(matches!(
            parallel_saddle_factor(&tr.orbital, 0.0, sad.t_s, &field, &sad, 1),
            Err(Error::ZeroTrajectory { .. })
        ));
    }

    #[test]
    fn a2_covariance_linearity_and_convergence() {
        let (field, tr) = channel(1, 1, 1);
        let opts = CorrelationOptions::default();
        let p = Momentum::new(0.01, 0.25, 0.3);
        let a = a2_yield(&p, &tr, &field, 200.0, 48, &opts).unwrap();
        assert!(a.probability() > 0.0);
        let delta = 1.1;
        let b = a2_yield(&p.with_phi(p.phi_p + delta), &tr, &field, 200.0, 48, &opts).unwrap();
        let expected = a.value() * Complex64::from_polar(1.0, 2.0 * delta);
        assert!((b.value() - expected).norm() <= 1e-13 * expected.norm());

        let mut doubled = tr.clone();
        doubled.multipoles.push(tr.multipoles[0].clone());
        let d = a2_yield(&p, &doubled, &field, 200.0, 48, &opts).unwrap();
        assert!((d.value() - a.value() * 2.0).norm() <= 1e-13 * a.value().norm());

        let mut empty = tr.clone();
        empty.multipoles.clear();
        assert_eq!(
            a2_yield(&p, &empty, &field, 200.0, 48, &opts)
                .unwrap()
                .probability(),
            0.0
        );
        assert!(a2_yield(&p, &tr, &field, 200.0, 8, &opts).is_err());
    }
}
