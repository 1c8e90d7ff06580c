//! Linearly polarized laser fields evaluated at complex time, their
//! closed-form action integrals, and the complex ionization-time solver.
//!
//! Polarization is along z. `F(t) = -dA/dt` throughout.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::Momentum;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// An analytic vector potential with closed-form antiderivatives.
///
/// Implement this to plug a custom field into the pipeline. All methods
/// must be holomorphic in `t`, so that contour integrals are path
/// independent.
pub trait VectorPotential: Send + Sync {
    fn a(&self, t: Complex64) -> Complex64;
    /// Electric field `-dA/dt`.
    fn field(&self, t: Complex64) -> Complex64;
    /// An antiderivative of `A`.
    fn a_antideriv(&self, t: Complex64) -> Complex64;
    /// An antiderivative of `A^2`.
    fn a2_antideriv(&self, t: Complex64) -> Complex64;
    /// Newton seed for the ionization time of the given burst.
    fn seed(&self, _burst: i32, kappa_eff: f64) -> Complex64 {
        Complex64::new(0.0, kappa_eff.max(1e-3))
    }
}

/// Monochromatic field `A(t) = -(F0/ω) sin(ωt + φ)`, `F(t) = F0 cos(ωt + φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Monochromatic {
    pub f0: f64,
    pub omega: f64,
    pub phase: f64,
}

impl Monochromatic {
    fn arg(&self, t: Complex64) -> Complex64 {
        t * self.omega + self.phase
    }

    /// Real time of the field crest that opens burst `k`.
    pub fn crest(&self, burst: i32) -> f64 {
        (burst as f64 * std::f64::consts::PI - self.phase) / self.omega
    }
}

impl VectorPotential for Monochromatic {
    fn a(&self, t: Complex64) -> Complex64 {
        -self.arg(t).sin() * (self.f0 / self.omega)
    }

    fn field(&self, t: Complex64) -> Complex64 {
        self.arg(t).cos() * self.f0
    }

    fn a_antideriv(&self, t: Complex64) -> Complex64 {
        self.arg(t).cos() * (self.f0 / (self.omega * self.omega))
    }

    fn a2_antideriv(&self, t: Complex64) -> Complex64 {
        let amp = self.f0 / self.omega;
        (t * 0.5 - (self.arg(t) * 2.0).sin() / (4.0 * self.omega)) * (amp * amp)
    }

    fn seed(&self, burst: i32, kappa_eff: f64) -> Complex64 {
        let im = (kappa_eff * self.omega / self.f0).asinh() / self.omega;
        Complex64::new(self.crest(burst), im)
    }
}

/// Laser field used by every amplitude routine.
#[derive(Clone)]
pub enum LaserField {
    Monochromatic(Monochromatic),
    UserAnalytic(Arc<dyn VectorPotential>),
}

impl fmt::Debug for LaserField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LaserField::Monochromatic(m) => f.debug_tuple("Monochromatic").field(m).finish(),
            LaserField::UserAnalytic(_) => f.write_str("UserAnalytic(..)"),
        }
    }
}

impl LaserField {
    pub fn monochromatic(f0: f64, omega: f64, phase: f64) -> Result<Self> {
        if !(f0 > 0.0) || !(omega > 0.0) || !phase.is_finite() {
            return Err(Error::Domain(format!(
                "field needs F0 > 0 and omega > 0 (got F0 = {f0}, omega = {omega}, phase = {phase})"
            )));
        }
        Ok(LaserField::Monochromatic(Monochromatic { f0, omega, phase }))
    }

    pub fn user(potential: Arc<dyn VectorPotential>) -> Self {
        LaserField::UserAnalytic(potential)
    }

    fn potential(&self) -> &dyn VectorPotential {
        match self {
            LaserField::Monochromatic(m) => m,
            LaserField::UserAnalytic(p) => p.as_ref(),
        }
    }

    pub fn a(&self, t: Complex64) -> Complex64 {
        self.potential().a(t)
    }

    pub fn field(&self, t: Complex64) -> Complex64 {
        self.potential().field(t)
    }

    pub fn a_antideriv(&self, t: Complex64) -> Complex64 {
        self.potential().a_antideriv(t)
    }

    pub fn a2_antideriv(&self, t: Complex64) -> Complex64 {
        self.potential().a2_antideriv(t)
    }

    /// `∫_{ta}^{tb} A dτ`.
    pub fn int_a(&self, ta: Complex64, tb: Complex64) -> Complex64 {
        self.a_antideriv(tb) - self.a_antideriv(ta)
    }

    /// `∫_{ta}^{tb} A² dτ`.
    pub fn int_a2(&self, ta: Complex64, tb: Complex64) -> Complex64 {
        self.a2_antideriv(tb) - self.a2_antideriv(ta)
    }

    pub fn seed(&self, burst: i32, kappa_eff: f64) -> Complex64 {
        self.potential().seed(burst, kappa_eff)
    }
}

/// Complex ionization time and the quantities derived from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleResult {
    pub t_s: Complex64,
    /// Tunnelling time `Im(t_s)`.
    pub tau_t: f64,
    /// `Re(t_s)`.
    pub t0: f64,
    pub kappa_eff: f64,
    /// `p_par + A(t_s)`.
    pub v_par_ts: Complex64,
    /// `S_V''(t_s) = v(t_s) F(t_s)`.
    pub s_v_pp: Complex64,
    /// `|g(t_s)|` at convergence.
    pub residual: f64,
}

const NEWTON_MAX_ITER: usize = 100;
const SADDLE_TOL: f64 = 1e-12;

fn newton(field: &LaserField, p: &Momentum, ipn: f64, seed: Complex64) -> Result<(Complex64, f64)> {
    let g = |t: Complex64| {
        let v = field.a(t) + p.p_par;
        v * v * 0.5 + 0.5 * p.p_perp * p.p_perp + ipn
    };
    let mut t = seed;
    let mut gt = g(t);
    for _ in 0..NEWTON_MAX_ITER {
        if gt.norm() <= SADDLE_TOL {
            // one polishing step, kept only if it does not degrade
            let v = field.a(t) + p.p_par;
            let dg = -v * field.field(t);
            if dg.norm() > 0.0 {
                let t_new = t - gt / dg;
                let g_new = g(t_new);
                if g_new.norm() <= gt.norm() {
                    return Ok((t_new, g_new.norm()));
                }
            }
            return Ok((t, gt.norm()));
        }
        let v = field.a(t) + p.p_par;
        let dg = -v * field.field(t);
        if dg.norm() == 0.0 || !dg.is_finite() {
            break;
        }
        t -= gt / dg;
        gt = g(t);
        if !gt.is_finite() {
            break;
        }
    }
    Err(Error::NoConvergence {
        iterations: NEWTON_MAX_ITER,
        residual: gt.norm(),
    })
}

/// Solves `½(p_par + A(t))² + ½p_perp² + Ipn = 0` for the root with
/// `Im t > 0` belonging to burst `burst`.
pub fn saddle_solve(field: &LaserField, p: &Momentum, ipn: f64, burst: i32) -> Result<SaddleResult> {
    if !(ipn > 0.0) {
        return Err(Error::Domain(format!(
            "ionization potential must be positive, got {ipn}"
        )));
    }
    let kappa_eff = (2.0 * ipn + p.p_perp * p.p_perp).sqrt();
    let seed = field.seed(burst, kappa_eff);

    let (t_s, residual) = match newton(field, p, ipn, seed) {
        Ok((t, r)) if t.im > 0.0 => (t, r),
        first => {
            let retry = newton(field, p, ipn, seed.conj());
            match retry {
                Ok((t, r)) if t.im > 0.0 => (t, r),
                Ok((t, _)) => return Err(Error::WrongBranch { im: t.im }),
                Err(e) => {
                    return Err(match first {
                        Ok((t, _)) => Error::WrongBranch { im: t.im },
                        Err(_) => e,
                    })
                }
            }
        }
    };

    let v_par_ts = field.a(t_s) + p.p_par;
    Ok(SaddleResult {
        t_s,
        tau_t: t_s.im,
        t0: t_s.re,
        kappa_eff,
        v_par_ts,
        s_v_pp: v_par_ts * field.field(t_s),
        residual,
    })
}

/// Parallel displacement `∫_{t_s}^{t2} (p_par + A(τ)) dτ`.
pub fn z_s(field: &LaserField, p_par: f64, t_s: Complex64, t2: Complex64) -> Complex64 {
    (t2 - t_s) * p_par + field.int_a(t_s, t2)
}

/// `∫_{ta}^{tb} (p + A(τ))² dτ`.
pub fn action_integral(field: &LaserField, p: &Momentum, ta: Complex64, tb: Complex64) -> Complex64 {
    (tb - ta) * p.norm_sqr() + field.int_a(ta, tb) * (2.0 * p.p_par) + field.int_a2(ta, tb)
}

/// `∫_{ta}^{tb} (p_par + A(τ))² dτ`, the parallel part of [`action_integral`].
pub fn parallel_action_integral(field: &LaserField, p_par: f64, ta: Complex64, tb: Complex64) -> Complex64 {
    (tb - ta) * (p_par * p_par) + field.int_a(ta, tb) * (2.0 * p_par) + field.int_a2(ta, tb)
}

/// Volkov phase `-(i/2) ∫_{ta}^{tb} (p + A(τ))² dτ`.
pub fn volkov_phase(field: &LaserField, p: &Momentum, ta: Complex64, tb: Complex64) -> Complex64 {
    -I * 0.5 * action_integral(field, p, ta, tb)
}

/// Complex 3-vector; squares are bilinear, without conjugation.
pub type CVec3 = [Complex64; 3];

fn dot(a: &CVec3, b: &CVec3) -> Complex64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn sub(a: &CVec3, b: &CVec3) -> CVec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Promotes a real vector to a complex one.
pub fn lift(v: &[f64; 3]) -> CVec3 {
    v.map(|x| Complex64::new(x, 0.0))
}

/// Stationary momentum `k_s(r) = (r - ẑ∫A)/(t2 - t_s)`.
pub fn stationary_momentum(field: &LaserField, r: &CVec3, t_s: Complex64, t2: Complex64) -> Result<CVec3> {
    let delta = t2 - t_s;
    if delta.norm() == 0.0 {
        return Err(Error::DegenerateInterval);
    }
    let ia = field.int_a(t_s, t2);
    let mut k = *r;
    k[2] -= ia;
    Ok(k.map(|c| c / delta))
}

/// Stationary position `r_s(p) = p (t2 - t_s) + ẑ∫A`.
pub fn stationary_position(field: &LaserField, p: &CVec3, t_s: Complex64, t2: Complex64) -> CVec3 {
    let delta = t2 - t_s;
    let mut r = p.map(|c| c * delta);
    r[2] += field.int_a(t_s, t2);
    r
}

fn vector_action(field: &LaserField, k: &CVec3, ta: Complex64, tb: Complex64) -> Complex64 {
    (tb - ta) * dot(k, k) + field.int_a(ta, tb) * (k[2] * 2.0) + field.int_a2(ta, tb)
}

/// Absolute residual of the completing-the-square identity
///
/// `i(k-p)·r - (i/2)∫(k+A)² = -(i/2)Δ(k-k_s)² + (i/2)(r-r_s)²/Δ - (i/2)∫(p+A)²`
///
/// with `Δ = t2 - t_s` and all integrals from `t_s` to `t2`.
pub fn gaussian_identity_check(
    field: &LaserField,
    p: &[f64; 3],
    k: &[f64; 3],
    r: &[f64; 3],
    t_s: Complex64,
    t2: Complex64,
) -> Result<f64> {
    gaussian_identity_residual(field, &lift(p), &lift(k), &lift(r), t_s, t2)
}

/// [`gaussian_identity_check`] for complex `p`, `k` and `r`, which lets the
/// stationary points themselves be substituted.
pub fn gaussian_identity_residual(
    field: &LaserField,
    p: &CVec3,
    k: &CVec3,
    r: &CVec3,
    t_s: Complex64,
    t2: Complex64,
) -> Result<f64> {
    let delta = t2 - t_s;
    let ks = stationary_momentum(field, r, t_s, t2)?;
    let rs = stationary_position(field, p, t_s, t2);

    let lhs = I * dot(&sub(k, p), r) - I * 0.5 * vector_action(field, k, t_s, t2);
    let dk = sub(k, &ks);
    let dr = sub(r, &rs);
    let rhs = -I * 0.5 * delta * dot(&dk, &dk) + I * 0.5 * dot(&dr, &dr) / delta
        - I * 0.5 * vector_action(field, p, t_s, t2);
    Ok((lhs - rhs).norm())
}
