//! Special functions used by the amplitude formulas: Pochhammer symbols,
//! generalized Laguerre polynomials, Kummer's confluent hypergeometric
//! function, integer-order Bessel functions and spherical harmonics.
//!
//! Several functions come in pairs whose agreement is checked in tests:
//! the Kummer series against its transformed form, the integer-offset case
//! of the series against the differential-operator polynomial, and the
//! Laguerre recurrence against the terminating series.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::types::{factorial, sign_pow};

/// Truncation control for power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub rel_tol: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            max_terms: 200,
            rel_tol: 1e-14,
        }
    }
}

impl SeriesControl {
    pub fn new(max_terms: usize, rel_tol: f64) -> Result<Self> {
        if max_terms == 0 || !(rel_tol > 0.0) {
            return Err(Error::Domain(format!(
                "series control needs max_terms >= 1 and rel_tol > 0 (got {max_terms}, {rel_tol})"
            )));
        }
        Ok(Self { max_terms, rel_tol })
    }
}

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`.
pub fn pochhammer(x: Complex64, n: u32) -> Complex64 {
    (0..n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (x + k as f64))
}

/// Generalized Laguerre polynomial `L_n^(alpha)(x)` by upward three-term
/// recurrence.
pub fn laguerre(n: u32, alpha: u32, x: Complex64) -> Complex64 {
    let alpha = alpha as f64;
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let mut cur = -x + (1.0 + alpha);
    for k in 1..n {
        let k = k as f64;
        let next = ((-x + (2.0 * k + 1.0 + alpha)) * cur - prev * (k + alpha)) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Real-argument convenience wrapper around [`laguerre`].
pub fn laguerre_real(n: u32, alpha: u32, x: f64) -> f64 {
    laguerre(n, alpha, Complex64::new(x, 0.0)).re
}

fn as_nonpositive_integer(z: Complex64) -> Option<u32> {
    if z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0 && z.re > -1e9 {
        Some((-z.re) as u32)
    } else {
        None
    }
}

/// Kummer series for `1F1(a; b; z)` together with the number of terms
/// summed (counting the leading 1).
pub fn hyp1f1_with_terms(
    a: Complex64,
    b: Complex64,
    z: Complex64,
    ctl: &SeriesControl,
) -> Result<(Complex64, usize)> {
    let a_poly = as_nonpositive_integer(a);
    if let Some(nb) = as_nonpositive_integer(b) {
        match a_poly {
            Some(na) if na < nb => {}
            _ => return Err(Error::PoleAtB { b: b.re }),
        }
    }

    if a.im == 0.0 && b.im == 0.0 {
        return series_real_params(a.re, b.re, z, a_poly, ctl);
    }

    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut terms = 1usize;

    if let Some(n) = a_poly {
        // polynomial: exactly n+1 terms
        for k in 0..n {
            let kf = k as f64;
            term *= (a + kf) / (b + kf) * z / (kf + 1.0);
            sum += term;
            terms += 1;
        }
        return Ok((sum, terms));
    }

    for k in 0..ctl.max_terms.saturating_sub(1) {
        let kf = k as f64;
        term *= (a + kf) / (b + kf) * z / (kf + 1.0);
        sum += term;
        terms += 1;
        let next_ratio = ((a + kf + 1.0) / (b + kf + 1.0) * z / (kf + 2.0)).norm();
        if term.norm() <= ctl.rel_tol * sum.norm() && next_ratio < 0.5 {
            return Ok((sum, terms));
        }
    }
    Err(Error::NonConvergent {
        max_terms: ctl.max_terms,
        rel_tol: ctl.rel_tol,
    })
}

/// Real-parameter series carried in double-double arithmetic. For
/// `Re z < 0` the terms grow like `e^{|z|}` before decaying while the sum
/// is of order `e^{Re z}`, so plain `f64` summation loses digits to
/// cancellation.
fn series_real_params(
    a: f64,
    b: f64,
    z: Complex64,
    poly: Option<u32>,
    ctl: &SeriesControl,
) -> Result<(Complex64, usize)> {
    let (zr, zi) = (Dd::from(z.re), Dd::from(z.im));
    let step = |(tr, ti): (Dd, Dd), k: f64| {
        let ratio = Dd::sum(a, k).div(Dd::sum(b, k).mul(Dd::from(k + 1.0)));
        let re = tr.mul(zr).add(ti.mul(zi).neg());
        let im = tr.mul(zi).add(ti.mul(zr));
        (re.mul(ratio), im.mul(ratio))
    };
    let value = |(re, im): (Dd, Dd)| Complex64::new(re.value(), im.value());
    let mut term = (Dd::from(1.0), Dd::from(0.0));
    let mut sum = term;
    let mut terms = 1usize;

    if let Some(n) = poly {
        for k in 0..n {
            term = step(term, k as f64);
            sum = (sum.0.add(term.0), sum.1.add(term.1));
            terms += 1;
        }
        return Ok((value(sum), terms));
    }

    for k in 0..ctl.max_terms.saturating_sub(1) {
        let kf = k as f64;
        term = step(term, kf);
        sum = (sum.0.add(term.0), sum.1.add(term.1));
        terms += 1;
        let next_ratio = ((a + kf + 1.0) / (b + kf + 1.0) / (kf + 2.0)).abs() * z.norm();
        if value(term).norm() <= ctl.rel_tol * value(sum).norm() && next_ratio < 0.5 {
            return Ok((value(sum), terms));
        }
    }
    Err(Error::NonConvergent {
        max_terms: ctl.max_terms,
        rel_tol: ctl.rel_tol,
    })
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`, built from the
/// error-free transformations `two_sum` and `fma`-based `two_prod`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl From<f64> for Dd {
    fn from(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }
}

impl Dd {
    fn two_sum(a: f64, b: f64) -> Dd {
        let s = a + b;
        let bb = s - a;
        Dd {
            hi: s,
            lo: (a - (s - bb)) + (b - bb),
        }
    }

    fn renorm(hi: f64, lo: f64) -> Dd {
        let s = hi + lo;
        Dd {
            hi: s,
            lo: lo - (s - hi),
        }
    }

    fn sum(a: f64, b: f64) -> Dd {
        Self::two_sum(a, b)
    }

    fn add(self, o: Dd) -> Dd {
        let s = Self::two_sum(self.hi, o.hi);
        Self::renorm(s.hi, s.lo + self.lo + o.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p) + (self.hi * o.lo + self.lo * o.hi);
        Self::renorm(p, e)
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::from(-q1)));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Dd::from(-q2)));
        let q3 = r.hi / o.hi;
        Self::renorm(q1, q2).add(Dd::from(q3))
    }

    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// Kummer's confluent hypergeometric function `1F1(a; b; z)` by its
/// power series.
pub fn hyp1f1(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    hyp1f1_with_terms(a, b, z, &SeriesControl::default()).map(|(v, _)| v)
}

/// `1F1(b + nu; b; z)` through the operator form
/// `(b + z d/dz)_nu e^z / (b)_nu`.
///
/// Writing the running function as `P(z) e^z`, each factor
/// `(b + k + z d/dz)` maps `P` to `(b + k) P + z P' + z P`.
pub fn hyp1f1_offset_do(b: u32, nu: u32, z: Complex64) -> Complex64 {
    let mut coeffs = vec![1.0f64];
    for k in 0..nu {
        let shift = (b + k) as f64;
        let mut next = vec![0.0; coeffs.len() + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            next[i] += (shift + i as f64) * c;
            next[i + 1] += c;
        }
        coeffs = next;
    }
    let norm = pochhammer(Complex64::new(b as f64, 0.0), nu);
    let poly = coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    poly * z.exp() / norm
}

/// Right-hand side of Kummer's first transformation,
/// `e^z 1F1(b - a; b; -z)`.
pub fn kummer_rhs(a: Complex64, b: Complex64, z: Complex64) -> Result<Complex64> {
    Ok(z.exp() * hyp1f1(b - a, b, -z)?)
}

/// Bessel function of the first kind `J_m(x)` for integer `m >= 0`,
/// `x >= 0`.
///
/// Ascending series below `x = 2`, Miller's backward recurrence with the
/// `J_0 + 2 Σ J_2k = 1` normalization above.
pub fn bessel_j(m: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    if x < 0.0 {
        return sign_pow(m as i64) * bessel_j(m, -x);
    }
    if x <= 2.0 {
        let half = 0.5 * x;
        let mut term = half.powi(m as i32) / factorial(m);
        let mut sum = term;
        let q = -half * half;
        for k in 1..60 {
            term *= q / (k as f64 * (k + m) as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        return sum;
    }

    let top = (m as f64).max(x);
    let start = 2 * ((top + 20.0 + (40.0 * top).sqrt()) as usize / 2) + 2;
    let mut j_next = 0.0f64;
    let mut j_cur = 1e-300f64;
    let mut norm = 0.0f64;
    let mut result = 0.0f64;
    for k in (1..=start).rev() {
        let j_prev = 2.0 * k as f64 / x * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        let order = k - 1;
        if order == m as usize {
            result = j_cur;
        }
        if order % 2 == 0 && order > 0 {
            norm += 2.0 * j_cur;
        }
        if j_cur.abs() > 1e250 {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            norm *= 1e-250;
            result *= 1e-250;
        }
    }
    norm += j_cur;
    result / norm
}

/// Ferrers associated Legendre function `P_l^m(x)` for `0 <= m <= l`,
/// including the Condon–Shortley phase `(-1)^m`.
pub fn assoc_legendre(l: u32, m: u32, x: f64) -> f64 {
    debug_assert!(m <= l);
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 0..m {
        pmm *= -((2 * k + 1) as f64) * s;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * (2 * m + 1) as f64 * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut pm0 = pmm;
    for ll in (m + 2)..=l {
        let p = ((2 * ll - 1) as f64 * x * pm1 - (ll + m - 1) as f64 * pm0) / (ll - m) as f64;
        pm0 = pm1;
        pm1 = p;
    }
    pm1
}

/// Normalization `N_lm = sqrt[(2l+1)(l-m)! / (2 (l+m)!)]` of the polar part;
/// the azimuthal factor carries its own `1/sqrt(2π)`.
pub fn polar_norm(l: u32, m: u32) -> f64 {
    ((2 * l + 1) as f64 * factorial(l - m) / (2.0 * factorial(l + m))).sqrt()
}

/// Orthonormal spherical harmonic
/// `Y_lm = N_lm P_l^m(cos θ) e^{imφ} / sqrt(2π)`, with
/// `Y_{l,-m} = (-1)^m conj(Y_lm)` for negative `m`.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    let am = m.unsigned_abs();
    if am > l {
        return Err(Error::Domain(format!("|m| = {am} exceeds l = {l}")));
    }
    let polar = polar_norm(l, am) * assoc_legendre(l, am, theta.cos()) / TAU.sqrt();
    let y = Complex64::from_polar(polar, am as f64 * phi);
    if m >= 0 {
        Ok(y)
    } else {
        Ok(y.conj() * sign_pow(am as i64))
    }
}

/// `1 / sqrt(4π)`, the constant monopole harmonic.
pub fn y00() -> f64 {
    1.0 / (4.0 * PI).sqrt()
}
