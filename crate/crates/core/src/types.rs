use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Final canonical momentum in cylindrical coordinates about the
/// polarization (z) axis, atomic units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Momentum {
    pub p_par: f64,
    pub p_perp: f64,
    pub phi_p: f64,
}

impl Momentum {
    pub fn new(p_par: f64, p_perp: f64, phi_p: f64) -> Self {
        Self { p_par, p_perp, phi_p }
    }

    /// Cartesian components `(x, y, z)`.
    pub fn cartesian(&self) -> [f64; 3] {
        [
            self.p_perp * self.phi_p.cos(),
            self.p_perp * self.phi_p.sin(),
            self.p_par,
        ]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.p_par * self.p_par + self.p_perp * self.p_perp
    }

    pub fn with_phi(&self, phi_p: f64) -> Self {
        Self { phi_p, ..*self }
    }
}

/// A complex ionization amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexAmplitude(pub Complex64);

impl ComplexAmplitude {
    pub const ZERO: ComplexAmplitude = ComplexAmplitude(Complex64::new(0.0, 0.0));

    pub fn value(&self) -> Complex64 {
        self.0
    }

    /// Probability density `|a|^2`.
    pub fn probability(&self) -> f64 {
        self.0.norm_sqr()
    }
}

impl std::ops::Add for ComplexAmplitude {
    type Output = ComplexAmplitude;
    fn add(self, rhs: Self) -> Self {
        ComplexAmplitude(self.0 + rhs.0)
    }
}

impl From<Complex64> for ComplexAmplitude {
    fn from(z: Complex64) -> Self {
        ComplexAmplitude(z)
    }
}

/// Integer power of `i`, exact for any sign of the exponent.
pub(crate) fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

pub(crate) fn sign_pow(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// `z^n` by repeated multiplication; no logarithm, hence no branch cut.
pub fn int_pow(z: Complex64, n: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        acc *= z;
    }
    acc
}
