//! Gauss–Legendre rules for real and complex integrands, on real intervals
//! and on straight complex segments, plus an adaptive bisection driver.
//!
//! Node/weight generation is delegated to `gauss-quad`; everything here is
//! the evaluation layer on top of it.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// A Gauss–Legendre rule with cached nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendreRule {
    pairs: Vec<(f64, f64)>,
}

impl GaussLegendreRule {
    pub fn new(degree: usize) -> Self {
        let degree = NonZeroUsize::new(degree.max(1)).expect("degree >= 1");
        let rule = GaussLegendre::new(degree);
        Self {
            pairs: rule.as_node_weight_pairs().to_vec(),
        }
    }

    pub fn degree(&self) -> usize {
        self.pairs.len()
    }

    /// Mapped nodes and weights on `[a, b]`.
    pub fn nodes_on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.pairs.iter().map(move |&(x, w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.nodes_on(a, b).map(|(x, w)| w * f(x)).sum()
    }

    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(&self, a: f64, b: f64, mut f: F) -> Complex64 {
        self.nodes_on(a, b).map(|(x, w)| f(x) * w).sum()
    }

    /// Integrates along the straight segment from `za` to `zb` in the
    /// complex plane.
    pub fn integrate_segment<F: FnMut(Complex64) -> Complex64>(
        &self,
        za: Complex64,
        zb: Complex64,
        mut f: F,
    ) -> Complex64 {
        let half = (zb - za) * 0.5;
        let mid = (zb + za) * 0.5;
        self.pairs
            .iter()
            .map(|&(x, w)| f(mid + half * x) * w)
            .sum::<Complex64>()
            * half
    }

    /// Composite rule over `panels` equal sub-intervals.
    pub fn integrate_composite<F: FnMut(f64) -> Complex64>(
        &self,
        a: f64,
        b: f64,
        panels: usize,
        mut f: F,
    ) -> Complex64 {
        let panels = panels.max(1);
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = a + k as f64 * h;
                self.integrate_complex(lo, lo + h, &mut f)
            })
            .sum()
    }

    pub fn integrate_segment_composite<F: FnMut(Complex64) -> Complex64>(
        &self,
        za: Complex64,
        zb: Complex64,
        panels: usize,
        mut f: F,
    ) -> Complex64 {
        let panels = panels.max(1);
        let h = (zb - za) / panels as f64;
        (0..panels)
            .map(|k| {
                let lo = za + h * k as f64;
                self.integrate_segment(lo, lo + h, &mut f)
            })
            .sum()
    }
}

/// Result of an adaptive integration: value plus the integral of `|f|`,
/// which gives a natural magnitude scale for cancellation-dominated results.
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOutcome {
    pub value: f64,
    pub abs_integral: f64,
    pub intervals: usize,
}

/// Adaptive Gauss–Legendre by interval bisection: an interval is accepted
/// when the rule on it agrees with the sum of the rule on its two halves.
pub fn adaptive_gauss_legendre<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<AdaptiveOutcome> {
    let rule = GaussLegendreRule::new(20);
    let eval = |lo: f64, hi: f64| -> (f64, f64) {
        rule.nodes_on(lo, hi).fold((0.0, 0.0), |(s, sa), (x, w)| {
            let v = f(x);
            (s + w * v, sa + w * v.abs())
        })
    };

    let mut stack = vec![(a, b, eval(a, b), 0u32)];
    let mut value = 0.0;
    let mut abs_integral = 0.0;
    let mut intervals = 0usize;
    let mut pending_error = 0.0;

    while let Some((lo, hi, (whole, whole_abs), depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = eval(lo, mid);
        let right = eval(mid, hi);
        let refined = left.0 + right.0;
        let err = (refined - whole).abs();
        let local_tol = (rel_tol * (left.1 + right.1).max(whole_abs)).max(abs_tol);
        if err <= local_tol || depth >= 40 {
            if depth >= 40 {
                pending_error += err;
            }
            value += refined;
            abs_integral += left.1 + right.1;
            intervals += 1;
        } else {
            if stack.len() + intervals > max_intervals {
                return Err(Error::QuadratureFailure(format!(
                    "adaptive Gauss-Legendre exceeded {max_intervals} intervals on [{a}, {b}]"
                )));
            }
            stack.push((mid, hi, right, depth + 1));
            stack.push((lo, mid, left, depth + 1));
        }
    }

    if pending_error > abs_tol.max(rel_tol * abs_integral) {
        return Err(Error::QuadratureFailure(format!(
            "bisection depth exhausted with residual {pending_error:e}"
        )));
    }

    Ok(AdaptiveOutcome {
        value,
        abs_integral,
        intervals,
    })
}

/// Trapezoid rule on a full period `[0, 2π)` with `n` points; spectrally
/// accurate for smooth periodic integrands.
pub fn periodic_trapezoid<F: FnMut(f64) -> Complex64>(n: usize, mut f: F) -> Complex64 {
    let h = std::f64::consts::TAU / n as f64;
    (0..n).map(|k| f(k as f64 * h)).sum::<Complex64>() * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomial_exactness() {
        let rule = GaussLegendreRule::new(5);
        // degree 9 is the highest exactly integrated
        let v = rule.integrate(0.0, 2.0, |x| x.powi(9));
        assert_relative_eq!(v, 2f64.powi(10) / 10.0, max_relative = 1e-14);
    }

    #[test]
    fn segment_rule_integrates_entire_function() {
        let rule = GaussLegendreRule::new(30);
        let za = Complex64::new(0.3, 1.0);
        let zb = Complex64::new(-1.2, 0.4);
        let v = rule.integrate_segment(za, zb, |z| z.exp());
        let exact = zb.exp() - za.exp();
        assert!((v - exact).norm() < 1e-14);
    }

    #[test]
    fn adaptive_handles_oscillation() {
        let out = adaptive_gauss_legendre(|x| (20.0 * x).cos(), 0.0, 3.0, 1e-13, 1e-15, 10_000).unwrap();
        assert_relative_eq!(out.value, (60.0f64).sin() / 20.0, max_relative = 1e-11);
    }

    #[test]
    fn trapezoid_is_spectral_for_periodic() {
        let v = periodic_trapezoid(32, |t| Complex64::new(t.cos().powi(2), 0.0));
        assert_relative_eq!(v.re, std::f64::consts::PI, max_relative = 1e-14);
    }
}
