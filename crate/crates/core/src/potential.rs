//! Double-well potentials with wells pinned at +1 and -1, and the decay /
//! spectral rates they induce.
//!
//! A potential is stored as the coefficient list of F (ascending degree), so
//! F' and F'' are exact polynomial derivatives.  The quartic (1-u^2)^2/4 is
//! the default; its rates are exact anchors for regression tests.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Double-well potential F with F(+-1) = 0 and F''(+-1) > 0.
///
/// `nonlinearity` is f = F', the term appearing in the Allen-Cahn equation;
/// `nonlinearity_prime` is f' = F''.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DoubleWellPotential {
    /// Coefficients of F, ascending degree.
    coeffs: Vec<f64>,
    /// Coefficients of f = F'.
    f_coeffs: Vec<f64>,
    /// Coefficients of f' = F''.
    fp_coeffs: Vec<f64>,
    /// True when F is even (detected from the coefficients).
    even: bool,
}

fn poly_derivative(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &a)| k as f64 * a)
        .collect()
}

fn poly_eval(c: &[f64], s: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &a| acc * s + a)
}

impl DoubleWellPotential {
    /// The quartic double well F(u) = (1 - u^2)^2 / 4.
    pub fn quartic() -> Self {
        Self::polynomial(vec![0.25, 0.0, -0.5, 0.0, 0.25])
    }

    /// Potential from coefficients of F (ascending degree).
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        let f_coeffs = poly_derivative(&coeffs);
        let fp_coeffs = poly_derivative(&f_coeffs);
        let even = coeffs
            .iter()
            .enumerate()
            .all(|(k, &a)| k % 2 == 0 || a.abs() < 1e-14);
        Self {
            coeffs,
            f_coeffs,
            fp_coeffs,
            even,
        }
    }

    /// F(s).
    pub fn potential(&self, s: f64) -> f64 {
        poly_eval(&self.coeffs, s)
    }

    /// f(s) = F'(s), the Allen-Cahn nonlinearity.
    pub fn nonlinearity(&self, s: f64) -> f64 {
        poly_eval(&self.f_coeffs, s)
    }

    /// f'(s) = F''(s).
    pub fn nonlinearity_prime(&self, s: f64) -> f64 {
        poly_eval(&self.fp_coeffs, s)
    }

    /// f''(s) = F'''(s), used for discretization-scale checks.
    pub fn nonlinearity_second(&self, s: f64) -> f64 {
        poly_eval(&poly_derivative(&self.fp_coeffs), s)
    }

    pub fn is_even(&self) -> bool {
        self.even
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }
}

/// Validation summary for a candidate potential.
#[derive(Debug, Clone, Serialize)]
pub struct PotentialReport {
    pub sample_count: usize,
    /// Most negative sampled value of F (0 when F >= 0 everywhere sampled).
    pub worst_negative: f64,
    /// max(|F(-1)|, |F(1)|).
    pub worst_well_value: f64,
    /// Largest monotonicity violation on (-inf,-1) / (1,inf) samples.
    pub worst_monotonicity: f64,
    pub f_prime_minus: f64,
    pub f_prime_plus: f64,
}

const WELL_TOL: f64 = 1e-9;

/// Checks the double-well invariants on a uniform sample grid over [-3, 3].
pub fn validate_potential(
    p: &DoubleWellPotential,
    sample_count: usize,
) -> Result<PotentialReport> {
    if sample_count < 8 {
        return Err(Error::Precondition(format!(
            "sample_count = {sample_count} too small to cover [-3, 3]"
        )));
    }
    let fm = p.potential(-1.0);
    let fp = p.potential(1.0);
    let worst_well_value = fm.abs().max(fp.abs());
    if worst_well_value > WELL_TOL {
        // Wells must be exact zeros of F; a shifted or tilted potential is
        // rejected rather than silently renormalized.
        let (at, value) = if fm.abs() >= fp.abs() {
            (-1.0, fm)
        } else {
            (1.0, fp)
        };
        return Err(Error::NegativePotential { at, value });
    }

    let dfm = p.nonlinearity_prime(-1.0);
    let dfp = p.nonlinearity_prime(1.0);
    if dfm <= 0.0 {
        return Err(Error::NondegenerateWellViolation {
            at: -1.0,
            value: dfm,
        });
    }
    if dfp <= 0.0 {
        return Err(Error::NondegenerateWellViolation {
            at: 1.0,
            value: dfp,
        });
    }

    let mut worst_negative = 0.0_f64;
    let mut worst_neg_at = 0.0_f64;
    let mut worst_monotonicity = 0.0_f64;
    let mut prev: Option<(f64, f64)> = None;
    for k in 0..sample_count {
        let s = -3.0 + 6.0 * k as f64 / (sample_count - 1) as f64;
        let v = p.potential(s);
        if v < worst_negative {
            worst_negative = v;
            worst_neg_at = s;
        }
        if let Some((sp, vp)) = prev {
            // decreasing left of -1, increasing right of +1
            if s <= -1.0 && v > vp + WELL_TOL {
                worst_monotonicity = worst_monotonicity.max(v - vp);
            }
            if sp >= 1.0 && v < vp - WELL_TOL {
                worst_monotonicity = worst_monotonicity.max(vp - v);
            }
        }
        prev = Some((s, v));
    }
    if worst_negative < -WELL_TOL {
        return Err(Error::NegativePotential {
            at: worst_neg_at,
            value: worst_negative,
        });
    }
    if worst_monotonicity > 0.0 {
        return Err(Error::Precondition(format!(
            "F is not monotone outside the wells (violation {worst_monotonicity:e})"
        )));
    }

    Ok(PotentialReport {
        sample_count,
        worst_negative,
        worst_well_value,
        worst_monotonicity,
        f_prime_minus: dfm,
        f_prime_plus: dfp,
    })
}

/// Well curvatures and the exponential rates they generate in dimension n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralRates {
    pub gamma_minus: f64,
    pub gamma_plus: f64,
    pub beta_minus: f64,
    pub beta_plus: f64,
    /// min(beta_minus, beta_plus)
    pub beta: f64,
    pub n: usize,
}

/// Rates beta_pm = (n-1)/2 + sqrt((n-1)^2/4 + gamma_pm), the positive roots
/// of lambda^2 - (n-1) lambda - gamma_pm = 0.
pub fn spectral_rates(p: &DoubleWellPotential, n: usize) -> Result<SpectralRates> {
    if n < 2 {
        return Err(Error::Precondition(format!("dimension n = {n} must be >= 2")));
    }
    let gamma_minus = p.nonlinearity_prime(-1.0);
    let gamma_plus = p.nonlinearity_prime(1.0);
    if gamma_minus <= 0.0 || gamma_plus <= 0.0 {
        return Err(Error::NondegenerateWellViolation {
            at: if gamma_minus <= 0.0 { -1.0 } else { 1.0 },
            value: gamma_minus.min(gamma_plus),
        });
    }
    let half = (n as f64 - 1.0) / 2.0;
    let beta_minus = half + (half * half + gamma_minus).sqrt();
    let beta_plus = half + (half * half + gamma_plus).sqrt();
    Ok(SpectralRates {
        gamma_minus,
        gamma_plus,
        beta_minus,
        beta_plus,
        beta: beta_minus.min(beta_plus),
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartic_is_valid() {
        let p = DoubleWellPotential::quartic();
        let report = validate_potential(&p, 601).unwrap();
        assert!(report.worst_well_value < 1e-14);
        assert_eq!(report.f_prime_minus, 2.0);
        assert_eq!(report.f_prime_plus, 2.0);
        // f(u) = u^3 - u
        assert!((p.nonlinearity(0.5) - (0.125 - 0.5)).abs() < 1e-15);
        assert!(p.is_even());
    }

    #[test]
    fn tilted_quartic_rejected() {
        // (1-u^2)^2/4 + 0.05 (u^3/3 - u): wells stay critical but F(+-1) != 0.
        let p = DoubleWellPotential::polynomial(vec![
            0.25,
            -0.05,
            -0.5,
            0.05 / 3.0,
            0.25,
        ]);
        match validate_potential(&p, 601) {
            Err(Error::NegativePotential { .. }) => {}
            other => panic!("expected NegativePotential, got {other:?}"),
        }
    }

    #[test]
    fn negative_potential_rejected() {
        // F(u) = -u^2 + 1 has F(+-1) = 0 but goes negative outside the wells.
        let p = DoubleWellPotential::polynomial(vec![1.0, 0.0, -1.0]);
        match validate_potential(&p, 601) {
            Err(Error::NegativePotential { value, .. }) => assert!(value < 0.0),
            Err(Error::NondegenerateWellViolation { .. }) => {}
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn quartic_rates() {
        let p = DoubleWellPotential::quartic();
        let r2 = spectral_rates(&p, 2).unwrap();
        assert_eq!(r2.gamma_minus, 2.0);
        assert_eq!(r2.beta_plus, 0.5 + (0.25_f64 + 2.0).sqrt());
        assert_eq!(r2.beta, 2.0);
        let r3 = spectral_rates(&p, 3).unwrap();
        assert!((r3.beta - (1.0 + 3.0_f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn root_identity_and_strict_bound() {
        let pots = [
            DoubleWellPotential::quartic(),
            // (1-u^2)^2 (0.25 + 0.06 u)
            DoubleWellPotential::polynomial(vec![
                0.25, 0.06, -0.5, -0.12, 0.25, 0.06,
            ]),
        ];
        for p in &pots {
            validate_potential(p, 601).unwrap();
            for n in 2..=6 {
                let r = spectral_rates(p, n).unwrap();
                let nm1 = n as f64 - 1.0;
                for (beta, gamma) in [
                    (r.beta_minus, r.gamma_minus),
                    (r.beta_plus, r.gamma_plus),
                ] {
                    let root = beta * beta - nm1 * beta - gamma;
                    assert!(root.abs() < 1e-12, "root identity at n={n}: {root}");
                    assert!(beta > nm1, "beta {beta} <= n-1 at n={n}");
                }
            }
        }
    }

    #[test]
    fn rates_are_deterministic() {
        let p = DoubleWellPotential::quartic();
        let a = spectral_rates(&p, 4).unwrap();
        let b = spectral_rates(&p, 4).unwrap();
        assert_eq!(a.beta.to_bits(), b.beta.to_bits());
        assert_eq!(a.beta_minus.to_bits(), b.beta_minus.to_bits());
    }
}
