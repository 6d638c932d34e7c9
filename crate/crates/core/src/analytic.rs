//! Closed-form levels and eigenfunctions for the pseudoscalar Cornell potential.
//!
//! With `V_p = -a/x + b x` the partner potentials read
//! `U± = s(s-1)/x² + b²x² - 2ab ± b`, `s(s-1) = a² ± a`: a singular oscillator.
//! Its solutions regular at the origin are
//! `u_n = x^s e^{-b x²/2} L_n^{(s-1/2)}(b x²)` with `ε_n = b(4n + 2s + 1) - 2ab ± b`.

use crate::error::{Error, Result};
use crate::potential::Branch;
use crate::report::{Provenance, SpectrumEntry, SpectrumReport};
use crate::sl::{boundary_exponent, is_extension_dependent};

/// Analytic entries with `|ε|` below this are exact zero modes up to rounding.
pub const ANALYTIC_THRESHOLD: f64 = 1e-12;

fn check_slope(b: f64) -> Result<()> {
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::InvalidParameter("b must be positive".into()));
    }
    Ok(())
}

/// Generalized Laguerre polynomial `L_n^{(alpha)}(t)` by the three-term recurrence.
pub fn laguerre(n: usize, alpha: f64, t: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - t;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - t) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `ε_n` for a given indicial exponent `s` (either root of `s(s-1) = a² ± a`).
pub fn epsilon_for_exponent(n: usize, exponent: f64, branch: Branch, a: f64, b: f64) -> f64 {
    b * (4.0 * n as f64 + 2.0 * exponent + 1.0) - 2.0 * a * b + branch.sign() * b
}

/// Exact `ε_n` with the boundary exponent `s ≥ 1/2`.
pub fn analytic_epsilon(n: usize, branch: Branch, a: f64, b: f64) -> Result<f64> {
    check_slope(b)?;
    Ok(epsilon_for_exponent(
        n,
        boundary_exponent(a, branch),
        branch,
        a,
        b,
    ))
}

/// One eigenfunction of the singular oscillator, with exact derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorMode {
    pub n: usize,
    pub exponent: f64,
    pub b: f64,
}

impl OscillatorMode {
    /// Mode with the boundary exponent `s ≥ 1/2` for `U±` of `Cornell(a, b)`.
    pub fn new(n: usize, branch: Branch, a: f64, b: f64) -> Result<Self> {
        check_slope(b)?;
        Ok(OscillatorMode {
            n,
            exponent: boundary_exponent(a, branch),
            b,
        })
    }

    /// Mode with an explicitly chosen indicial exponent.
    pub fn with_exponent(n: usize, exponent: f64, b: f64) -> Result<Self> {
        check_slope(b)?;
        Ok(OscillatorMode { n, exponent, b })
    }

    fn parts(&self, x: f64) -> Result<(f64, f64, f64, f64, f64)> {
        if !(x > 0.0) {
            return Err(Error::Domain { x });
        }
        let alpha = self.exponent - 0.5;
        let t = self.b * x * x;
        let l0 = laguerre(self.n, alpha, t);
        let l1 = if self.n >= 1 {
            -laguerre(self.n - 1, alpha + 1.0, t)
        } else {
            0.0
        };
        let l2 = if self.n >= 2 {
            laguerre(self.n - 2, alpha + 2.0, t)
        } else {
            0.0
        };
        let envelope = x.powf(self.exponent) * (-0.5 * t).exp();
        Ok((envelope, t, l0, l1, l2))
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        let (f, _, l0, _, _) = self.parts(x)?;
        Ok(f * l0)
    }

    pub fn derivative(&self, x: f64) -> Result<f64> {
        let (f, _, l0, l1, _) = self.parts(x)?;
        let g = self.exponent / x - self.b * x;
        Ok(f * (g * l0 + 2.0 * self.b * x * l1))
    }

    pub fn second_derivative(&self, x: f64) -> Result<f64> {
        let (f, _, l0, l1, l2) = self.parts(x)?;
        let (s, b) = (self.exponent, self.b);
        let g = s / x - b * x;
        let dg = g * g - s / (x * x) - b;
        let dl = 2.0 * b * x * l1;
        let ddl = 2.0 * b * l1 + 4.0 * b * b * x * x * l2;
        Ok(f * (dg * l0 + 2.0 * g * dl + ddl))
    }
}

/// Unnormalized `u_n(x)` for `U±` of `Cornell(a, b)`.
pub fn analytic_wavefunction(n: usize, branch: Branch, a: f64, b: f64, x: f64) -> Result<f64> {
    OscillatorMode::new(n, branch, a, b)?.value(x)
}

/// First `levels` closed-form levels of one branch.
pub fn analytic_spectrum_report(
    branch: Branch,
    a: f64,
    b: f64,
    m: f64,
    levels: usize,
) -> Result<SpectrumReport> {
    check_slope(b)?;
    let entries = (0..levels)
        .map(|n| {
            let eps = analytic_epsilon(n, branch, a, b)?;
            Ok(SpectrumEntry::from_epsilon(
                n,
                eps,
                m,
                Provenance::Analytic,
                0.0,
                eps.abs() <= ANALYTIC_THRESHOLD,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectrumReport {
        branch: Some(branch),
        m,
        extension_dependent: is_extension_dependent(a),
        entries,
    })
}

/// Both branches, `[plus, minus]`.
pub fn analytic_spectrum(a: f64, b: f64, m: f64, levels: usize) -> Result<[SpectrumReport; 2]> {
    Ok([
        analytic_spectrum_report(Branch::Plus, a, b, m, levels)?,
        analytic_spectrum_report(Branch::Minus, a, b, m, levels)?,
    ])
}
