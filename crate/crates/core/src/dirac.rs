//! First-order Dirac operator, partner-component recovery and the reduction to
//! Schrödinger-like equations.
//!
//! Representation: `H = σ₁ p̂ + σ₃ m + diag(V_Σ, V_Δ) + σ₂ V_p` with `p̂ = -i d/dx`
//! acting on the column `(ψ₊, ψ₋)`. Written out,
//!
//! ```text
//! -i ψ₋' - i V_p ψ₋ + (m + V_Σ) ψ₊ = E ψ₊
//! -i ψ₊' + i V_p ψ₊ + (V_Δ - m) ψ₋ = E ψ₋
//! ```

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::potential::{Branch, LorentzPotentials, PhysicalParams, PotentialTerm};

/// Spinors whose quadrature norm deviates from one by more than this are
/// rejected as "not normalized".
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Guard on the denominators `E ± m` of the recovery formula.
pub const THRESHOLD_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Spinor {
    grid: Grid,
    upper: Vec<Complex64>,
    lower: Vec<Complex64>,
    energy: f64,
    normalized: bool,
}

impl Spinor {
    pub fn new(
        grid: Grid,
        upper: Vec<Complex64>,
        lower: Vec<Complex64>,
        energy: f64,
    ) -> Result<Self> {
        if upper.len() != grid.len() || lower.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "spinor components have {} and {} samples, grid has {}",
                upper.len(),
                lower.len(),
                grid.len()
            )));
        }
        Ok(Spinor {
            grid,
            upper,
            lower,
            energy,
            normalized: false,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn upper(&self) -> &[Complex64] {
        &self.upper
    }

    pub fn lower(&self) -> &[Complex64] {
        &self.lower
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Trapezoidal `∫ (|ψ₊|² + |ψ₋|²) dx`.
    pub fn norm_sqr(&self) -> f64 {
        let density: Vec<f64> = self
            .upper
            .iter()
            .zip(&self.lower)
            .map(|(u, l)| u.norm_sqr() + l.norm_sqr())
            .collect();
        self.grid.trapezoid(&density)
    }

    /// Multiplies both components by a common complex factor. Clears the
    /// normalization flag unless `|factor| = 1`.
    pub fn scaled(&self, factor: Complex64) -> Spinor {
        Spinor {
            grid: self.grid,
            upper: self.upper.iter().map(|z| z * factor).collect(),
            lower: self.lower.iter().map(|z| z * factor).collect(),
            energy: self.energy,
            normalized: self.normalized && (factor.norm() - 1.0).abs() < 1e-15,
        }
    }

    /// Writes the `x, re_upper, im_upper, re_lower, im_lower` CSV table.
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "x,re_upper,im_upper,re_lower,im_lower")?;
        for (i, (u, l)) in self.upper.iter().zip(&self.lower).enumerate() {
            writeln!(
                out,
                "{},{},{},{},{}",
                crate::io::fmt_f64(self.grid.node(i)),
                crate::io::fmt_f64(u.re),
                crate::io::fmt_f64(u.im),
                crate::io::fmt_f64(l.re),
                crate::io::fmt_f64(l.im)
            )?;
        }
        Ok(())
    }
}

/// Rescales to unit trapezoidal norm and sets the normalization flag.
pub fn normalize(spinor: &Spinor) -> Result<Spinor> {
    let norm_sqr = spinor.norm_sqr();
    if !(norm_sqr > 0.0) || !norm_sqr.is_finite() {
        return Err(Error::ZeroSpinor);
    }
    let mut out = spinor.scaled(Complex64::new(1.0 / norm_sqr.sqrt(), 0.0));
    out.normalized = true;
    Ok(out)
}

/// Second-order derivative estimate: centred in the interior, one-sided
/// three-point stencils at both edges.
pub fn differentiate(values: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = values.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    if n < 3 {
        return out;
    }
    let inv = 1.0 / (2.0 * h);
    for i in 1..n - 1 {
        out[i] = (values[i + 1] - values[i - 1]) * inv;
    }
    out[0] = (values[0] * -3.0 + values[1] * 4.0 - values[2]) * inv;
    out[n - 1] = (values[n - 1] * 3.0 - values[n - 2] * 4.0 + values[n - 3]) * inv;
    out
}

/// Grid L² norm of `(H - E) ψ` evaluated on interior nodes with centred
/// differences for `p̂`.
pub fn dirac_residual(
    spinor: &Spinor,
    pots: &LorentzPotentials,
    params: &PhysicalParams,
) -> Result<f64> {
    if !spinor.normalized || (spinor.norm_sqr() - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized);
    }
    let grid = spinor.grid;
    let h = grid.spacing();
    let m = params.m;
    let e = spinor.energy;
    let i = Complex64::i();
    let up = &spinor.upper;
    let lo = &spinor.lower;
    let mut sum = 0.0;
    for k in 1..grid.len() - 1 {
        let x = grid.node(k);
        let (sigma, delta) = pots.sigma_delta(x)?;
        let vp = pots.p.eval(x)?;
        let d_up = (up[k + 1] - up[k - 1]) / (2.0 * h);
        let d_lo = (lo[k + 1] - lo[k - 1]) / (2.0 * h);
        let r_upper = -i * d_lo - i * vp * lo[k] + (m + sigma - e) * up[k];
        let r_lower = -i * d_up + i * vp * up[k] + (delta - m - e) * lo[k];
        sum += r_upper.norm_sqr() + r_lower.norm_sqr();
    }
    Ok((h * sum).sqrt())
}

/// Which component is known when recovering its partner.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recover {
    /// Given `ψ₊`, return `ψ₋`.
    FromUpper,
    /// Given `ψ₋`, return `ψ₊`.
    FromLower,
}

/// Partner component from the first-order equations:
/// `ψ₋ = -i (ψ₊' - V_p ψ₊)/(E + m - V_Δ)` and `ψ₊ = -i (ψ₋' + V_p ψ₋)/(E - m - V_Σ)`.
///
/// For a pure pseudoscalar coupling the denominators are `E ± m`; the
/// thresholds `E = -m` (from upper) and `E = +m` (from lower) are refused.
pub fn recover_component(
    known: &[Complex64],
    grid: &Grid,
    which: Recover,
    energy: f64,
    pots: &LorentzPotentials,
    params: &PhysicalParams,
) -> Result<Vec<Complex64>> {
    if known.len() != grid.len() {
        return Err(Error::InvalidGrid(format!(
            "component has {} samples, grid has {}",
            known.len(),
            grid.len()
        )));
    }
    let m = params.m;
    let nominal = match which {
        Recover::FromUpper => energy + m,
        Recover::FromLower => energy - m,
    };
    if nominal.abs() < THRESHOLD_GUARD && pots.has_no_vector_or_scalar() {
        return Err(Error::ThresholdEnergy { energy });
    }
    let derivative = differentiate(known, grid.spacing());
    let minus_i = Complex64::new(0.0, -1.0);
    known
        .iter()
        .zip(&derivative)
        .enumerate()
        .map(|(k, (f, df))| {
            let x = grid.node(k);
            let (sigma, delta) = pots.sigma_delta(x)?;
            let vp = pots.p.eval(x)?;
            let (denominator, numerator) = match which {
                Recover::FromUpper => (energy + m - delta, df - vp * f),
                Recover::FromLower => (energy - m - sigma, df + vp * f),
            };
            if denominator.abs() < THRESHOLD_GUARD {
                return Err(Error::ThresholdEnergy { energy });
            }
            Ok(minus_i * numerator / denominator)
        })
        .collect()
}

/// Coefficient `σ` of the inverse-square part `σ/x²` of `U±`: `a² ± a`.
pub fn inverse_square_strength(p: &PotentialTerm, branch: Branch) -> f64 {
    let a = p.coulomb_strength();
    a * a + branch.sign() * a
}

/// `U± - σ/x²`, the part of the effective potential that stays bounded at the origin.
pub fn regular_sl_potential(p: &PotentialTerm, branch: Branch, x: f64) -> Result<f64> {
    p.eval(x)?;
    let k = p.coefficients();
    let (a, b, c) = (k.coulomb, k.linear, k.constant);
    let mut w = b * b * x * x + c * c - 2.0 * a * b + branch.sign() * b + 2.0 * b * c * x;
    if a != 0.0 && c != 0.0 {
        w -= 2.0 * a * c / x;
    }
    Ok(w)
}

/// `U± = V_p² ± V_p'` from the exact symbolic derivative. For Cornell this is
/// `(a² ± a)/x² + b² x² - 2ab ± b`.
pub fn effective_sl_potential(p: &PotentialTerm, branch: Branch, x: f64) -> Result<f64> {
    if p.is_singular() && x <= 0.0 {
        return Err(Error::Domain { x });
    }
    let regular = regular_sl_potential(p, branch, x)?;
    let sigma = inverse_square_strength(p, branch);
    Ok(if sigma != 0.0 {
        sigma / (x * x) + regular
    } else {
        regular
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gaussian_spinor(grid: Grid) -> Vec<Complex64> {
        grid.nodes()
            .iter()
            .map(|x| Complex64::new((-(x - 3.0) * (x - 3.0)).exp(), 0.0))
            .collect()
    }

    #[test]
    fn effective_potential_examples() {
        let c = PotentialTerm::cornell(1.0, 1.0);
        assert_eq!(effective_sl_potential(&c, Branch::Plus, 1.0).unwrap(), 2.0);
        assert_eq!(effective_sl_potential(&c, Branch::Minus, 2.0).unwrap(), 1.0);
        for b in [Branch::Plus, Branch::Minus] {
            assert_eq!(
                effective_sl_potential(&PotentialTerm::Zero, b, 3.3).unwrap(),
                0.0
            );
        }
        assert!(matches!(
            effective_sl_potential(&c, Branch::Plus, 0.0),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn effective_potential_matches_square_plus_derivative() {
        let terms = [
            PotentialTerm::Constant { c: 0.7 },
            PotentialTerm::Coulomb { a: -1.2 },
            PotentialTerm::Linear { b: 2.5 },
            PotentialTerm::cornell(0.3, 1.7),
        ];
        for t in terms {
            for b in [Branch::Plus, Branch::Minus] {
                for &x in &[0.05, 0.4, 1.0, 3.0, 9.0] {
                    let v = t.eval(x).unwrap();
                    let dv = t.derivative(x).unwrap();
                    let direct = v * v + b.sign() * dv;
                    let u = effective_sl_potential(&t, b, x).unwrap();
                    assert!((u - direct).abs() <= 1e-12 * (v * v + dv.abs()).max(1.0));
                }
            }
        }
    }

    #[test]
    fn normalize_examples() {
        let grid = Grid::new(0.01, 6.0, 600).unwrap();
        let samples = gaussian_spinor(grid);
        let sp = Spinor::new(grid, samples.clone(), samples, 1.0).unwrap();
        let norm2 = sp.norm_sqr();
        let four = sp.scaled(Complex64::new(2.0 / norm2.sqrt(), 0.0));
        assert!((four.norm_sqr() - 4.0).abs() < 1e-12);
        let unit = normalize(&four).unwrap();
        for (a, b) in unit.upper().iter().zip(four.upper()) {
            assert!((a - b * 0.5).norm() < 1e-15);
        }
        let again = normalize(&unit).unwrap();
        for (a, b) in again.upper().iter().zip(unit.upper()) {
            assert!((a - b).norm() < 1e-14);
        }
        let zero = Spinor::new(
            grid,
            vec![Complex64::default(); 600],
            vec![Complex64::default(); 600],
            0.0,
        )
        .unwrap();
        assert!(matches!(normalize(&zero), Err(Error::ZeroSpinor)));
    }

    #[test]
    fn recover_with_zero_potential_is_scaled_derivative() {
        let grid = Grid::new(0.01, 6.0, 2001).unwrap();
        let up = gaussian_spinor(grid);
        let pots = LorentzPotentials::default();
        let params = PhysicalParams::new(1.0).unwrap();
        let lo = recover_component(&up, &grid, Recover::FromUpper, 2.0, &pots, &params).unwrap();
        for (k, x) in grid.nodes().iter().enumerate() {
            let exact_derivative = -2.0 * (x - 3.0) * (-(x - 3.0) * (x - 3.0)).exp();
            let expected = Complex64::new(0.0, -exact_derivative / 3.0);
            assert!((lo[k] - expected).norm() < 1e-4, "x = {x}");
        }
    }

    #[test]
    fn recover_refuses_thresholds() {
        let grid = Grid::new(0.01, 6.0, 100).unwrap();
        let up = gaussian_spinor(grid);
        let pots = LorentzPotentials::pure_pseudoscalar(PotentialTerm::cornell(1.0, 1.0));
        let params = PhysicalParams::new(1.0).unwrap();
        assert!(matches!(
            recover_component(&up, &grid, Recover::FromUpper, -1.0, &pots, &params),
            Err(Error::ThresholdEnergy { .. })
        ));
        assert!(matches!(
            recover_component(&up, &grid, Recover::FromLower, 1.0, &pots, &params),
            Err(Error::ThresholdEnergy { .. })
        ));
        assert!(recover_component(&up, &grid, Recover::FromLower, -1.0, &pots, &params).is_ok());
    }

    #[test]
    fn residual_requires_normalized_spinor() {
        let grid = Grid::new(0.01, 6.0, 100).unwrap();
        let up = gaussian_spinor(grid);
        let sp = Spinor::new(grid, up.clone(), up, 1.0).unwrap();
        let pots = LorentzPotentials::default();
        let params = PhysicalParams::new(1.0).unwrap();
        assert!(matches!(
            dirac_residual(&sp, &pots, &params),
            Err(Error::NotNormalized)
        ));
    }

    #[test]
    fn free_standing_wave_off_resonance_has_positive_residual() {
        // sin(kx) paired with its exact partner solves the free equation only at E² = k² + m².
        let grid = Grid::new(0.001, 10.0, 4001).unwrap();
        let k: f64 = 1.3;
        let m: f64 = 1.0;
        let exact = (k * k + m * m).sqrt();
        let pots = LorentzPotentials::default();
        let params = PhysicalParams::new(m).unwrap();
        let build = |energy: f64| {
            let up: Vec<Complex64> = grid
                .nodes()
                .iter()
                .map(|x| Complex64::new((k * x).sin(), 0.0))
                .collect();
            let lo =
                recover_component(&up, &grid, Recover::FromUpper, energy, &pots, &params).unwrap();
            normalize(&Spinor::new(grid, up, lo, energy).unwrap()).unwrap()
        };
        let on = dirac_residual(&build(exact), &pots, &params).unwrap();
        let off = dirac_residual(&build(exact + 0.01), &pots, &params).unwrap();
        assert!(on < 1e-4, "on-shell residual {on}");
        assert!(off > 1e-3, "off-shell residual {off}");
    }

    #[test]
    fn spinor_length_mismatch_is_rejected() {
        let grid = Grid::new(0.01, 6.0, 100).unwrap();
        assert!(Spinor::new(
            grid,
            vec![Complex64::default(); 99],
            vec![Complex64::default(); 100],
            0.0
        )
        .is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn cornell_effective_potential_matches_expansion(a in -5.0f64..5.0, b in 0.01f64..5.0, x in 1e-3f64..20.0) {
            let t = PotentialTerm::cornell(a, b);
            for br in [Branch::Plus, Branch::Minus] {
                let sg = br.sign();
                let expansion = (a * a + sg * a) / (x * x) + b * b * x * x - 2.0 * a * b + sg * b;
                let u = effective_sl_potential(&t, br, x).unwrap();
                let scale = ((a * a + a.abs()) / (x * x) + b * b * x * x + 2.0 * (a * b).abs() + b).max(1e-300);
                prop_assert!((u - expansion).abs() <= 1e-13 * scale.max(expansion.abs()));
            }
        }
    }
}
