//! Threshold states at `E = ∓m`.
//!
//! With `v' = V_p` the first-order equations integrate directly:
//!
//! ```text
//! E = -m:  ψ₊ = N₊ e^{v},  ψ₋ = [N₋ - i N₊ I₊(x)] e^{-v},  I₊ = +2m ∫ e^{+2v}
//! E = +m:  ψ₋ = N₋ e^{-v}, ψ₊ = [N₊ - i N₋ I₋(x)] e^{+v},  I₋ = -2m ∫ e^{-2v}
//! ```
//!
//! Whether a choice of constants gives a bound state is decided numerically
//! from truncated norms, one component and one end at a time.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dirac::{normalize, Spinor};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::potential::{Branch, PhysicalParams, PotentialTerm};
use crate::quadrature::{integrate, integrate_to_infinity};
use crate::report::{Provenance, SpectrumEntry, SpectrumReport};

/// Relative tolerance of the `I±` quadratures.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;

/// A truncated-norm sequence counts as converged once the newest piece is
/// below this fraction of the accumulated norm.
pub const CAUCHY_TOLERANCE: f64 = 1e-10;

/// Integrals beyond this magnitude are reported as divergent.
pub const TRUNCATION_CAP: f64 = 1e300;

/// Relative accuracy of each truncated-norm piece. Looser than the nested
/// quadratures inside the density so the outer rule is not chasing their noise.
const PIECE_TOLERANCE: f64 = 1e-8;
const MAX_PIECES: usize = 240;
/// Consecutive non-shrinking pieces that signal a divergent norm.
const STALL_RUN: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnergySign {
    #[serde(rename = "E_minus_m")]
    MinusM,
    #[serde(rename = "E_plus_m")]
    PlusM,
}

impl EnergySign {
    pub fn energy(self, m: f64) -> f64 {
        match self {
            EnergySign::MinusM => -m,
            EnergySign::PlusM => m,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EnergySign::MinusM => "E_minus_m",
            EnergySign::PlusM => "E_plus_m",
        }
    }
}

/// `v(x) - v(x0)` for `v' = V_p`, in closed form.
pub fn superpotential_v(p: &PotentialTerm, x: f64, x0: f64) -> Result<f64> {
    p.eval(x)?;
    p.eval(x0)?;
    let k = p.coefficients();
    let dx = x - x0;
    let mut v = k.constant * dx + 0.5 * k.linear * dx * (x + x0);
    if k.coulomb != 0.0 {
        let r = x / x0;
        let log = if (r - 1.0).abs() < 0.5 {
            (dx / x0).ln_1p()
        } else {
            r.ln()
        };
        v -= k.coulomb * log;
    }
    Ok(v)
}

fn exp_two_v(sign: Branch, p: &PotentialTerm, y: f64) -> f64 {
    match p.antiderivative(y) {
        Ok(f) => (2.0 * sign.sign() * f).exp(),
        Err(_) => f64::NAN,
    }
}

fn check_integral(value: f64, converged: bool, what: impl FnOnce() -> String) -> Result<f64> {
    if !value.is_finite() || value.abs() > TRUNCATION_CAP || !converged {
        return Err(Error::DivergentIntegral(what()));
    }
    Ok(value)
}

/// `I±(x) = ±2m ∫_{x0}^{x} e^{±2v(y)} dy` with the canonical `v` (no
/// additive constant).
pub fn quadrature_i(sign: Branch, m: f64, p: &PotentialTerm, x: f64, x0: f64) -> Result<f64> {
    p.eval(x)?;
    p.eval(x0)?;
    if m == 0.0 {
        return Ok(0.0);
    }
    let q = integrate(|y| exp_two_v(sign, p, y), x0, x, QUADRATURE_TOLERANCE, 0.0);
    let value = check_integral(q.value, q.converged, || {
        format!(
            "∫ e^(2{}v) from {x0} to {x} exceeds the truncation cap",
            sign_char(sign)
        )
    })?;
    Ok(2.0 * m * sign.sign() * value)
}

/// `I±(∞)` with lower limit `x0`; `x0 = 0` means the limit `0⁺`.
pub fn quadrature_i_limit(sign: Branch, m: f64, p: &PotentialTerm, x0: f64) -> Result<f64> {
    if !(x0 >= 0.0) || !x0.is_finite() {
        return Err(Error::Domain { x: x0 });
    }
    if x0 > 0.0 {
        p.eval(x0)?;
    }
    if m == 0.0 {
        return Ok(0.0);
    }
    let q = integrate_to_infinity(|y| exp_two_v(sign, p, y), x0, QUADRATURE_TOLERANCE, 0.0);
    let value = check_integral(q.value, q.converged, || {
        format!("∫ e^(2{}v) from {x0} to ∞ diverges", sign_char(sign))
    })?;
    Ok(2.0 * m * sign.sign() * value)
}

fn sign_char(sign: Branch) -> char {
    match sign {
        Branch::Plus => '+',
        Branch::Minus => '-',
    }
}

/// `∫_x^∞ e^{∓2[v(y) - v(x)]} dy`, the tail integral written relative to `x`
/// so it neither overflows nor underflows at either end. Below the length
/// scale `1/√b` the integrand behaves like a power of `y/x`, so that stretch is
/// cut into doubling pieces before the remaining tail is mapped to `[0, 1)`.
fn relative_tail(sign: Branch, p: &PotentialTerm, x: f64) -> Result<f64> {
    let g = |y: f64| match superpotential_v(p, y, x) {
        Ok(dv) => (2.0 * sign.sign() * dv).exp(),
        Err(_) => f64::NAN,
    };
    let b = p.linear_slope();
    let scale = if b > 0.0 { 1.0 / b.sqrt() } else { 1.0 };
    let mut total = 0.0;
    let mut lo = x;
    while lo < 0.5 * scale {
        let q = integrate(g, lo, 2.0 * lo, 1e-12, 0.0);
        total = check_integral(total + q.value, q.converged, || {
            format!("tail integral from x = {x} diverges")
        })?;
        lo *= 2.0;
    }
    let q = integrate_to_infinity(|t| g(lo + t), 0.0, 1e-11, 1e-13 * total);
    check_integral(total + q.value, q.converged, || {
        format!("tail integral from x = {x} diverges")
    })
}

/// Constant multiplying the bracket component (`N₋` at `E = -m`, `N₊` at `E = +m`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bracket {
    Value(Complex64),
    /// `N₊ = i N₋ I₋(∞)`: the only value that cancels the growth of `e^{+v}`
    /// at infinity. Only meaningful at `E = +m`.
    Forced,
}

/// Normalization constants of an isolated solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// Constant of the pure exponential component (`N₊` at `E = -m`,
    /// `N₋` at `E = +m`).
    pub exponential: Complex64,
    pub bracket: Bracket,
}

impl Constants {
    /// Constants given as `(N₊, N₋)` for the chosen threshold.
    pub fn from_pair(sign: EnergySign, n_plus: Complex64, n_minus: Complex64) -> Self {
        match sign {
            EnergySign::MinusM => Constants {
                exponential: n_plus,
                bracket: Bracket::Value(n_minus),
            },
            EnergySign::PlusM => Constants {
                exponential: n_minus,
                bracket: Bracket::Value(n_plus),
            },
        }
    }

    /// `E = +m` with the given `N₋` and the forced `N₊`.
    pub fn forced(n_minus: Complex64) -> Self {
        Constants {
            exponential: n_minus,
            bracket: Bracket::Forced,
        }
    }
}

/// Pointwise evaluator of an isolated solution.
#[derive(Debug, Clone, Copy)]
pub struct IsolatedProfile {
    pub sign: EnergySign,
    pub m: f64,
    pub p: PotentialTerm,
    pub x0: f64,
    pub constants: Constants,
}

impl IsolatedProfile {
    pub fn new(
        sign: EnergySign,
        m: f64,
        p: PotentialTerm,
        x0: f64,
        constants: Constants,
    ) -> Result<Self> {
        p.eval(x0)?;
        if !(x0 > 0.0) {
            return Err(Error::Domain { x: x0 });
        }
        if sign == EnergySign::MinusM && constants.bracket == Bracket::Forced {
            return Err(Error::InvalidParameter(
                "a forced constant exists only for E = +m".into(),
            ));
        }
        let bracket_zero =
            matches!(constants.bracket, Bracket::Value(c) if c == Complex64::new(0.0, 0.0));
        if constants.exponential == Complex64::new(0.0, 0.0) && bracket_zero {
            return Err(Error::InvalidParameter(
                "normalization constants must not both vanish".into(),
            ));
        }
        Ok(IsolatedProfile {
            sign,
            m,
            p,
            x0,
            constants,
        })
    }

    fn v(&self, x: f64) -> Result<f64> {
        superpotential_v(&self.p, x, self.x0)
    }

    fn integral(&self, x: f64) -> Result<f64> {
        let branch = match self.sign {
            EnergySign::MinusM => Branch::Plus,
            EnergySign::PlusM => Branch::Minus,
        };
        if self.m == 0.0 {
            return Ok(0.0);
        }
        let q = integrate(
            |y| match self.v(y) {
                Ok(v) => (2.0 * branch.sign() * v).exp(),
                Err(_) => f64::NAN,
            },
            self.x0,
            x,
            QUADRATURE_TOLERANCE,
            0.0,
        );
        let value = check_integral(q.value, q.converged, || {
            format!("I integral up to x = {x} diverges")
        })?;
        Ok(2.0 * self.m * branch.sign() * value)
    }

    /// `(N₊, N₋)` with a forced constant resolved.
    pub fn resolved_constants(&self) -> Result<(Complex64, Complex64)> {
        let exp = self.constants.exponential;
        let bracket = match self.constants.bracket {
            Bracket::Value(c) => c,
            // i N₋ I₋(∞) = -2 i m N₋ ∫_{x0}^∞ e^{-2v} with v(x0) = 0.
            Bracket::Forced => {
                Complex64::new(0.0, -2.0 * self.m)
                    * exp
                    * relative_tail(Branch::Minus, &self.p, self.x0)?
            }
        };
        Ok(match self.sign {
            EnergySign::MinusM => (exp, bracket),
            EnergySign::PlusM => (bracket, exp),
        })
    }

    fn exponential_component(&self, x: f64) -> Result<Complex64> {
        let s = match self.sign {
            EnergySign::MinusM => 1.0,
            EnergySign::PlusM => -1.0,
        };
        Ok(self.constants.exponential * (s * self.v(x)?).exp())
    }

    fn bracket_component(&self, x: f64) -> Result<Complex64> {
        let n = self.constants.exponential;
        let i = Complex64::i();
        match (self.sign, self.constants.bracket) {
            (EnergySign::PlusM, Bracket::Forced) => {
                if n == Complex64::new(0.0, 0.0) || self.m == 0.0 {
                    return Ok(Complex64::new(0.0, 0.0));
                }
                let tail = relative_tail(Branch::Minus, &self.p, x)?;
                Ok(Complex64::new(0.0, -2.0 * self.m) * n * (-self.v(x)?).exp() * tail)
            }
            (EnergySign::MinusM, Bracket::Value(c)) => {
                let integral = if n == Complex64::new(0.0, 0.0) {
                    0.0
                } else {
                    self.integral(x)?
                };
                Ok((c - i * n * integral) * (-self.v(x)?).exp())
            }
            (EnergySign::PlusM, Bracket::Value(c)) => {
                let integral = if n == Complex64::new(0.0, 0.0) {
                    0.0
                } else {
                    self.integral(x)?
                };
                Ok((c - i * n * integral) * self.v(x)?.exp())
            }
            (EnergySign::MinusM, Bracket::Forced) => {
                unreachable!("rejected in IsolatedProfile::new")
            }
        }
    }

    pub fn upper(&self, x: f64) -> Result<Complex64> {
        match self.sign {
            EnergySign::MinusM => self.exponential_component(x),
            EnergySign::PlusM => self.bracket_component(x),
        }
    }

    pub fn lower(&self, x: f64) -> Result<Complex64> {
        match self.sign {
            EnergySign::MinusM => self.bracket_component(x),
            EnergySign::PlusM => self.exponential_component(x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Origin,
    Infinity,
}

impl End {
    pub fn name(self) -> &'static str {
        match self {
            End::Origin => "the origin",
            End::Infinity => "infinity",
        }
    }
}

/// Truncated norm of `∫ density` from `x0` towards one end, over halving
/// (origin) or doubling (infinity) pieces. `Err` carries the reason the
/// sequence fails to be Cauchy.
pub fn truncated_norm<F: Fn(f64) -> f64>(
    density: F,
    x0: f64,
    end: End,
) -> std::result::Result<f64, String> {
    let mut edge = x0;
    let mut total = 0.0;
    let mut previous = f64::INFINITY;
    let mut stalled = 0;
    for k in 0..MAX_PIECES {
        let next = match end {
            End::Origin => 0.5 * edge,
            End::Infinity => 2.0 * edge,
        };
        let (lo, hi) = if next < edge {
            (next, edge)
        } else {
            (edge, next)
        };
        let piece = integrate(&density, lo, hi, PIECE_TOLERANCE, 0.0).value;
        if !piece.is_finite() || piece > TRUNCATION_CAP {
            return Err(format!("density overflows near x = {next:e}"));
        }
        total += piece;
        if k >= 2 && piece <= CAUCHY_TOLERANCE * total {
            return Ok(total);
        }
        if piece >= previous * (1.0 - 1e-3) {
            stalled += 1;
            if stalled >= STALL_RUN {
                return Err(format!(
                    "truncated norms keep growing (last piece {piece:.3e} near x = {next:e})"
                ));
            }
        } else {
            stalled = 0;
        }
        previous = piece;
        edge = next;
    }
    Err(format!(
        "truncated norms not Cauchy after {MAX_PIECES} pieces"
    ))
}

/// Outcome of the normalizability test.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalizability {
    pub normalizable: bool,
    pub reason: String,
    /// `∫_0^∞ (|ψ₊|² + |ψ₋|²)` when finite.
    pub norm_sqr: Option<f64>,
}

/// Checks each component at each end; the first failure is reported.
pub fn assess(profile: &IsolatedProfile) -> Normalizability {
    let mut total = 0.0;
    for (name, upper) in [("upper component ψ₊", true), ("lower component ψ₋", false)] {
        let density = |x: f64| {
            let z = if upper {
                profile.upper(x)
            } else {
                profile.lower(x)
            };
            z.map(|z| z.norm_sqr()).unwrap_or(f64::NAN)
        };
        for end in [End::Infinity, End::Origin] {
            match truncated_norm(density, profile.x0, end) {
                Ok(part) => total += part,
                Err(why) => {
                    return Normalizability {
                        normalizable: false,
                        reason: format!("{name} is not square-integrable at {}: {why}", end.name()),
                        norm_sqr: None,
                    }
                }
            }
        }
    }
    if !(total > 0.0) {
        return Normalizability {
            normalizable: false,
            reason: "solution vanishes identically".into(),
            norm_sqr: None,
        };
    }
    Normalizability {
        normalizable: true,
        reason: "truncated norms converge at both ends".into(),
        norm_sqr: Some(total),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsolatedCandidate {
    pub energy_sign: EnergySign,
    #[serde(rename = "N_plus")]
    pub n_plus: Complex64,
    #[serde(rename = "N_minus")]
    pub n_minus: Complex64,
    pub v_reference: f64,
    pub normalizable: bool,
    pub reason: String,
}

/// `1/√b`, the default reference point of `v`.
pub fn default_reference(p: &PotentialTerm) -> Result<f64> {
    let b = p.linear_slope();
    if !(b > 0.0) {
        return Err(Error::InvalidParameter("b must be positive".into()));
    }
    Ok(1.0 / b.sqrt())
}

/// Grid with `h = 10⁻³/√b` ending at `8/√b`.
pub fn default_grid(p: &PotentialTerm) -> Result<Grid> {
    let scale = default_reference(p)?;
    Grid::with_spacing(1e-3 * scale, 8.0 * scale)
}

/// Assembles, tests and normalizes an isolated solution on `grid`.
/// `x0 = None` selects `1/√b`.
pub fn build_isolated(
    sign: EnergySign,
    params: &PhysicalParams,
    p: &PotentialTerm,
    constants: Constants,
    grid: &Grid,
    x0: Option<f64>,
) -> Result<(Spinor, IsolatedCandidate)> {
    let x0 = match x0 {
        Some(x0) => x0,
        None => default_reference(p)?,
    };
    if !(p.linear_slope() > 0.0) {
        return Err(Error::InvalidParameter("b must be positive".into()));
    }
    let profile = IsolatedProfile::new(sign, params.m, *p, x0, constants)?;
    let verdict = assess(&profile);
    if !verdict.normalizable {
        return Err(Error::NotNormalizable(verdict.reason));
    }
    let (n_plus, n_minus) = profile.resolved_constants()?;
    let nodes = grid.nodes();
    let upper = nodes
        .iter()
        .map(|&x| profile.upper(x))
        .collect::<Result<Vec<_>>>()?;
    let lower = nodes
        .iter()
        .map(|&x| profile.lower(x))
        .collect::<Result<Vec<_>>>()?;
    let spinor = normalize(&Spinor::new(*grid, upper, lower, sign.energy(params.m))?)?;
    let candidate = IsolatedCandidate {
        energy_sign: sign,
        n_plus,
        n_minus,
        v_reference: x0,
        normalizable: true,
        reason: verdict.reason,
    };
    Ok((spinor, candidate))
}

/// Existence of the threshold states for Cornell `(a, b)`, mass `m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub a: f64,
    pub b: f64,
    pub m: f64,
    #[serde(rename = "E_minus_m")]
    pub e_minus_m: bool,
    #[serde(rename = "E_plus_m")]
    pub e_plus_m: bool,
    pub reasons: Vec<String>,
}

/// The constant choices tried by [`classify_isolated`]. Any other choice
/// differs from one of these by a multiple of a component that diverges.
pub fn candidate_constants(sign: EnergySign) -> Vec<(String, Constants)> {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match sign {
        EnergySign::MinusM => vec![
            ("N_+=0, N_-=1".into(), Constants::from_pair(sign, zero, one)),
            ("N_+=1, N_-=0".into(), Constants::from_pair(sign, one, zero)),
        ],
        EnergySign::PlusM => vec![
            ("N_-=1, N_+=i N_- I_-(inf)".into(), Constants::forced(one)),
            ("N_+=1, N_-=0".into(), Constants::from_pair(sign, one, zero)),
        ],
    }
}

/// Profiles for every candidate choice, each paired with its verdict.
pub fn candidates(
    a: f64,
    b: f64,
    m: f64,
    sign: EnergySign,
) -> Result<Vec<(String, IsolatedProfile, Normalizability)>> {
    let p = PotentialTerm::cornell(a, b);
    let x0 = default_reference(&p)?;
    candidate_constants(sign)
        .into_iter()
        .map(|(label, constants)| {
            let profile = IsolatedProfile::new(sign, m, p, x0, constants)?;
            let verdict = assess(&profile);
            Ok((label, profile, verdict))
        })
        .collect()
}

pub fn classify_isolated(a: f64, b: f64, m: f64) -> Result<Classification> {
    let mut reasons = Vec::new();
    let mut exists = [false; 2];
    for (slot, sign) in [EnergySign::MinusM, EnergySign::PlusM]
        .into_iter()
        .enumerate()
    {
        for (label, _, verdict) in candidates(a, b, m, sign)? {
            exists[slot] |= verdict.normalizable;
            let status = if verdict.normalizable {
                "normalizable"
            } else {
                "rejected"
            };
            reasons.push(format!(
                "{} [{label}]: {status}; {}",
                sign.name(),
                verdict.reason
            ));
        }
    }
    Ok(Classification {
        a,
        b,
        m,
        e_minus_m: exists[0],
        e_plus_m: exists[1],
        reasons,
    })
}

/// Spectrum rows for the threshold states that exist.
pub fn isolated_report(c: &Classification) -> SpectrumReport {
    let mut entries = Vec::new();
    for (exists, energy) in [(c.e_minus_m, -c.m), (c.e_plus_m, c.m)] {
        if exists {
            let mut entry = SpectrumEntry::from_epsilon(
                entries.len(),
                0.0,
                c.m,
                Provenance::Isolated,
                0.0,
                true,
            );
            if energy < 0.0 {
                entry.e_plus = None;
            } else {
                entry.e_minus = None;
            }
            entries.push(entry);
        }
    }
    SpectrumReport {
        branch: None,
        m: c.m,
        extension_dependent: crate::sl::is_extension_dependent(c.a),
        entries,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params() -> PhysicalParams {
        PhysicalParams::new(1.0).unwrap()
    }

    #[test]
    fn superpotential_examples() {
        let p = PotentialTerm::cornell(1.0, 1.0);
        assert_eq!(superpotential_v(&p, 0.7, 0.7).unwrap(), 0.0);
        let v = superpotential_v(&p, 2.0, 1.0).unwrap();
        assert!((v - (1.5 - 2f64.ln())).abs() < 1e-15);
        assert!((v - 0.806853).abs() < 1e-6);
        assert_eq!(
            superpotential_v(&PotentialTerm::Zero, 3.0, 1.0).unwrap(),
            0.0
        );
        assert!(superpotential_v(&p, 0.0, 1.0).is_err());
        // Far below x0 the logarithm must not collapse to ln(0).
        let tiny = superpotential_v(&p, 1e-30, 1.0).unwrap();
        assert!((tiny - (30.0 * 10f64.ln() - 0.5)).abs() < 1e-12);
    }

    #[test]
    fn superpotential_matches_quadrature_of_the_potential() {
        for p in [
            PotentialTerm::cornell(0.3, 2.0),
            PotentialTerm::Constant { c: -1.5 },
            PotentialTerm::Coulomb { a: 2.0 },
            PotentialTerm::Linear { b: 0.5 },
        ] {
            for (x, x0) in [(0.1, 1.0), (3.0, 0.5), (1.0, 1.0 + 1e-9)] {
                let q = integrate(|y| p.eval(y).unwrap(), x0, x, 1e-13, 0.0);
                let v = superpotential_v(&p, x, x0).unwrap();
                assert!(
                    (v - q.value).abs() <= 1e-12 * v.abs().max(1.0),
                    "{p:?}: {v} vs {}",
                    q.value
                );
            }
        }
    }

    #[test]
    fn quadrature_i_examples() {
        let p = PotentialTerm::cornell(1.0, 1.0);
        assert_eq!(quadrature_i(Branch::Plus, 0.0, &p, 50.0, 1.0).unwrap(), 0.0);
        let limit = quadrature_i_limit(Branch::Minus, 1.0, &p, 0.0).unwrap();
        assert!((limit + PI.sqrt() / 2.0).abs() < 1e-10, "{limit}");
        assert!((limit + 0.886227).abs() < 1e-6);
        assert!(matches!(
            quadrature_i(Branch::Plus, 1.0, &p, 50.0, 1.0),
            Err(Error::DivergentIntegral(_))
        ));
        assert!(matches!(
            quadrature_i_limit(Branch::Plus, 1.0, &p, 1.0),
            Err(Error::DivergentIntegral(_))
        ));
        // x^{2a} with a = -1 is not integrable at the origin.
        assert!(
            quadrature_i_limit(Branch::Minus, 1.0, &PotentialTerm::cornell(-1.0, 1.0), 0.0)
                .is_err()
        );
    }

    #[test]
    fn quadrature_i_is_additive_and_antisymmetric() {
        let p = PotentialTerm::cornell(0.5, 1.0);
        let ab = quadrature_i(Branch::Minus, 1.0, &p, 2.0, 0.5).unwrap();
        let a1 = quadrature_i(Branch::Minus, 1.0, &p, 1.0, 0.5).unwrap();
        let b1 = quadrature_i(Branch::Minus, 1.0, &p, 2.0, 1.0).unwrap();
        assert!((ab - a1 - b1).abs() < 1e-12);
        let ba = quadrature_i(Branch::Minus, 1.0, &p, 0.5, 2.0).unwrap();
        assert!((ab + ba).abs() < 1e-14);
    }

    #[test]
    fn truncated_norm_separates_integrable_powers() {
        let decay = |x: f64| x.powf(-0.5) * (-x * x).exp();
        assert!(truncated_norm(decay, 1.0, End::Origin).is_ok());
        assert!(truncated_norm(decay, 1.0, End::Infinity).is_ok());
        assert!(truncated_norm(|x: f64| 1.0 / x, 1.0, End::Origin).is_err());
        assert!(truncated_norm(|x: f64| x.powi(-2), 1.0, End::Origin).is_err());
        assert!(truncated_norm(|x: f64| (x * x).exp(), 1.0, End::Infinity).is_err());
        let exact = 0.5 * PI.sqrt() * 0.157_299_207_050_285_13;
        let tail = truncated_norm(|x: f64| (-x * x).exp(), 1.0, End::Infinity).unwrap();
        assert!((tail - exact).abs() < 1e-12, "{tail} vs {exact}");
    }

    #[test]
    fn e_minus_m_ground_state_is_x_to_the_a_gaussian() {
        let p = PotentialTerm::cornell(1.0, 1.0);
        let grid = default_grid(&p).unwrap();
        let constants = Constants::from_pair(
            EnergySign::MinusM,
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        );
        let (spinor, candidate) =
            build_isolated(EnergySign::MinusM, &params(), &p, constants, &grid, None).unwrap();
        assert!(candidate.normalizable);
        assert_eq!(spinor.energy(), -1.0);
        assert!(spinor.upper().iter().all(|z| z.norm() == 0.0));
        let ratio: Vec<f64> = spinor
            .lower()
            .iter()
            .zip(grid.nodes())
            .filter(|(_, x)| *x < 5.0)
            .map(|(z, x)| z.re / (x * (-0.5 * x * x).exp()))
            .collect();
        let r0 = ratio[0];
        assert!(ratio.iter().all(|r| (r / r0 - 1.0).abs() < 1e-12));
    }

    #[test]
    fn e_minus_m_with_upper_constant_is_not_normalizable() {
        let p = PotentialTerm::cornell(1.0, 1.0);
        let grid = default_grid(&p).unwrap();
        let constants = Constants::from_pair(
            EnergySign::MinusM,
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        );
        match build_isolated(EnergySign::MinusM, &params(), &p, constants, &grid, None) {
            Err(Error::NotNormalizable(why)) => {
                assert!(why.contains("upper") && why.contains("infinity"), "{why}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn e_plus_m_forced_bracket_fails_at_origin_for_a_one() {
        let p = PotentialTerm::cornell(1.0, 1.0);
        let grid = default_grid(&p).unwrap();
        match build_isolated(
            EnergySign::PlusM,
            &params(),
            &p,
            Constants::forced(Complex64::new(1.0, 0.0)),
            &grid,
            None,
        ) {
            Err(Error::NotNormalizable(why)) => {
                assert!(why.contains("upper") && why.contains("origin"), "{why}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn forced_constant_matches_its_definition() {
        let p = PotentialTerm::cornell(0.25, 1.0);
        let profile = IsolatedProfile::new(
            EnergySign::PlusM,
            1.0,
            p,
            1.0,
            Constants::forced(Complex64::new(1.0, 0.0)),
        )
        .unwrap();
        let (n_plus, n_minus) = profile.resolved_constants().unwrap();
        assert_eq!(n_minus, Complex64::new(1.0, 0.0));
        // I₋(∞) from x0 = 1 with v(1) = 0: -2 e^{-2F(1)} ∫_1^∞ e^{-2F}.
        let canonical = quadrature_i_limit(Branch::Minus, 1.0, &p, 1.0).unwrap();
        let shift = (2.0 * p.antiderivative(1.0).unwrap()).exp();
        assert!((n_plus - Complex64::new(0.0, canonical * shift)).norm() < 1e-10);
        // The forced bracket equals the explicit one.
        let explicit = IsolatedProfile::new(
            EnergySign::PlusM,
            1.0,
            p,
            1.0,
            Constants::from_pair(EnergySign::PlusM, n_plus, n_minus),
        )
        .unwrap();
        for x in [0.3, 1.0, 2.0] {
            let a = profile.upper(x).unwrap();
            let b = explicit.upper(x).unwrap();
            assert!((a - b).norm() < 1e-9 * b.norm().max(1.0), "{x}: {a} vs {b}");
        }
    }

    #[test]
    fn classification_examples() {
        let c = classify_isolated(1.0, 1.0, 1.0).unwrap();
        assert!(c.e_minus_m && !c.e_plus_m, "{c:?}");
        let c = classify_isolated(-1.0, 1.0, 1.0).unwrap();
        assert!(!c.e_minus_m && !c.e_plus_m, "{c:?}");
        let c = classify_isolated(0.25, 1.0, 1.0).unwrap();
        assert!(c.e_minus_m && c.e_plus_m, "{c:?}");
        assert_eq!(c.reasons.len(), 4);
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["E_minus_m"], true);
    }

    #[test]
    fn rejects_non_confining_and_empty_choices() {
        let p = PotentialTerm::cornell(1.0, -1.0);
        let grid = Grid::new(0.01, 8.0, 100).unwrap();
        let c = Constants::from_pair(
            EnergySign::MinusM,
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        );
        assert!(build_isolated(EnergySign::MinusM, &params(), &p, c, &grid, None).is_err());
        let zero = Constants::from_pair(
            EnergySign::MinusM,
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        );
        assert!(IsolatedProfile::new(
            EnergySign::MinusM,
            1.0,
            PotentialTerm::cornell(1.0, 1.0),
            1.0,
            zero
        )
        .is_err());
        assert!(IsolatedProfile::new(
            EnergySign::MinusM,
            1.0,
            PotentialTerm::cornell(1.0, 1.0),
            1.0,
            Constants::forced(Complex64::new(1.0, 0.0))
        )
        .is_err());
    }

    #[test]
    fn report_rows() {
        let c = classify_isolated(1.0, 1.0, 1.0).unwrap();
        let r = isolated_report(&c);
        assert_eq!(r.label(), "isolated");
        assert_eq!(r.entries.len(), 1);
        assert_eq!(r.entries[0].e_minus, Some(-1.0));
        assert_eq!(r.entries[0].e_plus, None);
        assert_eq!(r.entries[0].provenance, Provenance::Isolated);
    }
}
