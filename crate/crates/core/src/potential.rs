//! Lorentz-decomposed potentials of the 1+1 dimensional Dirac equation.
//!
//! Every potential is one term from a closed enumeration, so values,
//! derivatives and antiderivatives are all available in closed form. Units are
//! natural (ħ = c = 1): energies, masses and inverse lengths share one unit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single potential term.
///
/// The JSON form is a tagged record, e.g. `{"kind":"cornell","a":1.0,"b":1.0}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PotentialTerm {
    #[default]
    Zero,
    /// `c`
    Constant { c: f64 },
    /// `-a/x`
    Coulomb { a: f64 },
    /// `b x`
    Linear { b: f64 },
    /// `-a/x + b x`
    Cornell { a: f64, b: f64 },
}

/// Coefficients of `c - a/x + b x`, the common normal form of every term.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Coefficients {
    pub constant: f64,
    pub coulomb: f64,
    pub linear: f64,
}

impl Coefficients {
    pub fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.coulomb == 0.0 && self.linear == 0.0
    }

    pub fn is_constant(&self) -> bool {
        self.coulomb == 0.0 && self.linear == 0.0
    }
}

impl std::ops::Add for Coefficients {
    type Output = Coefficients;
    fn add(self, rhs: Self) -> Self {
        Coefficients {
            constant: self.constant + rhs.constant,
            coulomb: self.coulomb + rhs.coulomb,
            linear: self.linear + rhs.linear,
        }
    }
}

impl std::ops::Sub for Coefficients {
    type Output = Coefficients;
    fn sub(self, rhs: Self) -> Self {
        Coefficients {
            constant: self.constant - rhs.constant,
            coulomb: self.coulomb - rhs.coulomb,
            linear: self.linear - rhs.linear,
        }
    }
}

/// Sign selecting one of the partner potentials `U± = V_p² ± V_p'`.
///
/// `Plus` governs the upper spinor component, `Minus` the lower one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

impl PotentialTerm {
    pub fn cornell(a: f64, b: f64) -> Self {
        PotentialTerm::Cornell { a, b }
    }

    pub fn coefficients(&self) -> Coefficients {
        match *self {
            PotentialTerm::Zero => Coefficients::default(),
            PotentialTerm::Constant { c } => Coefficients {
                constant: c,
                ..Default::default()
            },
            PotentialTerm::Coulomb { a } => Coefficients {
                coulomb: a,
                ..Default::default()
            },
            PotentialTerm::Linear { b } => Coefficients {
                linear: b,
                ..Default::default()
            },
            PotentialTerm::Cornell { a, b } => Coefficients {
                coulomb: a,
                linear: b,
                ..Default::default()
            },
        }
    }

    /// True when the term contains a `1/x` piece and is only defined for x > 0.
    pub fn is_singular(&self) -> bool {
        matches!(
            self,
            PotentialTerm::Coulomb { .. } | PotentialTerm::Cornell { .. }
        )
    }

    /// Structural zero test: no sampling involved.
    pub fn is_zero(&self) -> bool {
        self.coefficients().is_zero()
    }

    pub fn coulomb_strength(&self) -> f64 {
        self.coefficients().coulomb
    }

    pub fn linear_slope(&self) -> f64 {
        self.coefficients().linear
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if !x.is_finite() || (self.is_singular() && x <= 0.0) {
            return Err(Error::Domain { x });
        }
        Ok(())
    }

    /// Value of the potential at `x`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(match *self {
            PotentialTerm::Zero => 0.0,
            PotentialTerm::Constant { c } => c,
            PotentialTerm::Coulomb { a } => -a / x,
            PotentialTerm::Linear { b } => b * x,
            PotentialTerm::Cornell { a, b } => -a / x + b * x,
        })
    }

    /// Exact first derivative.
    pub fn derivative(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        Ok(match *self {
            PotentialTerm::Zero | PotentialTerm::Constant { .. } => 0.0,
            PotentialTerm::Coulomb { a } => a / (x * x),
            PotentialTerm::Linear { b } => b,
            PotentialTerm::Cornell { a, b } => a / (x * x) + b,
        })
    }

    /// Canonical antiderivative `c x - a ln x + b x²/2` (no additive constant).
    pub fn antiderivative(&self, x: f64) -> Result<f64> {
        self.check_domain(x)?;
        let k = self.coefficients();
        let mut value = k.constant * x + 0.5 * k.linear * x * x;
        if k.coulomb != 0.0 {
            value -= k.coulomb * x.ln();
        }
        Ok(value)
    }
}

/// Vector (`v`), scalar (`s`) and pseudoscalar (`p`) couplings.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LorentzPotentials {
    #[serde(default)]
    pub v: PotentialTerm,
    #[serde(default)]
    pub s: PotentialTerm,
    #[serde(default)]
    pub p: PotentialTerm,
}

impl LorentzPotentials {
    pub fn pure_pseudoscalar(p: PotentialTerm) -> Self {
        LorentzPotentials {
            v: PotentialTerm::Zero,
            s: PotentialTerm::Zero,
            p,
        }
    }

    /// True when both the vector and scalar couplings vanish identically.
    pub fn has_no_vector_or_scalar(&self) -> bool {
        self.v.is_zero() && self.s.is_zero()
    }

    /// `(V_Σ, V_Δ) = (V_v + V_s, V_v - V_s)` at `x`.
    pub fn sigma_delta(&self, x: f64) -> Result<(f64, f64)> {
        let v = self.v.eval(x)?;
        let s = self.s.eval(x)?;
        self.p.eval(x)?;
        Ok((v + s, v - s))
    }

    /// Coefficients of `V_Σ`.
    pub fn sigma_coefficients(&self) -> Coefficients {
        self.v.coefficients() + self.s.coefficients()
    }

    /// Coefficients of `V_Δ`.
    pub fn delta_coefficients(&self) -> Coefficients {
        self.v.coefficients() - self.s.coefficients()
    }

    pub fn is_singular(&self) -> bool {
        self.v.is_singular() || self.s.is_singular() || self.p.is_singular()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub m: f64,
}

impl PhysicalParams {
    pub fn new(m: f64) -> Result<Self> {
        if !m.is_finite() || m < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "rest mass must be finite and non-negative, got {m}"
            )));
        }
        Ok(PhysicalParams { m })
    }
}

/// Parameters of the pseudoscalar Cornell potential `-a/x + b x` and the rest mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornellParams {
    pub a: f64,
    pub b: f64,
    pub m: f64,
}

impl CornellParams {
    pub fn term(&self) -> PotentialTerm {
        PotentialTerm::cornell(self.a, self.b)
    }
}

/// Maps the `m ω x + g/x` parametrisation onto Cornell form: `a = -g`, `b = m ω`.
pub fn from_legacy_params(omega: f64, g: f64, m: f64) -> CornellParams {
    CornellParams {
        a: -g,
        b: m * omega,
        m,
    }
}

/// Free-function form of [`PotentialTerm::eval`].
pub fn eval(term: &PotentialTerm, x: f64) -> Result<f64> {
    term.eval(x)
}

/// Free-function form of [`LorentzPotentials::sigma_delta`].
pub fn sigma_delta(pots: &LorentzPotentials, x: f64) -> Result<(f64, f64)> {
    pots.sigma_delta(x)
}
