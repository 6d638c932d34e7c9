//! Spin and pseudospin symmetry classification of declared couplings, and the
//! upper/lower route comparison for pure pseudoscalar Cornell problems.
//!
//! Spin symmetry needs `V_Δ` constant, pseudospin symmetry `V_Σ` constant, and
//! either is spoiled by any other coupling. Both tests are structural: they
//! look at the term coefficients, never at sampled values.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::potential::{LorentzPotentials, PhysicalParams, PotentialTerm};
use crate::report::SpectrumReport;
use crate::sl::{is_extension_dependent, solve_route, Route, SolverOptions};

pub const CONTAMINATION: &str = "pseudoscalar contamination";

/// Tolerance on `|ΔE|` between the two routes.
pub const ROUTE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Symmetry {
    Symmetric,
    Broken { reason: String },
}

impl Symmetry {
    pub fn is_symmetric(&self) -> bool {
        matches!(self, Symmetry::Symmetric)
    }

    fn describe(&self) -> String {
        match self {
            Symmetry::Symmetric => "symmetric".into(),
            Symmetry::Broken { reason } => format!("broken ({reason})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryVerdict {
    pub spin: Symmetry,
    pub pseudospin: Symmetry,
    pub pure_pseudoscalar: bool,
}

impl SymmetryVerdict {
    pub fn to_text(&self) -> String {
        format!(
            "spin: {}\npseudospin: {}\npure pseudoscalar: {}\n",
            self.spin.describe(),
            self.pseudospin.describe(),
            if self.pure_pseudoscalar { "yes" } else { "no" }
        )
    }
}

pub fn classify(pots: &LorentzPotentials) -> SymmetryVerdict {
    let pure_pseudoscalar = pots.has_no_vector_or_scalar() && !pots.p.is_zero();
    if !pots.p.is_zero() {
        let broken = Symmetry::Broken {
            reason: CONTAMINATION.into(),
        };
        return SymmetryVerdict {
            spin: broken.clone(),
            pseudospin: broken,
            pure_pseudoscalar,
        };
    }
    let verdict = |constant: bool, name: &str| {
        if constant {
            Symmetry::Symmetric
        } else {
            Symmetry::Broken {
                reason: format!("{name} is not constant"),
            }
        }
    };
    SymmetryVerdict {
        spin: verdict(pots.delta_coefficients().is_constant(), "V_Δ"),
        pseudospin: verdict(pots.sigma_coefficients().is_constant(), "V_Σ"),
        pure_pseudoscalar,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HrLimit {
    SpinLimit,
    PseudospinLimit,
}

impl HrLimit {
    pub fn name(self) -> &'static str {
        match self {
            HrLimit::SpinLimit => "spin_limit",
            HrLimit::PseudospinLimit => "pseudospin_limit",
        }
    }
}

/// The coupling behind either "limit": the spin limit sets `Σ = 0` and
/// `Δ = C_s = 0`, the pseudospin limit `Δ = 0` and `Σ = C_ps = 0`. Both leave
/// `V_v = V_s = 0` and a pure pseudoscalar Cornell term.
pub fn hr_configuration(_which: HrLimit, a: f64, b: f64) -> LorentzPotentials {
    LorentzPotentials::pure_pseudoscalar(PotentialTerm::cornell(a, b))
}

/// Both limits side by side with their verdicts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HrAudit {
    pub requested: HrLimit,
    pub a: f64,
    pub b: f64,
    pub configuration: LorentzPotentials,
    pub verdict: SymmetryVerdict,
    /// Whether the spin-limit and pseudospin-limit configurations coincide.
    pub limits_identical: bool,
}

pub fn hr_audit(which: HrLimit, a: f64, b: f64) -> HrAudit {
    let spin = hr_configuration(HrLimit::SpinLimit, a, b);
    let pseudospin = hr_configuration(HrLimit::PseudospinLimit, a, b);
    let configuration = hr_configuration(which, a, b);
    HrAudit {
        requested: which,
        a,
        b,
        configuration,
        verdict: classify(&configuration),
        limits_identical: spin == pseudospin && classify(&spin) == classify(&pseudospin),
    }
}

impl HrAudit {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "configuration: {} with a = {}, b = {}\nv = s = 0, p = Cornell(a, b)\n",
            self.requested.name(),
            self.a,
            self.b
        );
        s += &self.verdict.to_text();
        let _ = writeln!(
            s,
            "spin and pseudospin limits identical: {}",
            if self.limits_identical { "yes" } else { "no" }
        );
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteRow {
    /// Position among the levels strictly above threshold.
    pub index: usize,
    pub e_upper: f64,
    pub e_lower: f64,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteComparison {
    pub a: f64,
    pub b: f64,
    pub m: f64,
    pub levels: usize,
    pub extension_dependent: bool,
    pub rows: Vec<RouteRow>,
    pub max_delta_e: f64,
    pub tolerance: f64,
    pub agree: bool,
    /// Threshold (`ε = 0`) entries on each route; these are left to the
    /// isolated-solution construction.
    pub upper_thresholds: usize,
    pub lower_thresholds: usize,
    pub upper: SpectrumReport,
    pub lower: SpectrumReport,
}

/// Solves both routes with default grids and compares the `|E| > m` levels.
pub fn route_equivalence_report(a: f64, b: f64, m: f64, k: usize) -> Result<RouteComparison> {
    route_equivalence_with(a, b, m, k, &SolverOptions::default())
}

pub fn route_equivalence_with(
    a: f64,
    b: f64,
    m: f64,
    k: usize,
    options: &SolverOptions,
) -> Result<RouteComparison> {
    let pots = LorentzPotentials::pure_pseudoscalar(PotentialTerm::cornell(a, b));
    let params = PhysicalParams::new(m)?;
    let upper = solve_route(Route::Upper, &pots, &params, k, options)?.report;
    let lower = solve_route(Route::Lower, &pots, &params, k, options)?.report;
    let eu = upper.energies_above_threshold();
    let el = lower.energies_above_threshold();
    let rows: Vec<RouteRow> = eu
        .iter()
        .zip(&el)
        .enumerate()
        .map(|(index, (&e_upper, &e_lower))| RouteRow {
            index,
            e_upper,
            e_lower,
            delta: (e_upper - e_lower).abs(),
        })
        .collect();
    let max_delta_e = rows.iter().fold(0.0f64, |acc, r| acc.max(r.delta));
    Ok(RouteComparison {
        a,
        b,
        m,
        levels: k,
        extension_dependent: is_extension_dependent(a),
        agree: !rows.is_empty() && max_delta_e <= ROUTE_TOLERANCE,
        rows,
        max_delta_e,
        tolerance: ROUTE_TOLERANCE,
        upper_thresholds: upper.threshold_entries().count(),
        lower_thresholds: lower.threshold_entries().count(),
        upper,
        lower,
    })
}

impl RouteComparison {
    pub fn to_text(&self) -> String {
        let mut s = format!(
            "route comparison for Cornell a = {}, b = {}, m = {}, {} levels per route\n",
            self.a, self.b, self.m, self.levels
        );
        let _ = writeln!(
            s,
            "{:>5} {:>22} {:>22} {:>12}",
            "j", "E upper", "E lower", "|dE|"
        );
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>5} {:>22.15} {:>22.15} {:>12.3e}",
                r.index, r.e_upper, r.e_lower, r.delta
            );
        }
        let _ = writeln!(
            s,
            "max |dE| = {:.3e} (tolerance {:.0e})",
            self.max_delta_e, self.tolerance
        );
        let _ = writeln!(s, "routes agree: {}", if self.agree { "yes" } else { "no" });
        let _ = writeln!(
            s,
            "threshold entries: upper {}, lower {}",
            self.upper_thresholds, self.lower_thresholds
        );
        if self.extension_dependent {
            let _ = writeln!(
                s,
                "note: -1/2 < a < 1/2, levels depend on the boundary condition at the origin"
            );
        }
        s
    }

    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        use crate::io::fmt_f64;
        writeln!(out, "index,E_upper,E_lower,delta_E")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{}",
                r.index,
                fmt_f64(r.e_upper),
                fmt_f64(r.e_lower),
                fmt_f64(r.delta)
            )?;
        }
        Ok(())
    }
}
