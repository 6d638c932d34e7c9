//! Spectrum tables shared by the numeric solver, the closed-form oracle and
//! the isolated-solution classifier.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::io::{fmt_f64, fmt_opt};
use crate::potential::Branch;

/// Numeric entries with `|ε|` below this are flagged as threshold candidates.
pub const THRESHOLD_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Numeric,
    Analytic,
    Isolated,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::Numeric => "numeric",
            Provenance::Analytic => "analytic",
            Provenance::Isolated => "isolated",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub n: usize,
    pub epsilon: f64,
    /// `+√(m² + ε)`, absent when `ε < -m²`.
    #[serde(rename = "E_plus")]
    pub e_plus: Option<f64>,
    /// `-√(m² + ε)`, absent when `ε < -m²`.
    #[serde(rename = "E_minus")]
    pub e_minus: Option<f64>,
    pub provenance: Provenance,
    pub est_error: f64,
    /// `ε = 0`: the energies `±m` are threshold candidates handed to the
    /// isolated-solution construction.
    pub threshold: bool,
}

impl SpectrumEntry {
    pub fn from_epsilon(
        n: usize,
        epsilon: f64,
        m: f64,
        provenance: Provenance,
        est_error: f64,
        threshold: bool,
    ) -> Self {
        let e2 = m * m + epsilon;
        let (e_plus, e_minus) = if e2 >= 0.0 {
            let e = e2.sqrt();
            (Some(e), Some(-e))
        } else {
            (None, None)
        };
        SpectrumEntry {
            n,
            epsilon,
            e_plus,
            e_minus,
            provenance,
            est_error: est_error.abs(),
            threshold,
        }
    }

    pub fn has_real_energy(&self) -> bool {
        self.e_plus.is_some() || self.e_minus.is_some()
    }
}

/// Ordered levels of one Sturm–Liouville branch (or the isolated states when
/// `branch` is `None`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub branch: Option<Branch>,
    pub m: f64,
    /// Set when the inverse-square term admits more than one self-adjoint
    /// boundary condition, so the levels depend on that choice.
    pub extension_dependent: bool,
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumReport {
    pub fn label(&self) -> &'static str {
        self.branch.map(Branch::name).unwrap_or("isolated")
    }

    pub fn epsilons(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.epsilon).collect()
    }

    pub fn is_strictly_increasing(&self) -> bool {
        self.entries.windows(2).all(|w| w[1].epsilon > w[0].epsilon)
    }

    /// Positive energies of the levels that lie strictly above threshold.
    pub fn energies_above_threshold(&self) -> Vec<f64> {
        self.entries
            .iter()
            .filter(|e| !e.threshold && e.epsilon > 0.0)
            .filter_map(|e| e.e_plus)
            .collect()
    }

    pub fn threshold_entries(&self) -> impl Iterator<Item = &SpectrumEntry> {
        self.entries.iter().filter(|e| e.threshold)
    }
}

pub const SPECTRUM_CSV_HEADER: &str = "branch,n,epsilon,E_plus,E_minus,provenance,est_error";

/// One CSV table for several reports; the leading `branch` column tells them apart.
pub fn write_spectrum_csv<W: Write>(
    mut out: W,
    reports: &[&SpectrumReport],
) -> std::io::Result<()> {
    writeln!(out, "{SPECTRUM_CSV_HEADER}")?;
    for report in reports {
        for e in &report.entries {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                report.label(),
                e.n,
                fmt_f64(e.epsilon),
                fmt_opt(e.e_plus),
                fmt_opt(e.e_minus),
                e.provenance.name(),
                fmt_f64(e.est_error)
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energies_from_epsilon() {
        let e = SpectrumEntry::from_epsilon(1, 4.0, 1.0, Provenance::Analytic, 0.0, false);
        assert_eq!(e.e_plus, Some(5f64.sqrt()));
        assert_eq!(e.e_minus, Some(-(5f64.sqrt())));
        let below = SpectrumEntry::from_epsilon(0, -2.0, 1.0, Provenance::Numeric, 1e-9, false);
        assert!(!below.has_real_energy());
        let t = SpectrumEntry::from_epsilon(0, 0.0, 1.0, Provenance::Analytic, 0.0, true);
        assert_eq!((t.e_plus, t.e_minus), (Some(1.0), Some(-1.0)));
    }

    #[test]
    fn csv_layout() {
        let report = SpectrumReport {
            branch: Some(Branch::Minus),
            m: 1.0,
            extension_dependent: false,
            entries: vec![
                SpectrumEntry::from_epsilon(0, 0.0, 1.0, Provenance::Analytic, 0.0, true),
                SpectrumEntry::from_epsilon(1, -3.0, 1.0, Provenance::Analytic, 0.0, false),
            ],
        };
        let mut buf = Vec::new();
        write_spectrum_csv(&mut buf, &[&report]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], SPECTRUM_CSV_HEADER);
        assert!(lines[1].starts_with(
            "minus,0,0.0000000000000000e0,1.0000000000000000e0,-1.0000000000000000e0,analytic,"
        ));
        assert!(lines[2].contains(",,,analytic,"));
    }

    #[test]
    fn json_uses_capitalised_energy_keys() {
        let e = SpectrumEntry::from_epsilon(0, 4.0, 1.0, Provenance::Numeric, 0.0, false);
        let json = serde_json::to_string(&e).unwrap();
        assert!(json.contains("\"E_plus\"") && json.contains("\"provenance\":\"numeric\""));
    }
}
