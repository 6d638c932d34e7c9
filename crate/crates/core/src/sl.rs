//! Eigensolver for `-u'' + U±(x) u = ε u` on the half-line.
//!
//! `U±` splits into an inverse-square part `σ/x²` (with `σ = a² ± a`) and a
//! part `W` that is bounded at the origin. The solver factors the boundary
//! behaviour out of the unknown, `u = x^s w` with `s` the larger indicial root,
//! which turns the problem into the weighted form
//!
//! ```text
//! -(x^{2s} w')' + x^{2s} W w = ε x^{2s} w
//! ```
//!
//! with a smooth `w`. That form is discretized conservatively on a
//! cell-centred grid whose first face sits at the origin (where the flux
//! `x^{2s} w'` vanishes) and symmetrized, so the eigenproblem remains
//! symmetric tridiagonal. Its symmetrized unknown equals `u` at the cell
//! centres. Eigenvalues come from Sturm bisection on two grids, combined by one
//! Richardson step.

use serde::{Deserialize, Serialize};

use crate::dirac::regular_sl_potential;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::potential::{Branch, LorentzPotentials, PhysicalParams, PotentialTerm};
use crate::report::{Provenance, SpectrumEntry, SpectrumReport, THRESHOLD_EPSILON};
use crate::tridiag::SymTridiagonal;

pub const DEFAULT_POINTS: usize = 4001;
pub const DEFAULT_TOLERANCE: f64 = 1e-4;

/// Larger root of the indicial equation `s(s-1) = a² ± a`, i.e. `(1 + |2a ± 1|)/2`.
pub fn boundary_exponent(a: f64, branch: Branch) -> f64 {
    0.5 * (1.0 + (2.0 * a + branch.sign()).abs())
}

/// Both indicial roots `(larger, smaller)`.
pub fn indicial_roots(a: f64, branch: Branch) -> (f64, f64) {
    let s = boundary_exponent(a, branch);
    (s, 1.0 - s)
}

/// Couplings `-1/2 < a < 1/2` put the inverse-square term in the regime where
/// the boundary condition at the origin is a choice, not a consequence.
pub fn is_extension_dependent(a: f64) -> bool {
    a > -0.5 && a < 0.5
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Upper-component equation, `U₊`.
    Upper,
    /// Lower-component equation, `U₋`.
    Lower,
}

impl Route {
    pub fn branch(self) -> Branch {
        match self {
            Route::Upper => Branch::Plus,
            Route::Lower => Branch::Minus,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlProblem {
    pub branch: Branch,
    pub potential: PotentialTerm,
    /// Boundary exponent `s ≥ 1/2`.
    pub exponent: f64,
    pub domain: Grid,
    pub levels: usize,
}

impl SlProblem {
    pub fn new(
        potential: PotentialTerm,
        branch: Branch,
        domain: Grid,
        levels: usize,
    ) -> Result<Self> {
        if levels == 0 {
            return Err(Error::InvalidParameter(
                "at least one level must be requested".into(),
            ));
        }
        Ok(SlProblem {
            branch,
            potential,
            exponent: boundary_exponent(potential.coulomb_strength(), branch),
            domain,
            levels,
        })
    }

    /// Uses [`default_domain`].
    pub fn with_default_domain(
        potential: PotentialTerm,
        branch: Branch,
        levels: usize,
    ) -> Result<Self> {
        let domain = default_domain(&potential, branch, levels.max(1), DEFAULT_POINTS)?;
        SlProblem::new(potential, branch, domain, levels)
    }

    fn regular(&self, x: f64) -> Result<f64> {
        regular_sl_potential(&self.potential, self.branch, x)
    }
}

/// `x_min = 10⁻³/√b`, `x_max = max(8/√b, x where b²x² exceeds the highest sought ε by 40)`.
pub fn default_domain(
    potential: &PotentialTerm,
    branch: Branch,
    levels: usize,
    points: usize,
) -> Result<Grid> {
    let b = potential.linear_slope();
    if !(b > 0.0) {
        return Err(Error::InvalidParameter("b must be positive".into()));
    }
    let (x_min, x_max) = default_bounds(potential, branch, levels);
    Grid::new(x_min, x_max, points)
}

fn default_bounds(potential: &PotentialTerm, branch: Branch, levels: usize) -> (f64, f64) {
    let b = potential.linear_slope();
    let s = boundary_exponent(potential.coulomb_strength(), branch);
    let shift = regular_sl_potential(potential, branch, 1.0).unwrap_or(0.0) - b * b;
    let highest = b * (4.0 * (levels.max(1) - 1) as f64 + 2.0 * s + 1.0) + shift.abs();
    let x_max = (8.0 / b.sqrt()).max((highest + 40.0).sqrt() / b);
    (1e-3 / b.sqrt(), x_max)
}

/// Plain three-point matrix of `-u'' + U u` on the interior nodes of a uniform
/// grid with Dirichlet ends: diagonal `2/h² + U(x_i)`, off-diagonal `-1/h²`.
pub fn three_point_matrix<F>(
    x_min: f64,
    x_max: f64,
    n: usize,
    potential: F,
) -> Result<SymTridiagonal>
where
    F: Fn(f64) -> Result<f64>,
{
    if n < 3 || !(x_max > x_min) {
        return Err(Error::InvalidGrid(format!(
            "need at least one interior node, got n = {n}"
        )));
    }
    let h = (x_max - x_min) / (n - 1) as f64;
    let interior = n - 2;
    let mut diag = Vec::with_capacity(interior);
    let mut max_u = f64::NEG_INFINITY;
    for i in 1..=interior {
        let u = potential(x_min + i as f64 * h)?;
        max_u = max_u.max(u);
        diag.push(2.0 / (h * h) + u);
    }
    let measure = h * h * max_u;
    if measure >= 0.5 {
        return Err(Error::GridTooCoarse { measure });
    }
    Ok(SymTridiagonal::new(
        diag,
        vec![-1.0 / (h * h); interior - 1],
    ))
}

/// Three-point matrix of the problem on its domain (Dirichlet at both ends).
pub fn build_matrix(problem: &SlProblem) -> Result<SymTridiagonal> {
    let d = &problem.domain;
    three_point_matrix(d.x_min(), d.x_max(), d.len(), |x| {
        crate::dirac::effective_sl_potential(&problem.potential, problem.branch, x)
    })
}

/// Symmetrized weighted matrix on `cells` cells covering `[0, x_max]`.
fn factored_matrix(problem: &SlProblem, x_max: f64, cells: usize) -> Result<SymTridiagonal> {
    let s2 = 2.0 * problem.exponent;
    let h = x_max / cells as f64;
    let inv_h2 = 1.0 / (h * h);
    let mut diag = Vec::with_capacity(cells);
    let mut off = Vec::with_capacity(cells - 1);
    let mut max_w = f64::NEG_INFINITY;
    for i in 1..=cells {
        let fi = i as f64;
        let centre = fi - 0.5;
        let left = ((fi - 1.0) / centre).powf(s2);
        let mut right = (fi / centre).powf(s2);
        if i == cells {
            // Dirichlet at the outer face through an antisymmetric ghost cell.
            right *= 2.0;
        }
        let w = problem.regular(centre * h)?;
        max_w = max_w.max(w);
        diag.push((left + right) * inv_h2 + w);
        if i < cells {
            off.push(-(fi * fi / (centre * (fi + 0.5))).powf(problem.exponent) * inv_h2);
        }
    }
    let measure = h * h * max_w;
    if measure >= 0.5 {
        return Err(Error::GridTooCoarse { measure });
    }
    Ok(SymTridiagonal::new(diag, off))
}

/// An eigenfunction sampled at the cell centres of the fine grid, unit
/// trapezoidal norm, positive next to the origin.
#[derive(Debug, Clone)]
pub struct Eigenmode {
    pub n: usize,
    pub epsilon: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct SlSolution {
    pub report: SpectrumReport,
    pub grid: Grid,
    pub modes: Vec<Eigenmode>,
}

/// Eigenvalues of the factored discretization on `cells` cells; exposed for
/// convergence studies.
pub fn raw_eigenvalues(problem: &SlProblem, cells: usize) -> Result<Vec<f64>> {
    let t = factored_matrix(problem, problem.domain.x_max(), cells)?;
    Ok(t.lowest_eigenvalues(problem.levels))
}

/// Solves on `n - 1` and `2(n - 1)` cells, extrapolates, and returns the
/// fine-grid eigenfunctions alongside the report.
pub fn solve(problem: &SlProblem, m: f64, tolerance: f64) -> Result<SlSolution> {
    let x_max = problem.domain.x_max();
    let coarse_cells = problem.domain.len() - 1;
    let fine_cells = 2 * coarse_cells;
    let coarse = factored_matrix(problem, x_max, coarse_cells)?.lowest_eigenvalues(problem.levels);
    let fine = factored_matrix(problem, x_max, fine_cells)?.lowest_eigenpairs(problem.levels);
    if coarse.len() < problem.levels || fine.len() < problem.levels {
        return Err(Error::InvalidGrid(format!(
            "grid supports fewer than {} levels",
            problem.levels
        )));
    }

    let h = x_max / fine_cells as f64;
    let grid = Grid::new(0.5 * h, x_max - 0.5 * h, fine_cells)?;
    let mut entries = Vec::with_capacity(problem.levels);
    let mut modes = Vec::with_capacity(problem.levels);
    for (n, (eps_coarse, pair)) in coarse.iter().zip(fine).enumerate() {
        let eps_fine = pair.value;
        let change = (eps_fine - eps_coarse).abs() / eps_fine.abs().max(1.0);
        if change > tolerance {
            return Err(Error::NonConverged {
                level: n,
                relative_change: change,
                tolerance,
            });
        }
        let extrapolated = (4.0 * eps_fine - eps_coarse) / 3.0;
        let est_error = (eps_fine - extrapolated).abs();
        let threshold = extrapolated.abs() <= THRESHOLD_EPSILON;
        entries.push(SpectrumEntry::from_epsilon(
            n,
            extrapolated,
            m,
            Provenance::Numeric,
            est_error,
            threshold,
        ));
        let mut values = pair.vector;
        let norm = grid
            .trapezoid(&values.iter().map(|v| v * v).collect::<Vec<_>>())
            .sqrt();
        values.iter_mut().for_each(|v| *v /= norm);
        modes.push(Eigenmode {
            n,
            epsilon: extrapolated,
            values,
        });
    }

    Ok(SlSolution {
        report: SpectrumReport {
            branch: Some(problem.branch),
            m,
            extension_dependent: is_extension_dependent(problem.potential.coulomb_strength()),
            entries,
        },
        grid,
        modes,
    })
}

/// Lowest levels with Richardson-extrapolated eigenvalues and the default
/// non-convergence tolerance.
pub fn solve_spectrum(problem: &SlProblem, m: f64) -> Result<SpectrumReport> {
    Ok(solve(problem, m, DEFAULT_TOLERANCE)?.report)
}

/// Grid and tolerance overrides for route solves.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolverOptions {
    pub x_min: Option<f64>,
    pub x_max: Option<f64>,
    pub points: Option<usize>,
    pub tolerance: Option<f64>,
}

impl SolverOptions {
    pub fn domain(&self, potential: &PotentialTerm, branch: Branch, levels: usize) -> Result<Grid> {
        let points = self.points.unwrap_or(DEFAULT_POINTS);
        if let (Some(x_min), Some(x_max)) = (self.x_min, self.x_max) {
            return Grid::new(x_min, x_max, points);
        }
        if !(potential.linear_slope() > 0.0) {
            return Err(Error::InvalidParameter("b must be positive".into()));
        }
        let (x_min, x_max) = default_bounds(potential, branch, levels);
        Grid::new(
            self.x_min.unwrap_or(x_min),
            self.x_max.unwrap_or(x_max),
            points,
        )
    }
}

/// Builds the upper (`U₊`) or lower (`U₋`) problem for a pure pseudoscalar
/// configuration and solves it.
pub fn solve_route(
    route: Route,
    pots: &LorentzPotentials,
    params: &PhysicalParams,
    levels: usize,
    options: &SolverOptions,
) -> Result<SlSolution> {
    if !pots.has_no_vector_or_scalar() {
        return Err(Error::NotPurePseudoscalar);
    }
    let branch = route.branch();
    let domain = options.domain(&pots.p, branch, levels)?;
    let problem = SlProblem::new(pots.p, branch, domain, levels)?;
    solve(
        &problem,
        params.m,
        options.tolerance.unwrap_or(DEFAULT_TOLERANCE),
    )
}

/// [`solve_route`] with default grid and tolerance, returning the report.
pub fn solve_via_route(
    route: Route,
    pots: &LorentzPotentials,
    params: &PhysicalParams,
    levels: usize,
) -> Result<SpectrumReport> {
    Ok(solve_route(route, pots, params, levels, &SolverOptions::default())?.report)
}
