//! Reference computations shared by the integration tests. Nothing here calls
//! into the crate's own eigensolver.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use statrs::function::gamma::{gamma, gamma_ur};

/// The (a, b) grid the accuracy checks sweep over.
pub const PAIRS: [(f64, f64); 12] = [
    (0.5, 0.5),
    (0.5, 1.0),
    (0.5, 2.0),
    (1.0, 0.5),
    (1.0, 1.0),
    (1.0, 2.0),
    (2.0, 0.5),
    (2.0, 1.0),
    (2.0, 2.0),
    (5.0, 0.5),
    (5.0, 1.0),
    (5.0, 2.0),
];

/// Lowest `k` eigenvalues of `-u'' + [σ/x² + W(x)] u` on `(0, L)` from a dense
/// symmetric matrix solved by QR iteration.
///
/// The singular part is absorbed through `u = x^s w` with `s` the larger root
/// of `s² - s - σ = 0`; `w` obeys `-(x^{2s} w')' / x^{2s} + W w = ε w`. That is
/// discretized on cell centres `x_i = (i - 1/2) h`, with zero flux through the
/// face at the origin and `w = 0` on the face at `L`.
pub fn dense_levels(
    sigma: f64,
    w: impl Fn(f64) -> f64,
    length: f64,
    cells: usize,
    k: usize,
) -> Vec<f64> {
    let s = 0.5 * (1.0 + (1.0 + 4.0 * sigma).sqrt());
    let h = length / cells as f64;
    let centre = |i: usize| (i as f64 + 0.5) * h;
    let face = |i: usize| (i as f64 + 1.0) * h; // right face of cell i
    let mut a = DMatrix::<f64>::zeros(cells, cells);
    for i in 0..cells {
        let xi = centre(i);
        let right = face(i).powf(2.0 * s);
        let left = if i == 0 {
            0.0
        } else {
            face(i - 1).powf(2.0 * s)
        };
        // Half-cell distance to the Dirichlet face.
        let right_diag = if i + 1 == cells { 2.0 * right } else { right };
        a[(i, i)] = (left + right_diag) / (h * h * xi.powf(2.0 * s)) + w(xi);
        if i + 1 < cells {
            let off = -right / (h * h * xi.powf(s) * centre(i + 1).powf(s));
            a[(i, i + 1)] = off;
            a[(i + 1, i)] = off;
        }
    }
    let mut values: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values.truncate(k);
    values
}

/// Richardson-combined dense levels from `cells` and `2·cells`.
pub fn dense_levels_extrapolated(
    sigma: f64,
    w: impl Fn(f64) -> f64 + Copy,
    length: f64,
    cells: usize,
    k: usize,
) -> Vec<f64> {
    let coarse = dense_levels(sigma, w, length, cells, k);
    let fine = dense_levels(sigma, w, length, 2 * cells, k);
    coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| (4.0 * f - c) / 3.0)
        .collect()
}

/// Dense levels of `U±` for Cornell `(a, b)`; `sign` is +1 or -1.
pub fn cornell_dense(a: f64, b: f64, sign: f64, k: usize) -> Vec<f64> {
    let sigma = a * a + sign * a;
    let top = b * (4.0 * k as f64 + 2.0 * a.abs() + 4.0);
    let length = (8.0 / b.sqrt()).max((top + 40.0).sqrt() / b);
    dense_levels_extrapolated(
        sigma,
        move |x| b * b * x * x - 2.0 * a * b + sign * b,
        length,
        300,
        k,
    )
}

/// `(ε_n)` from the singular-oscillator formula, written out independently.
pub fn formula(n: usize, a: f64, b: f64, sign: f64) -> f64 {
    let sigma = a * a + sign * a;
    let s = 0.5 * (1.0 + (1.0 + 4.0 * sigma).sqrt());
    b * (4.0 * n as f64 + 2.0 * s + 1.0) - 2.0 * a * b + sign * b
}

pub fn relative(x: f64, reference: f64) -> f64 {
    (x - reference).abs() / reference.abs().max(1.0)
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

/// Trapezoid-normalized copy of real samples on a uniform grid.
pub fn normalized(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    let sq: f64 = values.iter().map(|v| v * v).sum::<f64>()
        - 0.5 * (values[0].powi(2) + values[n - 1].powi(2));
    let norm = (h * sq).sqrt();
    values.iter().map(|v| v / norm).collect()
}

/// Normalized analytic eigenspinor on `with_spacing(h, length)` built from the
/// minus-branch mode `n ≥ 1` of Cornell `(a, b)`: `ψ₋ = u`,
/// `ψ₊ = -i (u' + V_p u)/(E - m)` with the exact derivative and `E > m`.
pub fn analytic_spinor(
    a: f64,
    b: f64,
    m: f64,
    n: usize,
    h: f64,
    length: f64,
) -> dirac1d::dirac::Spinor {
    use dirac1d::analytic::OscillatorMode;
    let mode = OscillatorMode::new(n, dirac1d::Branch::Minus, a, b).unwrap();
    let epsilon = dirac1d::analytic::analytic_epsilon(n, dirac1d::Branch::Minus, a, b).unwrap();
    let energy = (m * m + epsilon).sqrt();
    let grid = dirac1d::Grid::with_spacing(h, length).unwrap();
    let mut upper = Vec::with_capacity(grid.len());
    let mut lower = Vec::with_capacity(grid.len());
    for x in grid.nodes() {
        let u = mode.value(x).unwrap();
        let du = mode.derivative(x).unwrap();
        let vp = -a / x + b * x;
        lower.push(Complex64::new(u, 0.0));
        upper.push(Complex64::new(0.0, -(du + vp * u) / (energy - m)));
    }
    let spinor = dirac1d::dirac::Spinor::new(grid, upper, lower, energy).unwrap();
    dirac1d::dirac::normalize(&spinor).unwrap()
}

/// Forced `ψ₊` at `E = +m` for Cornell `(a, b)` with `N₋ = 1`:
/// `-2im e^{v(x)} ∫_x^∞ e^{-2v(y)} dy`, where `v` vanishes at `x0` and the
/// integral is an upper incomplete gamma function.
pub fn forced_upper_closed_form(a: f64, b: f64, m: f64, x0: f64, x: f64) -> Complex64 {
    let e_v = (x / x0).powf(-a) * (0.5 * b * (x * x - x0 * x0)).exp();
    let weight = x0.powf(-2.0 * a) * (b * x0 * x0).exp();
    let nu = a + 0.5;
    let tail = gamma(nu) * gamma_ur(nu, b * x * x) / (2.0 * b.powf(nu));
    Complex64::new(0.0, -2.0 * m * e_v * weight * tail)
}

/// Partial norms of the closed-form forced state over `[2^{-k-1}, 2^{-k}]`.
/// Simpson in `log x` with many panels: independent of the crate's quadrature.
pub fn origin_pieces(a: f64, pieces: usize) -> Vec<f64> {
    let density = |x: f64| {
        let up = forced_upper_closed_form(a, 1.0, 1.0, 1.0, x).norm_sqr();
        let lo = x.powf(2.0 * a) * (-(x * x - 1.0)).exp();
        up + lo
    };
    (0..pieces)
        .map(|k| {
            let (lo, hi) = (
                (0.5f64).powi(k as i32 + 1).ln(),
                (0.5f64).powi(k as i32).ln(),
            );
            let n = 200;
            let h = (hi - lo) / n as f64;
            let f = |t: f64| density(t.exp()) * t.exp();
            let mut sum = f(lo) + f(hi);
            for i in 1..n {
                sum += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            sum * h / 3.0
        })
        .collect()
}
