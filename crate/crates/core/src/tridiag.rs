//! Symmetric tridiagonal eigenproblems: Sturm-sequence bisection for
//! eigenvalues, inverse iteration for eigenvectors.

/// Symmetric tridiagonal matrix stored as its diagonal and off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

/// An eigenvalue together with its unit eigenvector and node count.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub value: f64,
    pub vector: Vec<f64>,
    pub nodes: usize,
}

/// Eigenvalues closer than this are treated as numerically degenerate and
/// ordered by node count instead.
pub const DEGENERACY_GAP: f64 = 1e-12;

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(
            off.len() + 1,
            diag.len().max(1),
            "off-diagonal length mismatch"
        );
        SymTridiagonal { diag, off }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `lambda` (negative LDLᵀ pivots).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.dim() {
            let coupling = if i == 0 {
                0.0
            } else {
                self.off[i - 1] * self.off[i - 1] / q
            };
            q = self.diag[i] - lambda - coupling;
            if q == 0.0 {
                q = -f64::EPSILON * (self.diag[i].abs() + lambda.abs()).max(f64::MIN_POSITIVE);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval enclosing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        assert!(index < self.dim());
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * lo.abs().max(hi.abs()) + f64::MIN_POSITIVE;
        lo -= pad;
        hi += pad;
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// The `k` smallest eigenvalues in ascending order.
    pub fn lowest_eigenvalues(&self, k: usize) -> Vec<f64> {
        (0..k.min(self.dim())).map(|i| self.eigenvalue(i)).collect()
    }

    /// Unit eigenvector for an (accurate) eigenvalue by inverse iteration.
    pub fn eigenvector(&self, value: f64) -> Vec<f64> {
        let n = self.dim();
        let scale = self
            .diag
            .iter()
            .chain(&self.off)
            .fold(0.0f64, |acc, x| acc.max(x.abs()))
            .max(1.0);
        let shift = value + 4.0 * f64::EPSILON * scale;
        let lu = TridiagonalLu::factor(self, shift, f64::EPSILON * scale);
        let mut y = vec![1.0; n];
        for _ in 0..4 {
            lu.solve(&mut y);
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            y.iter_mut().for_each(|v| *v /= norm);
        }
        let peak = y.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        if let Some(first) = y.iter().find(|v| v.abs() > 1e-8 * peak) {
            if *first < 0.0 {
                y.iter_mut().for_each(|v| *v = -*v);
            }
        }
        y
    }

    /// Lowest `k` eigenpairs. Numerically degenerate values are ordered by
    /// node count of their eigenvectors.
    pub fn lowest_eigenpairs(&self, k: usize) -> Vec<Eigenpair> {
        let mut pairs: Vec<Eigenpair> = self
            .lowest_eigenvalues(k)
            .into_iter()
            .map(|value| {
                let vector = self.eigenvector(value);
                let nodes = count_nodes(&vector);
                Eigenpair {
                    value,
                    vector,
                    nodes,
                }
            })
            .collect();
        pairs.sort_by(|a, b| {
            if (a.value - b.value).abs() < DEGENERACY_GAP {
                a.nodes.cmp(&b.nodes)
            } else {
                a.value.total_cmp(&b.value)
            }
        });
        pairs
    }
}

/// Sign changes of a sampled function, ignoring negligible samples.
pub fn count_nodes(values: &[f64]) -> usize {
    let peak = values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let floor = 1e-10 * peak;
    let mut last = 0.0f64;
    let mut nodes = 0;
    for &v in values.iter().filter(|v| v.abs() > floor) {
        if last != 0.0 && v.signum() != last.signum() {
            nodes += 1;
        }
        last = v;
    }
    nodes
}

/// LU factorization of `T - shift·I` with partial pivoting.
struct TridiagonalLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagonalLu {
    fn factor(t: &SymTridiagonal, shift: f64, tiny: f64) -> Self {
        let n = t.dim();
        let mut dl = t.off.clone();
        let mut du = t.off.clone();
        let mut d: Vec<f64> = t.diag.iter().map(|x| x - shift).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        for p in d.iter_mut() {
            if p.abs() < tiny {
                *p = if *p < 0.0 { -tiny } else { tiny };
            }
        }
        TridiagonalLu {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}
