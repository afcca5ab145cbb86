//! Nyström discretization of the Helmholtz layer operators on smooth closed
//! curves, off-boundary potential evaluation, and dense complex linear
//! solves.
//!
//! The logarithmic kernel singularity is split off and integrated with the
//! Kress/Martensen trigonometric product rule; the smooth remainder uses the
//! trapezoid rule. Operators are assembled in the curve's native parameter
//! with the speed factor folded into the matrix, so grids hold plain field
//! samples.

use std::sync::Arc;

use num_complex::Complex64;

use crate::geometry::BoundaryCurve;
use crate::specfun;
use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const PI: f64 = std::f64::consts::PI;

/// Complex field samples at the nodes of a boundary curve.
#[derive(Debug, Clone)]
pub struct BoundaryGrid {
    curve: Arc<BoundaryCurve>,
    pub values: Vec<Complex64>,
}

impl BoundaryGrid {
    pub fn new(curve: Arc<BoundaryCurve>, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), curve.n_nodes());
        BoundaryGrid { curve, values }
    }

    pub fn zeros(curve: Arc<BoundaryCurve>) -> Self {
        let n = curve.n_nodes();
        BoundaryGrid {
            curve,
            values: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn from_fn(curve: Arc<BoundaryCurve>, f: impl Fn(usize, f64) -> Complex64) -> Self {
        let values = curve.nodes.iter().enumerate().map(|(j, &t)| f(j, t)).collect();
        BoundaryGrid { curve, values }
    }

    pub fn curve(&self) -> &Arc<BoundaryCurve> {
        &self.curve
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Checks that two grids live on the same curve.
    pub fn same_curve(&self, other: &BoundaryGrid) -> Result<()> {
        if self.curve.id() != other.curve.id() {
            return Err(Error::Mismatch("grids on different curves".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &BoundaryGrid) -> BoundaryGrid {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &BoundaryGrid) -> BoundaryGrid {
        self.zip(other, |a, b| a - b)
    }

    pub fn zip(
        &self,
        other: &BoundaryGrid,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> BoundaryGrid {
        self.same_curve(other).expect("grid curve mismatch");
        BoundaryGrid {
            curve: self.curve.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> BoundaryGrid {
        BoundaryGrid {
            curve: self.curve.clone(),
            values: self.values.iter().map(|&v| c * v).collect(),
        }
    }

    /// Pointwise product with real nodewise weights.
    pub fn mul_real(&self, w: &[f64]) -> BoundaryGrid {
        assert_eq!(w.len(), self.values.len());
        BoundaryGrid {
            curve: self.curve.clone(),
            values: self.values.iter().zip(w).map(|(&v, &x)| v * x).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.norm()))
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone)]
pub struct ComplexMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    pub data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Self {
        ComplexMatrix {
            n_rows,
            n_cols,
            data: vec![Complex64::new(0.0, 0.0); n_rows * n_cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n_cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n_cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n_cols);
        (0..self.n_rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(Complex64::new(0.0, 0.0), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, other: &ComplexMatrix, c: Complex64) {
        assert_eq!(self.data.len(), other.data.len());
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a += c * b;
        }
    }

    /// `self += c * I`
    pub fn add_identity(&mut self, c: Complex64) {
        assert_eq!(self.n_rows, self.n_cols);
        for i in 0..self.n_rows {
            self.data[i * self.n_cols + i] += c;
        }
    }

    pub fn scale(&mut self, c: Complex64) {
        for a in self.data.iter_mut() {
            *a *= c;
        }
    }

    /// Copies `block` into `self` with its upper-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &ComplexMatrix) {
        for i in 0..block.n_rows {
            for j in 0..block.n_cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }
}

/// Which layer operator a matrix discretizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// Single layer `S`.
    Single,
    /// Double layer `D` (principal value).
    Double,
    /// Adjoint double layer `K'` (normal derivative of the single layer).
    AdjointDouble,
    /// Identity.
    Identity,
}

/// A discretized boundary operator on a specific curve at wavenumber `k`.
#[derive(Debug, Clone)]
pub struct BoundaryOperator {
    pub matrix: ComplexMatrix,
    pub kind: OperatorKind,
    pub wavenumber: f64,
    curve: Arc<BoundaryCurve>,
}

impl BoundaryOperator {
    pub fn curve(&self) -> &Arc<BoundaryCurve> {
        &self.curve
    }

    pub fn apply(&self, grid: &BoundaryGrid) -> BoundaryGrid {
        assert_eq!(
            grid.curve().id(),
            self.curve.id(),
            "operator/grid curve mismatch"
        );
        BoundaryGrid {
            curve: grid.curve().clone(),
            values: self.matrix.matvec(&grid.values),
        }
    }
}

/// Kress quadrature weights `R_l` for the kernel `ln(4 sin²((t-s)/2))` on an
/// equidistant grid with an even number of nodes; `l` is the index offset.
fn kress_weights(n_nodes: usize) -> Vec<f64> {
    let half = n_nodes / 2;
    let mut r = vec![0.0f64; n_nodes];
    for (l, rl) in r.iter_mut().enumerate() {
        let angle = l as f64 * PI / half as f64; // t_i - t_j = l * 2pi / n
        let mut sum = 0.0;
        for m in 1..half {
            sum += (m as f64 * angle).cos() / m as f64;
        }
        let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
        *rl = -2.0 * PI / half as f64 * sum - PI / (half * half) as f64 * sign;
    }
    r
}

struct KernelEntry {
    single: Complex64,
    single_log: Complex64,
    double: Complex64,
    double_log: Complex64,
    adjoint: Complex64,
    adjoint_log: Complex64,
}

/// Full and log-part kernels at nodes (i, j), i != j. The speed factor of
/// the integration variable is folded in.
fn kernels_offdiag(curve: &BoundaryCurve, k: f64, i: usize, j: usize) -> KernelEntry {
    let xi = curve.position[i];
    let yj = curve.position[j];
    let dx = xi[0] - yj[0];
    let dy = xi[1] - yj[1];
    let r = (dx * dx + dy * dy).sqrt();
    let sp = curve.speed[j];
    let [bj0, bj1, by0, by1] = specfun::j0j1y0y1(k * r);
    let h0 = Complex64::new(bj0, by0);
    let h1 = Complex64::new(bj1, by1);
    let q = (dx * curve.normal[j][0] + dy * curve.normal[j][1]) / r;
    let p = (dx * curve.normal[i][0] + dy * curve.normal[i][1]) / r;
    let i4 = Complex64::new(0.0, 0.25);
    KernelEntry {
        single: i4 * h0 * sp,
        single_log: Complex64::new(-bj0 / (4.0 * PI) * sp, 0.0),
        double: i4 * k * h1 * q * sp,
        double_log: Complex64::new(-k / (4.0 * PI) * bj1 * q * sp, 0.0),
        adjoint: -i4 * k * h1 * p * sp,
        adjoint_log: Complex64::new(k / (4.0 * PI) * bj1 * p * sp, 0.0),
    }
}

fn log_weight(curve: &BoundaryCurve, i: usize, j: usize) -> f64 {
    // ln(4 sin²((t_i - t_j)/2))
    let d = 0.5 * (curve.nodes[i] - curve.nodes[j]);
    (4.0 * d.sin() * d.sin()).ln()
}

/// Assembles the single, double, and adjoint-double layer operators in one
/// kernel pass; entries (i,j) and (j,i) share the Hankel evaluations.
pub fn assemble_all(
    curve: &Arc<BoundaryCurve>,
    k: f64,
) -> (BoundaryOperator, BoundaryOperator, BoundaryOperator) {
    let n = curve.n_nodes();
    let rw = kress_weights(n);
    let trap = 2.0 * PI / n as f64;
    let mut s = ComplexMatrix::zeros(n, n);
    let mut d = ComplexMatrix::zeros(n, n);
    let mut kp = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let e = kernels_offdiag(curve, k, i, j);
            let lw = log_weight(curve, i, j);
            let rl = rw[j - i];
            s.set(i, j, rl * e.single_log + trap * (e.single - e.single_log * lw));
            d.set(i, j, rl * e.double_log + trap * (e.double - e.double_log * lw));
            kp.set(i, j, rl * e.adjoint_log + trap * (e.adjoint - e.adjoint_log * lw));
            // (j, i): the distance is symmetric; the speed factor and the
            // roles of the two normals swap.
            let scale = curve.speed[i] / curve.speed[j];
            let single_ji = e.single * scale;
            let single_log_ji = e.single_log * scale;
            let double_ji = -e.adjoint * scale;
            let double_log_ji = -e.adjoint_log * scale;
            let adjoint_ji = -e.double * scale;
            let adjoint_log_ji = -e.double_log * scale;
            s.set(j, i, rl * single_log_ji + trap * (single_ji - single_log_ji * lw));
            d.set(j, i, rl * double_log_ji + trap * (double_ji - double_log_ji * lw));
            kp.set(j, i, rl * adjoint_log_ji + trap * (adjoint_ji - adjoint_log_ji * lw));
        }
        // diagonal limits
        let sp = curve.speed[i];
        let kappa = curve.curvature[i];
        let s1 = Complex64::new(-sp / (4.0 * PI), 0.0);
        let s2 = sp
            * Complex64::new(
                -EULER_GAMMA / (2.0 * PI) - (0.5 * k * sp).ln() / (2.0 * PI),
                0.25,
            );
        s.set(i, i, rw[0] * s1 + trap * s2);
        let l2 = Complex64::new(-kappa * sp / (4.0 * PI), 0.0);
        d.set(i, i, trap * l2);
        kp.set(i, i, trap * l2);
    }
    let mk = |matrix, kind| BoundaryOperator {
        matrix,
        kind,
        wavenumber: k,
        curve: curve.clone(),
    };
    (
        mk(s, OperatorKind::Single),
        mk(d, OperatorKind::Double),
        mk(kp, OperatorKind::AdjointDouble),
    )
}

/// Assembles one layer operator.
pub fn assemble(kind: OperatorKind, curve: &Arc<BoundaryCurve>, k: f64) -> Result<BoundaryOperator> {
    if !(k > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "wavenumber must be positive, got {k}"
        )));
    }
    if kind == OperatorKind::Identity {
        return Ok(BoundaryOperator {
            matrix: ComplexMatrix::identity(curve.n_nodes()),
            kind,
            wavenumber: k,
            curve: curve.clone(),
        });
    }
    let (s, d, kp) = assemble_all(curve, k);
    Ok(match kind {
        OperatorKind::Single => s,
        OperatorKind::Double => d,
        OperatorKind::AdjointDouble => kp,
        OperatorKind::Identity => unreachable!(),
    })
}

/// Free-space Green's function `(i/4) H0(k|x-y|)`.
pub fn greens_function(k: f64, x: [f64; 2], y: [f64; 2]) -> Result<Complex64> {
    let r = ((x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2)).sqrt();
    if r == 0.0 {
        return Err(Error::SingularPoint);
    }
    Ok(Complex64::new(0.0, 0.25) * specfun::hankel1(0, k * r)?)
}

/// Trapezoid-rule evaluation of the single or double layer potential at
/// points off the boundary. Points closer than one node spacing trigger a
/// warning; the plain quadrature loses accuracy there.
pub fn eval_potential(
    kind: OperatorKind,
    density: &BoundaryGrid,
    points: &[[f64; 2]],
    k: f64,
) -> Vec<Complex64> {
    let curve = density.curve();
    let n = curve.n_nodes();
    let trap = 2.0 * PI / n as f64;
    let spacing = curve.max_node_spacing();
    points
        .iter()
        .map(|&x| {
            if curve.distance_to(x) < spacing {
                log::warn!("potential evaluated within one node spacing of the boundary");
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let y = curve.position[j];
                let dx = x[0] - y[0];
                let dy = x[1] - y[1];
                let r = (dx * dx + dy * dy).sqrt();
                let sp = curve.speed[j];
                let [bj0, bj1, by0, by1] = specfun::j0j1y0y1(k * r);
                let kern = match kind {
                    OperatorKind::Single => {
                        Complex64::new(0.0, 0.25) * Complex64::new(bj0, by0)
                    }
                    OperatorKind::Double => {
                        let q = (dx * curve.normal[j][0] + dy * curve.normal[j][1]) / r;
                        Complex64::new(0.0, 0.25) * k * Complex64::new(bj1, by1) * q
                    }
                    _ => panic!("eval_potential supports single and double layers"),
                };
                acc += kern * density.values[j] * sp;
            }
            acc * trap
        })
        .collect()
}

/// LU factorization with partial pivoting of a square complex matrix.
#[derive(Debug)]
pub struct FactorizedSystem {
    lu: ComplexMatrix,
    pivots: Vec<usize>,
    /// Ratio `min |u_ii| / max |u_ii|`, a cheap conditioning proxy.
    pub rcond_proxy: f64,
    pub size: usize,
}

/// Factorizes `A = P L U` with partial pivoting.
pub fn factorize(matrix: &ComplexMatrix) -> Result<FactorizedSystem> {
    assert_eq!(matrix.n_rows, matrix.n_cols, "factorize needs a square matrix");
    let n = matrix.n_rows;
    let mut lu = matrix.clone();
    let mut pivots = vec![0usize; n];
    let scale = matrix
        .data
        .iter()
        .fold(0.0f64, |m, v| m.max(v.re.abs() + v.im.abs()))
        .max(f64::MIN_POSITIVE);
    for col in 0..n {
        let mut best = col;
        let mut best_mag = -1.0f64;
        for row in col..n {
            let v = lu.get(row, col);
            let mag = v.re.abs() + v.im.abs();
            if mag > best_mag {
                best_mag = mag;
                best = row;
            }
        }
        if best_mag <= 1e-14 * scale {
            return Err(Error::SingularMatrix {
                col,
                pivot: best_mag,
            });
        }
        pivots[col] = best;
        if best != col {
            for j in 0..n {
                let a = lu.get(col, j);
                let b = lu.get(best, j);
                lu.set(col, j, b);
                lu.set(best, j, a);
            }
        }
        let inv_pivot = Complex64::new(1.0, 0.0) / lu.get(col, col);
        for row in (col + 1)..n {
            let factor = lu.get(row, col) * inv_pivot;
            lu.set(row, col, factor);
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            let (upper, lower) = lu.data.split_at_mut(row * n);
            let pivot_row = &upper[col * n + col + 1..col * n + n];
            let target = &mut lower[col + 1..n];
            for (t, &p) in target.iter_mut().zip(pivot_row) {
                *t -= factor * p;
            }
        }
    }
    let mut min_u = f64::INFINITY;
    let mut max_u = 0.0f64;
    for i in 0..n {
        let m = lu.get(i, i).norm();
        min_u = min_u.min(m);
        max_u = max_u.max(m);
    }
    Ok(FactorizedSystem {
        lu,
        pivots,
        rcond_proxy: min_u / max_u,
        size: n,
    })
}

impl FactorizedSystem {
    /// Solves `A x = b` from the stored factorization.
    pub fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(rhs.len(), self.size);
        let n = self.size;
        let mut x = rhs.to_vec();
        for col in 0..n {
            let p = self.pivots[col];
            if p != col {
                x.swap(col, p);
            }
        }
        // forward substitution (unit lower triangle)
        for i in 1..n {
            let row = self.lu.row(i);
            let mut acc = x[i];
            for (j, xv) in x.iter().enumerate().take(i) {
                acc -= row[j] * xv;
            }
            x[i] = acc;
        }
        // back substitution
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let mut acc = x[i];
            for (j, xv) in x.iter().enumerate().skip(i + 1) {
                acc -= row[j] * xv;
            }
            x[i] = acc / row[i];
        }
        x
    }

    pub fn solve_grid(&self, rhs: &BoundaryGrid) -> BoundaryGrid {
        BoundaryGrid {
            curve: rhs.curve().clone(),
            values: self.solve(&rhs.values),
        }
    }
}
