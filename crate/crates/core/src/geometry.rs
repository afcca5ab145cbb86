//! Closed parametrized boundary curves, their differential geometry, normal
//! velocity fields, boundary perturbation, and shape derivatives of the
//! tangent/normal frame.
//!
//! Curves are sampled at equidistant parameter nodes over one period. The
//! parameter is the native one (the angle for circles and ellipses); all
//! arc-length derivatives apply the chain rule `d/ds = |γ'|⁻¹ d/dt`.
//! Perturbed curves have no closed form, so their geometry is recomputed by
//! trigonometric-spectral differentiation of the position samples.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::spectral;
use crate::{Error, Result};

static CURVE_IDS: AtomicU64 = AtomicU64::new(1);

/// A smooth closed curve sampled at `n_nodes` equidistant parameter nodes.
///
/// Orientation is counterclockwise with the unit normal
/// `n = [τ₂, -τ₁]` pointing outward, and the signed curvature follows the
/// convention `dn/ds = κ τ` (positive for a circle).
#[derive(Debug, Serialize)]
pub struct BoundaryCurve {
    #[serde(skip)]
    id: u64,
    /// Parameter values `t_j` over one period.
    pub nodes: Vec<f64>,
    /// Positions `γ(t_j)`.
    pub position: Vec<[f64; 2]>,
    /// Parametrization speed `|γ'(t_j)|`.
    pub speed: Vec<f64>,
    /// Unit tangents.
    pub tangent: Vec<[f64; 2]>,
    /// Unit outward normals.
    pub normal: Vec<[f64; 2]>,
    /// Signed curvature `κ(t_j)`.
    pub curvature: Vec<f64>,
    /// Arc-length derivative of the curvature, `∂κ/∂s`.
    pub curvature_arc_derivative: Vec<f64>,
    /// Parameter-space period.
    pub period: f64,
}

impl BoundaryCurve {
    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub(crate) fn id(&self) -> u64 {
        self.id
    }

    /// Parameter step between nodes.
    pub fn dt(&self) -> f64 {
        self.period / self.n_nodes() as f64
    }

    /// Largest arc-length spacing between adjacent nodes.
    pub fn max_node_spacing(&self) -> f64 {
        let dt = self.dt();
        self.speed.iter().fold(0.0f64, |m, &s| m.max(s * dt))
    }

    /// Minimum distance from `p` to the node set.
    pub fn distance_to(&self, p: [f64; 2]) -> f64 {
        self.position
            .iter()
            .map(|q| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt())
            .fold(f64::INFINITY, f64::min)
    }

    /// Winding-number test against the sampled polygon; `true` for points
    /// enclosed by the curve.
    pub fn encloses(&self, p: [f64; 2]) -> bool {
        let mut winding = 0.0f64;
        let n = self.position.len();
        for j in 0..n {
            let a = self.position[j];
            let b = self.position[(j + 1) % n];
            let ang_a = (a[1] - p[1]).atan2(a[0] - p[0]);
            let ang_b = (b[1] - p[1]).atan2(b[0] - p[0]);
            let mut d = ang_b - ang_a;
            while d > std::f64::consts::PI {
                d -= 2.0 * std::f64::consts::PI;
            }
            while d < -std::f64::consts::PI {
                d += 2.0 * std::f64::consts::PI;
            }
            winding += d;
        }
        winding.abs() > std::f64::consts::PI
    }

    /// Arc-length line integral of nodewise samples by the trapezoid rule
    /// (spectrally accurate for periodic integrands).
    pub fn integrate(&self, samples: &[f64]) -> f64 {
        let dt = self.dt();
        samples
            .iter()
            .zip(&self.speed)
            .map(|(v, s)| v * s * dt)
            .sum()
    }

    /// Enclosed area from the position samples.
    pub fn area(&self) -> f64 {
        // 0.5 ∮ (x y' - y x') dt with spectral derivatives
        let n = self.n_nodes();
        let x: Vec<f64> = self.position.iter().map(|p| p[0]).collect();
        let y: Vec<f64> = self.position.iter().map(|p| p[1]).collect();
        let xp = spectral::derivative_real(&x, 1, self.period);
        let yp = spectral::derivative_real(&y, 1, self.period);
        let dt = self.period / n as f64;
        0.5 * (0..n).map(|j| x[j] * yp[j] - y[j] * xp[j]).sum::<f64>() * dt
    }
}

fn node_grid(n_nodes: usize, period: f64) -> Vec<f64> {
    (0..n_nodes)
        .map(|j| period * j as f64 / n_nodes as f64)
        .collect()
}

fn check_nodes(n_nodes: usize) -> Result<()> {
    if n_nodes < 8 || n_nodes % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "n_nodes must be even and >= 8, got {n_nodes}"
        )));
    }
    Ok(())
}

/// Circle of given radius, angle-parametrized over `[0, 2π)`.
pub fn make_circle(radius: f64, n_nodes: usize) -> Result<Arc<BoundaryCurve>> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "circle radius must be positive, got {radius}"
        )));
    }
    check_nodes(n_nodes)?;
    let period = 2.0 * std::f64::consts::PI;
    let nodes = node_grid(n_nodes, period);
    let mut curve = BoundaryCurve {
        id: CURVE_IDS.fetch_add(1, Ordering::Relaxed),
        position: nodes.iter().map(|&t| [radius * t.cos(), radius * t.sin()]).collect(),
        speed: vec![radius; n_nodes],
        tangent: nodes.iter().map(|&t| [-t.sin(), t.cos()]).collect(),
        normal: nodes.iter().map(|&t| [t.cos(), t.sin()]).collect(),
        curvature: vec![1.0 / radius; n_nodes],
        curvature_arc_derivative: vec![0.0; n_nodes],
        period,
        nodes,
    };
    curve.nodes.shrink_to_fit();
    Ok(Arc::new(curve))
}

/// Ellipse `γ(t) = [a cos t, b sin t]` with analytic geometry fields.
pub fn make_ellipse(a: f64, b: f64, n_nodes: usize) -> Result<Arc<BoundaryCurve>> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "ellipse semi-axes must be positive, got a={a}, b={b}"
        )));
    }
    check_nodes(n_nodes)?;
    let period = 2.0 * std::f64::consts::PI;
    let nodes = node_grid(n_nodes, period);
    let mut position = Vec::with_capacity(n_nodes);
    let mut speed = Vec::with_capacity(n_nodes);
    let mut tangent = Vec::with_capacity(n_nodes);
    let mut normal = Vec::with_capacity(n_nodes);
    let mut curvature = Vec::with_capacity(n_nodes);
    let mut curvature_ds = Vec::with_capacity(n_nodes);
    for &t in &nodes {
        let (st, ct) = t.sin_cos();
        let sp = (a * a * st * st + b * b * ct * ct).sqrt();
        position.push([a * ct, b * st]);
        speed.push(sp);
        tangent.push([-a * st / sp, b * ct / sp]);
        normal.push([b * ct / sp, a * st / sp]);
        curvature.push(a * b / (sp * sp * sp));
        // dκ/ds = (dκ/dt)/|γ'| with dκ/dt = -3ab (a²-b²) sin t cos t / sp⁵
        curvature_ds.push(-3.0 * a * b * (a * a - b * b) * st * ct / sp.powi(6));
    }
    Ok(Arc::new(BoundaryCurve {
        id: CURVE_IDS.fetch_add(1, Ordering::Relaxed),
        nodes,
        position,
        speed,
        tangent,
        normal,
        curvature,
        curvature_arc_derivative: curvature_ds,
        period,
    }))
}

/// Rebuild all geometry fields from position samples alone.
fn from_positions(position: Vec<[f64; 2]>, period: f64) -> BoundaryCurve {
    let n = position.len();
    let x: Vec<f64> = position.iter().map(|p| p[0]).collect();
    let y: Vec<f64> = position.iter().map(|p| p[1]).collect();
    let xp = spectral::derivative_real(&x, 1, period);
    let yp = spectral::derivative_real(&y, 1, period);
    let xpp = spectral::derivative_real(&x, 2, period);
    let ypp = spectral::derivative_real(&y, 2, period);
    let mut speed = Vec::with_capacity(n);
    let mut tangent = Vec::with_capacity(n);
    let mut normal = Vec::with_capacity(n);
    let mut curvature = Vec::with_capacity(n);
    for j in 0..n {
        let sp = (xp[j] * xp[j] + yp[j] * yp[j]).sqrt();
        speed.push(sp);
        tangent.push([xp[j] / sp, yp[j] / sp]);
        normal.push([yp[j] / sp, -xp[j] / sp]);
        curvature.push((xp[j] * ypp[j] - yp[j] * xpp[j]) / (sp * sp * sp));
    }
    let kappa_t = spectral::derivative_real(&curvature, 1, period);
    let curvature_ds = kappa_t
        .iter()
        .zip(&speed)
        .map(|(kt, sp)| kt / sp)
        .collect();
    BoundaryCurve {
        id: CURVE_IDS.fetch_add(1, Ordering::Relaxed),
        nodes: node_grid(n, period),
        position,
        speed,
        tangent,
        normal,
        curvature,
        curvature_arc_derivative: curvature_ds,
        period,
    }
}

/// Offset the curve by `Σ_i eps_i v_i(t) n(t)` and recompute its geometry
/// spectrally. Fails when the nodewise offset Jacobian `1 + Σ eps v κ`
/// loses positivity (the offset may then self-intersect).
pub fn perturb(
    curve: &BoundaryCurve,
    fields: &[&VelocityField],
    eps: &[f64],
) -> Result<Arc<BoundaryCurve>> {
    if fields.is_empty() || fields.len() != eps.len() {
        return Err(Error::InvalidArgument(format!(
            "{} velocity fields vs {} magnitudes",
            fields.len(),
            eps.len()
        )));
    }
    let n = curve.n_nodes();
    for f in fields {
        if f.curve_id != curve.id {
            return Err(Error::Mismatch(
                "velocity field sampled on a different curve".into(),
            ));
        }
    }
    let mut offset = vec![0.0f64; n];
    for (f, &e) in fields.iter().zip(eps) {
        for (o, &v) in offset.iter_mut().zip(&f.amplitude) {
            *o += e * v;
        }
    }
    let mut min_jac = f64::INFINITY;
    for j in 0..n {
        min_jac = min_jac.min(1.0 + offset[j] * curve.curvature[j]);
    }
    if min_jac <= 0.0 {
        return Err(Error::SelfIntersectionRisk(min_jac));
    }
    let position: Vec<[f64; 2]> = (0..n)
        .map(|j| {
            [
                curve.position[j][0] + offset[j] * curve.normal[j][0],
                curve.position[j][1] + offset[j] * curve.normal[j][1],
            ]
        })
        .collect();
    Ok(Arc::new(from_positions(position, curve.period)))
}

/// Normal velocity field `v(t) n(t)` sampled on a curve's node set,
/// together with its arc-length derivative.
#[derive(Debug, Clone, Serialize)]
pub struct VelocityField {
    #[serde(skip)]
    curve_id: u64,
    /// Amplitude `v(t_j)`.
    pub amplitude: Vec<f64>,
    /// Arc-length derivative `v̇(t_j) = (dv/dt)/|γ'|`.
    pub arc_derivative: Vec<f64>,
}

impl VelocityField {
    /// Sample `v(t)` at the curve's parameter nodes.
    pub fn from_fn(curve: &BoundaryCurve, v: impl Fn(f64) -> f64) -> Self {
        Self::from_samples(curve, curve.nodes.iter().map(|&t| v(t)).collect())
    }

    pub fn from_samples(curve: &BoundaryCurve, amplitude: Vec<f64>) -> Self {
        assert_eq!(amplitude.len(), curve.n_nodes());
        let dv = spectral::derivative_real(&amplitude, 1, curve.period);
        let arc_derivative = dv.iter().zip(&curve.speed).map(|(d, s)| d / s).collect();
        VelocityField {
            curve_id: curve.id,
            amplitude,
            arc_derivative,
        }
    }

    pub(crate) fn matches(&self, curve: &BoundaryCurve) -> bool {
        self.curve_id == curve.id
    }
}

/// First shape derivative of the unit normal, `δ_v n = -v̇ τ`.
pub fn shape_derivative_normal_1(curve: &BoundaryCurve, v: &VelocityField) -> Vec<[f64; 2]> {
    curve
        .tangent
        .iter()
        .zip(&v.arc_derivative)
        .map(|(t, vd)| [-vd * t[0], -vd * t[1]])
        .collect()
}

/// First shape derivative of the unit tangent, `δ_v τ = v̇ n`.
pub fn shape_derivative_tangent_1(curve: &BoundaryCurve, v: &VelocityField) -> Vec<[f64; 2]> {
    curve
        .normal
        .iter()
        .zip(&v.arc_derivative)
        .map(|(n, vd)| [vd * n[0], vd * n[1]])
        .collect()
}

/// Second shape derivative of the unit normal,
/// `δ_{[v,w]} n = (3vwκ² - v̇ẇ) n + ((vẇ + wv̇)/2) κ τ`.
pub fn shape_derivative_normal_2(
    curve: &BoundaryCurve,
    v: &VelocityField,
    w: &VelocityField,
) -> Vec<[f64; 2]> {
    (0..curve.n_nodes())
        .map(|j| {
            let k = curve.curvature[j];
            let cn = 3.0 * v.amplitude[j] * w.amplitude[j] * k * k
                - v.arc_derivative[j] * w.arc_derivative[j];
            let ct = 0.5
                * (v.amplitude[j] * w.arc_derivative[j] + w.amplitude[j] * v.arc_derivative[j])
                * k;
            [
                cn * curve.normal[j][0] + ct * curve.tangent[j][0],
                cn * curve.normal[j][1] + ct * curve.tangent[j][1],
            ]
        })
        .collect()
}

/// Second shape derivative of the unit tangent,
/// `δ_{[v,w]} τ = (3vwκ² - v̇ẇ) τ - ((vẇ + wv̇)/2) κ n`.
pub fn shape_derivative_tangent_2(
    curve: &BoundaryCurve,
    v: &VelocityField,
    w: &VelocityField,
) -> Vec<[f64; 2]> {
    (0..curve.n_nodes())
        .map(|j| {
            let k = curve.curvature[j];
            let ct = 3.0 * v.amplitude[j] * w.amplitude[j] * k * k
                - v.arc_derivative[j] * w.arc_derivative[j];
            let cn = -0.5
                * (v.amplitude[j] * w.arc_derivative[j] + w.amplitude[j] * v.arc_derivative[j])
                * k;
            [
                ct * curve.tangent[j][0] + cn * curve.normal[j][0],
                ct * curve.tangent[j][1] + cn * curve.normal[j][1],
            ]
        })
        .collect()
}

/// Complex samples of the curve positions, `x + iy`, handy for tests.
pub fn position_complex(curve: &BoundaryCurve) -> Vec<Complex64> {
    curve
        .position
        .iter()
        .map(|p| Complex64::new(p[0], p[1]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

    #[test]
    fn circle_fields() {
        let c = make_circle(2.0, 400).unwrap();
        for &k in &c.curvature {
            assert!((k - 0.5).abs() < 1e-14);
        }
        assert!((c.normal[0][0] - 1.0).abs() < 1e-14);
        assert!(c.normal[0][1].abs() < 1e-14);
        for &s in &c.speed {
            assert!((s - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn gauss_bonnet() {
        let c = make_circle(2.5, 400).unwrap();
        assert!((c.integrate(&c.curvature) - TWO_PI).abs() < 1e-10);
        let e = make_ellipse(3.0, 2.0, 400).unwrap();
        assert!((e.integrate(&e.curvature) - TWO_PI).abs() < 1e-8);
    }

    #[test]
    fn ellipse_vertex_curvature() {
        let e = make_ellipse(3.0, 2.0, 400).unwrap();
        assert!((e.curvature[0] - 0.75).abs() < 1e-14);
    }

    #[test]
    fn degenerate_ellipse_is_circle() {
        let e = make_ellipse(2.0, 2.0, 400).unwrap();
        let c = make_circle(2.0, 400).unwrap();
        for j in 0..400 {
            assert!((e.position[j][0] - c.position[j][0]).abs() < 1e-14);
            assert!((e.position[j][1] - c.position[j][1]).abs() < 1e-14);
            assert!((e.curvature[j] - c.curvature[j]).abs() < 1e-14);
            assert!((e.speed[j] - c.speed[j]).abs() < 1e-14);
        }
    }

    #[test]
    fn invalid_arguments() {
        assert!(make_circle(-1.0, 400).is_err());
        assert!(make_circle(2.0, 7).is_err());
        assert!(make_ellipse(0.0, 2.0, 400).is_err());
    }

    #[test]
    fn uniform_offset_of_circle() {
        let c = make_circle(2.0, 400).unwrap();
        let v = VelocityField::from_fn(&c, |_| 1.0);
        let p = perturb(&c, &[&v], &[0.3]).unwrap();
        for j in 0..400 {
            assert!((p.curvature[j] - 1.0 / 2.3).abs() < 1e-10);
            assert!((p.speed[j] - 2.3).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_perturbation_preserves_geometry() {
        let c = make_ellipse(3.0, 2.0, 400).unwrap();
        let v = VelocityField::from_fn(&c, |t| (2.0 * t).sin());
        let p = perturb(&c, &[&v], &[0.0]).unwrap();
        for j in 0..400 {
            assert!((p.position[j][0] - c.position[j][0]).abs() < 1e-12);
            assert!((p.curvature[j] - c.curvature[j]).abs() < 1e-10);
            assert!((p.speed[j] - c.speed[j]).abs() < 1e-10);
            assert!(
                (p.curvature_arc_derivative[j] - c.curvature_arc_derivative[j]).abs() < 1e-8
            );
        }
    }

    #[test]
    fn star_shape_area_matches_dense_oracle() {
        // v(s) = 0.4 sin(2s/r) cos(3s/r) on a circle of radius 2; the angle
        // parameter is s/r.
        let coarse = make_circle(2.0, 400).unwrap();
        let dense = make_circle(2.0, 3200).unwrap();
        let amp = |t: f64| 0.4 * (2.0 * t).sin() * (3.0 * t).cos();
        let vc = VelocityField::from_fn(&coarse, amp);
        let vd = VelocityField::from_fn(&dense, amp);
        let pc = perturb(&coarse, &[&vc], &[0.3]).unwrap();
        let pd = perturb(&dense, &[&vd], &[0.3]).unwrap();
        assert!((pc.area() - pd.area()).abs() < 1e-8);
    }

    #[test]
    fn self_intersection_guard() {
        let c = make_circle(1.0, 200).unwrap();
        let v = VelocityField::from_fn(&c, |_| -1.0);
        match perturb(&c, &[&v], &[1.1]) {
            Err(Error::SelfIntersectionRisk(_)) => {}
            other => panic!("expected self-intersection error, got {other:?}"),
        }
    }

    #[test]
    fn normal_derivative_first_order() {
        let c = make_circle(2.0, 400).unwrap();
        // constant v has zero arc derivative
        let v = VelocityField::from_fn(&c, |_| 0.7);
        for d in shape_derivative_normal_1(&c, &v) {
            assert!(d[0].abs() < 1e-12 && d[1].abs() < 1e-12);
        }
        // v = sin(s/2) on r=2 means v(t) = sin(t); v̇ = cos(t)/2
        let v = VelocityField::from_fn(&c, |t| t.sin());
        let dn = shape_derivative_normal_1(&c, &v);
        for (j, &t) in c.nodes.iter().enumerate() {
            let want_scale = -0.5 * t.cos();
            assert!((dn[j][0] - want_scale * c.tangent[j][0]).abs() < 1e-10);
            assert!((dn[j][1] - want_scale * c.tangent[j][1]).abs() < 1e-10);
        }
    }

    #[test]
    fn normal_derivative_matches_finite_difference() {
        let c = make_ellipse(3.0, 2.0, 256).unwrap();
        let v = VelocityField::from_fn(&c, |t| 0.4 * (2.0 * t).sin() * (3.0 * t).cos());
        let eps = 1e-6;
        let p = perturb(&c, &[&v], &[eps]).unwrap();
        let dn = shape_derivative_normal_1(&c, &v);
        for j in 0..c.n_nodes() {
            for d in 0..2 {
                let fd = (p.normal[j][d] - c.normal[j][d]) / eps;
                assert!((fd - dn[j][d]).abs() < 1e-5, "node {j} comp {d}");
            }
        }
    }

    #[test]
    fn normal_derivative_second_order() {
        let c = make_circle(2.0, 400).unwrap();
        // constant v = w: 3κ²v² n
        let v = VelocityField::from_fn(&c, |_| 0.5);
        let d2 = shape_derivative_normal_2(&c, &v, &v);
        for (j, d) in d2.iter().enumerate() {
            let want = 3.0 * 0.25 * 0.25; // 3 v² / r²
            assert!((d[0] - want * c.normal[j][0]).abs() < 1e-12);
            assert!((d[1] - want * c.normal[j][1]).abs() < 1e-12);
        }
        // symmetry in (v, w)
        let w = VelocityField::from_fn(&c, |t| (3.0 * t).cos());
        let vw = shape_derivative_normal_2(&c, &v, &w);
        let wv = shape_derivative_normal_2(&c, &w, &v);
        for (a, b) in vw.iter().zip(&wv) {
            assert_eq!(a[0], b[0]);
            assert_eq!(a[1], b[1]);
        }
    }

    #[test]
    fn frame_second_difference_matches_series_expansion() {
        // Second parameter-wise difference of the recomputed normal. The
        // exact expansion of the offset frame gives
        //   d²n/dε² = -v̇² n + 2 v v̇ κ τ,
        // which is what the nodewise second difference must converge to.
        let c = make_circle(2.0, 256).unwrap();
        let v = VelocityField::from_fn(&c, |t| (2.0 * t).sin());
        let eps = 1e-4;
        let plus = perturb(&c, &[&v], &[eps]).unwrap();
        let minus = perturb(&c, &[&v], &[-eps]).unwrap();
        for j in 0..c.n_nodes() {
            let k = c.curvature[j];
            let cn = -v.arc_derivative[j] * v.arc_derivative[j];
            let ct = 2.0 * v.amplitude[j] * v.arc_derivative[j] * k;
            for d in 0..2 {
                let fd =
                    (plus.normal[j][d] - 2.0 * c.normal[j][d] + minus.normal[j][d]) / (eps * eps);
                let want = cn * c.normal[j][d] + ct * c.tangent[j][d];
                assert!((fd - want).abs() < 1e-4, "node {j} comp {d}");
            }
        }
    }

    #[test]
    fn uniform_circle_offset_keeps_frame_fixed() {
        // For constant v the offset of a circle is again a circle and the
        // frame at a fixed parameter does not move at any order in eps.
        let c = make_circle(2.0, 128).unwrap();
        let v = VelocityField::from_fn(&c, |_| 1.0);
        let p = perturb(&c, &[&v], &[0.2]).unwrap();
        for j in 0..c.n_nodes() {
            assert!((p.normal[j][0] - c.normal[j][0]).abs() < 1e-12);
            assert!((p.normal[j][1] - c.normal[j][1]).abs() < 1e-12);
        }
    }

    #[test]
    fn frame_stays_orthonormal_under_perturbation() {
        let c = make_ellipse(3.0, 2.0, 400).unwrap();
        let v = VelocityField::from_fn(&c, |t| 0.4 * (5.0 * t).sin() * (3.0 * t).cos());
        let p = perturb(&c, &[&v], &[0.25]).unwrap();
        for j in 0..p.n_nodes() {
            let t = p.tangent[j];
            let n = p.normal[j];
            assert!((t[0] * t[0] + t[1] * t[1] - 1.0).abs() < 1e-10);
            assert!((n[0] * n[0] + n[1] * n[1] - 1.0).abs() < 1e-10);
            assert!((t[0] * n[0] + t[1] * n[1]).abs() < 1e-10);
        }
    }

    #[test]
    fn tangent_first_derivative_orthogonal_to_tangent() {
        let c = make_ellipse(3.0, 2.0, 128).unwrap();
        let v = VelocityField::from_fn(&c, |t| (4.0 * t).cos());
        let dt = shape_derivative_tangent_1(&c, &v);
        for j in 0..c.n_nodes() {
            let dot = dt[j][0] * c.tangent[j][0] + dt[j][1] * c.tangent[j][1];
            assert!(dot.abs() < 1e-13);
        }
    }

    #[test]
    fn perturb_round_trip_small_eps() {
        let c = make_circle(2.0, 256).unwrap();
        let v = VelocityField::from_fn(&c, |t| (2.0 * t).sin() * (3.0 * t).cos());
        let eps = 1e-5;
        let fwd = perturb(&c, &[&v], &[eps]).unwrap();
        let v_on_fwd = VelocityField::from_samples(&fwd, v.amplitude.clone());
        let back = perturb(&fwd, &[&v_on_fwd], &[-eps]).unwrap();
        for j in 0..c.n_nodes() {
            assert!((back.position[j][0] - c.position[j][0]).abs() < 1e-9);
            assert!((back.position[j][1] - c.position[j][1]).abs() < 1e-9);
        }
    }

    #[test]
    fn curve_serializes_to_json() {
        let c = make_circle(1.0, 8).unwrap();
        let json = serde_json::to_string(&*c).unwrap();
        assert!(json.contains("\"position\""));
        assert!(json.contains("\"curvature\""));
    }
}
