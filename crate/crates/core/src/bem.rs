//! Layer potentials for the planar Laplacian and their Nyström matrices.
//!
//! Conventions: S(x) = log|x| / 2π, the single layer is v[φ](x) = ∫ φ S(x−y) dσ_y
//! and the double layer is w[ψ](x) = −∫ ψ ν(y)·∇S(x−y) dσ_y. With these,
//! w[1] = 1 inside and 0 outside, the double-layer trace satisfies
//! w± = ±ψ/2 + Wψ and the single-layer normal derivative ν·∇v± = ∓φ/2 + W*φ,
//! where + is the inside.

use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::geometry::{segments_cross, ParamCurve, Point};

/// Largest derivative order accepted by [`deriv_s`].
pub const MAX_S_ORDER: usize = 8;

/// Default near-boundary rejection factor (in node spacings).
pub const DEFAULT_DELTA: f64 = 5.0;

/// Nyström discretization of a closed curve on t_j = 2πj/n.
#[derive(Clone, Debug)]
pub struct BoundaryGrid {
    pub curve: ParamCurve,
    pub n: usize,
    pub t: Vec<f64>,
    pub points: Vec<Point>,
    pub normals: Vec<Point>,
    pub speeds: Vec<f64>,
    pub curvatures: Vec<f64>,
    /// Arc-length weights (2π/n)·|γ'(t_j)|.
    pub ds: Vec<f64>,
}

impl BoundaryGrid {
    pub fn new(curve: &ParamCurve, n: usize) -> Result<Self> {
        if n < 16 || !n.is_multiple_of(2) {
            return Err(Error::Resolution(format!("node count must be even and >= 16, got {n}")));
        }
        let h = 2.0 * PI / n as f64;
        let mut g = BoundaryGrid {
            curve: curve.clone(),
            n,
            t: Vec::with_capacity(n),
            points: Vec::with_capacity(n),
            normals: Vec::with_capacity(n),
            speeds: Vec::with_capacity(n),
            curvatures: Vec::with_capacity(n),
            ds: Vec::with_capacity(n),
        };
        for j in 0..n {
            let t = h * j as f64;
            let cp = curve.point_normal_speed(t);
            g.t.push(t);
            g.points.push(cp.point);
            g.normals.push(cp.normal);
            g.speeds.push(cp.speed);
            g.curvatures.push(cp.curvature);
            g.ds.push(h * cp.speed);
        }
        Ok(g)
    }

    pub fn same_as(&self, other: &BoundaryGrid) -> bool {
        self.n == other.n && self.curve == other.curve
    }

    /// Largest arc-length node spacing.
    pub fn spacing(&self) -> f64 {
        self.ds.iter().copied().fold(0.0, f64::max)
    }

    /// ∫ f dσ by the trapezoid rule.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        f.iter().zip(&self.ds).map(|(a, w)| a * w).sum()
    }

    /// Weighted inner product ⟨f, g⟩ = Σ w_j f_j g_j.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        f.iter().zip(g).zip(&self.ds).map(|((a, b), w)| a * b * w).sum()
    }

    pub fn length(&self) -> f64 {
        self.ds.iter().sum()
    }

    /// Smallest distance from `p` to a node.
    pub fn node_distance(&self, p: Point) -> f64 {
        self.points.iter().map(|q| (q - p).norm()).fold(f64::INFINITY, f64::min)
    }
}

pub fn fundamental_solution(x: Point) -> Result<f64> {
    deriv_s(0, 0, x)
}

/// ∂₁^h ∂₂^j S at x.
///
/// With z = x₁ + i x₂, ∂₁ acts as d/dz and ∂₂ as i d/dz on log z, so the
/// derivative is Re(i^j (−1)^{m−1}(m−1)! / z^m) / 2π for m = h + j ≥ 1.
pub fn deriv_s(h: usize, j: usize, x: Point) -> Result<f64> {
    let m = h + j;
    if m > MAX_S_ORDER {
        return Err(Error::Complexity(format!("derivative order {m} exceeds {MAX_S_ORDER}")));
    }
    let r2 = x.norm_squared();
    if !(r2 > 0.0) {
        return Err(Error::SingularPoint("S is singular at the origin".into()));
    }
    if m == 0 {
        return Ok(0.25 * r2.ln() / PI);
    }
    Ok(deriv_s_unchecked(h, j, x))
}

pub(crate) fn deriv_s_unchecked(h: usize, j: usize, x: Point) -> f64 {
    let m = h + j;
    if m == 0 {
        return 0.25 * x.norm_squared().ln() / PI;
    }
    let zinv = Complex::new(x.x, x.y).inv();
    let mut p = Complex::new(1.0, 0.0);
    let mut fact = 1.0;
    for k in 1..=m {
        p *= zinv;
        if k < m {
            fact *= k as f64;
        }
    }
    let ij = match j % 4 {
        0 => Complex::new(1.0, 0.0),
        1 => Complex::new(0.0, 1.0),
        2 => Complex::new(-1.0, 0.0),
        _ => Complex::new(0.0, -1.0),
    };
    let sign = if (m - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    (ij * p).re * sign * fact / (2.0 * PI)
}

/// ∇∂₁^h∂₂^j S at x.
pub(crate) fn grad_deriv_s(h: usize, j: usize, x: Point) -> Point {
    Point::new(deriv_s_unchecked(h + 1, j, x), deriv_s_unchecked(h, j + 1, x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelKind {
    SingleLayer,
    DoubleLayer,
    DoubleLayerAdjoint,
    Evaluation,
}

/// Dense Nyström matrix; columns act on nodal densities of the source grid.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    pub matrix: DMatrix<f64>,
    pub kind: KernelKind,
}

impl DenseOperator {
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let m = &self.matrix;
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)] * x[j]).sum()).collect()
    }

    pub fn rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.ncols()
    }
}

/// Weights R_d of the periodic log-splitting rule for ∫ log(4 sin²((t−s)/2)) f(s) ds, d = i − j mod n.
fn log_weights(n: usize) -> Vec<f64> {
    let half = n / 2;
    let nf = n as f64;
    (0..n)
        .map(|d| {
            let x = 2.0 * PI * d as f64 / nf;
            let mut s = 0.0;
            for m in 1..half {
                s += (m as f64 * x).cos() / m as f64;
            }
            let nyq = if d % 2 == 0 { 1.0 } else { -1.0 };
            -4.0 * PI / nf * s - 4.0 * PI / (nf * nf) * nyq
        })
        .collect()
}

fn check_disjoint(a: &BoundaryGrid, b: &BoundaryGrid) -> Result<()> {
    let tol = 0.25 * a.spacing().min(b.spacing());
    for p in &a.points {
        if b.node_distance(*p) < tol {
            return Err(Error::GeometryConflict("curves touch or intersect".into()));
        }
    }
    for i in 0..a.n {
        let (p1, p2) = (a.points[i], a.points[(i + 1) % a.n]);
        for j in 0..b.n {
            if segments_cross(p1, p2, b.points[j], b.points[(j + 1) % b.n]) {
                return Err(Error::GeometryConflict("curves intersect".into()));
            }
        }
    }
    Ok(())
}

/// Single-layer matrix from `source` densities to values on `target` nodes.
pub fn assemble_single_layer(target: &BoundaryGrid, source: &BoundaryGrid) -> Result<DenseOperator> {
    if target.same_as(source) {
        return Ok(single_layer_self(source));
    }
    check_disjoint(target, source)?;
    let mut m = DMatrix::zeros(target.n, source.n);
    for i in 0..target.n {
        for j in 0..source.n {
            let d = target.points[i] - source.points[j];
            m[(i, j)] = 0.25 * d.norm_squared().ln() / PI * source.ds[j];
        }
    }
    Ok(DenseOperator { matrix: m, kind: KernelKind::SingleLayer })
}

fn single_layer_self(g: &BoundaryGrid) -> DenseOperator {
    let n = g.n;
    let h = 2.0 * PI / n as f64;
    let r = log_weights(n);
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let smooth = if i == j {
                g.speeds[i].ln()
            } else {
                let dist2 = (g.points[i] - g.points[j]).norm_squared();
                let s = (0.5 * (g.t[i] - g.t[j])).sin();
                0.5 * (dist2 / (4.0 * s * s)).ln()
            };
            let d = (i + n - j) % n;
            m[(i, j)] = (0.5 * r[d] + h * smooth) * g.speeds[j] / (2.0 * PI);
        }
    }
    DenseOperator { matrix: m, kind: KernelKind::SingleLayer }
}

/// ν(y)·(y − x) / (2π|x − y|²), continuous diagonal κ/4π.
fn dlp_kernel(g: &BoundaryGrid, i: usize, j: usize) -> f64 {
    if i == j {
        return g.curvatures[i] / (4.0 * PI);
    }
    let d = g.points[j] - g.points[i];
    g.normals[j].dot(&d) / (2.0 * PI * d.norm_squared())
}

/// The operator W on a grid.
pub fn assemble_dlp_trace(g: &BoundaryGrid) -> DenseOperator {
    let mut m = DMatrix::zeros(g.n, g.n);
    for i in 0..g.n {
        for j in 0..g.n {
            m[(i, j)] = dlp_kernel(g, i, j) * g.ds[j];
        }
    }
    DenseOperator { matrix: m, kind: KernelKind::DoubleLayer }
}

/// The operator W* on a grid.
pub fn assemble_dlp_adjoint(g: &BoundaryGrid) -> DenseOperator {
    let mut m = DMatrix::zeros(g.n, g.n);
    for i in 0..g.n {
        for j in 0..g.n {
            m[(i, j)] = dlp_kernel(g, j, i) * g.ds[j];
        }
    }
    DenseOperator { matrix: m, kind: KernelKind::DoubleLayerAdjoint }
}

/// ν(x)·∇ of a single layer on `source` evaluated at the nodes of a disjoint `target`.
pub fn assemble_single_layer_normal_derivative(target: &BoundaryGrid, source: &BoundaryGrid) -> DenseOperator {
    let mut m = DMatrix::zeros(target.n, source.n);
    for i in 0..target.n {
        for j in 0..source.n {
            let d = target.points[i] - source.points[j];
            m[(i, j)] = target.normals[i].dot(&d) / (2.0 * PI * d.norm_squared()) * source.ds[j];
        }
    }
    DenseOperator { matrix: m, kind: KernelKind::Evaluation }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LayerKind {
    Single,
    Double,
}

#[derive(Clone, Debug)]
pub struct Evaluation {
    pub values: Vec<f64>,
    pub gradients: Option<Vec<Point>>,
}

/// Off-boundary evaluation with near-boundary rejection at `delta` node spacings.
pub fn eval_potentials(
    g: &BoundaryGrid,
    density: &[f64],
    targets: &[Point],
    kind: LayerKind,
    want_gradient: bool,
    delta: f64,
) -> Result<Evaluation> {
    if density.len() != g.n {
        return Err(Error::Data(format!("density length {} != grid size {}", density.len(), g.n)));
    }
    let limit = delta * g.spacing();
    let mut values = Vec::with_capacity(targets.len());
    let mut grads = Vec::with_capacity(if want_gradient { targets.len() } else { 0 });
    for x in targets {
        let dist = g.node_distance(*x);
        if dist < limit {
            return Err(Error::NearBoundary(format!(
                "target ({}, {}) at distance {dist:.3e} < {limit:.3e}",
                x.x, x.y
            )));
        }
        let mut v = 0.0;
        let mut gr = Point::zeros();
        for j in 0..g.n {
            let w = density[j] * g.ds[j];
            match kind {
                LayerKind::Single => {
                    let d = x - g.points[j];
                    let r2 = d.norm_squared();
                    v += 0.25 * r2.ln() / PI * w;
                    if want_gradient {
                        gr += d * (w / (2.0 * PI * r2));
                    }
                }
                LayerKind::Double => {
                    let d = g.points[j] - x;
                    let r2 = d.norm_squared();
                    let nu = g.normals[j];
                    let nd = nu.dot(&d);
                    v += nd / (2.0 * PI * r2) * w;
                    if want_gradient {
                        gr += (-nu / r2 + d * (2.0 * nd / (r2 * r2))) * (w / (2.0 * PI));
                    }
                }
            }
        }
        values.push(v);
        if want_gradient {
            grads.push(gr);
        }
    }
    Ok(Evaluation { values, gradients: if want_gradient { Some(grads) } else { None } })
}

/// Trigonometric interpolant of equispaced periodic samples on [0, 2π).
#[derive(Clone, Debug)]
pub struct TrigInterpolant {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl TrigInterpolant {
    pub fn new(values: &[f64]) -> Self {
        let n = values.len();
        let half = n / 2;
        let mut a = vec![0.0; half + 1];
        let mut b = vec![0.0; half + 1];
        for k in 0..=half {
            for (j, v) in values.iter().enumerate() {
                let x = 2.0 * PI * (k * j) as f64 / n as f64;
                a[k] += v * x.cos();
                b[k] += v * x.sin();
            }
            let scale = if k == 0 || (n.is_multiple_of(2) && k == half) { 1.0 } else { 2.0 };
            a[k] *= scale / n as f64;
            b[k] *= scale / n as f64;
        }
        if n.is_multiple_of(2) {
            b[half] = 0.0;
        }
        TrigInterpolant { a, b }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.a.iter().zip(&self.b).enumerate().map(|(k, (a, b))| {
            let (s, c) = (k as f64 * t).sin_cos();
            a * c + b * s
        }).sum()
    }
}

/// Trigonometric interpolation of equispaced periodic samples onto `m` equispaced nodes.
pub fn trig_resample(values: &[f64], m: usize) -> Vec<f64> {
    let f = TrigInterpolant::new(values);
    (0..m).map(|i| f.eval(2.0 * PI * i as f64 / m as f64)).collect()
}

/// Parameter of the boundary point nearest to `x`.
fn nearest_parameter(curve: &ParamCurve, x: Point) -> f64 {
    let m = 1024.max(16 * curve.bandwidth());
    let h = 2.0 * PI / m as f64;
    let d = |t: f64| (curve.point(t) - x).norm_squared();
    let mut t0 = (0..m).map(|i| i as f64 * h).min_by(|a, b| d(*a).total_cmp(&d(*b))).unwrap_or(0.0);
    let (mut lo, mut hi) = (t0 - h, t0 + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let (c1, c2) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if d(c1) < d(c2) {
            hi = c2;
        } else {
            lo = c1;
        }
    }
    t0 = 0.5 * (lo + hi);
    t0
}

/// Layer potential and its gradient at `x` with Gauss-Legendre panels graded
/// toward the nearest boundary point; stays accurate arbitrarily close to the
/// curve, unlike [`eval_potentials`].
pub fn eval_layer_graded(curve: &ParamCurve, density: &dyn Fn(f64) -> f64, x: Point, kind: LayerKind) -> Result<(f64, Point)> {
    let t0 = nearest_parameter(curve, x);
    let foot = curve.point_normal_speed(t0);
    let dist = (x - foot.point).norm();
    if dist == 0.0 {
        return Err(Error::OnBoundary(format!("target ({}, {}) lies on the curve", x.x, x.y)));
    }
    let tau = (dist / foot.speed).min(0.25);
    let mut cuts = vec![0.0];
    let mut r = tau;
    while r < PI {
        cuts.push(r);
        r = if r < 0.25 { 2.0 * r } else { r + 0.25 };
    }
    cuts.push(PI);
    let mut edges: Vec<f64> = cuts.iter().rev().map(|c| -c).collect();
    edges.extend(cuts.iter().skip(1));
    let (gx, gw) = crate::taylor::gauss_legendre(24);
    let mut v = 0.0;
    let mut gr = Point::zeros();
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        for (s, wt) in gx.iter().zip(&gw) {
            let t = t0 + mid + half * s;
            let cp = curve.point_normal_speed(t);
            let q = density(t) * cp.speed * wt * half;
            match kind {
                LayerKind::Single => {
                    let d = x - cp.point;
                    let r2 = d.norm_squared();
                    v += 0.25 * r2.ln() / PI * q;
                    gr += d * (q / (2.0 * PI * r2));
                }
                LayerKind::Double => {
                    let d = cp.point - x;
                    let r2 = d.norm_squared();
                    let nd = cp.normal.dot(&d);
                    v += nd / (2.0 * PI * r2) * q;
                    gr += (-cp.normal / r2 + d * (2.0 * nd / (r2 * r2))) * (q / (2.0 * PI));
                }
            }
        }
    }
    Ok((v, gr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_circle, make_ellipse};

    #[test]
    fn graded_matches_far_field_and_constant_density() {
        let c = make_ellipse(2.0, 1.0, 0.3, Point::zeros()).unwrap();
        let g = BoundaryGrid::new(&c, 128).unwrap();
        let dens: Vec<f64> = g.t.iter().map(|t| 1.0 + 0.3 * (2.0 * t).sin()).collect();
        let f = TrigInterpolant::new(&dens);
        let x = Point::new(0.4, 2.5);
        for kind in [LayerKind::Single, LayerKind::Double] {
            let far = eval_potentials(&g, &dens, &[x], kind, true, DEFAULT_DELTA).unwrap();
            let (v, gr) = eval_layer_graded(&c, &|t| f.eval(t), x, kind).unwrap();
            assert!((v - far.values[0]).abs() < 1e-13);
            assert!((gr - far.gradients.unwrap()[0]).norm() < 1e-13);
        }
        let cp = c.point_normal_speed(1.1);
        for d in [1e-2, 1e-4, 1e-6] {
            let (inside, _) = eval_layer_graded(&c, &|_| 1.0, cp.point - cp.normal * d, LayerKind::Double).unwrap();
            let (outside, _) = eval_layer_graded(&c, &|_| 1.0, cp.point + cp.normal * d, LayerKind::Double).unwrap();
            // roundoff grows like 1e-16/d
            let tol = 1e-12_f64.max(1e-16 / d * 1e2);
            assert!((inside - 1.0).abs() < tol && outside.abs() < tol, "{d} {inside} {outside}");
        }
    }

    #[test]
    fn deriv_s_examples() {
        let e = Point::new(1.0, 0.0);
        assert!(deriv_s(0, 0, e).unwrap().abs() < 1e-16);
        assert!((deriv_s(1, 0, e).unwrap() - 0.5 / PI).abs() < 1e-16);
        assert!((deriv_s(2, 0, e).unwrap() + 0.5 / PI).abs() < 1e-16);
        assert!(matches!(deriv_s(0, 0, Point::zeros()), Err(Error::SingularPoint(_))));
        assert!(matches!(deriv_s(5, 4, e), Err(Error::Complexity(_))));
    }

    #[test]
    fn deriv_s_matches_finite_differences() {
        let x = Point::new(0.7, -0.4);
        let h = 1e-4;
        for (a, b) in [(0, 0), (1, 0), (0, 1), (2, 1), (1, 3)] {
            let fd1 = (deriv_s(a + 1, b, x + Point::new(h, 0.0)).unwrap()
                - deriv_s(a + 1, b, x - Point::new(h, 0.0)).unwrap())
                / (2.0 * h);
            let exact = deriv_s(a + 2, b, x).unwrap();
            assert!((fd1 - exact).abs() < 1e-5 * exact.abs().max(1.0), "{a} {b}");
            let fd2 = (deriv_s(a, b, x + Point::new(0.0, h)).unwrap()
                - deriv_s(a, b, x - Point::new(0.0, h)).unwrap())
                / (2.0 * h);
            let exact2 = deriv_s(a, b + 1, x).unwrap();
            assert!((fd2 - exact2).abs() < 1e-5 * exact2.abs().max(1.0), "{a} {b}");
        }
    }

    #[test]
    fn single_layer_on_circles() {
        for r in [1.0, 0.5, 2.0] {
            let g = BoundaryGrid::new(&make_circle(r).unwrap(), 64).unwrap();
            let v = assemble_single_layer(&g, &g).unwrap().apply(&vec![1.0; 64]);
            for x in v {
                assert!((x - r * f64::ln(r)).abs() < 1e-13, "{x}");
            }
        }
    }

    #[test]
    fn single_layer_fourier_modes_on_unit_circle() {
        let n = 64;
        let g = BoundaryGrid::new(&make_circle(1.0).unwrap(), n).unwrap();
        let v = assemble_single_layer(&g, &g).unwrap();
        for m in 1..10 {
            let phi: Vec<f64> = g.t.iter().map(|t| (m as f64 * t).cos()).collect();
            let out = v.apply(&phi);
            for (o, p) in out.iter().zip(&phi) {
                assert!((o + p / (2.0 * m as f64)).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn dlp_identities() {
        let g = BoundaryGrid::new(&make_circle(1.0).unwrap(), 64).unwrap();
        let w = assemble_dlp_trace(&g).apply(&vec![1.0; 64]);
        assert!(w.iter().all(|x| (x - 0.5).abs() < 1e-14));
        let ws = assemble_dlp_adjoint(&g).apply(&vec![0.5 / PI; 64]);
        assert!(ws.iter().all(|x| (x - 0.25 / PI).abs() < 1e-14));
        assert!(assemble_dlp_trace(&g).apply(&vec![0.0; 64]).iter().all(|x| *x == 0.0));

        let e = BoundaryGrid::new(&make_ellipse(2.0, 1.0, 0.0, Point::zeros()).unwrap(), 128).unwrap();
        let w = assemble_dlp_trace(&e).apply(&vec![1.0; 128]);
        assert!(w.iter().all(|x| (x - 0.5).abs() < 1e-10));
    }

    #[test]
    fn eval_examples() {
        let g = BoundaryGrid::new(&make_circle(1.0).unwrap(), 64).unwrap();
        let one = vec![1.0; 64];
        let s = eval_potentials(&g, &one, &[Point::new(2.0, 0.0)], LayerKind::Single, true, DEFAULT_DELTA)
            .unwrap();
        assert!((s.values[0] - 2f64.ln()).abs() < 1e-14);
        let gr = s.gradients.unwrap()[0];
        assert!((gr - Point::new(0.5, 0.0)).norm() < 1e-14);
        let d = eval_potentials(
            &g,
            &one,
            &[Point::new(0.5, 0.0), Point::new(2.0, 0.0)],
            LayerKind::Double,
            false,
            DEFAULT_DELTA,
        )
        .unwrap();
        assert!((d.values[0] - 1.0).abs() < 1e-12);
        assert!(d.values[1].abs() < 1e-12);
        let near = eval_potentials(&g, &one, &[Point::new(1.01, 0.0)], LayerKind::Single, false, DEFAULT_DELTA);
        assert!(matches!(near, Err(Error::NearBoundary(_))));
    }

    #[test]
    fn disjoint_grids_must_not_touch() {
        let a = BoundaryGrid::new(&make_circle(1.0).unwrap(), 32).unwrap();
        let b = BoundaryGrid::new(&make_ellipse(1.5, 0.5, 0.0, Point::zeros()).unwrap(), 32).unwrap();
        assert!(matches!(assemble_single_layer(&a, &b), Err(Error::GeometryConflict(_))));
        let c = BoundaryGrid::new(&make_circle(0.5).unwrap(), 32).unwrap();
        assert!(assemble_single_layer(&a, &c).is_ok());
    }

    #[test]
    fn resample_reproduces_trig_polynomial() {
        let n = 32;
        let f = |t: f64| 1.0 + (3.0 * t).cos() - 0.5 * (7.0 * t).sin();
        let vals: Vec<f64> = (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect();
        let up = trig_resample(&vals, 96);
        for (i, v) in up.iter().enumerate() {
            assert!((v - f(2.0 * PI * i as f64 / 96.0)).abs() < 1e-13);
        }
    }

    #[test]
    fn grid_rejects_odd_or_small_counts() {
        let c = make_circle(1.0).unwrap();
        assert!(BoundaryGrid::new(&c, 15).is_err());
        assert!(BoundaryGrid::new(&c, 8).is_err());
    }
}
