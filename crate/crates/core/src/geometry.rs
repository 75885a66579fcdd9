//! Smooth closed planar curves: ellipses and trigonometric-series boundaries.
//!
//! Every curve is a 2π-periodic counterclockwise parametrization. Rigid
//! motions and the scaling ω ↦ εω act on the parameters directly, so a
//! transformed ellipse is still an ellipse.

use std::f64::consts::PI;

use nalgebra::Vector2;

use crate::error::{Error, Result};

pub type Point = Vector2<f64>;

/// Default truncation of trigonometric-series curves.
pub const DEFAULT_TRIG_MODES: usize = 32;

/// Fourier coefficients of a closed curve.
///
/// `x(t) = x0 + Σ_k xc[k-1] cos kt + xs[k-1] sin kt`, and likewise for y.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigSeries {
    pub x0: f64,
    pub y0: f64,
    pub xc: Vec<f64>,
    pub xs: Vec<f64>,
    pub yc: Vec<f64>,
    pub ys: Vec<f64>,
}

impl TrigSeries {
    fn modes(&self) -> usize {
        self.xc.len().max(self.xs.len()).max(self.yc.len()).max(self.ys.len())
    }

    fn coef(v: &[f64], k: usize) -> f64 {
        v.get(k).copied().unwrap_or(0.0)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveKind {
    Ellipse { a: f64, b: f64, theta: f64, center: Point },
    Trig(TrigSeries),
}

/// Differential data at one parameter value.
#[derive(Clone, Copy, Debug)]
pub struct CurvePoint {
    pub point: Point,
    pub normal: Point,
    pub speed: f64,
    pub curvature: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParamCurve {
    kind: CurveKind,
}

fn rot(theta: f64, v: Point) -> Point {
    let (s, c) = theta.sin_cos();
    Point::new(c * v.x - s * v.y, s * v.x + c * v.y)
}

pub fn make_ellipse(a: f64, b: f64, theta: f64, center: Point) -> Result<ParamCurve> {
    if !(a.is_finite() && b.is_finite() && theta.is_finite() && center.iter().all(|v| v.is_finite())) {
        return Err(Error::InvalidGeometry("non-finite ellipse parameter".into()));
    }
    if b <= 0.0 || a <= 0.0 {
        return Err(Error::InvalidGeometry(format!("non-positive semi-axis (a={a}, b={b})")));
    }
    if a < b {
        return Err(Error::InvalidGeometry(format!(
            "semi-axes must satisfy a >= b (a={a}, b={b}); rotate instead"
        )));
    }
    Ok(ParamCurve { kind: CurveKind::Ellipse { a, b, theta, center } })
}

/// Circle of radius `r` centered at the origin.
pub fn make_circle(r: f64) -> Result<ParamCurve> {
    make_ellipse(r, r, 0.0, Point::zeros())
}

/// Trigonometric-series curve truncated to `modes` harmonics.
pub fn make_trig(mut series: TrigSeries, modes: usize) -> Result<ParamCurve> {
    for v in [&mut series.xc, &mut series.xs, &mut series.yc, &mut series.ys] {
        v.truncate(modes);
    }
    let all = [series.x0, series.y0]
        .into_iter()
        .chain(series.xc.iter().copied())
        .chain(series.xs.iter().copied())
        .chain(series.yc.iter().copied())
        .chain(series.ys.iter().copied());
    if all.into_iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidGeometry("non-finite trig coefficient".into()));
    }
    let curve = ParamCurve { kind: CurveKind::Trig(series) };
    curve.validate()?;
    Ok(curve)
}

impl ParamCurve {
    pub fn kind(&self) -> &CurveKind {
        &self.kind
    }

    /// γ, γ', γ'' at parameter t.
    pub fn derivatives(&self, t: f64) -> (Point, Point, Point) {
        match &self.kind {
            CurveKind::Ellipse { a, b, theta, center } => {
                let (s, c) = t.sin_cos();
                let p = center + rot(*theta, Point::new(a * c, b * s));
                let d1 = rot(*theta, Point::new(-a * s, b * c));
                let d2 = rot(*theta, Point::new(-a * c, -b * s));
                (p, d1, d2)
            }
            CurveKind::Trig(ts) => {
                let mut p = Point::new(ts.x0, ts.y0);
                let mut d1 = Point::zeros();
                let mut d2 = Point::zeros();
                for k in 0..ts.modes() {
                    let m = (k + 1) as f64;
                    let (s, c) = (m * t).sin_cos();
                    let xc = TrigSeries::coef(&ts.xc, k);
                    let xs = TrigSeries::coef(&ts.xs, k);
                    let yc = TrigSeries::coef(&ts.yc, k);
                    let ys = TrigSeries::coef(&ts.ys, k);
                    p += Point::new(xc * c + xs * s, yc * c + ys * s);
                    d1 += m * Point::new(-xc * s + xs * c, -yc * s + ys * c);
                    d2 -= m * m * Point::new(xc * c + xs * s, yc * c + ys * s);
                }
                (p, d1, d2)
            }
        }
    }

    pub fn point(&self, t: f64) -> Point {
        self.derivatives(t).0
    }

    /// Point, unit outward normal, speed |γ'| and signed curvature.
    pub fn point_normal_speed(&self, t: f64) -> CurvePoint {
        let (p, d1, d2) = self.derivatives(t);
        let speed = d1.norm();
        let normal = Point::new(d1.y, -d1.x) / speed;
        let curvature = (d1.x * d2.y - d1.y * d2.x) / (speed * speed * speed);
        CurvePoint { point: p, normal, speed, curvature }
    }

    /// Number of Fourier modes needed to represent the curve exactly.
    pub fn bandwidth(&self) -> usize {
        match &self.kind {
            CurveKind::Ellipse { .. } => 1,
            CurveKind::Trig(ts) => ts.modes().max(1),
        }
    }

    pub fn scale_about_origin(&self, eps: f64) -> Result<ParamCurve> {
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::InvalidGeometry(format!("scale factor must be positive, got {eps}")));
        }
        let kind = match &self.kind {
            CurveKind::Ellipse { a, b, theta, center } => CurveKind::Ellipse {
                a: a * eps,
                b: b * eps,
                theta: *theta,
                center: center * eps,
            },
            CurveKind::Trig(ts) => {
                let sc = |v: &Vec<f64>| v.iter().map(|x| x * eps).collect::<Vec<_>>();
                CurveKind::Trig(TrigSeries {
                    x0: ts.x0 * eps,
                    y0: ts.y0 * eps,
                    xc: sc(&ts.xc),
                    xs: sc(&ts.xs),
                    yc: sc(&ts.yc),
                    ys: sc(&ts.ys),
                })
            }
        };
        Ok(ParamCurve { kind })
    }

    pub fn translate(&self, v: Point) -> ParamCurve {
        let kind = match &self.kind {
            CurveKind::Ellipse { a, b, theta, center } => {
                CurveKind::Ellipse { a: *a, b: *b, theta: *theta, center: center + v }
            }
            CurveKind::Trig(ts) => {
                let mut ts = ts.clone();
                ts.x0 += v.x;
                ts.y0 += v.y;
                CurveKind::Trig(ts)
            }
        };
        ParamCurve { kind }
    }

    /// Rotation by `angle` about the origin.
    pub fn rotate(&self, angle: f64) -> ParamCurve {
        let kind = match &self.kind {
            CurveKind::Ellipse { a, b, theta, center } => CurveKind::Ellipse {
                a: *a,
                b: *b,
                theta: theta + angle,
                center: rot(angle, *center),
            },
            CurveKind::Trig(ts) => {
                let m = ts.modes();
                let (s, c) = angle.sin_cos();
                let pair = |x: f64, y: f64| (c * x - s * y, s * x + c * y);
                let (x0, y0) = pair(ts.x0, ts.y0);
                let mut out = TrigSeries {
                    x0,
                    y0,
                    xc: vec![0.0; m],
                    xs: vec![0.0; m],
                    yc: vec![0.0; m],
                    ys: vec![0.0; m],
                };
                for k in 0..m {
                    let (xc, yc) = pair(TrigSeries::coef(&ts.xc, k), TrigSeries::coef(&ts.yc, k));
                    let (xs, ys) = pair(TrigSeries::coef(&ts.xs, k), TrigSeries::coef(&ts.ys, k));
                    out.xc[k] = xc;
                    out.yc[k] = yc;
                    out.xs[k] = xs;
                    out.ys[k] = ys;
                }
                CurveKind::Trig(out)
            }
        };
        ParamCurve { kind }
    }

    fn default_nodes(&self) -> usize {
        (16 * self.bandwidth()).max(256)
    }

    fn samples(&self, n: usize) -> Vec<(Point, Point)> {
        (0..n)
            .map(|j| {
                let (p, d1, _) = self.derivatives(2.0 * PI * j as f64 / n as f64);
                (p, d1)
            })
            .collect()
    }

    /// Shoelace boundary integral ½∮(x y' − y x') dt by the trapezoid rule.
    pub fn signed_area(&self) -> f64 {
        let n = self.default_nodes();
        let h = 2.0 * PI / n as f64;
        self.samples(n).iter().map(|(p, d)| 0.5 * (p.x * d.y - p.y * d.x)).sum::<f64>() * h
    }

    /// Area centroid.
    pub fn centroid(&self) -> Point {
        let n = self.default_nodes();
        let h = 2.0 * PI / n as f64;
        let mut mx = 0.0;
        let mut my = 0.0;
        for (p, d) in self.samples(n) {
            mx += 0.5 * p.x * p.x * d.y;
            my -= 0.5 * p.y * p.y * d.x;
        }
        Point::new(mx * h, my * h) / self.signed_area()
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.default_nodes();
        let h = 2.0 * PI / n as f64;
        self.samples(n).iter().map(|(_, d)| d.norm()).sum::<f64>() * h
    }

    /// Largest node-to-node distance over a sampling.
    pub fn diameter(&self) -> f64 {
        let pts: Vec<Point> = self.samples(128).into_iter().map(|(p, _)| p).collect();
        let mut d: f64 = 0.0;
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                d = d.max((pts[i] - pts[j]).norm());
            }
        }
        d
    }

    /// Smallest distance from `p` to a dense sampling of the curve.
    pub fn sampled_distance(&self, p: Point, n: usize) -> f64 {
        self.samples(n).iter().map(|(q, _)| (q - p).norm()).fold(f64::INFINITY, f64::min)
    }

    /// Positive speed, counterclockwise orientation and simplicity.
    pub fn validate(&self) -> Result<()> {
        let n = self.default_nodes();
        let s = self.samples(n);
        let diam = self.diameter();
        if !(diam > 0.0) {
            return Err(Error::InvalidGeometry("curve has zero extent".into()));
        }
        if s.iter().any(|(_, d)| !(d.norm() > 1e-12 * diam)) {
            return Err(Error::InvalidGeometry("vanishing speed at a sample node".into()));
        }
        if !(self.signed_area() > 0.0) {
            return Err(Error::InvalidGeometry("curve is not counterclockwise".into()));
        }
        let tol = 1e-9 * diam;
        for i in 0..n {
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                if (s[i].0 - s[j].0).norm() < tol {
                    return Err(Error::InvalidGeometry("curve self-intersects (coincident nodes)".into()));
                }
                let (p1, p2) = (s[i].0, s[(i + 1) % n].0);
                let (q1, q2) = (s[j].0, s[(j + 1) % n].0);
                if (j + 1) % n != i && segments_cross(p1, p2, q1, q2) {
                    return Err(Error::InvalidGeometry("curve self-intersects".into()));
                }
            }
        }
        Ok(())
    }

    /// Winding number of the curve around `p`.
    pub fn winding_number(&self, p: Point) -> Result<i64> {
        let diam = self.diameter();
        let mut n = 1024;
        loop {
            let pts: Vec<Point> = self.samples(n).into_iter().map(|(q, _)| q - p).collect();
            let dmin = pts.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
            if dmin <= 1e-10 * diam {
                return Err(Error::OnBoundary(format!("point ({}, {}) lies on the curve", p.x, p.y)));
            }
            let mut total = 0.0;
            let mut coarse = false;
            for j in 0..n {
                let a = pts[j];
                let b = pts[(j + 1) % n];
                let dth = (a.x * b.y - a.y * b.x).atan2(a.dot(&b));
                if dth.abs() > 0.5 * PI {
                    coarse = true;
                    break;
                }
                total += dth;
            }
            if !coarse {
                return Ok((total / (2.0 * PI)).round() as i64);
            }
            if n >= 1 << 20 {
                return Err(Error::OnBoundary(format!("point ({}, {}) too close to the curve", p.x, p.y)));
            }
            n *= 4;
        }
    }

    pub fn winding_contains(&self, p: Point) -> Result<bool> {
        Ok(self.winding_number(p)? == 1)
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

pub(crate) fn segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

/// `true` when every sample of `inner` lies strictly inside `outer` and the curves do not cross.
pub fn curve_inside(inner: &ParamCurve, outer: &ParamCurve) -> Result<bool> {
    let n = 64;
    for j in 0..n {
        let p = inner.point(2.0 * PI * j as f64 / n as f64);
        if !outer.winding_contains(p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn ellipse_examples() {
        let c = make_circle(1.0).unwrap();
        let p = c.point_normal_speed(0.0);
        assert!(close(p.point.x, 1.0, 1e-15) && close(p.point.y, 0.0, 1e-15));
        assert!(close(p.normal.x, 1.0, 1e-15) && close(p.speed, 1.0, 1e-15));
        assert!(close(p.curvature, 1.0, 1e-15));

        let e = make_ellipse(3.0, 2.0, 0.0, Point::zeros()).unwrap();
        let p = e.point_normal_speed(0.0);
        assert!(close(p.point.x, 3.0, 1e-15) && close(p.speed, 2.0, 1e-15));
        assert!(close(p.normal.x, 1.0, 1e-15) && close(p.curvature, 0.75, 1e-14));
        let p = e.point_normal_speed(PI / 2.0);
        assert!(close(p.point.y, 2.0, 1e-15) && close(p.point.x, 0.0, 1e-14));
        assert!(close(p.normal.y, 1.0, 1e-15) && close(p.speed, 3.0, 1e-15));
        assert!(close(p.curvature, 2.0 / 9.0, 1e-14));

        let r = make_ellipse(0.75, 0.5, PI / 4.0, Point::zeros()).unwrap();
        let q = r.point(0.0);
        let v = 3.0 * 2f64.sqrt() / 8.0;
        assert!(close(q.x, v, 1e-15) && close(q.y, v, 1e-15));
    }

    #[test]
    fn rejects_bad_axes() {
        assert!(matches!(make_ellipse(0.0, 1.0, 0.0, Point::zeros()), Err(Error::InvalidGeometry(_))));
        assert!(matches!(make_ellipse(1.0, -1.0, 0.0, Point::zeros()), Err(Error::InvalidGeometry(_))));
        assert!(make_circle(1.0).unwrap().scale_about_origin(0.0).is_err());
    }

    #[test]
    fn scaling_examples() {
        let e = make_ellipse(3.0, 2.0, 0.0, Point::zeros()).unwrap();
        let q = e.scale_about_origin(0.25).unwrap();
        assert_eq!(q, make_ellipse(0.75, 0.5, 0.0, Point::zeros()).unwrap());
        assert_eq!(e.scale_about_origin(1.0).unwrap(), e);
        let c = make_circle(1.0).unwrap().scale_about_origin(0.1).unwrap();
        assert!(close(c.point(1.0).norm(), 0.1, 1e-16));
    }

    #[test]
    fn area_and_winding() {
        let e = make_ellipse(3.0, 2.0, 0.3, Point::new(0.1, -0.2)).unwrap();
        assert!(close(e.signed_area(), 6.0 * PI, 1e-12));
        let c = make_circle(1.0).unwrap();
        assert!(c.winding_contains(Point::zeros()).unwrap());
        assert!(!c.winding_contains(Point::new(2.0, 0.0)).unwrap());
        let e0 = make_ellipse(3.0, 2.0, 0.0, Point::zeros()).unwrap();
        assert!(e0.winding_contains(Point::new(2.9, 0.0)).unwrap());
        assert!(matches!(c.winding_contains(Point::new(1.0, 0.0)), Err(Error::OnBoundary(_))));
    }

    #[test]
    fn trig_curve_matches_ellipse() {
        let ts = TrigSeries { x0: 0.0, y0: 0.0, xc: vec![3.0], xs: vec![0.0], yc: vec![0.0], ys: vec![2.0] };
        let t = make_trig(ts, DEFAULT_TRIG_MODES).unwrap();
        let e = make_ellipse(3.0, 2.0, 0.0, Point::zeros()).unwrap();
        for &s in &[0.0, 0.7, 2.1, 5.0] {
            let a = t.point_normal_speed(s);
            let b = e.point_normal_speed(s);
            assert!((a.point - b.point).norm() < 1e-14);
            assert!((a.normal - b.normal).norm() < 1e-14);
            assert!(close(a.curvature, b.curvature, 1e-13));
        }
        let r = t.rotate(0.4).scale_about_origin(0.5).unwrap().translate(Point::new(1.0, 2.0));
        let re = e.rotate(0.4).scale_about_origin(0.5).unwrap().translate(Point::new(1.0, 2.0));
        for &s in &[0.0, 1.3, 4.4] {
            assert!((r.point(s) - re.point(s)).norm() < 1e-14);
        }
    }

    #[test]
    fn trig_rejects_clockwise_and_crossing() {
        let cw = TrigSeries { x0: 0.0, y0: 0.0, xc: vec![1.0], xs: vec![0.0], yc: vec![0.0], ys: vec![-1.0] };
        assert!(matches!(make_trig(cw, 8), Err(Error::InvalidGeometry(_))));
        // figure-eight: x = sin t, y = sin 2t
        let eight = TrigSeries {
            x0: 0.0,
            y0: 0.0,
            xc: vec![0.0, 0.0],
            xs: vec![1.0, 0.0],
            yc: vec![0.0, 0.0],
            ys: vec![0.0, 1.0],
        };
        assert!(matches!(make_trig(eight, 8), Err(Error::InvalidGeometry(_))));
    }

    #[test]
    fn centroid_of_translated_ellipse() {
        let e = make_ellipse(2.0, 1.0, 0.5, Point::new(0.3, -0.7)).unwrap();
        let c = e.centroid();
        assert!((c - Point::new(0.3, -0.7)).norm() < 1e-13);
    }
}
