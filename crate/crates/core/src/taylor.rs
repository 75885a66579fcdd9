//! Bivariate polynomials as Taylor data of u at the hole center, the (β, φ)
//! normal form of harmonic leading parts, and exact area integrals over ω.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{ParamCurve, Point};

/// Largest polynomial degree handled.
pub const MAX_DEGREE: usize = 24;

/// Bivariate polynomial Σ a_{h,j} x₁^h x₂^j with h + j ≤ degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly2 {
    degree: usize,
    coef: Vec<f64>,
}

/// Taylor data of u: a_{h,j} = ∂₁^h∂₂^j u(0) / (h! j!).
pub type TaylorPoly2 = Poly2;

impl Poly2 {
    pub fn zero(degree: usize) -> Self {
        Poly2 { degree, coef: vec![0.0; (degree + 1) * (degree + 1)] }
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Poly2::zero(0);
        p.set(0, 0, c);
        p
    }

    /// From `(h, j, coeff)` rows; repeated rows add up.
    pub fn from_terms(terms: &[(usize, usize, f64)]) -> Result<Self> {
        let degree = terms.iter().map(|(h, j, _)| h + j).max().unwrap_or(0);
        if degree > MAX_DEGREE {
            return Err(Error::Degree(format!("degree {degree} exceeds {MAX_DEGREE}")));
        }
        let mut p = Poly2::zero(degree);
        for &(h, j, c) in terms {
            if !c.is_finite() {
                return Err(Error::Data("non-finite coefficient".into()));
            }
            p.add_to(h, j, c);
        }
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn idx(&self, h: usize, j: usize) -> usize {
        h * (self.degree + 1) + j
    }

    pub fn coeff(&self, h: usize, j: usize) -> f64 {
        if h + j > self.degree {
            0.0
        } else {
            self.coef[self.idx(h, j)]
        }
    }

    pub fn set(&mut self, h: usize, j: usize, c: f64) {
        assert!(h + j <= self.degree, "term outside polynomial degree");
        let i = self.idx(h, j);
        self.coef[i] = c;
    }

    fn add_to(&mut self, h: usize, j: usize, c: f64) {
        let i = self.idx(h, j);
        self.coef[i] += c;
    }

    /// Nonzero terms `(h, j, a)` in graded order.
    pub fn terms(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for k in 0..=self.degree {
            for h in (0..=k).rev() {
                let c = self.coeff(h, k - h);
                if c != 0.0 {
                    out.push((h, k - h, c));
                }
            }
        }
        out
    }

    pub fn with_degree(&self, degree: usize) -> Self {
        let mut p = Poly2::zero(degree);
        for (h, j, c) in self.terms() {
            if h + j <= degree {
                p.set(h, j, c);
            }
        }
        p
    }

    pub fn eval(&self, x: Point) -> f64 {
        // Horner in x₂ inside Horner in x₁.
        let d = self.degree;
        let mut acc = 0.0;
        for h in (0..=d).rev() {
            let mut inner = 0.0;
            for j in (0..=d - h).rev() {
                inner = inner * x.y + self.coeff(h, j);
            }
            acc = acc * x.x + inner;
        }
        acc
    }

    /// ∂₁ (axis 0) or ∂₂ (axis 1).
    pub fn derivative(&self, axis: usize) -> Poly2 {
        let mut p = Poly2::zero(self.degree.saturating_sub(1));
        for (h, j, c) in self.terms() {
            if axis == 0 && h > 0 {
                p.add_to(h - 1, j, c * h as f64);
            } else if axis == 1 && j > 0 {
                p.add_to(h, j - 1, c * j as f64);
            }
        }
        p
    }

    pub fn gradient(&self, x: Point) -> Point {
        Point::new(self.derivative(0).eval(x), self.derivative(1).eval(x))
    }

    /// ∂₁^h∂₂^j at the origin.
    pub fn derivative_at_origin(&self, h: usize, j: usize) -> f64 {
        self.coeff(h, j) * factorial(h) * factorial(j)
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let mut p = Poly2::zero(self.degree.max(other.degree));
        for (h, j, c) in self.terms().into_iter().chain(other.terms()) {
            p.add_to(h, j, c);
        }
        p
    }

    pub fn scale(&self, s: f64) -> Poly2 {
        Poly2 { degree: self.degree, coef: self.coef.iter().map(|c| c * s).collect() }
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut p = Poly2::zero(self.degree + other.degree);
        for (h1, j1, c1) in self.terms() {
            for (h2, j2, c2) in other.terms() {
                p.add_to(h1 + h2, j1 + j2, c1 * c2);
            }
        }
        p
    }

    pub fn homogeneous_part(&self, k: usize) -> Result<Poly2> {
        if k > self.degree {
            return Err(Error::Degree(format!("requested degree {k} exceeds polynomial degree {}", self.degree)));
        }
        let mut p = Poly2::zero(k);
        for h in 0..=k {
            p.set(h, k - h, self.coeff(h, k - h));
        }
        Ok(p)
    }

    /// Same as [`Poly2::homogeneous_part`] but zero beyond the stored degree.
    pub(crate) fn homogeneous_or_zero(&self, k: usize) -> Poly2 {
        self.homogeneous_part(k).unwrap_or_else(|_| Poly2::zero(k))
    }

    pub fn laplacian(&self) -> Poly2 {
        self.derivative(0).derivative(0).add(&self.derivative(1).derivative(1))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coef.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Substitution x ↦ x + p, i.e. the Taylor polynomial re-centered at p.
    pub fn shift(&self, p: Point) -> Poly2 {
        let x = Poly2::from_terms(&[(0, 0, p.x), (1, 0, 1.0)]).unwrap();
        let y = Poly2::from_terms(&[(0, 0, p.y), (0, 1, 1.0)]).unwrap();
        self.substitute(&x, &y).with_degree(self.degree)
    }

    /// q(x) = p(R_θ x): the polynomial seen from a frame rotated by θ.
    pub fn compose_rotation(&self, theta: f64) -> Poly2 {
        let (s, c) = theta.sin_cos();
        let x = Poly2::from_terms(&[(1, 0, c), (0, 1, -s)]).unwrap();
        let y = Poly2::from_terms(&[(1, 0, s), (0, 1, c)]).unwrap();
        self.substitute(&x, &y).with_degree(self.degree)
    }

    /// q(x) = p(s x).
    pub fn compose_scaling(&self, s: f64) -> Poly2 {
        let mut q = self.clone();
        for (h, j, c) in self.terms() {
            q.set(h, j, c * s.powi((h + j) as i32));
        }
        q
    }

    fn substitute(&self, x: &Poly2, y: &Poly2) -> Poly2 {
        let d = self.degree;
        let mut xp = vec![Poly2::constant(1.0)];
        let mut yp = vec![Poly2::constant(1.0)];
        for k in 1..=d {
            xp.push(xp[k - 1].mul(x));
            yp.push(yp[k - 1].mul(y));
        }
        let mut out = Poly2::zero(0);
        for (h, j, c) in self.terms() {
            out = out.add(&xp[h].mul(&yp[j]).scale(c));
        }
        out
    }

    /// Partial antiderivative in x₁ vanishing at x₁ = 0.
    pub fn antiderivative_x(&self) -> Poly2 {
        let mut p = Poly2::zero(self.degree + 1);
        for (h, j, c) in self.terms() {
            p.add_to(h + 1, j, c / (h + 1) as f64);
        }
        p
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |a, k| a * k as f64)
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r.round()
}

/// A function with gradient, evaluable near the hole.
pub trait Field: Sync {
    fn value(&self, x: Point) -> f64;
    fn gradient(&self, x: Point) -> Point;
    fn as_poly(&self) -> Option<&Poly2> {
        None
    }
}

impl Field for Poly2 {
    fn value(&self, x: Point) -> f64 {
        self.eval(x)
    }
    fn gradient(&self, x: Point) -> Point {
        Poly2::gradient(self, x)
    }
    fn as_poly(&self) -> Option<&Poly2> {
        Some(self)
    }
}

/// Field from closures.
pub struct FnField<F, G>
where
    F: Fn(Point) -> f64 + Sync,
    G: Fn(Point) -> Point + Sync,
{
    pub value: F,
    pub gradient: G,
}

impl<F, G> Field for FnField<F, G>
where
    F: Fn(Point) -> f64 + Sync,
    G: Fn(Point) -> Point + Sync,
{
    fn value(&self, x: Point) -> f64 {
        (self.value)(x)
    }
    fn gradient(&self, x: Point) -> Point {
        (self.gradient)(x)
    }
}

/// Field translated so that `origin` becomes 0: x ↦ f(x + origin).
pub struct Shifted<'a> {
    pub inner: &'a dyn Field,
    pub origin: Point,
}

impl Field for Shifted<'_> {
    fn value(&self, x: Point) -> f64 {
        self.inner.value(x + self.origin)
    }
    fn gradient(&self, x: Point) -> Point {
        self.inner.gradient(x + self.origin)
    }
}

pub fn vanishing_order(p: &Poly2, tol: f64) -> Result<usize> {
    let m = p.max_abs_coeff();
    if !(m > 0.0) {
        return Err(Error::ZeroFunction("all Taylor coefficients vanish".into()));
    }
    for k in 0..=p.degree() {
        if (0..=k).any(|h| p.coeff(h, k - h).abs() > tol * m) {
            return Ok(k);
        }
    }
    Err(Error::ZeroFunction("all Taylor coefficients below tolerance".into()))
}

/// Default relative tolerance of [`vanishing_order`].
pub const DEFAULT_VANISHING_TOL: f64 = 1e-9;

/// Harmonic homogeneous leading part β r^k sin(k t + k φ).
///
/// φ lies in (−π/2k, π/2k]; β carries the sign, because that window covers
/// only half of the circle of phases.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicLeading {
    pub k: usize,
    pub beta: f64,
    pub phi: f64,
}

impl HarmonicLeading {
    pub fn eval(&self, x: Point) -> f64 {
        let r = x.norm();
        let t = x.y.atan2(x.x);
        let k = self.k as f64;
        self.beta * r.powi(self.k as i32) * (k * t + k * self.phi).sin()
    }

    /// The same function as a polynomial: Im(β e^{ikφ} z^k).
    pub fn to_poly(&self) -> Poly2 {
        let k = self.k;
        let ang = k as f64 * self.phi;
        let (cr, ci) = (self.beta * ang.cos(), self.beta * ang.sin());
        let mut p = Poly2::zero(k);
        // z^k = Σ C(k,m) x^{k−m} (i y)^m
        for m in 0..=k {
            let b = binomial(k, m);
            let (ur, ui) = match m % 4 {
                0 => (1.0, 0.0),
                1 => (0.0, 1.0),
                2 => (-1.0, 0.0),
                _ => (0.0, -1.0),
            };
            p.set(k - m, m, b * (cr * ui + ci * ur));
        }
        p
    }
}

pub fn beta_phi(h: &Poly2, k: usize) -> Result<HarmonicLeading> {
    if k == 0 {
        return Err(Error::Degree("normal form needs k >= 1".into()));
    }
    let scale = h.max_abs_coeff();
    if !(scale > 0.0) {
        return Err(Error::ZeroFunction("leading part vanishes".into()));
    }
    for (a, b, c) in h.terms() {
        if a + b != k && c.abs() > 1e-14 * scale {
            return Err(Error::Degree(format!("polynomial is not homogeneous of degree {k}")));
        }
    }
    let lap = h.laplacian();
    if lap.max_abs_coeff() > 1e-12 * scale {
        return Err(Error::NotHarmonic("leading homogeneous part has nonzero Laplacian".into()));
    }
    let re = h.coeff(k - 1, 1) / k as f64;
    let im = h.coeff(k, 0);
    let modulus = re.hypot(im);
    let alpha = im.atan2(re);
    let (beta, kphi) = if alpha > -0.5 * PI && alpha <= 0.5 * PI {
        (modulus, alpha)
    } else if alpha > 0.5 * PI {
        (-modulus, alpha - PI)
    } else {
        (-modulus, alpha + PI)
    };
    Ok(HarmonicLeading { k, beta, phi: kphi / k as f64 })
}

/// ‖d^k u(0)‖² over all ordered index tuples.
pub fn derivative_tensor_norm2(h: &Poly2, k: usize) -> f64 {
    (0..=k)
        .map(|a| {
            let d = h.derivative_at_origin(a, k - a);
            binomial(k, a) * d * d
        })
        .sum()
}

fn area_nodes(q: &Poly2, omega: &ParamCurve) -> usize {
    let n = 2 * ((q.degree() + 2) * omega.bandwidth() + 8);
    n.max(256)
}

/// ∫_ω q dx via ∮ Q ν₁ dσ with ∂₁Q = q.
pub fn poly_area_integral(q: &Poly2, omega: &ParamCurve) -> f64 {
    let anti = q.antiderivative_x();
    let n = area_nodes(&anti, omega);
    let h = 2.0 * PI / n as f64;
    (0..n)
        .map(|j| {
            let (p, d1, _) = omega.derivatives(h * j as f64);
            anti.eval(p) * d1.y
        })
        .sum::<f64>()
        * h
}

/// ∫_ω |∇h|² dx.
pub fn interior_gradient_energy(h: &Poly2, omega: &ParamCurve) -> f64 {
    let gx = h.derivative(0);
    let gy = h.derivative(1);
    poly_area_integral(&gx.mul(&gx).add(&gy.mul(&gy)), omega)
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; m];
    let mut w = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=m {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 1 { 1.0 } else { p1 };
            let pm1 = if m == 1 { 0.0 } else { p0 };
            dp = m as f64 * (z * pm - pm1) / (z * z - 1.0);
            let dz = pm / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[m - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[m - 1 - i] = w[i];
    }
    (x, w)
}

/// ∫ of a smooth function over the region bounded by `omega`, via ∮ Q ν₁ dσ
/// with Q(x, y) = ∫_{x_c}^{x} f(s, y) ds computed by Gauss–Legendre.
pub fn area_integral_fn(f: &dyn Fn(Point) -> f64, omega: &ParamCurve, n: usize, m: usize) -> f64 {
    let xc = omega.centroid().x;
    let (gx, gw) = gauss_legendre(m);
    let h = 2.0 * PI / n as f64;
    (0..n)
        .map(|j| {
            let (p, d1, _) = omega.derivatives(h * j as f64);
            let half = 0.5 * (p.x - xc);
            let mid = 0.5 * (p.x + xc);
            let q: f64 = gx.iter().zip(&gw).map(|(s, w)| w * f(Point::new(mid + half * s, p.y))).sum();
            q * half * d1.y
        })
        .sum::<f64>()
        * h
}

/// Numerical Taylor coefficients of `f` at `p` up to `degree` ≤ 4, by tensor
/// central differences with step `step` and two Richardson levels.
pub fn taylor_from_samples(f: &dyn Fn(Point) -> f64, p: Point, degree: usize, step: f64) -> Result<Poly2> {
    if degree > 4 {
        return Err(Error::Degree("numerical Taylor extraction supports degree <= 4".into()));
    }
    let mut out = Poly2::zero(degree);
    for k in 0..=degree {
        for a in 0..=k {
            let b = k - a;
            let d = |hs: f64| central_mixed(f, p, a, b, hs);
            let (d1, d2, d4) = (d(step), d(step / 2.0), d(step / 4.0));
            let r1 = (4.0 * d2 - d1) / 3.0;
            let r2 = (4.0 * d4 - d2) / 3.0;
            let r = (16.0 * r2 - r1) / 15.0;
            if !r.is_finite() {
                return Err(Error::Data("non-finite sample in Taylor extraction".into()));
            }
            out.set(a, b, r / (factorial(a) * factorial(b)));
        }
    }
    Ok(out)
}

fn stencil(m: usize) -> Vec<(f64, f64)> {
    (0..=m)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            (0.5 * m as f64 - k as f64, sign * binomial(m, k))
        })
        .collect()
}

fn central_mixed(f: &dyn Fn(Point) -> f64, p: Point, a: usize, b: usize, h: f64) -> f64 {
    let sa = stencil(a);
    let sb = stencil(b);
    let mut acc = 0.0;
    for (ox, wx) in &sa {
        for (oy, wy) in &sb {
            acc += wx * wy * f(p + Point::new(ox * h, oy * h));
        }
    }
    acc / h.powi((a + b) as i32)
}

/// Parses rows `h j coeff`, separated by newlines or ';'.
pub fn parse_poly(text: &str) -> Result<Poly2> {
    let mut terms = Vec::new();
    for row in text.split(['\n', ';']) {
        let row = row.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = row.split_whitespace().collect();
        if f.len() != 3 {
            return Err(Error::Data(format!("polynomial row needs `h j coeff`: {row:?}")));
        }
        let h: usize = f[0].parse().map_err(|_| Error::Data(format!("bad exponent {:?}", f[0])))?;
        let j: usize = f[1].parse().map_err(|_| Error::Data(format!("bad exponent {:?}", f[1])))?;
        let c: f64 = f[2].parse().map_err(|_| Error::Data(format!("bad coefficient {:?}", f[2])))?;
        terms.push((h, j, c));
    }
    if terms.is_empty() {
        return Err(Error::Data("empty polynomial".into()));
    }
    Poly2::from_terms(&terms)
}
