//! Bessel functions, disk Dirichlet spectra and eigenfunctions, and concentric
//! annulus eigenvalues from cross-product roots.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::taylor::{factorial, taylor_from_samples, Field, Poly2};

pub const MAX_BESSEL_ORDER: usize = 12;
pub const MAX_BESSEL_ARG: f64 = 1e4;
const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// J_0..=J_{m_max}(x) by Miller's backward recurrence normalized with
/// J₀ + 2ΣJ_{2k} = 1.
fn bessel_j_all(m_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; m_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    let big = m_max.max(x.ceil() as usize);
    let mut start = big + 20 + (40.0 * big as f64).sqrt() as usize;
    start += start % 2;
    let (mut fp1, mut f) = (0.0f64, 1e-300f64);
    let mut sum = 0.0;
    for k in (1..=start).rev() {
        let fm1 = 2.0 * k as f64 / x * f - fp1;
        fp1 = f;
        f = fm1;
        // f now holds the value at index k − 1
        let idx = k - 1;
        if idx <= m_max {
            out[idx] = f;
        }
        if idx % 2 == 0 && idx > 0 {
            sum += 2.0 * f;
        }
        if f.abs() > 1e250 {
            f *= 1e-250;
            fp1 *= 1e-250;
            sum *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    sum += f;
    for v in out.iter_mut() {
        *v /= sum;
    }
    out
}

fn check_args(m: usize, x: f64) -> Result<()> {
    if m > MAX_BESSEL_ORDER {
        return Err(Error::Domain(format!("Bessel order {m} above {MAX_BESSEL_ORDER}")));
    }
    if !(x.is_finite() && x <= MAX_BESSEL_ARG) {
        return Err(Error::Domain(format!("Bessel argument {x} out of range")));
    }
    Ok(())
}

pub fn bessel_j(m: usize, x: f64) -> Result<f64> {
    check_args(m, x)?;
    if x < 0.0 {
        return Err(Error::Domain("J is evaluated for x >= 0 only".into()));
    }
    Ok(bessel_j_all(m, x)[m])
}

pub fn bessel_y(m: usize, x: f64) -> Result<f64> {
    check_args(m, x)?;
    if !(x > 0.0) {
        return Err(Error::Domain(format!("Y needs x > 0, got {x}")));
    }
    let big = x.ceil() as usize;
    let kmax = big + 20 + (40.0 * big as f64).sqrt() as usize;
    let j = bessel_j_all(2 * kmax + 2, x);
    let lg = (0.5 * x).ln() + EULER_GAMMA;
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    for k in 1..=kmax {
        let sgn = if k % 2 == 0 { 1.0 } else { -1.0 };
        s0 += sgn * j[2 * k] / k as f64;
        s1 += sgn * (j[2 * k - 1] - j[2 * k + 1]) / k as f64;
    }
    let y0 = 2.0 / PI * (lg * j[0] - 2.0 * s0);
    let y1 = 2.0 / PI * (-j[0] / x + lg * j[1] + s1);
    if m == 0 {
        return Ok(y0);
    }
    let (mut a, mut b) = (y0, y1);
    for k in 1..m {
        let c = 2.0 * k as f64 / x * b - a;
        a = b;
        b = c;
    }
    Ok(b)
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Scans `f` from `start` with step `h` and returns the first `count` roots.
fn scan_roots(f: &dyn Fn(f64) -> f64, start: f64, h: f64, count: usize, limit: f64) -> Result<Vec<f64>> {
    let mut roots = Vec::with_capacity(count);
    let mut a = start;
    let mut fa = f(a);
    while roots.len() < count {
        let b = a + h;
        if b > limit {
            return Err(Error::Resolution(format!("root bracketing failed below {limit}")));
        }
        let fb = f(b);
        if fa == 0.0 {
            roots.push(a);
        } else if (fa > 0.0) != (fb > 0.0) {
            roots.push(bisect(f, a, b));
        }
        a = b;
        fa = fb;
    }
    Ok(roots)
}

/// First `count` positive zeros j_{m,1}, j_{m,2}, ...
pub fn bessel_j_zeros(m: usize, count: usize) -> Result<Vec<f64>> {
    check_args(m, 0.0)?;
    let f = |x: f64| bessel_j_all(m, x)[m];
    // j_{m,1} > m, zeros are spaced by roughly π
    scan_roots(&f, m as f64 + 0.5, 0.05, count, MAX_BESSEL_ARG)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Cos,
    Sin,
}

#[derive(Clone, Copy, Debug)]
pub struct DiskMode {
    pub m: usize,
    pub n: usize,
    pub radius: f64,
    /// j_{m,n}.
    pub zero: f64,
    pub lambda: f64,
    pub parity: Parity,
    /// Factor making N J_m(j r/R) cos/sin(mθ) unit in L².
    pub norm: f64,
    /// 1 for m = 0, 2 for the cos/sin pairs.
    pub multiplicity: usize,
}

impl DiskMode {
    pub fn new(m: usize, n: usize, radius: f64, parity: Parity) -> Result<Self> {
        if n == 0 || !(radius > 0.0) {
            return Err(Error::Domain("disk mode needs n >= 1 and R > 0".into()));
        }
        if m == 0 && parity == Parity::Sin {
            return Err(Error::Domain("m = 0 has no sine mode".into()));
        }
        let zero = bessel_j_zeros(m, n)?[n - 1];
        let jp = bessel_j(m + 1, zero)?.abs();
        let norm = if m == 0 {
            1.0 / (radius * PI.sqrt() * jp)
        } else {
            2f64.sqrt() / (radius * PI.sqrt() * jp)
        };
        Ok(DiskMode {
            m,
            n,
            radius,
            zero,
            lambda: (zero / radius).powi(2),
            parity,
            norm,
            multiplicity: if m == 0 { 1 } else { 2 },
        })
    }

    pub fn is_simple(&self) -> bool {
        self.multiplicity == 1
    }

    fn angular(&self, th: f64) -> (f64, f64) {
        let mf = self.m as f64;
        match self.parity {
            Parity::Cos => ((mf * th).cos(), -mf * (mf * th).sin()),
            Parity::Sin => ((mf * th).sin(), mf * (mf * th).cos()),
        }
    }

    pub fn value(&self, x: Point) -> f64 {
        let r = x.norm();
        let k = self.zero / self.radius;
        let (a, _) = self.angular(x.y.atan2(x.x));
        self.norm * bessel_j_all(self.m, k * r)[self.m] * a
    }

    pub fn gradient(&self, x: Point) -> Point {
        let r = x.norm();
        let k = self.zero / self.radius;
        let m = self.m;
        if r == 0.0 {
            return if m == 1 {
                let d = self.norm * k / 2.0;
                match self.parity {
                    Parity::Cos => Point::new(d, 0.0),
                    Parity::Sin => Point::new(0.0, d),
                }
            } else {
                Point::zeros()
            };
        }
        let js = bessel_j_all(m + 1, k * r);
        let jm = js[m];
        let djm = if m == 0 { -js[1] } else { 0.5 * (js[m - 1] - js[m + 1]) };
        let th = x.y.atan2(x.x);
        let (a, da) = self.angular(th);
        let dr = self.norm * k * djm * a;
        let dth = self.norm * jm * da / r;
        let (c, s) = (th.cos(), th.sin());
        Point::new(dr * c - dth * s, dr * s + dth * c)
    }
}

impl Field for DiskMode {
    fn value(&self, x: Point) -> f64 {
        DiskMode::value(self, x)
    }
    fn gradient(&self, x: Point) -> Point {
        DiskMode::gradient(self, x)
    }
}

/// The lowest `count` disk eigenvalues with multiplicity, cos before sin.
pub fn disk_eigenvalues(radius: f64, count: usize) -> Result<Vec<DiskMode>> {
    if count > 50 {
        return Err(Error::Domain("at most 50 disk eigenvalues".into()));
    }
    let mut zeros: Vec<(f64, usize, usize)> = Vec::new();
    for m in 0..=MAX_BESSEL_ORDER {
        for (i, z) in bessel_j_zeros(m, 12)?.into_iter().enumerate() {
            zeros.push((z, m, i + 1));
        }
    }
    zeros.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = Vec::new();
    for (_, m, n) in zeros {
        if out.len() >= count {
            break;
        }
        out.push(DiskMode::new(m, n, radius, Parity::Cos)?);
        if m > 0 && out.len() < count {
            out.push(DiskMode::new(m, n, radius, Parity::Sin)?);
        }
    }
    Ok(out)
}

/// Taylor polynomial of the mode at `p`: exact from the J_m series at the
/// center, numerical (degree ≤ 4) elsewhere.
pub fn disk_eigenfunction_taylor(mode: &DiskMode, p: Point, degree: usize) -> Result<Poly2> {
    if p.norm() >= mode.radius {
        return Err(Error::Domain("Taylor point outside the disk".into()));
    }
    if degree > 8 {
        return Err(Error::Degree("disk Taylor degree above 8".into()));
    }
    if p.norm() > 0.0 {
        let step = 0.02 * (mode.radius - p.norm()).min(mode.radius / mode.zero.max(1.0));
        let f = |x: Point| mode.value(x);
        return taylor_from_samples(&f, p, degree.min(4), step);
    }
    let m = mode.m;
    let k = mode.zero / mode.radius;
    // Re/Im of (x + iy)^m
    let mut re = Poly2::constant(1.0);
    let mut im = Poly2::zero(0);
    let x = Poly2::from_terms(&[(1, 0, 1.0)])?;
    let y = Poly2::from_terms(&[(0, 1, 1.0)])?;
    for _ in 0..m {
        let nre = re.mul(&x).add(&im.mul(&y).scale(-1.0));
        let nim = re.mul(&y).add(&im.mul(&x));
        re = nre;
        im = nim;
    }
    let ang = if mode.parity == Parity::Cos { re } else { im };
    let r2 = x.mul(&x).add(&y.mul(&y));
    let mut out = Poly2::zero(degree);
    let mut rpow = Poly2::constant(1.0);
    let mut s = 0;
    while m + 2 * s <= degree {
        let c = (if s % 2 == 0 { 1.0 } else { -1.0 }) * (0.5 * k).powi((m + 2 * s) as i32)
            / (factorial(s) * factorial(m + s));
        out = out.add(&ang.mul(&rpow).scale(mode.norm * c));
        rpow = rpow.mul(&r2);
        s += 1;
    }
    Ok(out.with_degree(degree))
}

/// J_m(kε)Y_m(k) − J_m(k)Y_m(kε), divided by max(|J_m(kε)|, |Y_m(kε)|).
pub fn annulus_cross(eps: f64, m: usize, k: f64) -> Result<f64> {
    let (je, ye) = (bessel_j(m, k * eps)?, bessel_y(m, k * eps)?);
    let (j1, y1) = (bessel_j(m, k)?, bessel_y(m, k)?);
    let scale = je.abs().max(ye.abs());
    Ok((je / scale) * y1 - j1 * (ye / scale))
}

/// First `count` eigenvalues k² of the annulus ε < |x| < 1 with angular index m.
pub fn annulus_eigenvalues(eps: f64, m: usize, count: usize) -> Result<Vec<f64>> {
    if !(1e-6..=0.9).contains(&eps) {
        return Err(Error::Domain(format!("annulus ratio {eps} outside [1e-6, 0.9]")));
    }
    let f = |k: f64| annulus_cross(eps, m, k).unwrap_or(f64::NAN);
    // annulus modes lie above the matching disk mode
    let start = bessel_j_zeros(m, 1)?[0] * (1.0 - 1e-3);
    let h = (0.02 * PI / (1.0 - eps)).min(0.05);
    let roots = scan_roots(&f, start, h, count, MAX_BESSEL_ARG / 2.0)?;
    for k in &roots {
        let v = f(*k);
        if !(v.abs() <= 1e-11) {
            return Err(Error::Resolution(format!("cross product {v:.3e} at root {k}")));
        }
    }
    Ok(roots.into_iter().map(|k| k * k).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taylor::{beta_phi, vanishing_order, DEFAULT_VANISHING_TOL};

    const J01: f64 = 2.404_825_557_695_773;
    const J11: f64 = 3.831_705_970_207_512;

    #[test]
    fn bessel_examples() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert!(bessel_j(0, J01).unwrap().abs() < 1e-15);
        assert!((bessel_j(0, 1.0).unwrap() - 0.765_197_686_557_966_6).abs() < 1e-15);
        assert!((bessel_j(5, 10.0).unwrap() + 0.234_061_528_186_793_7).abs() < 1e-14);
        assert!((bessel_y(0, 1.0).unwrap() - 0.088_256_964_215_676_96).abs() < 1e-14);
        assert!((bessel_y(1, 1.0).unwrap() + 0.781_212_821_300_288_7).abs() < 1e-14);
        assert!((bessel_y(2, 5.0).unwrap() - 0.367_662_88).abs() < 1e-7);
        assert!(matches!(bessel_y(0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(bessel_j(13, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn wronskian() {
        for &x in &[1e-3, 0.37, 1.0, 4.2, 17.5, 120.0, 2500.0] {
            for m in 0..MAX_BESSEL_ORDER {
                let w = bessel_j(m + 1, x).unwrap() * bessel_y(m, x).unwrap()
                    - bessel_j(m, x).unwrap() * bessel_y(m + 1, x).unwrap();
                let exact = 2.0 / (PI * x);
                assert!((w - exact).abs() <= 1e-9 * exact.max(1.0), "m={m} x={x} {w} {exact}");
            }
        }
    }

    #[test]
    fn disk_spectrum() {
        let ev = disk_eigenvalues(1.0, 6).unwrap();
        assert!((ev[0].lambda - J01 * J01).abs() < 1e-12 && ev[0].is_simple());
        assert!((ev[1].lambda - J11 * J11).abs() < 1e-12 && !ev[1].is_simple());
        assert_eq!(ev[1].lambda, ev[2].lambda);
        let ev2 = disk_eigenvalues(2.0, 6).unwrap();
        for (a, b) in ev.iter().zip(&ev2) {
            assert!((a.lambda / 4.0 - b.lambda).abs() < 1e-12);
        }
        for md in &ev {
            assert!(bessel_j(md.m, md.zero).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn l2_normalization() {
        for md in disk_eigenvalues(1.5, 8).unwrap() {
            // radial Gauss-Legendre in r, exact trapezoid in θ
            let (x, w) = crate::taylor::gauss_legendre(60);
            let nt = 64;
            let mut s = 0.0;
            for (xi, wi) in x.iter().zip(&w) {
                let r = 0.5 * md.radius * (xi + 1.0);
                for q in 0..nt {
                    let th = 2.0 * PI * q as f64 / nt as f64;
                    let v = md.value(Point::new(r * th.cos(), r * th.sin()));
                    s += wi * 0.5 * md.radius * r * v * v * 2.0 * PI / nt as f64;
                }
            }
            assert!((s - 1.0).abs() < 1e-10, "{md:?} {s}");
        }
    }

    #[test]
    fn taylor_at_center() {
        let m1 = DiskMode::new(1, 1, 1.0, Parity::Cos).unwrap();
        let p = disk_eigenfunction_taylor(&m1, Point::zeros(), 5).unwrap();
        assert_eq!(vanishing_order(&p, DEFAULT_VANISHING_TOL).unwrap(), 1);
        let lead = beta_phi(&p.homogeneous_part(1).unwrap(), 1).unwrap();
        assert!((lead.beta.abs() - m1.norm * J11 / 2.0).abs() < 1e-14);
        let m0 = DiskMode::new(0, 1, 1.0, Parity::Cos).unwrap();
        let p0 = disk_eigenfunction_taylor(&m0, Point::zeros(), 4).unwrap();
        assert!(p0.coeff(0, 0) > 0.0 && (p0.coeff(0, 0) - m0.norm).abs() < 1e-15);
        let m2 = DiskMode::new(2, 1, 1.0, Parity::Cos).unwrap();
        let p2 = disk_eigenfunction_taylor(&m2, Point::zeros(), 4).unwrap();
        assert_eq!(vanishing_order(&p2, DEFAULT_VANISHING_TOL).unwrap(), 2);
        let h = p2.homogeneous_part(2).unwrap();
        assert!((h.coeff(2, 0) + h.coeff(0, 2)).abs() < 1e-14 && h.coeff(1, 1) == 0.0);
        // Taylor polynomial against the mode near the center
        let q = Point::new(0.05, -0.03);
        let p8 = disk_eigenfunction_taylor(&m2, Point::zeros(), 8).unwrap();
        assert!((p8.eval(q) - m2.value(q)).abs() < 1e-11);
        assert!(matches!(disk_eigenfunction_taylor(&m2, Point::new(1.0, 0.2), 3), Err(Error::Domain(_))));
    }

    #[test]
    fn taylor_off_center_and_gradient() {
        let md = DiskMode::new(2, 1, 1.0, Parity::Sin).unwrap();
        let p = Point::new(0.3, 0.2);
        let t = disk_eigenfunction_taylor(&md, p, 3).unwrap();
        assert!((t.coeff(0, 0) - md.value(p)).abs() < 1e-12);
        let g = md.gradient(p);
        assert!((t.coeff(1, 0) - g.x).abs() < 1e-8 && (t.coeff(0, 1) - g.y).abs() < 1e-8);
    }

    #[test]
    fn annulus_examples() {
        let l = annulus_eigenvalues(0.5, 0, 2).unwrap();
        let thin = PI * PI / 0.25;
        // tabulated first zero of J₀(x)Y₀(2x) − J₀(2x)Y₀(x) is 3.1230, here scaled by 2
        assert!((l[0].sqrt() - 2.0 * 3.1230).abs() < 2e-4);
        assert!((l[0] - thin).abs() < 0.015 * thin);
        assert!(l[1] > l[0]);
        let small = annulus_eigenvalues(1e-6, 0, 1).unwrap()[0];
        let m0 = DiskMode::new(0, 1, 1.0, Parity::Cos).unwrap();
        let pred = m0.norm.powi(2) * 2.0 * PI / (1e-6f64).ln().abs();
        let gap = small - J01 * J01;
        assert!(gap > 0.0 && (gap - pred).abs() < 0.25 * pred, "{gap} {pred}");
        assert!(annulus_eigenvalues(0.3, 1, 1).unwrap()[0] > annulus_eigenvalues(0.3, 0, 1).unwrap()[0]);
        let mut prev = f64::INFINITY;
        for e in [0.4, 0.2, 0.1, 0.01, 1e-4] {
            let v = annulus_eigenvalues(e, 0, 1).unwrap()[0];
            assert!(v < prev && v > J01 * J01);
            prev = v;
        }
        assert!(matches!(annulus_eigenvalues(0.95, 0, 1), Err(Error::Domain(_))));
    }
}
