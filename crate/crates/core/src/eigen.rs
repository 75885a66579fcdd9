//! Eigenvalue shifts predicted from the hole capacity and grid heuristics for
//! hole placement.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::asymptotic::leading_energy;
use crate::error::{Error, Result};
use crate::geometry::{ParamCurve, Point};
use crate::taylor::{derivative_tensor_norm2, taylor_from_samples, Poly2};

/// Relative threshold below which a homogeneous Taylor part counts as zero.
pub const KBAR_THRESHOLD: f64 = 1e-6;

/// Relative tolerance for ties in [`optimal_location_max`].
pub const TIE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Regime {
    /// Shift ∝ 1/|log ε|.
    Log,
    /// Shift ∝ ε^exponent.
    Power { exponent: usize },
}

impl Regime {
    pub fn label(&self) -> String {
        match self {
            Regime::Log => "1/|log eps|".to_string(),
            Regime::Power { exponent } => format!("eps^{exponent}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct EigPrediction {
    pub lambda: f64,
    pub center: Point,
    pub kbar: usize,
    pub regime: Regime,
    /// u(p)² in the log regime, the leading energy E otherwise.
    pub coefficient: f64,
}

impl EigPrediction {
    pub fn shift(&self, eps: f64) -> Result<f64> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::Validity(format!("ε must lie in (0, 1), got {eps}")));
        }
        Ok(match self.regime {
            Regime::Log => -self.coefficient / (eps.ln() / (2.0 * PI)),
            Regime::Power { exponent } => eps.powi(exponent as i32) * self.coefficient,
        })
    }

    pub fn eigenvalue(&self, eps: f64) -> Result<f64> {
        Ok(self.lambda + self.shift(eps)?)
    }

    pub fn to_record(&self, eps: &[f64]) -> Result<String> {
        let mut s = format!(
            "p {:.16e} {:.16e}\nkbar {}\nregime {}\ncoefficient {:.16e}\n",
            self.center.x,
            self.center.y,
            self.kbar,
            self.regime.label(),
            self.coefficient
        );
        for e in eps {
            s.push_str(&format!("shift {:.16e} {:.16e}\n", e, self.shift(*e)?));
        }
        Ok(s)
    }
}

/// k̄ from Taylor data: the first degree whose homogeneous part is above
/// [`KBAR_THRESHOLD`] times the largest part up to degree 4.
pub fn classify_kbar(u: &Poly2) -> Result<usize> {
    let top = u.degree().min(4);
    let norms: Vec<f64> = (0..=top).map(|k| derivative_tensor_norm2(u, k).sqrt()).collect();
    let m = norms.iter().cloned().fold(0.0, f64::max);
    if !(m > 0.0) {
        return Err(Error::ZeroFunction("u vanishes to the available order".into()));
    }
    Ok(norms.iter().position(|v| *v > KBAR_THRESHOLD * m).unwrap_or(0))
}

pub fn scaling_exponent(u: &Poly2) -> Result<Regime> {
    Ok(match classify_kbar(u)? {
        0 => Regime::Log,
        k => Regime::Power { exponent: 2 * k },
    })
}

/// Warns when another eigenvalue of `spectrum` lies within `rel_tol` of λ.
pub fn simplicity_warning(lambda: f64, spectrum: &[f64], rel_tol: f64) -> Option<String> {
    let close = spectrum.iter().filter(|v| (*v - lambda).abs() <= rel_tol * lambda.abs()).count();
    if close > 1 {
        let msg = format!("eigenvalue {lambda} is not simple within {rel_tol}; prediction assumes simplicity");
        log::warn!("{msg}");
        Some(msg)
    } else {
        None
    }
}

/// Prediction for a hole p + εω; `u` is the Taylor polynomial at p in local
/// coordinates.
pub fn prediction(lambda: f64, u: &Poly2, center: Point, omega: &ParamCurve, n: usize) -> Result<EigPrediction> {
    let kbar = classify_kbar(u)?;
    let (regime, coefficient) = if kbar == 0 {
        (Regime::Log, u.coeff(0, 0).powi(2))
    } else {
        let lead = u.homogeneous_part(kbar)?;
        (Regime::Power { exponent: 2 * kbar }, leading_energy(omega, &lead, n)?.energy)
    };
    Ok(EigPrediction { lambda, center, kbar, regime, coefficient })
}

/// Predicted eigenvalue of Ω ∖ (p + εω̄).
pub fn predict_shift(lambda: f64, u: &Poly2, omega: &ParamCurve, eps: f64, n: usize) -> Result<f64> {
    prediction(lambda, u, Point::zeros(), omega, n)?.eigenvalue(eps)
}

/// Interior grid points of Ω at least `margin` away from ∂Ω, in row order.
pub fn interior_grid(outer: &ParamCurve, res: usize, margin: f64) -> Result<Vec<Point>> {
    if res < 2 {
        return Err(Error::Data("grid resolution must be at least 2".into()));
    }
    let m = 8 * outer.bandwidth().max(64);
    let pts: Vec<Point> = (0..m).map(|q| outer.point(2.0 * PI * q as f64 / m as f64)).collect();
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in &pts {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let cands: Vec<Point> = (0..res)
        .flat_map(|i| {
            (0..res).map(move |j| {
                let fx = j as f64 / (res - 1) as f64;
                let fy = i as f64 / (res - 1) as f64;
                // symmetric about the box center
                Point::new(0.5 * (lo.x + hi.x) + (fx - 0.5) * (hi.x - lo.x), 0.5 * (lo.y + hi.y) + (fy - 0.5) * (hi.y - lo.y))
            })
        })
        .collect();
    let keep: Vec<Option<Point>> = cands
        .par_iter()
        .map(|p| match outer.winding_contains(*p) {
            Ok(true) if outer.sampled_distance(*p, m) >= margin => Some(*p),
            _ => None,
        })
        .collect();
    Ok(keep.into_iter().flatten().collect())
}

#[derive(Clone, Debug)]
pub struct MaxLocation {
    /// All grid points tied for the maximum of |u|².
    pub points: Vec<Point>,
    pub value: f64,
    pub unique: bool,
    /// Every grid point ties.
    pub degenerate: bool,
    pub cell: f64,
}

pub fn optimal_location_max(
    sampler: &(dyn Fn(Point) -> f64 + Sync),
    outer: &ParamCurve,
    res: usize,
    margin: f64,
) -> Result<MaxLocation> {
    let grid = interior_grid(outer, res, margin)?;
    if grid.is_empty() {
        return Err(Error::Data("no grid point satisfies the margin".into()));
    }
    let vals: Vec<f64> = grid.par_iter().map(|p| sampler(*p).powi(2)).collect();
    let best = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let tol = TIE_TOL * best.abs().max(f64::MIN_POSITIVE);
    let points: Vec<Point> =
        grid.iter().zip(&vals).filter(|(_, v)| best - **v <= tol).map(|(p, _)| *p).collect();
    let degenerate = points.len() == grid.len() && grid.len() > 1;
    Ok(MaxLocation {
        unique: points.len() == 1,
        degenerate,
        points,
        value: best,
        cell: outer.diameter() / (res - 1) as f64,
    })
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub point: Point,
    pub kbar: usize,
    pub energy: f64,
}

#[derive(Clone, Debug)]
pub struct MinLocation {
    /// Points of maximal k̄, ascending in leading energy.
    pub candidates: Vec<Candidate>,
    pub max_kbar: usize,
    pub advisory: Option<String>,
}

pub fn optimal_location_min(
    sampler: &(dyn Fn(Point) -> f64 + Sync),
    outer: &ParamCurve,
    omega: &ParamCurve,
    res: usize,
    margin: f64,
    n: usize,
) -> Result<MinLocation> {
    let grid = interior_grid(outer, res, margin)?;
    let cell = outer.diameter() / (res - 1) as f64;
    let step = 0.05 * cell;
    let taylor: Vec<Result<(usize, Poly2)>> = grid
        .par_iter()
        .map(|p| {
            let t = taylor_from_samples(sampler, *p, 4, step)?;
            Ok((classify_kbar(&t)?, t))
        })
        .collect();
    let mut max_kbar = 0;
    let mut tagged = Vec::new();
    for (p, t) in grid.iter().zip(taylor) {
        if let Ok((k, poly)) = t {
            max_kbar = max_kbar.max(k);
            tagged.push((*p, k, poly));
        }
    }
    if max_kbar == 0 {
        return Ok(MinLocation {
            candidates: Vec::new(),
            max_kbar,
            advisory: Some("no nodal point on the grid: u does not vanish at any sampled center".into()),
        });
    }
    let best: Vec<(Point, Poly2)> =
        tagged.into_iter().filter(|(_, k, _)| *k == max_kbar).map(|(p, _, t)| (p, t)).collect();
    let energies: Vec<Result<f64>> = best
        .par_iter()
        .map(|(_, t)| Ok(leading_energy(omega, &t.homogeneous_part(max_kbar)?, n)?.energy))
        .collect();
    let mut candidates = Vec::new();
    for ((p, _), e) in best.iter().zip(energies) {
        candidates.push(Candidate { point: *p, kbar: max_kbar, energy: e? });
    }
    candidates.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    let m = 8 * outer.bandwidth().max(64);
    let reaches = candidates.iter().any(|c| outer.sampled_distance(c.point, m) <= margin + 2.0 * cell);
    let advisory = (max_kbar == 1 && reaches).then(|| {
        "no minimizer: single nodal line reaching the boundary, coefficient -> 0 toward boundary".to_string()
    });
    Ok(MinLocation { candidates, max_kbar, advisory })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_circle, make_ellipse};
    use crate::spectra::{disk_eigenfunction_taylor, DiskMode, Parity};

    #[test]
    fn regimes() {
        assert_eq!(scaling_exponent(&Poly2::constant(0.3)).unwrap(), Regime::Log);
        let x = Poly2::from_terms(&[(1, 0, 1.0), (2, 0, 0.5)]).unwrap();
        assert_eq!(scaling_exponent(&x).unwrap(), Regime::Power { exponent: 2 });
        let xy = Poly2::from_terms(&[(1, 1, 1.0)]).unwrap();
        assert_eq!(scaling_exponent(&xy).unwrap(), Regime::Power { exponent: 4 });
        assert!(matches!(scaling_exponent(&Poly2::zero(3)), Err(Error::ZeroFunction(_))));
    }

    #[test]
    fn disk_ground_state_shift() {
        let m0 = DiskMode::new(0, 1, 1.0, Parity::Cos).unwrap();
        let u = disk_eigenfunction_taylor(&m0, Point::zeros(), 4).unwrap();
        let disk = make_circle(1.0).unwrap();
        let pr = prediction(m0.lambda, &u, Point::zeros(), &disk, 64).unwrap();
        let s = pr.shift(1e-3).unwrap();
        assert!((m0.norm - 1.0868).abs() < 1e-4);
        assert!((s - 1.0744).abs() < 1e-3, "{s}");
        for e in [0.3, 1e-2, 1e-8] {
            assert!(pr.shift(e).unwrap() > 0.0);
        }
    }

    #[test]
    fn power_shift() {
        let u = Poly2::from_terms(&[(1, 0, 1.5)]).unwrap();
        let disk = make_circle(1.0).unwrap();
        let v = predict_shift(3.0, &u, &disk, 0.01, 64).unwrap();
        assert!((v - 3.0 - 2.0 * PI * 2.25 * 1e-4).abs() < 1e-12);
    }

    #[test]
    fn translation_covariance() {
        let omega = make_ellipse(0.75, 0.5, 0.3, Point::zeros()).unwrap();
        let base = Poly2::from_terms(&[(1, 0, 0.4), (0, 1, -0.7), (2, 0, 0.2)]).unwrap();
        let a = prediction(2.0, &base, Point::zeros(), &omega, 64).unwrap();
        let b = prediction(2.0, &base, Point::new(0.4, -0.1), &omega, 64).unwrap();
        assert!((a.shift(0.01).unwrap() - b.shift(0.01).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn placement_on_disk_modes() {
        let disk = make_circle(1.0).unwrap();
        let hole = make_circle(1.0).unwrap();
        let m0 = DiskMode::new(0, 1, 1.0, Parity::Cos).unwrap();
        let mx = optimal_location_max(&|p| m0.value(p), &disk, 21, 0.05).unwrap();
        assert!(mx.unique && mx.points[0].norm() < mx.cell);
        let m1 = DiskMode::new(1, 1, 1.0, Parity::Cos).unwrap();
        let mx1 = optimal_location_max(&|p| m1.value(p), &disk, 21, 0.05).unwrap();
        assert_eq!(mx1.points.len(), 2);
        assert!((mx1.points[0] + mx1.points[1]).norm() < 1e-12);
        let flat = optimal_location_max(&|_| 2.0, &disk, 11, 0.05).unwrap();
        assert!(flat.degenerate);

        let lo1 = optimal_location_min(&|p| m1.value(p), &disk, &hole, 21, 0.05, 32).unwrap();
        assert_eq!(lo1.max_kbar, 1);
        assert!(lo1.advisory.as_deref().unwrap().starts_with("no minimizer"));
        let m2 = DiskMode::new(2, 1, 1.0, Parity::Cos).unwrap();
        let lo2 = optimal_location_min(&|p| m2.value(p), &disk, &hole, 21, 0.05, 32).unwrap();
        assert_eq!(lo2.max_kbar, 2);
        assert_eq!(lo2.candidates.len(), 1);
        assert!(lo2.candidates[0].point.norm() < 1e-12 && lo2.advisory.is_none());
        let none = optimal_location_min(&|p| 2.0 + p.x, &disk, &hole, 11, 0.05, 32).unwrap();
        assert!(none.candidates.is_empty() && none.advisory.is_some());
    }
}
