//! Dense LU factorizations with a pivot-ratio singularity test.

use nalgebra::{DMatrix, DVector, LU};

use crate::error::{Error, Result};

pub struct Factored {
    lu: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    n: usize,
}

/// Ratio of smallest to largest |U_ii| below which a matrix is treated as singular.
const PIVOT_RATIO: f64 = 1e-14;

impl Factored {
    /// Factor `a`; `what` names the system in error messages.
    pub fn new(a: DMatrix<f64>, what: &str) -> Result<Self> {
        let n = a.nrows();
        if n != a.ncols() {
            return Err(Error::IllPosed(format!("{what}: non-square system")));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(Error::IllPosed(format!("{what}: non-finite matrix entry")));
        }
        let lu = a.lu();
        let u = lu.u();
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for i in 0..n {
            let d = u[(i, i)].abs();
            lo = lo.min(d);
            hi = hi.max(d);
        }
        if !(hi > 0.0) || lo < PIVOT_RATIO * hi {
            return Err(Error::IllPosed(format!("{what}: numerically singular (pivot ratio {:.3e})", lo / hi)));
        }
        Ok(Factored { lu, n })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let rhs = DVector::from_column_slice(b);
        let x = self.lu.solve(&rhs).expect("factorization checked at construction");
        x.iter().copied().collect()
    }

    /// Lower bound for the 1-norm condition number from a few probe solves.
    pub fn condition_estimate(&self, a_norm1: f64) -> f64 {
        let mut best: f64 = 0.0;
        for probe in 0..3u64 {
            let b: Vec<f64> = (0..self.n)
                .map(|i| {
                    let h = (i as u64).wrapping_mul(2654435761).wrapping_add(probe * 97) % 7;
                    if h < 3 { 1.0 } else { -1.0 }
                })
                .collect();
            let x = self.solve(&b);
            let nx: f64 = x.iter().map(|v| v.abs()).sum();
            let nb: f64 = b.iter().map(|v| v.abs()).sum();
            best = best.max(nx / nb);
        }
        best * a_norm1
    }
}

pub fn norm1(a: &DMatrix<f64>) -> f64 {
    (0..a.ncols()).map(|j| a.column(j).iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Warn when a first-kind block looks badly conditioned.
pub fn warn_if_ill_conditioned(f: &Factored, a: &DMatrix<f64>, what: &str) {
    let c = f.condition_estimate(norm1(a));
    if c > 1e12 {
        log::warn!("{what}: estimated condition number {c:.3e} exceeds 1e12");
    }
}
