//! Interior and exterior Dirichlet solvers, the equilibrium density, r_0 and the
//! logarithmic capacity.

use nalgebra::DMatrix;

use crate::bem::{
    assemble_dlp_adjoint, assemble_dlp_trace, assemble_single_layer, eval_potentials, fundamental_solution,
    BoundaryGrid, DenseOperator, LayerKind, DEFAULT_DELTA,
};
use crate::error::{Error, Result};
use crate::geometry::{curve_inside, ParamCurve, Point};
use crate::linalg::{warn_if_ill_conditioned, Factored};

/// Bounded exterior field v[σ] + c with ∫σ dσ = 0.
#[derive(Clone, Debug)]
pub struct ExteriorSolution {
    pub sigma: Vec<f64>,
    pub c: f64,
}

/// Factored single-layer-plus-constant system on one grid, reusable across right-hand sides.
pub struct ExteriorSolver {
    pub grid: BoundaryGrid,
    wstar: DenseOperator,
    lu: Factored,
}

impl ExteriorSolver {
    pub fn new(grid: &BoundaryGrid) -> Result<Self> {
        let n = grid.n;
        let v = assemble_single_layer(grid, grid)?;
        let mut a = DMatrix::zeros(n + 1, n + 1);
        a.view_mut((0, 0), (n, n)).copy_from(&v.matrix);
        for i in 0..n {
            a[(i, n)] = 1.0;
            a[(n, i)] = grid.ds[i];
        }
        let lu = Factored::new(a.clone(), "exterior single-layer system")
            .map_err(|e| Error::DegenerateContour(e.to_string()))?;
        warn_if_ill_conditioned(&lu, &a, "exterior single-layer system");
        Ok(ExteriorSolver { grid: grid.clone(), wstar: assemble_dlp_adjoint(grid), lu })
    }

    pub fn solve(&self, data: &[f64]) -> Result<ExteriorSolution> {
        let n = self.grid.n;
        if data.len() != n {
            return Err(Error::Data(format!("data length {} != grid size {n}", data.len())));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data("non-finite boundary data".into()));
        }
        let mut rhs = data.to_vec();
        rhs.push(0.0);
        let mut x = self.lu.solve(&rhs);
        let c = x.pop().unwrap();
        Ok(ExteriorSolution { sigma: x, c })
    }

    /// Outward normal derivative of the exterior field: σ/2 + W*σ.
    pub fn flux(&self, sol: &ExteriorSolution) -> Vec<f64> {
        let ws = self.wstar.apply(&sol.sigma);
        sol.sigma.iter().zip(ws).map(|(s, w)| 0.5 * s + w).collect()
    }

    /// Exterior Dirichlet energy −∫(data − c) ∂_ν f dσ.
    pub fn energy(&self, data: &[f64], sol: &ExteriorSolution) -> f64 {
        let f = self.flux(sol);
        let shifted: Vec<f64> = data.iter().map(|d| d - sol.c).collect();
        -self.grid.inner(&shifted, &f)
    }
}

impl ExteriorSolution {
    pub fn eval(&self, grid: &BoundaryGrid, targets: &[Point]) -> Result<Vec<f64>> {
        let e = eval_potentials(grid, &self.sigma, targets, LayerKind::Single, false, DEFAULT_DELTA)?;
        Ok(e.values.into_iter().map(|v| v + self.c).collect())
    }
}

pub fn solve_exterior_bounded(grid: &BoundaryGrid, data: &[f64]) -> Result<ExteriorSolution> {
    ExteriorSolver::new(grid)?.solve(data)
}

/// Double-layer density ψ with (1/2 + W)ψ = data.
pub fn solve_interior_dirichlet(grid: &BoundaryGrid, data: &[f64]) -> Result<Vec<f64>> {
    if data.len() != grid.n {
        return Err(Error::Data(format!("data length {} != grid size {}", data.len(), grid.n)));
    }
    let mut a = assemble_dlp_trace(grid).matrix;
    for i in 0..grid.n {
        a[(i, i)] += 0.5;
    }
    Ok(Factored::new(a, "interior double-layer system")?.solve(data))
}

/// Solves (1/2 − W*)ρ = 0 with ∫ρ dσ = 1.
pub fn equilibrium_density(grid: &BoundaryGrid) -> Result<Vec<f64>> {
    let mut rhs = vec![0.0; grid.n];
    rhs.push(1.0);
    let mut x = bordered_inner_adjoint(grid)?.solve(&rhs);
    x.pop();
    Ok(x)
}

/// Factored [(1/2 − W*) 1; dσᵀ 0].
pub(crate) fn bordered_inner_adjoint(grid: &BoundaryGrid) -> Result<Factored> {
    bordered(grid, &assemble_dlp_adjoint(grid), -1.0, "equilibrium system")
}

/// Factored [(1/2 − W) 1; dσᵀ 0].
pub(crate) fn bordered_inner_trace(grid: &BoundaryGrid) -> Result<Factored> {
    bordered(grid, &assemble_dlp_trace(grid), -1.0, "mean-zero system")
}

/// Factored (1/2 + K) for K = W or W*.
pub(crate) fn plain_second_kind(op: &DenseOperator, what: &str) -> Result<Factored> {
    let mut a = op.matrix.clone();
    for i in 0..a.nrows() {
        a[(i, i)] += 0.5;
    }
    Factored::new(a, what).map_err(|e| Error::Resolution(e.to_string()))
}

fn bordered(grid: &BoundaryGrid, op: &DenseOperator, sign: f64, what: &str) -> Result<Factored> {
    let n = grid.n;
    let mut a = DMatrix::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = sign * op.matrix[(i, j)];
        }
        a[(i, i)] += 0.5;
        a[(i, n)] = 1.0;
        a[(n, i)] = grid.ds[i];
    }
    Factored::new(a, what).map_err(|e| Error::DegenerateContour(e.to_string()))
}

fn s_data(grid: &BoundaryGrid) -> Result<Vec<f64>> {
    grid.points.iter().map(|p| fundamental_solution(*p)).collect()
}

/// H^o_0(0): interior harmonic extension of S|∂Ω evaluated at the origin.
pub fn h_outer_at_origin(outer: &BoundaryGrid) -> Result<f64> {
    let psi = solve_interior_dirichlet(outer, &s_data(outer)?)?;
    Ok(eval_potentials(outer, &psi, &[Point::zeros()], LayerKind::Double, false, DEFAULT_DELTA)?.values[0])
}

/// lim_{t→∞} H^i_0(t) for the exterior of ω (taken in the given frame).
pub fn h_inner_limit(inner: &BoundaryGrid) -> Result<f64> {
    Ok(solve_exterior_bounded(inner, &s_data(inner)?)?.c)
}

pub(crate) fn check_pair(outer: &ParamCurve, inner: &ParamCurve) -> Result<()> {
    if !outer.winding_contains(Point::zeros())? {
        return Err(Error::Containment("origin is not inside Ω".into()));
    }
    if !inner.winding_contains(Point::zeros())? {
        return Err(Error::Containment("origin is not inside ω".into()));
    }
    if !curve_inside(inner, outer)? {
        return Err(Error::Containment("ω̄ is not contained in Ω".into()));
    }
    Ok(())
}

/// r_0 = lim H^i_0 − H^o_0(0).
pub fn r0(outer: &ParamCurve, inner: &ParamCurve, n: usize) -> Result<f64> {
    if outer != inner {
        check_pair(outer, inner)?;
    } else if !outer.winding_contains(Point::zeros())? {
        return Err(Error::Containment("origin is not inside Ω".into()));
    }
    let go = BoundaryGrid::new(outer, n)?;
    let gi = BoundaryGrid::new(inner, n)?;
    Ok(h_inner_limit(&gi)? - h_outer_at_origin(&go)?)
}

/// exp(2π lim H^i_0), computed with the curve moved to its centroid.
pub fn log_capacity(omega: &ParamCurve, n: usize) -> Result<f64> {
    let centered = omega.translate(-omega.centroid());
    if !centered.winding_contains(Point::zeros())? {
        return Err(Error::Containment("centroid lies outside the curve".into()));
    }
    let g = BoundaryGrid::new(&centered, n)?;
    Ok((2.0 * std::f64::consts::PI * h_inner_limit(&g)?).exp())
}
