//! Direct fixed-ε capacities from a two-boundary single-layer solve.

use nalgebra::DMatrix;

use crate::bem::{
    assemble_dlp_adjoint, assemble_single_layer, assemble_single_layer_normal_derivative, BoundaryGrid,
};
use crate::error::{Error, Result};
use crate::geometry::{curve_inside, ParamCurve, Point};
use crate::linalg::{warn_if_ill_conditioned, Factored};
use crate::taylor::{area_integral_fn, poly_area_integral, Field};

/// Largest node count tried by the automatic refinement.
pub const MAX_NODES: usize = 2048;

/// Minimum boundary gap in node spacings.
pub const GAP_SPACINGS: f64 = 5.0;

/// u = v[∂Ω, σ_o] + v[∂(εω), σ_i] + c.
#[derive(Clone, Debug)]
pub struct TwoBoundarySolution {
    pub sigma_o: Vec<f64>,
    pub sigma_i: Vec<f64>,
    pub c: f64,
    /// Normal derivative on the hole from the Ω_ε side (ν outward from the hole).
    pub hole_flux: Vec<f64>,
    /// Normal derivative on ∂Ω from inside (ν outward from Ω).
    pub outer_flux: Vec<f64>,
}

fn check_gap(outer: &BoundaryGrid, hole: &BoundaryGrid) -> Result<()> {
    let gap = hole.points.iter().map(|p| outer.node_distance(*p)).fold(f64::INFINITY, f64::min);
    let need = GAP_SPACINGS * outer.spacing().max(hole.spacing());
    if gap < need {
        return Err(Error::Resolution(format!(
            "boundary gap {gap:.3e} below {GAP_SPACINGS} node spacings ({need:.3e}); increase n"
        )));
    }
    Ok(())
}

pub fn solve_two_boundary_dirichlet(
    outer: &BoundaryGrid,
    hole: &BoundaryGrid,
    data_outer: &[f64],
    data_inner: &[f64],
) -> Result<TwoBoundarySolution> {
    if data_outer.len() != outer.n || data_inner.len() != hole.n {
        return Err(Error::Data("boundary data length does not match grid".into()));
    }
    if data_outer.iter().chain(data_inner).any(|v| !v.is_finite()) {
        return Err(Error::Data("non-finite boundary data".into()));
    }
    check_gap(outer, hole)?;
    let (no, ni) = (outer.n, hole.n);
    let voo = assemble_single_layer(outer, outer)?;
    let voi = assemble_single_layer(outer, hole)?;
    let vio = assemble_single_layer(hole, outer)?;
    let vii = assemble_single_layer(hole, hole)?;
    let dim = no + ni + 1;
    let mut a = DMatrix::zeros(dim, dim);
    a.view_mut((0, 0), (no, no)).copy_from(&voo.matrix);
    a.view_mut((0, no), (no, ni)).copy_from(&voi.matrix);
    a.view_mut((no, 0), (ni, no)).copy_from(&vio.matrix);
    a.view_mut((no, no), (ni, ni)).copy_from(&vii.matrix);
    for i in 0..no + ni {
        a[(i, dim - 1)] = 1.0;
    }
    for j in 0..no {
        a[(dim - 1, j)] = outer.ds[j];
    }
    for j in 0..ni {
        a[(dim - 1, no + j)] = hole.ds[j];
    }
    let lu = Factored::new(a.clone(), "two-boundary system").map_err(|e| Error::Resolution(e.to_string()))?;
    warn_if_ill_conditioned(&lu, &a, "two-boundary system");
    let mut rhs = data_outer.to_vec();
    rhs.extend_from_slice(data_inner);
    rhs.push(0.0);
    let x = lu.solve(&rhs);
    let sigma_o = x[..no].to_vec();
    let sigma_i = x[no..no + ni].to_vec();
    let c = x[dim - 1];

    let wi = assemble_dlp_adjoint(hole).apply(&sigma_i);
    let cross_i = assemble_single_layer_normal_derivative(hole, outer).apply(&sigma_o);
    let hole_flux = (0..ni).map(|k| 0.5 * sigma_i[k] + wi[k] + cross_i[k]).collect();
    let wo = assemble_dlp_adjoint(outer).apply(&sigma_o);
    let cross_o = assemble_single_layer_normal_derivative(outer, hole).apply(&sigma_i);
    let outer_flux = (0..no).map(|k| -0.5 * sigma_o[k] + wo[k] + cross_o[k]).collect();
    Ok(TwoBoundarySolution { sigma_o, sigma_i, c, hole_flux, outer_flux })
}

fn check_hole(outer: &ParamCurve, hole: &ParamCurve) -> Result<()> {
    if !curve_inside(hole, outer)? {
        return Err(Error::Containment("hole is not inside Ω".into()));
    }
    Ok(())
}

/// Runs `f` at n, 2n, ... up to [`MAX_NODES`] while the boundary gap is under-resolved.
fn with_refinement<T>(n: usize, mut f: impl FnMut(usize) -> Result<T>) -> Result<T> {
    let mut m = n;
    loop {
        match f(m) {
            Err(Error::Resolution(msg)) if msg.contains("boundary gap") && m * 2 <= MAX_NODES => m *= 2,
            other => return other,
        }
    }
}

/// Cap_Ω(εω) = −∫ ∂_ν V dσ for the capacitary potential V.
pub fn condenser_capacity(outer: &ParamCurve, omega: &ParamCurve, eps: f64, n: usize) -> Result<f64> {
    let hole = omega.scale_about_origin(eps)?;
    check_hole(outer, &hole)?;
    with_refinement(n, |m| {
        let go = BoundaryGrid::new(outer, m)?;
        let gi = BoundaryGrid::new(&hole, m)?;
        let sol = solve_two_boundary_dirichlet(&go, &gi, &vec![0.0; m], &vec![1.0; m])?;
        Ok(-gi.integrate(&sol.hole_flux))
    })
}

/// Cap_Ω(εω, u) = −∫_{∂(εω)} ∂_ν u_ε · u dσ + ∫_{εω} |∇u|² dx.
pub fn u_capacity(outer: &ParamCurve, omega: &ParamCurve, u: &dyn Field, eps: f64, n: usize) -> Result<f64> {
    let hole = omega.scale_about_origin(eps)?;
    check_hole(outer, &hole)?;
    let interior = match u.as_poly() {
        Some(p) => {
            let gx = p.derivative(0);
            let gy = p.derivative(1);
            poly_area_integral(&gx.mul(&gx).add(&gy.mul(&gy)), &hole)
        }
        None => {
            let f = |x: Point| u.gradient(x).norm_squared();
            area_integral_fn(&f, &hole, (16 * hole.bandwidth()).max(256), 32)
        }
    };
    if !interior.is_finite() {
        return Err(Error::Data("non-finite interior energy".into()));
    }
    let boundary = with_refinement(n, |m| {
        let go = BoundaryGrid::new(outer, m)?;
        let gi = BoundaryGrid::new(&hole, m)?;
        let data: Vec<f64> = gi.points.iter().map(|p| u.value(*p)).collect();
        let sol = solve_two_boundary_dirichlet(&go, &gi, &vec![0.0; m], &data)?;
        Ok(-gi.inner(&sol.hole_flux, &data))
    })?;
    Ok(boundary + interior)
}
