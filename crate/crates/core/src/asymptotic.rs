//! Coefficient recursions for the densities (ρ, θ), the field and flux ladders,
//! and the capacity series Σ_n ε^n Σ_l c_{(n,l)} / (r_0 + log|ε|/2π)^l.

use std::f64::consts::PI;

use crate::bem::{
    assemble_dlp_adjoint, assemble_dlp_trace, assemble_single_layer, deriv_s_unchecked, grad_deriv_s,
    BoundaryGrid, DenseOperator,
};
use crate::error::{Error, Result};
use crate::geometry::{ParamCurve, Point};
use crate::harmonic::{
    bordered_inner_adjoint, bordered_inner_trace, check_pair, h_outer_at_origin, plain_second_kind, r0,
    ExteriorSolver,
};
use crate::linalg::Factored;
use crate::taylor::{binomial, factorial, interior_gradient_energy, Poly2};

/// Largest recursion order accepted.
pub const MAX_ORDER: usize = 6;

/// Default guard on |r_0 + log|ε|/2π|.
pub const DEFAULT_GUARD: f64 = 0.05;

#[derive(Clone, Debug)]
pub struct DensityCoefficients {
    pub rho_o: Vec<Vec<f64>>,
    pub rho_i: Vec<Vec<f64>>,
    pub theta_o: Vec<Vec<f64>>,
    pub theta_i: Vec<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct LadderCoefficients {
    pub g: Vec<f64>,
    pub r: Vec<f64>,
    /// ν·∇u_{m,k} on ∂ω.
    pub du_m: Vec<Vec<f64>>,
    /// ν·∇v_{m,k} on ∂ω, which is also ṽ_k.
    pub v_tilde: Vec<Vec<f64>>,
    pub u_tilde: Vec<Vec<f64>>,
    pub g_tilde: Vec<Vec<f64>>,
    pub a_tilde: Vec<Vec<f64>>,
    /// λ̃_{(n,l)}, indexed [n][l] with l ≤ n + 1.
    pub lambda: Vec<Vec<Vec<f64>>>,
    pub xi: Vec<f64>,
}

/// Triangular coefficient array c_{(n,l)} with r_0.
#[derive(Clone, Debug)]
pub struct CapacitySeries {
    pub r0: f64,
    /// c[n][l], l ≤ n + 1.
    pub c: Vec<Vec<f64>>,
    pub n_max: usize,
    /// r_0 as produced by the ladder, kept as a consistency check.
    pub r0_ladder: f64,
    pub nodes: usize,
}

impl CapacitySeries {
    pub fn coeff(&self, n: usize, l: usize) -> f64 {
        self.c.get(n).and_then(|row| row.get(l)).copied().unwrap_or(0.0)
    }

    /// One `n l value` row per coefficient followed by `r0 value`.
    pub fn to_record(&self) -> String {
        let mut s = String::new();
        for (n, row) in self.c.iter().enumerate() {
            for (l, v) in row.iter().enumerate() {
                s.push_str(&format!("{n} {l} {v:.16e}\n"));
            }
        }
        s.push_str(&format!("r0 {:.16e}\n", self.r0));
        s
    }
}

/// Grids and factored operators shared by all recursion steps.
pub struct AsymptoticContext {
    pub outer: BoundaryGrid,
    pub inner: BoundaryGrid,
    w_i: DenseOperator,
    wstar_i: DenseOperator,
    v_i: DenseOperator,
    rho_o_lu: Factored,
    theta_o_lu: Factored,
    rho_i_lu: Factored,
    theta_i_lu: Factored,
    ext: ExteriorSolver,
}

/// Values indexed by total degree j and h ≤ j.
type Tri<T> = Vec<Vec<T>>;

fn tri<T: Clone>(k: usize, zero: T) -> Tri<T> {
    (0..=k).map(|j| vec![zero.clone(); j + 1]).collect()
}

fn monomial(t: Point, h: usize, j: usize) -> f64 {
    t.x.powi(h as i32) * t.y.powi(j as i32)
}

fn guard_order(k: usize) -> Result<()> {
    if k > MAX_ORDER {
        return Err(Error::Complexity(format!("order {k} exceeds the supported maximum {MAX_ORDER}")));
    }
    Ok(())
}

impl AsymptoticContext {
    pub fn new(outer: &ParamCurve, omega: &ParamCurve, n: usize) -> Result<Self> {
        check_pair(outer, omega)?;
        let og = BoundaryGrid::new(outer, n)?;
        let ig = BoundaryGrid::new(omega, n)?;
        let w_o = assemble_dlp_trace(&og);
        let wstar_o = assemble_dlp_adjoint(&og);
        let w_i = assemble_dlp_trace(&ig);
        let wstar_i = assemble_dlp_adjoint(&ig);
        let v_i = assemble_single_layer(&ig, &ig)?;
        let res = |e: Error| match e {
            Error::DegenerateContour(m) | Error::IllPosed(m) => Error::Resolution(m),
            other => other,
        };
        Ok(AsymptoticContext {
            rho_o_lu: plain_second_kind(&wstar_o, "outer adjoint system")?,
            theta_o_lu: plain_second_kind(&w_o, "outer double-layer system")?,
            rho_i_lu: bordered_inner_adjoint(&ig).map_err(res)?,
            theta_i_lu: bordered_inner_trace(&ig).map_err(res)?,
            ext: ExteriorSolver::new(&ig)?,
            outer: og,
            inner: ig,
            w_i,
            wstar_i,
            v_i,
        })
    }

    /// ∫_{∂ω} f s₁^h s₂^{j−h} dσ for all j ≤ k.
    fn inner_moments(&self, f: &[f64], k: usize) -> Tri<f64> {
        let mut m = tri(k, 0.0);
        for (j, row) in m.iter_mut().enumerate() {
            for (h, v) in row.iter_mut().enumerate() {
                *v = (0..self.inner.n)
                    .map(|q| f[q] * monomial(self.inner.points[q], h, j - h) * self.inner.ds[q])
                    .sum();
            }
        }
        m
    }

    /// ∫_{∂ω} f ν_ω s₁^h s₂^{j−h} dσ.
    fn inner_normal_moments(&self, f: &[f64], k: usize) -> Tri<Point> {
        let mut m = tri(k, Point::zeros());
        for (j, row) in m.iter_mut().enumerate() {
            for (h, v) in row.iter_mut().enumerate() {
                *v = (0..self.inner.n).fold(Point::zeros(), |acc, q| {
                    acc + self.inner.normals[q]
                        * (f[q] * monomial(self.inner.points[q], h, j - h) * self.inner.ds[q])
                });
            }
        }
        m
    }

    /// ∫_{∂Ω} f (∇∂₁^h∂₂^{j−h}S) dσ.
    fn outer_grad_s(&self, f: &[f64], k: usize) -> Tri<Point> {
        let mut m = tri(k, Point::zeros());
        for (j, row) in m.iter_mut().enumerate() {
            for (h, v) in row.iter_mut().enumerate() {
                *v = (0..self.outer.n).fold(Point::zeros(), |acc, q| {
                    acc + grad_deriv_s(h, j - h, self.outer.points[q]) * (f[q] * self.outer.ds[q])
                });
            }
        }
        m
    }

    /// ∫_{∂Ω} f ∂₁^h∂₂^{j−h}S dσ.
    fn outer_s(&self, f: &[f64], k: usize) -> Tri<f64> {
        let mut m = tri(k, 0.0);
        for (j, row) in m.iter_mut().enumerate() {
            for (h, v) in row.iter_mut().enumerate() {
                *v = (0..self.outer.n)
                    .map(|q| f[q] * deriv_s_unchecked(h, j - h, self.outer.points[q]) * self.outer.ds[q])
                    .sum();
            }
        }
        m
    }

    /// ∫_{∂Ω} f ν_Ω·∇∂₁^h∂₂^{j−h}S dσ.
    fn outer_normal_grad_s(&self, f: &[f64], k: usize) -> Tri<f64> {
        let mut m = tri(k, 0.0);
        for (j, row) in m.iter_mut().enumerate() {
            for (h, v) in row.iter_mut().enumerate() {
                *v = (0..self.outer.n)
                    .map(|q| {
                        f[q] * self.outer.normals[q].dot(&grad_deriv_s(h, j - h, self.outer.points[q]))
                            * self.outer.ds[q]
                    })
                    .sum();
            }
        }
        m
    }

    fn solve_bordered(lu: &Factored, rhs: Vec<f64>, integral: f64) -> Vec<f64> {
        let mut b = rhs;
        b.push(integral);
        let mut x = lu.solve(&b);
        x.pop();
        x
    }

    pub fn rho_coefficients(&self, k_max: usize) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        guard_order(k_max)?;
        let (ni, no) = (self.inner.n, self.outer.n);
        let mut rho_o: Vec<Vec<f64>> = Vec::new();
        let mut rho_i: Vec<Vec<f64>> = Vec::new();
        let mut mom_i: Vec<Tri<f64>> = Vec::new();
        let mut grad_o: Vec<Tri<Point>> = Vec::new();
        for k in 0..=k_max {
            let mut rhs = vec![0.0; ni];
            for j in 0..k {
                let pre = k as f64 * binomial(k - 1, j) * sign(j + 1);
                for h in 0..=j {
                    let g = grad_o[k - 1 - j][j][h];
                    let b = pre * binomial(j, h);
                    for (q, r) in rhs.iter_mut().enumerate() {
                        let t = self.inner.points[q];
                        *r += b * monomial(t, h, j - h) * self.inner.normals[q].dot(&g);
                    }
                }
            }
            let ri = Self::solve_bordered(&self.rho_i_lu, rhs, if k == 0 { 1.0 } else { 0.0 });
            mom_i.push(self.inner_moments(&ri, k_max));
            rho_i.push(ri);

            let mut rhs = vec![0.0; no];
            for j in 0..=k {
                let pre = binomial(k, j) * sign(j + 1);
                for h in 0..=j {
                    let m = mom_i[k - j][j][h];
                    if m == 0.0 {
                        continue;
                    }
                    let b = pre * binomial(j, h) * m;
                    for (q, r) in rhs.iter_mut().enumerate() {
                        let x = self.outer.points[q];
                        *r += b * self.outer.normals[q].dot(&grad_deriv_s(h, j - h, x));
                    }
                }
            }
            let ro = self.rho_o_lu.solve(&rhs);
            grad_o.push(self.outer_grad_s(&ro, k_max.saturating_sub(1)));
            rho_o.push(ro);
        }
        Ok((rho_o, rho_i))
    }

    pub fn theta_coefficients(
        &self,
        rho_i: &[Vec<f64>],
        u: &Poly2,
        k_max: usize,
    ) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
        guard_order(k_max)?;
        if rho_i.len() < k_max + 1 {
            return Err(Error::Data("ρ coefficients do not reach the requested order".into()));
        }
        let (ni, no) = (self.inner.n, self.outer.n);
        let du = |h: usize, j: usize| u.derivative_at_origin(h, j);
        let mom_i: Vec<Tri<f64>> = rho_i.iter().map(|r| self.inner_moments(r, k_max)).collect();
        let mut theta_o = vec![vec![0.0; no]];
        let mut theta_i = vec![vec![0.0; ni]];
        let mut nmom_i: Vec<Tri<Point>> = vec![tri(k_max, Point::zeros())];
        let mut pmom_o: Vec<Tri<f64>> = vec![tri(k_max, 0.0)];
        for k in 1..=k_max {
            let mut rhs = vec![0.0; no];
            for j in 0..k.saturating_sub(1) {
                let pre = k as f64 * binomial(k - 1, j) * sign(j + 1);
                for h in 0..=j {
                    let nm = nmom_i[k - 1 - j][j][h];
                    let b = pre * binomial(j, h);
                    for (q, r) in rhs.iter_mut().enumerate() {
                        *r += b * grad_deriv_s(h, j - h, self.outer.points[q]).dot(&nm);
                    }
                }
            }
            let to = self.theta_o_lu.solve(&rhs);
            pmom_o.push(self.outer_normal_grad_s(&to, k_max));
            theta_o.push(to);

            let mut rhs = vec![0.0; ni];
            for j in 0..k {
                let pre = binomial(k, j) * sign(j + 1);
                for h in 0..=j {
                    let b = pre * binomial(j, h) * pmom_o[k - j][j][h];
                    for (q, r) in rhs.iter_mut().enumerate() {
                        *r += b * monomial(self.inner.points[q], h, j - h);
                    }
                }
            }
            for h in 0..=k {
                let b = binomial(k, h) * du(h, k - h);
                if b == 0.0 {
                    continue;
                }
                for (q, r) in rhs.iter_mut().enumerate() {
                    *r += b * monomial(self.inner.points[q], h, k - h);
                }
            }
            let mut konst = 0.0;
            for l in 0..=k {
                for h in 0..=l {
                    konst += binomial(k, l) * binomial(l, h) * du(h, l - h) * mom_i[k - l][l][h];
                }
            }
            rhs.iter_mut().for_each(|r| *r -= konst);
            let ti = Self::solve_bordered(&self.theta_i_lu, rhs, 0.0);
            nmom_i.push(self.inner_normal_moments(&ti, k_max));
            theta_i.push(ti);
        }
        Ok((theta_o, theta_i))
    }

    pub fn densities(&self, u: &Poly2, k_max: usize) -> Result<DensityCoefficients> {
        let (rho_o, rho_i) = self.rho_coefficients(k_max)?;
        let (theta_o, theta_i) = self.theta_coefficients(&rho_i, u, k_max)?;
        Ok(DensityCoefficients { rho_o, rho_i, theta_o, theta_i })
    }

    /// Polynomial in t: (1/k!) Σ_j C(k,j)(−1)^j Σ_h C(j,h) t^h t^{j−h} coef[k−j][j][h], j ≤ j_max.
    fn ladder_poly(k: usize, j_max: usize, coef: &[Tri<f64>]) -> Poly2 {
        let mut p = Poly2::zero(j_max.max(1));
        let kf = factorial(k);
        let mut terms = Vec::new();
        for j in 0..=j_max {
            for h in 0..=j {
                let v = binomial(k, j) * sign(j) * binomial(j, h) * coef[k - j][j][h] / kf;
                terms.push((h, j - h, v));
            }
        }
        for (h, j, v) in terms {
            p = p.add(&Poly2::from_terms(&[(h, j, v)]).unwrap());
        }
        p
    }

    fn normal_poly_derivative(&self, p: &Poly2) -> Vec<f64> {
        (0..self.inner.n).map(|q| self.inner.normals[q].dot(&p.gradient(self.inner.points[q]))).collect()
    }

    pub fn ladder_coefficients(&self, d: &DensityCoefficients, u: &Poly2, k_max: usize) -> Result<LadderCoefficients> {
        guard_order(k_max)?;
        let ni = self.inner.n;
        let du = |h: usize, j: usize| u.derivative_at_origin(h, j);
        let mom_i: Vec<Tri<f64>> = d.rho_i.iter().map(|r| self.inner_moments(r, k_max)).collect();
        let q_o: Vec<Tri<f64>> = d.rho_o.iter().map(|r| self.outer_s(r, k_max)).collect();
        let p_o: Vec<Tri<f64>> = d.theta_o.iter().map(|t| self.outer_normal_grad_s(t, k_max)).collect();
        let perim = self.inner.length();
        let plain = self.inner_moments(&vec![1.0; ni], k_max);

        let mut g = Vec::new();
        let mut r = Vec::new();
        let mut du_m = Vec::new();
        let mut v_tilde = Vec::new();
        for k in 0..=k_max {
            let kf = factorial(k);
            let mut gk = 0.0;
            for l in 0..=k {
                for h in 0..=l {
                    gk += binomial(k, l) * binomial(l, h) * du(h, l - h) * mom_i[k - l][l][h];
                }
            }
            g.push(gk / kf);

            let mut rk = 0.0;
            for j in 0..=k {
                for h in 0..=j {
                    rk += binomial(k, j) * sign(j) * binomial(j, h) * plain[j][h] * q_o[k - j][j][h];
                }
            }
            rk += self.inner.integrate(&self.v_i.apply(&d.rho_i[k]));
            r.push(rk / (kf * perim));

            // u_{m,k}: polynomial part plus −w⁻[θ^i_k]/k!, whose normal derivative comes
            // from re-solving its exterior trace −θ/2 + Wθ.
            let mut dum = vec![0.0; ni];
            if k >= 1 {
                if k >= 2 {
                    let p = Self::ladder_poly(k, k - 1, &p_o);
                    dum = self.normal_poly_derivative(&p);
                }
                let th = &d.theta_i[k];
                let wt = self.w_i.apply(th);
                let trace: Vec<f64> = (0..ni).map(|q| -0.5 * th[q] + wt[q]).collect();
                let sol = self.ext.solve(&trace)?;
                let fl = self.ext.flux(&sol);
                for q in 0..ni {
                    dum[q] -= fl[q] / kf;
                }
            }
            du_m.push(dum);

            let p = Self::ladder_poly(k, k, &q_o);
            let mut dv = self.normal_poly_derivative(&p);
            let ri = &d.rho_i[k];
            let ws = self.wstar_i.apply(ri);
            for q in 0..ni {
                dv[q] += (0.5 * ri[q] + ws[q]) / kf;
            }
            v_tilde.push(dv);
        }

        let usharp: Vec<Vec<f64>> = (0..=k_max)
            .map(|k| {
                let hk = u.homogeneous_or_zero(k);
                self.inner.points.iter().map(|t| hk.eval(*t)).collect()
            })
            .collect();
        let conv = |a: &[Vec<f64>], b: &[Vec<f64>], k: usize| -> Vec<f64> {
            let mut out = vec![0.0; ni];
            for l in 0..=k {
                for q in 0..ni {
                    out[q] += a[l][q] * b[k - l][q];
                }
            }
            out
        };
        let u_tilde: Vec<Vec<f64>> = (0..=k_max).map(|k| conv(&du_m, &usharp, k)).collect();
        let gvec: Vec<Vec<f64>> = g.iter().map(|v| vec![*v; ni]).collect();
        let g_tilde: Vec<Vec<f64>> = (0..=k_max).map(|k| conv(&gvec, &usharp, k)).collect();
        let a_tilde: Vec<Vec<f64>> = (0..=k_max).map(|k| conv(&g_tilde, &v_tilde, k)).collect();

        // comp[k][p]: sum over compositions of k into p positive parts of Π r.
        let mut comp = vec![vec![0.0; k_max + 2]; k_max + 1];
        comp[0][0] = 1.0;
        for p in 1..=k_max + 1 {
            for k in 1..=k_max {
                comp[k][p] = (1..=k).map(|b| r[b] * comp[k - b][p - 1]).sum();
            }
        }
        let mut lambda = Vec::new();
        for n in 0..=k_max {
            let mut row = vec![u_tilde[n].clone(), a_tilde[n].clone()];
            for l in 2..=n + 1 {
                let mut v = vec![0.0; ni];
                for k in l - 1..=n {
                    let cw = comp[k][l - 1];
                    for q in 0..ni {
                        v[q] += a_tilde[n - k][q] * cw;
                    }
                }
                let s = sign(l - 1);
                row.push(v.into_iter().map(|x| s * x).collect());
            }
            lambda.push(row);
        }

        let grads: Vec<(Poly2, Poly2)> = (0..=k_max + 1)
            .map(|m| {
                let h = u.homogeneous_or_zero(m);
                (h.derivative(0), h.derivative(1))
            })
            .collect();
        let xi = (0..=k_max)
            .map(|n| {
                if n < 2 {
                    return 0.0;
                }
                let mut q = Poly2::zero(0);
                for l in 0..=n - 2 {
                    let (a0, a1) = &grads[l + 1];
                    let (b0, b1) = &grads[n - l - 1];
                    q = q.add(&a0.mul(b0)).add(&a1.mul(b1));
                }
                crate::taylor::poly_area_integral(&q, &self.inner.curve)
            })
            .collect();

        Ok(LadderCoefficients { g, r, du_m, v_tilde, u_tilde, g_tilde, a_tilde, lambda, xi })
    }
}

fn sign(p: usize) -> f64 {
    if p.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

pub fn rho_coefficients(
    outer: &ParamCurve,
    omega: &ParamCurve,
    n: usize,
    k_max: usize,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    guard_order(k_max)?;
    AsymptoticContext::new(outer, omega, n)?.rho_coefficients(k_max)
}

pub fn capacity_series(outer: &ParamCurve, omega: &ParamCurve, u: &Poly2, n_max: usize, n: usize) -> Result<CapacitySeries> {
    guard_order(n_max)?;
    let ctx = AsymptoticContext::new(outer, omega, n)?;
    let d = ctx.densities(u, n_max)?;
    let lad = ctx.ladder_coefficients(&d, u, n_max)?;
    let c = lad
        .lambda
        .iter()
        .enumerate()
        .map(|(k, row)| {
            row.iter()
                .enumerate()
                .map(|(l, lam)| -ctx.inner.integrate(lam) + if l == 0 { lad.xi[k] } else { 0.0 })
                .collect()
        })
        .collect();
    let r0v = r0(outer, omega, n)?;
    Ok(CapacitySeries { r0: r0v, c, n_max, r0_ladder: lad.r[0], nodes: n })
}

pub fn eval_capacity_series(series: &CapacitySeries, eps: f64, guard: f64) -> Result<f64> {
    let e = eps.abs();
    if !(e > 0.0 && e < 1.0) {
        return Err(Error::Validity(format!("|ε| must lie in (0, 1), got {eps}")));
    }
    let denom = series.r0 + e.ln() / (2.0 * PI);
    if denom.abs() <= guard {
        return Err(Error::Validity(format!(
            "log denominator r0 + log|ε|/2π = {denom:.3e} within guard {guard}"
        )));
    }
    let mut total = 0.0;
    for (n, row) in series.c.iter().enumerate() {
        let mut inner = 0.0;
        for (l, c) in row.iter().enumerate() {
            inner += c / denom.powi(l as i32);
        }
        total += eps.powi(n as i32) * inner;
    }
    Ok(total)
}

/// Exterior plus interior energy of the leading homogeneous part.
#[derive(Clone, Copy, Debug)]
pub struct LeadingEnergy {
    pub energy: f64,
    pub exterior: f64,
    pub interior: f64,
    /// lim_{t→∞} of the bounded exterior extension.
    pub limit: f64,
}

pub fn leading_energy(omega: &ParamCurve, leading: &Poly2, n: usize) -> Result<LeadingEnergy> {
    if !(leading.max_abs_coeff() > 0.0) {
        return Err(Error::ZeroFunction("leading part vanishes".into()));
    }
    let g = BoundaryGrid::new(omega, n)?;
    let ext = ExteriorSolver::new(&g)?;
    let data: Vec<f64> = g.points.iter().map(|p| leading.eval(*p)).collect();
    let sol = ext.solve(&data)?;
    let exterior = ext.energy(&data, &sol);
    let interior = interior_gradient_energy(leading, omega);
    Ok(LeadingEnergy { energy: exterior + interior, exterior, interior, limit: sol.c })
}

/// H^o_0(0) on Ω, exposed for cross-checks of r_0.
pub fn outer_h0_at_origin(outer: &ParamCurve, n: usize) -> Result<f64> {
    h_outer_at_origin(&BoundaryGrid::new(outer, n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_circle, make_ellipse};
    use crate::harmonic::equilibrium_density;

    #[test]
    fn concentric_series_is_one_term() {
        let s = capacity_series(&make_circle(2.0).unwrap(), &make_circle(1.0).unwrap(), &Poly2::constant(1.0), 3, 64)
            .unwrap();
        assert!((s.coeff(0, 1) + 1.0).abs() < 1e-12);
        for (n, row) in s.c.iter().enumerate() {
            for (l, c) in row.iter().enumerate() {
                if (n, l) != (0, 1) {
                    assert!(c.abs() < 1e-10, "c[{n}][{l}] = {c}");
                }
            }
        }
        assert!((s.r0 + 2f64.ln() / (2.0 * PI)).abs() < 1e-12);
        assert!((s.r0_ladder - s.r0).abs() < 1e-12);
        let v = eval_capacity_series(&s, 0.1, DEFAULT_GUARD).unwrap();
        assert!((v - 2.0 * PI / 20f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn one_term_arithmetic_and_guard() {
        let s = CapacitySeries { r0: 0.0, c: vec![vec![0.0, -1.0]], n_max: 0, r0_ladder: 0.0, nodes: 0 };
        let v = eval_capacity_series(&s, 0.1, DEFAULT_GUARD).unwrap();
        assert!((v - 2.0 * PI / 10f64.ln()).abs() < 1e-13);
        let z = CapacitySeries { r0: 0.0, c: vec![vec![0.0, 0.0]], n_max: 0, r0_ladder: 0.0, nodes: 0 };
        assert_eq!(eval_capacity_series(&z, 0.3, DEFAULT_GUARD).unwrap(), 0.0);
        let bad = CapacitySeries { r0: 2f64.ln() / (2.0 * PI), c: vec![vec![0.0, -1.0]], n_max: 0, r0_ladder: 0.0, nodes: 0 };
        assert!(matches!(eval_capacity_series(&bad, 0.5, DEFAULT_GUARD), Err(Error::Validity(_))));
        assert!(matches!(eval_capacity_series(&s, 1.5, DEFAULT_GUARD), Err(Error::Validity(_))));
    }

    #[test]
    fn rho_examples() {
        let outer = make_circle(2.0).unwrap();
        let inner = make_circle(1.0).unwrap();
        let ctx = AsymptoticContext::new(&outer, &inner, 64).unwrap();
        let (ro, ri) = ctx.rho_coefficients(2).unwrap();
        let eq = equilibrium_density(&ctx.inner).unwrap();
        for (a, b) in ri[0].iter().zip(&eq) {
            assert!((a - b).abs() < 1e-14);
        }
        let mean = ro[0].iter().sum::<f64>() / 64.0;
        let sd = (ro[0].iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 64.0).sqrt();
        assert!(sd < 1e-10);
        assert!(ctx.inner.integrate(&ri[1]).abs() < 1e-14);
    }

    #[test]
    fn theta_examples() {
        let outer = make_circle(3.0).unwrap();
        let inner = make_circle(1.0).unwrap();
        let ctx = AsymptoticContext::new(&outer, &inner, 64).unwrap();
        let (_, ri) = ctx.rho_coefficients(3).unwrap();
        let (_, ti) = ctx.theta_coefficients(&ri, &Poly2::constant(2.0), 3).unwrap();
        assert!(ti[1].iter().all(|v| v.abs() < 1e-13));
        let x1 = Poly2::from_terms(&[(1, 0, 1.0)]).unwrap();
        let (to, ti) = ctx.theta_coefficients(&ri, &x1, 3).unwrap();
        assert!(to[1].iter().all(|v| *v == 0.0));
        // pure first harmonic
        let amp = ctx.inner.inner(&ti[1], &ctx.inner.points.iter().map(|p| p.x).collect::<Vec<_>>()) / PI;
        for (q, t) in ctx.inner.t.iter().enumerate() {
            assert!((ti[1][q] - amp * t.cos()).abs() < 1e-10);
        }
        for th in &ti {
            assert!(ctx.inner.integrate(th).abs() < 1e-13);
        }
    }

    #[test]
    fn ladder_identities() {
        let outer = make_ellipse(2.0, 1.5, 0.2, Point::new(0.1, 0.0)).unwrap();
        let inner = make_ellipse(0.6, 0.4, 0.5, Point::zeros()).unwrap();
        let u = Poly2::from_terms(&[(0, 0, 0.7), (1, 0, 0.3), (0, 2, -0.2)]).unwrap();
        let ctx = AsymptoticContext::new(&outer, &inner, 128).unwrap();
        let d = ctx.densities(&u, 3).unwrap();
        let lad = ctx.ladder_coefficients(&d, &u, 3).unwrap();
        assert!((lad.g[0] - 0.7).abs() < 1e-13);
        assert!(lad.du_m[0].iter().all(|v| *v == 0.0));
        assert!(lad.xi[0] == 0.0 && lad.xi[1] == 0.0);
        assert!((lad.xi[2] - 0.09 * PI * 0.24).abs() < 1e-12);
        assert!(lad.lambda[0][0].iter().all(|v| *v == 0.0));
        assert!((-ctx.inner.integrate(&lad.lambda[0][1]) + 0.49).abs() < 1e-12);
        let r0d = r0(&outer, &inner, 128).unwrap();
        assert!((lad.r[0] - r0d).abs() < 1e-10);
    }

    #[test]
    fn leading_energy_examples() {
        let disk = make_circle(1.0).unwrap();
        let e = leading_energy(&disk, &Poly2::from_terms(&[(1, 0, 1.0)]).unwrap(), 64).unwrap();
        assert!((e.energy - 2.0 * PI).abs() < 1e-12);
        assert!((e.exterior - PI).abs() < 1e-12);
        let l = crate::taylor::HarmonicLeading { k: 2, beta: 1.3, phi: 0.2 }.to_poly();
        let e2 = leading_energy(&disk, &l, 64).unwrap();
        assert!((e2.energy - 4.0 * PI * 1.69).abs() < 1e-11);
        assert!(matches!(leading_energy(&disk, &Poly2::zero(2), 64), Err(Error::ZeroFunction(_))));
    }

    #[test]
    fn order_guard() {
        let c = make_circle(1.0).unwrap();
        let o = make_circle(2.0).unwrap();
        assert!(matches!(
            capacity_series(&o, &c, &Poly2::constant(1.0), 7, 32),
            Err(Error::Complexity(_))
        ));
    }
}
