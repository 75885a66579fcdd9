use std::io::Write;

use holecap::asymptotic::{capacity_series, eval_capacity_series, leading_energy, DEFAULT_GUARD};
use holecap::capacity::{condenser_capacity, u_capacity};
use holecap::eigen::{classify_kbar, optimal_location_max, optimal_location_min, prediction, simplicity_warning};
use holecap::elliptic::{angular_energy, exterior_energy_closed_form, hole_fourier_coefficients, xi_bar};
use holecap::spectra::{annulus_eigenvalues, disk_eigenfunction_taylor};
use holecap::taylor::{beta_phi, Field, Poly2, Shifted};
use holecap::{ParamCurve, Point};

use crate::output::{array, fnum, Json};
use crate::parse::{parse_curve, parse_eps_grid, parse_mode, parse_points, parse_u, USource};
use crate::{CliError, Command};

/// Taylor polynomial of u about p, in coordinates centered at p.
pub(crate) fn taylor_at(u: &USource, p: Point, degree: usize) -> Result<Poly2, CliError> {
    Ok(match u {
        USource::Poly(q) => q.shift(p),
        USource::Mode(m) => {
            let d = if p.norm() > 0.0 { degree.min(4) } else { degree.min(8) };
            disk_eigenfunction_taylor(m, p, d)?
        }
    })
}

/// u as a field in coordinates centered at p.
pub(crate) fn shifted_capacity(
    outer: &ParamCurve,
    hole: &ParamCurve,
    u: &USource,
    p: Point,
    eps: f64,
    n: usize,
) -> Result<f64, CliError> {
    let outer_p = outer.translate(-p);
    Ok(match u {
        USource::Poly(q) => u_capacity(&outer_p, hole, &q.shift(p), eps, n)?,
        USource::Mode(m) => {
            let f: &dyn Field = m;
            u_capacity(&outer_p, hole, &Shifted { inner: f, origin: p }, eps, n)?
        }
    })
}

fn single_point(text: &str) -> Result<Point, CliError> {
    let v = parse_points(text)?;
    if v.len() != 1 {
        return Err(CliError::usage(format!("expected one point, got '{text}'")));
    }
    Ok(v[0])
}

fn line(out: &mut dyn Write, j: Json) -> Result<(), CliError> {
    writeln!(out, "{}", j.render())?;
    Ok(())
}

pub(crate) fn dispatch(cmd: &Command, out: &mut dyn Write) -> Result<(), CliError> {
    match cmd {
        Command::CapDirect(a) => {
            let outer = parse_curve(&a.outer)?;
            let hole = parse_curve(&a.hole)?;
            let (kind, value) = match &a.u {
                None => ("condenser", condenser_capacity(&outer, &hole, a.eps, a.n)?),
                Some(u) => ("u-capacity", shifted_capacity(&outer, &hole, &parse_u(u)?, Point::zeros(), a.eps, a.n)?),
            };
            line(out, Json::new().str("command", "cap-direct").str("kind", kind).num("eps", a.eps).int("n", a.n).num("value", value))
        }
        Command::CapSeries(a) => {
            let outer = parse_curve(&a.outer)?;
            let hole = parse_curve(&a.hole)?;
            let u = taylor_at(&parse_u(&a.u)?, Point::zeros(), a.nmax + 1)?;
            let s = capacity_series(&outer, &hole, &u, a.nmax, a.n)?;
            let coefs = s.c.iter().enumerate().flat_map(|(n, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(l, c)| Json::new().int("n", n).int("l", l).num("c", *c).render())
            });
            let mut values = Vec::new();
            if let Some(e) = &a.eps {
                for eps in parse_eps_grid(e)? {
                    values.push(Json::new().num("eps", eps).num("value", eval_capacity_series(&s, eps, DEFAULT_GUARD)?).render());
                }
            }
            line(
                out,
                Json::new()
                    .str("command", "cap-series")
                    .int("n_max", s.n_max)
                    .int("nodes", s.nodes)
                    .num("r0", s.r0)
                    .raw("coefficients", array(coefs))
                    .raw("values", array(values)),
            )
        }
        Command::LeadingEnergy(a) => {
            let hole = parse_curve(&a.hole)?;
            let p = single_point(&a.p)?;
            let u = taylor_at(&parse_u(&a.u)?, p, 6)?;
            let k = classify_kbar(&u)?;
            let lead = u.homogeneous_part(k)?;
            let mut j = Json::new().str("command", "leading-energy").int("kbar", k);
            if k == 0 {
                j = j.num("u0", u.coeff(0, 0));
            } else {
                let (beta, phi) = match beta_phi(&lead, k) {
                    Ok(h) => (Some(h.beta), Some(h.phi)),
                    Err(_) => (None, None),
                };
                let e = leading_energy(&hole, &lead, a.n)?;
                j = j
                    .opt("beta", beta)
                    .opt("phi", phi)
                    .num("energy", e.energy)
                    .num("exterior", e.exterior)
                    .num("interior", e.interior)
                    .num("limit", e.limit);
            }
            line(out, j)
        }
        Command::EllipticEnergy(a) => {
            let phi = a.phi + a.theta;
            if !(a.b > 0.0 && a.a >= a.b) {
                return Err(holecap::Error::Domain(format!("need a >= b > 0, got a={} b={}", a.a, a.b)).into());
            }
            if a.k == 0 {
                return Err(CliError::usage("k must be at least 1".into()));
            }
            let energy = angular_energy(a.k, a.beta, phi, a.a, a.b);
            let (xi, ext, four) = if a.a > a.b {
                (
                    Some(xi_bar(a.a, a.b)?),
                    Some(exterior_energy_closed_form(a.k, a.beta, phi, a.a, a.b)?),
                    Some(hole_fourier_coefficients(a.k, a.beta, phi, a.a, a.b)?.exterior_energy),
                )
            } else {
                (None, None, None)
            };
            line(
                out,
                Json::new()
                    .str("command", "elliptic-energy")
                    .int("k", a.k)
                    .num("beta", a.beta)
                    .num("phi", phi)
                    .num("energy", energy)
                    .opt("xi_bar", xi)
                    .opt("exterior_closed_form", ext)
                    .opt("exterior_fourier", four),
            )
        }
        Command::Predict(a) => {
            let src = parse_u(&a.u)?;
            let hole = parse_curve(&a.hole)?;
            let p = single_point(&a.p)?;
            let (lambda, warning) = match (&src, a.lambda) {
                (_, Some(l)) => (l, None),
                (USource::Mode(m), None) => {
                    let w = (!m.is_simple()).then(|| {
                        simplicity_warning(m.lambda, &[m.lambda, m.lambda], 1e-12).unwrap_or_default()
                    });
                    (m.lambda, w)
                }
                (USource::Poly(_), None) => return Err(CliError::usage("--lambda is required with a polynomial u".into())),
            };
            let u = taylor_at(&src, p, 6)?;
            let pr = prediction(lambda, &u, p, &hole, a.n)?;
            let mut rows = Vec::new();
            for eps in parse_eps_grid(&a.eps)? {
                rows.push(
                    Json::new().num("eps", eps).num("shift", pr.shift(eps)?).num("eigenvalue", pr.eigenvalue(eps)?).render(),
                );
            }
            let mut j = Json::new()
                .str("command", "predict")
                .num("lambda", lambda)
                .raw("p", array([fnum(p.x), fnum(p.y)]))
                .int("kbar", pr.kbar)
                .str("regime", &pr.regime.label())
                .num("coefficient", pr.coefficient)
                .str("contract", "asymptotic only: remainder o(shift) as eps -> 0")
                .raw("shifts", array(rows));
            if let Some(w) = warning {
                j = j.str("warning", &w);
            }
            line(out, j)
        }
        Command::AnnulusCheck(a) => annulus_check(a, out),
        Command::Sweep(a) => crate::sweep::run(a, out),
        Command::OptimalHole(a) => {
            let mode = parse_mode(&a.mode)?;
            let outer = match &a.outer {
                Some(s) => parse_curve(s)?,
                None => holecap::geometry::make_circle(mode.radius)?,
            };
            let hole = parse_curve(&a.hole)?;
            let f = |x: Point| mode.value(x);
            let mx = optimal_location_max(&f, &outer, a.res, a.margin)?;
            let mn = optimal_location_min(&f, &outer, &hole, a.res, a.margin, a.n)?;
            let pts = |v: &[Point]| array(v.iter().map(|p| array([fnum(p.x), fnum(p.y)])));
            let cands = mn.candidates.iter().take(10).map(|c| {
                Json::new().raw("p", array([fnum(c.point.x), fnum(c.point.y)])).int("kbar", c.kbar).num("energy", c.energy).render()
            });
            let mut jmin = Json::new().int("max_kbar", mn.max_kbar).int("count", mn.candidates.len()).raw("candidates", array(cands));
            jmin = match &mn.advisory {
                Some(s) => jmin.str("advisory", s),
                None => jmin.raw("advisory", "null".into()),
            };
            line(
                out,
                Json::new()
                    .str("command", "optimal-hole")
                    .obj(
                        "max",
                        Json::new()
                            .raw("points", pts(&mx.points))
                            .num("value", mx.value)
                            .flag("unique", mx.unique)
                            .flag("degenerate", mx.degenerate),
                    )
                    .obj("min", jmin),
            )
        }
    }
}

/// Least-squares slope of log y against log x.
pub(crate) fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        xs.iter().zip(ys).filter(|(x, y)| **x > 0.0 && **y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn annulus_check(a: &crate::AnnulusCheckArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let mode = parse_mode(&a.mode)?;
    if mode.radius != 1.0 {
        return Err(CliError::usage("annulus-check uses the unit disk (R=1)".into()));
    }
    let hole = holecap::geometry::make_circle(1.0)?;
    let u = disk_eigenfunction_taylor(&mode, Point::zeros(), 6)?;
    let pr = prediction(mode.lambda, &u, Point::zeros(), &hole, a.n)?;
    let eps = parse_eps_grid(&a.eps)?;
    let mut rows = Vec::new();
    let mut shifts = Vec::new();
    for &e in &eps {
        let exact = annulus_eigenvalues(e, mode.m, mode.n)?[mode.n - 1];
        let se = exact - mode.lambda;
        let sp = pr.shift(e)?;
        shifts.push(se);
        rows.push(
            Json::new()
                .num("eps", e)
                .num("exact", exact)
                .num("predicted", mode.lambda + sp)
                .num("shift_exact", se)
                .num("shift_predicted", sp)
                .num("rel_error", (se - sp).abs() / se.abs())
                .render(),
        );
    }
    let slope = loglog_slope(&eps, &shifts);
    line(
        out,
        Json::new()
            .str("command", "annulus-check")
            .int("m", mode.m)
            .int("n", mode.n)
            .num("lambda_disk", mode.lambda)
            .int("kbar", pr.kbar)
            .str("regime", &pr.regime.label())
            .num("coefficient", pr.coefficient)
            .raw("rows", array(rows))
            .opt("slope", slope),
    )
}
