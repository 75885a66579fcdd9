//! Cartesian sweep over hole centers, rotations and ε.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;

use holecap::asymptotic::{capacity_series, eval_capacity_series, leading_energy, CapacitySeries, DEFAULT_GUARD};
use holecap::eigen::classify_kbar;
use holecap::harmonic::r0;
use holecap::{ParamCurve, Point};

use crate::commands::{shifted_capacity, taylor_at};
use crate::output::{cell, svg_plot};
use crate::parse::{parse_curve, parse_eps_grid, parse_mode, parse_points, parse_u, USource};
use crate::{CliError, SweepArgs};

pub const CSV_HEADER: &str = "epsilon,theta,px,py,value_direct,value_series,value_leading,abs_gap,rel_gap,slope_local";

struct Group {
    p: Point,
    theta: f64,
    hole: ParamCurve,
    kbar: usize,
    /// u(p)² for k̄ = 0, E otherwise.
    coefficient: f64,
    /// lim of the bounded exterior extension, 0 for k̄ = 0.
    limit: f64,
    r0: f64,
    series: Option<CapacitySeries>,
}

impl Group {
    fn leading(&self, eps: f64) -> Option<f64> {
        let d = self.r0 + eps.ln() / (2.0 * PI);
        if d.abs() <= DEFAULT_GUARD {
            return None;
        }
        Some(if self.kbar == 0 {
            -self.coefficient / d
        } else {
            eps.powi(2 * self.kbar as i32) * (self.coefficient - self.limit * self.limit / d)
        })
    }
}

struct Row {
    eps: f64,
    direct: f64,
    series: Option<f64>,
    leading: Option<f64>,
}

fn thetas(count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![0.0],
        c => (0..c).map(|j| j as f64 / (c - 1) as f64 * PI / 2.0).collect(),
    }
}

pub(crate) fn run(a: &SweepArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let outer = parse_curve(&a.outer)?;
    let hole = parse_curve(&a.hole)?;
    let src = match &a.u {
        Some(u) => parse_u(u)?,
        None => USource::Mode(parse_mode(&a.mode)?),
    };
    let points = parse_points(&a.p)?;
    let eps = parse_eps_grid(&a.eps_grid)?;
    if eps.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
        return Err(CliError::Core(holecap::Error::Validity("sweep ε values must lie in (0, 1)".into())));
    }
    let th = thetas(a.theta_grid);
    if points.is_empty() || th.is_empty() {
        return Err(CliError::usage("sweep grid is empty".into()));
    }
    let degree = a.nmax.map_or(6, |m| m + 1);

    let specs: Vec<(Point, f64)> = points.iter().flat_map(|p| th.iter().map(move |t| (*p, *t))).collect();
    let groups: Vec<Result<Group, CliError>> = specs
        .par_iter()
        .map(|&(p, theta)| {
            let hole_t = hole.rotate(theta);
            let outer_p = outer.translate(-p);
            let u = taylor_at(&src, p, degree)?;
            let kbar = classify_kbar(&u)?;
            let (coefficient, limit) = if kbar == 0 {
                (u.coeff(0, 0).powi(2), 0.0)
            } else {
                let e = leading_energy(&hole_t, &u.homogeneous_part(kbar)?, a.n)?;
                (e.energy, e.limit)
            };
            let series = match a.nmax {
                Some(m) => Some(capacity_series(&outer_p, &hole_t, &u, m, a.n)?),
                None => None,
            };
            Ok(Group { p, theta, r0: r0(&outer_p, &hole_t, a.n)?, hole: hole_t, kbar, coefficient, limit, series })
        })
        .collect();
    let groups: Vec<Group> = groups.into_iter().collect::<Result<_, _>>()?;

    let jobs: Vec<(usize, f64)> = (0..groups.len()).flat_map(|g| eps.iter().map(move |e| (g, *e))).collect();
    let rows: Vec<Result<Row, CliError>> = jobs
        .par_iter()
        .map(|&(g, e)| {
            let gr = &groups[g];
            let direct = shifted_capacity(&outer, &gr.hole, &src, gr.p, e, a.n)?;
            let series = gr.series.as_ref().and_then(|s| eval_capacity_series(s, e, DEFAULT_GUARD).ok());
            Ok(Row { eps: e, direct, series, leading: gr.leading(e) })
        })
        .collect();
    let rows: Vec<Row> = rows.into_iter().collect::<Result<_, _>>()?;

    let mut csv = String::with_capacity(rows.len() * 200);
    csv.push_str(CSV_HEADER);
    csv.push('\n');
    for (g, gr) in groups.iter().enumerate() {
        let block = &rows[g * eps.len()..(g + 1) * eps.len()];
        for (i, r) in block.iter().enumerate() {
            let reference = r.series.or(r.leading);
            let abs_gap = reference.map(|v| (r.direct - v).abs());
            let rel_gap = abs_gap.map(|v| v / r.direct.abs());
            let slope = (i > 0).then(|| {
                let q = &block[i - 1];
                (r.direct / q.direct).ln() / (r.eps / q.eps).ln()
            });
            csv.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                cell(Some(r.eps)),
                cell(Some(gr.theta)),
                cell(Some(gr.p.x)),
                cell(Some(gr.p.y)),
                cell(Some(r.direct)),
                cell(r.series),
                cell(r.leading),
                cell(abs_gap),
                cell(rel_gap),
                cell(slope)
            ));
        }
    }
    match &a.out {
        Some(path) => std::fs::write(path, &csv)?,
        None => out.write_all(csv.as_bytes())?,
    }

    if let Some(path) = &a.svg {
        let series: Vec<(String, Vec<(f64, f64)>)> = groups
            .iter()
            .enumerate()
            .map(|(g, gr)| {
                let pts = rows[g * eps.len()..(g + 1) * eps.len()]
                    .iter()
                    .filter(|r| r.direct > 0.0)
                    .map(|r| (r.eps.ln(), r.direct.ln()))
                    .collect();
                (format!("p=({:.2},{:.2}) th={:.3}", gr.p.x, gr.p.y, gr.theta), pts)
            })
            .collect();
        std::fs::write(path, svg_plot("direct capacity", "log eps", "log value", &series))?;
    }
    if let Some(path) = &a.svg_theta {
        let (imin, emin) = eps.iter().enumerate().fold((0, f64::INFINITY), |acc, (i, e)| if *e < acc.1 { (i, *e) } else { acc });
        let series: Vec<(String, Vec<(f64, f64)>)> = points
            .iter()
            .enumerate()
            .map(|(pi, p)| {
                let pts = (0..th.len())
                    .map(|ti| {
                        let g = pi * th.len() + ti;
                        let gr = &groups[g];
                        let d = rows[g * eps.len() + imin].direct;
                        let mu = if gr.kbar == 0 { d * emin.ln().abs() } else { d / emin.powi(2 * gr.kbar as i32) };
                        (gr.theta, mu)
                    })
                    .collect();
                (format!("p=({:.2},{:.2})", p.x, p.y), pts)
            })
            .collect();
        std::fs::write(path, svg_plot("scaled capacity at smallest eps", "theta", "mu", &series))?;
    }
    Ok(())
}
