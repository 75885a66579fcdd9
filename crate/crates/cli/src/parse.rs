//! Text formats accepted on the command line: curves, u sources, ε grids,
//! point lists and the key/value config file.

use std::collections::BTreeMap;

use holecap::geometry::{make_circle, make_ellipse, make_trig, TrigSeries, DEFAULT_TRIG_MODES};
use holecap::spectra::{DiskMode, Parity};
use holecap::taylor::{parse_poly, Poly2};
use holecap::{ParamCurve, Point};

use crate::CliError;

fn num(key: &str, v: &str) -> Result<f64, CliError> {
    v.trim().parse::<f64>().map_err(|_| CliError::usage(format!("{key}: expected a number, got '{v}'")))
}

fn int(key: &str, v: &str) -> Result<usize, CliError> {
    v.trim().parse::<usize>().map_err(|_| CliError::usage(format!("{key}: expected an integer, got '{v}'")))
}

/// Splits `a=1 b=2` or `a=1,b=2` into a map; bare values are returned in order.
fn fields(text: &str) -> Result<(BTreeMap<String, String>, Vec<String>), CliError> {
    let mut kv = BTreeMap::new();
    let mut bare = Vec::new();
    for tok in text.split([',', ' ', '\t']).filter(|t| !t.is_empty()) {
        match tok.split_once('=') {
            Some((k, v)) => {
                if kv.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                    return Err(CliError::usage(format!("duplicate key '{k}'")));
                }
            }
            None => bare.push(tok.to_string()),
        }
    }
    Ok((kv, bare))
}

fn center(kv: &BTreeMap<String, String>) -> Result<Point, CliError> {
    let cx = kv.get("cx").map(|v| num("cx", v)).transpose()?.unwrap_or(0.0);
    let cy = kv.get("cy").map(|v| num("cy", v)).transpose()?.unwrap_or(0.0);
    Ok(Point::new(cx, cy))
}

fn reject_unknown(kv: &BTreeMap<String, String>, allowed: &[&str]) -> Result<(), CliError> {
    match kv.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(CliError::usage(format!("unknown curve key '{k}'"))),
        None => Ok(()),
    }
}

/// `circle:R[,cx,cy]`, `ellipse:a,b[,theta,cx,cy]`, or `kind=ellipse a=3 b=2 theta=0 cx=0 cy=0`,
/// `kind=circle r=1`, `kind=trig x0=0 y0=0; j xc xs yc ys; ...`.
pub fn parse_curve(text: &str) -> Result<ParamCurve, CliError> {
    let text = text.trim();
    let (head, rows) = match text.split_once([';', '\n']) {
        Some((h, r)) => (h, r),
        None => (text, ""),
    };
    let (kind, kv, bare) = if let Some((k, rest)) = head.split_once(':') {
        let (kv, bare) = fields(rest)?;
        (k.trim().to_string(), kv, bare)
    } else {
        let (mut kv, bare) = fields(head)?;
        let k = kv.remove("kind").ok_or_else(|| CliError::usage(format!("curve spec '{text}' has no kind")))?;
        (k, kv, bare)
    };
    let order: &[&str] = match kind.as_str() {
        "circle" => &["r", "cx", "cy"],
        "ellipse" => &["a", "b", "theta", "cx", "cy"],
        "trig" => &["x0", "y0", "modes"],
        _ => &[],
    };
    let mut kv = kv;
    if bare.len() > order.len() {
        return Err(CliError::usage(format!("curve spec '{text}' has too many values")));
    }
    for (key, v) in order.iter().zip(bare) {
        if kv.insert(key.to_string(), v).is_some() {
            return Err(CliError::usage(format!("'{key}' given twice in '{text}'")));
        }
    }
    let pick = |key: &str| -> Result<f64, CliError> {
        match kv.get(key) {
            Some(v) => num(key, v),
            None => Err(CliError::usage(format!("curve spec is missing '{key}'"))),
        }
    };
    let curve = match kind.as_str() {
        "circle" => {
            reject_unknown(&kv, &["r", "cx", "cy"])?;
            make_circle(pick("r")?)?.translate(center(&kv)?)
        }
        "ellipse" => {
            reject_unknown(&kv, &["a", "b", "theta", "cx", "cy"])?;
            let theta = kv.get("theta").map(|v| num("theta", v)).transpose()?.unwrap_or(0.0);
            make_ellipse(pick("a")?, pick("b")?, theta, center(&kv)?)?
        }
        "trig" => {
            reject_unknown(&kv, &["x0", "y0", "modes"])?;
            let mut ts = TrigSeries {
                x0: kv.get("x0").map(|v| num("x0", v)).transpose()?.unwrap_or(0.0),
                y0: kv.get("y0").map(|v| num("y0", v)).transpose()?.unwrap_or(0.0),
                xc: vec![],
                xs: vec![],
                yc: vec![],
                ys: vec![],
            };
            for row in rows.split([';', '\n']).map(str::trim).filter(|r| !r.is_empty()) {
                let v: Vec<&str> = row.split_whitespace().collect();
                if v.len() != 5 {
                    return Err(CliError::usage(format!("trig row '{row}' needs 'j xc xs yc ys'")));
                }
                let j = int("j", v[0])?;
                if j == 0 {
                    return Err(CliError::usage("trig mode index starts at 1".into()));
                }
                for list in [&mut ts.xc, &mut ts.xs, &mut ts.yc, &mut ts.ys] {
                    if list.len() < j {
                        list.resize(j, 0.0);
                    }
                }
                ts.xc[j - 1] = num("xc", v[1])?;
                ts.xs[j - 1] = num("xs", v[2])?;
                ts.yc[j - 1] = num("yc", v[3])?;
                ts.ys[j - 1] = num("ys", v[4])?;
            }
            let modes = kv.get("modes").map(|v| int("modes", v)).transpose()?.unwrap_or(DEFAULT_TRIG_MODES);
            make_trig(ts, modes)?
        }
        other => return Err(CliError::usage(format!("unknown curve kind '{other}'"))),
    };
    Ok(curve)
}

/// Where u comes from.
#[derive(Clone, Debug)]
pub enum USource {
    Poly(Poly2),
    Mode(DiskMode),
}

/// `disk:m=1,n=1[,R=1][,parity=sin]` or `m=1,n=1` as given to `--mode`.
pub fn parse_mode(text: &str) -> Result<DiskMode, CliError> {
    let body = text.trim().strip_prefix("disk:").unwrap_or(text.trim());
    let (kv, bare) = fields(body)?;
    if let Some(b) = bare.first() {
        return Err(CliError::usage(format!("mode spec: unexpected '{b}'")));
    }
    reject_unknown(&kv, &["m", "n", "R", "parity"]).map_err(|_| CliError::usage(format!("bad mode spec '{text}'")))?;
    let m = kv.get("m").map(|v| int("m", v)).transpose()?.unwrap_or(0);
    let n = kv.get("n").map(|v| int("n", v)).transpose()?.unwrap_or(1);
    let r = kv.get("R").map(|v| num("R", v)).transpose()?.unwrap_or(1.0);
    let parity = match kv.get("parity").map(String::as_str) {
        None | Some("cos") => Parity::Cos,
        Some("sin") => Parity::Sin,
        Some(p) => return Err(CliError::usage(format!("parity must be cos or sin, got '{p}'"))),
    };
    Ok(DiskMode::new(m, n, r, parity)?)
}

/// `poly:"h j c; ..."` or `disk:m=..,n=..`.
pub fn parse_u(text: &str) -> Result<USource, CliError> {
    let t = text.trim();
    if let Some(rest) = t.strip_prefix("poly:") {
        let rest = rest.trim().trim_matches('"');
        return parse_poly(rest).map(USource::Poly).map_err(|e| CliError::usage(format!("u polynomial: {e}")));
    }
    if t.starts_with("disk:") {
        return Ok(USource::Mode(parse_mode(t)?));
    }
    Err(CliError::usage(format!("u spec '{text}' must start with poly: or disk:")))
}

/// `1.5^-k,k=4..14` or a comma list of numbers.
pub fn parse_eps_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let t = text.trim();
    if let Some((base, range)) = t.split_once("^-k") {
        let b = num("eps base", base)?;
        let range = range.trim_start_matches(',').trim();
        let r = range
            .strip_prefix("k=")
            .ok_or_else(|| CliError::usage(format!("eps grid '{t}' needs k=lo..hi")))?;
        let (lo, hi) =
            r.split_once("..").ok_or_else(|| CliError::usage(format!("eps grid '{t}' needs k=lo..hi")))?;
        let (lo, hi) = (int("k", lo)?, int("k", hi)?);
        if lo > hi || !(b > 1.0) {
            return Err(CliError::usage(format!("eps grid '{t}' is empty or has base <= 1")));
        }
        return Ok((lo..=hi).map(|k| b.powi(-(k as i32))).collect());
    }
    let v = t.split(',').filter(|s| !s.trim().is_empty()).map(|s| num("eps", s)).collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err(CliError::usage("empty eps list".into()));
    }
    Ok(v)
}

/// `x,y;x,y`.
pub fn parse_points(text: &str) -> Result<Vec<Point>, CliError> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            let (x, y) = s.split_once(',').ok_or_else(|| CliError::usage(format!("point '{s}' needs x,y")))?;
            Ok(Point::new(num("x", x)?, num("y", y)?))
        })
        .collect()
}

/// `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("config line {}: expected key = value", i + 1)))?;
        out.push((k.trim().to_string(), v.trim().trim_matches('"').to_string()));
    }
    Ok(out)
}

/// Appends config entries as flags unless the flag is already on the command line.
pub fn merge_config(argv: &[String], config: &[(String, String)]) -> Vec<String> {
    let mut out = argv.to_vec();
    for (k, v) in config {
        let flag = format!("--{k}");
        let present = argv.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if !present {
            out.push(flag);
            out.push(v.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curves() {
        let e = parse_curve("ellipse:3,2").unwrap();
        assert!((e.perimeter() - parse_curve("kind=ellipse a=3 b=2 theta=0 cx=0 cy=0").unwrap().perimeter()).abs() < 1e-14);
        let c = parse_curve("circle:2,cx=0.5").unwrap();
        assert!((c.centroid() - Point::new(0.5, 0.0)).norm() < 1e-12);
        let t = parse_curve("kind=trig x0=0 y0=0; 1 1 0 0 1; 3 0.05 0 0 0").unwrap();
        assert!(t.signed_area() > 0.0);
        assert!(parse_curve("square:1").is_err());
        assert!(parse_curve("ellipse:3").is_err());
        assert!(parse_curve("ellipse:3,2,phi=1").is_err());
        assert!(matches!(parse_curve("ellipse:2,3"), Err(CliError::Core(_))));
        let r = parse_curve("ellipse:3,2,0.4,1,-1").unwrap();
        match r.kind() {
            holecap::geometry::CurveKind::Ellipse { theta, center, .. } => {
                assert_eq!(*theta, 0.4);
                assert_eq!(*center, Point::new(1.0, -1.0));
            }
            _ => panic!("expected an ellipse"),
        }
        assert!(parse_curve("circle:1,0,0,7").is_err());
        assert!(parse_curve("ellipse:3,2,0.4,theta=0.1").is_err());
    }

    #[test]
    fn u_sources_and_grids() {
        match parse_u("poly:\"1 0 1\"").unwrap() {
            USource::Poly(p) => assert_eq!(p.coeff(1, 0), 1.0),
            _ => panic!(),
        }
        match parse_u("disk:m=2,n=1,parity=sin").unwrap() {
            USource::Mode(m) => assert!(m.m == 2 && m.parity == Parity::Sin),
            _ => panic!(),
        }
        assert!(parse_u("x^2").is_err());
        let g = parse_eps_grid("1.5^-k,k=4..14").unwrap();
        assert_eq!(g.len(), 11);
        assert!((g[0] - 1.5f64.powi(-4)).abs() < 1e-16);
        assert_eq!(parse_eps_grid("0.1, 0.05").unwrap(), vec![0.1, 0.05]);
        assert_eq!(parse_points("0,0;0.1,-0.2").unwrap()[1], Point::new(0.1, -0.2));
    }

    #[test]
    fn config_precedence() {
        let cfg = parse_config("# defaults\nn = 64\neps = 0.2\n").unwrap();
        let argv: Vec<String> = ["holecap", "cap-direct", "--n", "128"].iter().map(|s| s.to_string()).collect();
        let merged = merge_config(&argv, &cfg);
        assert_eq!(merged[2..], ["--n", "128", "--eps", "0.2"].map(String::from));
        assert!(parse_config("oops").is_err());
    }
}
