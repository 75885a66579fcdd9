//! Fixed-format JSON records, CSV cells and minimal SVG line plots.

/// 17 significant digits; `null` for non-finite values.
pub fn fnum(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        "null".to_string()
    }
}

/// JSON object with keys kept in insertion order.
#[derive(Default)]
pub struct Json {
    items: Vec<(String, String)>,
}

impl Json {
    pub fn new() -> Self {
        Json::default()
    }

    pub fn num(mut self, key: &str, v: f64) -> Self {
        self.items.push((key.to_string(), fnum(v)));
        self
    }

    pub fn opt(self, key: &str, v: Option<f64>) -> Self {
        match v {
            Some(x) => self.num(key, x),
            None => self.raw(key, "null".to_string()),
        }
    }

    pub fn int(mut self, key: &str, v: usize) -> Self {
        self.items.push((key.to_string(), v.to_string()));
        self
    }

    pub fn flag(mut self, key: &str, v: bool) -> Self {
        self.items.push((key.to_string(), v.to_string()));
        self
    }

    pub fn str(mut self, key: &str, v: &str) -> Self {
        self.items.push((key.to_string(), serde_json::to_string(v).expect("string serializes")));
        self
    }

    pub fn raw(mut self, key: &str, json: String) -> Self {
        self.items.push((key.to_string(), json));
        self
    }

    pub fn obj(self, key: &str, o: Json) -> Self {
        let s = o.render();
        self.raw(key, s)
    }

    pub fn render(&self) -> String {
        let body: Vec<String> = self
            .items
            .iter()
            .map(|(k, v)| format!("{}:{}", serde_json::to_string(k).expect("key serializes"), v))
            .collect();
        format!("{{{}}}", body.join(","))
    }
}

pub fn array(items: impl IntoIterator<Item = String>) -> String {
    format!("[{}]", items.into_iter().collect::<Vec<_>>().join(","))
}

pub fn cell(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => fnum(x),
        _ => String::new(),
    }
}

const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// One polyline per series on shared axes.
pub fn svg_plot(title: &str, xlabel: &str, ylabel: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let (w, h, pad) = (640.0, 420.0, 50.0);
    let pts = series.iter().flat_map(|(_, p)| p.iter()).filter(|(x, y)| x.is_finite() && y.is_finite());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (x, y) in pts {
        x0 = x0.min(*x);
        x1 = x1.max(*x);
        y0 = y0.min(*y);
        y1 = y1.max(*y);
    }
    if !(x1 > x0) {
        x1 = x0 + 1.0;
    }
    if !(y1 > y0) {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n\
         <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n\
         <text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n\
         <line x1=\"{pad}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n\
         <line x1=\"{pad}\" y1=\"{pad}\" x2=\"{pad}\" y2=\"{}\" stroke=\"black\"/>\n\
         <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"12\">{} [{:.3}, {:.3}]</text>\n\
         <text x=\"12\" y=\"{}\" font-size=\"12\" transform=\"rotate(-90 12 {})\">{} [{:.3}, {:.3}]</text>\n",
        w / 2.0,
        title,
        h - pad,
        w - pad,
        h - pad,
        h - pad,
        w / 2.0,
        h - 12.0,
        xlabel,
        x0,
        x1,
        h / 2.0,
        h / 2.0,
        ylabel,
        y0,
        y1
    );
    for (i, (label, p)) in series.iter().enumerate() {
        let coords: Vec<String> = p
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(x, y)| format!("{:.3},{:.3}", sx(*x), sy(*y)))
            .collect();
        let c = COLORS[i % COLORS.len()];
        s.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{c}\" stroke-width=\"1.5\" points=\"{}\"/>\n\
             <text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{c}\">{}</text>\n",
            coords.join(" "),
            w - pad - 120.0,
            pad + 14.0 * i as f64,
            label
        ));
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_layout() {
        let j = Json::new().str("command", "x\"y").num("v", 0.1).int("n", 3).opt("s", None);
        assert_eq!(j.render(), "{\"command\":\"x\\\"y\",\"v\":1.0000000000000001e-1,\"n\":3,\"s\":null}");
        assert_eq!(cell(Some(f64::NAN)), "");
    }

    #[test]
    fn svg_has_polylines() {
        let s = svg_plot("t", "x", "y", &[("a".into(), vec![(0.0, 1.0), (1.0, 2.0)])]);
        assert!(s.starts_with("<svg") && s.contains("<polyline"));
    }
}
