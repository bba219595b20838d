//! Minimal deterministic SVG scatter plots.
//!
//! Panels sit side by side. Each panel maps the bounds of its point layers,
//! widened by 5% on every side, onto a fixed pixel box. An optional
//! reference curve is sampled across the panel and clipped to it.

use std::fmt::Write;

pub const PANEL_WIDTH: f64 = 480.0;
pub const PANEL_HEIGHT: f64 = 420.0;
const PAD: f64 = 48.0;
const MARGIN: f64 = 0.05;
const CURVE_SAMPLES: usize = 400;

/// Colors cycled through for successive point layers.
pub const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];
pub const MUTED: &str = "#bbbbbb";

pub struct Layer {
    pub label: String,
    pub color: String,
    pub radius: f64,
    pub points: Vec<(f64, f64)>,
}

/// Named closed form drawn as a curve.
pub type Reference<'a> = (&'a str, &'a dyn Fn(f64) -> Option<f64>);

pub struct Panel<'a> {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub layers: Vec<Layer>,
    pub reference: Option<Reference<'a>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Bounds {
    x: (f64, f64),
    y: (f64, f64),
}

fn widen((lo, hi): (f64, f64)) -> (f64, f64) {
    let (lo, hi) = if hi - lo > 0.0 {
        (lo, hi)
    } else {
        let half = 0.5 * lo.abs().max(1.0);
        (lo - half, hi + half)
    };
    let m = MARGIN * (hi - lo);
    (lo - m, hi + m)
}

fn bounds(layers: &[Layer]) -> Bounds {
    let pts = layers
        .iter()
        .flat_map(|l| &l.points)
        .filter(|(x, y)| x.is_finite() && y.is_finite());
    let mut b: Option<Bounds> = None;
    for &(x, y) in pts {
        b = Some(match b {
            None => Bounds {
                x: (x, x),
                y: (y, y),
            },
            Some(b) => Bounds {
                x: (b.x.0.min(x), b.x.1.max(x)),
                y: (b.y.0.min(y), b.y.1.max(y)),
            },
        });
    }
    let b = b.unwrap_or(Bounds {
        x: (-1.0, 1.0),
        y: (-1.0, 1.0),
    });
    Bounds {
        x: widen(b.x),
        y: widen(b.y),
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn num(v: f64) -> String {
    format!("{v:.2}")
}

fn label(v: f64) -> String {
    format!("{v:.3}")
}

struct Frame {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    b: Bounds,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        self.left + (x - self.b.x.0) / (self.b.x.1 - self.b.x.0) * self.width
    }

    fn py(&self, y: f64) -> f64 {
        self.top + (self.b.y.1 - y) / (self.b.y.1 - self.b.y.0) * self.height
    }
}

fn panel(out: &mut String, index: usize, p: &Panel) {
    let f = Frame {
        left: index as f64 * PANEL_WIDTH + PAD,
        top: PAD,
        width: PANEL_WIDTH - 1.5 * PAD,
        height: PANEL_HEIGHT - 2.0 * PAD,
        b: bounds(&p.layers),
    };
    let (x0, x1, y0, y1) = (f.left, f.left + f.width, f.top, f.top + f.height);
    let _ = writeln!(
        out,
        r#"<clipPath id="clip{index}"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath>"#,
        num(x0),
        num(y0),
        num(f.width),
        num(f.height)
    );
    let _ = writeln!(
        out,
        r##"<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#444"/>"##,
        num(x0),
        num(y0),
        num(f.width),
        num(f.height)
    );
    if f.b.x.0 < 0.0 && f.b.x.1 > 0.0 {
        let x = num(f.px(0.0));
        let _ = writeln!(
            out,
            r##"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="#ddd"/>"##,
            num(y0),
            num(y1)
        );
    }
    if f.b.y.0 < 0.0 && f.b.y.1 > 0.0 {
        let y = num(f.py(0.0));
        let _ = writeln!(
            out,
            r##"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="#ddd"/>"##,
            num(x0),
            num(x1)
        );
    }
    let text = |out: &mut String, x: f64, y: f64, anchor: &str, s: &str| {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="{anchor}" font-size="11">{}</text>"#,
            num(x),
            num(y),
            escape(s)
        );
    };
    text(out, (x0 + x1) / 2.0, y0 - 18.0, "middle", &p.title);
    text(out, (x0 + x1) / 2.0, y1 + 32.0, "middle", &p.x_label);
    text(out, x0, y1 + 14.0, "start", &label(f.b.x.0));
    text(out, x1, y1 + 14.0, "end", &label(f.b.x.1));
    text(out, x0 - 4.0, y1, "end", &label(f.b.y.0));
    text(out, x0 - 4.0, y0 + 8.0, "end", &label(f.b.y.1));
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="11" transform="rotate(-90 {} {})">{}</text>"#,
        num(x0 - 30.0),
        num((y0 + y1) / 2.0),
        num(x0 - 30.0),
        num((y0 + y1) / 2.0),
        escape(&p.y_label)
    );

    let _ = writeln!(out, r#"<g clip-path="url(#clip{index})">"#);
    if let Some((_, g)) = &p.reference {
        for segment in sample_curve(*g, f.b.x) {
            let pts: Vec<String> = segment
                .iter()
                .map(|&(x, y)| format!("{},{}", num(f.px(x)), num(f.py(y))))
                .collect();
            let _ = writeln!(
                out,
                r##"<polyline points="{}" fill="none" stroke="#000" stroke-width="1"/>"##,
                pts.join(" ")
            );
        }
    }
    for layer in &p.layers {
        for &(x, y) in layer
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
        {
            let _ = writeln!(
                out,
                r#"<circle cx="{}" cy="{}" r="{}" fill="{}"/>"#,
                num(f.px(x)),
                num(f.py(y)),
                layer.radius,
                layer.color
            );
        }
    }
    let _ = writeln!(out, "</g>");

    let mut legend: Vec<(&str, &str)> = p
        .layers
        .iter()
        .map(|l| (l.label.as_str(), l.color.as_str()))
        .collect();
    if let Some((name, _)) = &p.reference {
        legend.push((name, "#000"));
    }
    for (i, (name, color)) in legend.iter().enumerate() {
        let y = y0 + 12.0 + 14.0 * i as f64;
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="3" fill="{color}"/>"#,
            num(x1 - 8.0),
            num(y - 4.0)
        );
        text(out, x1 - 14.0, y, "end", name);
    }
}

/// Samples `g` across `x`, splitting where it is undefined.
fn sample_curve(g: &dyn Fn(f64) -> Option<f64>, (lo, hi): (f64, f64)) -> Vec<Vec<(f64, f64)>> {
    let mut segments = Vec::new();
    let mut current = Vec::new();
    for i in 0..=CURVE_SAMPLES {
        let x = lo + (hi - lo) * i as f64 / CURVE_SAMPLES as f64;
        match g(x).filter(|y| y.is_finite()) {
            Some(y) => current.push((x, y)),
            None if current.len() > 1 => segments.push(std::mem::take(&mut current)),
            None => current.clear(),
        }
    }
    if current.len() > 1 {
        segments.push(current);
    }
    segments
}

pub fn render(title: &str, panels: &[Panel]) -> String {
    let width = PANEL_WIDTH * panels.len().max(1) as f64;
    let height = PANEL_HEIGHT + 24.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {} {}" width="{}" height="{}" font-family="sans-serif">"#,
        num(width),
        num(height),
        num(width),
        num(height)
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#fff"/>"##);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="13">{}</text>"#,
        num(width / 2.0),
        num(height - 6.0),
        escape(title)
    );
    for (i, p) in panels.iter().enumerate() {
        panel(&mut out, i, p);
    }
    out.push_str("</svg>\n");
    out
}
