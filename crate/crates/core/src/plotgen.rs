//! Plot data for dual-isomorphic coordinate systems and its CSV and SVG
//! renderings.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::mappings::{bond, Frame2D, Mapping};
use crate::means::{mean_numbers, Weights};
use crate::numerics::Interval;
use crate::realfn::RealFn;

/// `(g(x), h(y))`.
pub fn to_aux(fr: &Frame2D, x: f64, y: f64) -> Result<(f64, f64)> {
    Ok((fr.g.apply(x)?, fr.h.apply(y)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotPoint {
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub v: f64,
}

/// A sample where the plane density is singular because `g′(x)` or `h′(y)`
/// vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularMarker {
    pub x: f64,
    pub y: f64,
    pub u: f64,
    pub v: f64,
}

#[derive(Debug, Clone)]
pub struct PlotSeries {
    pub label: String,
    pub points: Vec<PlotPoint>,
    pub annotations: Vec<SingularMarker>,
    pub frame: Frame2D,
}

/// `n` samples of the graph of `f` on `iv`, evenly spaced in `u = g(x)`.
///
/// Open ends of `g(iv)` are approached to within `1e-6` of the unit range;
/// infinite ends are compactified.
pub fn graph_series(f: &RealFn, fr: &Frame2D, iv: &Interval, n: usize) -> Result<PlotSeries> {
    if n < 2 {
        return Err(Error::InvalidParam("a series needs at least two samples".into()));
    }
    let f = bond(&f.restrict(iv)?, fr)?;
    let e = fr.g.image(iv)?;
    let mut points = Vec::with_capacity(n);
    let mut annotations = Vec::new();
    for i in 0..n {
        let mut t = i as f64 / (n - 1) as f64;
        if i == 0 && (e.lo_open() || !e.is_bounded()) {
            t = 1e-6;
        }
        if i == n - 1 && (e.hi_open() || !e.is_bounded()) {
            t = 1.0 - 1e-6;
        }
        let target = if e.is_bounded() { e.lo() + t * e.width() } else { e.from_unit(t) };
        let x = fr.g.invert(target)?.clamp(iv.lo(), iv.hi());
        let Ok(y) = f.eval(x) else { continue };
        let (u, v) = to_aux(fr, x, y)?;
        if fr.g.derivative(x).is_ok_and(|d| d == 0.0) || fr.h.derivative(y).is_ok_and(|d| d == 0.0) {
            annotations.push(SingularMarker { x, y, u, v });
        }
        points.push(PlotPoint { x, y, u, v });
    }
    for &c in fr.g.critical_points() {
        if iv.contains(c) && !annotations.iter().any(|a| a.x == c) {
            if let Ok(y) = f.eval(c) {
                let (u, v) = to_aux(fr, c, y)?;
                annotations.push(SingularMarker { x: c, y, u, v });
            }
        }
    }
    points.sort_by(|a, b| a.u.total_cmp(&b.u));
    Ok(PlotSeries {
        label: f.label().to_string(),
        points,
        annotations,
        frame: fr.clone(),
    })
}

/// `g⁻¹(λ₁·g(p₁) + λ₂·g(p₂))` with `λ₂ = 1 − λ₁`.
pub fn fixed_proportion(p1: f64, p2: f64, lambda1: f64, g: &Mapping) -> Result<f64> {
    if !(lambda1 > 0.0 && lambda1 < 1.0) {
        return Err(Error::InvalidParam(format!("proportion {lambda1} is not in (0, 1)")));
    }
    mean_numbers(&[p1, p2], &Weights::new(vec![lambda1, 1.0 - lambda1])?, g)
}

/// Tick positions on the auxiliary axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisTicks {
    /// `(mark, g(mark))` pairs in the order given.
    pub ticks: Vec<(f64, f64)>,
    /// The mapping is decreasing, so the axis arrow points the other way.
    pub reversed: bool,
}

pub fn axis_ticks(g: &Mapping, marks: &[f64]) -> Result<AxisTicks> {
    let ticks = marks
        .iter()
        .map(|&m| Ok((m, g.apply(m)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(AxisTicks {
        ticks,
        reversed: !g.direction().is_increasing(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotFormat {
    Csv,
    Svg,
}

/// Rounds to 12 significant digits and prints the shortest decimal that
/// reads back to the rounded value.
pub fn format_number(v: f64) -> String {
    let r: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    if r == 0.0 {
        return "0".into();
    }
    let a = r.abs();
    if (1e-5..1e15).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

fn check_series(series: &[PlotSeries]) -> Result<()> {
    if series.is_empty() {
        return Err(Error::InvalidInput("nothing to emit".into()));
    }
    for s in series {
        if s.label.trim().is_empty() {
            return Err(Error::InvalidInput("series label must not be empty".into()));
        }
    }
    Ok(())
}

fn csv_label(label: &str) -> String {
    if label.contains([',', '"', '\n']) {
        format!("\"{}\"", label.replace('"', "\"\""))
    } else {
        label.to_string()
    }
}

pub fn to_csv(series: &[PlotSeries]) -> Result<String> {
    check_series(series)?;
    let mut out = String::from("label,x,y,u,v\n");
    for s in series {
        let label = csv_label(&s.label);
        for p in &s.points {
            let _ = writeln!(
                out,
                "{label},{},{},{},{}",
                format_number(p.x),
                format_number(p.y),
                format_number(p.u),
                format_number(p.v)
            );
        }
    }
    Ok(out)
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;
const TICKS: usize = 6;
const PALETTE: [&str; 4] = ["#1f5fa8", "#b8412c", "#2d8a4e", "#7a4ea3"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Marks at evenly spaced auxiliary positions, rounded to three significant
/// digits in the original scale.
fn nice_marks(m: &Mapping, lo: f64, hi: f64) -> Vec<f64> {
    let mut marks: Vec<f64> = (0..TICKS)
        .filter_map(|i| m.invert(lo + (hi - lo) * i as f64 / (TICKS - 1) as f64).ok())
        .map(|x| format!("{x:.2e}").parse().unwrap_or(x))
        .filter(|x| m.domain().contains(*x))
        .collect();
    marks.dedup();
    marks
}

pub fn to_svg(series: &[PlotSeries]) -> Result<String> {
    check_series(series)?;
    let pts = series.iter().flat_map(|s| s.points.iter());
    let (mut u0, mut u1, mut v0, mut v1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for p in pts {
        u0 = u0.min(p.u);
        u1 = u1.max(p.u);
        v0 = v0.min(p.v);
        v1 = v1.max(p.v);
    }
    if u1 - u0 == 0.0 {
        u1 += 1.0;
    }
    if v1 - v0 == 0.0 {
        v1 += 1.0;
    }
    let sx = |u: f64| MARGIN + (u - u0) / (u1 - u0) * (WIDTH - 2.0 * MARGIN);
    let sy = |v: f64| HEIGHT - MARGIN - (v - v0) / (v1 - v0) * (HEIGHT - 2.0 * MARGIN);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let (ox, oy) = (sx(0.0), sy(0.0));
    let _ = writeln!(
        out,
        r#"<line x1="{:.3}" y1="{oy:.3}" x2="{:.3}" y2="{oy:.3}" stroke="black"/>"#,
        MARGIN,
        WIDTH - MARGIN
    );
    let _ = writeln!(
        out,
        r#"<line x1="{ox:.3}" y1="{:.3}" x2="{ox:.3}" y2="{:.3}" stroke="black"/>"#,
        HEIGHT - MARGIN,
        MARGIN
    );
    let _ = writeln!(out, r#"<circle cx="{ox:.3}" cy="{oy:.3}" r="3" fill="black"/>"#);
    let _ = writeln!(out, r#"<text x="{:.3}" y="{:.3}" font-size="12">α</text>"#, ox - 14.0, oy + 14.0);
    let frame = &series[0].frame;
    let xt = axis_ticks(&frame.g, &nice_marks(&frame.g, u0, u1))?;
    for (mark, pos) in &xt.ticks {
        let x = sx(*pos);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.3}" y1="{:.3}" x2="{x:.3}" y2="{:.3}" stroke="black"/><text x="{x:.3}" y="{:.3}" font-size="10" text-anchor="middle">{}</text>"#,
            oy - 4.0,
            oy + 4.0,
            oy + 16.0,
            format_number(*mark)
        );
    }
    let yt = axis_ticks(&frame.h, &nice_marks(&frame.h, v0, v1))?;
    for (mark, pos) in &yt.ticks {
        let y = sy(*pos);
        let _ = writeln!(
            out,
            r#"<line x1="{:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}" stroke="black"/><text x="{:.3}" y="{:.3}" font-size="10" text-anchor="end">{}</text>"#,
            ox - 4.0,
            ox + 4.0,
            ox - 6.0,
            y + 3.0,
            format_number(*mark)
        );
    }
    let arrow = |reversed: bool| if reversed { "reversed" } else { "forward" };
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="{:.3}" font-size="11" text-anchor="end">{} ({})</text>"#,
        WIDTH - MARGIN,
        oy - 8.0,
        escape(frame.g.name()),
        arrow(xt.reversed)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.3}" y="{:.3}" font-size="11">{} ({})</text>"#,
        ox + 8.0,
        MARGIN - 8.0,
        escape(frame.h.name()),
        arrow(yt.reversed)
    );
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let coords: Vec<String> = s.points.iter().map(|p| format!("{:.3},{:.3}", sx(p.u), sy(p.v))).collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
            coords.join(" "),
            escape(&s.label)
        );
        for a in &s.annotations {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.3}" cy="{:.3}" r="4" fill="none" stroke="red"><title>singular density</title></circle>"#,
                sx(a.u),
                sy(a.v)
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Writes the series to `dest` in the requested format.
pub fn emit(series: &[PlotSeries], format: PlotFormat, dest: &Path) -> Result<()> {
    let text = match format {
        PlotFormat::Csv => to_csv(series)?,
        PlotFormat::Svg => to_svg(series)?,
    };
    std::fs::write(dest, text)?;
    Ok(())
}
