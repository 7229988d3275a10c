//! CSV serialization and SVG figure rendering.
//!
//! Floats are written in Rust's shortest round-trip form, so parsing a
//! written file yields bit-identical values. SVG output depends only on its
//! inputs.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::control::{to_compass, ControlChannel};
use crate::error::{Error, Result};
use crate::integrator::Trajectory;
use crate::spheroid::Spheroid;

pub const CSV_HEADER: [&str; 12] = [
    "t", "phi", "theta", "phi_dot", "theta_dot", "x", "y", "z", "heading", "course", "drift", "speed",
];

/// Angle convention for exported heading and course columns.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum AngleConvention {
    /// Counterclockwise from the local parallel.
    #[default]
    Parallel,
    /// Clockwise from north.
    Compass,
}

/// One row of the trajectory CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsvRow {
    pub t: f64,
    pub phi: f64,
    pub theta: f64,
    pub phi_dot: f64,
    pub theta_dot: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub heading: f64,
    pub course: f64,
    pub drift: f64,
    pub speed: f64,
}

impl CsvRow {
    pub fn to_array(&self) -> [f64; 12] {
        [
            self.t, self.phi, self.theta, self.phi_dot, self.theta_dot, self.x, self.y, self.z,
            self.heading, self.course, self.drift, self.speed,
        ]
    }

    pub fn from_array(v: [f64; 12]) -> Self {
        Self {
            t: v[0],
            phi: v[1],
            theta: v[2],
            phi_dot: v[3],
            theta_dot: v[4],
            x: v[5],
            y: v[6],
            z: v[7],
            heading: v[8],
            course: v[9],
            drift: v[10],
            speed: v[11],
        }
    }

    /// Bitwise equality, treating NaN payloads as values.
    pub fn bit_eq(&self, other: &Self) -> bool {
        self.to_array()
            .iter()
            .zip(other.to_array().iter())
            .all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

/// Joins a trajectory with its control channel. `phi` stays continuous
/// (not wrapped) so that winding paths remain plottable.
pub fn trajectory_rows(
    sph: &Spheroid,
    traj: &Trajectory,
    channel: &ControlChannel,
    convention: AngleConvention,
) -> Result<Vec<CsvRow>> {
    if channel.records.len() != traj.samples.len() {
        return Err(Error::InvalidConfig(format!(
            "control channel has {} records for {} samples",
            channel.records.len(),
            traj.samples.len()
        )));
    }
    let convert = |a: f64| match convention {
        AngleConvention::Parallel => a,
        AngleConvention::Compass => to_compass(a),
    };
    Ok(traj
        .samples
        .iter()
        .zip(&channel.records)
        .map(|(smp, rec)| {
            let [x, y, z] = sph.embed(smp.state.point);
            CsvRow {
                t: smp.t,
                phi: smp.state.point.phi,
                theta: smp.state.point.theta,
                phi_dot: smp.state.vel.u,
                theta_dot: smp.state.vel.v,
                x,
                y,
                z,
                heading: convert(rec.heading),
                course: convert(rec.course),
                drift: rec.drift,
                speed: rec.speed,
            }
        })
        .collect())
}

fn push_float(out: &mut String, x: f64) {
    // Debug formatting is the shortest string that parses back to `x`.
    write!(out, "{x:?}").expect("writing to a String cannot fail");
}

/// Renders a table with the given header. Every row must match its width.
pub fn table_string(header: &[&str], rows: &[Vec<f64>]) -> Result<String> {
    let mut out = header.join(",");
    out.push('\n');
    for (i, row) in rows.iter().enumerate() {
        if row.len() != header.len() {
            return Err(Error::InvalidConfig(format!(
                "row {i} has {} fields, header has {}",
                row.len(),
                header.len()
            )));
        }
        for (j, &x) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            push_float(&mut out, x);
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn csv_string(rows: &[CsvRow]) -> String {
    let rows: Vec<Vec<f64>> = rows.iter().map(|r| r.to_array().to_vec()).collect();
    table_string(&CSV_HEADER, &rows).expect("trajectory rows have fixed width")
}

fn write_bytes(path: &Path, body: &str) -> Result<u64> {
    fs::write(path, body).map_err(|e| Error::io(path, e))?;
    Ok(body.len() as u64)
}

/// Writes the trajectory CSV and returns the number of bytes written.
pub fn write_csv(path: impl AsRef<Path>, rows: &[CsvRow]) -> Result<u64> {
    write_bytes(path.as_ref(), &csv_string(rows))
}

pub fn write_table(path: impl AsRef<Path>, header: &[&str], rows: &[Vec<f64>]) -> Result<u64> {
    write_bytes(path.as_ref(), &table_string(header, rows)?)
}

/// Parses a table, checking the header against `expected` when given.
pub fn parse_table(text: &str, expected: Option<&[&str]>) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut lines = text.lines().enumerate();
    let header: Vec<String> = match lines.next() {
        Some((_, h)) => h.split(',').map(|s| s.trim().to_string()).collect(),
        None => {
            return Err(Error::Parse {
                line: 1,
                reason: "missing header".into(),
            })
        }
    };
    if let Some(exp) = expected {
        if header.len() != exp.len() || header.iter().zip(exp).any(|(a, b)| a != b) {
            return Err(Error::Parse {
                line: 1,
                reason: format!("unexpected header {header:?}"),
            });
        }
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != header.len() {
            return Err(Error::Parse {
                line: i + 1,
                reason: format!("expected {} fields, found {}", header.len(), fields.len()),
            });
        }
        let row = fields
            .iter()
            .map(|f| {
                f.trim().parse::<f64>().map_err(|e| Error::Parse {
                    line: i + 1,
                    reason: format!("{f:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok((header, rows))
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let (_, rows) = parse_table(text, Some(&CSV_HEADER))?;
    Ok(rows
        .into_iter()
        .map(|r| CsvRow::from_array(r.try_into().expect("width checked against header")))
        .collect())
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<CsvRow>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text)
}

/// Colors used for consecutive time segments: red, blue, purple, magenta.
pub const SEGMENT_PALETTE: [&str; 4] = ["#d62728", "#1f3fbf", "#7b2d9e", "#d61fb4"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// Embedded 3D path under an orthographic projection.
    Path3dProjection,
    /// Embedded path projected onto the equatorial plane.
    XyProjection,
    /// `(phi, theta)` drawn as angle and radius.
    Polar,
    ChannelVsTime,
    /// Tangent-plane curves in (east, north) components.
    Indicatrix,
    SpeedVsHeading,
}

impl PlotKind {
    pub fn label(&self) -> &'static str {
        match self {
            PlotKind::Path3dProjection => "path3d_projection",
            PlotKind::XyProjection => "xy_projection",
            PlotKind::Polar => "polar",
            PlotKind::ChannelVsTime => "channel_vs_time",
            PlotKind::Indicatrix => "indicatrix",
            PlotKind::SpeedVsHeading => "speed_vs_heading",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Dash {
    #[default]
    Solid,
    Dashed,
    Dotted,
}

impl Dash {
    fn attr(&self) -> &'static str {
        match self {
            Dash::Solid => "",
            Dash::Dashed => r#" stroke-dasharray="6 4""#,
            Dash::Dotted => r#" stroke-dasharray="2 3""#,
        }
    }
}

/// A single curve. Planar kinds ignore the third coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub color: String,
    pub dash: Dash,
    /// Draw points as dots instead of a polyline.
    pub marker: bool,
    pub closed: bool,
    pub points: Vec<[f64; 3]>,
    /// Sample time per point, required for time segmentation.
    pub times: Option<Vec<f64>>,
}

impl Series {
    pub fn planar(label: impl Into<String>, color: impl Into<String>, pts: impl IntoIterator<Item = (f64, f64)>) -> Self {
        Self::spatial(label, color, pts.into_iter().map(|(x, y)| [x, y, 0.0]))
    }

    pub fn spatial(label: impl Into<String>, color: impl Into<String>, pts: impl IntoIterator<Item = [f64; 3]>) -> Self {
        Self {
            label: label.into(),
            color: color.into(),
            dash: Dash::Solid,
            marker: false,
            closed: false,
            points: pts.into_iter().collect(),
            times: None,
        }
    }

    pub fn dashed(mut self, dash: Dash) -> Self {
        self.dash = dash;
        self
    }

    pub fn markers(mut self) -> Self {
        self.marker = true;
        self
    }

    pub fn closed(mut self) -> Self {
        self.closed = true;
        self
    }

    pub fn with_times(mut self, times: Vec<f64>) -> Self {
        self.times = Some(times);
        self
    }
}

/// Orthographic camera for 3D projections; z points up on screen unless
/// looking straight down the z-axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct View {
    pub azimuth: f64,
    pub elevation: f64,
}

impl Default for View {
    fn default() -> Self {
        Self {
            azimuth: PI / 4.0,
            elevation: PI / 8.0,
        }
    }
}

impl View {
    /// Looking along the negative x, y or z axis.
    pub fn along_axis(axis: char) -> Option<Self> {
        match axis {
            'x' => Some(Self { azimuth: 0.0, elevation: 0.0 }),
            'y' => Some(Self { azimuth: PI / 2.0, elevation: 0.0 }),
            'z' => Some(Self { azimuth: -PI / 2.0, elevation: PI / 2.0 }),
            _ => None,
        }
    }

    fn project(&self, p: [f64; 3]) -> (f64, f64) {
        let (sa, ca) = self.azimuth.sin_cos();
        let (se, ce) = self.elevation.sin_cos();
        let right = [-sa, ca, 0.0];
        let up = [-se * ca, -se * sa, ce];
        let dot = |a: [f64; 3]| a[0] * p[0] + a[1] * p[1] + a[2] * p[2];
        (dot(right), dot(up))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub kind: PlotKind,
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    /// Interior time boundaries; `n` boundaries make `n + 1` segments.
    pub segments: Vec<f64>,
    pub view: View,
    /// Shape parameter of a reference wireframe drawn under 3D paths.
    pub wireframe: Option<f64>,
}

impl PlotSpec {
    pub fn new(kind: PlotKind) -> Self {
        let (x_label, y_label) = match kind {
            PlotKind::Path3dProjection => ("", ""),
            PlotKind::XyProjection => ("x", "y"),
            PlotKind::Polar => ("", ""),
            PlotKind::ChannelVsTime => ("t", ""),
            PlotKind::Indicatrix => ("east", "north"),
            PlotKind::SpeedVsHeading => ("heading", "speed"),
        };
        Self {
            kind,
            title: String::new(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            series: Vec::new(),
            segments: Vec::new(),
            view: View::default(),
            wireframe: None,
        }
    }

    pub fn title(mut self, title: impl Into<String>) -> Self {
        self.title = title.into();
        self
    }

    pub fn push(mut self, s: Series) -> Self {
        self.series.push(s);
        self
    }

    pub fn segments(mut self, bounds: Vec<f64>) -> Self {
        self.segments = bounds;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.series.is_empty() {
            return Err(Error::EmptyData(format!("{} plot has no series", self.kind.label())));
        }
        if self.segments.iter().any(|b| !b.is_finite()) || self.segments.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidConfig("segment boundaries must be finite and strictly increasing".into()));
        }
        if self.segments.len() >= SEGMENT_PALETTE.len() {
            return Err(Error::InvalidConfig(format!(
                "at most {} time segments are supported",
                SEGMENT_PALETTE.len()
            )));
        }
        for s in &self.series {
            let finite = s.points.iter().filter(|p| p.iter().all(|c| c.is_finite())).count();
            let needed = if s.marker { 1 } else { 2 };
            if finite < needed {
                return Err(Error::EmptyData(format!(
                    "series {:?} has {finite} usable points, needs {needed}",
                    s.label
                )));
            }
            if !self.segments.is_empty() {
                match &s.times {
                    Some(t) if t.len() == s.points.len() => {}
                    _ => {
                        return Err(Error::InvalidConfig(format!(
                            "series {:?} needs one time per point for segmentation",
                            s.label
                        )))
                    }
                }
            }
        }
        Ok(())
    }
}

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 540.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 170.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(pts: impl Iterator<Item = (f64, f64)>, equal: bool) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in pts.filter(|(x, y)| x.is_finite() && y.is_finite()) {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        let pad = |lo: &mut f64, hi: &mut f64| {
            let span = *hi - *lo;
            let p = if span > 0.0 { 0.05 * span } else { 0.5 * lo.abs().max(1.0) };
            *lo -= p;
            *hi += p;
        };
        pad(&mut x0, &mut x1);
        pad(&mut y0, &mut y1);
        if equal {
            let plot_w = WIDTH - MARGIN_L - MARGIN_R;
            let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
            let scale = ((x1 - x0) / plot_w).max((y1 - y0) / plot_h);
            let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
            x0 = cx - 0.5 * scale * plot_w;
            x1 = cx + 0.5 * scale * plot_w;
            y0 = cy - 0.5 * scale * plot_h;
            y1 = cy + 0.5 * scale * plot_h;
        }
        Self { x0, x1, y0, y1 }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let sx = MARGIN_L + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_L - MARGIN_R);
        let sy = HEIGHT - MARGIN_B - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - MARGIN_T - MARGIN_B);
        (sx, sy)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn polyline(out: &mut String, pts: &[(f64, f64)], color: &str, dash: Dash, closed: bool) {
    if pts.len() < 2 {
        return;
    }
    let tag = if closed { "polygon" } else { "polyline" };
    let _ = write!(out, r#"<{tag} fill="none" stroke="{color}" stroke-width="1.4"{} points=""#, dash.attr());
    for (i, (x, y)) in pts.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{x:.2},{y:.2}");
    }
    out.push_str("\"/>\n");
}

impl PlotSpec {
    fn to_plane(&self, p: [f64; 3]) -> (f64, f64) {
        match self.kind {
            PlotKind::Path3dProjection => self.view.project(p),
            PlotKind::Polar => (p[1] * p[0].cos(), p[1] * p[0].sin()),
            _ => (p[0], p[1]),
        }
    }

    fn segment_of(&self, t: f64) -> usize {
        self.segments.iter().filter(|&&b| t > b).count()
    }

    fn reference_curves(&self) -> Vec<Vec<(f64, f64)>> {
        let ring = |f: &dyn Fn(f64) -> [f64; 3]| -> Vec<(f64, f64)> {
            (0..=120).map(|k| self.to_plane(f(2.0 * PI * k as f64 / 120.0))).collect()
        };
        match (self.kind, self.wireframe) {
            (PlotKind::Path3dProjection, Some(a)) => {
                let mut out = Vec::new();
                for k in 0..4 {
                    let lon = PI * k as f64 / 4.0;
                    out.push(ring(&|s| [s.sin() * lon.cos(), s.sin() * lon.sin(), a * s.cos()]));
                }
                for theta in [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0] {
                    out.push(ring(&|s| [theta.sin() * s.cos(), theta.sin() * s.sin(), a * theta.cos()]));
                }
                out
            }
            (PlotKind::Polar, _) => [PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI]
                .iter()
                .map(|&r| ring(&|s| [s, r, 0.0]))
                .collect(),
            _ => Vec::new(),
        }
    }
}

/// Renders a standalone SVG 1.1 document.
pub fn render_svg(spec: &PlotSpec) -> Result<String> {
    spec.validate()?;
    let references = spec.reference_curves();
    let axes = !matches!(spec.kind, PlotKind::Path3dProjection | PlotKind::Polar);
    let equal = matches!(
        spec.kind,
        PlotKind::Path3dProjection | PlotKind::XyProjection | PlotKind::Polar | PlotKind::Indicatrix
    );
    let frame = Frame::fit(
        spec.series
            .iter()
            .flat_map(|s| s.points.iter().map(|&p| spec.to_plane(p)))
            .chain(references.iter().flatten().copied()),
        equal,
    );

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<desc>{}</desc>"#, spec.kind.label());
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    if !spec.title.is_empty() {
        let _ = writeln!(
            out,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            (WIDTH - MARGIN_R + MARGIN_L) / 2.0,
            escape(&spec.title)
        );
    }

    if axes {
        let (bx0, by0) = frame.map((frame.x0, frame.y0));
        let (bx1, by1) = frame.map((frame.x1, frame.y1));
        let _ = writeln!(
            out,
            r##"<rect x="{bx0:.2}" y="{by1:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="#444"/>"##,
            bx1 - bx0,
            by0 - by1
        );
        for k in 0..=4 {
            let f = k as f64 / 4.0;
            let xv = frame.x0 + f * (frame.x1 - frame.x0);
            let yv = frame.y0 + f * (frame.y1 - frame.y0);
            let (sx, _) = frame.map((xv, frame.y0));
            let (_, sy) = frame.map((frame.x0, yv));
            let _ = writeln!(
                out,
                r##"<text x="{sx:.2}" y="{:.2}" text-anchor="middle" fill="#444">{}</text>"##,
                by0 + 16.0,
                fmt_tick(xv)
            );
            let _ = writeln!(
                out,
                r##"<text x="{:.2}" y="{:.2}" text-anchor="end" fill="#444">{}</text>"##,
                bx0 - 6.0,
                sy + 4.0,
                fmt_tick(yv)
            );
        }
        if frame.y0 < 0.0 && frame.y1 > 0.0 {
            let (_, sy) = frame.map((0.0, 0.0));
            let _ = writeln!(
                out,
                r##"<line x1="{bx0:.2}" y1="{sy:.2}" x2="{bx1:.2}" y2="{sy:.2}" stroke="#bbb"/>"##
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            (bx0 + bx1) / 2.0,
            HEIGHT - 12.0,
            escape(&spec.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
            (by0 + by1) / 2.0,
            (by0 + by1) / 2.0,
            escape(&spec.y_label)
        );
    }

    for curve in &references {
        let pts: Vec<_> = curve.iter().map(|&p| frame.map(p)).collect();
        polyline(&mut out, &pts, "#cccccc", Dash::Solid, false);
    }

    for s in &spec.series {
        let _ = writeln!(out, r#"<g id="{}">"#, escape(&s.label));
        if s.marker {
            for &p in s.points.iter().filter(|p| p.iter().all(|c| c.is_finite())) {
                let (x, y) = frame.map(spec.to_plane(p));
                let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{}"/>"#, s.color);
            }
        } else {
            // break at non-finite points and, when segmented, at segment changes
            let mut run: Vec<(f64, f64)> = Vec::new();
            let mut run_seg = None;
            let mut flush = |run: &mut Vec<(f64, f64)>, seg: Option<usize>| {
                let color = seg.map_or(s.color.as_str(), |k| SEGMENT_PALETTE[k]);
                polyline(&mut out, run, color, s.dash, s.closed && spec.segments.is_empty());
                run.clear();
            };
            for (i, &p) in s.points.iter().enumerate() {
                if !p.iter().all(|c| c.is_finite()) {
                    flush(&mut run, run_seg);
                    continue;
                }
                let seg = s.times.as_ref().filter(|_| !spec.segments.is_empty()).map(|t| spec.segment_of(t[i]));
                let q = frame.map(spec.to_plane(p));
                if seg != run_seg && !run.is_empty() {
                    let last = *run.last().expect("nonempty");
                    flush(&mut run, run_seg);
                    // keep segments joined
                    run.push(last);
                }
                run_seg = seg;
                run.push(q);
            }
            flush(&mut run, run_seg);
        }
        let _ = writeln!(out, "</g>");
    }

    // legend
    let lx = WIDTH - MARGIN_R + 14.0;
    let mut ly = MARGIN_T + 10.0;
    let mut legend_line = |out: &mut String, color: &str, dash: Dash, text: &str| {
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"{}/>"#,
            lx + 22.0,
            dash.attr()
        );
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 28.0, ly + 4.0, escape(text));
        ly += 18.0;
    };
    if spec.segments.is_empty() {
        for s in spec.series.iter().filter(|s| !s.label.is_empty()).take(24) {
            legend_line(&mut out, &s.color, s.dash, &s.label);
        }
    } else {
        let bounds: Vec<String> = spec.segments.iter().map(|&b| fmt_tick(b)).collect();
        for k in 0..=spec.segments.len() {
            let lo = if k == 0 { "0".to_string() } else { bounds[k - 1].clone() };
            let text = match bounds.get(k) {
                Some(hi) => format!("t in [{lo}, {hi}]"),
                None => format!("t >= {lo}"),
            };
            legend_line(&mut out, SEGMENT_PALETTE[k], Dash::Solid, &text);
        }
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

pub fn write_svg(path: impl AsRef<Path>, spec: &PlotSpec) -> Result<u64> {
    let body = render_svg(spec)?;
    write_bytes(path.as_ref(), &body)
}
