use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use znav_core::control::{
    control_channel, course_of, drift_of, initial_state_randers, initial_state_riemannian, speed_curve,
    speed_extremes, speed_of, ControlChannel,
};
use znav_core::export::{
    trajectory_rows, write_csv, write_svg, write_table, Dash, PlotKind, PlotSpec, Series,
};
use znav_core::integrator::integrate_system;
use znav_core::spheroid::wrap_pi;
use znav_core::{
    classify_path, integrate_family, GeodesicSystem, IntegratorConfig, MetricKind, NavState, PathClass,
    RandersMetric, SurfacePoint, Termination, Trajectory, WindField, POLE_EPS,
};

use crate::config::RunConfig;

/// Appends a line to the run log.
macro_rules! say {
    ($log:expr, $($arg:tt)*) => {{
        let _ = writeln!($log, $($arg)*);
    }};
}

const BLUE: &str = "#1f3fbf";
const RED: &str = "#d62728";
const GREEN: &str = "#2ca02c";
const PURPLE: &str = "#7b2d9e";
const MAGENTA: &str = "#d61fb4";
const BLACK: &str = "#000000";

/// Collects artifacts under the output directory and remembers what was written.
struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Outputs {
    fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|source| znav_core::Error::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        let p = self.dir.join(name);
        self.written.push(p.clone());
        p
    }

    fn csv(&mut self, name: &str, rows: &[znav_core::export::CsvRow]) -> Result<()> {
        let p = self.path(name);
        write_csv(&p, rows)?;
        Ok(())
    }

    fn table(&mut self, name: &str, header: &[&str], rows: &[Vec<f64>]) -> Result<()> {
        let p = self.path(name);
        write_table(&p, header, rows)?;
        Ok(())
    }

    fn svg(&mut self, name: &str, spec: &PlotSpec) -> Result<()> {
        let p = self.path(name);
        write_svg(&p, spec).with_context(|| format!("rendering {name}"))?;
        Ok(())
    }

    fn report(&self, log: &mut String) {
        for p in &self.written {
            say!(log, "wrote {}", p.display());
        }
    }
}

/// Wind felt by the craft whose control channel is reported. Only the
/// Randers flow is a navigation path in the wind; the h- and alpha-flows are
/// read as calm-water references.
fn channel_wind(kind: MetricKind, cfg: &RunConfig) -> WindField {
    match kind {
        MetricKind::Randers => cfg.wind.clone(),
        _ => WindField::calm(),
    }
}

fn channel(cfg: &RunConfig, kind: MetricKind, traj: &Trajectory) -> ControlChannel {
    control_channel(&cfg.spheroid, &channel_wind(kind, cfg), traj)
}

fn rows(cfg: &RunConfig, kind: MetricKind, traj: &Trajectory) -> Result<Vec<znav_core::export::CsvRow>> {
    Ok(trajectory_rows(&cfg.spheroid, traj, &channel(cfg, kind, traj), cfg.convention)?)
}

fn kind_style(kind: MetricKind) -> (&'static str, Dash) {
    match kind {
        MetricKind::Riemannian => (BLUE, Dash::Dashed),
        MetricKind::Alpha => (GREEN, Dash::Dotted),
        MetricKind::Randers => (RED, Dash::Solid),
    }
}

fn termination_label(t: &Termination) -> String {
    match t {
        Termination::Completed => "completed".into(),
        Termination::PoleProximity { t, .. } => format!("pole_proximity(t={t:.6})"),
        Termination::StepFailure { t } => format!("step_failure(t={t:.6})"),
    }
}

fn path_spec(cfg: &RunConfig, title: &str) -> PlotSpec {
    let mut spec = PlotSpec::new(PlotKind::Path3dProjection).title(title);
    spec.view = cfg.view;
    spec.wireframe = Some(cfg.spheroid.a());
    spec
}

fn spatial(cfg: &RunConfig, label: String, color: &str, traj: &Trajectory) -> Series {
    let pts = traj.samples.iter().map(|s| cfg.spheroid.embed(s.state.point));
    Series::spatial(label, color, pts).with_times(traj.times().collect())
}

fn xy(cfg: &RunConfig, label: String, color: &str, traj: &Trajectory) -> Series {
    let pts = traj.samples.iter().map(|s| {
        let [x, y, _] = cfg.spheroid.embed(s.state.point);
        (x, y)
    });
    Series::planar(label, color, pts)
}

fn member_label(base: &str, k: usize, count: usize) -> String {
    if count == 1 {
        base.to_string()
    } else {
        format!("{base} #{k}")
    }
}

/// Adds x(t), y(t), z(t) curves for one trajectory.
fn push_xyz(mut spec: PlotSpec, cfg: &RunConfig, traj: &Trajectory, tag: &str, dash: Dash) -> PlotSpec {
    for (axis, color) in [(0, BLUE), (1, RED), (2, BLACK)] {
        let pts = traj.samples.iter().map(|s| (s.t, cfg.spheroid.embed(s.state.point)[axis]));
        let name = ["x", "y", "z"][axis];
        spec = spec.push(Series::planar(format!("{name} {tag}"), color, pts).dashed(dash));
    }
    spec
}

fn max_norm_drift(sys: &GeodesicSystem, traj: &Trajectory) -> Result<f64> {
    let n0 = sys.conserved_norm(&traj.samples[0].state)?;
    let mut worst: f64 = 0.0;
    for s in &traj.samples {
        worst = worst.max((sys.conserved_norm(&s.state)? - n0).abs());
    }
    Ok(worst)
}

pub fn geodesic(cfg: &RunConfig, log: &mut String) -> Result<()> {
    let kind = cfg.kind;
    let sys = GeodesicSystem::new(kind, cfg.spheroid, cfg.wind.clone());
    let s0 = znav_core::control::initial_state_for(kind, sys.metric(), cfg.start, cfg.heading())?;
    let traj = integrate_system(&sys, s0, &cfg.integ)?.into_result()?;
    let drift = max_norm_drift(&sys, &traj)?;

    let mut out = Outputs::create(&cfg.out)?;
    out.csv("geodesic.csv", &rows(cfg, kind, &traj)?)?;
    let (color, _) = kind_style(kind);
    let spec = path_spec(cfg, &format!("{kind} geodesic"))
        .segments(cfg.segments.clone())
        .push(spatial(cfg, kind.to_string(), color, &traj));
    out.svg("geodesic_3d.svg", &spec)?;
    let spec = PlotSpec::new(PlotKind::XyProjection)
        .title(format!("{kind} geodesic, xy-projection"))
        .push(xy(cfg, kind.to_string(), color, &traj));
    out.svg("geodesic_xy.svg", &spec)?;

    let end = traj.last;
    let mut line = format!(
        "geodesic kind={kind} termination={} class={} t={:.6} phi={:.9} theta={:.9} phi_dot={:.9} theta_dot={:.9} norm_drift={drift:.3e}",
        termination_label(&traj.termination),
        classify_path(&traj).label(),
        end.t,
        end.state.point.phi,
        end.state.point.theta,
        end.state.vel.u,
        end.state.vel.v,
    );
    if kind == MetricKind::Riemannian {
        let c0 = cfg.spheroid.clairaut_invariant(&traj.samples[0].state);
        let cd = traj
            .samples
            .iter()
            .map(|s| (cfg.spheroid.clairaut_invariant(&s.state) - c0).abs())
            .fold(0.0, f64::max);
        let _ = write!(line, " clairaut_drift={cd:.3e}");
    }
    say!(log, "{line}");
    out.report(log);
    Ok(())
}

pub fn family(cfg: &RunConfig, log: &mut String) -> Result<()> {
    let kind = cfg.kind;
    let results = integrate_family(&cfg.spheroid, &cfg.wind, cfg.start, &cfg.headings, kind, &cfg.integ)?;
    if results.iter().all(|r| r.is_err()) {
        let err = results.into_iter().next().expect("fan is nonempty").unwrap_err();
        return Err(anyhow::Error::new(err).context("every family member failed"));
    }

    let mut out = Outputs::create(&cfg.out)?;
    let count = results.len();
    let mut spec = path_spec(cfg, &format!("{kind} family, {count} members")).segments(cfg.segments.clone());
    let mut xyz = PlotSpec::new(PlotKind::ChannelVsTime).title("x(t), y(t), z(t)");
    let (mut transpolar, mut circumpolar, mut failed) = (0, 0, 0);

    say!(log, "{:>6}  {:>12}  {:<12} termination", "member", "heading", "class");
    for (k, (r, &heading)) in results.iter().zip(&cfg.headings).enumerate() {
        match r {
            Ok(traj) => {
                let class = classify_path(traj);
                match class {
                    PathClass::Transpolar => transpolar += 1,
                    PathClass::Circumpolar => circumpolar += 1,
                }
                say!(log, 
                    "{k:>6}  {heading:>12.6}  {:<12} {}",
                    class.label(),
                    termination_label(&traj.termination)
                );
                out.csv(&format!("family_{k:03}.csv"), &rows(cfg, kind, traj)?)?;
                // transpolar blue, circumpolar red unless time segments recolor
                let color = if class == PathClass::Transpolar { BLUE } else { RED };
                spec = spec.push(spatial(cfg, member_label("member", k, count), color, traj));
                xyz = push_xyz(xyz, cfg, traj, &format!("#{k}"), Dash::Solid);
            }
            Err(e) => {
                failed += 1;
                say!(log, "{k:>6}  {heading:>12.6}  {:<12} {e}", "failed");
            }
        }
    }
    out.svg("family_3d.svg", &spec)?;
    out.svg("family_xyz.svg", &xyz)?;
    say!(log, "transpolar={transpolar} circumpolar={circumpolar} failed={failed}");
    out.report(log);
    Ok(())
}

/// Largest pointwise gaps between two trajectories over their common samples.
struct Gaps {
    phi: f64,
    theta: f64,
}

fn gaps(a: &Trajectory, b: &Trajectory, shift: f64) -> Gaps {
    let mut g = Gaps { phi: 0.0, theta: 0.0 };
    for (x, y) in a.samples.iter().zip(&b.samples) {
        g.phi = g.phi.max((y.state.point.phi - (x.state.point.phi - shift * x.t)).abs());
        g.theta = g.theta.max((y.state.point.theta - x.state.point.theta).abs());
    }
    g
}

pub fn compare(cfg: &RunConfig, log: &mut String) -> Result<()> {
    let count = cfg.headings.len();
    let mut runs: Vec<Vec<Trajectory>> = Vec::new();
    for &kind in &cfg.kinds {
        let results = integrate_family(&cfg.spheroid, &cfg.wind, cfg.start, &cfg.headings, kind, &cfg.integ)?;
        let trajs = results
            .into_iter()
            .enumerate()
            .map(|(k, r)| r.with_context(|| format!("{kind} path for heading #{k}")))
            .collect::<Result<Vec<_>>>()?;
        runs.push(trajs);
    }

    let mut out = Outputs::create(&cfg.out)?;
    let reference = cfg.kinds[0];
    let header = [
        "member", "t", "dphi", "dtheta", "dphi_dot", "dtheta_dot", "dheading", "dcourse", "ddrift", "dspeed",
    ];
    say!(log, 
        "compare kinds={} members={count}",
        cfg.kinds.iter().map(|k| k.label()).collect::<Vec<_>>().join(",")
    );
    for (i, &kind) in cfg.kinds.iter().enumerate().skip(1) {
        let mut table = Vec::new();
        let mut worst = Gaps { phi: 0.0, theta: 0.0 };
        for (m, (a, b)) in runs[0].iter().zip(&runs[i]).enumerate() {
            let (ca, cb) = (channel(cfg, reference, a), channel(cfg, kind, b));
            for (j, (x, y)) in a.samples.iter().zip(&b.samples).enumerate() {
                let (ra, rb) = (ca.records[j], cb.records[j]);
                table.push(vec![
                    m as f64,
                    x.t,
                    y.state.point.phi - x.state.point.phi,
                    y.state.point.theta - x.state.point.theta,
                    y.state.vel.u - x.state.vel.u,
                    y.state.vel.v - x.state.vel.v,
                    wrap_pi(rb.heading - ra.heading),
                    wrap_pi(rb.course - ra.course),
                    rb.drift - ra.drift,
                    rb.speed - ra.speed,
                ]);
            }
            let g = gaps(a, b, 0.0);
            worst.phi = worst.phi.max(g.phi);
            worst.theta = worst.theta.max(g.theta);
        }
        out.table(&format!("compare_diff_{}.csv", kind.label()), &header, &table)?;
        say!(log, 
            "{kind} - {reference}: max|dphi|={:.3e} max|dtheta|={:.3e}",
            worst.phi, worst.theta
        );
    }

    let pos = |k: MetricKind| cfg.kinds.iter().position(|&x| x == k);
    if let (Some(h), Some(f)) = (pos(MetricKind::Riemannian), pos(MetricKind::Randers)) {
        let c = cfg.wind_spec.rate();
        let (mut phi, mut theta, mut rate) = (0.0_f64, 0.0_f64, 0.0_f64);
        for (a, b) in runs[h].iter().zip(&runs[f]) {
            let g = gaps(a, b, c);
            phi = phi.max(g.phi);
            theta = theta.max(g.theta);
            for (x, y) in a.samples.iter().zip(&b.samples) {
                rate = rate.max((y.state.vel.u - x.state.vel.u + c).abs());
            }
        }
        say!(log, "killing residual (c={c}): phi={phi:.3e} theta={theta:.3e} phi_dot={rate:.3e}");
    }

    let mut paths = path_spec(cfg, "geodesic flows");
    let mut plane = PlotSpec::new(PlotKind::XyProjection).title("xy-projection");
    let mut xyz = PlotSpec::new(PlotKind::ChannelVsTime).title("x(t), y(t), z(t)");
    let mut polar = PlotSpec::new(PlotKind::Polar).title("(phi, theta)");
    let mut rates = PlotSpec::new(PlotKind::XyProjection).title("first derivatives");
    (rates.x_label, rates.y_label) = ("phi_dot".into(), "theta_dot".into());
    let mut accel = PlotSpec::new(PlotKind::XyProjection).title("second derivatives");
    (accel.x_label, accel.y_label) = ("phi_ddot".into(), "theta_ddot".into());

    for (&kind, trajs) in cfg.kinds.iter().zip(&runs) {
        let (color, dash) = kind_style(kind);
        let sys = GeodesicSystem::new(kind, cfg.spheroid, cfg.wind.clone());
        for (m, traj) in trajs.iter().enumerate() {
            let label = member_label(kind.label(), m, count);
            paths = paths.push(spatial(cfg, label.clone(), color, traj).dashed(dash));
            plane = plane.push(xy(cfg, label.clone(), color, traj).dashed(dash));
            xyz = push_xyz(xyz, cfg, traj, &label, dash);
            let pts = traj.samples.iter().map(|s| (s.state.point.phi, s.state.point.theta));
            polar = polar.push(Series::planar(label.clone(), color, pts).dashed(dash));
            let pts = traj.samples.iter().map(|s| (s.state.vel.u, s.state.vel.v));
            rates = rates.push(Series::planar(label.clone(), color, pts).dashed(dash));
            let pts = traj
                .samples
                .iter()
                .map(|s| sys.rhs(&s.state).unwrap_or((f64::NAN, f64::NAN)))
                .collect::<Vec<_>>();
            accel = accel.push(Series::planar(label, color, pts).dashed(dash));
        }
    }
    out.svg("compare_3d.svg", &paths)?;
    out.svg("compare_xy.svg", &plane)?;
    out.svg("compare_xyz.svg", &xyz)?;
    out.svg("compare_polar.svg", &polar)?;
    out.svg("compare_rates.svg", &rates)?;
    out.svg("compare_accel.svg", &accel)?;
    out.report(log);
    Ok(())
}

/// Time multipliers of the nested indicatrix curves and their colors.
const MULTIPLIERS: [(f64, &str); 4] = [(1.0, BLUE), (2.0, RED), (3.0, PURPLE), (4.0, MAGENTA)];

pub fn indicatrix(cfg: &RunConfig, log: &mut String) -> Result<()> {
    let metric = RandersMetric::new(cfg.spheroid, cfg.wind.clone());
    let p = cfg.start;
    let unit = metric.indicatrix(p, cfg.n)?;

    // destinations reached along time-optimal paths after t = 1..4
    let integ = IntegratorConfig {
        t_end: 4.0,
        sample_dt: 1.0,
        ..cfg.integ
    };
    let headings: Vec<f64> = (0..cfg.n).map(|k| 2.0 * PI * k as f64 / cfg.n as f64).collect();
    let fronts = integrate_family(&cfg.spheroid, &cfg.wind, p, &headings, MetricKind::Randers, &integ)?;

    let mut out = Outputs::create(&cfg.out)?;
    let mut table = Vec::with_capacity(unit.len());
    let mut residual: f64 = 0.0;
    for (&heading, y) in headings.iter().zip(&unit) {
        let f = metric.value(p, *y)?;
        residual = residual.max((f - 1.0).abs());
        let (east, north) = cfg.spheroid.frame_components(p, *y);
        table.push(vec![heading, y.u, y.v, east, north, f]);
    }
    out.table("indicatrix.csv", &["heading", "u", "v", "east", "north", "F"], &table)?;

    let mut plane = PlotSpec::new(PlotKind::Indicatrix).title("indicatrices, t = 1..4");
    for (t, color) in MULTIPLIERS {
        let pts = unit.iter().map(|y| cfg.spheroid.frame_components(p, y.scale(t)));
        plane = plane.push(Series::planar(format!("t={t}"), color, pts).closed());
    }
    plane = plane.push(Series::planar("base point", BLACK, [(0.0, 0.0)]).markers());
    out.svg("indicatrix.svg", &plane)?;

    let mut surface = path_spec(cfg, "wavefronts on the spheroid, t = 1..4");
    for (j, (t, color)) in MULTIPLIERS.into_iter().enumerate() {
        let pts: Vec<[f64; 3]> = fronts
            .iter()
            .map(|r| match r.as_ref().ok().and_then(|traj| traj.samples.get(j + 1)) {
                Some(s) => cfg.spheroid.embed(s.state.point),
                None => [f64::NAN; 3],
            })
            .collect();
        let complete = pts.iter().all(|q| q.iter().all(|c| c.is_finite()));
        let mut series = Series::spatial(format!("t={t}"), color, pts);
        if complete {
            series = series.closed();
        }
        surface = surface.push(series);
    }
    surface = surface.push(Series::spatial("base point", BLACK, [cfg.spheroid.embed(p)]).markers());
    out.svg("indicatrix_surface.svg", &surface)?;

    say!(log, "indicatrix n={} base=({}, {}) max|F-1|={residual:.3e}", cfg.n, p.phi, p.theta);
    out.report(log);
    Ok(())
}

/// `x` rounded to four significant digits.
pub fn sig4(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let decimals = (3 - x.abs().log10().floor() as i32).max(0) as usize;
    format!("{x:.decimals$}")
}

fn departure(cfg: &RunConfig, s0: &NavState) -> Result<(f64, f64, f64)> {
    let course = course_of(&cfg.spheroid, s0)?;
    let drift = drift_of(&cfg.spheroid, &cfg.wind, s0)?;
    Ok((course, drift, speed_of(&cfg.spheroid, s0)))
}

pub fn report(cfg: &RunConfig, log: &mut String) -> Result<()> {
    let sph = cfg.spheroid;
    let heading = cfg.heading();
    let sf = initial_state_randers(&sph, &cfg.wind, cfg.start, heading)?;
    let sh = initial_state_riemannian(&sph, cfg.start, heading)?;
    let after = integrate_system(&GeodesicSystem::new(MetricKind::Randers, sph, cfg.wind.clone()), sf, &cfg.integ)?
        .into_result()
        .context("perturbed path")?;
    let before = integrate_system(&GeodesicSystem::new(MetricKind::Riemannian, sph, WindField::calm()), sh, &cfg.integ)?
        .into_result()
        .context("unperturbed path")?;
    let ch_after = channel(cfg, MetricKind::Randers, &after);
    let ch_before = channel(cfg, MetricKind::Riemannian, &before);
    let curve = speed_curve(&sph, &cfg.wind, cfg.start, cfg.n)?;
    let extremes = speed_extremes(&sph, &cfg.wind, cfg.start)?;
    let (course0, drift0, speed0) = departure(cfg, &sf)?;

    let mut out = Outputs::create(&cfg.out)?;
    out.csv("report_channel.csv", &trajectory_rows(&sph, &after, &ch_after, cfg.convention)?)?;
    let table: Vec<Vec<f64>> = curve.iter().map(|&(h, v)| vec![h, v]).collect();
    out.table("report_speed_heading.csv", &["heading", "speed"], &table)?;

    let spec = PlotSpec::new(PlotKind::SpeedVsHeading)
        .title("initial resulting speed")
        .push(Series::planar("|v0|", BLACK, curve.iter().copied()));
    out.svg("report_speed_heading.svg", &spec)?;

    let mut speeds = PlotSpec::new(PlotKind::ChannelVsTime).title("linear and angular speeds");
    for (traj, ch, dash, tag) in [(&before, &ch_before, Dash::Dashed, "before"), (&after, &ch_after, Dash::Solid, "after")] {
        let t: Vec<f64> = traj.times().collect();
        speeds = speeds
            .push(Series::planar(format!("|v| {tag}"), BLACK, t.iter().copied().zip(ch.records.iter().map(|r| r.speed))).dashed(dash))
            .push(Series::planar(format!("phi_dot {tag}"), BLUE, t.iter().copied().zip(traj.samples.iter().map(|s| s.state.vel.u))).dashed(dash))
            .push(Series::planar(format!("theta_dot {tag}"), RED, t.iter().copied().zip(traj.samples.iter().map(|s| s.state.vel.v))).dashed(dash));
    }
    out.svg("report_speeds.svg", &speeds)?;

    let mut course = PlotSpec::new(PlotKind::ChannelVsTime).title("course over ground");
    course.y_label = "course".into();
    let mut course_polar = PlotSpec::new(PlotKind::Polar).title("course over ground (angle) vs time (radius)");
    for (traj, ch, color, dash, tag) in [
        (&before, &ch_before, BLUE, Dash::Dashed, "before"),
        (&after, &ch_after, RED, Dash::Solid, "after"),
    ] {
        let t: Vec<f64> = traj.times().collect();
        let unwrapped = ch.course_unwrapped();
        course = course.push(Series::planar(tag, color, t.iter().copied().zip(unwrapped)).dashed(dash));
        let pts = ch.records.iter().map(|r| (r.course, r.t));
        course_polar = course_polar.push(Series::planar(tag, color, pts).dashed(dash));
    }
    out.svg("report_course.svg", &course)?;
    out.svg("report_course_polar.svg", &course_polar)?;

    let t: Vec<f64> = after.times().collect();
    let control = PlotSpec::new(PlotKind::ChannelVsTime)
        .title("drift, heading and course")
        .push(Series::planar("drift", BLUE, t.iter().copied().zip(ch_after.records.iter().map(|r| r.drift))).dashed(Dash::Dashed))
        .push(Series::planar("heading", BLACK, t.iter().copied().zip(ch_after.heading_unwrapped())))
        .push(Series::planar("course", RED, t.iter().copied().zip(ch_after.course_unwrapped())));
    out.svg("report_control.svg", &control)?;

    // |W|_h along the meridian through the start point
    let span = PI - 2.0 * POLE_EPS;
    let norms: Vec<Vec<f64>> = (0..cfg.n)
        .map(|k| {
            let theta = POLE_EPS + span * k as f64 / (cfg.n - 1) as f64;
            vec![theta, cfg.wind.norm(&sph, SurfacePoint::new(cfg.start.phi, theta))]
        })
        .collect();
    out.table("report_wind_norm.csv", &["theta", "wind_norm"], &norms)?;
    let mut wind = PlotSpec::new(PlotKind::ChannelVsTime)
        .title("wind norm along the meridian")
        .push(Series::planar("|W|_h", BLACK, norms.iter().map(|r| (r[0], r[1]))));
    (wind.x_label, wind.y_label) = ("theta".into(), "|W|_h".into());
    out.svg("report_wind_norm.svg", &wind)?;

    let shown = |a: f64| match cfg.convention {
        znav_core::export::AngleConvention::Parallel => a,
        znav_core::export::AngleConvention::Compass => znav_core::control::to_compass(a),
    };
    say!(log, "report heading={} deg", sig4(shown(heading).to_degrees()));
    say!(log, "  Phi0  = {} deg", sig4(shown(course0).to_degrees()));
    say!(log, "  Psi0  = {} deg", sig4(drift0.to_degrees()));
    say!(log, "  |v0|  = {}", sig4(speed0));
    say!(log, 
        "  speed over headings: min {} at {} deg, max {} at {} deg, range {}",
        sig4(extremes.min),
        sig4(shown(extremes.min_heading).to_degrees()),
        sig4(extremes.max),
        sig4(shown(extremes.max_heading).to_degrees()),
        sig4(extremes.range())
    );
    say!(log, 
        "  path: termination={} class={} max|Psi|={} deg",
        termination_label(&after.termination),
        classify_path(&after).label(),
        sig4(ch_after.max_abs_drift().to_degrees())
    );
    out.report(log);
    Ok(())
}
