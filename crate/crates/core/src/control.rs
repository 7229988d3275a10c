//! The navigation control channel: heading, course over ground, drift and
//! resulting speed.
//!
//! All angles are measured counterclockwise from the local parallel (east),
//! so `pi/2` points north along the meridian. The heading is the direction of
//! the craft's velocity relative to the medium, the course is the direction
//! of the resulting (ground) velocity, and the drift is `heading - course`
//! wrapped to `(-pi, pi]`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::integrator::Trajectory;
use crate::par::{self, Execution};
use crate::randers::RandersMetric;
use crate::spheroid::{check_chart, wrap_pi, wrap_two_pi, NavState, Spheroid, SurfacePoint, TangentVector, POLE_EPS};
use crate::spray::MetricKind;
use crate::wind::{check_mild_at, WindField};

/// Velocities with h-norm below this are treated as zero.
const ZERO_SPEED: f64 = 1e-14;

/// One sample of the control channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlRecord {
    pub t: f64,
    /// Heading in `[0, 2pi)`.
    pub heading: f64,
    /// Course over ground in `[0, 2pi)`.
    pub course: f64,
    /// Drift `heading - course` in `(-pi, pi]`.
    pub drift: f64,
    /// Resulting speed `|v|_h`.
    pub speed: f64,
}

/// Initial state of a time-optimal path leaving `p0` with heading `heading0`.
pub fn initial_state_randers(
    sph: &Spheroid,
    wind: &WindField,
    p0: SurfacePoint,
    heading0: f64,
) -> Result<NavState> {
    check_chart(p0.theta, POLE_EPS)?;
    check_mild_at(sph, wind, p0)?;
    let vel = wind.at(p0) + sph.unit_vector(p0, heading0)?;
    Ok(NavState { point: p0, vel })
}

/// Unit-speed initial state of an unperturbed geodesic.
pub fn initial_state_riemannian(sph: &Spheroid, p0: SurfacePoint, heading0: f64) -> Result<NavState> {
    check_chart(p0.theta, POLE_EPS)?;
    Ok(NavState {
        point: p0,
        vel: sph.unit_vector(p0, heading0)?,
    })
}

/// Initial state pointing along `heading0` with unit `alpha`-length.
pub fn initial_state_alpha(metric: &RandersMetric, p0: SurfacePoint, heading0: f64) -> Result<NavState> {
    let s = initial_state_riemannian(metric.spheroid(), p0, heading0)?;
    let alpha = metric.alpha(p0, s.vel)?;
    Ok(NavState {
        point: p0,
        vel: s.vel.scale(1.0 / alpha),
    })
}

/// Seeds a geodesic of `kind` from a heading.
pub fn initial_state_for(
    kind: MetricKind,
    metric: &RandersMetric,
    p0: SurfacePoint,
    heading0: f64,
) -> Result<NavState> {
    match kind {
        MetricKind::Riemannian => initial_state_riemannian(metric.spheroid(), p0, heading0),
        MetricKind::Alpha => initial_state_alpha(metric, p0, heading0),
        MetricKind::Randers => initial_state_randers(metric.spheroid(), metric.wind(), p0, heading0),
    }
}

fn direction(east: f64, north: f64) -> f64 {
    wrap_two_pi(north.atan2(east))
}

/// Heading (optimal control) recovered from a state on a time-optimal path.
pub fn heading_of(sph: &Spheroid, wind: &WindField, s: &NavState) -> Result<f64> {
    let rel = s.vel - wind.at(s.point);
    if sph.norm(s.point, rel) < ZERO_SPEED {
        return Err(Error::ZeroRelativeVelocity);
    }
    let (east, north) = sph.frame_components(s.point, rel);
    Ok(direction(east, north))
}

/// Course over ground: direction of the resulting velocity.
pub fn course_of(sph: &Spheroid, s: &NavState) -> Result<f64> {
    let speed = speed_of(sph, s);
    if speed < ZERO_SPEED {
        return Err(Error::ZeroVelocity);
    }
    let (east, north) = sph.frame_components(s.point, s.vel);
    Ok(direction(east / speed, north / speed))
}

/// Drift angle `heading - course`, wrapped to `(-pi, pi]`.
pub fn drift_of(sph: &Spheroid, wind: &WindField, s: &NavState) -> Result<f64> {
    let heading = heading_of(sph, wind, s)?;
    let course = course_of(sph, s)?;
    Ok(wrap_pi(heading - course))
}

/// `cos(drift)` by the two algebraic routes: the inner product of relative and
/// resulting velocity, and the law-of-cosines form through `lambda`. Both
/// assume a unit relative velocity.
pub fn drift_cosines(sph: &Spheroid, wind: &WindField, s: &NavState) -> Result<(f64, f64)> {
    let speed = speed_of(sph, s);
    if speed < ZERO_SPEED {
        return Err(Error::ZeroVelocity);
    }
    let (h11, h22) = sph.metric(s.point.theta);
    let w = wind.at(s.point);
    let TangentVector { u, v } = s.vel;
    let by_inner = (u * (u - w.u) * h11 + v * (v - w.v) * h22) / speed;
    let by_cosines = (1.0 + h11 * (u * u - w.u * w.u) + h22 * (v * v - w.v * w.v)) / (2.0 * speed);
    Ok((by_inner, by_cosines))
}

/// Drift for the rotation wind `W = -c d/dphi`, signed by `sgn(c theta_dot)`.
pub fn drift_rotation(sph: &Spheroid, c: f64, s: &NavState) -> Result<f64> {
    let speed = speed_of(sph, s);
    if speed < ZERO_SPEED {
        return Err(Error::ZeroVelocity);
    }
    let (h11, h22) = sph.metric(s.point.theta);
    let TangentVector { u, v } = s.vel;
    let cos = (u * (u + c) * h11 + v * v * h22) / speed;
    let cv = c * v;
    let sign = if cv > 0.0 {
        1.0
    } else if cv < 0.0 {
        -1.0
    } else {
        0.0
    };
    Ok(sign * cos.clamp(-1.0, 1.0).acos())
}

/// Resulting speed `|v|_h`.
pub fn speed_of(sph: &Spheroid, s: &NavState) -> f64 {
    sph.norm(s.point, s.vel)
}

/// Resulting speed at departure as a function of the initial heading.
pub fn initial_speed_vs_heading(
    sph: &Spheroid,
    wind: &WindField,
    p0: SurfacePoint,
    heading0: f64,
) -> Result<f64> {
    check_chart(p0.theta, POLE_EPS)?;
    check_mild_at(sph, wind, p0)?;
    let w = wind.at(p0);
    let st = p0.theta.sin();
    let m = sph.meridian_scale(p0.theta);
    let (sh, ch) = heading0.sin_cos();
    let sq = 1.0 + (w.u * st).powi(2) + 2.0 * w.u * st * ch + (w.v * m).powi(2) - 2.0 * w.v * sh * m;
    Ok(sq.max(0.0).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpeedExtremes {
    pub min: f64,
    pub min_heading: f64,
    pub max: f64,
    pub max_heading: f64,
}

impl SpeedExtremes {
    pub fn range(&self) -> f64 {
        self.max - self.min
    }
}

/// Extremes of [`initial_speed_vs_heading`] over all headings.
///
/// The speed is largest when heading with the wind and smallest heading
/// straight into it, giving `1 +- |W|_h`.
pub fn speed_extremes(sph: &Spheroid, wind: &WindField, p0: SurfacePoint) -> Result<SpeedExtremes> {
    let norm = check_mild_at(sph, wind, p0)?;
    check_chart(p0.theta, POLE_EPS)?;
    let (east, north) = sph.frame_components(p0, wind.at(p0));
    let downwind = if norm > 0.0 { direction(east, north) } else { 0.0 };
    let max_heading = downwind;
    let min_heading = wrap_two_pi(downwind + PI);
    Ok(SpeedExtremes {
        min: initial_speed_vs_heading(sph, wind, p0, min_heading)?,
        min_heading,
        max: initial_speed_vs_heading(sph, wind, p0, max_heading)?,
        max_heading,
    })
}

/// Samples [`initial_speed_vs_heading`] at `n` equally spaced headings.
pub fn speed_curve(sph: &Spheroid, wind: &WindField, p0: SurfacePoint, n: usize) -> Result<Vec<(f64, f64)>> {
    (0..n)
        .map(|k| {
            let h = 2.0 * PI * k as f64 / n as f64;
            Ok((h, initial_speed_vs_heading(sph, wind, p0, h)?))
        })
        .collect()
}

/// Converts a counterclockwise-from-east angle to a clockwise-from-north
/// azimuth in `[0, 2pi)`.
pub fn to_compass(angle: f64) -> f64 {
    wrap_two_pi(FRAC_PI_2 - angle)
}

/// Per-sample control records along a trajectory.
#[derive(Debug, Clone, Default)]
pub struct ControlChannel {
    pub records: Vec<ControlRecord>,
    /// Times at which the channel could not be evaluated; their records carry NaN.
    pub gaps: Vec<f64>,
}

impl ControlChannel {
    pub fn heading_unwrapped(&self) -> Vec<f64> {
        unwrap_angles(self.records.iter().map(|r| r.heading))
    }

    pub fn course_unwrapped(&self) -> Vec<f64> {
        unwrap_angles(self.records.iter().map(|r| r.course))
    }

    pub fn max_abs_drift(&self) -> f64 {
        self.records
            .iter()
            .map(|r| r.drift.abs())
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max)
    }
}

pub fn record_for(sph: &Spheroid, wind: &WindField, t: f64, s: &NavState) -> Result<ControlRecord> {
    let heading = heading_of(sph, wind, s)?;
    let course = course_of(sph, s)?;
    Ok(ControlRecord {
        t,
        heading,
        course,
        drift: wrap_pi(heading - course),
        speed: speed_of(sph, s),
    })
}

pub fn control_channel(sph: &Spheroid, wind: &WindField, traj: &Trajectory) -> ControlChannel {
    control_channel_with(Execution::default(), sph, wind, traj)
}

pub fn control_channel_with(
    exec: Execution,
    sph: &Spheroid,
    wind: &WindField,
    traj: &Trajectory,
) -> ControlChannel {
    let results = par::map(exec, &traj.samples, |smp| {
        record_for(sph, wind, smp.t, &smp.state).map_err(|_| smp.t)
    });
    let mut channel = ControlChannel::default();
    for (r, smp) in results.into_iter().zip(&traj.samples) {
        match r {
            Ok(rec) => channel.records.push(rec),
            Err(t) => {
                channel.gaps.push(t);
                channel.records.push(ControlRecord {
                    t,
                    heading: f64::NAN,
                    course: f64::NAN,
                    drift: f64::NAN,
                    speed: speed_of(sph, &smp.state),
                });
            }
        }
    }
    channel
}

/// Removes `2pi` jumps so the angle series is continuous. NaN gaps are kept
/// and do not reset the running offset.
pub fn unwrap_angles(angles: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut out = Vec::new();
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for a in angles {
        if !a.is_finite() {
            out.push(a);
            continue;
        }
        if let Some(p) = prev {
            let jump = a - p;
            if jump > PI {
                offset -= 2.0 * PI;
            } else if jump < -PI {
                offset += 2.0 * PI;
            }
        }
        prev = Some(a);
        out.push(a + offset);
    }
    out
}
