//! Adaptive integration of second-order geodesic systems.
//!
//! Dormand-Prince 5(4) with a PI step-size controller. Accepted steps are
//! resampled onto a uniform output grid by the pair's dense output: a cubic
//! Hermite interpolant with a fourth-order correction.
//! Integration stops early, without chart switching, once the path cannot
//! stay outside the pole guard band.

use crate::control::initial_state_for;
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::spheroid::{check_chart, NavState, Spheroid, SurfacePoint, POLE_EPS};
use crate::spray::{GeodesicSystem, MetricKind};
use crate::wind::WindField;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub t_end: f64,
    pub max_step: f64,
    pub sample_dt: f64,
    pub pole_eps: f64,
}

impl IntegratorConfig {
    pub fn new(t_end: f64) -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            t_end,
            max_step: 0.1,
            sample_dt: 0.01_f64.min(t_end),
            pole_eps: POLE_EPS,
        }
    }

    pub fn with_sample_dt(mut self, dt: f64) -> Self {
        self.sample_dt = dt;
        self
    }

    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must be finite and positive, got {x}")))
            }
        };
        positive("rel_tol", self.rel_tol)?;
        positive("abs_tol", self.abs_tol)?;
        positive("t_end", self.t_end)?;
        positive("max_step", self.max_step)?;
        positive("sample_dt", self.sample_dt)?;
        positive("pole_eps", self.pole_eps)?;
        if self.sample_dt > self.t_end {
            return Err(Error::InvalidConfig(format!(
                "sample_dt {} exceeds t_end {}",
                self.sample_dt, self.t_end
            )));
        }
        Ok(())
    }

    /// Number of output grid points, including `t = 0`.
    pub fn sample_count(&self) -> usize {
        (self.t_end / self.sample_dt + 1e-9).floor() as usize + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    Completed,
    /// The path reached the pole guard band at time `t`.
    PoleProximity { t: f64, theta: f64 },
    /// The step size underflowed at time `t` for reasons other than a pole.
    StepFailure { t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: NavState,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Metric whose geodesic this is, when known.
    pub kind: Option<MetricKind>,
    pub samples: Vec<Sample>,
    pub termination: Termination,
    /// Last accepted integrator state; equals `(t_end, ..)` on completion.
    pub last: Sample,
    pub stats: StepStats,
    pub pole_eps: f64,
}

impl Trajectory {
    pub fn is_completed(&self) -> bool {
        self.termination == Termination::Completed
    }

    /// Turns a step failure into an error carrying the last good state.
    pub fn into_result(self) -> Result<Self> {
        match self.termination {
            Termination::StepFailure { t } => Err(Error::StepFailure {
                t,
                state: self.last.state,
            }),
            _ => Ok(self),
        }
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathClass {
    /// Approaches a pole.
    Transpolar,
    /// Winds around the polar axis with the colatitude bounded away from the poles.
    Circumpolar,
}

impl PathClass {
    pub fn label(&self) -> &'static str {
        match self {
            PathClass::Transpolar => "transpolar",
            PathClass::Circumpolar => "circumpolar",
        }
    }
}

pub fn classify_path(traj: &Trajectory) -> PathClass {
    let eps = traj.pole_eps;
    let hit_guard = matches!(traj.termination, Termination::PoleProximity { .. })
        || traj
            .samples
            .iter()
            .any(|s| check_chart(s.state.point.theta, eps).is_err());
    if hit_guard {
        PathClass::Transpolar
    } else {
        PathClass::Circumpolar
    }
}

// Dormand-Prince 5(4) tableau. The system is autonomous, so the nodes are not needed.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// Continuous extension of order four.
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

type Vec4 = [f64; 4];

fn axpy(y: &Vec4, terms: &[(f64, &Vec4)]) -> Vec4 {
    let mut out = *y;
    for (w, k) in terms {
        for i in 0..4 {
            out[i] += w * k[i];
        }
    }
    out
}

struct Stepper<'a, F> {
    rhs: &'a F,
    cfg: &'a IntegratorConfig,
    evals: usize,
}

impl<F> Stepper<'_, F>
where
    F: Fn(&NavState) -> Result<(f64, f64)>,
{
    fn deriv(&mut self, x: &Vec4) -> Result<Vec4> {
        self.evals += 1;
        let state = NavState::from_array(*x);
        check_chart(state.point.theta, self.cfg.pole_eps)?;
        let (pdd, tdd) = (self.rhs)(&state)?;
        if !(pdd.is_finite() && tdd.is_finite()) {
            return Err(Error::PoleSingularity { theta: x[1] });
        }
        Ok([x[2], x[3], pdd, tdd])
    }

    fn err_norm(&self, y0: &Vec4, y1: &Vec4, e: &Vec4) -> f64 {
        let mut acc = 0.0;
        for i in 0..4 {
            let sc = self.cfg.abs_tol + self.cfg.rel_tol * y0[i].abs().max(y1[i].abs());
            acc += (e[i] / sc).powi(2);
        }
        (acc / 4.0).sqrt()
    }

    fn initial_step(&mut self, y0: &Vec4, f0: &Vec4) -> f64 {
        let scaled = |v: &Vec4| {
            let mut acc = 0.0;
            for i in 0..4 {
                let sc = self.cfg.abs_tol + self.cfg.rel_tol * y0[i].abs();
                acc += (v[i] / sc).powi(2);
            }
            (acc / 4.0).sqrt()
        };
        let d0 = scaled(y0);
        let d1 = scaled(f0);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(self.cfg.max_step);
        let y1 = axpy(y0, &[(h0, f0)]);
        let d2 = match self.deriv(&y1) {
            Ok(f1) => {
                let diff = [f1[0] - f0[0], f1[1] - f0[1], f1[2] - f0[2], f1[3] - f0[3]];
                scaled(&diff) / h0
            }
            Err(_) => return h0 * 1e-3,
        };
        let dm = d1.max(d2);
        let h1 = if dm <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / dm).powf(0.2)
        };
        (100.0 * h0).min(h1).min(self.cfg.max_step)
    }

    /// One trial step; returns the new state, its derivative, the error
    /// estimate and the dense-output correction term.
    fn step(&mut self, y: &Vec4, k1: &Vec4, h: f64) -> Result<(Vec4, Vec4, Vec4, Vec4)> {
        let k2 = self.deriv(&axpy(y, &[(h * A21, k1)]))?;
        let k3 = self.deriv(&axpy(y, &[(h * A31, k1), (h * A32, &k2)]))?;
        let k4 = self.deriv(&axpy(y, &[(h * A41, k1), (h * A42, &k2), (h * A43, &k3)]))?;
        let k5 = self.deriv(&axpy(
            y,
            &[(h * A51, k1), (h * A52, &k2), (h * A53, &k3), (h * A54, &k4)],
        ))?;
        let k6 = self.deriv(&axpy(
            y,
            &[(h * A61, k1), (h * A62, &k2), (h * A63, &k3), (h * A64, &k4), (h * A65, &k5)],
        ))?;
        let y1 = axpy(
            y,
            &[(h * A71, k1), (h * A73, &k3), (h * A74, &k4), (h * A75, &k5), (h * A76, &k6)],
        );
        let k7 = self.deriv(&y1)?;
        let mut e = [0.0; 4];
        let mut d = [0.0; 4];
        for i in 0..4 {
            e[i] = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            d[i] = h
                * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
        }
        Ok((y1, k7, e, d))
    }
}

/// Cubic Hermite interpolant on `[t0, t0 + h]` plus the fourth-order
/// correction `d` of the embedded pair.
#[allow(clippy::too_many_arguments)]
fn dense(t0: f64, h: f64, y0: &Vec4, f0: &Vec4, y1: &Vec4, f1: &Vec4, d: &Vec4, t: f64) -> Vec4 {
    let s = (t - t0) / h;
    let s1 = 1.0 - s;
    let mut out = [0.0; 4];
    for i in 0..4 {
        let r2 = y1[i] - y0[i];
        let r3 = h * f0[i] - r2;
        let r4 = r2 - h * f1[i] - r3;
        out[i] = y0[i] + s * (r2 + s1 * (r3 + s * (r4 + s1 * d[i])));
    }
    out
}

/// Integrates `(phi, theta)'' = rhs(state)` from `s0` over `[0, cfg.t_end]`.
pub fn integrate<F>(rhs: &F, s0: NavState, cfg: &IntegratorConfig) -> Result<Trajectory>
where
    F: Fn(&NavState) -> Result<(f64, f64)>,
{
    cfg.validate()?;
    check_chart(s0.point.theta, cfg.pole_eps)?;
    let mut st = Stepper { rhs, cfg, evals: 0 };

    let n_samples = cfg.sample_count();
    let mut samples = Vec::with_capacity(n_samples);
    samples.push(Sample { t: 0.0, state: s0 });
    let mut next = 1usize;
    let grid_slack = 1e-9 * cfg.sample_dt;

    let mut y = s0.to_array();
    let mut f = st.deriv(&y)?;
    let mut t = 0.0;
    let mut h = st.initial_step(&y, &f);
    let mut fac_old: f64 = 1e-4;
    let mut stats = StepStats::default();
    let mut pole_blocked = false;

    let termination = loop {
        if t >= cfg.t_end {
            break Termination::Completed;
        }
        let h_min = 1e-13 * t.abs().max(1.0);
        if h < h_min {
            break if pole_blocked {
                Termination::PoleProximity { t, theta: y[1] }
            } else {
                Termination::StepFailure { t }
            };
        }
        let last = t + h >= cfg.t_end;
        let h_try = if last { cfg.t_end - t } else { h };

        let (y1, f1, e, d) = match st.step(&y, &f, h_try) {
            Ok(v) => v,
            Err(err) => {
                pole_blocked = matches!(err, Error::PoleSingularity { .. });
                stats.rejected += 1;
                h = h_try * 0.5;
                continue;
            }
        };
        let err = st.err_norm(&y, &y1, &e);
        if !err.is_finite() {
            stats.rejected += 1;
            h = h_try * 0.5;
            continue;
        }
        let fac11 = err.powf(EXPO1);
        if err <= 1.0 {
            let t1 = if last { cfg.t_end } else { t + h_try };
            while next < n_samples {
                let tk = next as f64 * cfg.sample_dt;
                if tk > t1 + grid_slack {
                    break;
                }
                let state = NavState::from_array(dense(t, h_try, &y, &f, &y1, &f1, &d, tk));
                samples.push(Sample { t: tk, state });
                next += 1;
            }
            stats.accepted += 1;
            pole_blocked = false;
            let fac = (fac11 / fac_old.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            fac_old = err.max(1e-4);
            t = t1;
            y = y1;
            f = f1;
            h = (h_try / fac).min(cfg.max_step);
        } else {
            stats.rejected += 1;
            h = h_try / (fac11 / SAFETY).min(1.0 / FAC_MIN);
        }
    };
    stats.rhs_evals = st.evals;

    Ok(Trajectory {
        kind: None,
        samples,
        termination,
        last: Sample {
            t,
            state: NavState::from_array(y),
        },
        stats,
        pole_eps: cfg.pole_eps,
    })
}

/// Integrates the geodesic of `sys` through `s0`.
pub fn integrate_system(sys: &GeodesicSystem, s0: NavState, cfg: &IntegratorConfig) -> Result<Trajectory> {
    let mut traj = integrate(&|s: &NavState| sys.rhs(s), s0, cfg)?;
    traj.kind = Some(sys.kind());
    Ok(traj)
}

/// One geodesic per heading, all leaving `start`. Member failures are
/// reported in place; results keep the order of `headings`.
pub fn integrate_family(
    sph: &Spheroid,
    wind: &WindField,
    start: SurfacePoint,
    headings: &[f64],
    kind: MetricKind,
    cfg: &IntegratorConfig,
) -> Result<Vec<Result<Trajectory>>> {
    integrate_family_with(Execution::default(), sph, wind, start, headings, kind, cfg)
}

pub fn integrate_family_with(
    exec: Execution,
    sph: &Spheroid,
    wind: &WindField,
    start: SurfacePoint,
    headings: &[f64],
    kind: MetricKind,
    cfg: &IntegratorConfig,
) -> Result<Vec<Result<Trajectory>>> {
    if headings.is_empty() {
        return Err(Error::InvalidConfig("heading fan is empty".into()));
    }
    cfg.validate()?;
    let sys = GeodesicSystem::new(kind, *sph, wind.clone());
    Ok(par::map(exec, headings, |&heading| {
        let s0 = initial_state_for(kind, sys.metric(), start, heading)?;
        integrate_system(&sys, s0, cfg)?.into_result()
    }))
}

/// Headings `start + k * step`, `k = 0..count`.
pub fn heading_fan(start: f64, step: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start + step * k as f64).collect()
}
