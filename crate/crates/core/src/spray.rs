//! Spray coefficients and geodesic right-hand sides for the three metrics
//! in play: the background metric `h`, the Riemannian part `alpha` of the
//! Randers metric, and the Randers metric `F` itself.
//!
//! Geodesics satisfy `y' + 2 G(x, y) = 0`. For rotation winds the closed
//! forms below are used directly; any other wind goes through
//! [`spray_numeric`], which evaluates the two-dimensional quotient formula
//! from finite-difference partials of a Lagrangian.

use crate::error::{Error, Result};
use crate::randers::RandersMetric;
use crate::spheroid::{check_chart, NavState, Spheroid, SurfacePoint, TangentVector, POLE_EPS};
use crate::wind::{WindField, WindKind};

/// `(G, H) = (G^1, G^2)`, positively 2-homogeneous in the velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SprayCoefficients {
    pub g: f64,
    pub h: f64,
}

impl SprayCoefficients {
    /// `(phi_ddot, theta_ddot) = -2 (G, H)`.
    pub fn acceleration(&self) -> (f64, f64) {
        (-2.0 * self.g, -2.0 * self.h)
    }
}

/// Shorthands shared by the closed-form Randers spray for `W = -c d/dphi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SprayAbbrevs {
    pub psi: f64,
    pub mu: f64,
    pub tau: f64,
}

impl SprayAbbrevs {
    pub fn new(sph: &Spheroid, c: f64, theta: f64, y: TangentVector) -> Self {
        let a2 = sph.a() * sph.a();
        let (s, co) = theta.sin_cos();
        let (s2, c2) = (s * s, co * co);
        let TangentVector { u, v } = y;
        let (u2, v2) = (u * u, v * v);
        let psi_sq = s2 * (-c * c * a2 * v2 * s2 + a2 * v2 + u2) + v2 * c2 * (1.0 - c * c * s2);
        let psi = psi_sq.max(0.0).sqrt();
        let mu = a2 * v2 + u2;
        let tau = 3.0 * c * u2 * psi - c * a2 * v2 * psi + 3.0 * u * mu;
        Self { psi, mu, tau }
    }
}

/// Which metric's geodesics to follow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    /// Background Riemannian metric, no wind.
    Riemannian,
    /// Riemannian part of the Randers metric.
    Alpha,
    /// Full Randers metric; its geodesics are the time-optimal paths.
    Randers,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [MetricKind::Riemannian, MetricKind::Alpha, MetricKind::Randers];

    pub fn label(&self) -> &'static str {
        match self {
            MetricKind::Riemannian => "h",
            MetricKind::Alpha => "alpha",
            MetricKind::Randers => "randers",
        }
    }
}

impl std::str::FromStr for MetricKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "h" | "riemannian" => Ok(MetricKind::Riemannian),
            "alpha" | "a" => Ok(MetricKind::Alpha),
            "randers" | "f" => Ok(MetricKind::Randers),
            other => Err(Error::InvalidConfig(format!("unknown metric kind '{other}'"))),
        }
    }
}

impl std::fmt::Display for MetricKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

fn precheck(s: &NavState) -> Result<()> {
    check_chart(s.point.theta, POLE_EPS)?;
    if s.vel.is_zero() {
        return Err(Error::ZeroVelocity);
    }
    Ok(())
}

/// Spray of the background metric, `G^i = Gamma^i_jk y^j y^k / 2`.
pub fn spray_riemannian(sph: &Spheroid, s: &NavState) -> Result<SprayCoefficients> {
    let g = sph.christoffels(s.point.theta)?;
    let TangentVector { u, v } = s.vel;
    Ok(SprayCoefficients {
        g: g.g1_12 * u * v,
        h: 0.5 * (g.g2_11 * u * u + g.g2_22 * v * v),
    })
}

/// Closed-form Randers spray for the rotation wind `W = -c d/dphi`.
pub fn spray_rotation_closed(sph: &Spheroid, c: f64, s: &NavState) -> Result<SprayCoefficients> {
    precheck(s)?;
    let theta = s.point.theta;
    let TangentVector { u, v } = s.vel;
    let a2 = sph.a() * sph.a();
    let c2 = c * c;
    let (sn, cs) = theta.sin_cos();
    let (sn2, cs2) = (sn * sn, cs * cs);
    let csc = 1.0 / sn;
    let csc2 = csc * csc;
    let cot2 = cs2 * csc2;
    let cos2t = (2.0 * theta).cos();
    let (u2, v2) = (u * u, v * v);
    let SprayAbbrevs { psi, mu, tau } = SprayAbbrevs::new(sph, c, theta, s.vel);

    let cubic = c * c2 * u * (u2 - 3.0 * a2 * v2);
    let shape = c2 * cos2t - c2 + 2.0;

    let g_num = v * cs * (c * psi + u) * (csc * csc2 * psi + c * u * csc).powi(3);
    let g_den = (csc2 - c2)
        * (cubic + csc2 * csc2 * mu * psi
            - 0.125 * v2 * cot2 * csc2 * csc2 * shape * (-4.0 * psi + 6.0 * c * u * cos2t - 6.0 * c * u)
            + c * csc2 * tau);

    let h_num = 2.0
        * sn
        * cs
        * (psi + c * u * sn2).powi(3)
        * (c2 * c2 * (2.0 * a2 - 1.0) * v2 * sn2 * sn2
            - c2 * sn2 * ((3.0 * a2 - 2.0) * v2 + u2)
            - 2.0 * c * u * psi
            + c2 * v2 * (c2 * sn2 - 1.0) * cs2
            + a2 * v2
            - u2
            - v2);
    let h_den = (c2 * sn2 - 1.0).powi(2)
        * (a2 * sn2 + cs2)
        * (v2 * cs2 * shape * (-2.0 * psi + 3.0 * c * u * cos2t - 3.0 * c * u)
            - 4.0 * sn2 * (cubic * sn2 * sn2 + mu * psi + c * tau * sn2));

    Ok(SprayCoefficients {
        g: g_num / g_den,
        h: -h_num / h_den,
    })
}

/// Closed-form spray of the Riemannian part `alpha` for `W = -c d/dphi`.
pub fn spray_alpha_closed(sph: &Spheroid, c: f64, s: &NavState) -> Result<SprayCoefficients> {
    precheck(s)?;
    let theta = s.point.theta;
    let TangentVector { u, v } = s.vel;
    let a2 = sph.a() * sph.a();
    let c2 = c * c;
    let (sn, cs) = theta.sin_cos();
    let csc2 = 1.0 / (sn * sn);
    let cot = cs / sn;
    let cos2t = (2.0 * theta).cos();
    let (u2, v2) = (u * u, v * v);
    let k = c2 + a2 - 1.0;

    let g = u * v * (c2 + csc2) * cot / (csc2 - c2);
    let h = cot * csc2 * csc2 * (c2 * cos2t * (v2 * k + u2) - (c2 - 2.0) * v2 * k - (c2 + 2.0) * u2)
        / (4.0 * (c2 - csc2).powi(2) * (a2 + cot * cot));
    Ok(SprayCoefficients { g, h })
}

/// Relative finite-difference step for the Lagrangian partials.
pub const FD_STEP: f64 = 1e-3;

/// Hessian determinants below this fraction of the squared largest Hessian
/// entry are degenerate.
pub const HESSIAN_REL_THRESHOLD: f64 = 1e-10;

const STENCIL: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];

/// Five-point first derivative of `f` along coordinate `i`.
fn d1<F>(f: &F, x: [f64; 4], i: usize, steps: &[f64; 4]) -> Result<f64>
where
    F: Fn([f64; 4]) -> Result<f64>,
{
    let mut acc = 0.0;
    for (k, w) in STENCIL {
        let mut z = x;
        z[i] += k * steps[i];
        acc += w * f(z)?;
    }
    Ok(acc / (12.0 * steps[i]))
}

fn d2<F>(f: &F, x: [f64; 4], i: usize, j: usize, steps: &[f64; 4]) -> Result<f64>
where
    F: Fn([f64; 4]) -> Result<f64>,
{
    d1(&|z| d1(f, z, i, steps), x, j, steps)
}

/// Spray of an arbitrary Lagrangian `L(x, y)`, 2-homogeneous in `y`, via the
/// two-dimensional quotient formula.
///
/// All partials of `L` in `(phi, theta, u, v)` are taken with fourth-order
/// central differences (nested for the mixed and second partials).
pub fn spray_numeric<L>(lag: &L, s: &NavState) -> Result<SprayCoefficients>
where
    L: Fn(SurfacePoint, TangentVector) -> Result<f64> + ?Sized,
{
    precheck(s)?;
    let x = s.to_array();
    let steps = [
        FD_STEP,
        FD_STEP,
        FD_STEP * x[2].abs().max(1.0),
        FD_STEP * x[3].abs().max(1.0),
    ];
    let f = |z: [f64; 4]| {
        lag(SurfacePoint::new(z[0], z[1]), TangentVector::new(z[2], z[3]))
    };
    let (phi, theta, u, v) = (0, 1, 2, 3);
    let l_phi = d1(&f, x, phi, &steps)?;
    let l_theta = d1(&f, x, theta, &steps)?;
    let l_u = d1(&f, x, u, &steps)?;
    let l_v = d1(&f, x, v, &steps)?;
    let l_uu = d2(&f, x, u, u, &steps)?;
    let l_vv = d2(&f, x, v, v, &steps)?;
    let l_uv = d2(&f, x, u, v, &steps)?;
    let l_phi_v = d2(&f, x, phi, v, &steps)?;
    let l_theta_u = d2(&f, x, theta, u, &steps)?;

    let det = l_uu * l_vv - l_uv * l_uv;
    let scale = (l_uu * l_uu).max(l_vv * l_vv).max(l_uv * l_uv);
    if !(det.abs() > HESSIAN_REL_THRESHOLD * scale) {
        return Err(Error::DegenerateHessian { det, scale });
    }
    let curl = l_phi_v - l_theta_u;
    Ok(SprayCoefficients {
        g: ((l_vv * l_phi - l_theta * l_uv) - l_v * curl) / (2.0 * det),
        h: ((l_uu * l_theta - l_phi * l_uv) + l_u * curl) / (2.0 * det),
    })
}

/// Geodesic vector field for one metric kind over fixed navigation data.
#[derive(Debug, Clone)]
pub struct GeodesicSystem {
    kind: MetricKind,
    metric: RandersMetric,
}

impl GeodesicSystem {
    pub fn new(kind: MetricKind, sph: Spheroid, wind: WindField) -> Self {
        Self {
            kind,
            metric: RandersMetric::new(sph, wind),
        }
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    pub fn spheroid(&self) -> &Spheroid {
        self.metric.spheroid()
    }

    pub fn wind(&self) -> &WindField {
        self.metric.wind()
    }

    pub fn metric(&self) -> &RandersMetric {
        &self.metric
    }

    pub fn spray(&self, s: &NavState) -> Result<SprayCoefficients> {
        let sph = self.metric.spheroid();
        match (self.kind, self.metric.wind().kind()) {
            (MetricKind::Riemannian, _) => spray_riemannian(sph, s),
            (MetricKind::Alpha, WindKind::Rotation(c)) => spray_alpha_closed(sph, c, s),
            (MetricKind::Randers, WindKind::Rotation(c)) => spray_rotation_closed(sph, c, s),
            (MetricKind::Alpha, WindKind::Custom) => {
                spray_numeric(&|p, y| self.metric.alpha_lagrangian(p, y), s)
            }
            (MetricKind::Randers, WindKind::Custom) => {
                spray_numeric(&|p, y| self.metric.lagrangian(p, y), s)
            }
        }
    }

    /// Accelerations `(phi_ddot, theta_ddot)`.
    pub fn rhs(&self, s: &NavState) -> Result<(f64, f64)> {
        Ok(self.spray(s)?.acceleration())
    }

    /// The quantity this flow conserves: `|y|_h`, `alpha(y)` or `F(y)`.
    pub fn conserved_norm(&self, s: &NavState) -> Result<f64> {
        match self.kind {
            MetricKind::Riemannian => Ok(self.metric.spheroid().norm(s.point, s.vel)),
            MetricKind::Alpha => self.metric.alpha(s.point, s.vel),
            MetricKind::Randers => self.metric.value(s.point, s.vel),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const C: f64 = 5.0 / 7.0;

    fn rel_err(a: SprayCoefficients, b: SprayCoefficients) -> f64 {
        let scale = b.g.abs().max(b.h.abs());
        (a.g - b.g).abs().max((a.h - b.h).abs()) / scale
    }

    #[test]
    fn round_sphere_numeric_matches_christoffels() {
        let sphere = Spheroid::new(1.0).unwrap();
        let lag = |p: SurfacePoint, y: TangentVector| Ok(0.5 * sphere.norm_sq(p, y));
        for s in [
            NavState::new(0.0, 0.8, 0.3, -0.6),
            NavState::new(1.0, 2.2, -1.1, 0.2),
            NavState::new(-3.0, 1.4, 0.05, 0.9),
        ] {
            let num = spray_numeric(&lag, &s).unwrap();
            let (pd, td) = sphere.riemannian_rhs(&s).unwrap();
            let (npd, ntd) = num.acceleration();
            assert!((pd - npd).abs() < 1e-6 * pd.abs().max(1.0));
            assert!((td - ntd).abs() < 1e-6 * td.abs().max(1.0));
        }
    }

    #[test]
    fn numeric_matches_closed_rotation() {
        let sph = Spheroid::new(0.75).unwrap();
        let m = RandersMetric::new(sph, WindField::rotation(C).unwrap());
        let s = NavState::new(0.3, 1.2, 0.4, -0.5);
        let num = spray_numeric(&|p, y| m.lagrangian(p, y), &s).unwrap();
        let closed = spray_rotation_closed(&sph, C, &s).unwrap();
        assert!(rel_err(num, closed) < 1e-6);
        let num = spray_numeric(&|p, y| m.alpha_lagrangian(p, y), &s).unwrap();
        let closed = spray_alpha_closed(&sph, C, &s).unwrap();
        assert!(rel_err(num, closed) < 1e-6);
    }

    #[test]
    fn numeric_is_two_homogeneous() {
        let sph = Spheroid::new(0.75).unwrap();
        let m = RandersMetric::new(sph, WindField::rotation(C).unwrap());
        let s = NavState::new(0.3, 1.2, 0.4, -0.5);
        let mut s2 = s;
        s2.vel = s.vel.scale(2.0);
        let a = spray_numeric(&|p, y| m.lagrangian(p, y), &s).unwrap();
        let b = spray_numeric(&|p, y| m.lagrangian(p, y), &s2).unwrap();
        let scaled = SprayCoefficients { g: 4.0 * a.g, h: 4.0 * a.h };
        assert!(rel_err(b, scaled) < 1e-6);
    }

    #[test]
    fn zero_wind_collapses_to_h() {
        let sph = Spheroid::new(0.75).unwrap();
        for s in [NavState::new(0.0, 0.7, 0.9, 0.3), NavState::new(2.0, 2.5, -0.2, -1.3)] {
            let h = spray_riemannian(&sph, &s).unwrap();
            for other in [
                spray_rotation_closed(&sph, 0.0, &s).unwrap(),
                spray_alpha_closed(&sph, 0.0, &s).unwrap(),
            ] {
                assert!((other.g - h.g).abs() <= 1e-12 * h.g.abs().max(1.0));
                assert!((other.h - h.h).abs() <= 1e-12 * h.h.abs().max(1.0));
            }
        }
    }

    #[test]
    fn equator_is_invariant_under_rotation_wind() {
        let sph = Spheroid::new(0.75).unwrap();
        for u in [-1.5, -0.2, 0.7] {
            let s = NavState::new(0.0, FRAC_PI_2, u, 0.0);
            let sp = spray_rotation_closed(&sph, C, &s).unwrap();
            assert!(sp.h.abs() < 1e-14 && sp.g.abs() < 1e-14);
        }
    }

    #[test]
    fn geodesic_rhs_dispatch() {
        let sph = Spheroid::new(0.75).unwrap();
        let east = NavState::new(0.0, FRAC_PI_2, 1.0, 0.0);
        let (pd, td) = GeodesicSystem::new(MetricKind::Riemannian, sph, WindField::calm())
            .rhs(&east)
            .unwrap();
        assert!(pd.abs() < 1e-15 && td.abs() < 1e-15);

        let s = NavState::new(0.0, FRAC_PI_2, -3.0 / 14.0, -2.0 / 3f64.sqrt());
        let sys = GeodesicSystem::new(MetricKind::Randers, sph, WindField::rotation(C).unwrap());
        let (pd, td) = sys.rhs(&s).unwrap();
        assert!(pd.is_finite() && td.is_finite());

        let tiny = WindField::rotation(1e-14).unwrap();
        let s = NavState::new(0.1, 0.9, 0.4, 0.8);
        let a = GeodesicSystem::new(MetricKind::Alpha, sph, tiny).rhs(&s).unwrap();
        let h = GeodesicSystem::new(MetricKind::Riemannian, sph, WindField::calm()).rhs(&s).unwrap();
        assert!((a.0 - h.0).abs() < 1e-12 && (a.1 - h.1).abs() < 1e-12);
    }

    #[test]
    fn custom_wind_routes_through_numeric_spray() {
        let sph = Spheroid::new(0.75).unwrap();
        // a rotation supplied as a custom field must give the closed-form answer
        let custom = WindField::custom(|_| TangentVector::new(-C, 0.0));
        let s = NavState::new(0.5, 1.3, -0.3, 0.6);
        let num = GeodesicSystem::new(MetricKind::Randers, sph, custom).spray(&s).unwrap();
        let closed = spray_rotation_closed(&sph, C, &s).unwrap();
        assert!(rel_err(num, closed) < 1e-6);
    }

    #[test]
    fn error_paths() {
        let sph = Spheroid::new(0.75).unwrap();
        let polar = NavState::new(0.0, 1e-7, 1.0, 0.0);
        assert!(matches!(
            spray_rotation_closed(&sph, C, &polar),
            Err(Error::PoleSingularity { .. })
        ));
        assert!(spray_alpha_closed(&sph, C, &polar).is_err());
        let still = NavState::new(0.0, 1.0, 0.0, 0.0);
        assert!(matches!(spray_rotation_closed(&sph, C, &still), Err(Error::ZeroVelocity)));
        // a Lagrangian with a rank-one Hessian in y
        let degenerate = |_p: SurfacePoint, y: TangentVector| Ok(0.5 * y.u * y.u);
        assert!(matches!(
            spray_numeric(&degenerate, &NavState::new(0.0, 1.0, 1.0, 0.5)),
            Err(Error::DegenerateHessian { .. })
        ));
        assert!("banana".parse::<MetricKind>().is_err());
        assert_eq!("alpha".parse::<MetricKind>().unwrap(), MetricKind::Alpha);
    }

    proptest! {
        #[test]
        fn closed_sprays_are_two_homogeneous(
            a in 0.4f64..1.6, c in -0.9f64..0.9, theta in 0.1f64..(PI - 0.1),
            dir in 0.0f64..(2.0 * PI), r in 0.2f64..2.0,
        ) {
            let sph = Spheroid::new(a).unwrap();
            let s = NavState::new(0.0, theta, r * dir.cos(), r * dir.sin());
            for k in [0.5, 2.0, 3.0] {
                let mut sk = s;
                sk.vel = s.vel.scale(k);
                for f in [spray_rotation_closed, spray_alpha_closed] {
                    let base = f(&sph, c, &s).unwrap();
                    let scaled = f(&sph, c, &sk).unwrap();
                    let expect = SprayCoefficients { g: k * k * base.g, h: k * k * base.h };
                    prop_assert!(rel_err(scaled, expect) < 1e-6);
                }
                let base = spray_riemannian(&sph, &s).unwrap();
                let scaled = spray_riemannian(&sph, &sk).unwrap();
                let expect = SprayCoefficients { g: k * k * base.g, h: k * k * base.h };
                prop_assert!(rel_err(scaled, expect) < 1e-6);
            }
        }
    }
}
