//! Induced Riemannian geometry of the spheroid with semiaxes `(1, 1, a)`.
//!
//! Points are addressed in the spherical chart `(phi, theta)`: `phi` is the
//! azimuth and `theta` the colatitude measured from the north pole. The chart
//! degenerates at both poles, so every chart-based operation rejects
//! colatitudes inside the pole guard band.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Default half-width of the excluded band around each pole, in radians.
pub const POLE_EPS: f64 = 1e-6;

/// A position on the surface, in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    /// Azimuth. Stored unwrapped so winding counts survive integration.
    pub phi: f64,
    /// Colatitude (inclination), `0` at the north pole.
    pub theta: f64,
}

impl SurfacePoint {
    pub const fn new(phi: f64, theta: f64) -> Self {
        Self { phi, theta }
    }

    /// Azimuth reduced to `[0, 2pi)`.
    pub fn wrapped_phi(&self) -> f64 {
        wrap_two_pi(self.phi)
    }
}

/// Coordinate components of a tangent vector: `u = dphi/dt`, `v = dtheta/dt`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TangentVector {
    pub u: f64,
    pub v: f64,
}

impl TangentVector {
    pub const ZERO: TangentVector = TangentVector { u: 0.0, v: 0.0 };

    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(k * self.u, k * self.v)
    }

    pub fn is_zero(&self) -> bool {
        self.u == 0.0 && self.v == 0.0
    }
}

impl std::ops::Add for TangentVector {
    type Output = TangentVector;

    fn add(self, rhs: Self) -> Self {
        Self::new(self.u + rhs.u, self.v + rhs.v)
    }
}

impl std::ops::Sub for TangentVector {
    type Output = TangentVector;

    fn sub(self, rhs: Self) -> Self {
        Self::new(self.u - rhs.u, self.v - rhs.v)
    }
}

/// Position plus coordinate velocity; the state of every geodesic ODE here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NavState {
    pub point: SurfacePoint,
    pub vel: TangentVector,
}

impl NavState {
    pub const fn new(phi: f64, theta: f64, phi_dot: f64, theta_dot: f64) -> Self {
        Self {
            point: SurfacePoint::new(phi, theta),
            vel: TangentVector::new(phi_dot, theta_dot),
        }
    }

    pub(crate) fn to_array(self) -> [f64; 4] {
        [self.point.phi, self.point.theta, self.vel.u, self.vel.v]
    }

    pub(crate) fn from_array(x: [f64; 4]) -> Self {
        Self::new(x[0], x[1], x[2], x[3])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeClass {
    Oblate,
    Sphere,
    Prolate,
}

/// Nonzero Christoffel symbols of the second kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Christoffels {
    /// `Gamma^1_12 = Gamma^1_21`
    pub g1_12: f64,
    /// `Gamma^2_11`
    pub g2_11: f64,
    /// `Gamma^2_22`
    pub g2_22: f64,
}

/// Ellipsoid of revolution with equatorial radius 1 and polar semiaxis `a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spheroid {
    a: f64,
}

impl Spheroid {
    pub fn new(a: f64) -> Result<Self> {
        if a.is_finite() && a > 0.0 {
            Ok(Self { a })
        } else {
            Err(Error::InvalidShape(a))
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn shape_class(&self) -> ShapeClass {
        if self.a < 1.0 {
            ShapeClass::Oblate
        } else if self.a > 1.0 {
            ShapeClass::Prolate
        } else {
            ShapeClass::Sphere
        }
    }

    /// Diagonal metric components `(h11, h22)`; `h12 = h21 = 0`.
    pub fn metric(&self, theta: f64) -> (f64, f64) {
        let (s, c) = theta.sin_cos();
        (s * s, self.meridian_factor_sq(s, c))
    }

    #[inline]
    fn meridian_factor_sq(&self, s: f64, c: f64) -> f64 {
        c * c + self.a * self.a * s * s
    }

    /// `sqrt(h22)`: length of the unit theta-increment along a meridian.
    pub fn meridian_scale(&self, theta: f64) -> f64 {
        self.metric(theta).1.sqrt()
    }

    pub fn norm_sq(&self, p: SurfacePoint, y: TangentVector) -> f64 {
        let (h11, h22) = self.metric(p.theta);
        y.u * y.u * h11 + y.v * y.v * h22
    }

    /// Riemannian length `|y|_h` of a tangent vector at `p`.
    pub fn norm(&self, p: SurfacePoint, y: TangentVector) -> f64 {
        self.norm_sq(p, y).sqrt()
    }

    pub fn inner(&self, p: SurfacePoint, x: TangentVector, y: TangentVector) -> f64 {
        let (h11, h22) = self.metric(p.theta);
        x.u * y.u * h11 + x.v * y.v * h22
    }

    pub fn christoffels(&self, theta: f64) -> Result<Christoffels> {
        check_chart(theta, POLE_EPS)?;
        let (s, c) = theta.sin_cos();
        let d = self.meridian_factor_sq(s, c);
        Ok(Christoffels {
            g1_12: c / s,
            g2_11: -s * c / d,
            g2_22: (self.a * self.a - 1.0) * s * c / d,
        })
    }

    /// Accelerations `(phi_ddot, theta_ddot)` of the unperturbed geodesic flow.
    pub fn riemannian_rhs(&self, s: &NavState) -> Result<(f64, f64)> {
        let theta = s.point.theta;
        check_chart(theta, POLE_EPS)?;
        let (sn, cs) = theta.sin_cos();
        let TangentVector { u, v } = s.vel;
        let phi_ddot = -2.0 * v * u * cs / sn;
        let theta_ddot = -sn * cs * ((self.a * self.a - 1.0) * v * v - u * u)
            / self.meridian_factor_sq(sn, cs);
        Ok((phi_ddot, theta_ddot))
    }

    /// Cartesian embedding `(x, y, z)` in R^3.
    pub fn embed(&self, p: SurfacePoint) -> [f64; 3] {
        let (st, ct) = p.theta.sin_cos();
        let (sp, cp) = p.phi.sin_cos();
        [st * cp, st * sp, self.a * ct]
    }

    /// `sin^2(theta) * phi_dot`, conserved along h-geodesics.
    pub fn clairaut_invariant(&self, s: &NavState) -> f64 {
        let st = s.point.theta.sin();
        st * st * s.vel.u
    }

    /// Unit vectors of the local orthonormal frame expressed in coordinates:
    /// `e_east` along the parallel (increasing phi) and `e_north` along the
    /// meridian towards the north pole (decreasing theta).
    pub fn frame(&self, p: SurfacePoint) -> (TangentVector, TangentVector) {
        let (h11, h22) = self.metric(p.theta);
        (
            TangentVector::new(1.0 / h11.sqrt(), 0.0),
            TangentVector::new(0.0, -1.0 / h22.sqrt()),
        )
    }

    /// Components `(east, north)` of `y` in the orthonormal frame.
    pub fn frame_components(&self, p: SurfacePoint, y: TangentVector) -> (f64, f64) {
        let (h11, h22) = self.metric(p.theta);
        (y.u * h11.sqrt(), -y.v * h22.sqrt())
    }

    /// Unit h-vector whose angle counterclockwise from the local parallel is
    /// `heading`.
    pub fn unit_vector(&self, p: SurfacePoint, heading: f64) -> Result<TangentVector> {
        check_chart(p.theta, POLE_EPS)?;
        let (sh, ch) = heading.sin_cos();
        Ok(TangentVector::new(
            ch / p.theta.sin(),
            -sh / self.meridian_scale(p.theta),
        ))
    }
}

/// Rejects colatitudes within `eps` of either pole.
pub fn check_chart(theta: f64, eps: f64) -> Result<()> {
    if theta.is_finite() && theta > eps && theta < PI - eps {
        Ok(())
    } else {
        Err(Error::PoleSingularity { theta })
    }
}

pub fn wrap_two_pi(x: f64) -> f64 {
    let w = x.rem_euclid(2.0 * PI);
    // rem_euclid can round up to exactly 2pi for tiny negative inputs
    if w >= 2.0 * PI {
        0.0
    } else {
        w
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_pi(x: f64) -> f64 {
    let w = wrap_two_pi(x);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    fn oblate() -> Spheroid {
        Spheroid::new(0.75).unwrap()
    }

    #[test]
    fn rejects_bad_shape() {
        assert!(matches!(Spheroid::new(0.0), Err(Error::InvalidShape(_))));
        assert!(matches!(Spheroid::new(-1.0), Err(Error::InvalidShape(_))));
        assert!(Spheroid::new(f64::NAN).is_err());
        assert_eq!(oblate().shape_class(), ShapeClass::Oblate);
        assert_eq!(Spheroid::new(1.5).unwrap().shape_class(), ShapeClass::Prolate);
        assert_eq!(Spheroid::new(1.0).unwrap().shape_class(), ShapeClass::Sphere);
    }

    #[test]
    fn metric_examples() {
        let (h11, h22) = oblate().metric(FRAC_PI_2);
        assert_relative_eq!(h11, 1.0);
        assert_relative_eq!(h22, 9.0 / 16.0);
        assert_eq!(oblate().metric(0.0), (0.0, 1.0));
        let (h11, h22) = Spheroid::new(1.0).unwrap().metric(PI / 3.0);
        assert_relative_eq!(h11, 0.75, epsilon = 1e-15);
        assert_relative_eq!(h22, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn norms() {
        let p = SurfacePoint::new(0.0, FRAC_PI_2);
        let s3 = 3f64.sqrt();
        assert_relative_eq!(
            oblate().norm(p, TangentVector::new(0.5, -2.0 / s3)),
            1.0,
            epsilon = 1e-15
        );
        assert_eq!(oblate().norm(p, TangentVector::ZERO), 0.0);
        assert_relative_eq!(
            oblate().norm(p, TangentVector::new(-17.0 / 14.0, -2.0 / s3)),
            109f64.sqrt() / 7.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn christoffel_examples() {
        let g = oblate().christoffels(FRAC_PI_2).unwrap();
        assert!(g.g1_12.abs() < 1e-15 && g.g2_11.abs() < 1e-15 && g.g2_22.abs() < 1e-15);
        let g = Spheroid::new(1.0).unwrap().christoffels(PI / 4.0).unwrap();
        assert_relative_eq!(g.g1_12, 1.0, epsilon = 1e-15);
        assert_relative_eq!(g.g2_11, -0.5, epsilon = 1e-15);
        assert_eq!(g.g2_22, 0.0);
        assert!(matches!(
            oblate().christoffels(1e-7),
            Err(Error::PoleSingularity { .. })
        ));
        assert!(oblate().christoffels(PI).is_err());
    }

    #[test]
    fn christoffels_match_metric_derivatives() {
        // Gamma from finite differences of the metric components.
        for a in [0.5, 0.75, 1.0, 1.6] {
            let sph = Spheroid::new(a).unwrap();
            for k in 0..60 {
                let theta = 0.1 + (PI - 0.2) * k as f64 / 59.0;
                let d = 1e-5;
                let (h11p, h22p) = sph.metric(theta + d);
                let (h11m, h22m) = sph.metric(theta - d);
                let (h11, h22) = sph.metric(theta);
                let dh11 = (h11p - h11m) / (2.0 * d);
                let dh22 = (h22p - h22m) / (2.0 * d);
                let g = sph.christoffels(theta).unwrap();
                let close = |x: f64, y: f64| (x - y).abs() <= 1e-6 * y.abs().max(1e-3);
                assert!(close(g.g1_12, dh11 / (2.0 * h11)), "{a} {theta}");
                assert!(close(g.g2_11, -dh11 / (2.0 * h22)), "{a} {theta}");
                assert!(close(g.g2_22, dh22 / (2.0 * h22)), "{a} {theta}");
            }
        }
    }

    #[test]
    fn rhs_examples() {
        let s = NavState::new(0.0, FRAC_PI_2, 1.0, 0.0);
        let (pd, td) = oblate().riemannian_rhs(&s).unwrap();
        assert!(pd.abs() < 1e-15 && td.abs() < 1e-15);

        let s = NavState::new(0.0, FRAC_PI_2, 0.5, -2.0 / 3f64.sqrt());
        let (pd, td) = oblate().riemannian_rhs(&s).unwrap();
        assert!(pd.abs() < 1e-15);
        assert!(td.abs() < 1e-15);

        // round sphere: phi'' = -2 u v cot, theta'' = sin cos u^2
        let sphere = Spheroid::new(1.0).unwrap();
        for &(th, u, v) in &[(0.4, 0.3, -1.2), (2.1, -0.8, 0.5), (1.0, 1.0, 1.0)] {
            let (pd, td) = sphere.riemannian_rhs(&NavState::new(0.7, th, u, v)).unwrap();
            assert_relative_eq!(pd, -2.0 * u * v / th.tan(), max_relative = 1e-14);
            assert_relative_eq!(td, th.sin() * th.cos() * u * u, max_relative = 1e-14);
        }
        assert!(oblate()
            .riemannian_rhs(&NavState::new(0.0, 0.0, 1.0, 0.0))
            .is_err());
    }

    #[test]
    fn rhs_invariant_under_time_reversal() {
        let s = NavState::new(0.2, 1.1, 0.4, -0.9);
        let r = NavState::new(0.2, 1.1, -0.4, 0.9);
        assert_eq!(
            oblate().riemannian_rhs(&s).unwrap(),
            oblate().riemannian_rhs(&r).unwrap()
        );
    }

    #[test]
    fn embedding() {
        let sph = oblate();
        let e = sph.embed(SurfacePoint::new(0.0, FRAC_PI_2));
        assert_relative_eq!(e[0], 1.0);
        assert!(e[1].abs() < 1e-16 && e[2].abs() < 1e-16);
        assert_eq!(sph.embed(SurfacePoint::new(2.3, 0.0)), [0.0, 0.0, 0.75]);
        let e = sph.embed(SurfacePoint::new(FRAC_PI_2, FRAC_PI_2));
        assert!(e[0].abs() < 1e-16);
        assert_relative_eq!(e[1], 1.0);
        for k in 0..100 {
            let p = SurfacePoint::new(0.37 * k as f64, 0.031 * k as f64);
            let [x, y, z] = sph.embed(p);
            assert!((x * x + y * y + z * z / 0.5625 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn clairaut_examples() {
        let sph = oblate();
        assert_eq!(sph.clairaut_invariant(&NavState::new(0.0, FRAC_PI_2, 1.0, 0.0)), 1.0);
        assert_relative_eq!(
            sph.clairaut_invariant(&NavState::new(0.0, FRAC_PI_2, 0.5, -2.0 / 3f64.sqrt())),
            0.5
        );
    }

    #[test]
    fn equator_unit_vectors_satisfy_reduced_condition() {
        let sph = oblate();
        let p = SurfacePoint::new(0.0, FRAC_PI_2);
        for k in 0..32 {
            let y = sph.unit_vector(p, k as f64 * PI / 16.0).unwrap();
            assert!((y.u * y.u + 0.5625 * y.v * y.v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn angle_wrapping() {
        assert_eq!(wrap_two_pi(-1e-300), 0.0);
        assert_relative_eq!(wrap_two_pi(-PI / 2.0), 1.5 * PI);
        assert_eq!(wrap_pi(PI), PI);
        assert_relative_eq!(wrap_pi(-PI), PI);
        assert_relative_eq!(wrap_pi(1.5 * PI), -0.5 * PI);
    }
}
