//! Randers metric `F = alpha + beta` induced by navigation data `(h, W)`.
//!
//! `F(p, y)` is the travel time along `y` for a craft of unit own speed
//! carried by the wind. The unit indicatrix `{F = 1}` is the h-unit circle
//! translated rigidly by `W(p)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spheroid::{Spheroid, SurfacePoint, TangentVector};
use crate::wind::WindField;

#[derive(Debug, Clone)]
pub struct RandersMetric {
    sph: Spheroid,
    wind: WindField,
}

impl RandersMetric {
    pub fn new(sph: Spheroid, wind: WindField) -> Self {
        Self { sph, wind }
    }

    pub fn spheroid(&self) -> &Spheroid {
        &self.sph
    }

    pub fn wind(&self) -> &WindField {
        &self.wind
    }

    /// `lambda = 1 - |W|_h^2`.
    pub fn lambda(&self, p: SurfacePoint) -> f64 {
        1.0 - self.sph.norm_sq(p, self.wind.at(p))
    }

    fn checked_lambda(&self, p: SurfacePoint) -> Result<f64> {
        let lambda = self.lambda(p);
        if lambda > 0.0 {
            Ok(lambda)
        } else {
            Err(Error::NotMild {
                point: p,
                norm: (1.0 - lambda).max(0.0).sqrt(),
            })
        }
    }

    /// Riemannian part of `F`.
    pub fn alpha(&self, p: SurfacePoint, y: TangentVector) -> Result<f64> {
        let lambda = self.checked_lambda(p)?;
        let w = self.wind.at(p);
        let (h11, h22) = self.sph.metric(p.theta);
        let cross = y.u * w.v - y.v * w.u;
        let radicand = y.u * y.u * h11 + h22 * (y.v * y.v - h11 * cross * cross);
        Ok(radicand.max(0.0).sqrt() / lambda)
    }

    /// One-form part of `F`; linear in `y`.
    pub fn beta(&self, p: SurfacePoint, y: TangentVector) -> Result<f64> {
        let lambda = self.checked_lambda(p)?;
        let w = self.wind.at(p);
        Ok(-self.sph.inner(p, w, y) / lambda)
    }

    pub fn value(&self, p: SurfacePoint, y: TangentVector) -> Result<f64> {
        Ok(self.alpha(p, y)? + self.beta(p, y)?)
    }

    /// `L = F^2 / 2`.
    pub fn lagrangian(&self, p: SurfacePoint, y: TangentVector) -> Result<f64> {
        let f = self.value(p, y)?;
        Ok(0.5 * f * f)
    }

    /// `alpha^2 / 2`, the energy of the Riemannian part alone.
    pub fn alpha_lagrangian(&self, p: SurfacePoint, y: TangentVector) -> Result<f64> {
        let a = self.alpha(p, y)?;
        Ok(0.5 * a * a)
    }

    /// `n` unit-time destinations `W(p) + u_k`, where `u_k` is the h-unit
    /// vector at heading `2 pi k / n`.
    pub fn indicatrix(&self, p: SurfacePoint, n: usize) -> Result<Vec<TangentVector>> {
        if n < 3 {
            return Err(Error::InvalidConfig(format!(
                "indicatrix needs at least 3 samples, got {n}"
            )));
        }
        self.checked_lambda(p)?;
        let w = self.wind.at(p);
        (0..n)
            .map(|k| {
                let heading = 2.0 * PI * k as f64 / n as f64;
                Ok(w + self.sph.unit_vector(p, heading)?)
            })
            .collect()
    }
}

/// Closed form of `F` for the rotation wind `W = -c d/dphi`.
pub fn rotation_closed_form(sph: &Spheroid, c: f64, p: SurfacePoint, y: TangentVector) -> f64 {
    let (s, co) = p.theta.sin_cos();
    let a = sph.a();
    let s2 = s * s;
    let h22 = a * a * s2 + co * co;
    let TangentVector { u, v } = y;
    let radicand = -c * c * v * v * s2 * h22 + v * v * h22 + u * u * s2;
    (radicand.max(0.0).sqrt() + c * u * s2) / (1.0 - c * c * s2)
}
