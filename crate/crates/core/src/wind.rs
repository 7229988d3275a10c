//! Stationary wind fields on the spheroid.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::spheroid::{Spheroid, SurfacePoint, TangentVector, POLE_EPS};

/// Samples at or above this h-norm count as mildness violations.
pub const MILD_LIMIT: f64 = 1.0 - 1e-12;

/// Default lattice resolution for [`validate_mild`].
pub const DEFAULT_MILD_GRID: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WindKind {
    /// Rigid rotation about the polar axis, `W = -c d/dphi`.
    Rotation(f64),
    Custom,
}

type ComponentFn = dyn Fn(SurfacePoint) -> TangentVector + Send + Sync;

/// Time-independent vector field `W = W1 d/dphi + W2 d/dtheta`.
#[derive(Clone)]
pub struct WindField {
    kind: WindKind,
    eval: Arc<ComponentFn>,
}

impl fmt::Debug for WindField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WindField").field("kind", &self.kind).finish()
    }
}

impl WindField {
    /// Rotation about the z-axis with angular rate `c`; requires `|c| < 1`.
    pub fn rotation(c: f64) -> Result<Self> {
        if !c.is_finite() || c.abs() >= 1.0 {
            return Err(Error::NotMild {
                point: SurfacePoint::new(0.0, PI / 2.0),
                norm: c.abs(),
            });
        }
        Ok(Self {
            kind: WindKind::Rotation(c),
            eval: Arc::new(move |_| TangentVector::new(-c, 0.0)),
        })
    }

    /// The zero field.
    pub fn calm() -> Self {
        Self::rotation(0.0).expect("zero rotation is mild")
    }

    /// Wind given by closed-form coordinate components.
    pub fn custom<F>(components: F) -> Self
    where
        F: Fn(SurfacePoint) -> TangentVector + Send + Sync + 'static,
    {
        Self {
            kind: WindKind::Custom,
            eval: Arc::new(components),
        }
    }

    pub fn kind(&self) -> WindKind {
        self.kind
    }

    /// Angular rate `c` if this is a rotation wind.
    pub fn rotation_rate(&self) -> Option<f64> {
        match self.kind {
            WindKind::Rotation(c) => Some(c),
            WindKind::Custom => None,
        }
    }

    pub fn at(&self, p: SurfacePoint) -> TangentVector {
        (self.eval)(p)
    }

    /// `|W(p)|_h`.
    pub fn norm(&self, sph: &Spheroid, p: SurfacePoint) -> f64 {
        sph.norm(p, self.at(p))
    }
}

/// Result of a successful mildness sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MildReport {
    pub max_norm: f64,
    pub argmax: SurfacePoint,
}

/// Samples `|W|_h` on a `grid_n x grid_n` lattice over `[0, 2pi) x [eps, pi - eps]`.
///
/// Lattices are nested when the finer size is the square of the coarser one,
/// so a pass at `n * n` implies a pass at `n`.
pub fn validate_mild(sph: &Spheroid, wind: &WindField, grid_n: usize) -> Result<MildReport> {
    if grid_n < 2 {
        return Err(Error::InvalidConfig(format!(
            "mildness grid needs at least 2 points per axis, got {grid_n}"
        )));
    }
    let mut report = MildReport {
        max_norm: f64::NEG_INFINITY,
        argmax: SurfacePoint::new(0.0, POLE_EPS),
    };
    let span = PI - 2.0 * POLE_EPS;
    for j in 0..grid_n {
        let theta = POLE_EPS + span * j as f64 / (grid_n - 1) as f64;
        for i in 0..grid_n {
            let phi = 2.0 * PI * i as f64 / grid_n as f64;
            let p = SurfacePoint::new(phi, theta);
            let norm = wind.norm(sph, p);
            if !(norm < MILD_LIMIT) {
                return Err(Error::NotMild { point: p, norm });
            }
            if norm > report.max_norm {
                report = MildReport {
                    max_norm: norm,
                    argmax: p,
                };
            }
        }
    }
    Ok(report)
}

/// Pointwise mildness check.
pub fn check_mild_at(sph: &Spheroid, wind: &WindField, p: SurfacePoint) -> Result<f64> {
    let norm = wind.norm(sph, p);
    if norm < MILD_LIMIT {
        Ok(norm)
    } else {
        Err(Error::NotMild { point: p, norm })
    }
}
