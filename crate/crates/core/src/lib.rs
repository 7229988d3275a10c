//! Time-optimal navigation on spheroids under a mild stationary wind.
//!
//! Paths of least travel time for a craft of unit own speed are the geodesics
//! of a Randers metric built from the surface metric and the wind. This crate
//! evaluates that metric, its geodesic spray, integrates the resulting paths
//! and derives the steering channel (heading, course, drift, speed) along them.
//!
//! ```
//! use znav_core::{control, Spheroid, SurfacePoint, WindField};
//!
//! let sph = Spheroid::new(0.75).unwrap();
//! let wind = WindField::rotation(5.0 / 7.0).unwrap();
//! let start = SurfacePoint::new(0.0, std::f64::consts::FRAC_PI_2);
//! let s0 = control::initial_state_randers(&sph, &wind, start, std::f64::consts::FRAC_PI_3).unwrap();
//! assert!((s0.vel.u + 3.0 / 14.0).abs() < 1e-15);
//! ```

pub mod control;
pub mod error;
pub mod export;
pub mod integrator;
pub mod par;
pub mod randers;
pub mod spheroid;
pub mod spray;
pub mod wind;

pub use error::{Error, ErrorCategory, Result};
pub use integrator::{classify_path, integrate, integrate_family, IntegratorConfig, PathClass, Termination, Trajectory};
pub use par::Execution;
pub use randers::RandersMetric;
pub use spheroid::{NavState, Spheroid, SurfacePoint, TangentVector, POLE_EPS};
pub use spray::{GeodesicSystem, MetricKind};
pub use wind::WindField;
