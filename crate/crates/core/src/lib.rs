//! Conformal coordinate transformations of Minkowski spacetime, uniformly
//! accelerated kinematics and vacuum correlation functions.
//!
//! Everything here is pure computation on `f64` values: no IO, no global
//! state. The crate is `no_std` and only needs `alloc` for sampled
//! worldlines, map chains and sampled light-cone rules.
//!
//! Conventions: natural units (c = 1), metric signature (+,−,−,−), vector
//! components are contravariant unless a function says otherwise.
#![no_std]
#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub mod conformal;
pub mod correlations;
pub mod error;
pub mod factor;
pub mod kinematics;
pub mod light_ray;
pub mod lightcone;
pub mod vector;
pub mod worldline;

mod interp;
mod math;
mod quadrature;
pub mod stencil;

pub use crate::conformal::{
    conformal_factor, image_singular_residual, jacobian_tetrad, singular_residual,
    verify_interval_law, AcceleratedFrameForm, ConformalMap, ConformalTransform, IntervalReport,
    JacobianTetrad, Primitive, Tetrad, SINGULAR_THRESHOLD,
};
pub use crate::error::{Error, Result};
pub use crate::factor::{ricci_conformal, ConformalFactorField, Derivatives, FactorFn};
pub use crate::kinematics::{
    abraham_vector, classify_motion, pushforward_worldline, rigidity_check, transform_abraham,
    AbrahamVector, Classification, HillTransform, MotionClass, RigidityReport,
};
pub use crate::light_ray::{transform_light_ray, LightRay, LightRayImage, SignLawReport};
pub use crate::lightcone::{
    accelerated_frame_maps_2d, is_homographic, mirror_scattering_map, schwarzian, to_lightcone,
    vacuum_verdict, Homography2D, LightConeEvent, MirrorVerdict, RayComponent, RayMap2D,
    SampledRule, Verdict,
};
pub use crate::vector::{interval, minkowski_dot, Event, FourVector, Matrix4, METRIC};
pub use crate::worldline::{hyperbolic_worldline, KinematicState, SampledWorldline, Worldline};
