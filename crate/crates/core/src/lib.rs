//! Curve shortening flow for closed polygonal curves in ℝⁿ.
//!
//! The crate evolves closed curves by `∂t X = κN = ∂s²X` with an explicit
//! scheme and ships the geometric monitors used to check the qualitative
//! behaviour of the flow:
//!
//! * [`geometry`]: discrete arclength derivatives, Frenet frames and
//!   uniform resampling of closed polylines.
//! * [`flow`]: the time integrator, stopping criteria and monitor plumbing.
//! * [`convexity`]: 2D/3D convex hulls, the Minkowski functional, projected
//!   Frenet data and the convexity defect of orthogonal projections.
//! * [`spherical`]: sphere fitting, the chord functional on the parameter
//!   torus and the avoidance monitors for spherical curves.
//! * [`curves`]: deterministic curve generators and random fixtures.
//! * [`snapshot`]: the text snapshot format for curves.

pub mod convexity;
pub mod curves;
pub mod flow;
pub mod geometry;
pub mod snapshot;
pub mod spherical;
pub(crate) mod vecn;

pub use convexity::{ConvexityDefectSample, Hull2d, Hull3d, HullError, Projection};
pub use curves::{CurveKind, CurveSpec, GeneratorError};
pub use flow::{
    evolve, evolve_family, step, FamilyMonitor, FlowError, FlowParams, FlowState, Monitor,
    MonitorReport, MonitorSample, StopReason,
};
pub use geometry::{CurveError, DiscreteCurve, FrenetData, VertexVectors};
pub use spherical::{AvoidanceSample, ChordField, SphereFit, SphericalError};
