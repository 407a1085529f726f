//! Parametric dexterous-hand description: a tree of revolute joints over
//! links carrying sphere/capsule collision primitives and authored surface
//! sample points tagged thumb / other-finger / palm.
//!
//! The pose of a hand is a wrist transform plus one angle per joint; local
//! optimization runs in a chart ([`PoseParams`]) of additive translation,
//! right-multiplied exponential-map rotation, and additive joint increments.

mod config;
mod kinematics;
mod model;
mod pose_io;

pub use config::load_hand;
pub use kinematics::{
    forward_kinematics, sample_hand_surface, surface_jacobian, world_primitives, SurfaceJacobians,
    TaggedCloud,
};
pub use model::{FingerTag, GraspPose, HandModel, JointSpec, LinkSpec, PoseParams, Primitive};
pub use pose_io::{pose_from_json, pose_to_json, poses_from_json, poses_to_json, GraspPoseJson};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HandError {
    #[error("hand config parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid hand config: {0}")]
    Validation(String),
    #[error("rotation increment norm {0:.6} is outside the exponential chart (must be < pi)")]
    ChartOverflow(f64),
    #[error("pose has {got} joint angles but the hand has {expected} joints")]
    JointCountMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
}
