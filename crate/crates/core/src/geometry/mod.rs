//! Foundational spatial types shared by every other module: point clouds,
//! rigid transforms, voxel grids, exact nearest-neighbor queries, and
//! covariance-based surface-normal estimation.

mod cloud;
mod grid;
mod index;
mod normals;
pub mod ply;
mod transform;

pub use cloud::PointCloud;
pub use grid::{Channel, VoxelGrid};
pub use index::{Neighbor, SpatialIndex};
pub use normals::estimate_normals;
pub use transform::RigidTransform;

use thiserror::Error;

/// Scalar point/vector aliases; all geometry is double precision in meters.
pub type Point3 = nalgebra::Point3<f64>;
pub type Vector3 = nalgebra::Vector3<f64>;
pub type Matrix3 = nalgebra::Matrix3<f64>;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("operation requires a non-empty point cloud")]
    EmptyInput,
    #[error("operation requires at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },
    #[error("degenerate neighborhood around point {index}: covariance is rank-deficient")]
    DegenerateNeighborhood { index: usize },
    #[error("normal count {normals} does not match point count {points}")]
    NormalCountMismatch { points: usize, normals: usize },
    #[error("normal {index} has length {len} (must be unit within 1e-6)")]
    NonUnitNormal { index: usize, len: f64 },
    #[error("rotation matrix is not orthonormal with determinant +1 (defect {defect:.3e})")]
    NotARotation { defect: f64 },
    #[error("voxel grid resolution must be >= 2, got {0}")]
    BadResolution(usize),
    #[error("voxel size must be positive and finite, got {0}")]
    BadVoxelSize(f64),
    #[error("point {index} has a non-finite coordinate")]
    NonFinitePoint { index: usize },
}
