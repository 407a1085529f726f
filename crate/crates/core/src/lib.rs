//! Geometric core of two-stage dexterous grasping: sparse interaction
//! bisector surface (IBS) construction between a parametric hand and a scene
//! point cloud, force-closure ranking of IBS candidates, and gradient-based
//! grasp pose optimization constrained by a fixed IBS volume.
//!
//! The crate is organized around the pipeline stages:
//!
//! - [`geometry`]: point clouds, rigid transforms, voxel grids, exact
//!   nearest-neighbor queries, PCA normal estimation, PLY/XYZ I/O.
//! - [`hand`]: parametric hand models (spheres/capsules per link), forward
//!   kinematics, tagged surface sampling, and pose-parameter Jacobians.
//! - [`ibs`]: canonicalization, voxelization, sparse IBS volumes with
//!   thumb/other contact channels, point extraction with oriented normals,
//!   and the SIBS binary format.
//! - [`quality`]: force-closure scoring, candidate and trial ranking, and
//!   the penetration-depth analysis metric.
//! - [`optimizer`]: the four energy terms with analytic gradients, projected
//!   gradient descent, and multi-start trial ranking.
//! - [`scene`]: deterministic procedural scene recipes for desk-scale runs.
//! - [`pinch`]: analytic pinch-grasp synthesis for the shipped hands, used
//!   for dataset generation and fixtures.

pub mod geometry;
pub mod hand;
pub mod ibs;
pub mod optimizer;
pub mod pinch;
pub mod quality;
pub mod scene;
