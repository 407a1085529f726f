use nalgebra::Rotation3;

use super::HandError;
use crate::geometry::{Point3, RigidTransform, Vector3};

/// Finger class of a link; drives which energy terms its surface samples
/// participate in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FingerTag {
    Thumb,
    OtherFinger,
    Palm,
}

impl FingerTag {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "thumb" => Some(Self::Thumb),
            "other_finger" => Some(Self::OtherFinger),
            "palm" => Some(Self::Palm),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Thumb => "thumb",
            Self::OtherFinger => "other_finger",
            Self::Palm => "palm",
        }
    }
}

/// Collision/surface primitive in link-local coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum Primitive {
    Sphere { center: Point3, radius: f64 },
    Capsule { a: Point3, b: Point3, radius: f64 },
}

impl Primitive {
    /// Signed distance from `p` to the primitive surface; negative inside.
    pub fn signed_distance(&self, p: &Point3) -> f64 {
        match self {
            Primitive::Sphere { center, radius } => (p - center).norm() - radius,
            Primitive::Capsule { a, b, radius } => segment_distance(p, a, b) - radius,
        }
    }

    pub fn radius(&self) -> f64 {
        match self {
            Primitive::Sphere { radius, .. } | Primitive::Capsule { radius, .. } => *radius,
        }
    }

    pub fn transformed(&self, t: &RigidTransform) -> Primitive {
        match self {
            Primitive::Sphere { center, radius } => {
                Primitive::Sphere { center: t.apply_point(center), radius: *radius }
            }
            Primitive::Capsule { a, b, radius } => Primitive::Capsule {
                a: t.apply_point(a),
                b: t.apply_point(b),
                radius: *radius,
            },
        }
    }
}

/// Distance from `p` to the segment `[a, b]`.
pub fn segment_distance(p: &Point3, a: &Point3, b: &Point3) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

/// One rigid link: primitives and authored surface samples in link frame.
#[derive(Debug, Clone)]
pub struct LinkSpec {
    pub name: String,
    pub primitives: Vec<Primitive>,
    pub surface_samples: Vec<Point3>,
    pub tag: FingerTag,
}

/// One revolute joint; the child frame at zero angle is `origin` relative to
/// the parent, and positive angles rotate about `axis` applied after
/// `origin`.
#[derive(Debug, Clone)]
pub struct JointSpec {
    pub name: String,
    pub parent_link: usize,
    pub child_link: usize,
    pub axis: Vector3,
    pub origin: RigidTransform,
    pub theta_min: f64,
    pub theta_max: f64,
}

/// A validated kinematic tree. Immutable after load.
#[derive(Debug, Clone)]
pub struct HandModel {
    pub name: String,
    links: Vec<LinkSpec>,
    joints: Vec<JointSpec>,
    root_link: usize,
    /// Parent joint of each link; `None` exactly for the root.
    parent_joint: Vec<Option<usize>>,
    /// Joint indices in parent-before-child evaluation order.
    topo_joints: Vec<usize>,
    /// Total number of authored surface samples over all links.
    sample_count: usize,
}

impl HandModel {
    /// Assembles and validates a hand from parsed parts. Rejects cyclic or
    /// forested joint graphs, missing finger tags, inverted joint limits,
    /// non-unit axes, and samples off their primitive surfaces.
    pub fn assemble(
        name: String,
        links: Vec<LinkSpec>,
        joints: Vec<JointSpec>,
    ) -> Result<Self, HandError> {
        if links.is_empty() {
            return Err(HandError::Validation("hand has no links".into()));
        }
        let mut parent_joint: Vec<Option<usize>> = vec![None; links.len()];
        for (ji, joint) in joints.iter().enumerate() {
            if joint.parent_link >= links.len() || joint.child_link >= links.len() {
                return Err(HandError::Validation(format!(
                    "joint '{}' references an unknown link",
                    joint.name
                )));
            }
            if joint.child_link == joint.parent_link {
                return Err(HandError::Validation(format!(
                    "joint '{}' connects link '{}' to itself",
                    joint.name, links[joint.child_link].name
                )));
            }
            if parent_joint[joint.child_link].is_some() {
                return Err(HandError::Validation(format!(
                    "link '{}' has more than one parent joint",
                    links[joint.child_link].name
                )));
            }
            parent_joint[joint.child_link] = Some(ji);
            if !(joint.theta_min < joint.theta_max) {
                return Err(HandError::Validation(format!(
                    "joint '{}' has theta_min {} >= theta_max {}",
                    joint.name, joint.theta_min, joint.theta_max
                )));
            }
            if (joint.axis.norm() - 1.0).abs() > 1e-9 {
                return Err(HandError::Validation(format!(
                    "joint '{}' axis has length {} (must be unit)",
                    joint.name,
                    joint.axis.norm()
                )));
            }
        }

        let roots: Vec<usize> =
            (0..links.len()).filter(|&l| parent_joint[l].is_none()).collect();
        if roots.len() != 1 {
            return Err(HandError::Validation(format!(
                "joint graph must be a tree with a single root, found {} roots",
                roots.len()
            )));
        }
        let root_link = roots[0];

        // Walk up from every link; a cycle or an over-long chain means the
        // graph is not a tree.
        for start in 0..links.len() {
            let mut cursor = start;
            let mut steps = 0usize;
            while let Some(ji) = parent_joint[cursor] {
                cursor = joints[ji].parent_link;
                steps += 1;
                if steps > links.len() {
                    return Err(HandError::Validation(format!(
                        "cycle detected in the joint graph through link '{}'",
                        links[start].name
                    )));
                }
            }
            if cursor != root_link {
                return Err(HandError::Validation(format!(
                    "link '{}' is not connected to the root",
                    links[start].name
                )));
            }
        }

        // Topological (parent before child) joint order.
        let mut depth = vec![0usize; links.len()];
        for l in 0..links.len() {
            let mut cursor = l;
            while let Some(ji) = parent_joint[cursor] {
                depth[l] += 1;
                cursor = joints[ji].parent_link;
            }
        }
        let mut topo_joints: Vec<usize> = (0..joints.len()).collect();
        topo_joints.sort_by_key(|&ji| (depth[joints[ji].child_link], ji));

        let mut has_thumb = false;
        let mut has_other = false;
        for link in &links {
            match link.tag {
                FingerTag::Thumb => has_thumb = true,
                FingerTag::OtherFinger => has_other = true,
                FingerTag::Palm => {}
            }
            for (si, sample) in link.surface_samples.iter().enumerate() {
                let on_surface = link
                    .primitives
                    .iter()
                    .any(|prim| prim.signed_distance(sample).abs() <= 1e-6);
                if !on_surface {
                    return Err(HandError::Validation(format!(
                        "sample {si} of link '{}' does not lie on a primitive surface",
                        link.name
                    )));
                }
            }
        }
        if !has_thumb || !has_other {
            return Err(HandError::Validation(
                "hand must tag at least one thumb link and one other_finger link".into(),
            ));
        }

        let sample_count = links.iter().map(|l| l.surface_samples.len()).sum();
        Ok(Self { name, links, joints, root_link, parent_joint, topo_joints, sample_count })
    }

    pub fn dof(&self) -> usize {
        self.joints.len()
    }

    pub fn links(&self) -> &[LinkSpec] {
        &self.links
    }

    pub fn joints(&self) -> &[JointSpec] {
        &self.joints
    }

    pub fn root_link(&self) -> usize {
        self.root_link
    }

    pub fn parent_joint(&self, link: usize) -> Option<usize> {
        self.parent_joint[link]
    }

    pub fn topo_joints(&self) -> &[usize] {
        &self.topo_joints
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }

    /// True when the two links are the same or connected by one joint;
    /// such sample pairs are exempt from the self-penetration energy.
    pub fn links_adjacent(&self, a: usize, b: usize) -> bool {
        if a == b {
            return true;
        }
        let direct = |child: usize, parent: usize| {
            self.parent_joint[child]
                .map(|ji| self.joints[ji].parent_link == parent)
                .unwrap_or(false)
        };
        direct(a, b) || direct(b, a)
    }

    /// Mid-range joint vector, used as a neutral initialization.
    pub fn mid_range_joints(&self) -> Vec<f64> {
        self.joints.iter().map(|j| 0.5 * (j.theta_min + j.theta_max)).collect()
    }

    pub fn validate_pose(&self, pose: &GraspPose) -> Result<(), HandError> {
        if pose.joints.len() != self.dof() {
            return Err(HandError::JointCountMismatch {
                expected: self.dof(),
                got: pose.joints.len(),
            });
        }
        Ok(())
    }
}

/// The optimization variable: wrist pose in SE(3) plus one angle per joint.
#[derive(Debug, Clone, PartialEq)]
pub struct GraspPose {
    pub wrist: RigidTransform,
    pub joints: Vec<f64>,
}

impl GraspPose {
    pub fn new(wrist: RigidTransform, joints: Vec<f64>) -> Self {
        Self { wrist, joints }
    }
}

/// Local chart around a reference pose: additive translation, exponential-map
/// rotation increment (right-multiplied), additive joint increments.
#[derive(Debug, Clone, PartialEq)]
pub struct PoseParams {
    pub translation: Vector3,
    pub rotation_local: Vector3,
    pub joints: Vec<f64>,
}

impl PoseParams {
    pub fn zeros(dof: usize) -> Self {
        Self { translation: Vector3::zeros(), rotation_local: Vector3::zeros(), joints: vec![0.0; dof] }
    }

    /// Packs as `[translation(3), rotation(3), joints(dof)]`, the column
    /// layout used by surface Jacobians and energy gradients.
    pub fn from_vector(v: &[f64], dof: usize) -> Self {
        assert_eq!(v.len(), 6 + dof);
        Self {
            translation: Vector3::new(v[0], v[1], v[2]),
            rotation_local: Vector3::new(v[3], v[4], v[5]),
            joints: v[6..].to_vec(),
        }
    }

    pub fn to_vector(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(6 + self.joints.len());
        v.extend_from_slice(self.translation.as_slice());
        v.extend_from_slice(self.rotation_local.as_slice());
        v.extend_from_slice(&self.joints);
        v
    }
}

/// Applies a chart increment to a reference pose.
///
/// Wrist rotation becomes `R_ref * Exp(rotation_local)`, translation and
/// joints are additive. Errors when the rotation increment leaves the chart.
pub fn pose_from_params(reference: &GraspPose, params: &PoseParams) -> Result<GraspPose, HandError> {
    let angle = params.rotation_local.norm();
    if angle >= std::f64::consts::PI {
        return Err(HandError::ChartOverflow(angle));
    }
    assert_eq!(reference.joints.len(), params.joints.len());
    let rotation = reference.wrist.rotation() * Rotation3::new(params.rotation_local);
    let translation = reference.wrist.translation() + params.translation;
    let joints =
        reference.joints.iter().zip(&params.joints).map(|(a, b)| a + b).collect();
    Ok(GraspPose { wrist: RigidTransform::new(rotation, translation), joints })
}

/// Recovers the chart increment mapping `reference` to `pose` (inverse of
/// [`pose_from_params`] whenever the rotation offset is inside the chart).
pub fn params_from_pose(reference: &GraspPose, pose: &GraspPose) -> PoseParams {
    let rel = reference.wrist.rotation().inverse() * pose.wrist.rotation();
    PoseParams {
        translation: pose.wrist.translation() - reference.wrist.translation(),
        rotation_local: rel.scaled_axis(),
        joints: pose
            .joints
            .iter()
            .zip(&reference.joints)
            .map(|(a, b)| a - b)
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_params_reproduce_reference() {
        let reference = GraspPose::new(
            RigidTransform::new(
                Rotation3::from_euler_angles(0.2, -0.4, 1.0),
                Vector3::new(0.1, 0.2, 0.3),
            ),
            vec![0.5, -0.25],
        );
        let out = pose_from_params(&reference, &PoseParams::zeros(2)).unwrap();
        assert_eq!(out, reference);
    }

    #[test]
    fn quarter_turn_about_z() {
        let reference = GraspPose::new(RigidTransform::identity(), vec![]);
        let params = PoseParams {
            translation: Vector3::zeros(),
            rotation_local: Vector3::new(0.0, 0.0, std::f64::consts::FRAC_PI_2),
            joints: vec![],
        };
        let out = pose_from_params(&reference, &params).unwrap();
        let expected = Rotation3::from_axis_angle(&Vector3::z_axis(), std::f64::consts::FRAC_PI_2);
        assert!((out.wrist.rotation_matrix() - expected.matrix()).abs().max() < 1e-12);
    }

    #[test]
    fn chart_overflow_is_rejected() {
        let reference = GraspPose::new(RigidTransform::identity(), vec![]);
        let params = PoseParams {
            translation: Vector3::zeros(),
            rotation_local: Vector3::new(0.0, 0.0, std::f64::consts::PI),
            joints: vec![],
        };
        assert!(matches!(
            pose_from_params(&reference, &params),
            Err(HandError::ChartOverflow(_))
        ));
    }

    #[test]
    fn params_round_trip_through_log_map() {
        let mut s = 3u64;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let reference = GraspPose::new(
            RigidTransform::new(
                Rotation3::from_euler_angles(0.3, 0.1, -0.9),
                Vector3::new(0.05, -0.02, 0.11),
            ),
            vec![0.1, 0.2, 0.3, 0.4],
        );
        for _ in 0..100 {
            let params = PoseParams {
                translation: Vector3::new(next(), next(), next()) * 0.02,
                rotation_local: Vector3::new(next(), next(), next()) * 0.2,
                joints: (0..4).map(|_| next() * 0.2).collect(),
            };
            let pose = pose_from_params(&reference, &params).unwrap();
            let back = params_from_pose(&reference, &pose);
            assert!((back.translation - params.translation).norm() < 1e-10);
            assert!((back.rotation_local - params.rotation_local).norm() < 1e-10);
            for (a, b) in back.joints.iter().zip(&params.joints) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn segment_distance_handles_endpoints() {
        let a = Point3::new(0.0, 0.0, 0.0);
        let b = Point3::new(1.0, 0.0, 0.0);
        assert!((segment_distance(&Point3::new(-1.0, 0.0, 0.0), &a, &b) - 1.0).abs() < 1e-15);
        assert!((segment_distance(&Point3::new(0.5, 2.0, 0.0), &a, &b) - 2.0).abs() < 1e-15);
        assert!((segment_distance(&Point3::new(3.0, 0.0, 0.0), &a, &b) - 2.0).abs() < 1e-15);
    }
}
