use super::{GeometryError, Point3, RigidTransform, Vector3};

/// Tolerance for the unit-length invariant on stored normals.
const NORMAL_UNIT_TOL: f64 = 1e-6;

/// An ordered 3D point cloud with optional per-point unit normals.
///
/// Point order is significant: nearest-neighbor ties are broken by lowest
/// index, and downstream volumes are deterministic in it.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    points: Vec<Point3>,
    normals: Option<Vec<Vector3>>,
}

impl PointCloud {
    pub fn new(points: Vec<Point3>) -> Self {
        Self { points, normals: None }
    }

    /// Builds a cloud with normals, enforcing the count and unit-length
    /// invariants.
    pub fn with_normals(points: Vec<Point3>, normals: Vec<Vector3>) -> Result<Self, GeometryError> {
        if normals.len() != points.len() {
            return Err(GeometryError::NormalCountMismatch {
                points: points.len(),
                normals: normals.len(),
            });
        }
        for (i, n) in normals.iter().enumerate() {
            let len = n.norm();
            if (len - 1.0).abs() > NORMAL_UNIT_TOL {
                return Err(GeometryError::NonUnitNormal { index: i, len });
            }
        }
        Ok(Self { points, normals: Some(normals) })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn normals(&self) -> Option<&[Vector3]> {
        self.normals.as_deref()
    }

    /// Maps every point by `p -> R p + t` and every normal by `R` only.
    pub fn transformed(&self, t: &RigidTransform) -> PointCloud {
        PointCloud {
            points: self.points.iter().map(|p| t.apply_point(p)).collect(),
            normals: self
                .normals
                .as_ref()
                .map(|ns| ns.iter().map(|n| t.apply_vector(n)).collect()),
        }
    }

    /// Verifies that every coordinate is finite; `index` reports the first
    /// offender.
    pub fn validate_finite(&self) -> Result<(), GeometryError> {
        for (i, p) in self.points.iter().enumerate() {
            if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
                return Err(GeometryError::NonFinitePoint { index: i });
            }
        }
        Ok(())
    }

    /// Concatenates clouds; normals are kept only if every part carries them.
    pub fn concat(parts: &[&PointCloud]) -> PointCloud {
        let mut points = Vec::new();
        let all_normals = parts.iter().all(|c| c.normals.is_some());
        let mut normals = if all_normals { Some(Vec::new()) } else { None };
        for part in parts {
            points.extend_from_slice(&part.points);
            if let (Some(out), Some(ns)) = (normals.as_mut(), part.normals.as_ref()) {
                out.extend_from_slice(ns);
            }
        }
        PointCloud { points, normals }
    }
}

impl From<Vec<Point3>> for PointCloud {
    fn from(points: Vec<Point3>) -> Self {
        Self::new(points)
    }
}
