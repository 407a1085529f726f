use nalgebra::Rotation3;
use serde::{Deserialize, Serialize};

use super::{GeometryError, Matrix3, Point3, Vector3};

/// Orthonormality tolerance for rotation matrices loaded from external data.
const ROTATION_TOL: f64 = 1e-9;

/// A rigid transform `p -> R p + t` with `R` in SO(3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidTransform {
    rotation: Rotation3<f64>,
    translation: Vector3,
}

impl RigidTransform {
    pub fn identity() -> Self {
        Self { rotation: Rotation3::identity(), translation: Vector3::zeros() }
    }

    pub fn new(rotation: Rotation3<f64>, translation: Vector3) -> Self {
        Self { rotation, translation }
    }

    /// Validates that `m` is orthonormal with determinant +1 within 1e-9
    /// before wrapping it.
    pub fn from_matrix(m: Matrix3, translation: Vector3) -> Result<Self, GeometryError> {
        let defect = rotation_defect(&m);
        if defect > ROTATION_TOL {
            return Err(GeometryError::NotARotation { defect });
        }
        Ok(Self { rotation: Rotation3::from_matrix_unchecked(m), translation })
    }

    pub fn rotation(&self) -> &Rotation3<f64> {
        &self.rotation
    }

    pub fn rotation_matrix(&self) -> &Matrix3 {
        self.rotation.matrix()
    }

    pub fn translation(&self) -> &Vector3 {
        &self.translation
    }

    pub fn apply_point(&self, p: &Point3) -> Point3 {
        Point3::from(self.rotation * p.coords + self.translation)
    }

    pub fn apply_vector(&self, v: &Vector3) -> Vector3 {
        self.rotation * v
    }

    /// `self ∘ other`: applies `other` first, then `self`.
    pub fn compose(&self, other: &RigidTransform) -> RigidTransform {
        RigidTransform {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> RigidTransform {
        let inv_rot = self.rotation.inverse();
        RigidTransform { rotation: inv_rot, translation: -(inv_rot * self.translation) }
    }
}

/// How far `m` is from being a rotation: max of `|det - 1|` and the largest
/// entry of `|mᵀm - I|`.
pub fn rotation_defect(m: &Matrix3) -> f64 {
    let gram = m.transpose() * m;
    let mut defect = (m.determinant() - 1.0).abs();
    for i in 0..3 {
        for j in 0..3 {
            let target = if i == j { 1.0 } else { 0.0 };
            defect = defect.max((gram[(i, j)] - target).abs());
        }
    }
    defect
}

/// Wire form of a rigid transform: 9 row-major rotation entries plus a
/// translation triple. Used by grasp-pose JSON and validated on load.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RigidTransformJson {
    pub rotation: [f64; 9],
    pub translation: [f64; 3],
}

impl RigidTransformJson {
    pub fn from_transform(t: &RigidTransform) -> Self {
        let m = t.rotation_matrix();
        let mut rotation = [0.0; 9];
        for r in 0..3 {
            for c in 0..3 {
                rotation[r * 3 + c] = m[(r, c)];
            }
        }
        Self { rotation, translation: [t.translation().x, t.translation().y, t.translation().z] }
    }

    pub fn to_transform(&self) -> Result<RigidTransform, GeometryError> {
        let m = Matrix3::new(
            self.rotation[0],
            self.rotation[1],
            self.rotation[2],
            self.rotation[3],
            self.rotation[4],
            self.rotation[5],
            self.rotation[6],
            self.rotation[7],
            self.rotation[8],
        );
        let t = Vector3::new(self.translation[0], self.translation[1], self.translation[2]);
        RigidTransform::from_matrix(m, t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_orthonormal_matrix() {
        let mut m = Matrix3::identity();
        m[(0, 0)] = 1.0 + 1e-6;
        assert!(matches!(
            RigidTransform::from_matrix(m, Vector3::zeros()),
            Err(GeometryError::NotARotation { .. })
        ));
    }

    #[test]
    fn compose_then_inverse_is_identity() {
        let a = RigidTransform::new(
            Rotation3::from_euler_angles(0.1, 0.2, 0.3),
            Vector3::new(1.0, 2.0, 3.0),
        );
        let round = a.compose(&a.inverse());
        let p = Point3::new(0.4, -0.5, 0.6);
        assert!((round.apply_point(&p) - p).norm() < 1e-14);
    }

    #[test]
    fn json_round_trip() {
        let a = RigidTransform::new(
            Rotation3::from_euler_angles(-0.7, 0.2, 1.9),
            Vector3::new(0.01, -0.02, 0.12),
        );
        let j = RigidTransformJson::from_transform(&a);
        let b = j.to_transform().unwrap();
        assert!((a.rotation_matrix() - b.rotation_matrix()).abs().max() < 1e-15);
        assert!((a.translation() - b.translation()).norm() < 1e-15);
    }
}
