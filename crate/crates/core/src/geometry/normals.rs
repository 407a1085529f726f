use nalgebra::SymmetricEigen;

use super::{GeometryError, Matrix3, PointCloud, SpatialIndex, Vector3};

/// Relative eigenvalue gap below which a neighborhood is considered
/// rank-deficient (collinear or coincident points).
const DEGENERACY_RATIO: f64 = 1e-10;

/// Estimates a unit normal per point as the eigenvector of the k-NN
/// covariance with the smallest eigenvalue.
///
/// Orientation is left unresolved; signs are fixed downstream (the IBS
/// extraction orients toward the hand side). Each point's own position is
/// included in its neighborhood.
pub fn estimate_normals(cloud: &PointCloud, k: usize) -> Result<PointCloud, GeometryError> {
    if k < 3 || cloud.len() < k {
        return Err(GeometryError::InsufficientPoints { needed: k.max(3), got: cloud.len() });
    }
    let index = SpatialIndex::build(cloud)?;
    let mut normals = Vec::with_capacity(cloud.len());
    for (i, p) in cloud.points().iter().enumerate() {
        let neighbors = index.k_nearest(p, k);
        let mut mean = Vector3::zeros();
        for n in &neighbors {
            mean += n.point.coords;
        }
        mean /= neighbors.len() as f64;
        let mut cov = Matrix3::zeros();
        for n in &neighbors {
            let d = n.point.coords - mean;
            cov += d * d.transpose();
        }
        cov /= neighbors.len() as f64;

        let eig = SymmetricEigen::new(cov);
        // Ascending eigenvalue order.
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let l_mid = eig.eigenvalues[idx[1]].max(0.0);
        let l_max = eig.eigenvalues[idx[2]].max(0.0);
        if l_max <= 0.0 || l_mid <= DEGENERACY_RATIO * l_max {
            return Err(GeometryError::DegenerateNeighborhood { index: i });
        }
        let n = eig.eigenvectors.column(idx[0]).normalize();
        normals.push(Vector3::new(n[0], n[1], n[2]));
    }
    PointCloud::with_normals(cloud.points().to_vec(), normals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point3;

    fn lcg(seed: u64) -> impl FnMut() -> f64 {
        let mut s = seed;
        move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 11) as f64 / (1u64 << 53) as f64
        }
    }

    #[test]
    fn planar_cloud_yields_plane_normal() {
        let mut rng = lcg(11);
        let pts: Vec<Point3> =
            (0..100).map(|_| Point3::new(rng() - 0.5, rng() - 0.5, 0.0)).collect();
        let out = estimate_normals(&PointCloud::new(pts), 10).unwrap();
        for n in out.normals().unwrap() {
            let angle = n.cross(&Vector3::z()).norm().asin();
            assert!(angle.abs() < 1e-6, "normal {n:?} deviates from ±z");
        }
    }

    #[test]
    fn sphere_normals_are_radial() {
        // 2000 points on the unit sphere; the PCA normal at p should be
        // parallel to p within 5 degrees for at least 99% of points.
        let mut rng = lcg(17);
        let mut pts = Vec::new();
        while pts.len() < 2000 {
            let v = Vector3::new(rng() * 2.0 - 1.0, rng() * 2.0 - 1.0, rng() * 2.0 - 1.0);
            let norm = v.norm();
            if norm > 1e-3 && norm <= 1.0 {
                pts.push(Point3::from(v / norm));
            }
        }
        let out = estimate_normals(&PointCloud::new(pts.clone()), 16).unwrap();
        let mut good = 0usize;
        for (p, n) in pts.iter().zip(out.normals().unwrap()) {
            let cosine = n.dot(&p.coords).abs().min(1.0);
            if cosine.acos().to_degrees() <= 5.0 {
                good += 1;
            }
        }
        assert!(good as f64 >= 0.99 * pts.len() as f64, "only {good}/2000 within 5 degrees");
    }

    #[test]
    fn collinear_points_are_degenerate() {
        let pts = vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(2.0, 0.0, 0.0),
        ];
        assert!(matches!(
            estimate_normals(&PointCloud::new(pts), 3),
            Err(GeometryError::DegenerateNeighborhood { .. })
        ));
    }

    #[test]
    fn k_larger_than_cloud_is_rejected() {
        let pts = vec![Point3::origin(), Point3::new(1.0, 0.0, 0.0)];
        assert!(matches!(
            estimate_normals(&PointCloud::new(pts), 3),
            Err(GeometryError::InsufficientPoints { .. })
        ));
    }
}
