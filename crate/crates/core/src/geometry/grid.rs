use super::{GeometryError, Point3, Vector3};

/// One named boolean occupancy lattice of `n³` cells in x-fastest order.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    name: String,
    bits: Vec<bool>,
}

impl Channel {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn count_set(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }
}

/// An axis-aligned cubic voxel lattice with named boolean channels.
///
/// Voxel membership is half-open per axis: a point belongs to voxel `i` on
/// an axis iff `origin + i*size <= c < origin + (i+1)*size`, so every
/// in-volume point maps to exactly one voxel and boundary points never map
/// to two.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelGrid {
    origin: Point3,
    voxel_size: f64,
    resolution: usize,
    channels: Vec<Channel>,
}

impl VoxelGrid {
    pub fn new(
        origin: Point3,
        voxel_size: f64,
        resolution: usize,
        channel_names: &[&str],
    ) -> Result<Self, GeometryError> {
        if resolution < 2 {
            return Err(GeometryError::BadResolution(resolution));
        }
        if !(voxel_size.is_finite() && voxel_size > 0.0) {
            return Err(GeometryError::BadVoxelSize(voxel_size));
        }
        let cells = resolution * resolution * resolution;
        let channels = channel_names
            .iter()
            .map(|name| Channel { name: (*name).to_string(), bits: vec![false; cells] })
            .collect();
        Ok(Self { origin, voxel_size, resolution, channels })
    }

    pub fn origin(&self) -> &Point3 {
        &self.origin
    }

    pub fn voxel_size(&self) -> f64 {
        self.voxel_size
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    /// Edge length of the whole volume (`voxel_size * resolution`).
    pub fn edge_length(&self) -> f64 {
        self.voxel_size * self.resolution as f64
    }

    pub fn cell_count(&self) -> usize {
        self.resolution * self.resolution * self.resolution
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn channel(&self, name: &str) -> Option<&Channel> {
        self.channels.iter().find(|c| c.name == name)
    }

    /// Linear cell index in x-fastest order: `x + n*(y + n*z)`.
    pub fn linear_index(&self, v: [usize; 3]) -> usize {
        debug_assert!(v[0] < self.resolution && v[1] < self.resolution && v[2] < self.resolution);
        v[0] + self.resolution * (v[1] + self.resolution * v[2])
    }

    pub fn voxel_of_linear(&self, idx: usize) -> [usize; 3] {
        let n = self.resolution;
        [idx % n, (idx / n) % n, idx / (n * n)]
    }

    /// Maps a world/canonical point to its voxel, or `None` when outside the
    /// half-open volume.
    pub fn world_to_voxel(&self, p: &Point3) -> Option<[usize; 3]> {
        let mut out = [0usize; 3];
        for a in 0..3 {
            let rel = (p[a] - self.origin[a]) / self.voxel_size;
            if rel < 0.0 {
                return None;
            }
            let i = rel.floor() as usize;
            if i >= self.resolution {
                return None;
            }
            out[a] = i;
        }
        Some(out)
    }

    /// Center of a voxel.
    pub fn voxel_to_world(&self, v: [usize; 3]) -> Point3 {
        self.origin
            + Vector3::new(
                (v[0] as f64 + 0.5) * self.voxel_size,
                (v[1] as f64 + 0.5) * self.voxel_size,
                (v[2] as f64 + 0.5) * self.voxel_size,
            )
    }

    pub fn get(&self, channel: usize, v: [usize; 3]) -> bool {
        let idx = self.linear_index(v);
        self.channels[channel].bits[idx]
    }

    pub fn get_linear(&self, channel: usize, idx: usize) -> bool {
        self.channels[channel].bits[idx]
    }

    pub fn set(&mut self, channel: usize, v: [usize; 3], value: bool) {
        let idx = self.linear_index(v);
        self.channels[channel].bits[idx] = value;
    }

    pub fn set_linear(&mut self, channel: usize, idx: usize, value: bool) {
        self.channels[channel].bits[idx] = value;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> VoxelGrid {
        VoxelGrid::new(Point3::new(-0.1, -0.1, -0.1), 0.005, 40, &["occ"]).unwrap()
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            VoxelGrid::new(Point3::origin(), 0.005, 1, &[]),
            Err(GeometryError::BadResolution(1))
        ));
        assert!(matches!(
            VoxelGrid::new(Point3::origin(), -0.005, 4, &[]),
            Err(GeometryError::BadVoxelSize(_))
        ));
    }

    #[test]
    fn edge_length_matches_declaration() {
        let g = grid();
        assert!((g.edge_length() - 0.2).abs() < 1e-9);
    }

    #[test]
    fn addressing_round_trips_for_every_cell() {
        let g = grid();
        for z in 0..g.resolution() {
            for y in 0..g.resolution() {
                for x in 0..g.resolution() {
                    let center = g.voxel_to_world([x, y, z]);
                    assert_eq!(g.world_to_voxel(&center), Some([x, y, z]));
                    let li = g.linear_index([x, y, z]);
                    assert_eq!(g.voxel_of_linear(li), [x, y, z]);
                }
            }
        }
    }

    #[test]
    fn half_open_boundaries() {
        let g = grid();
        // Exact lower corner belongs to cell 0; exact upper corner is out.
        assert_eq!(g.world_to_voxel(&Point3::new(-0.1, -0.1, -0.1)), Some([0, 0, 0]));
        assert_eq!(g.world_to_voxel(&Point3::new(0.1, 0.0, 0.0)), None);
        // A shared face belongs to the upper cell only.
        let boundary = -0.1 + 0.005;
        assert_eq!(g.world_to_voxel(&Point3::new(boundary, -0.1, -0.1)), Some([1, 0, 0]));
    }
}
