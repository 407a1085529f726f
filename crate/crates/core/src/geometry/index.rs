use super::{GeometryError, Point3, PointCloud};

/// A single query result: the matched point, its Euclidean distance to the
/// query, and its index in the source cloud.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub point: Point3,
    pub distance: f64,
    pub index: usize,
}

/// Exact nearest-neighbor acceleration structure over a point cloud.
///
/// Results are identical to an exhaustive linear scan; distance ties are
/// broken by the lowest source index so that queries are reproducible across
/// runs and tree layouts.
#[derive(Debug, Clone)]
pub struct SpatialIndex {
    points: Vec<Point3>,
    nodes: Vec<Node>,
    /// Point indices, leaf ranges reference slices of this permutation.
    order: Vec<usize>,
    root: usize,
}

#[derive(Debug, Clone)]
enum Node {
    Leaf {
        start: usize,
        end: usize,
    },
    Split {
        axis: usize,
        value: f64,
        left: usize,
        right: usize,
    },
}

const LEAF_SIZE: usize = 16;

/// Builds an index over `cloud`; errors on an empty cloud.
pub fn build_index(cloud: &PointCloud) -> Result<SpatialIndex, GeometryError> {
    SpatialIndex::build(cloud)
}

impl SpatialIndex {
    pub fn build(cloud: &PointCloud) -> Result<Self, GeometryError> {
        if cloud.is_empty() {
            return Err(GeometryError::EmptyInput);
        }
        let points = cloud.points().to_vec();
        let mut order: Vec<usize> = (0..points.len()).collect();
        let mut nodes = Vec::new();
        let n = points.len();
        let root = build_node(&points, &mut order, 0, n, &mut nodes);
        Ok(Self { points, nodes, order, root })
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

    /// Global minimum-distance point; ties go to the lowest index.
    pub fn nearest(&self, query: &Point3) -> Neighbor {
        let mut best = Best { d2: f64::INFINITY, index: usize::MAX };
        self.search(self.root, query, &mut best);
        Neighbor {
            point: self.points[best.index],
            distance: best.d2.sqrt(),
            index: best.index,
        }
    }

    /// The `k` nearest points ordered by (distance, index) ascending.
    /// Returns fewer than `k` entries only when the cloud is smaller than `k`.
    pub fn k_nearest(&self, query: &Point3, k: usize) -> Vec<Neighbor> {
        if k == 0 {
            return Vec::new();
        }
        let mut heap: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
        self.search_k(self.root, query, k, &mut heap);
        heap.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        heap.into_iter()
            .map(|(d2, i)| Neighbor { point: self.points[i], distance: d2.sqrt(), index: i })
            .collect()
    }

    /// All points with distance <= `radius`, ordered by (distance, index).
    pub fn within_radius(&self, query: &Point3, radius: f64) -> Vec<Neighbor> {
        let mut hits: Vec<(f64, usize)> = Vec::new();
        self.search_radius(self.root, query, radius * radius, &mut hits);
        hits.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        hits.into_iter()
            .map(|(d2, i)| Neighbor { point: self.points[i], distance: d2.sqrt(), index: i })
            .collect()
    }

    fn search(&self, node: usize, q: &Point3, best: &mut Best) {
        match &self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[*start..*end] {
                    let d2 = (self.points[i] - q).norm_squared();
                    if d2 < best.d2 || (d2 == best.d2 && i < best.index) {
                        best.d2 = d2;
                        best.index = i;
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                let delta = q[*axis] - value;
                let (near, far) = if delta < 0.0 { (*left, *right) } else { (*right, *left) };
                self.search(near, q, best);
                // The far side can still hold an equal-distance lower index,
                // so recurse on <= rather than <.
                if delta * delta <= best.d2 {
                    self.search(far, q, best);
                }
            }
        }
    }

    fn search_k(&self, node: usize, q: &Point3, k: usize, heap: &mut Vec<(f64, usize)>) {
        match &self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[*start..*end] {
                    let d2 = (self.points[i] - q).norm_squared();
                    if heap.len() < k {
                        heap.push((d2, i));
                        heap.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.cmp(&a.1)));
                    } else if (d2, i) < heap[0] {
                        heap[0] = (d2, i);
                        heap.sort_by(|a, b| b.0.total_cmp(&a.0).then(b.1.cmp(&a.1)));
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                let delta = q[*axis] - value;
                let (near, far) = if delta < 0.0 { (*left, *right) } else { (*right, *left) };
                self.search_k(near, q, k, heap);
                let worst = if heap.len() < k { f64::INFINITY } else { heap[0].0 };
                if delta * delta <= worst {
                    self.search_k(far, q, k, heap);
                }
            }
        }
    }

    fn search_radius(&self, node: usize, q: &Point3, r2: f64, hits: &mut Vec<(f64, usize)>) {
        match &self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[*start..*end] {
                    let d2 = (self.points[i] - q).norm_squared();
                    if d2 <= r2 {
                        hits.push((d2, i));
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                let delta = q[*axis] - value;
                let (near, far) = if delta < 0.0 { (*left, *right) } else { (*right, *left) };
                self.search_radius(near, q, r2, hits);
                if delta * delta <= r2 {
                    self.search_radius(far, q, r2, hits);
                }
            }
        }
    }
}

struct Best {
    d2: f64,
    index: usize,
}

fn build_node(
    points: &[Point3],
    order: &mut [usize],
    start: usize,
    end: usize,
    nodes: &mut Vec<Node>,
) -> usize {
    let count = end - start;
    if count <= LEAF_SIZE {
        nodes.push(Node::Leaf { start, end });
        return nodes.len() - 1;
    }
    // Split the widest axis at the median of the local slice.
    let slice = &mut order[start..end];
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for &i in slice.iter() {
        for a in 0..3 {
            lo[a] = lo[a].min(points[i][a]);
            hi[a] = hi[a].max(points[i][a]);
        }
    }
    let axis = (0..3)
        .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
        .unwrap();
    let mid = count / 2;
    slice.select_nth_unstable_by(mid, |&a, &b| {
        points[a][axis].total_cmp(&points[b][axis]).then(a.cmp(&b))
    });
    let value = points[slice[mid]][axis];
    let placeholder = nodes.len();
    nodes.push(Node::Leaf { start: 0, end: 0 });
    let left = build_node(points, order, start, start + mid, nodes);
    let right = build_node(points, order, start + mid, end, nodes);
    nodes[placeholder] = Node::Split { axis, value, left, right };
    placeholder
}

/// Exhaustive-scan reference used by tests and the acceptance suite to
/// validate index results; independent of the tree structure.
pub fn linear_scan_nearest(points: &[Point3], query: &Point3) -> Neighbor {
    let mut best_d2 = f64::INFINITY;
    let mut best_i = usize::MAX;
    for (i, p) in points.iter().enumerate() {
        let d2 = (p - query).norm_squared();
        if d2 < best_d2 {
            best_d2 = d2;
            best_i = i;
        }
    }
    Neighbor { point: points[best_i], distance: best_d2.sqrt(), index: best_i }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cloud(points: Vec<Point3>) -> PointCloud {
        PointCloud::new(points)
    }

    #[test]
    fn empty_cloud_is_rejected() {
        assert!(matches!(SpatialIndex::build(&cloud(vec![])), Err(GeometryError::EmptyInput)));
    }

    #[test]
    fn single_point_always_wins() {
        let p = Point3::new(0.5, 0.5, 0.5);
        let idx = SpatialIndex::build(&cloud(vec![p])).unwrap();
        let hit = idx.nearest(&Point3::new(100.0, -3.0, 0.0));
        assert_eq!(hit.index, 0);
        assert_eq!(hit.point, p);
    }

    #[test]
    fn strictly_closer_point_wins() {
        let idx = SpatialIndex::build(&cloud(vec![
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
        ]))
        .unwrap();
        let hit = idx.nearest(&Point3::new(0.4, 0.0, 0.0));
        assert_eq!(hit.index, 0);
    }

    #[test]
    fn pythagorean_distance() {
        let idx = SpatialIndex::build(&cloud(vec![Point3::origin()])).unwrap();
        let hit = idx.nearest(&Point3::new(0.0, 3.0, 4.0));
        assert!((hit.distance - 5.0).abs() < 1e-15);
    }

    #[test]
    fn tie_breaks_to_lowest_index() {
        let idx = SpatialIndex::build(&cloud(vec![
            Point3::new(-1.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
        ]))
        .unwrap();
        let hit = idx.nearest(&Point3::origin());
        assert_eq!(hit.index, 0);
        assert!((hit.distance - 1.0).abs() < 1e-15);
    }

    fn lcg_points(n: usize, seed: u64, scale: f64) -> Vec<Point3> {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        (0..n).map(|_| Point3::new(next() * scale, next() * scale, next() * scale)).collect()
    }

    #[test]
    fn matches_linear_scan_on_random_clouds() {
        let pts = lcg_points(1000, 7, 1.0);
        let idx = SpatialIndex::build(&cloud(pts.clone())).unwrap();
        let queries = lcg_points(100, 99, 1.2);
        for q in &queries {
            let fast = idx.nearest(q);
            let slow = linear_scan_nearest(&pts, q);
            assert_eq!(fast.index, slow.index);
            assert!((fast.distance - slow.distance).abs() <= 1e-12);
        }
    }

    #[test]
    fn k_nearest_matches_sorted_scan() {
        let pts = lcg_points(300, 21, 1.0);
        let idx = SpatialIndex::build(&cloud(pts.clone())).unwrap();
        for q in &lcg_points(20, 5, 1.0) {
            let got = idx.k_nearest(q, 12);
            let mut all: Vec<(f64, usize)> = pts
                .iter()
                .enumerate()
                .map(|(i, p)| ((p - q).norm_squared(), i))
                .collect();
            all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let want: Vec<usize> = all[..12].iter().map(|e| e.1).collect();
            let got_idx: Vec<usize> = got.iter().map(|n| n.index).collect();
            assert_eq!(got_idx, want);
        }
    }

    #[test]
    fn within_radius_matches_filtered_scan() {
        let pts = lcg_points(400, 33, 1.0);
        let idx = SpatialIndex::build(&cloud(pts.clone())).unwrap();
        let q = Point3::new(0.1, -0.2, 0.05);
        let r = 0.45;
        let got: Vec<usize> = idx.within_radius(&q, r).iter().map(|n| n.index).collect();
        let mut want: Vec<(f64, usize)> = pts
            .iter()
            .enumerate()
            .filter(|(_, p)| ((*p) - q).norm() <= r)
            .map(|(i, p)| ((p - q).norm_squared(), i))
            .collect();
        want.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        assert_eq!(got, want.into_iter().map(|e| e.1).collect::<Vec<_>>());
    }
}
