//! Incremental convex hull in ℝ³.
//!
//! Points are inserted one at a time. Each insertion deletes the faces the
//! point can see and closes the hole with a fan of triangles over the
//! horizon. The O(n·F) visibility scan is fine for the curve sizes used here.

use std::collections::HashSet;

use super::HullError;
use crate::vecn::{cross3, dot};

/// Visibility tolerance relative to the point-set diameter.
const PLANE_REL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Hull3d {
    points: Vec<[f64; 3]>,
    faces: Vec<[usize; 3]>,
    normals: Vec<[f64; 3]>,
    offsets: Vec<f64>,
    scale: f64,
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn norm3(a: [f64; 3]) -> f64 {
    dot(&a, &a).sqrt()
}

fn plane(points: &[[f64; 3]], f: [usize; 3]) -> ([f64; 3], f64) {
    let (a, b, c) = (points[f[0]], points[f[1]], points[f[2]]);
    let n = cross3(&sub(b, a), &sub(c, a));
    let l = norm3(n);
    let n = [n[0] / l, n[1] / l, n[2] / l];
    (n, dot(&n, &a))
}

pub fn hull_3d(points: &[[f64; 3]]) -> Result<Hull3d, HullError> {
    if points.len() < 4 {
        return Err(HullError::TooFewPoints(points.len()));
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(HullError::NonFinite);
    }
    let far = |from: &dyn Fn(&[f64; 3]) -> f64| {
        (0..points.len())
            .max_by(|&i, &j| from(&points[i]).total_cmp(&from(&points[j])))
            .unwrap()
    };
    let i0 = far(&|p| -p[0]);
    let i1 = far(&|p| norm3(sub(*p, points[i0])));
    let scale = norm3(sub(points[i1], points[i0]));
    if scale == 0.0 {
        return Err(HullError::Coplanar);
    }
    let eps = PLANE_REL * scale;
    let line = sub(points[i1], points[i0]);
    let i2 = far(&|p| norm3(cross3(&sub(*p, points[i0]), &line)) / scale);
    let n012 = cross3(&line, &sub(points[i2], points[i0]));
    if norm3(n012) / scale <= eps {
        return Err(HullError::Coplanar);
    }
    let n012_unit = {
        let l = norm3(n012);
        [n012[0] / l, n012[1] / l, n012[2] / l]
    };
    let i3 = far(&|p| dot(&sub(*p, points[i0]), &n012_unit).abs());
    let h3 = dot(&sub(points[i3], points[i0]), &n012_unit);
    if h3.abs() <= 1e3 * eps {
        return Err(HullError::Coplanar);
    }

    let mut hull = Hull3d {
        points: points.to_vec(),
        faces: Vec::new(),
        normals: Vec::new(),
        offsets: Vec::new(),
        scale,
    };
    // Orient the seed tetrahedron outward.
    let (a, b, c, d) = if h3 > 0.0 { (i0, i2, i1, i3) } else { (i0, i1, i2, i3) };
    for f in [[a, b, c], [a, d, b], [b, d, c], [c, d, a]] {
        hull.push_face(f);
    }

    let seeds = [i0, i1, i2, i3];
    for p in 0..points.len() {
        if seeds.contains(&p) {
            continue;
        }
        let x = points[p];
        let visible: Vec<bool> = (0..hull.faces.len())
            .map(|f| dot(&hull.normals[f], &x) - hull.offsets[f] > eps)
            .collect();
        if !visible.iter().any(|&v| v) {
            continue;
        }
        let mut edges = HashSet::new();
        for (f, face) in hull.faces.iter().enumerate() {
            if visible[f] {
                for k in 0..3 {
                    edges.insert((face[k], face[(k + 1) % 3]));
                }
            }
        }
        let horizon: Vec<(usize, usize)> = hull
            .faces
            .iter()
            .enumerate()
            .filter(|(f, _)| visible[*f])
            .flat_map(|(_, face)| (0..3).map(move |k| (face[k], face[(k + 1) % 3])))
            .filter(|(u, v)| !edges.contains(&(*v, *u)))
            .collect();
        hull.retain_faces(|f| !visible[f]);
        for (u, v) in horizon {
            hull.push_face([u, v, p]);
        }
    }
    Ok(hull)
}

impl Hull3d {
    fn push_face(&mut self, f: [usize; 3]) {
        let (n, d) = plane(&self.points, f);
        self.faces.push(f);
        self.normals.push(n);
        self.offsets.push(d);
    }

    fn retain_faces(&mut self, keep: impl Fn(usize) -> bool) {
        let mut k = 0;
        for f in 0..self.faces.len() {
            if keep(f) {
                self.faces[k] = self.faces[f];
                self.normals[k] = self.normals[f];
                self.offsets[k] = self.offsets[f];
                k += 1;
            }
        }
        self.faces.truncate(k);
        self.normals.truncate(k);
        self.offsets.truncate(k);
    }

    /// Triangles as indices into the input, counterclockwise seen from outside.
    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Unit outward normal and offset `⟨n, x⟩ = d` of each face.
    pub fn planes(&self) -> impl Iterator<Item = ([f64; 3], f64)> + '_ {
        self.normals.iter().copied().zip(self.offsets.iter().copied())
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    /// Sorted indices of input points that are hull vertices.
    pub fn vertex_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.faces.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Mean of the hull vertices; an interior point of any non-degenerate hull.
    pub fn vertex_centroid(&self) -> [f64; 3] {
        let v = self.vertex_indices();
        let mut c = [0.0; 3];
        for &i in &v {
            for k in 0..3 {
                c[k] += self.points[i][k];
            }
        }
        c.map(|x| x / v.len() as f64)
    }

    /// Largest signed distance of `x` outside any face plane.
    pub fn max_plane_excess(&self, x: [f64; 3]) -> f64 {
        self.planes()
            .map(|(n, d)| dot(&n, &x) - d)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: [f64; 3], tol: f64) -> bool {
        self.max_plane_excess(x) <= tol
    }

    /// Copy of the hull with `origin` moved to the coordinate origin.
    pub fn recentered(&self, origin: [f64; 3]) -> Hull3d {
        let points = self.points.iter().map(|p| sub(*p, origin)).collect();
        let offsets = self
            .planes()
            .map(|(n, d)| d - dot(&n, &origin))
            .collect();
        Hull3d {
            points,
            faces: self.faces.clone(),
            normals: self.normals.clone(),
            offsets,
            scale: self.scale,
        }
    }

    /// Minkowski functional `M(x) = inf{λ > 0 : x/λ ∈ K}` of the hull body.
    ///
    /// For a polytope with the origin inside, `M(x) = max_f ⟨n_f, x⟩ / d_f`.
    pub fn minkowski(&self, x: [f64; 3]) -> Result<f64, HullError> {
        let min_offset = self.offsets.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min_offset > PLANE_REL * self.scale) {
            return Err(HullError::OriginNotInterior);
        }
        Ok(self
            .planes()
            .map(|(n, d)| dot(&n, &x) / d)
            .fold(0.0, f64::max))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check_closed_and_outward(h: &Hull3d) {
        // Every directed edge appears once and its twin once.
        let mut edges = HashSet::new();
        for f in h.faces() {
            for k in 0..3 {
                assert!(edges.insert((f[k], f[(k + 1) % 3])));
            }
        }
        for &(u, v) in &edges {
            assert!(edges.contains(&(v, u)));
        }
        let c = h.vertex_centroid();
        for (n, d) in h.planes() {
            assert!(dot(&n, &c) < d);
        }
        let tol = 1e-10 * h.scale;
        for p in h.points() {
            assert!(h.contains(*p, tol));
        }
    }

    #[test]
    fn tetrahedron() {
        let pts = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
        let h = hull_3d(&pts).unwrap();
        assert_eq!(h.faces().len(), 4);
        check_closed_and_outward(&h);
    }

    #[test]
    fn cube() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push([(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]);
        }
        pts.push([0.5, 0.5, 0.5]);
        let h = hull_3d(&pts).unwrap();
        assert_eq!(h.faces().len(), 12);
        assert_eq!(h.vertex_indices(), (0..8).collect::<Vec<_>>());
        check_closed_and_outward(&h);
    }

    #[test]
    fn sphere_sample_every_point_extreme() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts: Vec<[f64; 3]> = (0..200)
            .map(|_| {
                let z: f64 = rng.gen_range(-1.0..1.0);
                let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let r = (1.0 - z * z).sqrt();
                [r * a.cos(), r * a.sin(), z]
            })
            .collect();
        let h = hull_3d(&pts).unwrap();
        assert_eq!(h.vertex_indices().len(), 200);
        assert_eq!(h.faces().len(), 2 * 200 - 4);
        check_closed_and_outward(&h);
    }

    #[test]
    fn coplanar_and_small_inputs() {
        let square = [[0.0, 0.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 1.0], [0.0, 1.0, 1.0], [0.5, 0.2, 1.0]];
        assert!(matches!(hull_3d(&square), Err(HullError::Coplanar)));
        assert!(matches!(hull_3d(&square[..3]), Err(HullError::TooFewPoints(3))));
    }

    #[test]
    fn minkowski_on_cube() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push([
                (i & 1) as f64 - 0.5,
                ((i >> 1) & 1) as f64 - 0.5,
                ((i >> 2) & 1) as f64 - 0.5,
            ]);
        }
        let h = hull_3d(&pts).unwrap();
        assert!((h.minkowski([2.0, 0.0, 0.0]).unwrap() - 4.0).abs() < 1e-12);
        assert!((h.minkowski([0.25, 0.0, 0.0]).unwrap() - 0.5).abs() < 1e-12);
        let shifted = h.recentered([0.5, 0.5, 0.5]);
        assert!(matches!(shifted.minkowski([0.1, 0.0, 0.0]), Err(HullError::OriginNotInterior)));
    }
}
