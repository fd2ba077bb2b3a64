//! Planar convex hull by Andrew's monotone chain.

use super::HullError;
use crate::vecn::point_segment_dist_2d;

/// Relative tolerance under which a vertex is considered collinear with its
/// hull neighbours.
pub const COLLINEAR_REL: f64 = 1e-12;

/// Counterclockwise convex polygon.
#[derive(Clone, Debug, PartialEq)]
pub struct Hull2d {
    vertices: Vec<[f64; 2]>,
    /// Index of each hull vertex in the input.
    indices: Vec<usize>,
}

#[inline]
fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

#[inline]
fn len(a: [f64; 2], b: [f64; 2]) -> f64 {
    (b[0] - a[0]).hypot(b[1] - a[1])
}

fn bbox_diagonal(points: &[[f64; 2]]) -> f64 {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in points {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    len(lo, hi)
}

pub fn hull_2d(points: &[[f64; 2]]) -> Result<Hull2d, HullError> {
    if points.len() < 3 {
        return Err(HullError::TooFewPoints(points.len()));
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(HullError::NonFinite);
    }
    let tol = COLLINEAR_REL * bbox_diagonal(points);
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| {
        points[i][0]
            .total_cmp(&points[j][0])
            .then(points[i][1].total_cmp(&points[j][1]))
    });
    order.dedup_by(|a, b| points[*a] == points[*b]);

    // `o → a → b` keeps `a` only for a strict left turn: `a` must sit more
    // than `tol` away from the line `o b`.
    let keeps_left = |o: usize, a: usize, b: usize| {
        let (o, a, b) = (points[o], points[a], points[b]);
        cross(o, a, b) > tol * len(o, b)
    };
    let mut chain: Vec<usize> = Vec::with_capacity(2 * order.len());
    for &i in &order {
        while chain.len() >= 2 && !keeps_left(chain[chain.len() - 2], chain[chain.len() - 1], i) {
            chain.pop();
        }
        chain.push(i);
    }
    let lower_len = chain.len() + 1;
    for &i in order.iter().rev().skip(1) {
        while chain.len() >= lower_len && !keeps_left(chain[chain.len() - 2], chain[chain.len() - 1], i) {
            chain.pop();
        }
        chain.push(i);
    }
    chain.pop();
    if chain.len() < 3 {
        return Err(HullError::Collinear);
    }
    Ok(Hull2d {
        vertices: chain.iter().map(|&i| points[i]).collect(),
        indices: chain,
    })
}

impl Hull2d {
    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    fn edges(&self) -> impl Iterator<Item = ([f64; 2], [f64; 2])> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn area(&self) -> f64 {
        0.5 * self
            .edges()
            .map(|(a, b)| a[0] * b[1] - a[1] * b[0])
            .sum::<f64>()
    }

    /// True if `p` is inside or within `tol` outside of every edge line.
    pub fn contains(&self, p: [f64; 2], tol: f64) -> bool {
        self.edges().all(|(a, b)| cross(a, b, p) >= -tol * len(a, b))
    }

    /// Distance from `p` to the boundary polygon (inside or outside).
    pub fn boundary_distance(&self, p: [f64; 2]) -> f64 {
        self.edges()
            .map(|(a, b)| point_segment_dist_2d(p, a, b))
            .fold(f64::INFINITY, f64::min)
    }
}
