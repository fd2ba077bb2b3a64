//! Discrete differential geometry of closed polylines.
//!
//! A [`DiscreteCurve`] samples a closed curve `X: 𝕊¹ → ℝⁿ`; indices are
//! cyclic. Derivatives with respect to arclength use three-point stencils
//! on the two edges adjacent to a vertex. With backward edge length `a` and
//! forward edge length `b`:
//!
//! ```text
//! ∂sX  ≈ (a²·X[i+1] + (b² − a²)·X[i] − b²·X[i−1]) / (a·b·(a+b))
//! ∂s²X ≈ 2·(a·X[i+1] − (a+b)·X[i] + b·X[i−1]) / (a·b·(a+b))
//! ```
//!
//! Both are exact on quadratics. On a uniformly sampled circle the second
//! stencil returns `−(X − c)/r²` exactly.

use thiserror::Error;

use crate::vecn::{cross3, dist, dist_sq, dot, norm};

/// Smallest vertex count accepted for a closed curve.
pub const MIN_VERTICES: usize = 8;

/// Edges shorter than this fraction of the bounding-box diagonal are degenerate.
pub const DEGENERATE_EDGE_REL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("a closed curve needs at least {MIN_VERTICES} vertices, got {0}")]
    TooFewVertices(usize),
    #[error("ambient dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("coordinate buffer of length {len} is not a multiple of dimension {dim}")]
    RaggedCoordinates { len: usize, dim: usize },
    #[error("non-finite coordinate at vertex {0}")]
    NonFinite(usize),
    #[error("degenerate edge starting at vertex {index} (length {length:e})")]
    DegenerateEdge { index: usize, length: f64 },
    #[error("arclength derivative order must be 1 or 2, got {0}")]
    BadOrder(u8),
}

/// Closed polyline in ℝⁿ with cyclic vertex indexing.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteCurve {
    dim: usize,
    coords: Vec<f64>,
}

impl DiscreteCurve {
    /// Builds a curve from a flat coordinate buffer (`dim` numbers per vertex).
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self, CurveError> {
        if dim < 2 {
            return Err(CurveError::BadDimension(dim));
        }
        if coords.len() % dim != 0 {
            return Err(CurveError::RaggedCoordinates {
                len: coords.len(),
                dim,
            });
        }
        let n = coords.len() / dim;
        if n < MIN_VERTICES {
            return Err(CurveError::TooFewVertices(n));
        }
        if let Some(k) = coords.iter().position(|x| !x.is_finite()) {
            return Err(CurveError::NonFinite(k / dim));
        }
        let curve = Self { dim, coords };
        curve.check_edges()?;
        Ok(curve)
    }

    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self, CurveError> {
        let dim = points.first().map(|p| p.as_ref().len()).unwrap_or(0);
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(CurveError::RaggedCoordinates {
                    len: p.len(),
                    dim,
                });
            }
            coords.extend_from_slice(p);
        }
        Self::new(dim, coords)
    }

    /// Samples `n` vertices; `fill(k, out)` writes vertex `k` into `out`.
    pub fn from_fn(
        n: usize,
        dim: usize,
        mut fill: impl FnMut(usize, &mut [f64]),
    ) -> Result<Self, CurveError> {
        if dim < 2 {
            return Err(CurveError::BadDimension(dim));
        }
        let mut coords = vec![0.0; n * dim];
        for (k, chunk) in coords.chunks_exact_mut(dim).enumerate() {
            fill(k, chunk);
        }
        Self::new(dim, coords)
    }

    /// Wraps a buffer produced by an operation that already guarantees the
    /// vertex count and dimension; edges still get checked by the caller.
    pub(crate) fn from_raw(dim: usize, coords: Vec<f64>) -> Self {
        debug_assert!(coords.len() % dim == 0);
        Self { dim, coords }
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Vertex `i`, with cyclic indexing.
    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        let i = i % self.len();
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + DoubleEndedIterator + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Length of edge `i → i+1` for every `i`.
    pub fn edge_lengths(&self) -> Vec<f64> {
        let n = self.len();
        (0..n).map(|i| dist(self.point(i), self.point(i + 1))).collect()
    }

    pub fn total_length(&self) -> f64 {
        self.edge_lengths().iter().sum()
    }

    pub fn min_edge(&self) -> f64 {
        self.edge_lengths().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Maximum distance between two vertices (O(N²)).
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let mut best = 0.0f64;
        for i in 0..n {
            let p = self.point(i);
            for j in i + 1..n {
                best = best.max(dist_sq(p, self.point(j)));
            }
        }
        best.sqrt()
    }

    /// Diagonal of the axis-aligned bounding box; a cheap stand-in for the
    /// diameter (within a factor √dim).
    pub fn bbox_diagonal(&self) -> f64 {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for p in self.points() {
            for k in 0..self.dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        lo.iter()
            .zip(&hi)
            .map(|(l, h)| (h - l) * (h - l))
            .sum::<f64>()
            .sqrt()
    }

    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for p in self.points() {
            for k in 0..self.dim {
                c[k] += p[k];
            }
        }
        let n = self.len() as f64;
        c.iter_mut().for_each(|x| *x /= n);
        c
    }

    /// Applies `f` to every vertex and revalidates.
    pub fn map_points(
        &self,
        out_dim: usize,
        mut f: impl FnMut(&[f64], &mut [f64]),
    ) -> Result<Self, CurveError> {
        let mut coords = vec![0.0; self.len() * out_dim];
        for (p, q) in self.points().zip(coords.chunks_exact_mut(out_dim)) {
            f(p, q);
        }
        Self::new(out_dim, coords)
    }

    pub(crate) fn check_edges(&self) -> Result<(), CurveError> {
        let tol = DEGENERATE_EDGE_REL * self.bbox_diagonal();
        for i in 0..self.len() {
            let length = dist(self.point(i), self.point(i + 1));
            if length <= tol {
                return Err(CurveError::DegenerateEdge { index: i, length });
            }
        }
        Ok(())
    }
}

/// Per-vertex vectors stored contiguously.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexVectors {
    dim: usize,
    data: Vec<f64>,
}

impl VertexVectors {
    pub(crate) fn zeros(n: usize, dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; n * dim],
        }
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub(crate) fn get_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }
}

/// Three-point stencils at one vertex given the neighbours and edge lengths.
#[inline]
pub(crate) fn vertex_stencils(
    prev: &[f64],
    cur: &[f64],
    next: &[f64],
    a: f64,
    b: f64,
    first: &mut [f64],
    second: &mut [f64],
) {
    let denom = a * b * (a + b);
    let wa = a * a / denom;
    let wb = b * b / denom;
    for k in 0..cur.len() {
        let fwd = next[k] - cur[k];
        let bwd = cur[k] - prev[k];
        first[k] = wa * fwd + wb * bwd;
        second[k] = 2.0 * (a * fwd - b * bwd) / denom;
    }
}

/// Discrete `∂sX` (order 1) or `∂s²X` (order 2) at every vertex.
pub fn arclength_derivative(curve: &DiscreteCurve, order: u8) -> Result<VertexVectors, CurveError> {
    if order != 1 && order != 2 {
        return Err(CurveError::BadOrder(order));
    }
    curve.check_edges()?;
    let n = curve.len();
    let dim = curve.dim();
    let edges = curve.edge_lengths();
    let mut first = VertexVectors::zeros(n, dim);
    let mut second = VertexVectors::zeros(n, dim);
    for i in 0..n {
        let a = edges[(i + n - 1) % n];
        let b = edges[i];
        vertex_stencils(
            curve.point(i + n - 1),
            curve.point(i),
            curve.point(i + 1),
            a,
            b,
            first.get_mut(i),
            second.get_mut(i),
        );
    }
    Ok(if order == 1 { first } else { second })
}

/// Discrete Frenet data of a closed curve.
///
/// `curvature_vector` is the raw second-derivative stencil (`κN = ∂s²X`) and
/// is defined at every vertex. The unit normal, binormal and torsion are
/// only reported where the curvature reaches `kappa_floor`.
#[derive(Clone, Debug)]
pub struct FrenetData {
    pub tangent: VertexVectors,
    pub curvature_vector: VertexVectors,
    pub curvature: Vec<f64>,
    normal: VertexVectors,
    has_normal: Vec<bool>,
    binormal: Option<VertexVectors>,
    pub torsion: Vec<Option<f64>>,
    /// Dual edge lengths `(a + b) / 2`.
    pub arclength_weights: Vec<f64>,
    pub edge_lengths: Vec<f64>,
    pub total_length: f64,
    pub kappa_floor: f64,
}

impl FrenetData {
    pub fn len(&self) -> usize {
        self.curvature.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curvature.is_empty()
    }

    pub fn normal(&self, i: usize) -> Option<&[f64]> {
        self.has_normal[i].then(|| self.normal.get(i))
    }

    /// Binormal `T × N`, normalized; only for curves in ℝ³.
    pub fn binormal(&self, i: usize) -> Option<&[f64]> {
        match &self.binormal {
            Some(b) if self.has_normal[i] => Some(b.get(i)),
            _ => None,
        }
    }

    pub fn max_curvature(&self) -> f64 {
        self.curvature.iter().copied().fold(0.0, f64::max)
    }

    pub fn min_edge(&self) -> f64 {
        self.edge_lengths.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Default curvature floor below which the normal is treated as undefined.
/// Costs O(N²); computed once per run.
pub fn default_kappa_floor(curve: &DiscreteCurve) -> f64 {
    1e-8 / curve.diameter()
}

pub fn frenet(curve: &DiscreteCurve, kappa_floor: f64) -> Result<FrenetData, CurveError> {
    curve.check_edges()?;
    Ok(frenet_unchecked(curve, kappa_floor))
}

pub(crate) fn frenet_unchecked(curve: &DiscreteCurve, kappa_floor: f64) -> FrenetData {
    let n = curve.len();
    let dim = curve.dim();
    let edges = curve.edge_lengths();
    let mut tangent = VertexVectors::zeros(n, dim);
    let mut curvature_vector = VertexVectors::zeros(n, dim);
    let mut curvature = vec![0.0; n];
    let mut normal = VertexVectors::zeros(n, dim);
    let mut has_normal = vec![false; n];
    let mut weights = vec![0.0; n];

    for i in 0..n {
        let a = edges[(i + n - 1) % n];
        let b = edges[i];
        weights[i] = 0.5 * (a + b);
        vertex_stencils(
            curve.point(i + n - 1),
            curve.point(i),
            curve.point(i + 1),
            a,
            b,
            tangent.get_mut(i),
            curvature_vector.get_mut(i),
        );
        let t = tangent.get_mut(i);
        let tn = norm(t);
        t.iter_mut().for_each(|x| *x /= tn);
        let kv = curvature_vector.get(i);
        let kappa = norm(kv);
        curvature[i] = kappa;
        if kappa >= kappa_floor && kappa > 0.0 {
            has_normal[i] = true;
            let nv: Vec<f64> = kv.iter().map(|x| x / kappa).collect();
            normal.get_mut(i).copy_from_slice(&nv);
        }
    }

    let mut torsion = vec![None; n];
    let binormal = (dim == 3).then(|| {
        let mut bin = VertexVectors::zeros(n, 3);
        for i in 0..n {
            if has_normal[i] {
                let b = cross3(tangent.get(i), normal.get(i));
                let bn = norm(&b);
                if bn > 0.0 {
                    bin.get_mut(i).copy_from_slice(&[b[0] / bn, b[1] / bn, b[2] / bn]);
                }
            }
        }
        for i in 0..n {
            let (p, q) = ((i + n - 1) % n, (i + 1) % n);
            if !(has_normal[p] && has_normal[i] && has_normal[q]) {
                continue;
            }
            let a = edges[p];
            let b = edges[i];
            let mut db = [0.0; 3];
            let mut scratch = [0.0; 3];
            vertex_stencils(bin.get(p), bin.get(i), bin.get(q), a, b, &mut db, &mut scratch);
            torsion[i] = Some(-dot(&db, normal.get(i)));
        }
        bin
    });

    let total_length = edges.iter().sum();
    FrenetData {
        tangent,
        curvature_vector,
        curvature,
        normal,
        has_normal,
        binormal,
        torsion,
        arclength_weights: weights,
        edge_lengths: edges,
        total_length,
        kappa_floor,
    }
}

/// Unit tangents from the first-derivative stencil.
pub fn unit_tangents(curve: &DiscreteCurve) -> Result<VertexVectors, CurveError> {
    let mut t = arclength_derivative(curve, 1)?;
    for i in 0..t.len() {
        let v = t.get_mut(i);
        let s = norm(v);
        v.iter_mut().for_each(|x| *x /= s);
    }
    Ok(t)
}

/// Resamples the polyline with `n` vertices lying on it, all consecutive
/// chords of equal length, and the first vertex kept in place.
///
/// The common chord length is found by root-finding on the arclength reached
/// after `n` chord steps, which must close the loop exactly. Vertices of a
/// polyline that already has equal chords are reproduced.
pub fn resample_uniform(curve: &DiscreteCurve, n: usize) -> Result<DiscreteCurve, CurveError> {
    if n < MIN_VERTICES {
        return Err(CurveError::TooFewVertices(n));
    }
    curve.check_edges()?;
    let walker = ChordWalker::new(curve);
    let length = walker.length;
    let target = length;

    let mut hi = length / n as f64;
    let mut f_hi = walker.march(hi, n, None) - target;
    if f_hi == 0.0 {
        return Ok(walker.collect(hi, n));
    }
    let mut lo = 0.5 * hi;
    let mut f_lo = walker.march(lo, n, None) - target;
    let mut guard = 0;
    while f_lo > 0.0 && guard < 60 {
        hi = lo;
        f_hi = f_lo;
        lo *= 0.5;
        f_lo = walker.march(lo, n, None) - target;
        guard += 1;
    }
    // Illinois-modified regula falsi on F(c) − L.
    let mut side = 0i8;
    let mut c = hi;
    let tol = 4.0 * f64::EPSILON * length;
    for _ in 0..200 {
        c = (lo * f_hi - hi * f_lo) / (f_hi - f_lo);
        if !(c > lo && c < hi) {
            c = 0.5 * (lo + hi);
        }
        let fc = walker.march(c, n, None) - target;
        if fc.abs() <= tol || (hi - lo) <= 2.0 * f64::EPSILON * hi {
            break;
        }
        if fc > 0.0 {
            hi = c;
            f_hi = fc;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        } else {
            lo = c;
            f_lo = fc;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        }
    }
    let out = walker.collect(c, n);
    out.check_edges()?;
    Ok(out)
}

struct ChordWalker<'a> {
    curve: &'a DiscreteCurve,
    cumulative: Vec<f64>,
    edges: Vec<f64>,
    length: f64,
}

impl<'a> ChordWalker<'a> {
    fn new(curve: &'a DiscreteCurve) -> Self {
        let edges = curve.edge_lengths();
        let mut cumulative = Vec::with_capacity(edges.len());
        let mut s = 0.0;
        for e in &edges {
            cumulative.push(s);
            s += e;
        }
        Self {
            curve,
            cumulative,
            edges,
            length: s,
        }
    }

    /// Steps `count` chords of length `c` from vertex 0 and returns the
    /// unwrapped arclength position of the last point.
    fn march(&self, c: f64, count: usize, mut out: Option<&mut Vec<f64>>) -> f64 {
        let n = self.curve.len();
        let dim = self.curve.dim();
        let c2 = c * c;
        let mut seg = 0usize;
        let mut lam = 0.0f64;
        let mut p = self.curve.point(0).to_vec();
        let mut pos = 0.0;
        let limit = 3 * n;
        for m in 1..=count {
            loop {
                if seg >= limit {
                    return f64::INFINITY;
                }
                let a = self.curve.point(seg);
                let b = self.curve.point(seg + 1);
                if dist_sq(b, &p) >= c2 {
                    let mut qa = 0.0;
                    let mut qb = 0.0;
                    let mut qc = -c2;
                    for k in 0..dim {
                        let d = b[k] - a[k];
                        let w = a[k] - p[k];
                        qa += d * d;
                        qb += 2.0 * w * d;
                        qc += w * w;
                    }
                    let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
                    let mut mu = if qb >= 0.0 {
                        // larger root without cancellation
                        let q = -0.5 * (qb + disc);
                        if q != 0.0 {
                            qc / q
                        } else {
                            1.0
                        }
                    } else {
                        -0.5 * (qb - disc) / qa
                    };
                    mu = mu.clamp(lam, 1.0);
                    for k in 0..dim {
                        p[k] = a[k] + mu * (b[k] - a[k]);
                    }
                    lam = mu;
                    let lap = (seg / n) as f64;
                    pos = lap * self.length + self.cumulative[seg % n] + mu * self.edges[seg % n];
                    break;
                }
                seg += 1;
                lam = 0.0;
            }
            if m < count {
                if let Some(buf) = out.as_deref_mut() {
                    buf.extend_from_slice(&p);
                }
            }
        }
        pos
    }

    fn collect(&self, c: f64, n: usize) -> DiscreteCurve {
        let mut coords = Vec::with_capacity(n * self.curve.dim());
        coords.extend_from_slice(self.curve.point(0));
        self.march(c, n, Some(&mut coords));
        DiscreteCurve::from_raw(self.curve.dim(), coords)
    }
}
