//! Spherical curves and the chord functional.
//!
//! The chord functional `f(u₁, u₂) = ‖X(u₂) − X(u₁)‖²` lives on the
//! parameter torus. Along the flow of a spherical curve it satisfies the
//! heat equation `∂t f − Δf = −4` with `Δ = ∂²s₁ + ∂²s₂`. Away from the
//! diagonal band of arc distance `< π/C` it stays bounded below while the
//! curvature is bounded by `C`; inside the band the comparison bound
//! `f ≥ (4/C²)·sin²(C·ℓ/2)` holds. The monitors here track all of these.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::flow::{FamilyMonitor, FlowState, Monitor, MonitorSample};
use crate::geometry::{frenet, CurveError, DiscreteCurve, VertexVectors};
use crate::vecn::{dist_sq, dot, segment_segment_dist_sq};

/// Headroom applied to the observed maximum curvature.
pub const CURVATURE_HEADROOM: f64 = 1.1;

/// Fraction of the barrier the minimum chord may drop to.
pub const BARRIER_SLACK: f64 = 0.95;

/// Eigenvalue ratio of the covariance below which points are coplanar.
const PLANAR_RATIO: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SphericalError {
    #[error("points are coplanar; the fitted sphere is not unique")]
    Planar,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("least-squares sphere fit failed")]
    FitFailed,
    #[error("need at least 3 chord fields, got {0}")]
    InsufficientSnapshots(usize),
    #[error("chord fields have mismatched sizes")]
    SizeMismatch,
    #[error("recording interval must be positive")]
    BadInterval,
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SphereFit {
    pub center: Vec<f64>,
    pub radius: f64,
    /// Root mean square of `‖p − center‖ − radius`.
    pub rms_deviation: f64,
    /// The points were coplanar and the fit is the smallest sphere through
    /// their best circle (see [`fit_sphere_or_circle`]).
    pub planar: bool,
}

/// Algebraic least-squares sphere: solves `2⟨p, c⟩ + k = ‖p‖²` with
/// `k = r² − ‖c‖²`, on centred coordinates for conditioning.
pub fn fit_sphere_points<P: AsRef<[f64]>>(points: &[P]) -> Result<SphereFit, SphericalError> {
    let dim = points.first().map_or(0, |p| p.as_ref().len());
    let n = points.len();
    if n < dim + 1 || dim == 0 {
        return Err(SphericalError::TooFewPoints {
            needed: dim + 1,
            got: n,
        });
    }
    let mut mean = vec![0.0; dim];
    for p in points {
        for (m, x) in mean.iter_mut().zip(p.as_ref()) {
            *m += x / n as f64;
        }
    }
    let mut cov = DMatrix::<f64>::zeros(dim, dim);
    let mut a = DMatrix::<f64>::zeros(n, dim + 1);
    let mut rhs = DVector::<f64>::zeros(n);
    for (r, p) in points.iter().enumerate() {
        let q: Vec<f64> = p.as_ref().iter().zip(&mean).map(|(x, m)| x - m).collect();
        for k in 0..dim {
            a[(r, k)] = 2.0 * q[k];
            for l in 0..dim {
                cov[(k, l)] += q[k] * q[l];
            }
        }
        a[(r, dim)] = 1.0;
        rhs[r] = dot(&q, &q);
    }
    let eig = SymmetricEigen::new(cov).eigenvalues;
    let (lo, hi) = (eig.min(), eig.max());
    if !(hi > 0.0) || lo / hi < PLANAR_RATIO {
        return Err(SphericalError::Planar);
    }
    let sol = a
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|_| SphericalError::FitFailed)?;
    let c: Vec<f64> = (0..dim).map(|k| sol[k]).collect();
    let r2 = sol[dim] + dot(&c, &c);
    if !(r2 > 0.0) {
        return Err(SphericalError::FitFailed);
    }
    let radius = r2.sqrt();
    let center: Vec<f64> = c.iter().zip(&mean).map(|(x, m)| x + m).collect();
    let ss: f64 = points
        .iter()
        .map(|p| {
            let d = dist_sq(p.as_ref(), &center).sqrt() - radius;
            d * d
        })
        .sum();
    Ok(SphereFit {
        center,
        radius,
        rms_deviation: (ss / n as f64).sqrt(),
        planar: false,
    })
}

/// Like [`fit_sphere_points`], but coplanar points fall back to the
/// smallest sphere through their circle: centred at the centroid with the
/// mean centroid distance as radius. A curve shrinking to a round point
/// flattens, so near extinction this is the only meaningful fit.
pub fn fit_sphere_or_circle<P: AsRef<[f64]>>(points: &[P]) -> Result<SphereFit, SphericalError> {
    match fit_sphere_points(points) {
        Err(SphericalError::Planar) => {
            let n = points.len() as f64;
            let dim = points[0].as_ref().len();
            let mut center = vec![0.0; dim];
            for p in points {
                for (c, x) in center.iter_mut().zip(p.as_ref()) {
                    *c += x / n;
                }
            }
            let d: Vec<f64> = points.iter().map(|p| dist_sq(p.as_ref(), &center).sqrt()).collect();
            let radius = d.iter().sum::<f64>() / n;
            let ss: f64 = d.iter().map(|x| (x - radius).powi(2)).sum();
            Ok(SphereFit {
                center,
                radius,
                rms_deviation: (ss / n).sqrt(),
                planar: true,
            })
        }
        other => other,
    }
}

pub fn fit_sphere(curve: &DiscreteCurve) -> Result<SphereFit, SphericalError> {
    let pts: Vec<&[f64]> = curve.points().collect();
    fit_sphere_points(&pts)
}

/// Arclength positions of the vertices along the curve.
///
/// Each edge contributes its chord lengthened by the circular-arc
/// correction `c·(1 + κ²c²/24 + 3κ⁴c⁴/640)` (the series of `2·asin(κc/2)/κ`),
/// with `κ` the mean discrete curvature of the edge's endpoints. The bare
/// chord underestimates the arclength of the sampled smooth curve by O(h³)
/// per edge; the corrected length is exact up to the curvature estimate.
pub fn arc_positions(curve: &DiscreteCurve, curvature: &[f64]) -> (Vec<f64>, f64) {
    let n = curve.len();
    let mut s = Vec::with_capacity(n);
    let mut acc = 0.0;
    for i in 0..n {
        s.push(acc);
        let c = dist_sq(curve.point(i), curve.point(i + 1)).sqrt();
        let k = 0.5 * (curvature[i] + curvature[(i + 1) % n]);
        let x = k * k * c * c;
        acc += c * (1.0 + x / 24.0 + 3.0 * x * x / 640.0);
    }
    (s, acc)
}

#[inline]
fn cyclic_arc(s: &[f64], length: f64, i: usize, j: usize) -> f64 {
    let d = (s[j] - s[i]).abs();
    d.min(length - d)
}

/// Chord functional sampled on the vertex torus.
#[derive(Clone, Debug)]
pub struct ChordField {
    n: usize,
    values: Vec<f64>,
    arc: Vec<f64>,
    length: f64,
}

/// Builds the `N × N` chord matrix and arc distances; O(N²) time and memory.
pub fn chord_field(curve: &DiscreteCurve) -> Result<ChordField, SphericalError> {
    let fr = frenet(curve, 0.0)?;
    let n = curve.len();
    let (s, length) = arc_positions(curve, &fr.curvature);
    let mut values = vec![0.0; n * n];
    let mut arc = vec![0.0; n * n];
    values
        .chunks_mut(n)
        .zip(arc.chunks_mut(n))
        .enumerate()
        .for_each(|(i, (vrow, arow))| {
            let p = curve.point(i);
            for j in 0..n {
                vrow[j] = if i == j { 0.0 } else { dist_sq(p, curve.point(j)) };
                arow[j] = cyclic_arc(&s, length, i, j);
            }
        });
    // Symmetrize exactly: dist_sq(p, q) and dist_sq(q, p) agree bit for bit,
    // but the arc differences may not.
    for i in 0..n {
        for j in i + 1..n {
            arc[j * n + i] = arc[i * n + j];
        }
    }
    Ok(ChordField {
        n,
        values,
        arc,
        length,
    })
}

impl ChordField {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[(i % self.n) * self.n + j % self.n]
    }

    #[inline]
    pub fn arc(&self, i: usize, j: usize) -> f64 {
        self.arc[(i % self.n) * self.n + j % self.n]
    }

    pub fn total_length(&self) -> f64 {
        self.length
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.n * self.n * 24);
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| format!("{:e}", self.value(i, j))).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Local minimum of the chord field.
#[derive(Clone, Debug, PartialEq)]
pub struct ChordMinimum {
    pub i: usize,
    pub j: usize,
    pub f: f64,
    /// `false` when some neighbour ties (a plateau candidate).
    pub strict: bool,
}

/// Local minima over 8-neighbourhoods of the torus grid, restricted to pairs
/// `i < j` at arc distance at least `exclude_arc`.
pub fn chord_minima(field: &ChordField, exclude_arc: f64) -> Vec<ChordMinimum> {
    let n = field.n;
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if field.arc(i, j) < exclude_arc {
                continue;
            }
            let f = field.value(i, j);
            let mut strict = true;
            let mut minimum = true;
            'nb: for di in [n - 1, 0, 1] {
                for dj in [n - 1, 0, 1] {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let g = field.value(i + di, j + dj);
                    if g < f {
                        minimum = false;
                        break 'nb;
                    }
                    if g == f {
                        strict = false;
                    }
                }
            }
            if minimum {
                out.push(ChordMinimum { i, j, f, strict });
            }
        }
    }
    out
}

/// `|⟨T_i, T_j⟩|` clamped to `[0, 1]`; exactly 1 for `i == j`.
pub fn tangent_collinearity(tangents: &VertexVectors, i: usize, j: usize) -> f64 {
    if i == j {
        return 1.0;
    }
    dot(tangents.get(i), tangents.get(j)).abs().min(1.0)
}

/// `count` distinct off-diagonal index pairs from a fixed seed.
pub fn sample_pairs(n: usize, count: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| loop {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i != j {
                break (i, j);
            }
        })
        .collect()
}

/// Discrete `Δf` at `(i, j)` with spacings from the field's arc distances.
fn laplacian(field: &ChordField, i: usize, j: usize) -> f64 {
    let n = field.n;
    let second = |a: f64, b: f64, fm: f64, f0: f64, fp: f64| 2.0 * (a * fp - (a + b) * f0 + b * fm) / (a * b * (a + b));
    let f0 = field.value(i, j);
    let (im, ip) = ((i + n - 1) % n, (i + 1) % n);
    let (jm, jp) = ((j + n - 1) % n, (j + 1) % n);
    let di = second(
        field.arc(im, i),
        field.arc(i, ip),
        field.value(im, j),
        f0,
        field.value(ip, j),
    );
    let dj = second(
        field.arc(jm, j),
        field.arc(j, jp),
        field.value(i, jm),
        f0,
        field.value(i, jp),
    );
    di + dj
}

/// Largest `|∂t f − Δf + 4|` over `pairs`, for chord fields recorded at
/// uniform time spacing `dt_rec`. Every interior snapshot is used as a
/// central-difference point. The vertices must be in correspondence across
/// snapshots, so redistribution has to be off while they are captured.
pub fn heat_residual(
    fields: &[ChordField],
    dt_rec: f64,
    pairs: &[(usize, usize)],
) -> Result<f64, SphericalError> {
    if fields.len() < 3 {
        return Err(SphericalError::InsufficientSnapshots(fields.len()));
    }
    if !(dt_rec > 0.0) {
        return Err(SphericalError::BadInterval);
    }
    let n = fields[0].n;
    if fields.iter().any(|f| f.n != n) {
        return Err(SphericalError::SizeMismatch);
    }
    let mut worst = 0.0f64;
    for w in fields.windows(3) {
        for &(i, j) in pairs {
            let ft = (w[2].value(i, j) - w[0].value(i, j)) / (2.0 * dt_rec);
            worst = worst.max((ft - laplacian(&w[1], i, j) + 4.0).abs());
        }
    }
    Ok(worst)
}

/// Lower bound on `f` at arc distance `ell` for curvature at most `c`.
pub fn schur_chord_bound(c: f64, ell: f64) -> f64 {
    let s = (0.5 * c * ell).sin();
    4.0 / (c * c) * s * s
}

/// Smallest `f − (4/C²)·sin²(C·ℓ/2)` over pairs with `ℓ ≤ π/C`
/// (`+∞` if there are none).
pub fn schur_bound(field: &ChordField, c: f64) -> f64 {
    let reach = std::f64::consts::PI / c;
    let n = field.n;
    let mut margin = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let ell = field.arc(i, j);
            if ell <= reach {
                margin = margin.min(field.value(i, j) - schur_chord_bound(c, ell));
            }
        }
    }
    margin
}

#[derive(Clone, Debug, PartialEq)]
pub struct AvoidanceSample {
    pub t: f64,
    /// Minimum of `f` over pairs at arc distance `≥ π/C_emp`; `None` if the
    /// curve is too short to have such pairs.
    pub min_f_on_d: Option<f64>,
    pub c_emp: f64,
    pub schur_margin: f64,
    pub self_intersect: bool,
    /// Largest chord, squared.
    pub diameter_sq: f64,
}

/// Streams over all pairs once: O(N²) time, O(N) memory.
pub fn avoidance_sample(curve: &DiscreteCurve, curvature: &[f64], t: f64) -> AvoidanceSample {
    let n = curve.len();
    let kmax = curvature.iter().copied().fold(0.0, f64::max);
    let c = CURVATURE_HEADROOM * kmax;
    let reach = if c > 0.0 { std::f64::consts::PI / c } else { f64::INFINITY };
    let (s, length) = arc_positions(curve, curvature);
    let (min_d, margin, dmax) = (0..n)
        .map(|i| {
            let p = curve.point(i);
            let mut acc = (f64::INFINITY, f64::INFINITY, 0.0f64);
            for j in i + 1..n {
                let f = dist_sq(p, curve.point(j));
                acc.2 = acc.2.max(f);
                let ell = cyclic_arc(&s, length, i, j);
                if ell >= reach {
                    acc.0 = acc.0.min(f);
                } else {
                    acc.1 = acc.1.min(f - schur_chord_bound(c, ell));
                }
            }
            acc
        })
        .fold((f64::INFINITY, f64::INFINITY, 0.0f64), |a, b| {
            (a.0.min(b.0), a.1.min(b.1), a.2.max(b.2))
        });
    let min_f_on_d = min_d.is_finite().then_some(min_d);
    AvoidanceSample {
        t,
        min_f_on_d,
        c_emp: c,
        schur_margin: margin,
        self_intersect: min_f_on_d.is_some_and(|m| m < 1e-8 * dmax),
        diameter_sq: dmax,
    }
}

/// Records `min_f_D`, `C_emp` and `schur_margin`.
///
/// A sample is a violation when the curve self-intersects or the minimum
/// chord away from the diagonal band drops below
/// `0.95 · min(initial value, 4/C_emp²)`.
#[derive(Default)]
pub struct AvoidanceMonitor {
    initial: Option<f64>,
    last: Option<AvoidanceSample>,
}

impl AvoidanceMonitor {
    pub fn last_sample(&self) -> Option<&AvoidanceSample> {
        self.last.as_ref()
    }
}

impl Monitor for AvoidanceMonitor {
    fn name(&self) -> &str {
        "avoidance"
    }

    fn columns(&self) -> Vec<String> {
        vec!["min_f_D".into(), "C_emp".into(), "schur_margin".into()]
    }

    fn sample(&mut self, state: &FlowState) -> MonitorSample {
        let s = avoidance_sample(&state.curve, &state.frenet.curvature, state.t);
        if self.initial.is_none() {
            self.initial = s.min_f_on_d;
        }
        let barrier = self
            .initial
            .unwrap_or(f64::INFINITY)
            .min(4.0 / (s.c_emp * s.c_emp));
        let violation = s.self_intersect || s.min_f_on_d.is_some_and(|m| m < BARRIER_SLACK * barrier);
        let out = MonitorSample {
            values: vec![
                s.min_f_on_d,
                Some(s.c_emp),
                s.schur_margin.is_finite().then_some(s.schur_margin),
            ],
            violation,
        };
        self.last = Some(s);
        out
    }
}

/// Records `sphere_rms` and `sphere_radius`; planar curves give empty cells.
pub struct SphericityMonitor {
    tol_rel: f64,
}

impl Default for SphericityMonitor {
    fn default() -> Self {
        Self { tol_rel: 5e-3 }
    }
}

impl Monitor for SphericityMonitor {
    fn name(&self) -> &str {
        "sphericity"
    }

    fn columns(&self) -> Vec<String> {
        vec!["sphere_rms".into(), "sphere_radius".into()]
    }

    fn sample(&mut self, state: &FlowState) -> MonitorSample {
        let pts: Vec<&[f64]> = state.curve.points().collect();
        match fit_sphere_or_circle(&pts) {
            Ok(fit) => MonitorSample {
                values: vec![Some(fit.rms_deviation), Some(fit.radius)],
                violation: fit.rms_deviation > self.tol_rel * fit.radius,
            },
            Err(_) => MonitorSample {
                values: vec![None, None],
                violation: false,
            },
        }
    }
}

/// Smallest distance between two polylines (segment to segment).
pub fn polyline_distance(a: &DiscreteCurve, b: &DiscreteCurve) -> f64 {
    let (na, nb) = (a.len(), b.len());
    (0..na)
        .map(|i| {
            let (p0, p1) = (a.point(i), a.point(i + 1));
            (0..nb)
                .map(|j| segment_segment_dist_sq(p0, p1, b.point(j), b.point(j + 1)))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

/// Smallest distance between non-adjacent edges of a closed polyline.
pub fn min_nonadjacent_distance(curve: &DiscreteCurve) -> f64 {
    let n = curve.len();
    (0..n)
        .map(|i| {
            let (p0, p1) = (curve.point(i), curve.point(i + 1));
            (i + 2..n)
                .filter(|&j| (j + 1) % n != i)
                .map(|j| segment_segment_dist_sq(p0, p1, curve.point(j), curve.point(j + 1)))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

/// Whether non-adjacent edges stay at least `1e-9 · scale` apart.
pub fn is_simple(curve: &DiscreteCurve) -> bool {
    min_nonadjacent_distance(curve) > 1e-9 * curve.bbox_diagonal()
}

/// Pairwise distance and common-sphere consistency of a curve family.
///
/// `pair_min_dist` is the smallest distance between any two members;
/// `mutual_sphere_rms` is the rms deviation of all vertices from one fitted
/// sphere. A sample is a violation when two members touch.
pub struct FamilyAvoidanceMonitor {
    touch_rel: f64,
}

impl Default for FamilyAvoidanceMonitor {
    fn default() -> Self {
        Self { touch_rel: 1e-4 }
    }
}

impl FamilyMonitor for FamilyAvoidanceMonitor {
    fn name(&self) -> &str {
        "family"
    }

    fn columns(&self) -> Vec<String> {
        vec!["pair_min_dist".into(), "mutual_sphere_rms".into()]
    }

    fn sample(&mut self, states: &[FlowState]) -> MonitorSample {
        let mut dmin = f64::INFINITY;
        for a in 0..states.len() {
            for b in a + 1..states.len() {
                dmin = dmin.min(polyline_distance(&states[a].curve, &states[b].curve));
            }
        }
        let all: Vec<&[f64]> = states.iter().flat_map(|s| s.curve.points()).collect();
        let rms = fit_sphere_points(&all).ok().map(|f| f.rms_deviation);
        let scale = states
            .iter()
            .map(|s| s.curve.bbox_diagonal())
            .fold(0.0, f64::max);
        MonitorSample {
            values: vec![dmin.is_finite().then_some(dmin), rms],
            violation: dmin <= self.touch_rel * scale,
        }
    }
}
