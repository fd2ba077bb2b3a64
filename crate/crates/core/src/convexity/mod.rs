//! Convex hulls and the convexity functionals of closed curves.
//!
//! * Space-curve convexity: a curve is convex when every vertex lies on the
//!   boundary of its own convex hull, i.e. the Minkowski functional of the
//!   hull, evaluated from an interior origin, equals one along the curve.
//! * Planar projections: the star-shapedness functional
//!   `φ = ‖X − x‖ − |⟨X − x, T⟩|`, the Frenet data of the projected curve and
//!   the convexity defect `Φ`, the largest distance from a projected vertex
//!   to the boundary of the projected hull.

mod hull2d;
mod hull3d;

pub use hull2d::{hull_2d, Hull2d};
pub use hull3d::{hull_3d, Hull3d};

use nalgebra::{Matrix3, SymmetricEigen};
use thiserror::Error;

use crate::flow::{FlowState, Monitor, MonitorSample};
use crate::geometry::{unit_tangents, CurveError, DiscreteCurve};
use crate::vecn::{dot, norm, point_segment_dist_2d};

/// Default threshold on `‖PT‖` below which a projection counts as irregular.
pub const REGULARITY_THRESHOLD: f64 = 1e-3;

/// Default convexity tolerance relative to the curve diameter.
pub const CONVEXITY_TOL_REL: f64 = 1e-6;

/// Largest admissible projected convexity defect relative to the diameter.
pub const PHI_TOL_REL: f64 = 5e-3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HullError {
    #[error("need more points for a hull, got {0}")]
    TooFewPoints(usize),
    #[error("non-finite coordinate in hull input")]
    NonFinite,
    #[error("all points are collinear")]
    Collinear,
    #[error("all points are coplanar; use the planar hull in the fitted plane")]
    Coplanar,
    #[error("origin is not interior to the hull; recenter first")]
    OriginNotInterior,
    #[error("unsupported ambient dimension {0}")]
    Dimension(usize),
    #[error("invalid projection: {0}")]
    Projection(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

/// Orthogonal projection onto a plane given by an orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection {
    u: Vec<f64>,
    v: Vec<f64>,
}

impl Projection {
    /// Validates the basis: unit vectors, mutually orthogonal, within 1e-12.
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self, HullError> {
        if u.len() != v.len() || u.len() < 2 {
            return Err(HullError::Projection("basis vectors must share a dimension ≥ 2".into()));
        }
        let tol = 1e-12;
        if (norm(&u) - 1.0).abs() > tol || (norm(&v) - 1.0).abs() > tol {
            return Err(HullError::Projection("basis vectors must have unit length".into()));
        }
        if dot(&u, &v).abs() > tol {
            return Err(HullError::Projection("basis vectors must be orthogonal".into()));
        }
        Ok(Self { u, v })
    }

    /// Gram–Schmidt on two independent vectors.
    pub fn orthonormalized(u: &[f64], v: &[f64]) -> Result<Self, HullError> {
        let nu = norm(u);
        if nu == 0.0 || u.len() != v.len() {
            return Err(HullError::Projection("degenerate basis".into()));
        }
        let e1: Vec<f64> = u.iter().map(|x| x / nu).collect();
        let c = dot(v, &e1);
        let w: Vec<f64> = v.iter().zip(&e1).map(|(x, e)| x - c * e).collect();
        let nw = norm(&w);
        if nw <= 1e-12 * norm(v) {
            return Err(HullError::Projection("basis vectors are parallel".into()));
        }
        let e2 = w.iter().map(|x| x / nw).collect();
        Self::new(e1, e2)
    }

    /// Projection onto the first two coordinate axes.
    pub fn xy(dim: usize) -> Self {
        let mut u = vec![0.0; dim];
        let mut v = vec![0.0; dim];
        u[0] = 1.0;
        v[1] = 1.0;
        Self { u, v }
    }

    pub fn dim(&self) -> usize {
        self.u.len()
    }

    pub fn basis(&self) -> (&[f64], &[f64]) {
        (&self.u, &self.v)
    }

    #[inline]
    pub fn apply(&self, x: &[f64]) -> [f64; 2] {
        [dot(&self.u, x), dot(&self.v, x)]
    }

    pub fn project_curve(&self, curve: &DiscreteCurve) -> Vec<[f64; 2]> {
        curve.points().map(|p| self.apply(p)).collect()
    }
}

/// Result of the space-curve convexity test.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceConvexity {
    pub convex: bool,
    /// Largest distance (length units) from a vertex to the hull boundary,
    /// measured along the ray from the hull centre.
    pub max_defect: f64,
    pub argmax_vertex: usize,
    /// The curve was coplanar and the planar hull was used instead.
    pub planar: bool,
}

/// Minkowski functional of `hull` at `x`; the origin must be interior.
pub fn minkowski_functional(hull: &Hull3d, x: [f64; 3]) -> Result<f64, HullError> {
    hull.minkowski(x)
}

fn as3(p: &[f64]) -> [f64; 3] {
    [p[0], p[1], p[2]]
}

/// Best-fit plane through the vertices (principal axes of the covariance).
pub fn fitted_plane(curve: &DiscreteCurve) -> Result<Projection, HullError> {
    if curve.dim() != 3 {
        return Err(HullError::Dimension(curve.dim()));
    }
    let c = curve.centroid();
    let mut cov = Matrix3::zeros();
    for p in curve.points() {
        let d = nalgebra::Vector3::new(p[0] - c[0], p[1] - c[1], p[2] - c[2]);
        cov += d * d.transpose();
    }
    let eig = SymmetricEigen::new(cov);
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let col = |k: usize| eig.eigenvectors.column(order[k]).iter().copied().collect::<Vec<f64>>();
    Projection::orthonormalized(&col(0), &col(1))
}

/// Convexity of a space curve in the sense of its own hull's Minkowski
/// functional. `tol` is absolute (length units); see [`CONVEXITY_TOL_REL`].
pub fn is_convex_space_curve(curve: &DiscreteCurve, tol: f64) -> Result<SpaceConvexity, HullError> {
    let planar_check = |proj: Projection| -> Result<SpaceConvexity, HullError> {
        let pts = proj.project_curve(curve);
        let hull = hull_2d(&pts)?;
        let (argmax, max_defect) = max_boundary_distance(&hull, &pts);
        Ok(SpaceConvexity {
            convex: max_defect < tol,
            max_defect,
            argmax_vertex: argmax,
            planar: true,
        })
    };
    match curve.dim() {
        2 => planar_check(Projection::xy(2)),
        3 => {
            let pts: Vec<[f64; 3]> = curve.points().map(as3).collect();
            let hull = match hull_3d(&pts) {
                Ok(h) => h,
                Err(HullError::Coplanar) => return planar_check(fitted_plane(curve)?),
                Err(e) => return Err(e),
            };
            let center = hull.vertex_centroid();
            let body = hull.recentered(center);
            let mut max_defect = 0.0f64;
            let mut argmax = 0;
            for (i, p) in pts.iter().enumerate() {
                let x = [p[0] - center[0], p[1] - center[1], p[2] - center[2]];
                let m = body.minkowski(x)?;
                // Radial gap between x and the boundary point x / M.
                let gap = if m > 0.0 { (1.0 - m) * norm(&x) / m } else { 0.0 };
                if gap > max_defect {
                    max_defect = gap;
                    argmax = i;
                }
            }
            Ok(SpaceConvexity {
                convex: max_defect < tol,
                max_defect,
                argmax_vertex: argmax,
                planar: false,
            })
        }
        d => Err(HullError::Dimension(d)),
    }
}

fn max_boundary_distance(hull: &Hull2d, pts: &[[f64; 2]]) -> (usize, f64) {
    pts.iter()
        .enumerate()
        .map(|(i, p)| (i, hull.boundary_distance(*p)))
        .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best })
}

/// `min_i ‖X_i − x‖ − |⟨X_i − x, T_i⟩|`; positive certifies that the curve
/// is star-shaped with respect to `x`.
pub fn phi_star(curve: &DiscreteCurve, x: &[f64]) -> Result<f64, HullError> {
    let t = unit_tangents(curve)?;
    Ok(curve
        .points()
        .zip(t.iter())
        .map(|(p, t)| {
            let d: Vec<f64> = p.iter().zip(x).map(|(a, b)| a - b).collect();
            norm(&d) - dot(&d, t).abs()
        })
        .fold(f64::INFINITY, f64::min))
}

pub fn is_star_shaped(curve: &DiscreteCurve, x: &[f64]) -> Result<bool, HullError> {
    Ok(phi_star(curve, x)? > 0.0)
}

/// Frenet data of a projected curve together with the projected space
/// normal.
#[derive(Clone, Debug)]
pub struct ProjectedFrame {
    /// `‖P T‖` for the space tangent `T`.
    pub proj_tangent_norm: Vec<f64>,
    /// Unit tangent of the projected polyline (absent at a collapsed vertex).
    pub tangent: Vec<Option<[f64; 2]>>,
    pub kappa_p: Vec<f64>,
    pub normal_p: Vec<Option<[f64; 2]>>,
    /// `⟨P N, N_P⟩` where both curvatures reach the floor.
    pub pn_dot_np: Vec<Option<f64>>,
    pub kappa: Vec<f64>,
    /// Smallest `‖(1−λ) P T_i + λ P T_{i+1}‖` over all edges and `λ ∈ [0, 1]`.
    pub regular_min: f64,
}

impl ProjectedFrame {
    pub fn is_regular(&self, threshold: f64) -> bool {
        self.regular_min > threshold
    }
}

/// Smallest norm along the piecewise-linear interpolation of the projected
/// unit tangents. A projected tangent that reverses between two vertices
/// passes through zero here even if both endpoint values are large.
fn fold_aware_min(pt: &[[f64; 2]]) -> f64 {
    let n = pt.len();
    (0..n)
        .map(|i| point_segment_dist_2d([0.0, 0.0], pt[i], pt[(i + 1) % n]))
        .fold(f64::INFINITY, f64::min)
}

pub fn projected_frame(
    curve: &DiscreteCurve,
    proj: &Projection,
    kappa_floor: f64,
) -> Result<ProjectedFrame, HullError> {
    if proj.dim() != curve.dim() {
        return Err(HullError::Dimension(curve.dim()));
    }
    let fr = crate::geometry::frenet(curve, kappa_floor)?;
    let n = curve.len();
    let q = proj.project_curve(curve);
    let pt: Vec<[f64; 2]> = fr.tangent.iter().map(|t| proj.apply(t)).collect();
    let mut out = ProjectedFrame {
        proj_tangent_norm: pt.iter().map(|v| v[0].hypot(v[1])).collect(),
        tangent: vec![None; n],
        kappa_p: vec![0.0; n],
        normal_p: vec![None; n],
        pn_dot_np: vec![None; n],
        kappa: fr.curvature.clone(),
        regular_min: fold_aware_min(&pt),
    };
    let tiny = 1e-14 * curve.bbox_diagonal();
    for i in 0..n {
        let (prev, cur, next) = (q[(i + n - 1) % n], q[i], q[(i + 1) % n]);
        let e1 = [cur[0] - prev[0], cur[1] - prev[1]];
        let e2 = [next[0] - cur[0], next[1] - cur[1]];
        let a = e1[0].hypot(e1[1]);
        let b = e2[0].hypot(e2[1]);
        if a <= tiny || b <= tiny {
            continue;
        }
        let denom = a * b * (a + b);
        let mut t = [0.0; 2];
        let mut s = [0.0; 2];
        for k in 0..2 {
            t[k] = (a * a * e2[k] + b * b * e1[k]) / denom;
            s[k] = 2.0 * (a * e2[k] - b * e1[k]) / denom;
        }
        let tn = t[0].hypot(t[1]);
        if tn > 0.0 {
            out.tangent[i] = Some([t[0] / tn, t[1] / tn]);
        }
        let kp = s[0].hypot(s[1]);
        out.kappa_p[i] = kp;
        if kp >= kappa_floor && kp > 0.0 {
            let np = [s[0] / kp, s[1] / kp];
            out.normal_p[i] = Some(np);
            if let Some(nv) = fr.normal(i) {
                let pn = proj.apply(nv);
                out.pn_dot_np[i] = Some(pn[0] * np[0] + pn[1] * np[1]);
            }
        }
    }
    Ok(out)
}

/// One evaluation of the projected convexity defect.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexityDefectSample {
    pub t: f64,
    /// `Φ`: largest distance from a projected vertex to the hull boundary.
    pub phi_max: f64,
    pub argmax_vertex: usize,
    /// Whether the fold-aware `‖PT‖` minimum exceeds the threshold.
    pub regular: bool,
    pub proj_regular_min: f64,
}

impl ConvexityDefectSample {
    pub fn at(mut self, t: f64) -> Self {
        self.t = t;
        self
    }
}

pub fn convexity_defect(curve: &DiscreteCurve, proj: &Projection) -> Result<ConvexityDefectSample, HullError> {
    if proj.dim() != curve.dim() {
        return Err(HullError::Dimension(curve.dim()));
    }
    let pts = proj.project_curve(curve);
    let hull = hull_2d(&pts)?;
    let (argmax, phi) = max_boundary_distance(&hull, &pts);
    let t = unit_tangents(curve)?;
    let pt: Vec<[f64; 2]> = t.iter().map(|v| proj.apply(v)).collect();
    let regular_min = fold_aware_min(&pt);
    Ok(ConvexityDefectSample {
        t: 0.0,
        phi_max: phi,
        argmax_vertex: argmax,
        regular: regular_min > REGULARITY_THRESHOLD,
        proj_regular_min: regular_min,
    })
}

/// Records `phi_max` and `proj_regular_min`; flags `Φ > 5e-3 · diameter`
/// while the projection is regular.
pub struct ProjectionMonitor {
    projection: Projection,
    tol_rel: f64,
}

impl ProjectionMonitor {
    pub fn new(projection: Projection) -> Self {
        Self {
            projection,
            tol_rel: PHI_TOL_REL,
        }
    }
}

impl Monitor for ProjectionMonitor {
    fn name(&self) -> &str {
        "projection"
    }

    fn columns(&self) -> Vec<String> {
        vec!["phi_max".into(), "proj_regular_min".into()]
    }

    fn sample(&mut self, state: &FlowState) -> MonitorSample {
        match convexity_defect(&state.curve, &self.projection) {
            Ok(s) => MonitorSample {
                values: vec![Some(s.phi_max), Some(s.proj_regular_min)],
                violation: s.regular && s.phi_max > self.tol_rel * state.curve.diameter(),
            },
            Err(_) => MonitorSample {
                values: vec![None, None],
                violation: false,
            },
        }
    }
}

/// Records the space-curve convexity defect; flags loss of convexity.
pub struct ConvexityMonitor {
    tol_rel: f64,
}

impl Default for ConvexityMonitor {
    fn default() -> Self {
        Self {
            tol_rel: CONVEXITY_TOL_REL,
        }
    }
}

impl Monitor for ConvexityMonitor {
    fn name(&self) -> &str {
        "convexity"
    }

    fn columns(&self) -> Vec<String> {
        vec!["convex_defect_3d".into()]
    }

    fn sample(&mut self, state: &FlowState) -> MonitorSample {
        let tol = self.tol_rel * state.curve.diameter();
        match is_convex_space_curve(&state.curve, tol) {
            Ok(c) => MonitorSample {
                values: vec![Some(c.max_defect)],
                violation: !c.convex,
            },
            Err(_) => MonitorSample {
                values: vec![None],
                violation: false,
            },
        }
    }
}
