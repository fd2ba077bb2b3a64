//! Deterministic curve generators.
//!
//! Every generator is a pure function of `(kind, params, samples, dim, seed)`.
//! Parameters not given in a [`CurveSpec`] take the defaults listed by
//! [`CurveKind::params`]; unknown keys are rejected.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, TAU};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::convexity::Projection;
use crate::geometry::{CurveError, DiscreteCurve};
use crate::geometry::frenet_unchecked;
use crate::spherical::{avoidance_sample, is_simple};

/// Maximum number of draws of a random generator before giving up.
pub const MAX_ATTEMPTS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeneratorError {
    #[error("unknown generator `{0}`")]
    UnknownKind(String),
    #[error("generator `{kind}` has no parameter `{key}`")]
    UnknownParam { kind: CurveKind, key: String },
    #[error("parameter `{key}` of `{kind}`: {reason}")]
    BadParam {
        kind: CurveKind,
        key: &'static str,
        reason: String,
    },
    #[error("generator `{kind}` needs at least {min} samples, got {got}")]
    TooFewSamples { kind: CurveKind, min: usize, got: usize },
    #[error("generator `{kind}` produces curves in dimension {expected}, requested {got}")]
    Dimension {
        kind: CurveKind,
        expected: String,
        got: usize,
    },
    #[error("generator `{kind}` produced no simple curve in {attempts} attempts")]
    NotSimple { kind: CurveKind, attempts: usize },
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    Circle,
    Ellipse,
    Stadium,
    Example1,
    Remark4d,
    Latitude,
    Baseball,
    SphericalWave,
    RandomSpherical,
    DumbbellSpherical,
    TiltedConvex,
    RandomTilted,
}

/// A parameter with its default and a one-line description.
#[derive(Clone, Copy, Debug)]
pub struct ParamInfo {
    pub key: &'static str,
    pub default: f64,
    pub help: &'static str,
}

macro_rules! p {
    ($key:expr, $default:expr, $help:expr) => {
        ParamInfo {
            key: $key,
            default: $default,
            help: $help,
        }
    };
}

impl CurveKind {
    pub const ALL: [CurveKind; 12] = [
        CurveKind::Circle,
        CurveKind::Ellipse,
        CurveKind::Stadium,
        CurveKind::Example1,
        CurveKind::Remark4d,
        CurveKind::Latitude,
        CurveKind::Baseball,
        CurveKind::SphericalWave,
        CurveKind::RandomSpherical,
        CurveKind::DumbbellSpherical,
        CurveKind::TiltedConvex,
        CurveKind::RandomTilted,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CurveKind::Circle => "circle",
            CurveKind::Ellipse => "ellipse",
            CurveKind::Stadium => "stadium",
            CurveKind::Example1 => "example1",
            CurveKind::Remark4d => "remark4d",
            CurveKind::Latitude => "latitude",
            CurveKind::Baseball => "baseball",
            CurveKind::SphericalWave => "spherical_wave",
            CurveKind::RandomSpherical => "random_spherical",
            CurveKind::DumbbellSpherical => "dumbbell_spherical",
            CurveKind::TiltedConvex => "tilted_convex",
            CurveKind::RandomTilted => "random_tilted",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            CurveKind::Circle => "circle of radius r in the xy-plane, rotated by `tilt` about the x-axis",
            CurveKind::Ellipse => "ellipse (a cos u, b sin u) sampled at u = s + nonuniform·sin s",
            CurveKind::Stadium => "two straight sides joined by half circles, sampled by arclength",
            CurveKind::Example1 => {
                "(cos(au³+bu), sin(au³+bu), sin u − ½ sin 2u): convex space curve with circular xy-projection"
            }
            CurveKind::Remark4d => {
                "curve on the unit 3-sphere in ℝ⁴ with orthogonal tangents at u = π/2, 3π/2 (alpha scales sin 2u)"
            }
            CurveKind::Latitude => "circle at polar angle beta on the sphere",
            CurveKind::Baseball => "seam curve A = u, B = π/2 + 0.6 cos 2u on the sphere",
            CurveKind::SphericalWave => "A = u, B = beta + amp·cos(k u) on the sphere",
            CurveKind::RandomSpherical => "great circle plus seeded low-order harmonics, projected to the sphere",
            CurveKind::DumbbellSpherical => "pinched planar dumbbell projected to the sphere; w sets the neck width",
            CurveKind::TiltedConvex => "convex planar curve (variant 0–4) with a z-wiggle, then rotated",
            CurveKind::RandomTilted => "seeded smooth perturbed circle with vertical wiggle, randomly rotated",
        }
    }

    pub fn params(self) -> &'static [ParamInfo] {
        match self {
            CurveKind::Circle => &[p!("r", 1.0, "radius"), p!("tilt", 0.0, "rotation about the x-axis (rad)")],
            CurveKind::Ellipse => &[
                p!("a", 2.0, "x semi-axis"),
                p!("b", 1.0, "y semi-axis"),
                p!("nonuniform", 0.0, "sampling distortion in [0, 1)"),
            ],
            CurveKind::Stadium => &[
                p!("half_length", 1.0, "half length of the straight sides"),
                p!("r", 1.0, "cap radius"),
            ],
            CurveKind::Example1 => &[],
            CurveKind::Remark4d => &[p!("alpha", 1.0, "amplitude of sin 2u inside the second angle")],
            CurveKind::Latitude => &[p!("beta", 1.0, "polar angle (rad)"), p!("radius", 1.0, "sphere radius")],
            CurveKind::Baseball => &[p!("radius", 1.0, "sphere radius")],
            CurveKind::SphericalWave => &[
                p!("beta", FRAC_PI_2, "mean polar angle"),
                p!("amp", 0.4, "polar oscillation amplitude"),
                p!("k", 3.0, "oscillation frequency (integer)"),
                p!("radius", 1.0, "sphere radius"),
            ],
            CurveKind::RandomSpherical => &[
                p!("amp", 0.35, "perturbation amplitude"),
                p!("harmonics", 4.0, "number of harmonics (1–6)"),
                p!("radius", 1.0, "sphere radius"),
                p!("max_kappa", 8.0, "reject draws with curvature above this (units of 1/radius)"),
                p!("min_gap", 0.05, "reject draws whose non-neighbouring parts come closer (units of radius)"),
            ],
            CurveKind::DumbbellSpherical => &[
                p!("a", 1.0, "half length of the dumbbell"),
                p!("h", 0.6, "lobe height"),
                p!("w", 0.1, "neck width relative to h"),
                p!("s", 0.8, "scale in the tangent plane"),
                p!("radius", 1.0, "sphere radius"),
            ],
            CurveKind::TiltedConvex => &[
                p!("variant", 0.0, "base shape 0–4"),
                p!("zamp", 0.3, "vertical wiggle amplitude"),
                p!("tilt", 0.7, "rotation angle about (1, 1, 0)/√2"),
            ],
            CurveKind::RandomTilted => &[
                p!("amp", 0.15, "radial perturbation amplitude"),
                p!("zamp", 0.5, "vertical wiggle amplitude"),
            ],
        }
    }

    fn min_samples(self) -> usize {
        match self {
            CurveKind::Example1 => 64,
            CurveKind::Remark4d => 128,
            _ => crate::geometry::MIN_VERTICES,
        }
    }

    pub fn is_spherical(self) -> bool {
        matches!(
            self,
            CurveKind::Latitude
                | CurveKind::Baseball
                | CurveKind::SphericalWave
                | CurveKind::RandomSpherical
                | CurveKind::DumbbellSpherical
        )
    }

    pub fn is_random(self) -> bool {
        matches!(self, CurveKind::RandomSpherical | CurveKind::RandomTilted)
    }
}

impl fmt::Display for CurveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CurveKind {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CurveKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| GeneratorError::UnknownKind(s.to_string()))
    }
}

fn default_dim() -> usize {
    3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSpec {
    pub kind: CurveKind,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub samples: usize,
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default)]
    pub seed: u64,
}

impl CurveSpec {
    pub fn new(kind: CurveKind, samples: usize) -> Self {
        Self {
            kind,
            params: BTreeMap::new(),
            samples,
            dim: if kind == CurveKind::Remark4d { 4 } else { 3 },
            seed: 0,
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    /// Parameter value, falling back to the kind's default.
    pub fn param(&self, key: &str) -> f64 {
        self.params.get(key).copied().unwrap_or_else(|| {
            self.kind
                .params()
                .iter()
                .find(|p| p.key == key)
                .map_or(f64::NAN, |p| p.default)
        })
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        for key in self.params.keys() {
            if !self.kind.params().iter().any(|p| p.key == key) {
                return Err(GeneratorError::UnknownParam {
                    kind: self.kind,
                    key: key.clone(),
                });
            }
        }
        for (key, v) in &self.params {
            if !v.is_finite() {
                let key = self.kind.params().iter().find(|p| p.key == key).unwrap().key;
                return Err(self.bad(key, "must be finite"));
            }
        }
        let min = self.kind.min_samples();
        if self.samples < min {
            return Err(GeneratorError::TooFewSamples {
                kind: self.kind,
                min,
                got: self.samples,
            });
        }
        let dim_ok = match self.kind {
            CurveKind::Circle | CurveKind::Ellipse | CurveKind::Stadium => self.dim >= 2,
            CurveKind::Remark4d => self.dim == 4,
            _ => self.dim == 3,
        };
        if !dim_ok {
            let expected = match self.kind {
                CurveKind::Circle | CurveKind::Ellipse | CurveKind::Stadium => "≥ 2",
                CurveKind::Remark4d => "4",
                _ => "3",
            };
            return Err(GeneratorError::Dimension {
                kind: self.kind,
                expected: expected.into(),
                got: self.dim,
            });
        }
        Ok(())
    }

    fn bad(&self, key: &'static str, reason: &str) -> GeneratorError {
        GeneratorError::BadParam {
            kind: self.kind,
            key,
            reason: reason.into(),
        }
    }

    fn positive(&self, key: &'static str) -> Result<f64, GeneratorError> {
        let v = self.param(key);
        if v > 0.0 {
            Ok(v)
        } else {
            Err(self.bad(key, "must be positive"))
        }
    }

    pub fn generate(&self) -> Result<DiscreteCurve, GeneratorError> {
        self.validate()?;
        let n = self.samples;
        let dim = self.dim;
        let curve = match self.kind {
            CurveKind::Circle => {
                let r = self.positive("r")?;
                let tilt = self.param("tilt");
                planar(n, dim, |u| [r * u.cos(), r * u.sin()], tilt)?
            }
            CurveKind::Ellipse => {
                let (a, b) = (self.positive("a")?, self.positive("b")?);
                let eps = self.param("nonuniform");
                if !(0.0..1.0).contains(&eps) {
                    return Err(self.bad("nonuniform", "must lie in [0, 1)"));
                }
                planar(
                    n,
                    dim,
                    |s| {
                        let u = s + eps * s.sin();
                        [a * u.cos(), b * u.sin()]
                    },
                    0.0,
                )?
            }
            CurveKind::Stadium => {
                let (l, r) = (self.positive("half_length")?, self.positive("r")?);
                planar(n, dim, |u| stadium_point(l, r, u / TAU), 0.0)?
            }
            CurveKind::Example1 => example1(n)?,
            CurveKind::Remark4d => remark4d_alpha(n, self.param("alpha"))?,
            CurveKind::Latitude => {
                let beta = self.param("beta");
                if !(beta > 0.0 && beta < PI) {
                    return Err(self.bad("beta", "must lie in (0, π)"));
                }
                on_sphere(n, self.positive("radius")?, |u| angles(u, beta))?
            }
            CurveKind::Baseball => on_sphere(n, self.positive("radius")?, |u| angles(u, FRAC_PI_2 + 0.6 * (2.0 * u).cos()))?,
            CurveKind::SphericalWave => {
                let k = self.param("k");
                if k.fract() != 0.0 || k < 1.0 {
                    return Err(self.bad("k", "must be a positive integer"));
                }
                let (beta, amp) = (self.param("beta"), self.param("amp"));
                if !(beta - amp.abs() > 0.0 && beta + amp.abs() < PI) {
                    return Err(self.bad("amp", "polar angle must stay inside (0, π)"));
                }
                on_sphere(n, self.positive("radius")?, |u| angles(u, beta + amp * (k * u).cos()))?
            }
            CurveKind::RandomSpherical => self.random_spherical()?,
            CurveKind::DumbbellSpherical => self.dumbbell()?,
            CurveKind::TiltedConvex => self.tilted_convex()?,
            CurveKind::RandomTilted => self.random_tilted()?,
        };
        if self.kind.is_spherical() && !self.kind.is_random() && !is_simple(&curve) {
            return Err(GeneratorError::NotSimple {
                kind: self.kind,
                attempts: 1,
            });
        }
        Ok(curve)
    }

    fn random_spherical(&self) -> Result<DiscreteCurve, GeneratorError> {
        let amp = self.param("amp");
        let h = self.param("harmonics");
        if !(1.0..=6.0).contains(&h) || h.fract() != 0.0 {
            return Err(self.bad("harmonics", "must be an integer in 1..=6"));
        }
        let radius = self.positive("radius")?;
        let max_kappa = self.positive("max_kappa")? / radius;
        let min_gap = self.param("min_gap") * radius;
        let acceptable = |c: &DiscreteCurve| {
            let fr = frenet_unchecked(c, 0.0);
            if fr.max_curvature() > max_kappa || !is_simple(c) {
                return false;
            }
            let s = avoidance_sample(c, &fr.curvature, 0.0);
            s.min_f_on_d.is_some_and(|m| m.sqrt() >= min_gap)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..MAX_ATTEMPTS {
            // coefficients[h][cos/sin][xyz], decaying like 1/h so the sum stays C²-smooth.
            let coeffs: Vec<[[f64; 3]; 2]> = (1..=h as usize)
                .map(|k| {
                    let s = amp / k as f64;
                    let mut draw = || [(); 3].map(|_| s * rng.gen_range(-1.0..1.0));
                    [draw(), draw()]
                })
                .collect();
            let rot = random_rotation(&mut rng);
            let mut ok = true;
            let curve = on_sphere(self.samples, radius, |u| {
                let mut q = [u.cos(), u.sin(), 0.0];
                for (k, [c, s]) in coeffs.iter().enumerate() {
                    let (ck, sk) = (((k + 1) as f64 * u).cos(), ((k + 1) as f64 * u).sin());
                    for d in 0..3 {
                        q[d] += c[d] * ck + s[d] * sk;
                    }
                }
                let l = (q[0] * q[0] + q[1] * q[1] + q[2] * q[2]).sqrt();
                if l < 0.2 {
                    ok = false;
                }
                let q = apply_rotation(&rot, q);
                Direction(q)
            });
            match curve {
                Ok(c) if ok && acceptable(&c) => return Ok(c),
                _ => continue,
            }
        }
        Err(GeneratorError::NotSimple {
            kind: self.kind,
            attempts: MAX_ATTEMPTS,
        })
    }

    fn dumbbell(&self) -> Result<DiscreteCurve, GeneratorError> {
        let a = self.positive("a")?;
        let h = self.positive("h")?;
        let w = self.param("w");
        if !(w > 0.0 && w <= 1.0) {
            return Err(self.bad("w", "must lie in (0, 1]"));
        }
        let s = self.positive("s")?;
        let radius = self.positive("radius")?;
        Ok(on_sphere(self.samples, radius, |u| {
            let c = u.cos();
            let x = a * c;
            let y = h * u.sin() * (w + (1.0 - w) * c * c);
            Direction([s * x, s * y, 1.0])
        })?)
    }

    fn tilted_convex(&self) -> Result<DiscreteCurve, GeneratorError> {
        let variant = self.param("variant");
        if !(0.0..=4.0).contains(&variant) || variant.fract() != 0.0 {
            return Err(self.bad("variant", "must be an integer in 0..=4"));
        }
        let zamp = self.param("zamp");
        let rot = axis_rotation([FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0], self.param("tilt"));
        let base = |u: f64| -> [f64; 2] {
            match variant as u32 {
                0 => [1.5 * u.cos(), u.sin()],
                1 => polar(u, 1.0 + 0.08 * (3.0 * u).cos()),
                2 => polar(u, 1.0 + 0.05 * (4.0 * u).cos()),
                3 => [2.0 * u.cos(), 0.8 * u.sin()],
                _ => polar(u, 1.0 + 0.1 * (2.0 * u).cos() + 0.03 * (3.0 * u).sin()),
            }
        };
        let z = |u: f64| zamp * ((2.0 * u).sin() + 0.5 * (3.0 * u + 0.4 * variant).cos());
        let n = self.samples;
        Ok(DiscreteCurve::from_fn(n, 3, |k, out| {
            let u = TAU * k as f64 / n as f64;
            let [x, y] = base(u);
            out.copy_from_slice(&apply_rotation(&rot, [x, y, z(u)]));
        })?)
    }

    /// Plane onto which a `tilted_convex` curve projects to its convex base.
    pub fn tilted_projection(&self) -> Projection {
        let rot = axis_rotation([FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0], self.param("tilt"));
        let e1 = apply_rotation(&rot, [1.0, 0.0, 0.0]);
        let e2 = apply_rotation(&rot, [0.0, 1.0, 0.0]);
        Projection::orthonormalized(&e1, &e2).expect("rotated axes are orthonormal")
    }

    fn random_tilted(&self) -> Result<DiscreteCurve, GeneratorError> {
        let amp = self.param("amp");
        let zamp = self.param("zamp");
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let radial: Vec<(f64, f64)> = (2..=4)
            .map(|k| {
                let s = amp / (k * k) as f64;
                (s * rng.gen_range(-1.0..1.0), s * rng.gen_range(-1.0..1.0))
            })
            .collect();
        let vertical: Vec<(f64, f64)> = (1..=3)
            .map(|_| (zamp * rng.gen_range(-1.0..1.0), zamp * rng.gen_range(-1.0..1.0)))
            .collect();
        let rot = random_rotation(&mut rng);
        let n = self.samples;
        Ok(DiscreteCurve::from_fn(n, 3, |k, out| {
            let u = TAU * k as f64 / n as f64;
            let mut r = 1.0;
            for (m, (c, s)) in radial.iter().enumerate() {
                let f = (m + 2) as f64;
                r += c * (f * u).cos() + s * (f * u).sin();
            }
            let mut z = 0.0;
            for (m, (c, s)) in vertical.iter().enumerate() {
                let f = (m + 1) as f64;
                z += c * (f * u).cos() + s * (f * u).sin();
            }
            out.copy_from_slice(&apply_rotation(&rot, [r * u.cos(), r * u.sin(), z]));
        })?)
    }
}

fn polar(u: f64, r: f64) -> [f64; 2] {
    [r * u.cos(), r * u.sin()]
}

/// Planar curve in the first two coordinates, optionally rotated about the
/// first axis into the third coordinate.
fn planar(n: usize, dim: usize, f: impl Fn(f64) -> [f64; 2], tilt: f64) -> Result<DiscreteCurve, CurveError> {
    DiscreteCurve::from_fn(n, dim, |k, out| {
        let u = TAU * k as f64 / n as f64;
        let [x, y] = f(u);
        out.fill(0.0);
        out[0] = x;
        if dim >= 3 {
            out[1] = y * tilt.cos();
            out[2] = y * tilt.sin();
        } else {
            out[1] = y;
        }
    })
}

fn stadium_point(l: f64, r: f64, frac: f64) -> [f64; 2] {
    let side = 2.0 * l;
    let cap = PI * r;
    let mut s = frac * 2.0 * (side + cap);
    if s < side {
        return [-l + s, -r];
    }
    s -= side;
    if s < cap {
        let a = -FRAC_PI_2 + s / r;
        return [l + r * a.cos(), r * a.sin()];
    }
    s -= cap;
    if s < side {
        return [l - s, r];
    }
    s -= side;
    let a = FRAC_PI_2 + s / r;
    [-l + r * a.cos(), r * a.sin()]
}

/// Spherical angles: azimuth `u`, polar angle `b`.
struct Angles(f64, f64);

fn angles(u: f64, b: f64) -> Angles {
    Angles(u, b)
}

/// An arbitrary nonzero vector to be scaled onto the sphere.
struct Direction([f64; 3]);

trait SpherePoint {
    fn unit(&self) -> [f64; 3];
}

impl SpherePoint for Angles {
    fn unit(&self) -> [f64; 3] {
        let (a, b) = (self.0, self.1);
        [a.cos() * b.sin(), a.sin() * b.sin(), b.cos()]
    }
}

impl SpherePoint for Direction {
    fn unit(&self) -> [f64; 3] {
        let [x, y, z] = self.0;
        let l = (x * x + y * y + z * z).sqrt();
        [x / l, y / l, z / l]
    }
}

fn on_sphere<S: SpherePoint>(n: usize, radius: f64, mut f: impl FnMut(f64) -> S) -> Result<DiscreteCurve, CurveError> {
    DiscreteCurve::from_fn(n, 3, |k, out| {
        let u = TAU * k as f64 / n as f64;
        let q = f(u).unit();
        for d in 0..3 {
            out[d] = radius * q[d];
        }
    })
}

type Rotation = [[f64; 3]; 3];

fn apply_rotation(r: &Rotation, x: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|i| r[i][0] * x[0] + r[i][1] * x[1] + r[i][2] * x[2])
}

fn quaternion_rotation(q: [f64; 4]) -> Rotation {
    let [w, x, y, z] = q;
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y)],
        [2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x)],
        [2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

fn axis_rotation(axis: [f64; 3], angle: f64) -> Rotation {
    let (s, c) = (0.5 * angle).sin_cos();
    quaternion_rotation([c, s * axis[0], s * axis[1], s * axis[2]])
}

/// Uniformly distributed rotation (Shoemake's method).
fn random_rotation(rng: &mut impl Rng) -> Rotation {
    let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    quaternion_rotation([
        a * (TAU * u2).sin(),
        a * (TAU * u2).cos(),
        b * (TAU * u3).sin(),
        b * (TAU * u3).cos(),
    ])
}

/// Constants of [`example1`]: the phase `θ(u) = a·u³ + b·u` and the point
/// `w > 0` with `θ(±w) = 0`.
pub mod example1_constants {
    use std::f64::consts::PI;

    pub fn a() -> f64 {
        (PI + 2.0) / (2.0 * (1.0 - PI * PI))
    }

    pub fn b() -> f64 {
        (PI.powi(3) + 2.0) / (2.0 * (PI * PI - 1.0))
    }

    pub fn w() -> f64 {
        ((PI.powi(3) + 2.0) / (PI + 2.0)).sqrt()
    }

    pub fn theta(u: f64) -> f64 {
        a() * u.powi(3) + b() * u
    }
}

/// Exact point of the Example 1 curve at parameter `u`.
pub fn example1_point(u: f64) -> [f64; 3] {
    let th = example1_constants::theta(u);
    [th.cos(), th.sin(), u.sin() - 0.5 * (2.0 * u).sin()]
}

/// Example 1 sampled at `u_k = −π + 2πk/N`.
pub fn example1(n: usize) -> Result<DiscreteCurve, GeneratorError> {
    if n < CurveKind::Example1.min_samples() {
        return Err(GeneratorError::TooFewSamples {
            kind: CurveKind::Example1,
            min: 64,
            got: n,
        });
    }
    Ok(DiscreteCurve::from_fn(n, 3, |k, out| {
        out.copy_from_slice(&example1_point(-PI + TAU * k as f64 / n as f64));
    })?)
}

/// Point of the ℝ⁴ curve at `u`; `alpha = 1` is the printed parametrization.
pub fn remark4d_point(u: f64, alpha: f64) -> [f64; 4] {
    let (c, s2, h) = (u.cos(), alpha * (2.0 * u).sin(), 0.5 * u.sin());
    [
        c.sin(),
        c.cos() * s2.sin(),
        c.cos() * s2.cos() * h.cos(),
        c.cos() * s2.cos() * h.sin(),
    ]
}

/// The ℝ⁴ curve sampled at `u_k = 2πk/N`.
pub fn remark4d(n: usize) -> Result<DiscreteCurve, GeneratorError> {
    remark4d_alpha(n, 1.0)
}

pub fn remark4d_alpha(n: usize, alpha: f64) -> Result<DiscreteCurve, GeneratorError> {
    if n < CurveKind::Remark4d.min_samples() {
        return Err(GeneratorError::TooFewSamples {
            kind: CurveKind::Remark4d,
            min: 128,
            got: n,
        });
    }
    Ok(DiscreteCurve::from_fn(n, 4, |k, out| {
        out.copy_from_slice(&remark4d_point(TAU * k as f64 / n as f64, alpha));
    })?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convexity::{convexity_defect, is_convex_space_curve};
    use crate::geometry::frenet;
    use crate::spherical::fit_sphere;
    use crate::vecn::norm;

    #[test]
    fn names_round_trip() {
        for k in CurveKind::ALL {
            assert_eq!(k.name().parse::<CurveKind>().unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.name()));
        }
        assert!("nope".parse::<CurveKind>().is_err());
    }

    #[test]
    fn every_kind_generates_with_defaults() {
        for k in CurveKind::ALL {
            let spec = CurveSpec::new(k, 256).with_seed(1);
            let c = spec.generate().unwrap_or_else(|e| panic!("{k}: {e}"));
            assert_eq!(c.len(), 256);
            if k.is_spherical() {
                for p in c.points() {
                    assert!((norm(p) - 1.0).abs() < 1e-12, "{k}");
                }
                assert!(is_simple(&c), "{k}");
            }
        }
    }

    #[test]
    fn spec_validation() {
        let e = CurveSpec::new(CurveKind::Circle, 64).with("radius", 2.0).generate();
        assert!(matches!(e, Err(GeneratorError::UnknownParam { .. })));
        let e = CurveSpec::new(CurveKind::Example1, 32).generate();
        assert!(matches!(e, Err(GeneratorError::TooFewSamples { min: 64, .. })));
        let e = CurveSpec::new(CurveKind::Baseball, 64).with_dim(4).generate();
        assert!(matches!(e, Err(GeneratorError::Dimension { .. })));
        let e = CurveSpec::new(CurveKind::Circle, 64).with("r", -1.0).generate();
        assert!(matches!(e, Err(GeneratorError::BadParam { key: "r", .. })));
    }

    #[test]
    fn example1_constants_close_the_curve() {
        use example1_constants::*;
        assert!((theta(PI) - theta(-PI) + TAU).abs() < 1e-12);
        assert!(theta(w()).abs() < 1e-12);
        let c = example1(512).unwrap();
        for p in c.points() {
            assert!((p[0].hypot(p[1]) - 1.0).abs() < 1e-12);
        }
        assert!(example1_point(PI)[2].abs() < 1e-15);
        assert!(example1_point(-PI)[2].abs() < 1e-15);
    }

    #[test]
    fn example1_curvature_peak_at_origin() {
        let n = 4096;
        let c = example1(n).unwrap();
        let f = frenet(&c, 0.0).unwrap();
        let at = |u: f64| f.curvature[((u + PI) / TAU * n as f64).round() as usize % n];
        let w = example1_constants::w();
        assert!(at(0.0) > at(w) && at(0.0) > at(-w));
    }

    #[test]
    fn example1_is_convex_with_circular_projection() {
        let c = example1(512).unwrap();
        let diam = c.diameter();
        assert!(is_convex_space_curve(&c, 1e-6 * diam).unwrap().convex);
        let s = convexity_defect(&c, &Projection::xy(3)).unwrap();
        assert!(s.phi_max < 1e-6);
    }

    #[test]
    fn remark4d_lies_on_three_sphere() {
        let c = remark4d(256).unwrap();
        for p in c.points() {
            assert!((norm(p) - 1.0).abs() < 1e-12);
        }
        let a = remark4d_point(0.0, 1.0);
        let b = remark4d_point(TAU, 1.0);
        for k in 0..4 {
            assert!((a[k] - b[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn remark4d_tangents_at_the_antipodal_pair() {
        let tangent = |u: f64, alpha: f64| {
            let h = 1e-6;
            let (a, b) = (remark4d_point(u + h, alpha), remark4d_point(u - h, alpha));
            let d: Vec<f64> = (0..4).map(|k| a[k] - b[k]).collect();
            let l = norm(&d);
            d.into_iter().map(|x| x / l).collect::<Vec<_>>()
        };
        let inner = |alpha| {
            let (t1, t2) = (tangent(FRAC_PI_2, alpha), tangent(3.0 * FRAC_PI_2, alpha));
            (0..4).map(|k| t1[k] * t2[k]).sum::<f64>()
        };
        // Printed curve: T ∝ (∓1, −2, 0, 0), so the tangents are not orthogonal.
        assert!((inner(1.0) - 0.6).abs() < 1e-8);
        assert!(inner(0.5).abs() < 1e-8);
    }

    #[test]
    fn latitude_and_baseball() {
        let lat = CurveSpec::new(CurveKind::Latitude, 128).with("beta", 0.5).generate().unwrap();
        for p in lat.points() {
            assert!((p[0].hypot(p[1]) - 0.5f64.sin()).abs() < 1e-12);
        }
        let bb = CurveSpec::new(CurveKind::Baseball, 256).generate().unwrap();
        assert!(fit_sphere(&bb).unwrap().rms_deviation < 1e-12);
    }

    #[test]
    fn random_generators_are_deterministic() {
        for kind in [CurveKind::RandomSpherical, CurveKind::RandomTilted] {
            let a = CurveSpec::new(kind, 128).with_seed(42).generate().unwrap();
            let b = CurveSpec::new(kind, 128).with_seed(42).generate().unwrap();
            let c = CurveSpec::new(kind, 128).with_seed(43).generate().unwrap();
            assert_eq!(a, b);
            assert_ne!(a, c);
        }
    }

    #[test]
    fn tilted_fixtures_project_convexly() {
        for v in 0..5 {
            let spec = CurveSpec::new(CurveKind::TiltedConvex, 256).with("variant", v as f64);
            let c = spec.generate().unwrap();
            let s = convexity_defect(&c, &spec.tilted_projection()).unwrap();
            assert!(s.regular, "variant {v}");
            assert!(s.phi_max < 1e-9, "variant {v}: {}", s.phi_max);
        }
    }
}
