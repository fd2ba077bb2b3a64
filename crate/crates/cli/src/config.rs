//! Run configuration: a TOML file with nested sections.
//!
//! ```toml
//! output_dir = "out/circle"        # relative to the config file
//! seed = 7                         # default seed for random generators
//! monitors = ["avoidance", "sphericity"]
//!
//! [curve]                          # either a generator ...
//! kind = "random_spherical"
//! samples = 256
//! params = { amp = 0.35 }
//! # snapshot = "start.curve"       # ... or a snapshot file
//!
//! [flow]                           # any FlowParams field; the rest default
//! stop_max_time = 0.5
//!
//! [projection]                     # plane for the projection monitor and SVGs
//! u = [1.0, 0.0, 0.0]
//! v = [0.0, 1.0, 0.0]
//!
//! [dump]
//! svg = false
//! chordfield = false
//! snapshot_every = 10              # every 10th recorded state; 0 = final only
//!
//! [[family]]                       # further curves evolved on the same clock
//! kind = "latitude"
//! samples = 128
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use curveflow::{snapshot, CurveKind, CurveSpec, DiscreteCurve, FlowParams, Projection};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Monitors that can be named in `monitors`.
pub const MONITORS: [&str; 5] = ["avoidance", "sphericity", "convexity", "projection", "family"];

/// Monitors whose cost is quadratic in the vertex count.
pub const TOPOLOGY_MONITORS: [&str; 2] = ["avoidance", "family"];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("field `{field}`: {reason}")]
    Invalid { field: String, reason: String },
}

fn invalid(field: impl Into<String>, reason: impl ToString) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        reason: reason.to_string(),
    }
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub monitors: Vec<String>,
    pub curve: CurveConfig,
    #[serde(default)]
    pub family: Vec<CurveConfig>,
    #[serde(default)]
    pub flow: FlowParams,
    #[serde(default)]
    pub projection: Option<ProjectionConfig>,
    #[serde(default)]
    pub dump: DumpConfig,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub kind: Option<CurveKind>,
    pub samples: Option<usize>,
    /// Defaults to 4 for `remark4d` and 3 otherwise.
    pub dim: Option<usize>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    /// Overrides the top-level seed.
    pub seed: Option<u64>,
    pub snapshot: Option<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectionConfig {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DumpConfig {
    pub svg: bool,
    pub chordfield: bool,
    pub snapshot_every: usize,
}

impl Default for DumpConfig {
    fn default() -> Self {
        Self {
            svg: false,
            chordfield: false,
            snapshot_every: 10,
        }
    }
}

impl CurveConfig {
    pub fn generator(kind: CurveKind, samples: usize) -> Self {
        Self {
            kind: Some(kind),
            samples: Some(samples),
            ..Default::default()
        }
    }

    /// The generator spec, or `None` for a snapshot source.
    pub fn spec(&self, default_seed: u64, field: &str) -> Result<Option<CurveSpec>, ConfigError> {
        match (&self.kind, &self.snapshot) {
            (Some(_), Some(_)) => Err(invalid(field, "give either `kind` or `snapshot`, not both")),
            (None, None) => Err(invalid(field, "missing `kind` or `snapshot`")),
            (None, Some(_)) => Ok(None),
            (Some(kind), None) => {
                let samples = self
                    .samples
                    .ok_or_else(|| invalid(format!("{field}.samples"), "required with `kind`"))?;
                let mut spec = CurveSpec::new(*kind, samples).with_seed(self.seed.unwrap_or(default_seed));
                if let Some(dim) = self.dim {
                    spec = spec.with_dim(dim);
                }
                spec.params = self.params.clone();
                spec.validate().map_err(|e| invalid(field, e))?;
                Ok(Some(spec))
            }
        }
    }

    pub fn load(&self, default_seed: u64, field: &str) -> Result<DiscreteCurve, ConfigError> {
        match self.spec(default_seed, field)? {
            Some(spec) => spec.generate().map_err(|e| invalid(field, e)),
            None => {
                let path = self.snapshot.as_ref().expect("checked by spec()");
                snapshot::read(path)
                    .map(|s| s.curve)
                    .map_err(|e| invalid(format!("{field}.snapshot"), e))
            }
        }
    }
}

impl RunConfig {
    /// A config with one generated curve and everything else defaulted.
    pub fn for_curve(curve: CurveConfig) -> Self {
        Self {
            output_dir: default_output_dir(),
            seed: 0,
            monitors: Vec::new(),
            curve,
            family: Vec::new(),
            flow: FlowParams::default(),
            projection: None,
            dump: DumpConfig::default(),
        }
    }

    /// Reads and validates a config file. Relative paths inside it are
    /// resolved against the file's directory.
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let mut cfg: RunConfig = toml::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.output_dir = base.join(&cfg.output_dir);
        for c in std::iter::once(&mut cfg.curve).chain(cfg.family.iter_mut()) {
            if let Some(s) = &mut c.snapshot {
                *s = base.join(&*s);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (i, m) in self.monitors.iter().enumerate() {
            if !MONITORS.contains(&m.as_str()) {
                return Err(invalid(
                    format!("monitors[{i}]"),
                    format!("unknown monitor `{m}` (known: {})", MONITORS.join(", ")),
                ));
            }
        }
        if self.monitors.iter().any(|m| m == "family") && self.family.is_empty() {
            return Err(invalid("monitors", "`family` needs at least one [[family]] curve"));
        }
        self.flow.validate().map_err(|e| invalid("flow", e))?;
        self.curve.spec(self.seed, "curve")?;
        for (k, c) in self.family.iter().enumerate() {
            c.spec(self.member_seed(k + 1), &format!("family[{k}]"))?;
        }
        if let Some(p) = &self.projection {
            Projection::orthonormalized(&p.u, &p.v).map_err(|e| invalid("projection", e))?;
        }
        Ok(())
    }

    fn member_seed(&self, member: usize) -> u64 {
        self.seed.wrapping_add(member as u64)
    }

    /// The main curve followed by the family members.
    pub fn initial_curves(&self) -> Result<Vec<DiscreteCurve>, ConfigError> {
        let mut out = vec![self.curve.load(self.seed, "curve")?];
        for (k, c) in self.family.iter().enumerate() {
            out.push(c.load(self.member_seed(k + 1), &format!("family[{k}]"))?);
        }
        let dim = out[0].dim();
        if out.iter().any(|c| c.dim() != dim) {
            return Err(invalid("family", "all curves must share the ambient dimension"));
        }
        Ok(out)
    }

    /// The projection plane: configured, the fixture's own tilted plane, or
    /// the first two coordinates.
    pub fn projection(&self, dim: usize) -> Result<Projection, ConfigError> {
        if let Some(p) = &self.projection {
            let proj = Projection::orthonormalized(&p.u, &p.v).map_err(|e| invalid("projection", e))?;
            if proj.dim() != dim {
                return Err(invalid("projection", format!("basis has dimension {}, curve has {dim}", proj.dim())));
            }
            return Ok(proj);
        }
        if let Some(spec) = self.curve.spec(self.seed, "curve")? {
            if spec.kind == CurveKind::TiltedConvex && dim == 3 {
                return Ok(spec.tilted_projection());
            }
        }
        Ok(Projection::xy(dim))
    }

    pub fn has_monitor(&self, name: &str) -> bool {
        self.monitors.iter().any(|m| m == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: "test.toml".into(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    #[test]
    fn minimal_config() {
        let cfg = parse("[curve]\nkind = \"circle\"\nsamples = 64\n").unwrap();
        assert_eq!(cfg.flow, FlowParams::default());
        assert_eq!(cfg.initial_curves().unwrap()[0].len(), 64);
    }

    #[test]
    fn errors_name_the_field() {
        let e = parse("monitors = [\"avoidance\", \"bogus\"]\n[curve]\nkind = \"circle\"\nsamples = 64\n").unwrap_err();
        assert!(e.to_string().contains("monitors[1]"), "{e}");
        let e = parse("[curve]\nkind = \"circle\"\n").unwrap_err();
        assert!(e.to_string().contains("curve.samples"), "{e}");
        let e = parse("[curve]\nkind = \"circle\"\nsamples = 64\n[flow]\ndt_safety = 2.0\n").unwrap_err();
        assert!(e.to_string().contains("flow"), "{e}");
        let e = parse("[curve]\nkind = \"circle\"\nsamples = 64\nparams = { q = 1.0 }\n").unwrap_err();
        assert!(e.to_string().contains("curve"), "{e}");
        let e = parse("[curve]\nkind = \"circle\"\nsamples = 64\n[flow]\ndt = 0.1\n").unwrap_err();
        assert!(e.to_string().contains("dt"), "{e}");
    }

    #[test]
    fn remark4d_defaults_to_four_dimensions() {
        let cfg = parse("[curve]\nkind = \"remark4d\"\nsamples = 128\n").unwrap();
        assert_eq!(cfg.initial_curves().unwrap()[0].dim(), 4);
        assert_eq!(cfg.projection(4).unwrap().dim(), 4);
    }

    #[test]
    fn family_members_get_distinct_seeds() {
        let cfg = parse(
            "seed = 5\nmonitors = [\"family\"]\n[curve]\nkind = \"random_spherical\"\nsamples = 64\n\
             [[family]]\nkind = \"random_spherical\"\nsamples = 64\n",
        )
        .unwrap();
        let c = cfg.initial_curves().unwrap();
        assert_ne!(c[0], c[1]);
    }
}
