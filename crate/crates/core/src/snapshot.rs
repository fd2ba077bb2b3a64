//! Curve snapshot files.
//!
//! A snapshot is a small JSON document:
//!
//! ```text
//! {"dim": 3, "t": 1.0000000000000000e-1, "points": [[x, y, z], ...]}
//! ```
//!
//! Every number is written with 17 significant digits, which is enough to
//! reproduce any `f64` bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use crate::geometry::{CurveError, DiscreteCurve};

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed snapshot: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("snapshot declares dim {declared} but vertex {index} has {actual} coordinates")]
    DimMismatch {
        declared: usize,
        index: usize,
        actual: usize,
    },
    #[error("invalid curve in snapshot: {0}")]
    Curve(#[from] CurveError),
}

#[derive(Deserialize)]
struct RawSnapshot {
    dim: usize,
    t: f64,
    points: Vec<Vec<f64>>,
}

/// A curve together with the simulation time it was taken at.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub curve: DiscreteCurve,
}

fn push_num(out: &mut String, x: f64) {
    write!(out, "{x:.16e}").expect("writing to a String cannot fail");
}

pub fn to_string(curve: &DiscreteCurve, t: f64) -> String {
    let mut out = String::with_capacity(curve.coords().len() * 26 + 64);
    write!(out, "{{\"dim\": {}, \"t\": ", curve.dim()).unwrap();
    push_num(&mut out, t);
    out.push_str(", \"points\": [\n");
    let n = curve.len();
    for (i, p) in curve.points().enumerate() {
        out.push_str("  [");
        for (k, x) in p.iter().enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            push_num(&mut out, *x);
        }
        out.push(']');
        if i + 1 < n {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("]}\n");
    out
}

pub fn from_str(text: &str) -> Result<Snapshot, SnapshotError> {
    let raw: RawSnapshot = serde_json::from_str(text)?;
    let mut coords = Vec::with_capacity(raw.points.len() * raw.dim);
    for (index, p) in raw.points.iter().enumerate() {
        if p.len() != raw.dim {
            return Err(SnapshotError::DimMismatch {
                declared: raw.dim,
                index,
                actual: p.len(),
            });
        }
        coords.extend_from_slice(p);
    }
    Ok(Snapshot {
        t: raw.t,
        curve: DiscreteCurve::new(raw.dim, coords)?,
    })
}

pub fn write(path: impl AsRef<Path>, curve: &DiscreteCurve, t: f64) -> Result<(), SnapshotError> {
    std::fs::write(path, to_string(curve, t))?;
    Ok(())
}

pub fn read(path: impl AsRef<Path>) -> Result<Snapshot, SnapshotError> {
    from_str(&std::fs::read_to_string(path)?)
}
