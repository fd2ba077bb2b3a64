//! `sweep`: one run per point of a parameter grid, run concurrently, with a
//! convergence table for circle runs.
//!
//! Grid axes are given as `key=v1,v2,...`. Keys: `samples`, `seed`, any
//! numeric `[flow]` field, or a generator parameter (`r`, `amp`, ...,
//! optionally written `param.amp`).

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{Context, Result};
use curveflow::{CurveKind, FlowState};
use rayon::prelude::*;
use thiserror::Error;

use crate::config::RunConfig;
use crate::evolve::{run_evolve, EvolveOptions};

#[derive(Debug, Error, PartialEq)]
pub enum SweepError {
    #[error("empty grid: give at least one --vary key=v1,v2,...")]
    EmptyGrid,
    #[error("bad axis `{0}`: expected key=v1,v2,...")]
    BadAxis(String),
    #[error("axis `{key}`: cannot parse `{value}` as a number")]
    BadValue { key: String, value: String },
    #[error("axis `{0}` is not a sweepable key")]
    UnknownKey(String),
    #[error("axis `{0}` given twice")]
    DuplicateKey(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub key: String,
    pub values: Vec<f64>,
}

impl FromStr for Axis {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (key, list) = s.split_once('=').ok_or_else(|| SweepError::BadAxis(s.to_string()))?;
        let key = key.trim().trim_start_matches("param.").to_string();
        if key.is_empty() {
            return Err(SweepError::BadAxis(s.to_string()));
        }
        let values = list
            .split(',')
            .map(str::trim)
            .filter(|v| !v.is_empty())
            .map(|v| {
                v.parse::<f64>().map_err(|_| SweepError::BadValue {
                    key: key.clone(),
                    value: v.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if values.is_empty() {
            return Err(SweepError::EmptyGrid);
        }
        Ok(Axis { key, values })
    }
}

fn as_count(key: &str, v: f64) -> Result<usize, SweepError> {
    if v >= 0.0 && v.fract() == 0.0 {
        Ok(v as usize)
    } else {
        Err(SweepError::BadValue {
            key: key.to_string(),
            value: v.to_string(),
        })
    }
}

/// Sets `key = value` in `cfg`.
pub fn apply(cfg: &mut RunConfig, key: &str, value: f64) -> Result<(), SweepError> {
    let f = &mut cfg.flow;
    match key {
        "samples" => cfg.curve.samples = Some(as_count(key, value)?),
        "seed" => cfg.seed = as_count(key, value)? as u64,
        "dt_safety" => f.dt_safety = value,
        "redistribution_every" => f.redistribution_every = as_count(key, value)?,
        "record_every" => f.record_every = as_count(key, value)?,
        "stop_min_length" => f.stop_min_length = value,
        "stop_max_curvature" => f.stop_max_curvature = value,
        "stop_max_time" => f.stop_max_time = value,
        "kappa_floor" => f.kappa_floor = Some(value),
        _ => {
            let kind = cfg.curve.kind.ok_or_else(|| SweepError::UnknownKey(key.to_string()))?;
            if !kind.params().iter().any(|p| p.key == key) {
                return Err(SweepError::UnknownKey(key.to_string()));
            }
            cfg.curve.params.insert(key.to_string(), value);
        }
    }
    Ok(())
}

pub fn check_axes(axes: &[Axis]) -> Result<(), SweepError> {
    if axes.is_empty() {
        return Err(SweepError::EmptyGrid);
    }
    for (k, a) in axes.iter().enumerate() {
        if axes[..k].iter().any(|b| b.key == a.key) {
            return Err(SweepError::DuplicateKey(a.key.clone()));
        }
    }
    Ok(())
}

/// Cartesian product of the axes, first axis slowest.
pub fn grid(axes: &[Axis]) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for a in axes {
        out = out
            .into_iter()
            .flat_map(|p| {
                a.values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

#[derive(Clone, Debug)]
pub struct CellResult {
    pub stop: String,
    pub final_time: f64,
    pub steps: u64,
    pub length: f64,
    /// `|r − √(r₀² − 2t)|` for circle runs, with `r` the mean distance of
    /// the vertices from their centroid.
    pub radius_error: Option<f64>,
    pub wall_seconds: f64,
    pub violations: usize,
}

#[derive(Clone, Debug)]
pub struct Cell {
    pub index: usize,
    pub values: Vec<f64>,
    pub output_dir: PathBuf,
    pub result: Result<CellResult, String>,
}

#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub key: String,
    pub coarse: f64,
    pub fine: f64,
    pub error_coarse: f64,
    pub error_fine: f64,
    /// Observed order: error ∝ N^(−p) for `samples`, ∝ dt^p otherwise.
    pub order: f64,
}

#[derive(Clone, Debug)]
pub struct SweepOutcome {
    pub axes: Vec<Axis>,
    pub cells: Vec<Cell>,
    pub convergence: Vec<ConvergenceRow>,
}

impl SweepOutcome {
    pub fn failures(&self) -> usize {
        self.cells.iter().filter(|c| c.result.is_err()).count()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("cell");
        for a in &self.axes {
            s.push(',');
            s.push_str(&a.key);
        }
        s.push_str(",status,stop,final_time,steps,length,radius_error,violations,wall_seconds\n");
        for c in &self.cells {
            let _ = write!(s, "{}", c.index);
            for v in &c.values {
                let _ = write!(s, ",{v}");
            }
            match &c.result {
                Ok(r) => {
                    let err = r.radius_error.map_or(String::new(), |e| format!("{e:e}"));
                    let _ = writeln!(
                        s,
                        ",ok,{},{:e},{},{:e},{err},{},{:.6}",
                        r.stop, r.final_time, r.steps, r.length, r.violations, r.wall_seconds
                    );
                }
                Err(e) => {
                    let _ = writeln!(s, ",error: {},,,,,,,", e.replace([',', '\n'], ";"));
                }
            }
        }
        s
    }

    pub fn convergence_csv(&self) -> String {
        let mut s = String::from("key,coarse,fine,error_coarse,error_fine,order\n");
        for r in &self.convergence {
            let _ = writeln!(
                s,
                "{},{},{},{:e},{:e},{:.4}",
                r.key, r.coarse, r.fine, r.error_coarse, r.error_fine, r.order
            );
        }
        s
    }
}

fn radius_error(cfg: &RunConfig, state: &FlowState) -> Option<f64> {
    if cfg.curve.kind != Some(CurveKind::Circle) {
        return None;
    }
    let r0 = cfg.curve.params.get("r").copied().unwrap_or(1.0);
    let c = state.curve.centroid();
    let mean = state
        .curve
        .points()
        .map(|p| p.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
        .sum::<f64>()
        / state.curve.len() as f64;
    Some((mean - (r0 * r0 - 2.0 * state.t).sqrt()).abs())
}

fn run_cell(base: &RunConfig, axes: &[Axis], index: usize, values: &[f64], opts: &EvolveOptions) -> Cell {
    let output_dir = base.output_dir.join(format!("cell_{index:03}"));
    let result = (|| -> Result<CellResult> {
        let mut cfg = base.clone();
        for (a, &v) in axes.iter().zip(values) {
            apply(&mut cfg, &a.key, v)?;
        }
        cfg.output_dir = output_dir.clone();
        cfg.validate()?;
        let run = run_evolve(&cfg, opts)?;
        let state = &run.finals[0];
        Ok(CellResult {
            stop: run.stop.label().to_string(),
            final_time: run.final_time,
            steps: run.steps,
            length: state.length(),
            radius_error: radius_error(&cfg, state),
            wall_seconds: run.wall_seconds,
            violations: run.violations().len(),
        })
    })()
    .map_err(|e| format!("{e:#}"));
    Cell {
        index,
        values: values.to_vec(),
        output_dir,
        result,
    }
}

fn convergence(axes: &[Axis], cells: &[Cell]) -> Vec<ConvergenceRow> {
    let mut out = Vec::new();
    for (k, axis) in axes.iter().enumerate() {
        let refines_with_growth = match axis.key.as_str() {
            "samples" => true,
            "dt_safety" => false,
            _ => continue,
        };
        // Group cells that agree on every other axis.
        let mut groups: Vec<Vec<&Cell>> = Vec::new();
        for c in cells {
            let same = |d: &&Cell| (0..axes.len()).all(|m| m == k || d.values[m] == c.values[m]);
            match groups.iter_mut().find(|g| same(&g[0])) {
                Some(g) => g.push(c),
                None => groups.push(vec![c]),
            }
        }
        for mut g in groups {
            g.sort_by(|a, b| a.values[k].total_cmp(&b.values[k]));
            if !refines_with_growth {
                g.reverse();
            }
            for w in g.windows(2) {
                let (Ok(a), Ok(b)) = (&w[0].result, &w[1].result) else { continue };
                let (Some(ea), Some(eb)) = (a.radius_error, b.radius_error) else { continue };
                let (xa, xb) = (w[0].values[k], w[1].values[k]);
                let ratio = if refines_with_growth { xb / xa } else { xa / xb };
                out.push(ConvergenceRow {
                    key: axis.key.clone(),
                    coarse: xa,
                    fine: xb,
                    error_coarse: ea,
                    error_fine: eb,
                    order: (ea / eb).ln() / ratio.ln(),
                });
            }
        }
    }
    out
}

/// Runs every grid cell in its own output directory under the base
/// config's `output_dir`, then writes `sweep.csv` and `convergence.csv`.
pub fn run_sweep(base: &RunConfig, axes: &[Axis], opts: &EvolveOptions) -> Result<SweepOutcome> {
    check_axes(axes)?;
    let points = grid(axes);
    let mut probe = base.clone();
    for (a, v) in axes.iter().zip(&points[0]) {
        apply(&mut probe, &a.key, *v)?;
    }
    fs::create_dir_all(&base.output_dir).with_context(|| format!("creating {}", base.output_dir.display()))?;
    let cells: Vec<Cell> = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| run_cell(base, axes, i, p, opts))
        .collect();
    let outcome = SweepOutcome {
        convergence: convergence(axes, &cells),
        axes: axes.to_vec(),
        cells,
    };
    fs::write(base.output_dir.join("sweep.csv"), outcome.to_csv())?;
    fs::write(base.output_dir.join("convergence.csv"), outcome.convergence_csv())?;
    Ok(outcome)
}
