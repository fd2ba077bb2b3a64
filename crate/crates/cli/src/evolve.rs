//! `evolve`: one run (or one family run) from a config, with its artifacts.
//!
//! Files written to the output directory:
//! * `metrics.csv`: one row per recorded step (`metrics_member<k>.csv` for
//!   further family members);
//! * `snap_<step>.curve`: periodic snapshots and the final state;
//! * `report.toml`: stop reason, final time, monitor extrema, violations;
//! * `proj_<step>.svg`: projected curve and hull per recorded step (`--svg`);
//! * `chordfield_<step>.csv`: the chord matrix at start and end
//!   (`--dump-chordfield`).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use curveflow::convexity::{ConvexityMonitor, ProjectionMonitor};
use curveflow::flow::evolve_observed;
use curveflow::spherical::{chord_field, AvoidanceMonitor, FamilyAvoidanceMonitor, SphericityMonitor};
use curveflow::{
    evolve_family, snapshot, DiscreteCurve, FamilyMonitor, FlowState, Monitor, MonitorReport, Projection,
    StopReason,
};
use serde::Serialize;

use crate::config::{RunConfig, TOPOLOGY_MONITORS};
use crate::svg;

#[derive(Clone, Debug)]
pub struct EvolveOptions {
    /// `false` drops the O(N²) monitors (avoidance and family distance).
    pub topology_checks: bool,
    pub dump_chordfield: bool,
    pub svg: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            topology_checks: true,
            dump_chordfield: false,
            svg: false,
        }
    }
}

#[derive(Debug)]
pub struct RunSummary {
    pub stop: StopReason,
    pub final_time: f64,
    pub steps: u64,
    pub wall_seconds: f64,
    /// One report per curve, main curve first.
    pub reports: Vec<MonitorReport>,
    pub finals: Vec<FlowState>,
    pub output_dir: PathBuf,
}

impl RunSummary {
    /// Earliest violation time per monitor over all members.
    pub fn violations(&self) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        for r in &self.reports {
            for (k, &t) in &r.first_violation {
                let e = out.entry(k.clone()).or_insert(t);
                *e = f64::min(*e, t);
            }
        }
        out
    }

    pub fn seconds_per_step(&self) -> f64 {
        self.wall_seconds / self.steps.max(1) as f64
    }
}

fn single_monitors(cfg: &RunConfig, proj: &Projection, opts: &EvolveOptions) -> Vec<Box<dyn Monitor>> {
    let mut out: Vec<Box<dyn Monitor>> = Vec::new();
    for name in &cfg.monitors {
        if !opts.topology_checks && TOPOLOGY_MONITORS.contains(&name.as_str()) {
            continue;
        }
        match name.as_str() {
            "avoidance" => out.push(Box::new(AvoidanceMonitor::default())),
            "sphericity" => out.push(Box::new(SphericityMonitor::default())),
            "convexity" => out.push(Box::new(ConvexityMonitor::default())),
            "projection" => out.push(Box::new(ProjectionMonitor::new(proj.clone()))),
            _ => {}
        }
    }
    out
}

#[derive(Serialize)]
struct Extrema {
    min: f64,
    max: f64,
}

#[derive(Serialize)]
struct MemberReport {
    index: usize,
    vertices: usize,
    final_length: f64,
    final_max_kappa: f64,
    violations: BTreeMap<String, f64>,
    columns: BTreeMap<String, Extrema>,
}

#[derive(Serialize)]
struct ReportFile {
    stop: &'static str,
    stop_detail: String,
    final_time: f64,
    steps: u64,
    wall_seconds: f64,
    topology_checks: bool,
    violations: BTreeMap<String, f64>,
    members: Vec<MemberReport>,
}

fn extrema(report: &MonitorReport) -> BTreeMap<String, Extrema> {
    let mut out = BTreeMap::new();
    for name in report.header().into_iter().skip(2) {
        let values: Vec<f64> = report.column(&name).unwrap_or_default().into_iter().flatten().collect();
        if values.is_empty() {
            continue;
        }
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        out.insert(name, Extrema { min, max });
    }
    out
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn write_snapshot(dir: &Path, prefix: &str, state: &FlowState) -> Result<()> {
    let path = dir.join(format!("{prefix}{:08}.curve", state.step_index));
    snapshot::write(&path, &state.curve, state.t).with_context(|| format!("writing {}", path.display()))
}

fn write_chordfield(dir: &Path, state: &FlowState) -> Result<()> {
    let field = chord_field(&state.curve)?;
    write(&dir.join(format!("chordfield_{:08}.csv", state.step_index)), field.to_csv())
}

fn write_svg(dir: &Path, proj: &Projection, state: &FlowState) -> Result<()> {
    let pts = proj.project_curve(&state.curve);
    let caption = format!("t = {:.6}  step {}", state.t, state.step_index);
    write(&dir.join(format!("proj_{:08}.svg", state.step_index)), svg::render(&pts, &caption))
}

/// Runs the configured evolution and writes its artifacts.
pub fn run_evolve(cfg: &RunConfig, opts: &EvolveOptions) -> Result<RunSummary> {
    let curves = cfg.initial_curves()?;
    let dir = cfg.output_dir.clone();
    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let proj = cfg.projection(curves[0].dim())?;
    let svg_on = opts.svg || cfg.dump.svg;
    let chords_on = opts.dump_chordfield || cfg.dump.chordfield;

    let start = Instant::now();
    let (finals, reports) = if cfg.family.is_empty() {
        let (state, report) = run_single(curves.into_iter().next().unwrap(), cfg, &proj, opts, &dir, svg_on, chords_on)?;
        (vec![state], vec![report])
    } else {
        run_members(curves, cfg, &proj, opts)?
    };
    let wall_seconds = start.elapsed().as_secs_f64();

    for (k, (state, report)) in finals.iter().zip(&reports).enumerate() {
        let name = if k == 0 { "metrics.csv".to_string() } else { format!("metrics_member{k}.csv") };
        write(&dir.join(name), report.to_csv())?;
        let prefix = if k == 0 { "snap_".to_string() } else { format!("snap_m{k}_") };
        write_snapshot(&dir, &prefix, state)?;
    }
    if chords_on {
        write_chordfield(&dir, &finals[0])?;
    }

    let summary = RunSummary {
        stop: reports[0].stop.clone().expect("evolve always records a stop reason"),
        final_time: finals[0].t,
        steps: finals[0].step_index,
        wall_seconds,
        reports,
        finals,
        output_dir: dir.clone(),
    };
    let file = ReportFile {
        stop: summary.stop.label(),
        stop_detail: summary.stop.to_string(),
        final_time: summary.final_time,
        steps: summary.steps,
        wall_seconds,
        topology_checks: opts.topology_checks,
        violations: summary.violations(),
        members: summary
            .finals
            .iter()
            .zip(&summary.reports)
            .enumerate()
            .map(|(index, (s, r))| MemberReport {
                index,
                vertices: s.curve.len(),
                final_length: s.length(),
                final_max_kappa: s.max_kappa(),
                violations: r.first_violation.clone(),
                columns: extrema(r),
            })
            .collect(),
    };
    write(&dir.join("report.toml"), toml::to_string(&file)?)?;
    Ok(summary)
}

fn run_single(
    curve: DiscreteCurve,
    cfg: &RunConfig,
    proj: &Projection,
    opts: &EvolveOptions,
    dir: &Path,
    svg_on: bool,
    chords_on: bool,
) -> Result<(FlowState, MonitorReport)> {
    let mut monitors = single_monitors(cfg, proj, opts);
    let every = cfg.dump.snapshot_every;
    let mut recorded = 0usize;
    let mut io_error = None;
    let result = evolve_observed(curve, &cfg.flow, &mut monitors, |state| {
        let go = || -> Result<()> {
            if every > 0 && recorded % every == 0 {
                write_snapshot(dir, "snap_", state)?;
            }
            if svg_on {
                write_svg(dir, proj, state)?;
            }
            if chords_on && recorded == 0 {
                write_chordfield(dir, state)?;
            }
            Ok(())
        };
        if io_error.is_none() {
            io_error = go().err();
        }
        recorded += 1;
    });
    if let Some(e) = io_error {
        return Err(e);
    }
    Ok(result?)
}

fn run_members(
    curves: Vec<DiscreteCurve>,
    cfg: &RunConfig,
    proj: &Projection,
    opts: &EvolveOptions,
) -> Result<(Vec<FlowState>, Vec<MonitorReport>)> {
    let monitors = curves.iter().map(|_| single_monitors(cfg, proj, opts)).collect();
    let mut family: Vec<Box<dyn FamilyMonitor>> = Vec::new();
    if opts.topology_checks && cfg.has_monitor("family") {
        family.push(Box::new(FamilyAvoidanceMonitor::default()));
    }
    let out = evolve_family(curves, &cfg.flow, monitors, &mut family)?;
    Ok(out.into_iter().unzip())
}
