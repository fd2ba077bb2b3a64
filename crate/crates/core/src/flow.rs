//! Explicit time integration of the curve shortening flow `∂t X = ∂s²X`.
//!
//! Every step moves each vertex by `dt · κN` where `κN` is the discrete
//! second arclength derivative; the normal is never formed, so flat pieces
//! of the curve simply stay put. The time step is `dt_safety · h_min²`.
//! Every `redistribution_every` steps the vertices are redistributed to
//! equal chord spacing, which changes the parametrization but not the
//! curve's image (up to the O(h²) chord error of the polyline).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{default_kappa_floor, frenet_unchecked, resample_uniform, CurveError, DiscreteCurve, FrenetData};

/// Squared minimum edge length below which the run is declared singular.
pub const DT_UNDERFLOW: f64 = 1e-24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowParams {
    /// Explicit-scheme stability factor in `(0, 0.5]`.
    pub dt_safety: f64,
    pub redistribution_every: usize,
    pub stop_min_length: f64,
    /// Empirical stand-in for the a priori curvature bound.
    pub stop_max_curvature: f64,
    pub stop_max_time: f64,
    /// `None` picks `1e-8 / diameter` of the initial curve.
    pub kappa_floor: Option<f64>,
    pub record_every: usize,
}

impl Default for FlowParams {
    fn default() -> Self {
        Self {
            dt_safety: 0.25,
            redistribution_every: 5,
            stop_min_length: 1e-3,
            stop_max_curvature: 1e3,
            stop_max_time: 1.0,
            kappa_floor: None,
            record_every: 10,
        }
    }
}

impl FlowParams {
    pub fn validate(&self) -> Result<(), FlowError> {
        let bad = |msg: String| Err(FlowError::InvalidParams(msg));
        if !(self.dt_safety > 0.0 && self.dt_safety <= 0.5) {
            return bad(format!("dt_safety must lie in (0, 0.5], got {}", self.dt_safety));
        }
        for (name, v) in [
            ("stop_min_length", self.stop_min_length),
            ("stop_max_curvature", self.stop_max_curvature),
            ("stop_max_time", self.stop_max_time),
        ] {
            if !(v > 0.0) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if let Some(k) = self.kappa_floor {
            if !(k >= 0.0) {
                return bad(format!("kappa_floor must be non-negative, got {k}"));
            }
        }
        if self.redistribution_every == 0 {
            return bad("redistribution_every must be at least 1".into());
        }
        if self.record_every == 0 {
            return bad("record_every must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct FlowState {
    pub curve: DiscreteCurve,
    pub t: f64,
    pub step_index: u64,
    pub frenet: FrenetData,
}

impl FlowState {
    pub fn new(curve: DiscreteCurve, kappa_floor: f64) -> Result<Self, FlowError> {
        curve.check_edges()?;
        let frenet = frenet_unchecked(&curve, kappa_floor);
        Ok(Self {
            curve,
            t: 0.0,
            step_index: 0,
            frenet,
        })
    }

    /// Initial state with the floor resolved from `params`.
    pub fn initial(curve: DiscreteCurve, params: &FlowParams) -> Result<Self, FlowError> {
        let floor = params.kappa_floor.unwrap_or_else(|| default_kappa_floor(&curve));
        Self::new(curve, floor)
    }

    pub fn length(&self) -> f64 {
        self.frenet.total_length
    }

    pub fn max_kappa(&self) -> f64 {
        self.frenet.max_curvature()
    }

    pub fn min_edge(&self) -> f64 {
        self.frenet.min_edge()
    }

    /// Largest stable step for this state.
    pub fn stable_dt(&self, params: &FlowParams) -> f64 {
        let h = self.min_edge();
        params.dt_safety * h * h
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StopReason {
    MinLength { length: f64 },
    MaxCurvature { kappa: f64 },
    MaxTime,
    Singularity { detail: String },
}

impl StopReason {
    pub fn label(&self) -> &'static str {
        match self {
            StopReason::MinLength { .. } => "min_length",
            StopReason::MaxCurvature { .. } => "max_curvature",
            StopReason::MaxTime => "max_time",
            StopReason::Singularity { .. } => "singularity",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StopReason::MinLength { length } => write!(f, "length {length:e} below threshold"),
            StopReason::MaxCurvature { kappa } => write!(f, "curvature {kappa:e} above threshold"),
            StopReason::MaxTime => write!(f, "time horizon reached"),
            StopReason::Singularity { detail } => write!(f, "singularity: {detail}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum FlowError {
    #[error("invalid flow parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error("singular step at t = {t}: {detail}", t = last.t)]
    Singularity { last: Box<FlowState>, detail: String },
    #[error("{monitors} monitor lists supplied for {curves} curves")]
    MonitorCountMismatch { curves: usize, monitors: usize },
}

/// One row of monitor output. `None` marks an undefined value (for example a
/// sphere fit of a planar curve) and is written as an empty CSV cell.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MonitorSample {
    pub values: Vec<Option<f64>>,
    /// The monitor's own pass/fail judgement for this sample.
    pub violation: bool,
}

/// A per-curve diagnostic evaluated at recorded steps.
pub trait Monitor: Send {
    fn name(&self) -> &str;
    fn columns(&self) -> Vec<String>;
    fn sample(&mut self, state: &FlowState) -> MonitorSample;
}

/// A diagnostic over a synchronized family of curves.
pub trait FamilyMonitor: Send {
    fn name(&self) -> &str;
    fn columns(&self) -> Vec<String>;
    fn sample(&mut self, states: &[FlowState]) -> MonitorSample;
}

pub const BASE_COLUMNS: [&str; 5] = ["step", "t", "length", "max_kappa", "min_edge"];

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub step: u64,
    pub t: f64,
    pub length: f64,
    pub max_kappa: f64,
    pub min_edge: f64,
    pub values: Vec<Option<f64>>,
}

/// Time series of all monitors for one run.
#[derive(Clone, Debug, PartialEq)]
pub struct MonitorReport {
    /// Monitor columns, after the base columns.
    pub columns: Vec<String>,
    pub rows: Vec<ReportRow>,
    pub stop: Option<StopReason>,
    /// Time of the first sample each monitor judged a violation.
    pub first_violation: BTreeMap<String, f64>,
}

impl MonitorReport {
    fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            stop: None,
            first_violation: BTreeMap::new(),
        }
    }

    pub fn header(&self) -> Vec<String> {
        BASE_COLUMNS
            .iter()
            .map(|s| s.to_string())
            .chain(self.columns.iter().cloned())
            .collect()
    }

    /// Values of a named column (base or monitor) in row order.
    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let base = |r: &ReportRow| -> Option<f64> {
            match name {
                "step" => Some(r.step as f64),
                "t" => Some(r.t),
                "length" => Some(r.length),
                "max_kappa" => Some(r.max_kappa),
                "min_edge" => Some(r.min_edge),
                _ => None,
            }
        };
        if BASE_COLUMNS.contains(&name) {
            return Some(self.rows.iter().map(base).collect());
        }
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[k]).collect())
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }

    pub fn final_time(&self) -> f64 {
        self.rows.last().map_or(0.0, |r| r.t)
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header().join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:e},{:e},{:e},{:e}",
                r.step, r.t, r.length, r.max_kappa, r.min_edge
            ));
            for v in &r.values {
                out.push(',');
                if let Some(v) = v {
                    out.push_str(&format!("{v:e}"));
                }
            }
            out.push('\n');
        }
        out
    }

    fn push(&mut self, state: &FlowState, samples: Vec<(String, MonitorSample)>) {
        let mut values = Vec::with_capacity(self.columns.len());
        for (name, s) in samples {
            if s.violation {
                self.first_violation.entry(name).or_insert(state.t);
            }
            values.extend(s.values);
        }
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(ReportRow {
            step: state.step_index,
            t: state.t,
            length: state.length(),
            max_kappa: state.max_kappa(),
            min_edge: state.min_edge(),
            values,
        });
    }
}

fn sample_all(monitors: &mut [Box<dyn Monitor>], state: &FlowState) -> Vec<(String, MonitorSample)> {
    monitors
        .iter_mut()
        .map(|m| {
            let s = m.sample(state);
            debug_assert_eq!(s.values.len(), m.columns().len(), "monitor {}", m.name());
            (m.name().to_string(), s)
        })
        .collect()
}

fn monitor_columns(monitors: &[Box<dyn Monitor>]) -> Vec<String> {
    monitors.iter().flat_map(|m| m.columns()).collect()
}

/// Stop criterion that holds for `state`, if any.
pub fn check_stop(state: &FlowState, params: &FlowParams) -> Option<StopReason> {
    let length = state.length();
    if length < params.stop_min_length {
        return Some(StopReason::MinLength { length });
    }
    let kappa = state.max_kappa();
    if kappa > params.stop_max_curvature {
        return Some(StopReason::MaxCurvature { kappa });
    }
    if state.t >= params.stop_max_time {
        return Some(StopReason::MaxTime);
    }
    None
}

/// Advances one step of size `dt_safety · h_min²`, shortened so that the run
/// lands exactly on `stop_max_time`.
pub fn step(state: &FlowState, params: &FlowParams) -> Result<FlowState, FlowError> {
    let h = state.min_edge();
    if h * h < DT_UNDERFLOW {
        return Err(singular(state, format!("minimum edge {h:e} underflows the time step")));
    }
    let (dt, t_new) = clamp_to_horizon(state.t, state.stable_dt(params), params.stop_max_time);
    advance(state, dt, t_new, params)
}

/// Advances by an explicit `dt`, bypassing the stability rule.
pub fn step_with_dt(state: &FlowState, dt: f64, params: &FlowParams) -> Result<FlowState, FlowError> {
    advance(state, dt, state.t + dt, params)
}

fn clamp_to_horizon(t: f64, dt: f64, horizon: f64) -> (f64, f64) {
    if t + dt >= horizon && horizon > t {
        (horizon - t, horizon)
    } else {
        (dt, t + dt)
    }
}

fn singular(state: &FlowState, detail: String) -> FlowError {
    FlowError::Singularity {
        last: Box::new(state.clone()),
        detail,
    }
}

fn advance(state: &FlowState, dt: f64, t_new: f64, params: &FlowParams) -> Result<FlowState, FlowError> {
    let dim = state.curve.dim();
    let kv = state.frenet.curvature_vector.as_flat();
    let coords: Vec<f64> = state
        .curve
        .coords()
        .iter()
        .zip(kv)
        .map(|(x, k)| x + dt * k)
        .collect();
    if let Some(k) = coords.iter().position(|x| !x.is_finite()) {
        return Err(singular(state, format!("non-finite coordinate at vertex {}", k / dim)));
    }
    let mut curve = DiscreteCurve::from_raw(dim, coords);
    if let Err(e) = curve.check_edges() {
        return Err(singular(state, e.to_string()));
    }
    let step_index = state.step_index + 1;
    if step_index % params.redistribution_every as u64 == 0 {
        curve = match resample_uniform(&curve, curve.len()) {
            Ok(c) => c,
            Err(e) => return Err(singular(state, format!("redistribution failed: {e}"))),
        };
    }
    let frenet = frenet_unchecked(&curve, state.frenet.kappa_floor);
    Ok(FlowState {
        curve,
        t: t_new,
        step_index,
        frenet,
    })
}

/// Evolves `curve0` until a stop criterion fires.
pub fn evolve(
    curve0: DiscreteCurve,
    params: &FlowParams,
    monitors: &mut [Box<dyn Monitor>],
) -> Result<(FlowState, MonitorReport), FlowError> {
    evolve_observed(curve0, params, monitors, |_| {})
}

/// Like [`evolve`], calling `observer` on every recorded state.
pub fn evolve_observed(
    curve0: DiscreteCurve,
    params: &FlowParams,
    monitors: &mut [Box<dyn Monitor>],
    mut observer: impl FnMut(&FlowState),
) -> Result<(FlowState, MonitorReport), FlowError> {
    params.validate()?;
    let mut state = FlowState::initial(curve0, params)?;
    let mut report = MonitorReport::new(monitor_columns(monitors));
    let mut record = |state: &FlowState, report: &mut MonitorReport| {
        let samples = sample_all(monitors, state);
        report.push(state, samples);
        observer(state);
    };
    record(&state, &mut report);
    let mut last_recorded = state.step_index;
    let stop = loop {
        if let Some(reason) = check_stop(&state, params) {
            break reason;
        }
        match step(&state, params) {
            Ok(next) => state = next,
            Err(FlowError::Singularity { detail, .. }) => break StopReason::Singularity { detail },
            Err(e) => return Err(e),
        }
        if state.step_index % params.record_every as u64 == 0 {
            record(&state, &mut report);
            last_recorded = state.step_index;
        }
    };
    if last_recorded != state.step_index {
        record(&state, &mut report);
    }
    report.stop = Some(stop);
    Ok((state, report))
}

/// Evolves several curves on a common time grid.
///
/// `monitors` holds one list per curve (or is empty). Family monitor columns
/// are appended to every member's report. A stop or singularity of any
/// member halts the whole family.
pub fn evolve_family(
    curves0: Vec<DiscreteCurve>,
    params: &FlowParams,
    mut monitors: Vec<Vec<Box<dyn Monitor>>>,
    family_monitors: &mut [Box<dyn FamilyMonitor>],
) -> Result<Vec<(FlowState, MonitorReport)>, FlowError> {
    params.validate()?;
    let m = curves0.len();
    if monitors.is_empty() {
        monitors = (0..m).map(|_| Vec::new()).collect();
    }
    if monitors.len() != m {
        return Err(FlowError::MonitorCountMismatch {
            curves: m,
            monitors: monitors.len(),
        });
    }
    let mut states = curves0
        .into_iter()
        .map(|c| FlowState::initial(c, params))
        .collect::<Result<Vec<_>, _>>()?;
    let family_columns: Vec<String> = family_monitors.iter().flat_map(|f| f.columns()).collect();
    let mut reports: Vec<MonitorReport> = monitors
        .iter()
        .map(|ms| {
            let mut cols = monitor_columns(ms);
            cols.extend(family_columns.iter().cloned());
            MonitorReport::new(cols)
        })
        .collect();

    let record = |states: &[FlowState],
                  monitors: &mut [Vec<Box<dyn Monitor>>],
                  family_monitors: &mut [Box<dyn FamilyMonitor>],
                  reports: &mut [MonitorReport]| {
        let family: Vec<(String, MonitorSample)> = family_monitors
            .iter_mut()
            .map(|f| (f.name().to_string(), f.sample(states)))
            .collect();
        for ((state, ms), report) in states.iter().zip(monitors.iter_mut()).zip(reports.iter_mut()) {
            let mut samples = sample_all(ms, state);
            samples.extend(family.iter().cloned());
            report.push(state, samples);
        }
    };

    record(&states, &mut monitors, family_monitors, &mut reports);
    let mut last_recorded = 0;
    let stop = loop {
        if let Some(reason) = states.iter().find_map(|s| check_stop(s, params)) {
            break reason;
        }
        let h = states
            .iter()
            .map(|s| s.min_edge())
            .fold(f64::INFINITY, f64::min);
        if h * h < DT_UNDERFLOW {
            break StopReason::Singularity {
                detail: format!("minimum edge {h:e} underflows the time step"),
            };
        }
        let (dt, t_new) = clamp_to_horizon(states[0].t, params.dt_safety * h * h, params.stop_max_time);
        let next: Vec<Result<FlowState, FlowError>> = states
            .iter()
            .map(|s| advance(s, dt, t_new, params))
            .collect();
        let mut failure = None;
        let mut advanced = Vec::with_capacity(m);
        for r in next {
            match r {
                Ok(s) => advanced.push(s),
                Err(FlowError::Singularity { detail, .. }) => {
                    failure.get_or_insert(detail);
                }
                Err(e) => return Err(e),
            }
        }
        if let Some(detail) = failure {
            break StopReason::Singularity { detail };
        }
        states = advanced;
        if states[0].step_index % params.record_every as u64 == 0 {
            record(&states, &mut monitors, family_monitors, &mut reports);
            last_recorded = states[0].step_index;
        }
    };
    if last_recorded != states[0].step_index {
        record(&states, &mut monitors, family_monitors, &mut reports);
    }
    for r in &mut reports {
        r.stop = Some(stop.clone());
    }
    Ok(states.into_iter().zip(reports).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vecn::{dist, norm};
    use std::f64::consts::TAU;

    fn circle(n: usize, r: f64) -> DiscreteCurve {
        DiscreteCurve::from_fn(n, 3, |k, p| {
            let u = TAU * k as f64 / n as f64;
            p.copy_from_slice(&[r * u.cos(), r * u.sin(), 0.0]);
        })
        .unwrap()
    }

    #[test]
    fn params_validation() {
        let mut p = FlowParams::default();
        p.validate().unwrap();
        p.dt_safety = 0.6;
        assert!(p.validate().is_err());
        p = FlowParams {
            record_every: 0,
            ..Default::default()
        };
        assert!(p.validate().is_err());
        p = FlowParams {
            stop_max_time: -1.0,
            ..Default::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn one_step_moves_by_curvature_vector() {
        let c = DiscreteCurve::from_fn(64, 3, |k, p| {
            let u = TAU * k as f64 / 64.0;
            p.copy_from_slice(&[2.0 * u.cos(), u.sin(), 0.3 * (2.0 * u).sin()]);
        })
        .unwrap();
        let params = FlowParams::default();
        let s0 = FlowState::initial(c, &params).unwrap();
        let dt = 1e-4;
        let s1 = step_with_dt(&s0, dt, &params).unwrap();
        for i in 0..64 {
            let moved = s1.curve.point(i);
            let kv = s0.frenet.curvature_vector.get(i);
            for k in 0..3 {
                assert_eq!(moved[k], s0.curve.point(i)[k] + dt * kv[k]);
            }
        }
        assert_eq!(s1.t, dt);
        assert_eq!(s1.step_index, 1);
    }

    #[test]
    fn flat_sides_do_not_move() {
        // Square with 4 samples per side: interior side vertices are flat.
        let mut pts = Vec::new();
        for side in 0..4 {
            for k in 0..4 {
                let s = -1.0 + 0.5 * k as f64;
                let p = match side {
                    0 => [s, -1.0],
                    1 => [1.0, s],
                    2 => [-s, 1.0],
                    _ => [-1.0, -s],
                };
                pts.push(p);
            }
        }
        let c = DiscreteCurve::from_points(&pts).unwrap();
        let params = FlowParams::default();
        let s0 = FlowState::initial(c, &params).unwrap();
        let s1 = step(&s0, &params).unwrap();
        for i in 0..16 {
            let moved = dist(s0.curve.point(i), s1.curve.point(i));
            if i % 4 == 0 {
                assert!(moved > 0.0);
            } else {
                assert!(moved < 1e-15, "vertex {i} moved {moved}");
            }
        }
    }

    #[test]
    fn circle_shrinks_by_circle_law() {
        let params = FlowParams {
            stop_max_time: 0.25,
            record_every: 1000,
            ..Default::default()
        };
        let (state, report) = evolve(circle(256, 1.0), &params, &mut []).unwrap();
        assert_eq!(report.stop, Some(StopReason::MaxTime));
        assert_eq!(state.t, 0.25);
        let c = state.curve.centroid();
        let r = state.curve.points().map(|p| dist(p, &c)).sum::<f64>() / 256.0;
        assert!((r - 0.5f64.sqrt()).abs() < 2e-3, "radius {r}");
        assert_eq!(report.rows.last().unwrap().step, state.step_index);
    }

    struct Counter(usize);
    impl Monitor for Counter {
        fn name(&self) -> &str {
            "counter"
        }
        fn columns(&self) -> Vec<String> {
            vec!["count".into(), "gap".into()]
        }
        fn sample(&mut self, state: &FlowState) -> MonitorSample {
            self.0 += 1;
            MonitorSample {
                values: vec![Some(self.0 as f64), None],
                violation: state.t > 0.05,
            }
        }
    }

    #[test]
    fn report_plumbing() {
        let params = FlowParams {
            stop_max_time: 0.1,
            record_every: 7,
            ..Default::default()
        };
        let mut monitors: Vec<Box<dyn Monitor>> = vec![Box::new(Counter(0))];
        let (state, report) = evolve(circle(32, 1.0), &params, &mut monitors).unwrap();
        assert_eq!(report.header()[5..], ["count".to_string(), "gap".to_string()]);
        let steps: Vec<u64> = report.rows.iter().map(|r| r.step).collect();
        assert_eq!(steps[0], 0);
        assert!(steps[1..steps.len() - 1].iter().all(|s| s % 7 == 0));
        assert_eq!(*steps.last().unwrap(), state.step_index);
        let first = report.first_violation["counter"];
        let k = report.rows.iter().position(|r| r.t == first).unwrap();
        assert!(first > 0.05 && report.rows[k - 1].t <= 0.05);
        let csv = report.to_csv();
        assert!(csv.starts_with("step,t,length,max_kappa,min_edge,count,gap\n"));
        assert!(csv.lines().nth(1).unwrap().ends_with(",1e0,"));
    }

    #[test]
    fn stops_on_curvature() {
        let params = FlowParams {
            stop_max_curvature: 2.0,
            stop_max_time: 10.0,
            record_every: 100,
            ..Default::default()
        };
        let (state, report) = evolve(circle(64, 1.0), &params, &mut []).unwrap();
        assert!(matches!(report.stop, Some(StopReason::MaxCurvature { .. })));
        assert!(state.max_kappa() > 2.0);
        // r ≈ 1/2 at t ≈ 3/8.
        assert!((state.t - 0.375).abs() < 0.02, "{}", state.t);
    }

    #[test]
    fn runs_into_singularity_without_crashing() {
        let params = FlowParams {
            stop_max_curvature: 1e12,
            stop_min_length: 1e-12,
            stop_max_time: 10.0,
            record_every: 1000,
            ..Default::default()
        };
        let (state, report) = evolve(circle(16, 1.0), &params, &mut []).unwrap();
        // Explicit Euler slightly delays extinction relative to t = 1/2.
        assert!(state.t < 0.52, "{}", state.t);
        assert!(report.stop.is_some());
        assert!(state.curve.coords().iter().all(|x| x.is_finite()));
    }

    #[test]
    fn family_of_concentric_circles() {
        let params = FlowParams {
            stop_max_time: 0.2,
            record_every: 50,
            ..Default::default()
        };
        let out = evolve_family(vec![circle(128, 1.0), circle(128, 2.0)], &params, vec![], &mut []).unwrap();
        assert_eq!(out.len(), 2);
        let (a, b) = (&out[0].0, &out[1].0);
        assert_eq!(a.t, b.t);
        assert_eq!(a.step_index, b.step_index);
        let ra = norm(a.curve.point(0));
        let rb = norm(b.curve.point(0));
        assert!((ra - 0.6f64.sqrt()).abs() < 5e-3);
        assert!((rb - 3.6f64.sqrt()).abs() < 5e-3);
        assert_eq!(out[0].1.rows.len(), out[1].1.rows.len());
    }

    #[test]
    fn family_of_one_matches_evolve() {
        let params = FlowParams {
            stop_max_time: 0.05,
            ..Default::default()
        };
        let (single, _) = evolve(circle(64, 1.0), &params, &mut []).unwrap();
        let fam = evolve_family(vec![circle(64, 1.0)], &params, vec![], &mut []).unwrap();
        assert_eq!(fam[0].0.curve, single.curve);
        assert_eq!(fam[0].0.t, single.t);
    }
}
