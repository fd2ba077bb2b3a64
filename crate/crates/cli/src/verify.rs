//! `verify <suite>`: property suites printing one line per check.

use std::fmt;

use anyhow::Result;
use curveflow::convexity::hull_3d;
use thiserror::Error;

use crate::suites::{self, ADVERSARIAL_NECKS};

pub const SUITES: [&str; 10] = [
    "frenet",
    "convexity",
    "projection",
    "lemma2",
    "lemma3",
    "lemma4",
    "schur",
    "avoidance",
    "sphericity",
    "family",
];

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown suite `{0}` (known: {known})", known = SUITES.join(", "))]
    UnknownSuite(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Reported for context; never fails the suite.
    Info,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub measured: String,
    pub expected: String,
    pub status: Status,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, measured: impl Into<String>, expected: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            measured: measured.into(),
            expected: expected.into(),
            status: if pass { Status::Pass } else { Status::Fail },
        }
    }

    pub fn info(name: impl Into<String>, measured: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            measured: measured.into(),
            expected: String::new(),
            status: Status::Info,
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        };
        write!(f, "{tag} {}: {}", self.name, self.measured)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected)?;
        }
        Ok(())
    }
}

/// Problem sizes; `quick` shrinks them for smoke tests.
#[derive(Clone, Copy, Debug)]
pub struct Scale {
    pub quick: bool,
}

impl Scale {
    fn n(&self, full: usize) -> usize {
        if self.quick {
            (full / 4).max(64)
        } else {
            full
        }
    }

    fn count(&self, full: u64) -> u64 {
        if self.quick {
            (full / 5).max(2)
        } else {
            full
        }
    }
}

pub fn run_suite(name: &str, scale: Scale, seed: u64) -> Result<Vec<Check>> {
    match name {
        "frenet" => frenet(scale),
        "convexity" => convexity(scale),
        "projection" => projection(scale),
        "lemma2" => lemma2(scale, seed),
        "lemma3" => lemma3(scale),
        "lemma4" => lemma4(scale),
        "schur" => schur(scale),
        "avoidance" => avoidance(scale),
        "sphericity" => sphericity(scale),
        "family" => family(scale),
        other => Err(VerifyError::UnknownSuite(other.to_string()).into()),
    }
}

fn frenet(scale: Scale) -> Result<Vec<Check>> {
    let (ek, et, ec) = suites::frenet_errors(scale.n(512))?;
    Ok(vec![
        Check::new("helix curvature", ek < 1e-3, format!("max rel error {ek:.2e}"), "< 1e-3"),
        Check::new("helix torsion", et < 1e-3, format!("max rel error {et:.2e}"), "< 1e-3"),
        Check::new("circle curvature", ec < 1e-9, format!("max error {ec:.2e}"), "< 1e-9"),
    ])
}

fn convexity(scale: Scale) -> Result<Vec<Check>> {
    let mut cube = Vec::new();
    for i in 0..8 {
        let s = |b: usize| if (i >> b) & 1 == 1 { 1.0 } else { -1.0 };
        cube.push([s(0), s(1), s(2)]);
    }
    let m = hull_3d(&cube)?.minkowski([2.0, 0.0, 0.0])?;
    let (_, c, p, params) = suites::projection_fixtures(scale.n(512))?.remove(0);
    let run = suites::projection_run(c, &p, &params)?;
    let start = run.defect_3d[0] / (curveflow::convexity::CONVEXITY_TOL_REL * run.diameter[0]);
    let peak = run.max_defect_over_tol();
    Ok(vec![
        Check::new("cube Minkowski functional at (2,0,0)", (m - 2.0).abs() < 1e-12, format!("{m}"), "2"),
        Check::new("example1 convex at t = 0", start < 1.0, format!("defect {start:.2e} × tol"), "< 1 × tol"),
        Check::new(
            "example1 loses convexity",
            peak > 10.0,
            format!("max defect {peak:.3e} × tol by t = {:.3}", run.times.last().unwrap_or(&0.0)),
            "> 10 × tol",
        ),
    ])
}

fn projection(scale: Scale) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (label, c, p, params) in suites::projection_fixtures(scale.n(512))? {
        let run = suites::projection_run(c, &p, &params)?;
        let while_regular = run.max_phi_ratio_where_regular();
        let since_start = run.max_phi_ratio_regular_since_start();
        let fmt = |x: Option<f64>| x.map_or("no regular records".to_string(), |x| format!("{x:.3e}"));
        out.push(Check::new(
            format!("{label}: max Φ/diameter while regular"),
            while_regular.is_none_or(|x| x < 5e-3),
            format!("{} over {} records", fmt(while_regular), run.times.len()),
            "< 5e-3",
        ));
        out.push(Check::info(
            format!("{label}: max Φ/diameter while regular since t = 0"),
            format!("{} over {} leading records", fmt(since_start), run.regular_prefix()),
        ));
    }
    Ok(out)
}

fn lemma2(scale: Scale, seed: u64) -> Result<Vec<Check>> {
    let count = if scale.quick { 200 } else { 1000 };
    let l = suites::lemma2(count, seed)?;
    Ok(vec![Check::new(
        "⟨PN, N_P⟩ > 0",
        l.violations == 0 && l.samples == count,
        format!(
            "{} violations in {} samples from {} projections, min {:.3e}",
            l.violations, l.samples, l.fixtures, l.min_value
        ),
        "0 violations",
    )])
}

fn lemma3(scale: Scale) -> Result<Vec<Check>> {
    let n = scale.n(1024) / 4 * 4;
    let mut checked = 0;
    let mut worst: Option<(u64, suites::CheckedMinimum)> = None;
    for seed in 1..=scale.count(20) {
        for m in suites::checked_minima(&suites::lemma3_fixture(n, seed)?, 0.3)? {
            checked += 1;
            if worst.as_ref().is_none_or(|(_, w)| m.collinearity < w.collinearity) {
                worst = Some((seed, m));
            }
        }
    }
    let worst_col = worst.as_ref().map_or(1.0, |(_, m)| m.collinearity);
    let where_ = worst
        .as_ref()
        .map_or(String::new(), |(s, m)| format!(" (seed {s}, pair ({}, {}))", m.i, m.j));
    let r4 = suites::remark4d_minima(n, 1.0)?;
    let r4_best = r4.minima.iter().map(|m| m.collinearity).fold(f64::INFINITY, f64::min);
    let half = suites::remark4d_minima(n, 0.5)?;
    Ok(vec![
        Check::new(
            "spherical chord minima have collinear tangents",
            checked > 0 && worst_col > 1.0 - 1e-3,
            format!("{checked} minima, worst |⟨T_i,T_j⟩| = {worst_col:.6}{where_}"),
            "> 1 − 1e-3 over at least one minimum",
        ),
        Check::new(
            "remark4d has a minimum with orthogonal tangents",
            r4_best < 1e-3,
            format!(
                "{} minima, smallest |⟨T_i,T_j⟩| = {r4_best:.4}; pair (π/2, 3π/2): {:.4}, {}",
                r4.minima.len(),
                r4.pair_collinearity,
                if r4.pair_minimum.is_some() { "a minimum" } else { "not a minimum" }
            ),
            "< 1e-3",
        ),
        Check::info(
            "remark4d with sin(2u) halved",
            format!(
                "pair (π/2, 3π/2): |⟨T_i,T_j⟩| = {:.2e}, {}",
                half.pair_collinearity,
                match &half.pair_minimum {
                    Some(m) if m.strict => "a strict minimum",
                    Some(_) => "a plateau minimum",
                    None => "not a minimum",
                }
            ),
        ),
    ])
}

fn lemma4(scale: Scale) -> Result<Vec<Check>> {
    let sizes: Vec<usize> = if scale.quick { vec![64, 128] } else { vec![128, 256, 512] };
    let mut res = Vec::new();
    for &n in &sizes {
        res.push((n, suites::circle_heat_residual(n, 2000)?.0));
    }
    let finest = res.last().unwrap().1;
    let mut out = vec![Check::new(
        format!("circle heat residual at N = {}", sizes.last().unwrap()),
        finest < 0.05,
        format!("{finest:.3e}"),
        "< 0.05",
    )];
    for w in res.windows(2) {
        let ratio = w[1].1 / w[0].1;
        out.push(Check::new(
            format!("residual ratio N = {} → {}", w[0].0, w[1].0),
            (0.35..=0.65).contains(&ratio),
            format!("{ratio:.3}"),
            "0.5 ± 30%",
        ));
    }
    Ok(out)
}

fn schur(scale: Scale) -> Result<Vec<Check>> {
    let c = 2.0;
    let (margin, bound) = suites::schur_circle(scale.n(512), c)?;
    let run = suites::spherical_run(suites::random_spherical(scale.n(256), 1)?, &suites::spherical_params(20))?;
    let ratio = run.min_schur_ratio();
    Ok(vec![
        Check::new("tightness on the circle of radius 1/C", margin.abs() < 1e-6, format!("|margin| = {:.2e}", margin.abs()), "< 1e-6"),
        Check::new("bound at arc π/C", (bound - 4.0 / (c * c)).abs() < 1e-15, format!("{bound}"), "4/C²"),
        Check::new("margin on a spherical run", ratio >= -1e-6, format!("min margin/diameter² = {ratio:.2e}"), "≥ -1e-6"),
    ])
}

fn avoidance(scale: Scale) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    for (label, c) in suites::avoidance_fixtures(scale.n(256), scale.count(17), &ADVERSARIAL_NECKS)? {
        let run = suites::spherical_run(c, &suites::spherical_params(20))?;
        let ratio = run.min_barrier_ratio();
        out.push(Check::new(
            label,
            run.min_f_d_positive() && ratio >= 0.95 && !run.self_intersect,
            format!("min f_D / barrier = {ratio:.3}, self-intersection: {}", run.self_intersect),
            "≥ 0.95, none",
        ));
    }
    Ok(out)
}

fn sphericity(scale: Scale) -> Result<Vec<Check>> {
    let run = suites::shrinking_sphere(scale.n(512), 0.15)?;
    let e4 = suites::radius_law_error(&run, |t| (1.0 - 4.0 * t).sqrt());
    let e2 = suites::radius_law_error(&run, |t| (1.0 - 2.0 * t).sqrt());
    let rms = run.max_rms_over_radius();
    let mut out = vec![
        Check::new("baseball radius follows √(1−4t)", e4 < 0.01, format!("max rel error {e4:.3e}"), "< 1%"),
        Check::info("baseball radius against √(1−2t)", format!("max rel error {e4:.3e}", e4 = e2)),
        Check::new("baseball stays spherical", rms < 5e-3, format!("max rms/R {rms:.2e}"), "< 5e-3"),
    ];
    for seed in 1..=scale.count(10) {
        let run = suites::spherical_run(suites::random_spherical(scale.n(256), seed)?, &suites::spherical_params(20))?;
        let rms = run.max_rms_over_radius();
        out.push(Check::new(
            format!("random_spherical[seed {seed}] stays spherical"),
            rms < 5e-3,
            format!(
                "max rms/R {rms:.2e} until {} ({} planar records)",
                run.stop.as_ref().map_or("?", |s| s.label()),
                run.planar_records
            ),
            "< 5e-3",
        ));
    }
    Ok(out)
}

fn family(scale: Scale) -> Result<Vec<Check>> {
    let r = suites::family_run(scale.n(256))?;
    Ok(vec![Check::new(
        "disjoint spherical curves stay apart",
        r.min_pair_distance > 0.0 && !r.touched,
        format!(
            "min distance {:.3e} (initial {:.3e}) over {} records to t = {:.3}",
            r.min_pair_distance, r.initial_pair_distance, r.records, r.final_time
        ),
        "> 0",
    )])
}
