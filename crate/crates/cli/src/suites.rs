//! Measurement routines behind `verify` and the acceptance checks.
//!
//! Each routine runs one scenario and returns the raw measurements; the
//! pass/fail decisions live with the callers.

use std::f64::consts::{PI, TAU};

use anyhow::{ensure, Result};
use curveflow::convexity::{
    convexity_defect, is_convex_space_curve, projected_frame, CONVEXITY_TOL_REL, REGULARITY_THRESHOLD,
};
use curveflow::curves::{example1, remark4d_alpha};
use curveflow::flow::{evolve_observed, step_with_dt};
use curveflow::geometry::{frenet, unit_tangents};
use curveflow::spherical::{
    chord_field, chord_minima, fit_sphere_or_circle, heat_residual, sample_pairs, schur_bound, schur_chord_bound,
    tangent_collinearity, AvoidanceMonitor, FamilyAvoidanceMonitor,
};
use curveflow::{
    evolve, evolve_family, CurveKind, CurveSpec, DiscreteCurve, FamilyMonitor, FlowParams, FlowState, Monitor,
    Projection, StopReason,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Length along a circle run against `2π√(r₀² − 2t)`.
#[derive(Clone, Debug)]
pub struct CircleLaw {
    pub max_rel_error: f64,
    pub records: usize,
    pub final_time: f64,
}

pub fn circle_law(n: usize, t_end: f64) -> Result<CircleLaw> {
    let c = CurveSpec::new(CurveKind::Circle, n).generate()?;
    let params = FlowParams {
        stop_max_time: t_end,
        ..Default::default()
    };
    let (state, report) = evolve(c, &params, &mut [])?;
    let mut worst = 0.0f64;
    let lengths = report.column("length").unwrap_or_default();
    for (t, l) in report.times().into_iter().zip(lengths) {
        let exact = TAU * (1.0 - 2.0 * t).sqrt();
        worst = worst.max((l.unwrap_or(f64::NAN) - exact).abs() / exact);
    }
    Ok(CircleLaw {
        max_rel_error: worst,
        records: report.rows.len(),
        final_time: state.t,
    })
}

/// Sphere fit, avoidance and Schur data of a spherical run, per record.
#[derive(Clone, Debug, Default)]
pub struct SphericalRun {
    pub times: Vec<f64>,
    pub radius: Vec<f64>,
    pub rms: Vec<f64>,
    pub min_f_d: Vec<Option<f64>>,
    pub c_emp: Vec<f64>,
    pub schur_margin: Vec<f64>,
    pub diameter_sq: Vec<f64>,
    pub self_intersect: bool,
    /// First recorded time at which the avoidance barrier was violated.
    pub avoidance_violation: Option<f64>,
    /// Records where the curve was planar and the circle fit was used.
    pub planar_records: usize,
    pub stop: Option<StopReason>,
}

impl SphericalRun {
    pub fn max_rms_over_radius(&self) -> f64 {
        self.rms
            .iter()
            .zip(&self.radius)
            .map(|(e, r)| e / r)
            .fold(0.0, f64::max)
    }

    /// Smallest `schur_margin / diameter²` (finite margins only).
    pub fn min_schur_ratio(&self) -> f64 {
        self.schur_margin
            .iter()
            .zip(&self.diameter_sq)
            .filter(|(m, _)| m.is_finite())
            .map(|(m, d)| m / d)
            .fold(f64::INFINITY, f64::min)
    }

    /// Smallest `min_f_D / min(initial, 4/C²)` over the run.
    pub fn min_barrier_ratio(&self) -> f64 {
        let initial = self.min_f_d.first().copied().flatten();
        self.min_f_d
            .iter()
            .zip(&self.c_emp)
            .filter_map(|(m, c)| {
                let m = (*m)?;
                let barrier = initial.unwrap_or(f64::INFINITY).min(4.0 / (c * c));
                Some(m / barrier)
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_f_d_positive(&self) -> bool {
        self.min_f_d.iter().all(|m| m.is_none_or(|m| m > 0.0))
    }
}

pub fn spherical_run(curve: DiscreteCurve, params: &FlowParams) -> Result<SphericalRun> {
    let mut run = SphericalRun::default();
    let mut avoidance = AvoidanceMonitor::default();
    let mut fit_error = None;
    let (_, report) = evolve_observed(curve, params, &mut [], |state| {
        let sample = avoidance.sample(state);
        let s = avoidance.last_sample().expect("sample() stores its result");
        if sample.violation && run.avoidance_violation.is_none() {
            run.avoidance_violation = Some(state.t);
        }
        run.times.push(state.t);
        run.min_f_d.push(s.min_f_on_d);
        run.c_emp.push(s.c_emp);
        run.schur_margin.push(s.schur_margin);
        run.diameter_sq.push(s.diameter_sq);
        run.self_intersect |= s.self_intersect;
        let pts: Vec<&[f64]> = state.curve.points().collect();
        match fit_sphere_or_circle(&pts) {
            Ok(f) => {
                run.planar_records += f.planar as usize;
                run.radius.push(f.radius);
                run.rms.push(f.rms_deviation);
            }
            Err(e) => {
                fit_error.get_or_insert(e);
            }
        }
    })?;
    if let Some(e) = fit_error {
        return Err(e.into());
    }
    run.stop = report.stop;
    Ok(run)
}

/// Spherical runs stop at this curvature: the empirical stand-in for the
/// a priori bound, far below where the polygon stops resolving the curve.
pub const SPHERICAL_KAPPA_STOP: f64 = 50.0;

pub fn spherical_params(record_every: usize) -> FlowParams {
    FlowParams {
        stop_max_time: 1.0,
        stop_max_curvature: SPHERICAL_KAPPA_STOP,
        record_every,
        ..Default::default()
    }
}

/// Baseball curve on the unit sphere evolved to `t_end`.
pub fn shrinking_sphere(n: usize, t_end: f64) -> Result<SphericalRun> {
    let c = CurveSpec::new(CurveKind::Baseball, n).generate()?;
    let params = FlowParams {
        stop_max_time: t_end,
        ..spherical_params(10)
    };
    spherical_run(c, &params)
}

/// Largest relative deviation of the fitted radius from `law(t)`.
pub fn radius_law_error(run: &SphericalRun, law: impl Fn(f64) -> f64) -> f64 {
    run.times
        .iter()
        .zip(&run.radius)
        .map(|(&t, &r)| (r - law(t)).abs() / law(t))
        .fold(0.0, f64::max)
}

pub fn random_spherical(n: usize, seed: u64) -> Result<DiscreteCurve> {
    Ok(CurveSpec::new(CurveKind::RandomSpherical, n).with_seed(seed).generate()?)
}

/// Projected and space convexity data of a run, per record.
#[derive(Clone, Debug, Default)]
pub struct ProjectionRun {
    pub times: Vec<f64>,
    pub phi: Vec<f64>,
    pub regular_min: Vec<f64>,
    pub diameter: Vec<f64>,
    pub defect_3d: Vec<f64>,
    pub stop: Option<StopReason>,
}

impl ProjectionRun {
    pub fn regular(&self, k: usize) -> bool {
        self.regular_min[k] > REGULARITY_THRESHOLD
    }

    /// Largest `Φ / diameter` over records where the projection is regular.
    pub fn max_phi_ratio_where_regular(&self) -> Option<f64> {
        (0..self.times.len())
            .filter(|&k| self.regular(k))
            .map(|k| self.phi[k] / self.diameter[k])
            .reduce(f64::max)
    }

    /// Number of leading records over which the projection stays regular.
    pub fn regular_prefix(&self) -> usize {
        (0..self.times.len()).take_while(|&k| self.regular(k)).count()
    }

    /// Largest `Φ / diameter` over the leading regular records.
    pub fn max_phi_ratio_regular_since_start(&self) -> Option<f64> {
        (0..self.regular_prefix())
            .map(|k| self.phi[k] / self.diameter[k])
            .reduce(f64::max)
    }

    /// Largest 3D defect in units of the convexity tolerance.
    pub fn max_defect_over_tol(&self) -> f64 {
        self.defect_3d
            .iter()
            .zip(&self.diameter)
            .map(|(d, diam)| d / (CONVEXITY_TOL_REL * diam))
            .fold(0.0, f64::max)
    }
}

pub fn projection_run(curve: DiscreteCurve, proj: &Projection, params: &FlowParams) -> Result<ProjectionRun> {
    let mut run = ProjectionRun::default();
    let mut error = None;
    let (_, report) = evolve_observed(curve, params, &mut [], |state| {
        let diam = state.curve.diameter();
        let measured = convexity_defect(&state.curve, proj)
            .and_then(|s| Ok((s, is_convex_space_curve(&state.curve, CONVEXITY_TOL_REL * diam)?)));
        match measured {
            Ok((s, c)) => {
                run.times.push(state.t);
                run.phi.push(s.phi_max);
                run.regular_min.push(s.proj_regular_min);
                run.diameter.push(diam);
                run.defect_3d.push(c.max_defect);
            }
            Err(e) => {
                error.get_or_insert(e);
            }
        }
    })?;
    if let Some(e) = error {
        return Err(e.into());
    }
    run.stop = report.stop;
    Ok(run)
}

/// Example 1 and the tilted fixtures, labelled.
pub fn projection_fixtures(n: usize) -> Result<Vec<(String, DiscreteCurve, Projection, FlowParams)>> {
    let mut out = vec![(
        "example1".to_string(),
        example1(n)?,
        Projection::xy(3),
        FlowParams {
            stop_max_time: 0.1,
            stop_max_curvature: 50.0,
            record_every: 20,
            ..Default::default()
        },
    )];
    for variant in 0..5 {
        let spec = CurveSpec::new(CurveKind::TiltedConvex, n).with("variant", variant as f64);
        out.push((
            format!("tilted_convex[{variant}]"),
            spec.generate()?,
            spec.tilted_projection(),
            FlowParams {
                stop_max_time: 0.3,
                stop_max_curvature: 20.0,
                record_every: 40,
                ..Default::default()
            },
        ));
    }
    Ok(out)
}

/// `⟨PN, N_P⟩` sampled at random vertices of random regular projections.
#[derive(Clone, Debug)]
pub struct Lemma2 {
    pub samples: usize,
    pub violations: usize,
    pub min_value: f64,
    pub fixtures: usize,
}

pub fn lemma2(count: usize, seed: u64) -> Result<Lemma2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Lemma2 {
        samples: 0,
        violations: 0,
        min_value: f64::INFINITY,
        fixtures: 0,
    };
    let params = FlowParams {
        stop_max_time: 0.02,
        record_every: usize::MAX,
        ..Default::default()
    };
    let mut fixture = 0u64;
    while out.samples < count {
        ensure!(fixture < 100 * count as u64, "no admissible samples found");
        let mut curve = CurveSpec::new(CurveKind::RandomTilted, 128).with_seed(fixture).generate()?;
        if fixture % 2 == 1 {
            curve = evolve(curve, &params, &mut [])?.0.curve;
        }
        fixture += 1;
        let mut axis = || [0; 3].map(|_| rng.gen_range(-1.0..1.0));
        let Ok(proj) = Projection::orthonormalized(&axis(), &axis()) else {
            continue;
        };
        let floor = 1e-8 / curve.diameter();
        let fr = projected_frame(&curve, &proj, floor)?;
        if !fr.is_regular(REGULARITY_THRESHOLD) {
            continue;
        }
        out.fixtures += 1;
        for _ in 0..10 {
            let i = rng.gen_range(0..curve.len());
            let admissible = fr.kappa[i] > 10.0 * floor && fr.kappa_p[i] > 10.0 * floor && fr.proj_tangent_norm[i] > 0.1;
            if !admissible || out.samples == count {
                continue;
            }
            let d = fr.pn_dot_np[i].unwrap_or(f64::NAN);
            out.samples += 1;
            out.min_value = out.min_value.min(d);
            if !(d > 0.0) {
                out.violations += 1;
            }
        }
    }
    Ok(out)
}

/// A discrete chord minimum with the collinearity of its tangents.
#[derive(Clone, Debug)]
pub struct CheckedMinimum {
    pub i: usize,
    pub j: usize,
    pub f: f64,
    pub strict: bool,
    pub collinearity: f64,
}

pub fn checked_minima(curve: &DiscreteCurve, exclude_frac: f64) -> Result<Vec<CheckedMinimum>> {
    let field = chord_field(curve)?;
    let t = unit_tangents(curve)?;
    Ok(chord_minima(&field, exclude_frac * field.total_length())
        .into_iter()
        .map(|m| CheckedMinimum {
            collinearity: tangent_collinearity(&t, m.i, m.j),
            i: m.i,
            j: m.j,
            f: m.f,
            strict: m.strict,
        })
        .collect())
}

/// Random spherical fixtures with pronounced waists: two large low-order
/// harmonics give curves whose chord functional has interior minima.
pub fn lemma3_fixture(n: usize, seed: u64) -> Result<DiscreteCurve> {
    Ok(CurveSpec::new(CurveKind::RandomSpherical, n)
        .with("amp", 1.0)
        .with("harmonics", 2.0)
        .with_seed(seed)
        .generate()?)
}

/// The ℝ⁴ curve at the antipodal parameter pair `(π/2, 3π/2)`.
#[derive(Clone, Debug)]
pub struct Remark4d {
    pub pair: (usize, usize),
    pub pair_collinearity: f64,
    /// The pair's own entry among the discrete minima, if it is one.
    pub pair_minimum: Option<CheckedMinimum>,
    pub minima: Vec<CheckedMinimum>,
}

pub fn remark4d_minima(n: usize, alpha: f64) -> Result<Remark4d> {
    ensure!(n % 4 == 0, "vertex count must be divisible by 4");
    let c = remark4d_alpha(n, alpha)?;
    let pair = (n / 4, 3 * n / 4);
    let t = unit_tangents(&c)?;
    let minima = checked_minima(&c, 0.3)?;
    Ok(Remark4d {
        pair,
        pair_collinearity: tangent_collinearity(&t, pair.0, pair.1),
        pair_minimum: minima.iter().find(|m| (m.i, m.j) == pair).cloned(),
        minima,
    })
}

/// Heat residual `max |∂t f − Δf + 4|` on a circle at `n` vertices, from
/// snapshots spaced by a quarter of the stable step.
pub fn circle_heat_residual(n: usize, pairs: usize) -> Result<(f64, f64)> {
    let params = FlowParams {
        redistribution_every: usize::MAX,
        ..Default::default()
    };
    let c = CurveSpec::new(CurveKind::Circle, n).generate()?;
    let mut state = FlowState::initial(c, &params)?;
    let dt = state.stable_dt(&params);
    let mut fields = vec![chord_field(&state.curve)?];
    for _ in 0..4 {
        state = step_with_dt(&state, dt, &params)?;
        fields.push(chord_field(&state.curve)?);
    }
    Ok((heat_residual(&fields, dt, &sample_pairs(n, pairs, 1))?, dt))
}

/// Schur margin on the circle of radius `1/c` (zero in exact arithmetic)
/// and the chord bound at arc distance `π/c` (exactly `4/c²`).
pub fn schur_circle(n: usize, c: f64) -> Result<(f64, f64)> {
    let curve = CurveSpec::new(CurveKind::Circle, n).with("r", 1.0 / c).generate()?;
    let field = chord_field(&curve)?;
    Ok((schur_bound(&field, c), schur_chord_bound(c, PI / c)))
}

/// Simple spherical curves for the avoidance check: random fixtures plus
/// dumbbells whose necks nearly touch.
pub fn avoidance_fixtures(n: usize, random: u64, necks: &[f64]) -> Result<Vec<(String, DiscreteCurve)>> {
    let mut out = Vec::new();
    for seed in 1..=random {
        out.push((format!("random_spherical[seed {seed}]"), random_spherical(n, seed)?));
    }
    for &w in necks {
        let c = CurveSpec::new(CurveKind::DumbbellSpherical, n).with("w", w).generate()?;
        out.push((format!("dumbbell_spherical[w {w}]"), c));
    }
    Ok(out)
}

pub const ADVERSARIAL_NECKS: [f64; 3] = [0.1, 0.07, 0.05];

/// Two disjoint curves on the unit sphere evolved on one clock.
#[derive(Clone, Debug)]
pub struct FamilyRun {
    pub min_pair_distance: f64,
    pub initial_pair_distance: f64,
    pub records: usize,
    pub final_time: f64,
    pub stop: Option<StopReason>,
    pub touched: bool,
}

pub fn family_run(n: usize) -> Result<FamilyRun> {
    let cap = CurveSpec::new(CurveKind::Latitude, n).with("beta", 0.7).generate()?;
    let wave = CurveSpec::new(CurveKind::SphericalWave, n).generate()?;
    let mut fam: Vec<Box<dyn FamilyMonitor>> = vec![Box::new(FamilyAvoidanceMonitor::default())];
    let out = evolve_family(vec![cap, wave], &spherical_params(10), Vec::new(), &mut fam)?;
    let report = &out[0].1;
    let d: Vec<f64> = report
        .column("pair_min_dist")
        .unwrap_or_default()
        .into_iter()
        .map(|x| x.unwrap_or(f64::NAN))
        .collect();
    Ok(FamilyRun {
        min_pair_distance: d.iter().copied().fold(f64::INFINITY, f64::min),
        initial_pair_distance: d.first().copied().unwrap_or(f64::NAN),
        records: d.len(),
        final_time: out[0].0.t,
        stop: report.stop.clone(),
        touched: !report.first_violation.is_empty(),
    })
}

/// Worst relative κ and τ errors on the interior of a closed-off helix
/// `(cos u, sin u, u/2)`, and the κ error on the unit circle.
pub fn frenet_errors(n: usize) -> Result<(f64, f64, f64)> {
    let helix = DiscreteCurve::from_fn(n, 3, |k, p| {
        let u = 2.0 * TAU * k as f64 / n as f64;
        p.copy_from_slice(&[u.cos(), u.sin(), 0.5 * u]);
    })?;
    let fr = frenet(&helix, 1e-8)?;
    let (mut ek, mut et) = (0.0f64, 0.0f64);
    // The closing chord spoils the vertices next to it.
    for i in 3..n - 3 {
        ek = ek.max((fr.curvature[i] - 0.8).abs() / 0.8);
        et = et.max((fr.torsion[i].unwrap_or(f64::NAN) - 0.4).abs() / 0.4);
    }
    let circle = CurveSpec::new(CurveKind::Circle, n).generate()?;
    let fc = frenet(&circle, 1e-8)?;
    let ec = fc.curvature.iter().map(|k| (k - 1.0).abs()).fold(0.0, f64::max);
    Ok((ek, et, ec))
}
