use std::f64::consts::TAU;

use curveflow::curves::example1;
use curveflow::flow::evolve_observed;
use curveflow::{evolve, snapshot, CurveKind, CurveSpec, DiscreteCurve, FlowParams, StopReason};
use proptest::prelude::*;

fn circle(n: usize, r: f64) -> DiscreteCurve {
    CurveSpec::new(CurveKind::Circle, n).with("r", r).generate().unwrap()
}

fn wobbly(n: usize, a2: f64, a3: f64, z: f64) -> DiscreteCurve {
    DiscreteCurve::from_fn(n, 3, |k, p| {
        let u = TAU * k as f64 / n as f64;
        let r = 1.0 + a2 * (2.0 * u).cos() + a3 * (3.0 * u).sin();
        p.copy_from_slice(&[r * u.cos(), r * u.sin(), z * (2.0 * u).sin()]);
    })
    .unwrap()
}

fn short(max_time: f64) -> FlowParams {
    FlowParams {
        stop_max_time: max_time,
        record_every: 1,
        ..Default::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn length_never_increases(a2 in -0.2..0.2f64, a3 in -0.1..0.1f64, z in -0.5..0.5f64) {
        let c = wobbly(64, a2, a3, z);
        let (_, report) = evolve(c, &short(0.05), &mut []).unwrap();
        let lengths: Vec<f64> = report.column("length").unwrap().into_iter().map(Option::unwrap).collect();
        for w in lengths.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12), "{} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn flow_commutes_with_translation(
        a2 in -0.2..0.2f64,
        shift in (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64),
    ) {
        let c = wobbly(48, a2, 0.05, 0.2);
        let moved = c.map_points(3, |p, q| {
            q[0] = p[0] + shift.0;
            q[1] = p[1] + shift.1;
            q[2] = p[2] + shift.2;
        }).unwrap();
        let params = short(0.02);
        let (a, _) = evolve(c, &params, &mut []).unwrap();
        let (b, _) = evolve(moved, &params, &mut []).unwrap();
        prop_assert_eq!(a.step_index, b.step_index);
        for (p, q) in a.curve.points().zip(b.curve.points()) {
            prop_assert!((q[0] - p[0] - shift.0).abs() < 1e-9);
            prop_assert!((q[1] - p[1] - shift.1).abs() < 1e-9);
            prop_assert!((q[2] - p[2] - shift.2).abs() < 1e-9);
        }
    }
}

#[test]
fn runs_are_bitwise_deterministic() {
    let spec = CurveSpec::new(CurveKind::RandomSpherical, 128).with_seed(7);
    let params = short(0.05);
    let (a, ra) = evolve(spec.generate().unwrap(), &params, &mut []).unwrap();
    let (b, rb) = evolve(spec.generate().unwrap(), &params, &mut []).unwrap();
    assert_eq!(a.curve, b.curve);
    assert_eq!(ra.to_csv(), rb.to_csv());
}

#[test]
fn redistribution_frequency_does_not_change_the_circle() {
    let mut radii = Vec::new();
    for every in [1, 5, 1000] {
        let params = FlowParams {
            redistribution_every: every,
            stop_max_time: 0.2,
            ..Default::default()
        };
        let (s, _) = evolve(circle(128, 1.0), &params, &mut []).unwrap();
        radii.push(s.length() / TAU);
    }
    let exact = (1.0f64 - 0.4).sqrt();
    for r in &radii {
        assert!((r - exact).abs() < 2e-3 * exact, "{r} vs {exact}");
    }
    assert!((radii[0] - radii[2]).abs() < 1e-6);
}

#[test]
fn redistribution_keeps_vertices_evenly_spaced() {
    let c = CurveSpec::new(CurveKind::Ellipse, 128).with("nonuniform", 0.5).generate().unwrap();
    let params = FlowParams {
        redistribution_every: 1,
        stop_max_time: 0.1,
        ..Default::default()
    };
    let (s, _) = evolve(c, &params, &mut []).unwrap();
    let e = s.curve.edge_lengths();
    let (lo, hi) = e.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
    assert!(hi / lo < 1.01, "{lo} .. {hi}");
}

#[test]
fn time_stepping_lands_on_max_time() {
    let (s, report) = evolve(circle(64, 1.0), &short(0.123), &mut []).unwrap();
    assert_eq!(report.stop, Some(StopReason::MaxTime));
    assert!((s.t - 0.123).abs() < 1e-12);
    assert_eq!(report.final_time(), s.t);
}

#[test]
fn circle_shrinks_to_a_point() {
    let params = FlowParams {
        stop_max_time: 1.0,
        stop_min_length: 0.05,
        ..Default::default()
    };
    let (s, report) = evolve(circle(64, 1.0), &params, &mut []).unwrap();
    assert!(matches!(report.stop, Some(StopReason::MinLength { .. })));
    // Extinction at t = 1/2, up to the explicit scheme's O(dt) delay.
    assert!((s.t - 0.5).abs() < 5e-3, "t = {}", s.t);
}

#[test]
fn example1_stops_on_curvature_and_snapshots_round_trip() {
    let params = FlowParams {
        stop_max_curvature: 50.0,
        stop_max_time: 10.0,
        record_every: 50,
        ..Default::default()
    };
    let (s, report) = evolve(example1(256).unwrap(), &params, &mut []).unwrap();
    let stop = report.stop.clone().unwrap();
    assert!(matches!(stop, StopReason::MaxCurvature { .. } | StopReason::MinLength { .. }), "{stop}");
    let text = snapshot::to_string(&s.curve, s.t);
    let back = snapshot::from_str(&text).unwrap();
    assert_eq!(back.curve, s.curve);
    assert_eq!(back.t, s.t);
}

#[test]
fn observer_sees_every_recorded_state() {
    let mut steps = Vec::new();
    let (s, _) = evolve_observed(circle(32, 1.0), &short(0.01), &mut [], |st| steps.push(st.step_index)).unwrap();
    assert_eq!(steps.first(), Some(&0));
    assert_eq!(steps.last(), Some(&s.step_index));
    assert!(steps.windows(2).all(|w| w[1] == w[0] + 1));
}

#[test]
fn params_reject_unknown_keys() {
    let err = serde_json::from_str::<FlowParams>(r#"{"dt_safty": 0.2}"#);
    assert!(err.is_err());
    let ok: FlowParams = serde_json::from_str(r#"{"dt_safety": 0.2}"#).unwrap();
    assert_eq!(ok.dt_safety, 0.2);
    assert_eq!(ok.record_every, FlowParams::default().record_every);
}
