use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use znav_core::control::{initial_state_alpha, initial_state_randers, initial_state_riemannian};
use znav_core::integrator::{heading_fan, integrate_family_with, integrate_system};
use znav_core::{
    classify_path, integrate_family, Execution, GeodesicSystem, IntegratorConfig, MetricKind, NavState, PathClass,
    RandersMetric, Spheroid, SurfacePoint, TangentVector, Termination, Trajectory, WindField,
};

const A: f64 = 0.75;
const C: f64 = 5.0 / 7.0;

fn oblate() -> Spheroid {
    Spheroid::new(A).unwrap()
}

fn rot() -> WindField {
    WindField::rotation(C).unwrap()
}

fn equator() -> SurfacePoint {
    SurfacePoint::new(0.0, FRAC_PI_2)
}

fn run(kind: MetricKind, wind: WindField, s0: NavState, cfg: &IntegratorConfig) -> Trajectory {
    integrate_system(&GeodesicSystem::new(kind, oblate(), wind), s0, cfg).unwrap()
}

fn max_dev(traj: &Trajectory, f: impl Fn(&NavState) -> f64) -> f64 {
    traj.samples.iter().map(|s| (f(&s.state) - 1.0).abs()).fold(0.0, f64::max)
}

#[test]
fn great_circle_on_round_sphere() {
    let sphere = Spheroid::new(1.0).unwrap();
    let sys = GeodesicSystem::new(MetricKind::Riemannian, sphere, WindField::calm());
    let s0 = NavState::new(0.0, FRAC_PI_2, 1.0, 0.0);
    let traj = integrate_system(&sys, s0, &IntegratorConfig::new(2.0 * PI)).unwrap();
    assert!(traj.is_completed());
    assert!((traj.last.state.point.phi - 2.0 * PI).abs() < 1e-7);
    assert!((traj.last.state.point.theta - FRAC_PI_2).abs() < 1e-9);

    // an inclined great circle also closes
    let s0 = initial_state_riemannian(&sphere, equator(), 0.7).unwrap();
    let traj = integrate_system(&sys, s0, &IntegratorConfig::new(2.0 * PI)).unwrap();
    let end = traj.last.state;
    assert!((end.point.phi - 2.0 * PI).abs() < 1e-7, "{end:?}");
    assert!((end.point.theta - FRAC_PI_2).abs() < 1e-7);
    assert!((end.vel.u - s0.vel.u).abs() < 1e-7 && (end.vel.v - s0.vel.v).abs() < 1e-7);
}

#[test]
fn unperturbed_individual_keeps_unit_speed() {
    let sph = oblate();
    let s0 = NavState::new(0.0, FRAC_PI_2, 0.5, -2.0 / 3f64.sqrt());
    assert_eq!(initial_state_riemannian(&sph, equator(), FRAC_PI_3).unwrap().vel.v, s0.vel.v);
    let traj = run(MetricKind::Riemannian, WindField::calm(), s0, &IntegratorConfig::new(25.0));
    assert!(traj.is_completed());
    assert_eq!(traj.samples.len(), 2501);
    let drift = max_dev(&traj, |s| sph.norm(s.point, s.vel));
    assert!(drift < 1e-7, "h-norm drift {drift:e}");
}

#[test]
fn perturbed_individual_is_circumpolar() {
    let s0 = NavState::new(0.0, FRAC_PI_2, -3.0 / 14.0, -2.0 / 3f64.sqrt());
    let traj = run(MetricKind::Randers, rot(), s0, &IntegratorConfig::new(25.0));
    assert!(traj.is_completed());
    assert!(traj.samples.iter().all(|s| s.state.point.theta > 0.0 && s.state.point.theta < PI));
    assert_eq!(classify_path(&traj), PathClass::Circumpolar);
    // it winds around the axis
    assert!(traj.last.state.point.phi.abs() > 2.0 * PI);
}

#[test]
fn conservation_harness() {
    let sph = oblate();
    let metric = RandersMetric::new(sph, rot());
    let cfg = IntegratorConfig::new(10.0);

    let sh = initial_state_riemannian(&sph, equator(), FRAC_PI_3).unwrap();
    let h = run(MetricKind::Riemannian, WindField::calm(), sh, &cfg);
    assert!(max_dev(&h, |s| sph.norm(s.point, s.vel)) < 1e-6);

    let sa = initial_state_alpha(&metric, equator(), FRAC_PI_3).unwrap();
    let a = run(MetricKind::Alpha, rot(), sa, &cfg);
    assert!(max_dev(&a, |s| metric.alpha(s.point, s.vel).unwrap()) < 1e-6);

    let sf = initial_state_randers(&sph, &rot(), equator(), FRAC_PI_3).unwrap();
    let f = run(MetricKind::Randers, rot(), sf, &cfg);
    assert!(max_dev(&f, |s| metric.value(s.point, s.vel).unwrap()) < 1e-6);

    let sys = GeodesicSystem::new(MetricKind::Alpha, sph, rot());
    assert!((sys.conserved_norm(&a.samples[500].state).unwrap() - 1.0).abs() < 1e-6);
}

#[test]
fn killing_drift_for_other_winds_and_starts() {
    for (c, start) in [(-0.4, SurfacePoint::new(0.3, 1.1)), (0.9, SurfacePoint::new(-2.0, 2.2))] {
        let sph = oblate();
        let wind = WindField::rotation(c).unwrap();
        for heading in [0.3, 2.0, 4.0] {
            let sh = initial_state_riemannian(&sph, start, heading).unwrap();
            let sf = initial_state_randers(&sph, &wind, start, heading).unwrap();
            assert_eq!(sf.vel, TangentVector::new(sh.vel.u - c, sh.vel.v));
            let cfg = IntegratorConfig::new(5.0);
            let h = run(MetricKind::Riemannian, WindField::calm(), sh, &cfg);
            let f = run(MetricKind::Randers, wind.clone(), sf, &cfg);
            assert_eq!(h.samples.len(), f.samples.len());
            for (x, y) in h.samples.iter().zip(&f.samples) {
                assert!((y.state.point.phi - (x.state.point.phi - c * x.t)).abs() < 1e-6);
                assert!((y.state.point.theta - x.state.point.theta).abs() < 1e-6);
                assert!((y.state.vel.u - (x.state.vel.u - c)).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn custom_rotation_wind_follows_closed_form_path() {
    // same field, but routed through the finite-difference spray
    let custom = WindField::custom(|_| TangentVector::new(-C, 0.0));
    let s0 = initial_state_randers(&oblate(), &rot(), equator(), 1.0).unwrap();
    let cfg = IntegratorConfig::new(2.0);
    let closed = run(MetricKind::Randers, rot(), s0, &cfg);
    let numeric = run(MetricKind::Randers, custom, s0, &cfg);
    for (x, y) in closed.samples.iter().zip(&numeric.samples) {
        assert!((x.state.point.phi - y.state.point.phi).abs() < 1e-6);
        assert!((x.state.point.theta - y.state.point.theta).abs() < 1e-6);
    }
}

#[test]
fn tolerance_refinement_converges() {
    let s0 = NavState::new(0.0, FRAC_PI_2, -3.0 / 14.0, -2.0 / 3f64.sqrt());
    let end = |rel_tol: f64| {
        let cfg = IntegratorConfig::new(7.0).with_tolerances(rel_tol, rel_tol * 1e-3);
        run(MetricKind::Randers, rot(), s0, &cfg).last.state
    };
    let reference = end(1e-13);
    // from 1e-7 down, where the tolerance rather than max_step limits the steps
    let errors: Vec<f64> = (0..8)
        .map(|k| {
            let s = end(1e-7 * 0.5f64.powi(k));
            (s.point.phi - reference.point.phi)
                .abs()
                .max((s.point.theta - reference.point.theta).abs())
        })
        .collect();
    for w in errors.windows(2) {
        assert!(w[1] < w[0], "errors not decreasing: {errors:?}");
    }
    assert!(errors[7] < errors[0] / 20.0, "{errors:?}");
}

#[test]
fn fan_figures_have_expected_members() {
    let sph = oblate();
    let fan = heading_fan(0.0, PI / 8.0, 16);
    let cfg = IntegratorConfig::new(3.0);

    let h = integrate_family(&sph, &WindField::calm(), equator(), &fan, MetricKind::Riemannian, &cfg).unwrap();
    assert_eq!(h.len(), 16);
    assert!(h.iter().all(|r| r.is_ok()));

    let f = integrate_family(&sph, &rot(), equator(), &fan, MetricKind::Randers, &cfg).unwrap();
    assert_eq!(f.len(), 16);
    for (k, r) in f.iter().enumerate() {
        let traj = r.as_ref().unwrap();
        assert_eq!(traj.kind, Some(MetricKind::Randers));
        let s0 = initial_state_randers(&sph, &rot(), equator(), fan[k]).unwrap();
        assert_eq!(traj.samples[0].state, s0);
    }
}

#[test]
fn long_fan_splits_into_transpolar_and_circumpolar() {
    let sph = oblate();
    let fan = heading_fan(0.0, PI / 4.0, 8);
    let out = integrate_family(&sph, &rot(), equator(), &fan, MetricKind::Randers, &IntegratorConfig::new(50.0))
        .unwrap();
    let classes: Vec<PathClass> = out.iter().map(|r| classify_path(r.as_ref().unwrap())).collect();
    let transpolar = classes.iter().filter(|&&c| c == PathClass::Transpolar).count();
    assert_eq!(transpolar, 2, "{classes:?}");
    assert_eq!(classes[2], PathClass::Transpolar);
    assert_eq!(classes[6], PathClass::Transpolar);
    for k in [2, 6] {
        assert!(matches!(out[k].as_ref().unwrap().termination, Termination::PoleProximity { .. }));
    }
}

#[test]
fn parallel_and_sequential_families_are_bit_identical() {
    let sph = oblate();
    let fan = heading_fan(0.1, PI / 8.0, 16);
    let cfg = IntegratorConfig::new(4.0);
    let go = |exec| integrate_family_with(exec, &sph, &rot(), equator(), &fan, MetricKind::Randers, &cfg).unwrap();
    let (seq, par) = (go(Execution::Sequential), go(Execution::Parallel));
    for (a, b) in seq.iter().zip(&par) {
        let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
        assert_eq!(a.samples.len(), b.samples.len());
        for (x, y) in a.samples.iter().zip(&b.samples) {
            assert_eq!(x.t.to_bits(), y.t.to_bits());
            assert_eq!(x.state.point.phi.to_bits(), y.state.point.phi.to_bits());
            assert_eq!(x.state.vel.v.to_bits(), y.state.vel.v.to_bits());
        }
    }
}

#[test]
fn family_reports_member_failures_in_place() {
    let sph = oblate();
    let out = integrate_family(
        &sph,
        &WindField::calm(),
        SurfacePoint::new(0.0, 1e-9),
        &[0.0, 1.0, 2.0],
        MetricKind::Riemannian,
        &IntegratorConfig::new(1.0),
    )
    .unwrap();
    assert_eq!(out.len(), 3);
    assert!(out.iter().all(|r| r.is_err()));
}
