use std::f64::consts::{FRAC_PI_2, PI};

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use znav_core::integrator::{heading_fan, integrate_family_with};
use znav_core::{Execution, IntegratorConfig, MetricKind, Spheroid, SurfacePoint, WindField};

fn family(c: &mut Criterion) {
    let sph = Spheroid::new(0.75).unwrap();
    let wind = WindField::rotation(5.0 / 7.0).unwrap();
    let start = SurfacePoint::new(0.0, FRAC_PI_2);
    let fan = heading_fan(0.0, PI / 8.0, 16);
    let cfg = IntegratorConfig::new(3.0);

    let mut group = c.benchmark_group("randers_fan_16");
    group.sample_size(20);
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| integrate_family_with(exec, &sph, &wind, start, &fan, MetricKind::Randers, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, family);
criterion_main!(benches);
