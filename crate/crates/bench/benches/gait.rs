use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use quadkin_core::{
    emit_timeline, generate_crawl, stance_joint_timeline, CrawlParams, RobotConfig,
};

fn gait(c: &mut Criterion) {
    let cfg = RobotConfig::default();
    let params = CrawlParams::from_config(&cfg);

    c.bench_function("generate_crawl/1cycle", |b| {
        b.iter(|| black_box(generate_crawl(&cfg, black_box(&params)).unwrap()))
    });

    let plan = generate_crawl(&cfg, &params).unwrap();
    c.bench_function("stance_joint_timeline/20ms", |b| {
        b.iter(|| black_box(stance_joint_timeline(&cfg, &plan, 0.02).unwrap()))
    });

    let timeline = stance_joint_timeline(&cfg, &plan, 0.02).unwrap();
    c.bench_function("emit_timeline/20ms", |b| {
        b.iter(|| black_box(emit_timeline(&cfg, &timeline).unwrap()))
    });
}

criterion_group!(benches, gait);
criterion_main!(benches);
