use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use shehu::expr::{parse_with, ParseOptions};
use shehu::oracle::DEFAULT_GRID;
use shehu::{load_table, normalize_image, parse, solve_ivp, transform_expr, verify_pair, verify_table, IVProblem};
use shehu_bench::{INVERT_INPUTS, TRANSFORM_INPUTS};

fn transforms(c: &mut Criterion) {
    let inputs: Vec<_> = TRANSFORM_INPUTS.iter().map(|s| parse(s).unwrap()).collect();
    c.bench_function("transform", |b| {
        b.iter(|| {
            for e in &inputs {
                black_box(transform_expr(black_box(e)).unwrap());
            }
        })
    });
}

fn inversions(c: &mut Criterion) {
    let inputs: Vec<_> = INVERT_INPUTS.iter().map(|s| parse_with(s, &ParseOptions::image()).unwrap()).collect();
    c.bench_function("invert", |b| {
        b.iter(|| {
            for e in &inputs {
                black_box(shehu::invert(&normalize_image(black_box(e)).unwrap()).unwrap());
            }
        })
    });
}

fn solver(c: &mut Criterion) {
    let p = IVProblem::parse("v'' + 2*v' + 5*v = exp(-t)*sin(t)", "v(0)=0, v'(0)=1").unwrap();
    c.bench_function("solve_ivp", |b| b.iter(|| solve_ivp(black_box(&p)).unwrap()));
}

fn oracle(c: &mut Criterion) {
    let v = parse("t^2*exp(-t)*cos(3*t)").unwrap();
    let img = parse_with(&transform_expr(&v).unwrap().expanded(), &ParseOptions::image()).unwrap();
    c.bench_function("verify_pair", |b| b.iter(|| verify_pair(black_box(&v), &img, &DEFAULT_GRID)));
}

fn table(c: &mut Criterion) {
    let entries = load_table(None).unwrap();
    let mut g = c.benchmark_group("table");
    g.sample_size(10);
    g.bench_function("verify_table", |b| b.iter(|| verify_table(black_box(&entries), &DEFAULT_GRID)));
    g.finish();
}

criterion_group!(benches, transforms, inversions, solver, oracle, table);
criterion_main!(benches);
