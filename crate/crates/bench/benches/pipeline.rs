use criterion::{criterion_group, criterion_main, Criterion};
use dflow_bench::workloads;
use dflow_core::spectral::{e2_page, DoubleComplex};
use dflow_core::verify::{check_unique_factorization, collapse_ufc_nerve};
use dflow_core::{fixtures, Coefficients, FlowCategory};

fn flow(c: &mut Criterion) {
    c.bench_function("flow/torus", |b| {
        b.iter(|| {
            let (cx, v) = fixtures::torus();
            FlowCategory::new(cx, v)
        })
    });
    for (name, fc) in workloads() {
        c.bench_function(&format!("export/{name}"), |b| b.iter(|| fc.export_category().unwrap()));
    }
}

fn spectral(c: &mut Criterion) {
    for (name, fc) in workloads() {
        c.bench_function(&format!("double_complex/{name}"), |b| b.iter(|| DoubleComplex::build(&fc).unwrap()));
        let dc = DoubleComplex::build(&fc).unwrap();
        c.bench_function(&format!("e2/z/{name}"), |b| b.iter(|| e2_page(&dc, Coefficients::Integers).unwrap()));
        c.bench_function(&format!("e2/q/{name}"), |b| b.iter(|| e2_page(&dc, Coefficients::Rationals).unwrap()));
    }
}

fn verify(c: &mut Criterion) {
    for (name, fc) in workloads() {
        let cat = fc.export_category().unwrap();
        c.bench_function(&format!("ufc/{name}"), |b| b.iter(|| check_unique_factorization(&cat)));
        c.bench_function(&format!("collapse/{name}"), |b| b.iter(|| collapse_ufc_nerve(&cat).unwrap()));
    }
}

criterion_group!(benches, flow, spectral, verify);
criterion_main!(benches);
