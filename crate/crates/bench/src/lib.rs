//! Shared inputs for the pipeline benchmarks.

use dflow_core::{fixtures, FlowCategory};

/// Named flow categories used by the benchmarks.
pub fn workloads() -> Vec<(&'static str, FlowCategory)> {
    let build = |(cx, v)| FlowCategory::new(cx, v);
    vec![("d3", build(fixtures::d3())), ("sphere", build(fixtures::sphere())), ("torus", build(fixtures::torus()))]
}
