//! Bundled example complexes and gradient fields.

use crate::complex::RegularCwComplex;
use crate::io::{parse_complex, parse_field, parse_function};
use crate::morse::{GradientVectorField, MorseFunction};

pub const D3_COMPLEX: &str = include_str!("../fixtures/d3.json");
pub const D3_FIELD: &str = include_str!("../fixtures/d3_field.json");
pub const SPHERE_COMPLEX: &str = include_str!("../fixtures/sphere.json");
pub const CIRCLE_COMPLEX: &str = include_str!("../fixtures/circle.json");
pub const CIRCLE_FIELD: &str = include_str!("../fixtures/circle_field.json");
pub const TORUS_COMPLEX: &str = include_str!("../fixtures/torus.json");
pub const TORUS_FIELD: &str = include_str!("../fixtures/torus_field.json");
pub const TRIANGLE_COMPLEX: &str = include_str!("../fixtures/triangle.json");
pub const TRIANGLE_FUNCTION: &str = include_str!("../fixtures/triangle_function.json");
pub const SIMPLEX2: &str = include_str!("../fixtures/simplex2.json");

fn load(complex: &str, field: &str) -> (RegularCwComplex, GradientVectorField) {
    let cx = parse_complex(complex).expect("bundled complex");
    let v = parse_field(&cx, field).expect("bundled field");
    (cx, v)
}

/// Three-ball with two cells in each of dimensions 0, 1, 2 and one 3-cell.
pub fn d3() -> (RegularCwComplex, GradientVectorField) {
    load(D3_COMPLEX, D3_FIELD)
}

/// Boundary of [`d3`] (the 3-cell removed) with the same field.
pub fn sphere() -> (RegularCwComplex, GradientVectorField) {
    let (cx, _) = d3();
    let s2 = cx.without(&["f"]).expect("f is a cell");
    let v = parse_field(&s2, D3_FIELD).expect("field avoids f");
    (s2, v)
}

/// Triangle boundary with two regular pairs.
pub fn circle() -> (RegularCwComplex, GradientVectorField) {
    load(CIRCLE_COMPLEX, CIRCLE_FIELD)
}

/// Torus from four squares, with critical cells A, alpha, epsilon, a.
pub fn torus() -> (RegularCwComplex, GradientVectorField) {
    load(TORUS_COMPLEX, TORUS_FIELD)
}

/// Filled triangle with the vertex and edge values 1..6 and 7 on the 2-cell.
pub fn dmf_triangle() -> (RegularCwComplex, MorseFunction) {
    let cx = parse_complex(TRIANGLE_COMPLEX).expect("bundled complex");
    (cx, parse_function(TRIANGLE_FUNCTION).expect("bundled function"))
}

/// Standard 2-simplex as a CW complex with cell ids `0`, `0_1`, ..., `0_1_2`.
pub fn simplex2() -> RegularCwComplex {
    parse_complex(SIMPLEX2).expect("bundled complex")
}
