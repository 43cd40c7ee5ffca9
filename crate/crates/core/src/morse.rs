//! Discrete Morse functions and gradient vector fields.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::RegularCwComplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorseCondition {
    /// More than one coface with a value not above the cell's.
    Cofaces,
    /// More than one face with a value not below the cell's.
    Faces,
}

impl fmt::Display for MorseCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorseCondition::Cofaces => f.write_str("two or more cofaces with f(coface) <= f(cell)"),
            MorseCondition::Faces => f.write_str("two or more faces with f(face) >= f(cell)"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MorseError {
    #[error("no value for cell `{0}`")]
    MissingValue(String),
    #[error("cell `{cell}` violates the Morse condition: {condition}")]
    NotMorse { cell: String, condition: MorseCondition },
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("`{0}` and `{1}` do not form a codimension-one face pair")]
    NotAPair(String, String),
    #[error("cell `{0}` appears in more than one pair")]
    OverlappingPairs(String),
    #[error("closed V-path {}", .0.join(" -> "))]
    CyclicVPath(Vec<String>),
}

/// Values of a discrete Morse function, keyed by cell id.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorseFunction {
    pub values: BTreeMap<String, f64>,
}

impl MorseFunction {
    pub fn value(&self, id: &str) -> Option<f64> {
        self.values.get(id).copied()
    }

    /// `f(cell) = dim(cell)`, which has no regular pairs.
    pub fn by_dimension(cx: &RegularCwComplex) -> Self {
        MorseFunction { values: cx.cells().iter().map(|c| (c.id.clone(), c.dim as f64)).collect() }
    }
}

/// A set of disjoint regular pairs `(lower, upper)` on a fixed complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradientVectorField {
    pairs: Vec<(usize, usize)>,
    partner: Vec<Option<usize>>,
}

impl GradientVectorField {
    pub fn empty(cx: &RegularCwComplex) -> Self {
        GradientVectorField { pairs: Vec::new(), partner: vec![None; cx.len()] }
    }

    /// Pairs `(lower, upper)` sorted by lower cell.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn partner(&self, cell: usize) -> Option<usize> {
        self.partner[cell]
    }

    pub fn is_critical(&self, cell: usize) -> bool {
        self.partner[cell].is_none()
    }

    pub fn is_pair(&self, a: usize, b: usize) -> bool {
        self.partner[a] == Some(b)
    }

    /// Critical cells in index (= id) order.
    pub fn critical_cells(&self) -> Vec<usize> {
        (0..self.partner.len()).filter(|&c| self.is_critical(c)).collect()
    }

    pub fn to_ids(&self, cx: &RegularCwComplex) -> Vec<(String, String)> {
        self.pairs.iter().map(|&(l, u)| (cx.id(l).to_string(), cx.id(u).to_string())).collect()
    }
}

/// Critical cell ids of `v`.
pub fn critical_cells(cx: &RegularCwComplex, v: &GradientVectorField) -> Vec<String> {
    v.critical_cells().into_iter().map(|c| cx.id(c).to_string()).collect()
}

/// Checks both Morse conditions and returns the induced gradient field.
pub fn validate_morse(cx: &RegularCwComplex, f: &MorseFunction) -> Result<GradientVectorField, MorseError> {
    let values: Vec<f64> = cx
        .cells()
        .iter()
        .map(|c| f.value(&c.id).ok_or_else(|| MorseError::MissingValue(c.id.clone())))
        .collect::<Result<_, _>>()?;
    let mut pairs = Vec::new();
    for x in 0..cx.len() {
        let low_cofaces: Vec<usize> = cx.cofaces(x).iter().copied().filter(|&y| values[x] >= values[y]).collect();
        if low_cofaces.len() > 1 {
            return Err(MorseError::NotMorse { cell: cx.id(x).to_string(), condition: MorseCondition::Cofaces });
        }
        let high_faces = cx.faces(x).iter().filter(|&&y| values[y] >= values[x]).count();
        if high_faces > 1 {
            return Err(MorseError::NotMorse { cell: cx.id(x).to_string(), condition: MorseCondition::Faces });
        }
        pairs.extend(low_cofaces.into_iter().map(|y| (x, y)));
    }
    field_from_indices(cx, pairs)
}

/// Validates a field given as unordered id pairs.
pub fn check_acyclic<S: AsRef<str>>(
    cx: &RegularCwComplex,
    pairs: &[(S, S)],
) -> Result<GradientVectorField, MorseError> {
    let mut out = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        let (a, b) = (a.as_ref(), b.as_ref());
        let ia = cx.index_of(a).ok_or_else(|| MorseError::UnknownCell(a.to_string()))?;
        let ib = cx.index_of(b).ok_or_else(|| MorseError::UnknownCell(b.to_string()))?;
        let (lo, up) = if cx.dim(ia) < cx.dim(ib) { (ia, ib) } else { (ib, ia) };
        if cx.faces(up).binary_search(&lo).is_err() {
            return Err(MorseError::NotAPair(a.to_string(), b.to_string()));
        }
        out.push((lo, up));
    }
    field_from_indices(cx, out)
}

fn field_from_indices(
    cx: &RegularCwComplex,
    mut pairs: Vec<(usize, usize)>,
) -> Result<GradientVectorField, MorseError> {
    pairs.sort_unstable();
    pairs.dedup();
    let mut partner = vec![None; cx.len()];
    for &(l, u) in &pairs {
        for (c, p) in [(l, u), (u, l)] {
            if partner[c].is_some() {
                return Err(MorseError::OverlappingPairs(cx.id(c).to_string()));
            }
            partner[c] = Some(p);
        }
    }
    let v = GradientVectorField { pairs, partner };
    if let Some(cycle) = find_cycle(&modified_hasse(cx, &v)) {
        return Err(MorseError::CyclicVPath(cycle.into_iter().map(|c| cx.id(c).to_string()).collect()));
    }
    Ok(v)
}

/// Covering digraph with matched pairs reversed: `upper -> lower` for unmatched
/// incidences, `lower -> upper` for pairs. Its cycles are the closed V-paths.
fn modified_hasse(cx: &RegularCwComplex, v: &GradientVectorField) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); cx.len()];
    for (u, l) in cx.covering_pairs() {
        if v.is_pair(l, u) {
            adj[l].push(u);
        } else {
            adj[u].push(l);
        }
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    adj
}

fn find_cycle(adj: &[Vec<usize>]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let mut mark = vec![Mark::New; adj.len()];
    for root in 0..adj.len() {
        if mark[root] != Mark::New {
            continue;
        }
        // stack of (vertex, next neighbor position)
        let mut stack = vec![(root, 0usize)];
        mark[root] = Mark::Open;
        while let Some(&mut (u, ref mut pos)) = stack.last_mut() {
            if let Some(&w) = adj[u].get(*pos) {
                *pos += 1;
                match mark[w] {
                    Mark::New => {
                        mark[w] = Mark::Open;
                        stack.push((w, 0));
                    }
                    Mark::Open => {
                        let start = stack.iter().position(|&(x, _)| x == w).expect("open vertex on stack");
                        let mut cycle: Vec<usize> = stack[start..].iter().map(|&(x, _)| x).collect();
                        cycle.push(w);
                        return Some(cycle);
                    }
                    Mark::Done => {}
                }
            } else {
                mark[u] = Mark::Done;
                stack.pop();
            }
        }
    }
    None
}

/// `f~(x) = f(y)` for every pair `(x, y)`, `f~ = f` elsewhere. The induced field is unchanged.
pub fn forman_normalize(cx: &RegularCwComplex, f: &MorseFunction, v: &GradientVectorField) -> MorseFunction {
    let mut out = f.clone();
    for &(l, u) in v.pairs() {
        let y = f.value(cx.id(u)).expect("function defined on every cell");
        out.values.insert(cx.id(l).to_string(), y);
    }
    let induced = validate_morse(cx, &out).expect("normalized function is Morse");
    assert_eq!(&induced, v, "normalization changed the gradient field");
    out
}

/// A Morse function whose gradient field is `v`: values strictly decrease
/// along a linear extension of the modified Hasse digraph.
pub fn field_to_function(cx: &RegularCwComplex, v: &GradientVectorField) -> MorseFunction {
    let adj = modified_hasse(cx, v);
    let mut indeg = vec![0usize; cx.len()];
    for targets in &adj {
        for &t in targets {
            indeg[t] += 1;
        }
    }
    let mut ready: BinaryHeap<Reverse<usize>> = (0..cx.len()).filter(|&c| indeg[c] == 0).map(Reverse).collect();
    let mut values = BTreeMap::new();
    let n = cx.len();
    let mut position = 0;
    while let Some(Reverse(u)) = ready.pop() {
        values.insert(cx.id(u).to_string(), (n - position) as f64);
        position += 1;
        for &t in &adj[u] {
            indeg[t] -= 1;
            if indeg[t] == 0 {
                ready.push(Reverse(t));
            }
        }
    }
    assert_eq!(position, n, "gradient field must be acyclic");
    MorseFunction { values }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn ids(cx: &RegularCwComplex, v: &GradientVectorField) -> Vec<(String, String)> {
        v.to_ids(cx)
    }

    #[test]
    fn triangle_function_pairs() {
        let (cx, f) = fixtures::dmf_triangle();
        let v = validate_morse(&cx, &f).unwrap();
        assert_eq!(ids(&cx, &v), vec![("v3".into(), "e2".into()), ("v5".into(), "e4".into())]);
    }

    #[test]
    fn dimension_function_is_trivial() {
        let (cx, _) = fixtures::d3();
        let v = validate_morse(&cx, &MorseFunction::by_dimension(&cx)).unwrap();
        assert!(v.pairs().is_empty());
        assert_eq!(v.critical_cells().len(), 7);
    }

    #[test]
    fn two_low_cofaces_is_not_morse() {
        let (cx, _) = fixtures::circle();
        let mut f = MorseFunction::by_dimension(&cx);
        // vertex a has cofaces x and z
        f.values.insert("a".into(), 5.0);
        let err = validate_morse(&cx, &f).unwrap_err();
        assert_eq!(err, MorseError::NotMorse { cell: "a".into(), condition: MorseCondition::Cofaces });
        f.values.remove("a");
        assert_eq!(validate_morse(&cx, &f).unwrap_err(), MorseError::MissingValue("a".into()));
    }

    #[test]
    fn critical_cells_of_fixtures() {
        let (cx, v) = fixtures::d3();
        assert_eq!(critical_cells(&cx, &v), vec!["f", "t", "x"]);
        let (cx, v) = fixtures::circle();
        assert_eq!(critical_cells(&cx, &v), vec!["c", "x"]);
    }

    #[test]
    fn cyclic_field_on_triangle_boundary() {
        let (_, cx) = crate::complex::from_simplicial(&[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let err = check_acyclic(&cx, &[("0", "0_1"), ("1", "1_2"), ("2", "0_2")]).unwrap_err();
        let MorseError::CyclicVPath(path) = err else { panic!("expected a cycle, got {err:?}") };
        assert_eq!(path.first(), path.last());
        assert_eq!(path.len(), 7);
    }

    #[test]
    fn field_errors() {
        let (cx, _) = fixtures::d3();
        assert!(check_acyclic::<&str>(&cx, &[]).unwrap().pairs().is_empty());
        assert_eq!(
            check_acyclic(&cx, &[("y", "w"), ("w", "t")]).unwrap_err(),
            MorseError::OverlappingPairs("w".into())
        );
        assert!(matches!(check_acyclic(&cx, &[("x", "t")]).unwrap_err(), MorseError::NotAPair(..)));
        assert!(matches!(check_acyclic(&cx, &[("q", "t")]).unwrap_err(), MorseError::UnknownCell(_)));
    }

    #[test]
    fn normalization_of_triangle() {
        let (cx, f) = fixtures::dmf_triangle();
        let v = validate_morse(&cx, &f).unwrap();
        let g = forman_normalize(&cx, &f, &v);
        assert_eq!(g.value("v3"), Some(2.0));
        assert_eq!(g.value("v5"), Some(4.0));
        for (id, x) in &f.values {
            if id != "v3" && id != "v5" {
                assert_eq!(g.value(id), Some(*x));
            }
        }
        let (cx, v) = fixtures::d3();
        let f = field_to_function(&cx, &v);
        let g = forman_normalize(&cx, &f, &v);
        assert_eq!(g.value("y"), g.value("w"));
        assert_eq!(g.value("z"), g.value("b"));
        let e = MorseFunction::by_dimension(&cx);
        assert_eq!(forman_normalize(&cx, &e, &GradientVectorField::empty(&cx)), e);
    }

    #[test]
    fn round_trips_on_fixtures() {
        for (cx, v) in [fixtures::d3(), fixtures::circle(), fixtures::torus()] {
            assert_eq!(validate_morse(&cx, &field_to_function(&cx, &v)).unwrap(), v);
        }
    }

    /// All closed V-paths by brute force, up to `cells` pair steps.
    fn has_closed_vpath(cx: &RegularCwComplex, pairs: &[(usize, usize)]) -> bool {
        let up: BTreeMap<usize, usize> = pairs.iter().copied().collect();
        fn walk(cx: &RegularCwComplex, up: &BTreeMap<usize, usize>, start: usize, x: usize, steps: usize) -> bool {
            let Some(&y) = up.get(&x) else { return false };
            for &next in cx.faces(y) {
                if next == x {
                    continue;
                }
                if next == start || (steps > 0 && walk(cx, up, start, next, steps - 1)) {
                    return true;
                }
            }
            false
        }
        up.keys().any(|&x| walk(cx, &up, x, x, cx.len()))
    }

    proptest! {
        #[test]
        fn acyclicity_matches_brute_force(seed in any::<u64>()) {
            let mut rng = crate::random::rng(seed);
            let (_, cx) = crate::random::random_simplicial(&mut rng, 12);
            let pairs = crate::random::random_matching(&mut rng, &cx);
            let ids: Vec<(String, String)> = pairs.iter().map(|&(l, u)| (cx.id(l).to_string(), cx.id(u).to_string())).collect();
            let checked = check_acyclic(&cx, &ids);
            prop_assert_eq!(checked.is_ok(), !has_closed_vpath(&cx, &pairs));
            if let Ok(v) = checked {
                let f = field_to_function(&cx, &v);
                prop_assert_eq!(validate_morse(&cx, &f).unwrap(), v.clone());
                let g = forman_normalize(&cx, &f, &v);
                prop_assert_eq!(validate_morse(&cx, &g).unwrap(), v);
            }
        }
    }
}
