use std::collections::{BTreeMap, HashSet};

use crate::complex::RegularCwComplex;
use crate::morse::GradientVectorField;

use super::FlowError;

/// A flow-category morphism as its unique non-repeating cell sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorsePath {
    cells: Vec<usize>,
}

impl MorsePath {
    /// Wraps a cell sequence without checking it; see [`MorsePath::validate`].
    pub fn new(cells: Vec<usize>) -> Self {
        assert!(!cells.is_empty(), "a path has at least one cell");
        MorsePath { cells }
    }

    pub fn identity(cell: usize) -> Self {
        MorsePath { cells: vec![cell] }
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn source(&self) -> usize {
        self.cells[0]
    }

    pub fn target(&self) -> usize {
        *self.cells.last().expect("non-empty path")
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_identity(&self) -> bool {
        self.cells.len() == 1
    }

    pub fn ids<'a>(&self, cx: &'a RegularCwComplex) -> Vec<&'a str> {
        self.cells.iter().map(|&c| cx.id(c)).collect()
    }

    /// Arrow notation, e.g. `f>t>z<b>x`: `>` for a descent, `<` for a pair step.
    pub fn arrow(&self, cx: &RegularCwComplex) -> String {
        let mut s = cx.id(self.cells[0]).to_string();
        for w in self.cells.windows(2) {
            s.push(if cx.dim(w[1]) < cx.dim(w[0]) { '>' } else { '<' });
            s.push_str(cx.id(w[1]));
        }
        s
    }

    /// Parses arrow notation and validates the result.
    pub fn parse(cx: &RegularCwComplex, v: &GradientVectorField, text: &str) -> Result<Self, FlowError> {
        let cells = text
            .split(['>', '<'])
            .map(|part| cx.index_of(part.trim()).ok_or_else(|| FlowError::UnknownCell(part.trim().to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        let p = MorsePath { cells };
        p.validate(cx, v)?;
        // the separators must agree with the step directions
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if p.arrow(cx) != compact {
            return Err(FlowError::InvalidPath(text.to_string()));
        }
        Ok(p)
    }

    /// Checks that entries are distinct and each step is a descent to a proper
    /// face or the upward step of a regular pair.
    pub fn validate(&self, cx: &RegularCwComplex, v: &GradientVectorField) -> Result<(), FlowError> {
        let distinct: HashSet<usize> = self.cells.iter().copied().collect();
        let steps_ok = self
            .cells
            .windows(2)
            .all(|w| cx.is_proper_face(w[1], w[0]) || (v.is_pair(w[0], w[1]) && cx.dim(w[1]) == cx.dim(w[0]) + 1));
        if distinct.len() != self.cells.len() || !steps_ok {
            return Err(FlowError::InvalidPath(self.arrow(cx)));
        }
        Ok(())
    }
}

/// Sum over descents `x_i > x_{i+1}` of `dim x_i - dim x_{i+1} - 1`.
pub fn rank(cx: &RegularCwComplex, p: &MorsePath) -> usize {
    p.cells.windows(2).filter(|w| cx.dim(w[1]) < cx.dim(w[0])).map(|w| cx.dim(w[0]) - cx.dim(w[1]) - 1).sum()
}

/// Whether the two sequences differ by exactly one inserted or deleted entry.
pub fn one_edit(a: &[usize], b: &[usize]) -> bool {
    let (long, short) = if a.len() > b.len() { (a, b) } else { (b, a) };
    if long.len() != short.len() + 1 {
        return false;
    }
    let skip = long.iter().zip(short).position(|(x, y)| x != y).unwrap_or(short.len());
    long[skip + 1..] == short[skip..]
}

/// Whether `tau` covers `gamma`; their ranks must differ by exactly one.
pub fn covers(cx: &RegularCwComplex, tau: &MorsePath, gamma: &MorsePath) -> Result<bool, FlowError> {
    let (rt, rg) = (rank(cx, tau), rank(cx, gamma));
    if rt != rg + 1 {
        return Err(FlowError::RankMismatch { upper: rt, lower: rg });
    }
    Ok(one_edit(&tau.cells, &gamma.cells))
}

/// `q . p`: concatenation followed by removal of pair detours `(x, y, x)` and
/// repeated entries.
pub fn compose(
    cx: &RegularCwComplex,
    v: &GradientVectorField,
    p: &MorsePath,
    q: &MorsePath,
) -> Result<MorsePath, FlowError> {
    if p.target() != q.source() {
        return Err(FlowError::EndpointMismatch { first: p.arrow(cx), second: q.arrow(cx) });
    }
    let mut s: Vec<usize> = p.cells.iter().chain(&q.cells[1..]).copied().collect();
    loop {
        s.dedup();
        let detour = (0..s.len().saturating_sub(2)).find(|&i| s[i] == s[i + 2] && v.is_pair(s[i], s[i + 1]));
        match detour {
            Some(i) => {
                s.drain(i + 1..i + 3);
            }
            None => break,
        }
    }
    let out = MorsePath { cells: s };
    out.validate(cx, v).map_err(|_| FlowError::Unreducible(out.arrow(cx)))?;
    Ok(out)
}

/// Splits `p` at every interior critical cell.
pub fn factorize(v: &GradientVectorField, p: &MorsePath) -> Vec<MorsePath> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..p.cells.len() {
        if v.is_critical(p.cells[i]) && i + 1 < p.cells.len() {
            out.push(MorsePath { cells: p.cells[start..=i].to_vec() });
            start = i;
        }
    }
    out.push(MorsePath { cells: p.cells[start..].to_vec() });
    out
}

/// Formal sum of atoms `(upper, lower)`: `+1` per descent, `-1` per pair step.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct AtomSum {
    pub coefficients: BTreeMap<(usize, usize), i64>,
}

impl AtomSum {
    pub fn render(&self, cx: &RegularCwComplex) -> String {
        self.coefficients
            .iter()
            .map(|(&(a, b), k)| format!("{k:+}({},{})", cx.id(a), cx.id(b)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn algebraic_invariant(cx: &RegularCwComplex, p: &MorsePath) -> AtomSum {
    let mut sum = AtomSum::default();
    for w in p.cells.windows(2) {
        let (atom, k) = if cx.dim(w[1]) < cx.dim(w[0]) { ((w[0], w[1]), 1) } else { ((w[1], w[0]), -1) };
        *sum.coefficients.entry(atom).or_insert(0) += k;
    }
    sum.coefficients.retain(|_, k| *k != 0);
    sum
}
