//! Finite regular CW complexes given by their covering relations, face
//! posets, simplicial complexes and barycentric subdivision.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("duplicate cell id `{0}`")]
    DuplicateCellId(String),
    #[error("covering pair ({upper}, {lower}) refers to unknown cell `{missing}`")]
    UnknownCellInCovering { upper: String, lower: String, missing: String },
    #[error("covering pair ({upper}, {lower}) has dimensions {upper_dim} and {lower_dim}; expected a gap of 1")]
    BadCoveringDimension { upper: String, lower: String, upper_dim: usize, lower_dim: usize },
    #[error("facet list contains an empty facet")]
    EmptyFacet,
    #[error("elements `{lower}` and `{upper}` do not satisfy lower < upper")]
    NotComparable { lower: String, upper: String },
    #[error("covering relation contains a cycle through `{0}`")]
    CyclicOrder(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub id: String,
    pub dim: usize,
}

impl Cell {
    pub fn new(id: impl Into<String>, dim: usize) -> Self {
        Cell { id: id.into(), dim }
    }
}

/// A finite regular CW complex, recorded only through its codimension-one
/// incidences. Cells are indexed in lexicographic order of their ids.
///
/// Regularity itself is a caller contract: only the dimension rule of the
/// covering relation is validated.
#[derive(Debug)]
pub struct RegularCwComplex {
    cells: Vec<Cell>,
    index: HashMap<String, usize>,
    faces: Vec<Vec<usize>>,
    cofaces: Vec<Vec<usize>>,
    closure: OnceLock<Vec<Vec<usize>>>,
}

impl Clone for RegularCwComplex {
    fn clone(&self) -> Self {
        RegularCwComplex {
            cells: self.cells.clone(),
            index: self.index.clone(),
            faces: self.faces.clone(),
            cofaces: self.cofaces.clone(),
            closure: OnceLock::new(),
        }
    }
}

impl PartialEq for RegularCwComplex {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells && self.faces == other.faces
    }
}

impl RegularCwComplex {
    /// Validates raw cells and `(upper, lower)` covering pairs.
    pub fn validate<S: AsRef<str>>(raw_cells: Vec<Cell>, raw_covering: &[(S, S)]) -> Result<Self, ComplexError> {
        let mut cells = raw_cells;
        cells.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = cells.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(ComplexError::DuplicateCellId(w[0].id.clone()));
        }
        let index: HashMap<String, usize> = cells.iter().enumerate().map(|(i, c)| (c.id.clone(), i)).collect();
        let mut faces = vec![BTreeSet::new(); cells.len()];
        for (upper, lower) in raw_covering {
            let (upper, lower) = (upper.as_ref(), lower.as_ref());
            let lookup = |id: &str| {
                index.get(id).copied().ok_or_else(|| ComplexError::UnknownCellInCovering {
                    upper: upper.to_string(),
                    lower: lower.to_string(),
                    missing: id.to_string(),
                })
            };
            let (u, l) = (lookup(upper)?, lookup(lower)?);
            if cells[u].dim != cells[l].dim + 1 {
                return Err(ComplexError::BadCoveringDimension {
                    upper: upper.to_string(),
                    lower: lower.to_string(),
                    upper_dim: cells[u].dim,
                    lower_dim: cells[l].dim,
                });
            }
            faces[u].insert(l);
        }
        let faces: Vec<Vec<usize>> = faces.into_iter().map(|s| s.into_iter().collect()).collect();
        let mut cofaces = vec![Vec::new(); cells.len()];
        for (u, fs) in faces.iter().enumerate() {
            for &l in fs {
                cofaces[l].push(u);
            }
        }
        Ok(RegularCwComplex { cells, index, faces, cofaces, closure: OnceLock::new() })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn id(&self, cell: usize) -> &str {
        &self.cells[cell].id
    }

    pub fn dim(&self, cell: usize) -> usize {
        self.cells[cell].dim
    }

    /// Highest cell dimension, or `None` for the empty complex.
    pub fn dimension(&self) -> Option<usize> {
        self.cells.iter().map(|c| c.dim).max()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Codimension-one faces, ascending.
    pub fn faces(&self, cell: usize) -> &[usize] {
        &self.faces[cell]
    }

    /// Codimension-one cofaces, ascending.
    pub fn cofaces(&self, cell: usize) -> &[usize] {
        &self.cofaces[cell]
    }

    pub fn covering_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.faces.iter().enumerate().flat_map(|(u, fs)| fs.iter().map(move |&l| (u, l)))
    }

    pub fn covering_count(&self) -> usize {
        self.faces.iter().map(Vec::len).sum()
    }

    fn closure(&self) -> &Vec<Vec<usize>> {
        self.closure.get_or_init(|| {
            // process cells by increasing dimension so faces are complete first
            let mut order: Vec<usize> = (0..self.len()).collect();
            order.sort_by_key(|&c| self.dim(c));
            let mut below: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
            for c in order {
                let mut set = BTreeSet::new();
                for &f in &self.faces[c] {
                    set.insert(f);
                    set.extend(below[f].iter().copied());
                }
                below[c] = set.into_iter().collect();
            }
            below
        })
    }

    /// All proper faces of `cell` (closure of the covering relation), ascending.
    pub fn proper_faces(&self, cell: usize) -> &[usize] {
        &self.closure()[cell]
    }

    /// Whether `lower` is a proper face of `upper`.
    pub fn is_proper_face(&self, lower: usize, upper: usize) -> bool {
        self.proper_faces(upper).binary_search(&lower).is_ok()
    }

    /// The face poset: cells ordered by inclusion, covering pairs as given.
    pub fn face_poset(&self) -> Poset {
        let labels = self.cells.iter().map(|c| c.id.clone()).collect();
        Poset::new(labels, self.covering_pairs().collect()).expect("covering of a CW complex is acyclic")
    }

    /// Simplicial complex of strictly nested chains of cells.
    pub fn barycentric_subdivision(&self) -> SimplicialComplex {
        let mut simplices = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..self.len()).map(|c| vec![c]).collect();
        while let Some(chain) = stack.pop() {
            let last = *chain.last().expect("non-empty chain");
            for &f in self.proper_faces(last) {
                let mut next = chain.clone();
                next.push(f);
                stack.push(next);
            }
            let mut s = chain;
            s.sort_unstable();
            simplices.push(s);
        }
        let vertices = self.cells.iter().map(|c| c.id.clone()).collect();
        SimplicialComplex::from_simplices(vertices, simplices)
    }

    /// The subcomplex left after deleting `ids` together with every cell that has
    /// one of them as a face.
    pub fn without(&self, ids: &[&str]) -> Result<RegularCwComplex, ComplexError> {
        let mut removed = HashSet::new();
        for id in ids {
            let c = self.index_of(id).ok_or_else(|| ComplexError::UnknownElement(id.to_string()))?;
            removed.insert(c);
        }
        for c in 0..self.len() {
            if self.proper_faces(c).iter().any(|f| removed.contains(f)) {
                removed.insert(c);
            }
        }
        let cells = (0..self.len()).filter(|c| !removed.contains(c)).map(|c| self.cells[c].clone()).collect();
        let covering: Vec<(String, String)> = self
            .covering_pairs()
            .filter(|(u, l)| !removed.contains(u) && !removed.contains(l))
            .map(|(u, l)| (self.id(u).to_string(), self.id(l).to_string()))
            .collect();
        RegularCwComplex::validate(cells, &covering)
    }
}

/// Finite poset stored through its covering relation `(greater, lesser)`.
#[derive(Clone, Debug)]
pub struct Poset {
    labels: Vec<String>,
    covering: Vec<(usize, usize)>,
    // below[x] = sorted strict down-set of x
    below: Vec<Vec<usize>>,
}

impl Poset {
    pub fn new(labels: Vec<String>, covering: Vec<(usize, usize)>) -> Result<Self, ComplexError> {
        let n = labels.len();
        let mut lower: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(g, l) in &covering {
            assert!(g < n && l < n, "covering pair out of range");
            lower[g].push(l);
            indeg[l] += 1;
        }
        // Kahn from the maximal elements; a leftover element lies on a cycle
        let mut order = Vec::with_capacity(n);
        let mut ready: Vec<usize> = (0..n).filter(|&x| indeg[x] == 0).collect();
        while let Some(x) = ready.pop() {
            order.push(x);
            for &l in &lower[x] {
                indeg[l] -= 1;
                if indeg[l] == 0 {
                    ready.push(l);
                }
            }
        }
        if order.len() < n {
            let culprit = (0..n).find(|&x| indeg[x] > 0).expect("cycle element");
            return Err(ComplexError::CyclicOrder(labels[culprit].clone()));
        }
        let mut below: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &x in order.iter().rev() {
            let mut set = BTreeSet::new();
            for &l in &lower[x] {
                set.insert(l);
                set.extend(below[l].iter().copied());
            }
            below[x] = set.into_iter().collect();
        }
        let mut covering = covering;
        covering.sort_unstable();
        covering.dedup();
        Ok(Poset { labels, covering, below })
    }

    /// Builds a poset from a strict order relation given as `(greater, lesser)` pairs;
    /// the covering relation is its transitive reduction.
    pub fn from_order(labels: Vec<String>, strictly_below: &[Vec<usize>]) -> Result<Self, ComplexError> {
        let mut covering = Vec::new();
        for (x, lows) in strictly_below.iter().enumerate() {
            let set: HashSet<usize> = lows.iter().copied().collect();
            for &y in lows {
                let skipped = lows.iter().any(|&z| z != y && strictly_below[z].contains(&y) && set.contains(&z));
                if !skipped {
                    covering.push((x, y));
                }
            }
        }
        Poset::new(labels, covering)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn covering(&self) -> &[(usize, usize)] {
        &self.covering
    }

    /// Strict down-set of `x`, ascending.
    pub fn strictly_below(&self, x: usize) -> &[usize] {
        &self.below[x]
    }

    /// `a < b`.
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.below[b].binary_search(&a).is_ok()
    }

    pub fn relation_count(&self) -> usize {
        self.below.iter().map(Vec::len).sum()
    }

    /// Induced subposet on `elements` (in the given order), covering recomputed.
    pub fn induced(&self, elements: &[usize]) -> Poset {
        let pos: HashMap<usize, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let below: Vec<Vec<usize>> =
            elements.iter().map(|&e| self.below[e].iter().filter_map(|x| pos.get(x).copied()).collect()).collect();
        let labels = elements.iter().map(|&e| self.labels[e].clone()).collect();
        Poset::from_order(labels, &below).expect("subposet of a poset is acyclic")
    }

    /// Open interval `(lower, upper)`; `lower = None` stands for a formal bottom element.
    pub fn open_interval(&self, lower: Option<usize>, upper: usize) -> Result<Poset, ComplexError> {
        if let Some(l) = lower {
            if !self.less(l, upper) {
                return Err(ComplexError::NotComparable {
                    lower: self.labels[l].clone(),
                    upper: self.labels[upper].clone(),
                });
            }
        }
        let elements: Vec<usize> =
            self.below[upper].iter().copied().filter(|&z| lower.is_none_or(|l| self.less(l, z))).collect();
        Ok(self.induced(&elements))
    }

    pub fn opposite(&self) -> Poset {
        let covering = self.covering.iter().map(|&(g, l)| (l, g)).collect();
        Poset::new(self.labels.clone(), covering).expect("opposite of a poset is acyclic")
    }

    /// All strictly increasing chains `x_0 < ... < x_n` with `n <= max_dim`,
    /// grouped by `n`.
    pub fn chains(&self, max_dim: usize) -> Vec<Vec<Vec<usize>>> {
        let mut above: Vec<Vec<usize>> = vec![Vec::new(); self.len()];
        for (x, lows) in self.below.iter().enumerate() {
            for &l in lows {
                above[l].push(x);
            }
        }
        let mut out: Vec<Vec<Vec<usize>>> = vec![Vec::new(); max_dim + 1];
        let mut stack: Vec<Vec<usize>> = (0..self.len()).rev().map(|x| vec![x]).collect();
        while let Some(chain) = stack.pop() {
            let n = chain.len() - 1;
            if n < max_dim {
                let last = *chain.last().expect("non-empty");
                for &y in above[last].iter().rev() {
                    let mut next = chain.clone();
                    next.push(y);
                    stack.push(next);
                }
            }
            out[n].push(chain);
        }
        for level in &mut out {
            level.sort();
        }
        out
    }

    /// The poset as a category: one arrow `x -> y` for each `x < y`, labelled `x<y`.
    pub fn as_category(&self) -> crate::flowcat::FiniteCategory {
        use crate::flowcat::{Arrow, FiniteCategory};
        let mut arrows = Vec::new();
        let mut index = HashMap::new();
        for y in 0..self.len() {
            for &x in &self.below[y] {
                index.insert((x, y), arrows.len());
                arrows.push(Arrow { label: format!("{}<{}", self.labels[x], self.labels[y]), source: x, target: y });
            }
        }
        let mut composites = Vec::new();
        for (&(x, y), &f) in &index {
            for (&(y2, z), &g) in &index {
                if y == y2 {
                    composites.push((f, g, Some(index[&(x, z)])));
                }
            }
        }
        FiniteCategory::new(self.labels.clone(), arrows, composites).expect("poset composition is well defined")
    }

    /// Number of connected components of the Hasse diagram.
    pub fn component_count(&self) -> usize {
        let mut parent: Vec<usize> = (0..self.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        for &(a, b) in &self.covering {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
            }
        }
        (0..self.len()).filter(|&x| find(&mut parent, x) == x).count()
    }
}

/// Finite abstract simplicial complex on labelled vertices; simplices are
/// sorted vertex-index lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    simplices: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Takes the downward closure of `simplices`.
    pub fn from_simplices(vertices: Vec<String>, simplices: Vec<Vec<usize>>) -> Self {
        let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
        for s in simplices {
            let mut s = s;
            s.sort_unstable();
            s.dedup();
            if s.is_empty() || all.contains(&s) {
                continue;
            }
            let k = s.len();
            for mask in 1u64..(1u64 << k) {
                let sub: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                all.insert(sub);
            }
        }
        let mut simplices: Vec<Vec<usize>> = all.into_iter().collect();
        simplices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        SimplicialComplex { vertices, simplices }
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Number of simplices in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = Vec::new();
        for s in &self.simplices {
            let d = s.len() - 1;
            if f.len() <= d {
                f.resize(d + 1, 0);
            }
            f[d] += 1;
        }
        f
    }

    pub fn is_downward_closed(&self) -> bool {
        let set: HashSet<&Vec<usize>> = self.simplices.iter().collect();
        self.simplices.iter().all(|s| {
            (0..s.len()).all(|i| {
                if s.len() == 1 {
                    return true;
                }
                let mut t = s.clone();
                t.remove(i);
                set.contains(&t)
            })
        })
    }

    fn cell_id(&self, s: &[usize]) -> String {
        s.iter().map(|&v| self.vertices[v].as_str()).collect::<Vec<_>>().join("_")
    }

    /// The same complex viewed as a regular CW complex; cell ids join the
    /// vertex labels with `_`.
    pub fn to_cw(&self) -> RegularCwComplex {
        let cells = self.simplices.iter().map(|s| Cell::new(self.cell_id(s), s.len() - 1)).collect();
        let mut covering = Vec::new();
        for s in self.simplices.iter().filter(|s| s.len() > 1) {
            for i in 0..s.len() {
                let mut t = s.clone();
                t.remove(i);
                covering.push((self.cell_id(s), self.cell_id(&t)));
            }
        }
        RegularCwComplex::validate(cells, &covering).expect("simplicial complexes are valid CW complexes")
    }

    /// Simplicial chain complex with the usual alternating-sign boundary.
    pub fn chain_complex(&self) -> crate::homalg::ChainComplex {
        use crate::homalg::matrix::{from_i64s, SparseMatrix};
        let f = self.f_vector();
        let mut by_dim: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); f.len()];
        for s in &self.simplices {
            by_dim[s.len() - 1].push(s);
        }
        let index: Vec<HashMap<&Vec<usize>, usize>> =
            by_dim.iter().map(|level| level.iter().enumerate().map(|(i, s)| (*s, i)).collect()).collect();
        let labels = by_dim.iter().map(|l| l.iter().map(|s| self.cell_id(s)).collect()).collect();
        let mut boundaries = Vec::new();
        for d in 1..by_dim.len() {
            let cols = by_dim[d]
                .iter()
                .map(|s| {
                    let entries: Vec<(usize, i64)> = (0..s.len())
                        .map(|i| {
                            let mut t = (*s).clone();
                            t.remove(i);
                            (index[d - 1][&t], if i % 2 == 0 { 1 } else { -1 })
                        })
                        .collect();
                    from_i64s(&entries)
                })
                .collect();
            boundaries.push(SparseMatrix::from_columns(by_dim[d - 1].len(), cols));
        }
        crate::homalg::ChainComplex::new(labels, boundaries).expect("simplicial boundary squares to zero")
    }
}

/// Builds the simplicial complex generated by `facets` (integer vertex labels)
/// together with its CW view.
pub fn from_simplicial(facets: &[Vec<u64>]) -> Result<(SimplicialComplex, RegularCwComplex), ComplexError> {
    if facets.iter().any(Vec::is_empty) {
        return Err(ComplexError::EmptyFacet);
    }
    let verts: BTreeSet<u64> = facets.iter().flatten().copied().collect();
    let verts: Vec<u64> = verts.into_iter().collect();
    let pos: HashMap<u64, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let simplices = facets.iter().map(|f| f.iter().map(|v| pos[v]).collect()).collect();
    let sc = SimplicialComplex::from_simplices(verts.iter().map(u64::to_string).collect(), simplices);
    let cw = sc.to_cw();
    Ok((sc, cw))
}
