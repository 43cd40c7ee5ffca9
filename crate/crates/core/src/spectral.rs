//! The double complex of nondegenerate bisimplices of the double nerve of a
//! flow category, and the first three pages of its vertical-first spectral
//! sequence.
//!
//! Bidegree `(p, q)`: `q` counts composable morphisms (the nerve direction),
//! `p` counts strict steps in the product of their Hom posets.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::flowcat::{FlowCategory, FlowError};
use crate::homalg::lattice::{echelon, kernel, preimage_in, quotient_invariants};
use crate::homalg::matrix::{from_i64s, SparseMatrix, SparseVec};
use crate::homalg::rational::{apply_q, columns_q, kernel_q, rank_q, QVec};
use crate::homalg::{AbelianGroup, Coefficients};
use crate::io::group_json;

/// Highest `q` reported on every page.
pub const REPORTED_Q: usize = 2;
/// Highest `q` built internally, so that `E^1_{*,2}` is a genuine homology group.
const BUILT_Q: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpectralError {
    #[error("page {page} is nonzero at ({p},{q}), outside the collapse shape")]
    NotCollapsed { page: usize, p: usize, q: usize },
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// A nondegenerate `(p, q)`-bisimplex: objects `c_0, ..., c_q` and `p + 1` rows,
/// row `i` holding one morphism of `Hom(c_j, c_{j+1})` per column `j` (an index
/// into that Hom poset). Consecutive rows form a strict descent in the product order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bisimplex {
    pub objects: Vec<usize>,
    pub rows: Vec<Vec<usize>>,
}

impl Bisimplex {
    pub fn p(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn q(&self) -> usize {
        self.objects.len() - 1
    }

    /// `c0,c1: r0 => r1 => ...` with each row a comma list of arrow strings.
    pub fn key(&self, flow: &FlowCategory) -> String {
        let cx = flow.complex();
        let objs: Vec<&str> = self.objects.iter().map(|&c| cx.id(c)).collect();
        let mut s = objs.join(",");
        if self.q() == 0 {
            return s;
        }
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(j, &m)| self.hom(flow, j).morphism(m).arrow(cx))
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        s.push_str(": ");
        s.push_str(&rows.join(" => "));
        s
    }

    fn hom<'a>(&self, flow: &'a FlowCategory, j: usize) -> &'a crate::flowcat::HomPoset {
        flow.hom(self.objects[j], self.objects[j + 1]).expect("bisimplex columns lie in non-empty Hom posets")
    }
}

fn object_chains(flow: &FlowCategory, q: usize) -> Vec<Vec<usize>> {
    let mut chains: Vec<Vec<usize>> = flow.critical().iter().map(|&c| vec![c]).collect();
    for _ in 0..q {
        let mut next = Vec::new();
        for ch in &chains {
            let last = *ch.last().expect("non-empty");
            for &(_, z) in flow.homs().range((last, 0)..(last + 1, 0)).map(|(k, _)| k) {
                let mut t = ch.clone();
                t.push(z);
                next.push(t);
            }
        }
        chains = next;
    }
    chains
}

/// All nondegenerate `(p, q)`-bisimplices, sorted by [`Bisimplex::key`].
pub fn enumerate_bisimplices(flow: &FlowCategory, p: usize, q: usize) -> Vec<Bisimplex> {
    let mut out = Vec::new();
    if q == 0 {
        if p == 0 {
            out = flow.critical().iter().map(|&c| Bisimplex { objects: vec![c], rows: vec![Vec::new()] }).collect();
        }
        return sort_by_key(flow, out);
    }
    for objects in object_chains(flow, q) {
        let homs: Vec<_> =
            (0..q).map(|j| flow.hom(objects[j], objects[j + 1]).expect("chain of non-empty Homs")).collect();
        // weak down-sets per column: f itself, then everything strictly below
        let weak_below: Vec<Vec<Vec<usize>>> = homs
            .iter()
            .map(|h| {
                (0..h.len())
                    .map(|f| std::iter::once(f).chain(h.poset().strictly_below(f).iter().copied()).collect())
                    .collect()
            })
            .collect();
        let product = |choices: &[&[usize]]| -> Vec<Vec<usize>> {
            let mut acc: Vec<Vec<usize>> = vec![Vec::new()];
            for c in choices {
                acc = acc
                    .iter()
                    .flat_map(|a| {
                        c.iter().map(move |&x| {
                            let mut t = a.clone();
                            t.push(x);
                            t
                        })
                    })
                    .collect();
            }
            acc
        };
        let all: Vec<Vec<usize>> = (0..q).map(|j| (0..homs[j].len()).collect()).collect();
        let all_refs: Vec<&[usize]> = all.iter().map(Vec::as_slice).collect();
        let mut stack: Vec<Vec<Vec<usize>>> = product(&all_refs).into_iter().map(|t| vec![t]).collect();
        while let Some(rows) = stack.pop() {
            if rows.len() == p + 1 {
                out.push(Bisimplex { objects: objects.clone(), rows });
                continue;
            }
            let last = rows.last().expect("non-empty");
            let choices: Vec<&[usize]> = (0..q).map(|j| weak_below[j][last[j]].as_slice()).collect();
            for t in product(&choices) {
                if &t != last {
                    let mut next = rows.clone();
                    next.push(t);
                    stack.push(next);
                }
            }
        }
    }
    sort_by_key(flow, out)
}

fn sort_by_key(flow: &FlowCategory, v: Vec<Bisimplex>) -> Vec<Bisimplex> {
    let mut keyed: Vec<(String, Bisimplex)> = v.into_iter().map(|b| (b.key(flow), b)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, b)| b).collect()
}

fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Row-wise composition tables, keyed by `(w, v, z)`: `table[i][j]` indexes
/// `Hom(v,z)[j] . Hom(w,v)[i]` in `Hom(w,z)`.
struct Composition(HashMap<(usize, usize, usize), Vec<Vec<usize>>>);

impl Composition {
    fn new(flow: &FlowCategory) -> Result<Self, FlowError> {
        let mut map = HashMap::new();
        for (&(w, v), first) in flow.homs() {
            for (&(_, z), second) in flow.homs().range((v, 0)..(v + 1, 0)) {
                let table = first
                    .morphisms()
                    .iter()
                    .map(|f| second.morphisms().iter().map(|g| flow.compose_indexed(f, g)).collect())
                    .collect::<Result<_, _>>()?;
                map.insert((w, v, z), table);
            }
        }
        Ok(Composition(map))
    }

    fn get(&self, w: usize, v: usize, z: usize, f: usize, g: usize) -> usize {
        self.0[&(w, v, z)][f][g]
    }
}

/// Nondegenerate bisimplex bases and both differentials, for `q <= 3` and
/// every `p` with a non-empty column.
#[derive(Clone, Debug)]
pub struct DoubleComplex {
    bases: Vec<Vec<Vec<Bisimplex>>>,
    keys: Vec<Vec<Vec<String>>>,
    // vertical[p][q] : C_{p,q} -> C_{p,q-1}; horizontal[p][q] : C_{p,q} -> C_{p-1,q}
    vertical: Vec<Vec<SparseMatrix>>,
    horizontal: Vec<Vec<SparseMatrix>>,
}

impl DoubleComplex {
    pub fn build(flow: &FlowCategory) -> Result<Self, SpectralError> {
        let comp = Composition::new(flow)?;
        let mut bases: Vec<Vec<Vec<Bisimplex>>> = Vec::new();
        for p in 0.. {
            let column: Vec<Vec<Bisimplex>> = (0..=BUILT_Q).map(|q| enumerate_bisimplices(flow, p, q)).collect();
            if column.iter().all(Vec::is_empty) {
                break;
            }
            bases.push(column);
        }
        let keys: Vec<Vec<Vec<String>>> =
            bases.iter().map(|col| col.iter().map(|b| b.iter().map(|s| s.key(flow)).collect()).collect()).collect();
        let index: Vec<Vec<HashMap<&Bisimplex, usize>>> = bases
            .iter()
            .map(|col| col.iter().map(|b| b.iter().enumerate().map(|(i, s)| (s, i)).collect()).collect())
            .collect();
        let size = |p: usize, q: usize| bases.get(p).map_or(0, |c| c[q].len());
        let lookup = |b: &Bisimplex| -> usize { index[b.p()][b.q()][b] };

        let mut vertical = Vec::with_capacity(bases.len());
        let mut horizontal = Vec::with_capacity(bases.len());
        for (p, column) in bases.iter().enumerate() {
            let mut vcol = Vec::with_capacity(BUILT_Q + 1);
            let mut hcol = Vec::with_capacity(BUILT_Q + 1);
            for (q, simplices) in column.iter().enumerate() {
                if q == 0 {
                    vcol.push(SparseMatrix::zeros(0, simplices.len()));
                } else {
                    let cols = simplices
                        .iter()
                        .map(|b| {
                            let entries: Vec<(usize, i64)> = (0..=q)
                                .filter_map(|k| vertical_face(&comp, b, k).map(|f| (lookup(&f), sign(k))))
                                .collect();
                            from_i64s(&entries)
                        })
                        .collect();
                    vcol.push(SparseMatrix::from_columns(size(p, q - 1), cols));
                }
                if p == 0 {
                    hcol.push(SparseMatrix::zeros(0, simplices.len()));
                } else {
                    let cols = simplices
                        .iter()
                        .map(|b| {
                            let entries: Vec<(usize, i64)> = (0..=p)
                                .map(|i| {
                                    let mut rows = b.rows.clone();
                                    rows.remove(i);
                                    (lookup(&Bisimplex { objects: b.objects.clone(), rows }), sign(i))
                                })
                                .collect();
                            from_i64s(&entries)
                        })
                        .collect();
                    hcol.push(SparseMatrix::from_columns(size(p - 1, q), cols));
                }
            }
            vertical.push(vcol);
            horizontal.push(hcol);
        }
        let dc = DoubleComplex { bases, keys, vertical, horizontal };
        dc.check_identities();
        Ok(dc)
    }

    fn check_identities(&self) {
        for p in 0..self.width() {
            for q in 0..=BUILT_Q {
                if q >= 2 {
                    assert!(self.vertical[p][q - 1].compose(&self.vertical[p][q]).is_zero(), "d_v^2 != 0 at ({p},{q})");
                }
                if p >= 2 {
                    assert!(
                        self.horizontal[p - 1][q].compose(&self.horizontal[p][q]).is_zero(),
                        "d_h^2 != 0 at ({p},{q})"
                    );
                }
                if p >= 1 && q >= 1 {
                    let hv = self.horizontal[p][q - 1].compose(&self.vertical[p][q]);
                    let vh = self.vertical[p - 1][q].compose(&self.horizontal[p][q]);
                    assert_eq!(hv, vh, "differentials do not commute at ({p},{q})");
                }
            }
        }
    }

    /// Number of non-empty columns `p`.
    pub fn width(&self) -> usize {
        self.bases.len()
    }

    pub fn basis(&self, p: usize, q: usize) -> &[Bisimplex] {
        self.bases.get(p).and_then(|c| c.get(q)).map_or(&[], Vec::as_slice)
    }

    /// Serialized basis labels of `C_{p,q}`.
    pub fn keys(&self, p: usize, q: usize) -> &[String] {
        self.keys.get(p).and_then(|c| c.get(q)).map_or(&[], Vec::as_slice)
    }

    pub fn rank(&self, p: usize, q: usize) -> usize {
        self.basis(p, q).len()
    }

    /// `d_v : C_{p,q} -> C_{p,q-1}`.
    pub fn vertical(&self, p: usize, q: usize) -> &SparseMatrix {
        &self.vertical[p][q]
    }

    /// `d_h : C_{p,q} -> C_{p-1,q}`.
    pub fn horizontal(&self, p: usize, q: usize) -> &SparseMatrix {
        &self.horizontal[p][q]
    }

    /// Largest `p` with `C_{p,1}` non-empty.
    fn top_p(&self) -> Option<usize> {
        (0..self.width()).rev().find(|&p| self.rank(p, 1) > 0)
    }
}

/// Face `d_k` in the nerve direction; `None` when it lands on a degenerate bisimplex.
fn vertical_face(comp: &Composition, b: &Bisimplex, k: usize) -> Option<Bisimplex> {
    let q = b.q();
    if q == 1 {
        // the face is a (p,0)-bisimplex, degenerate unless p = 0
        return (b.p() == 0).then(|| Bisimplex { objects: vec![b.objects[1 - k]], rows: vec![Vec::new()] });
    }
    let mut objects = b.objects.clone();
    let rows: Vec<Vec<usize>> = if k == 0 {
        objects.remove(0);
        b.rows.iter().map(|r| r[1..].to_vec()).collect()
    } else if k == q {
        objects.pop();
        b.rows.iter().map(|r| r[..q - 1].to_vec()).collect()
    } else {
        objects.remove(k);
        let (w, v, z) = (b.objects[k - 1], b.objects[k], b.objects[k + 1]);
        b.rows
            .iter()
            .map(|r| {
                let mut t = r[..k - 1].to_vec();
                t.push(comp.get(w, v, z, r[k - 1], r[k]));
                t.extend_from_slice(&r[k + 1..]);
                t
            })
            .collect()
    };
    if rows.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some(Bisimplex { objects, rows })
}

/// One page: groups at `(p, q)` for `q <= 2`, with the differential matrices
/// kept for pages 0 and 1.
#[derive(Clone, Debug)]
pub struct BigradedPage {
    pub page: usize,
    pub coeff: Coefficients,
    /// Number of columns `p` shown.
    pub width: usize,
    pub entries: BTreeMap<(usize, usize), AbelianGroup>,
    /// Page 0: `d_v` on the bisimplex bases. Page 1: `d_h` on chosen cycle
    /// bases, which induces the page-1 differential.
    pub differentials: BTreeMap<(usize, usize), SparseMatrix>,
}

impl BigradedPage {
    pub fn get(&self, p: usize, q: usize) -> AbelianGroup {
        self.entries.get(&(p, q)).cloned().unwrap_or_default()
    }

    /// Positions holding a nonzero group.
    pub fn support(&self) -> Vec<(usize, usize)> {
        self.entries.iter().filter(|(_, g)| !g.is_zero()).map(|(&k, _)| k).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut entries = Map::new();
        for (&(p, q), g) in &self.entries {
            entries.insert(format!("({p},{q})"), group_json(g));
        }
        json!({"page": self.page, "entries": entries})
    }

    /// Grid with `q` decreasing downwards and `p` increasing to the right.
    pub fn render_grid(&self) -> String {
        let cells: Vec<Vec<String>> = (0..=REPORTED_Q)
            .rev()
            .map(|q| (0..self.width).map(|p| self.get(p, q).render(self.coeff)).collect())
            .collect();
        let w = cells.iter().flatten().map(String::len).max().unwrap_or(1).max(3);
        let mut s = format!("E^{}\n", self.page);
        for (i, row) in cells.iter().enumerate() {
            let _ = write!(s, "q={} |", REPORTED_Q - i);
            for c in row {
                let _ = write!(s, " {c:>w$}");
            }
            s.push('\n');
        }
        s.push_str("      ");
        for p in 0..self.width {
            let _ = write!(s, " {:>w$}", format!("p={p}"));
        }
        s.push('\n');
        s
    }
}

/// The free groups on nondegenerate bisimplices.
pub fn e0_page(dc: &DoubleComplex, coeff: Coefficients) -> BigradedPage {
    let mut entries = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    for p in 0..dc.width() {
        for q in 0..=REPORTED_Q {
            entries.insert((p, q), AbelianGroup::free(dc.rank(p, q)));
            differentials.insert((p, q), dc.vertical(p, q).clone());
        }
    }
    BigradedPage { page: 0, coeff, width: dc.width(), entries, differentials }
}

struct ColumnLattices {
    // per (p, q): basis of cycles Z and generators of boundaries B
    cycles: Vec<Vec<Vec<SparseVec>>>,
    boundaries: Vec<Vec<Vec<SparseVec>>>,
}

fn column_lattices(dc: &DoubleComplex) -> ColumnLattices {
    let mut cycles = Vec::new();
    let mut boundaries = Vec::new();
    for p in 0..dc.width() {
        let z: Vec<Vec<SparseVec>> =
            (0..=REPORTED_Q).map(|q| echelon(&kernel(dc.vertical(p, q)), false).rows).collect();
        let b: Vec<Vec<SparseVec>> = (0..=REPORTED_Q).map(|q| dc.vertical(p, q + 1).columns().to_vec()).collect();
        cycles.push(z);
        boundaries.push(b);
    }
    ColumnLattices { cycles, boundaries }
}

fn check_collapse(page: &BigradedPage) -> Result<(), SpectralError> {
    for (&(p, q), g) in &page.entries {
        let allowed = match page.page {
            1 => q < 2,
            _ => (p == 0 && q == 0) || q == 1,
        };
        if !g.is_zero() && !allowed {
            return Err(SpectralError::NotCollapsed { page: page.page, p, q });
        }
    }
    Ok(())
}

/// Homology of each column under `d_v`; fails unless `E^1_{p,2} = 0` for all `p`.
pub fn e1_page(dc: &DoubleComplex, coeff: Coefficients) -> Result<BigradedPage, SpectralError> {
    let mut entries = BTreeMap::new();
    let mut differentials = BTreeMap::new();
    match coeff {
        Coefficients::Integers => {
            let lat = column_lattices(dc);
            for p in 0..dc.width() {
                for q in 0..=REPORTED_Q {
                    let (free, torsion) = quotient_invariants(&lat.cycles[p][q], &lat.boundaries[p][q]);
                    entries.insert((p, q), AbelianGroup::from_factors(free, &torsion));
                    if p >= 1 {
                        // d_h of each cycle, in coordinates of the cycle basis one column left
                        let target = echelon(&lat.cycles[p - 1][q], false);
                        let cols = lat.cycles[p][q]
                            .iter()
                            .map(|z| {
                                let image = dc.horizontal(p, q).apply(z);
                                target.coordinates(&image).expect("d_h maps cycles to cycles")
                            })
                            .collect();
                        differentials.insert((p, q), SparseMatrix::from_columns(target.rank(), cols));
                    }
                }
            }
        }
        Coefficients::Rationals => {
            for p in 0..dc.width() {
                for q in 0..=REPORTED_Q {
                    let z = kernel_q(dc.vertical(p, q)).len();
                    let b = rank_q(&columns_q(dc.vertical(p, q + 1)));
                    entries.insert((p, q), AbelianGroup::free(z - b));
                }
            }
        }
    }
    let page = BigradedPage { page: 1, coeff, width: dc.width(), entries, differentials };
    check_collapse(&page)?;
    Ok(page)
}

/// Homology of `E^1` under the induced horizontal differential; fails unless
/// the support lies in `(0,0)` and the row `q = 1`.
pub fn e2_page(dc: &DoubleComplex, coeff: Coefficients) -> Result<BigradedPage, SpectralError> {
    let mut entries = BTreeMap::new();
    match coeff {
        Coefficients::Integers => {
            let lat = column_lattices(dc);
            for p in 0..dc.width() {
                for q in 0..=REPORTED_Q {
                    let z = &lat.cycles[p][q];
                    // cycles whose d_h image is a boundary one column left
                    let kept: Vec<SparseVec> =
                        if p == 0 { z.clone() } else { preimage_in(z, dc.horizontal(p, q), &lat.boundaries[p - 1][q]) };
                    let mut killed = lat.boundaries[p][q].clone();
                    if p + 1 < dc.width() {
                        killed.extend(lat.cycles[p + 1][q].iter().map(|c| dc.horizontal(p + 1, q).apply(c)));
                    }
                    let (free, torsion) = quotient_invariants(&kept, &killed);
                    entries.insert((p, q), AbelianGroup::from_factors(free, &torsion));
                }
            }
        }
        Coefficients::Rationals => {
            let cycles: Vec<Vec<Vec<QVec>>> =
                (0..dc.width()).map(|p| (0..=REPORTED_Q).map(|q| kernel_q(dc.vertical(p, q))).collect()).collect();
            let bounds: Vec<Vec<Vec<QVec>>> =
                (0..dc.width()).map(|p| (0..=REPORTED_Q).map(|q| columns_q(dc.vertical(p, q + 1))).collect()).collect();
            for p in 0..dc.width() {
                for q in 0..=REPORTED_Q {
                    let z = &cycles[p][q];
                    let kept = if p == 0 {
                        z.len()
                    } else {
                        let below = &bounds[p - 1][q];
                        let mut joint = below.clone();
                        joint.extend(z.iter().map(|c| apply_q(dc.horizontal(p, q), c)));
                        z.len() - (rank_q(&joint) - rank_q(below))
                    };
                    let mut killed = bounds[p][q].clone();
                    if p + 1 < dc.width() {
                        killed.extend(cycles[p + 1][q].iter().map(|c| apply_q(dc.horizontal(p + 1, q), c)));
                    }
                    entries.insert((p, q), AbelianGroup::free(kept - rank_q(&killed)));
                }
            }
        }
    }
    let page = BigradedPage { page: 2, coeff, width: dc.width(), entries, differentials: BTreeMap::new() };
    check_collapse(&page)?;
    Ok(page)
}

/// Reads `H_0 = E^2_{0,0}` and `H_n = E^2_{n-1,1}` off a collapsed page.
pub fn total_homology(e2: &BigradedPage) -> Result<Vec<AbelianGroup>, SpectralError> {
    check_collapse(e2)?;
    let top = (0..e2.width).rev().find(|&p| e2.entries.contains_key(&(p, 1)));
    let mut h = vec![e2.get(0, 0)];
    if let Some(top) = top {
        h.extend((0..=top).map(|p| e2.get(p, 1)));
    }
    Ok(h)
}

/// Pages 0 to 2 and the total homology of a flow category.
#[derive(Clone, Debug)]
pub struct SpectralSequence {
    pub e0: BigradedPage,
    pub e1: BigradedPage,
    pub e2: BigradedPage,
    pub homology: Vec<AbelianGroup>,
}

pub fn spectral_sequence(flow: &FlowCategory, coeff: Coefficients) -> Result<SpectralSequence, SpectralError> {
    let dc = DoubleComplex::build(flow)?;
    let e0 = e0_page(&dc, coeff);
    let e1 = e1_page(&dc, coeff)?;
    let e2 = e2_page(&dc, coeff)?;
    let mut homology = total_homology(&e2)?;
    // columns with C_{p,1} = 0 on the right contribute nothing
    if let Some(top) = dc.top_p() {
        homology.truncate(top + 2);
    } else {
        homology.truncate(1);
    }
    Ok(SpectralSequence { e0, e1, e2, homology })
}
