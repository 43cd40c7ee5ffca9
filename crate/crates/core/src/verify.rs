//! Structural checks: sphere-homology intervals in Hom posets, unique
//! factorization, nerve vanishing, and the free-pair collapse of a nerve.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::complex::RegularCwComplex;
use crate::flowcat::{Arrow, FiniteCategory, FlowCategory, FlowError, HomPoset};
use crate::homalg::matrix::{from_i64s, SparseMatrix};
use crate::homalg::{
    nerve_chain_complex, order_complex_homology, same_homology, AbelianGroup, ChainComplex, Coefficients, HomalgError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("not a unique factorization category: {0}")]
    NotUfc(String),
    #[error("not a free pair: {0}")]
    NotFreePair(String),
    #[error(transparent)]
    Homalg(#[from] HomalgError),
    #[error(transparent)]
    Flow(#[from] FlowError),
}

/// Homology of `S^d`; `d = -1` is the empty space.
pub fn sphere_homology(d: i64) -> Vec<AbelianGroup> {
    match d {
        d if d < 0 => Vec::new(),
        0 => vec![AbelianGroup::free(2)],
        d => {
            let d = d as usize;
            let mut h = vec![AbelianGroup::zero(); d + 1];
            h[0] = AbelianGroup::free(1);
            h[d] = AbelianGroup::free(1);
            h
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IntervalCheck {
    pub element: String,
    pub rank: usize,
    /// Dimension `d` of the sphere `S^d` the interval below the element should look like.
    pub sphere: i64,
    pub homology: Vec<AbelianGroup>,
    pub pass: bool,
}

/// Homology-level certificate that a Hom poset with a bottom adjoined is a CW
/// poset. A pass is a necessary condition only: spheres are recognised by
/// their homology, not up to homeomorphism.
#[derive(Clone, Debug, Serialize)]
pub struct CwPosetReport {
    pub poset: String,
    /// Covering steps raise the rank by one and minimal elements have rank 0.
    pub graded: bool,
    pub elements: Vec<IntervalCheck>,
    pub pass: bool,
}

pub fn check_cw_poset(cx: &RegularCwComplex, h: &HomPoset) -> CwPosetReport {
    let p = h.poset();
    let ranks = h.ranks();
    let steps = h.covering().iter().all(|&(g, l)| ranks[g] == ranks[l] + 1);
    let minimal_at_zero = (0..h.len()).all(|x| !p.strictly_below(x).is_empty() || ranks[x] == 0);
    let elements: Vec<IntervalCheck> = (0..h.len())
        .map(|x| {
            // the open interval from the adjoined bottom up to x
            let below = p.open_interval(None, x).expect("no lower bound given");
            let homology = order_complex_homology(&below, Coefficients::Integers);
            let sphere = ranks[x] as i64 - 1;
            let pass = same_homology(&homology, &sphere_homology(sphere));
            IntervalCheck { element: p.label(x).to_string(), rank: ranks[x], sphere, homology, pass }
        })
        .collect();
    let graded = steps && minimal_at_zero;
    let pass = graded && elements.iter().all(|e| e.pass);
    CwPosetReport { poset: format!("Hom({},{})", cx.id(h.source()), cx.id(h.target())), graded, elements, pass }
}

/// Every endomorphism is an identity and no two distinct objects have arrows both ways.
pub fn check_finite_directed(c: &FiniteCategory) -> bool {
    c.is_finite_directed()
}

#[derive(Clone, Debug, Serialize)]
pub struct FactorizationWitness {
    pub morphism: String,
    pub factorizations: Vec<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct UfcReport {
    pub finite_directed: bool,
    pub indecomposables: usize,
    /// Morphisms with more than one factorization, with two of them.
    pub witnesses: Vec<FactorizationWitness>,
    pub pass: bool,
}

// Up to two factorizations of every arrow into indecomposables, plus the
// indecomposable flags. Requires a finite directed category.
struct Factorizations {
    indecomposable: Vec<bool>,
    lists: Vec<Vec<Vec<usize>>>,
}

fn factorizations(c: &FiniteCategory) -> Factorizations {
    let n = c.arrow_count();
    let mut indecomposable = vec![true; n];
    // (i, g) with g . i = a, for each a
    let mut splits: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for i in 0..n {
        for &g in c.outgoing(c.arrow(i).target) {
            if let Some(a) = c.composite(i, g) {
                indecomposable[a] = false;
                splits[a].push((i, g));
            }
        }
    }
    // every split of `a` leaves a remainder starting at a different object, so
    // recursion on the remainder terminates in a directed category
    let mut memo: Vec<Option<Vec<Vec<usize>>>> = vec![None; n];
    fn go(
        a: usize,
        indecomposable: &[bool],
        splits: &[Vec<(usize, usize)>],
        memo: &mut Vec<Option<Vec<Vec<usize>>>>,
    ) -> Vec<Vec<usize>> {
        if let Some(v) = &memo[a] {
            return v.clone();
        }
        let mut out = Vec::new();
        if indecomposable[a] {
            out.push(vec![a]);
        }
        for &(i, g) in &splits[a] {
            if out.len() >= 2 {
                break;
            }
            if !indecomposable[i] {
                continue;
            }
            for rest in go(g, indecomposable, splits, memo) {
                let mut f = vec![i];
                f.extend(rest);
                out.push(f);
            }
        }
        out.truncate(2);
        memo[a] = Some(out.clone());
        out
    }
    let lists = (0..n).map(|a| go(a, &indecomposable, &splits, &mut memo)).collect();
    Factorizations { indecomposable, lists }
}

/// Each non-identity morphism is a composite of indecomposables in exactly one way.
pub fn check_unique_factorization(c: &FiniteCategory) -> UfcReport {
    if !check_finite_directed(c) {
        return UfcReport { finite_directed: false, indecomposables: 0, witnesses: Vec::new(), pass: false };
    }
    let f = factorizations(c);
    let label = |a: usize| c.arrow(a).label.clone();
    let witnesses: Vec<FactorizationWitness> = f
        .lists
        .iter()
        .enumerate()
        .filter(|(_, l)| l.len() != 1)
        .map(|(a, l)| FactorizationWitness {
            morphism: label(a),
            factorizations: l.iter().map(|s| s.iter().map(|&x| label(x)).collect()).collect(),
        })
        .collect();
    UfcReport {
        finite_directed: true,
        indecomposables: f.indecomposable.iter().filter(|&&b| b).count(),
        pass: witnesses.is_empty(),
        witnesses,
    }
}

/// The category whose morphisms `w -> z` are weak relations `a >= b` in
/// `Hom(w, z)`, composed row by row.
pub fn level_one_category(flow: &FlowCategory) -> Result<FiniteCategory, FlowError> {
    let cx = flow.complex();
    let object_of: HashMap<usize, usize> = flow.critical().iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut arrows = Vec::new();
    let mut index: HashMap<(usize, usize, usize, usize), usize> = HashMap::new();
    for (&(w, z), h) in flow.homs() {
        for a in 0..h.len() {
            for b in 0..h.len() {
                if a == b || h.greater(a, b) {
                    index.insert((w, z, a, b), arrows.len());
                    arrows.push(Arrow {
                        label: format!("{}>={}", h.morphism(a).arrow(cx), h.morphism(b).arrow(cx)),
                        source: object_of[&w],
                        target: object_of[&z],
                    });
                }
            }
        }
    }
    let mut composites = Vec::new();
    for (&(w, v, a, b), &f) in &index {
        let first = flow.hom(w, v).expect("indexed Hom");
        for (&(v2, z), second) in flow.homs().range((v, 0)..(v + 1, 0)) {
            debug_assert_eq!(v, v2);
            for c in 0..second.len() {
                for d in 0..second.len() {
                    let Some(&g) = index.get(&(v, z, c, d)) else { continue };
                    let top = flow.compose_indexed(first.morphism(a), second.morphism(c))?;
                    let bottom = flow.compose_indexed(first.morphism(b), second.morphism(d))?;
                    let h = index.get(&(w, z, top, bottom)).copied().ok_or_else(|| {
                        FlowError::CompositeNotInHom(format!("{} over {}", arrows[f].label, arrows[g].label))
                    })?;
                    composites.push((f, g, Some(h)));
                }
            }
        }
    }
    Ok(FiniteCategory::new(flow.critical().iter().map(|&c| cx.id(c).to_string()).collect(), arrows, composites)
        .expect("row-wise composition of a flow category is a category"))
}

/// Homology of the nerve vanishes in degrees `2..=max_dim`.
pub fn check_nerve_vanishing(c: &FiniteCategory, max_dim: usize) -> Result<bool, VerifyError> {
    let ufc = check_unique_factorization(c);
    if !ufc.pass {
        return Err(VerifyError::NotUfc(ufc_witness(&ufc)));
    }
    // one extra degree so the top reported group is a genuine quotient
    let h = nerve_chain_complex(c, max_dim + 1)?.homology(Coefficients::Integers);
    Ok(h.iter().take(max_dim + 1).skip(2).all(AbelianGroup::is_zero))
}

fn ufc_witness(r: &UfcReport) -> String {
    match r.witnesses.first() {
        _ if !r.finite_directed => "not finite directed".to_string(),
        Some(w) => format!(
            "`{}` factors as {}",
            w.morphism,
            w.factorizations.iter().map(|f| f.join(" ; ")).collect::<Vec<_>>().join(" and as ")
        ),
        None => String::new(),
    }
}

#[derive(Clone, Debug)]
struct SSimplex {
    label: String,
    vertices: Vec<usize>,
    // faces[i] indexes the face opposite vertex i, one dimension down
    faces: Vec<usize>,
    alive: bool,
}

/// Nondegenerate simplices of a simplicial set by dimension, with their face
/// maps. Removed simplices stay in place, marked dead.
#[derive(Clone, Debug)]
pub struct RegularSimplicialSet {
    simplices: Vec<Vec<SSimplex>>,
    // nerve items (object or arrow string) -> index, per dimension
    items: Vec<Vec<Vec<usize>>>,
}

impl RegularSimplicialSet {
    /// The nondegenerate nerve of a finite directed category.
    pub fn nerve(c: &FiniteCategory) -> Result<Self, VerifyError> {
        if let Some(w) = c.directedness_violation() {
            return Err(HomalgError::NotFiniteDirected(w).into());
        }
        let mut items: Vec<Vec<Vec<usize>>> = vec![(0..c.object_count()).map(|o| vec![o]).collect()];
        // a string of arrows visits distinct objects, so it is shorter than the object count
        items.extend(c.composable_strings(c.object_count()).into_iter().skip(1).take_while(|l| !l.is_empty()));
        let lookup: Vec<HashMap<&Vec<usize>, usize>> =
            items.iter().map(|l| l.iter().enumerate().map(|(i, s)| (s, i)).collect()).collect();
        let mut simplices = Vec::with_capacity(items.len());
        for (n, level) in items.iter().enumerate() {
            let row = level
                .iter()
                .map(|s| {
                    if n == 0 {
                        return SSimplex {
                            label: c.object(s[0]).to_string(),
                            vertices: vec![s[0]],
                            faces: Vec::new(),
                            alive: true,
                        };
                    }
                    let mut vertices = vec![c.arrow(s[0]).source];
                    vertices.extend(s.iter().map(|&a| c.arrow(a).target));
                    let faces = (0..=n)
                        .map(|i| {
                            let face: Vec<usize> = if n == 1 {
                                vec![vertices[1 - i]]
                            } else if i == 0 {
                                s[1..].to_vec()
                            } else if i == n {
                                s[..n - 1].to_vec()
                            } else {
                                let mut t = s[..i - 1].to_vec();
                                t.push(c.composite(s[i - 1], s[i]).expect("directed: composites are non-identities"));
                                t.extend_from_slice(&s[i + 1..]);
                                t
                            };
                            lookup[n - 1][&face]
                        })
                        .collect();
                    let label = s.iter().map(|&a| c.arrow(a).label.as_str()).collect::<Vec<_>>().join(" ; ");
                    SSimplex { label, vertices, faces, alive: true }
                })
                .collect();
            simplices.push(row);
        }
        Ok(RegularSimplicialSet { simplices, items })
    }

    /// Live simplices per dimension, trailing empty dimensions dropped.
    pub fn counts(&self) -> Vec<usize> {
        let mut c: Vec<usize> = self.simplices.iter().map(|l| l.iter().filter(|s| s.alive).count()).collect();
        while c.len() > 1 && c.last() == Some(&0) {
            c.pop();
        }
        c
    }

    /// Labels of the live `n`-simplices.
    pub fn labels(&self, n: usize) -> Vec<&str> {
        self.simplices.get(n).map_or(Vec::new(), |l| l.iter().filter(|s| s.alive).map(|s| s.label.as_str()).collect())
    }

    /// Each simplex has pairwise distinct vertices.
    pub fn is_regular(&self) -> bool {
        self.simplices.iter().flatten().all(|s| s.vertices.iter().collect::<BTreeSet<_>>().len() == s.vertices.len())
    }

    /// `d_i d_j = d_{j-1} d_i` for `i < j` on every simplex of dimension at least 2.
    pub fn face_identities_hold(&self) -> bool {
        (2..self.simplices.len()).all(|n| {
            self.simplices[n].iter().all(|s| {
                (0..=n).all(|j| {
                    (0..j).all(|i| {
                        let lhs = self.simplices[n - 1][s.faces[j]].faces[i];
                        let rhs = self.simplices[n - 1][s.faces[i]].faces[j - 1];
                        lhs == rhs
                    })
                })
            })
        })
    }

    /// Chain complex on the live simplices.
    pub fn chain_complex(&self) -> ChainComplex {
        let counts = self.counts();
        let live: Vec<Vec<usize>> = (0..counts.len())
            .map(|n| (0..self.simplices[n].len()).filter(|&i| self.simplices[n][i].alive).collect())
            .collect();
        let position: Vec<HashMap<usize, usize>> =
            live.iter().map(|l| l.iter().enumerate().map(|(k, &i)| (i, k)).collect()).collect();
        let labels = live
            .iter()
            .enumerate()
            .map(|(n, l)| l.iter().map(|&i| self.simplices[n][i].label.clone()).collect())
            .collect();
        let boundaries = (1..live.len())
            .map(|n| {
                let cols = live[n]
                    .iter()
                    .map(|&i| {
                        let mut entries: Vec<(usize, i64)> = self.simplices[n][i]
                            .faces
                            .iter()
                            .enumerate()
                            .map(|(k, f)| (position[n - 1][f], if k % 2 == 0 { 1 } else { -1 }))
                            .collect();
                        entries.sort_unstable();
                        merge_entries(entries)
                    })
                    .collect();
                SparseMatrix::from_columns(live[n - 1].len(), cols)
            })
            .collect();
        ChainComplex::new(labels, boundaries).expect("face maps of a simplicial set give a chain complex")
    }

    // all iterated faces of (n, i), including itself
    fn closure(&self, n: usize, i: usize) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        let mut stack = vec![(n, i)];
        while let Some((m, j)) = stack.pop() {
            if out.insert((m, j)) && m > 0 {
                stack.extend(self.simplices[m][j].faces.iter().map(|&f| (m - 1, f)));
            }
        }
        out
    }

    /// Removes the closed interval `[tau, sigma]` after checking that every live
    /// coface of `tau` is a face of `sigma`.
    fn collapse_pair(&mut self, tau: (usize, usize), sigma: (usize, usize)) -> Result<(), VerifyError> {
        let faces_of_sigma = self.closure(sigma.0, sigma.1);
        if !faces_of_sigma.contains(&tau) {
            return Err(VerifyError::NotFreePair(format!(
                "`{}` is not a face of `{}`",
                self.label(tau),
                self.label(sigma)
            )));
        }
        for n in tau.0 + 1..self.simplices.len() {
            for j in 0..self.simplices[n].len() {
                if self.simplices[n][j].alive && !faces_of_sigma.contains(&(n, j)) && self.closure(n, j).contains(&tau)
                {
                    return Err(VerifyError::NotFreePair(format!(
                        "`{}` has coface `{}` outside `{}`",
                        self.label(tau),
                        self.label((n, j)),
                        self.label(sigma)
                    )));
                }
            }
        }
        for (n, j) in faces_of_sigma {
            if self.closure(n, j).contains(&tau) {
                let s = &mut self.simplices[n][j];
                if !s.alive {
                    return Err(VerifyError::NotFreePair(format!("`{}` was already removed", s.label)));
                }
                s.alive = false;
            }
        }
        Ok(())
    }

    fn label(&self, (n, i): (usize, usize)) -> &str {
        &self.simplices[n][i].label
    }

    fn index(&self, items: &[usize]) -> Option<(usize, usize)> {
        let n = items.len();
        self.items.get(n)?.iter().position(|s| s == items).map(|i| (n, i))
    }
}

fn merge_entries(entries: Vec<(usize, i64)>) -> crate::homalg::SparseVec {
    let mut merged: Vec<(usize, i64)> = Vec::with_capacity(entries.len());
    for (r, x) in entries {
        match merged.last_mut() {
            Some((last, y)) if *last == r => *y += x,
            _ => merged.push((r, x)),
        }
    }
    merged.retain(|&(_, x)| x != 0);
    from_i64s(&merged)
}

/// Collapses the nerve of a unique factorization category onto a graph: for
/// each morphism `f` with factorization `f_1, ..., f_k`, `k >= 2`, taken by
/// decreasing `k` and then by label, removes every simplex between the edge
/// `f` and the `k`-simplex `(f_1, ..., f_k)`.
pub fn collapse_ufc_nerve(c: &FiniteCategory) -> Result<RegularSimplicialSet, VerifyError> {
    let ufc = check_unique_factorization(c);
    if !ufc.pass {
        return Err(VerifyError::NotUfc(ufc_witness(&ufc)));
    }
    let f = factorizations(c);
    let mut order: Vec<usize> = (0..c.arrow_count()).filter(|&a| f.lists[a][0].len() >= 2).collect();
    order.sort_by(|&a, &b| {
        f.lists[b][0].len().cmp(&f.lists[a][0].len()).then_with(|| c.arrow(a).label.cmp(&c.arrow(b).label))
    });
    let mut set = RegularSimplicialSet::nerve(c)?;
    for a in order {
        let tau = set.index(&[a]).expect("every arrow is an edge");
        let sigma = set.index(&f.lists[a][0]).expect("a factorization is a composable string");
        set.collapse_pair(tau, sigma)?;
    }
    Ok(set)
}

#[derive(Clone, Debug, Serialize)]
pub struct CollapseSummary {
    pub counts: Vec<usize>,
    pub homology_before: Vec<AbelianGroup>,
    pub homology_after: Vec<AbelianGroup>,
    pub pass: bool,
}

/// Everything the `verify` command reports for one flow category.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub cw_posets: Vec<CwPosetReport>,
    pub finite_directed: bool,
    pub unique_factorization: UfcReport,
    pub level_one_factorization: UfcReport,
    pub nerve_vanishing: bool,
    pub collapse: Option<CollapseSummary>,
    pub collapse_error: Option<String>,
    pub pass: bool,
}

pub fn verify_flow(flow: &FlowCategory, max_dim: usize) -> Result<VerificationReport, VerifyError> {
    let cw_posets: Vec<CwPosetReport> = flow.homs().values().map(|h| check_cw_poset(flow.complex(), h)).collect();
    let cat = flow.export_category()?;
    let finite_directed = check_finite_directed(&cat);
    let unique_factorization = check_unique_factorization(&cat);
    let level_one_factorization = check_unique_factorization(&level_one_category(flow)?);
    let nerve_vanishing = check_nerve_vanishing(&cat, max_dim).unwrap_or(false);
    let (collapse, collapse_error) = match collapse_ufc_nerve(&cat) {
        Ok(set) => {
            let before = RegularSimplicialSet::nerve(&cat)?.chain_complex().homology(Coefficients::Integers);
            let after = set.chain_complex().homology(Coefficients::Integers);
            let counts = set.counts();
            let pass = counts.len() <= 2 && same_homology(&before, &after);
            (Some(CollapseSummary { counts, homology_before: before, homology_after: after, pass }), None)
        }
        Err(e) => (None, Some(e.to_string())),
    };
    let pass = cw_posets.iter().all(|r| r.pass)
        && finite_directed
        && unique_factorization.pass
        && level_one_factorization.pass
        && nerve_vanishing
        && collapse.as_ref().is_some_and(|c| c.pass);
    Ok(VerificationReport {
        cw_posets,
        finite_directed,
        unique_factorization,
        level_one_factorization,
        nerve_vanishing,
        collapse,
        collapse_error,
        pass,
    })
}
