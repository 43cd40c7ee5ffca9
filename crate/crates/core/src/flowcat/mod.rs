//! The discrete flow category: Hom posets of gradient paths between critical
//! cells, composition and factorization.

mod category;
mod digraph;
mod hom;
mod path;

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::complex::RegularCwComplex;
use crate::morse::GradientVectorField;

pub use category::{Arrow, CategoryError, FiniteCategory, Morphism};
pub use digraph::{build_digraph, enumerate_morphisms, HomDigraph};
pub use hom::HomPoset;
pub use path::{algebraic_invariant, compose, covers, factorize, one_edit, rank, AtomSum, MorsePath};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("`{0}` is not a critical cell")]
    NonCriticalEndpoint(String),
    #[error("`{0}` is not a gradient path")]
    InvalidPath(String),
    #[error("cannot compose `{first}` with `{second}`: endpoints differ")]
    EndpointMismatch { first: String, second: String },
    #[error("rank {upper} does not exceed rank {lower} by one")]
    RankMismatch { upper: usize, lower: usize },
    #[error("composite `{0}` does not reduce to a gradient path")]
    Unreducible(String),
    #[error("composite `{0}` is missing from its Hom set")]
    CompositeNotInHom(String),
}

/// Hom poset between two critical cells, by id.
pub fn hom_poset(cx: &RegularCwComplex, v: &GradientVectorField, w: &str, z: &str) -> Result<HomPoset, FlowError> {
    let lookup = |id: &str| {
        let c = cx.index_of(id).ok_or_else(|| FlowError::UnknownCell(id.to_string()))?;
        if v.is_critical(c) {
            Ok(c)
        } else {
            Err(FlowError::NonCriticalEndpoint(id.to_string()))
        }
    };
    let (w, z) = (lookup(w)?, lookup(z)?);
    let g = build_digraph(cx, v);
    Ok(HomPoset::assemble(cx, w, z, enumerate_morphisms(&g, w, z)))
}

/// The flow category of a complex with a gradient field: all non-empty Hom
/// posets between distinct critical cells.
#[derive(Clone, Debug)]
pub struct FlowCategory {
    complex: RegularCwComplex,
    field: GradientVectorField,
    critical: Vec<usize>,
    homs: BTreeMap<(usize, usize), HomPoset>,
}

impl FlowCategory {
    pub fn new(complex: RegularCwComplex, field: GradientVectorField) -> Self {
        let g = build_digraph(&complex, &field);
        let critical = field.critical_cells();
        let mut homs = BTreeMap::new();
        for &w in &critical {
            let mut by_target: BTreeMap<usize, Vec<MorsePath>> = BTreeMap::new();
            for p in g.simple_paths_from(w) {
                let z = p.target();
                if z != w && field.is_critical(z) {
                    by_target.entry(z).or_default().push(p);
                }
            }
            for (z, paths) in by_target {
                homs.insert((w, z), HomPoset::assemble(&complex, w, z, paths));
            }
        }
        FlowCategory { complex, field, critical, homs }
    }

    pub fn complex(&self) -> &RegularCwComplex {
        &self.complex
    }

    pub fn field(&self) -> &GradientVectorField {
        &self.field
    }

    /// Critical cells in id order; these are the objects.
    pub fn critical(&self) -> &[usize] {
        &self.critical
    }

    pub fn hom(&self, w: usize, z: usize) -> Option<&HomPoset> {
        self.homs.get(&(w, z))
    }

    /// Non-empty Hom posets between distinct objects, keyed by `(source, target)`.
    pub fn homs(&self) -> &BTreeMap<(usize, usize), HomPoset> {
        &self.homs
    }

    pub fn morphism_count(&self) -> usize {
        self.homs.values().map(HomPoset::len).sum()
    }

    /// Strict order relations summed over all Hom posets.
    pub fn relation_count(&self) -> usize {
        self.homs.values().map(HomPoset::relation_count).sum()
    }

    pub fn compose(&self, p: &MorsePath, q: &MorsePath) -> Result<MorsePath, FlowError> {
        compose(&self.complex, &self.field, p, q)
    }

    pub fn factorize(&self, p: &MorsePath) -> Vec<MorsePath> {
        factorize(&self.field, p)
    }

    /// Composite `q . p` as an index into its Hom poset.
    pub fn compose_indexed(&self, p: &MorsePath, q: &MorsePath) -> Result<usize, FlowError> {
        let c = self.compose(p, q)?;
        self.hom(c.source(), c.target())
            .and_then(|h| h.index_of(&c))
            .ok_or_else(|| FlowError::CompositeNotInHom(c.arrow(&self.complex)))
    }

    /// The underlying category with the poset structure forgotten. Arrows are
    /// numbered Hom by Hom in key order.
    pub fn export_category(&self) -> Result<FiniteCategory, FlowError> {
        let object_of: HashMap<usize, usize> = self.critical.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let objects = self.critical.iter().map(|&c| self.complex.id(c).to_string()).collect();
        let mut arrows = Vec::new();
        let mut arrow_of: HashMap<(usize, usize, usize), usize> = HashMap::new();
        for (&(w, z), h) in &self.homs {
            for (i, p) in h.morphisms().iter().enumerate() {
                arrow_of.insert((w, z, i), arrows.len());
                arrows.push(Arrow { label: p.arrow(&self.complex), source: object_of[&w], target: object_of[&z] });
            }
        }
        let mut composites = Vec::new();
        for (&(w, v), first) in &self.homs {
            for (&(_, z), second) in self.homs.range((v, 0)..(v + 1, 0)) {
                for (i, p) in first.morphisms().iter().enumerate() {
                    for (j, q) in second.morphisms().iter().enumerate() {
                        let k = self.compose_indexed(p, q)?;
                        composites.push((arrow_of[&(w, v, i)], arrow_of[&(v, z, j)], Some(arrow_of[&(w, z, k)])));
                    }
                }
            }
        }
        Ok(FiniteCategory::new(objects, arrows, composites).expect("flow composition is associative"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn counts(flow: &FlowCategory, w: &str, z: &str) -> usize {
        let cx = flow.complex();
        flow.hom(cx.index_of(w).unwrap(), cx.index_of(z).unwrap()).map_or(0, HomPoset::len)
    }

    #[test]
    fn d3_homs() {
        let (cx, v) = fixtures::d3();
        let flow = FlowCategory::new(cx, v);
        assert_eq!(counts(&flow, "f", "t"), 1);
        assert_eq!(counts(&flow, "t", "x"), 8);
        assert_eq!(counts(&flow, "f", "x"), 21);
        assert_eq!(counts(&flow, "x", "f"), 0);
        assert_eq!(flow.morphism_count(), 30);
        assert_eq!(flow.relation_count(), 60);
    }

    #[test]
    fn d3_rank_profiles() {
        let (cx, v) = fixtures::d3();
        let fx = hom_poset(&cx, &v, "f", "x").unwrap();
        assert_eq!(fx.rank_profile(), vec![7, 10, 4]);
        let tx = hom_poset(&cx, &v, "t", "x").unwrap();
        assert_eq!(tx.rank_profile(), vec![4, 4]);
        assert_eq!(tx.covering().len(), 8);
        assert_eq!(tx.component_count(), 1);
        assert_eq!(hom_poset(&cx, &v, "w", "x").unwrap_err(), FlowError::NonCriticalEndpoint("w".into()));
    }

    #[test]
    fn rank_bounds_and_atom_sums() {
        let (cx, v) = fixtures::d3();
        let fx = hom_poset(&cx, &v, "f", "x").unwrap();
        let sums: std::collections::HashSet<AtomSum> =
            fx.morphisms().iter().map(|p| algebraic_invariant(&cx, p)).collect();
        assert_eq!(sums.len(), 21);
        assert!(fx.ranks().iter().all(|&r| r <= 3));
    }

    #[test]
    fn export_counts() {
        let (cx, v) = fixtures::d3();
        let c = FlowCategory::new(cx, v).export_category().unwrap();
        assert_eq!((c.object_count(), c.arrow_count()), (3, 30));
        let (cx, v) = fixtures::torus();
        let c = FlowCategory::new(cx, v).export_category().unwrap();
        assert_eq!((c.object_count(), c.arrow_count()), (4, 44));
        let (_, edge) = crate::complex::from_simplicial(&[vec![0, 1]]).unwrap();
        let v = GradientVectorField::empty(&edge);
        let c = FlowCategory::new(edge, v).export_category().unwrap();
        assert_eq!((c.object_count(), c.arrow_count()), (3, 2));
    }

    #[test]
    fn torus_homs() {
        let (cx, v) = fixtures::torus();
        let arrows = |w: &str, z: &str| -> Vec<String> {
            hom_poset(&cx, &v, w, z).unwrap().morphisms().iter().map(|p| p.arrow(&cx)).collect()
        };
        assert_eq!(arrows("A", "epsilon"), vec!["A>epsilon", "A>eta<B>epsilon"]);
        assert_eq!(arrows("alpha", "a"), vec!["alpha>a", "alpha>b<beta>a"]);
        assert_eq!(arrows("epsilon", "a"), vec!["epsilon>a", "epsilon>c<zeta>a"]);
        let aa = hom_poset(&cx, &v, "A", "a").unwrap();
        assert_eq!((aa.len(), aa.component_count()), (36, 4));
    }

    #[test]
    fn dot_and_json() {
        let (cx, v) = fixtures::d3();
        let tx = hom_poset(&cx, &v, "t", "x").unwrap();
        let dot = tx.to_dot(&cx);
        assert!(dot.contains("cluster_rank_1"));
        assert!(dot.contains("\"t>x\" -> \"t>w>x\";"));
        let j = tx.to_json(&cx);
        assert_eq!(j["morphisms"].as_array().unwrap().len(), 8);
        assert_eq!(j["covering"].as_array().unwrap().len(), 8);
    }
}
