use std::collections::HashMap;
use std::fmt::Write;

use serde_json::{json, Value};

use crate::complex::{Poset, RegularCwComplex};

use super::path::{one_edit, rank, MorsePath};

/// Graded poset of morphisms between two cells. Covering pairs are
/// `(higher rank, lower rank)`; the higher-rank path is the greater element.
#[derive(Clone, Debug)]
pub struct HomPoset {
    source: usize,
    target: usize,
    morphisms: Vec<MorsePath>,
    ranks: Vec<usize>,
    covering: Vec<(usize, usize)>,
    index: HashMap<MorsePath, usize>,
    order: Poset,
}

impl HomPoset {
    /// Ranks every path and compares adjacent rank layers only.
    pub fn assemble(cx: &RegularCwComplex, source: usize, target: usize, morphisms: Vec<MorsePath>) -> Self {
        let ranks: Vec<usize> = morphisms.iter().map(|p| rank(cx, p)).collect();
        let top = ranks.iter().copied().max().unwrap_or(0);
        let mut layers: Vec<Vec<usize>> = vec![Vec::new(); top + 1];
        for (i, &r) in ranks.iter().enumerate() {
            layers[r].push(i);
        }
        let mut covering = Vec::new();
        for r in 1..layers.len() {
            for &hi in &layers[r] {
                for &lo in &layers[r - 1] {
                    if one_edit(morphisms[hi].cells(), morphisms[lo].cells()) {
                        covering.push((hi, lo));
                    }
                }
            }
        }
        covering.sort_unstable();
        let index = morphisms.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let labels = morphisms.iter().map(|p| p.arrow(cx)).collect();
        let order = Poset::new(labels, covering.clone()).expect("rank strictly drops along covering pairs");
        HomPoset { source, target, morphisms, ranks, covering, index, order }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn len(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }

    pub fn morphisms(&self) -> &[MorsePath] {
        &self.morphisms
    }

    pub fn morphism(&self, i: usize) -> &MorsePath {
        &self.morphisms[i]
    }

    pub fn index_of(&self, p: &MorsePath) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Count of morphisms in each rank.
    pub fn rank_profile(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for &r in &self.ranks {
            if out.len() <= r {
                out.resize(r + 1, 0);
            }
            out[r] += 1;
        }
        out
    }

    pub fn covering(&self) -> &[(usize, usize)] {
        &self.covering
    }

    /// The full order (closure of the covering relation); labels are arrow strings.
    pub fn poset(&self) -> &Poset {
        &self.order
    }

    /// `a > b` in the closure of covering.
    pub fn greater(&self, a: usize, b: usize) -> bool {
        self.order.less(b, a)
    }

    /// Number of strict relations `a > b`.
    pub fn relation_count(&self) -> usize {
        self.order.relation_count()
    }

    pub fn component_count(&self) -> usize {
        self.order.component_count()
    }

    pub fn to_json(&self, cx: &RegularCwComplex) -> Value {
        let labels = self.order.labels();
        json!({
            "source": cx.id(self.source),
            "target": cx.id(self.target),
            "morphisms": labels,
            "cells": self.morphisms.iter().map(|p| p.ids(cx)).collect::<Vec<_>>(),
            "ranks": self.ranks,
            "covering": self.covering.iter().map(|&(a, b)| [&labels[a], &labels[b]]).collect::<Vec<_>>(),
        })
    }

    /// Hasse diagram with one cluster per rank, edges from greater to lesser.
    pub fn to_dot(&self, cx: &RegularCwComplex) -> String {
        let labels = self.order.labels();
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"Hom({},{})\" {{", cx.id(self.source), cx.id(self.target));
        let _ = writeln!(s, "  rankdir=TB;");
        let _ = writeln!(s, "  node [shape=box];");
        for (r, count) in self.rank_profile().iter().enumerate().rev() {
            if *count == 0 {
                continue;
            }
            let _ = writeln!(s, "  subgraph cluster_rank_{r} {{");
            let _ = writeln!(s, "    label=\"rank {r}\";");
            for (i, _) in self.ranks.iter().enumerate().filter(|(_, &q)| q == r) {
                let _ = writeln!(s, "    \"{}\";", labels[i]);
            }
            let _ = writeln!(s, "  }}");
        }
        for &(a, b) in &self.covering {
            let _ = writeln!(s, "  \"{}\" -> \"{}\";", labels[a], labels[b]);
        }
        s.push_str("}\n");
        s
    }
}
