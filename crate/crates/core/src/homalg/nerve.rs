//! Nondegenerate nerves: order complexes of posets and nerves of finite
//! directed categories.

use std::collections::HashMap;
use std::hash::Hash;

use super::chain::{AbelianGroup, ChainComplex, Coefficients};
use super::matrix::{from_i64s, SparseMatrix};
use super::HomalgError;
use crate::complex::Poset;
use crate::flowcat::FiniteCategory;

/// Assembles a chain complex from per-degree bases and a face function that
/// returns `(face, sign)` pairs; faces missing from the basis below are a bug.
fn assemble<K: Clone + Eq + Hash>(
    levels: Vec<Vec<K>>,
    faces: impl Fn(&K) -> Vec<(K, i64)>,
    label: impl Fn(&K) -> String,
    truncated: bool,
) -> ChainComplex {
    let index: Vec<HashMap<&K, usize>> =
        levels.iter().map(|l| l.iter().enumerate().map(|(i, k)| (k, i)).collect()).collect();
    let mut boundaries = Vec::new();
    for n in 1..levels.len() {
        let cols = levels[n]
            .iter()
            .map(|s| {
                let entries: Vec<(usize, i64)> =
                    faces(s).into_iter().map(|(f, sign)| (index[n - 1][&f], sign)).collect();
                from_i64s(&entries)
            })
            .collect();
        boundaries.push(SparseMatrix::from_columns(levels[n - 1].len(), cols));
    }
    let labels = levels.iter().map(|l| l.iter().map(&label).collect()).collect();
    ChainComplex::new(labels, boundaries).expect("nerve boundary squares to zero").with_truncation(truncated)
}

fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Order complex of `p` up to dimension `max_dim`.
pub fn order_complex(p: &Poset, max_dim: usize) -> ChainComplex {
    let mut levels = p.chains(max_dim + 1);
    let truncated = !levels[max_dim + 1].is_empty();
    levels.truncate(max_dim + 1);
    while levels.len() > 1 && levels.last().is_some_and(Vec::is_empty) {
        levels.pop();
    }
    let faces = |s: &Vec<usize>| {
        if s.len() == 1 {
            return Vec::new();
        }
        (0..s.len())
            .map(|i| {
                let mut t = s.clone();
                t.remove(i);
                (t, sign(i))
            })
            .collect()
    };
    let label = |s: &Vec<usize>| s.iter().map(|&x| p.label(x)).collect::<Vec<_>>().join("<");
    assemble(levels, faces, label, truncated)
}

/// Homology of the full order complex of `p`. Empty poset: empty list.
pub fn order_complex_homology(p: &Poset, coeff: Coefficients) -> Vec<AbelianGroup> {
    if p.is_empty() {
        return Vec::new();
    }
    let height = longest_chain(p);
    order_complex(p, height).homology(coeff)
}

fn longest_chain(p: &Poset) -> usize {
    // number of edges in a longest chain, via the down-sets
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&x| p.strictly_below(x).len());
    let mut height = vec![0usize; p.len()];
    for &x in &order {
        height[x] = p.strictly_below(x).iter().map(|&y| height[y] + 1).max().unwrap_or(0);
    }
    height.into_iter().max().unwrap_or(0)
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Simplex {
    // degree 0 holds one object index, degree n >= 1 holds n arrow indices
    degree: usize,
    items: Vec<usize>,
}

/// Nondegenerate nerve of a finite directed category up to dimension `max_dim`:
/// degree `n` is spanned by composable strings of `n` non-identity arrows.
pub fn nerve_chain_complex(c: &FiniteCategory, max_dim: usize) -> Result<ChainComplex, HomalgError> {
    if let Some(witness) = c.directedness_violation() {
        return Err(HomalgError::NotFiniteDirected(witness));
    }
    let strings = c.composable_strings(max_dim + 1);
    let truncated = strings.get(max_dim + 1).is_some_and(|s| !s.is_empty());
    let mut levels: Vec<Vec<Simplex>> =
        vec![(0..c.object_count()).map(|o| Simplex { degree: 0, items: vec![o] }).collect()];
    for (n, level) in strings.into_iter().enumerate().skip(1).take(max_dim) {
        levels.push(level.into_iter().map(|items| Simplex { degree: n, items }).collect());
    }
    while levels.len() > 1 && levels.last().is_some_and(Vec::is_empty) {
        levels.pop();
    }
    let faces = |k: &Simplex| -> Vec<(Simplex, i64)> {
        let s = &k.items;
        let raw: Vec<(Vec<usize>, i64)> = match k.degree {
            0 => Vec::new(),
            1 => {
                let a = c.arrow(s[0]);
                vec![(vec![a.target], 1), (vec![a.source], -1)]
            }
            n => (0..=n)
                .map(|i| {
                    let face = if i == 0 {
                        s[1..].to_vec()
                    } else if i == n {
                        s[..n - 1].to_vec()
                    } else {
                        // in a directed category a composite of non-identities is never an identity
                        let mut t = s[..i - 1].to_vec();
                        t.push(c.composite(s[i - 1], s[i]).expect("composite of non-identities"));
                        t.extend_from_slice(&s[i + 1..]);
                        t
                    };
                    (face, sign(i))
                })
                .collect(),
        };
        raw.into_iter().map(|(items, sg)| (Simplex { degree: k.degree - 1, items }, sg)).collect()
    };
    let label = |k: &Simplex| {
        if k.degree == 0 {
            c.object(k.items[0]).to_string()
        } else {
            k.items.iter().map(|&a| c.arrow(a).label.as_str()).collect::<Vec<_>>().join(" ; ")
        }
    };
    Ok(assemble(levels, faces, label, truncated))
}
