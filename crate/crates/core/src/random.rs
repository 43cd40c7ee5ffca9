//! Seeded random simplicial complexes and acyclic matchings.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{from_simplicial, RegularCwComplex, SimplicialComplex};
use crate::morse::{check_acyclic, GradientVectorField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random simplicial complex on at most five vertices with at most `max_cells` simplices.
pub fn random_simplicial<R: Rng>(rng: &mut R, max_cells: usize) -> (SimplicialComplex, RegularCwComplex) {
    assert!(max_cells >= 1);
    let n = rng.gen_range(1..=5u64);
    let vertices: Vec<u64> = (0..n).collect();
    let mut facets: Vec<Vec<u64>> = vec![vec![0]];
    let mut current = from_simplicial(&facets).expect("non-empty facet");
    for _ in 0..12 {
        let k = rng.gen_range(1..=vertices.len().min(4));
        let mut facet: Vec<u64> = vertices.choose_multiple(rng, k).copied().collect();
        facet.sort_unstable();
        facets.push(facet);
        match from_simplicial(&facets) {
            Ok(next) if next.0.len() <= max_cells => current = next,
            _ => {
                facets.pop();
            }
        }
    }
    current
}

/// A uniformly shuffled greedy maximal matching on the covering pairs, as `(lower, upper)`.
pub fn random_matching<R: Rng>(rng: &mut R, cx: &RegularCwComplex) -> Vec<(usize, usize)> {
    let mut edges: Vec<(usize, usize)> = cx.covering_pairs().map(|(u, l)| (l, u)).collect();
    edges.shuffle(rng);
    let mut used = vec![false; cx.len()];
    let mut out = Vec::new();
    for (l, u) in edges {
        if !used[l] && !used[u] {
            used[l] = true;
            used[u] = true;
            out.push((l, u));
        }
    }
    out.sort_unstable();
    out
}

/// A random gradient field: maximal matchings are drawn until one is acyclic,
/// falling back to greedy acyclic insertion after 64 rejections. Each pair is
/// then kept with probability `keep`; any sub-matching of an acyclic one is acyclic.
pub fn random_acyclic_field<R: Rng>(rng: &mut R, cx: &RegularCwComplex, keep: f64) -> GradientVectorField {
    let as_ids = |pairs: &[(usize, usize)]| -> Vec<(String, String)> {
        pairs.iter().map(|&(l, u)| (cx.id(l).to_string(), cx.id(u).to_string())).collect()
    };
    let mut chosen = None;
    for _ in 0..64 {
        let m = random_matching(rng, cx);
        if check_acyclic(cx, &as_ids(&m)).is_ok() {
            chosen = Some(m);
            break;
        }
    }
    let chosen = chosen.unwrap_or_else(|| {
        let mut edges: Vec<(usize, usize)> = cx.covering_pairs().map(|(u, l)| (l, u)).collect();
        edges.shuffle(rng);
        let mut chosen: Vec<(usize, usize)> = Vec::new();
        for e in edges {
            chosen.push(e);
            if check_acyclic(cx, &as_ids(&chosen)).is_err() {
                chosen.pop();
            }
        }
        chosen
    });
    let kept: Vec<(usize, usize)> = chosen.into_iter().filter(|_| rng.gen_bool(keep)).collect();
    check_acyclic(cx, &as_ids(&kept)).expect("sub-matching of an acyclic matching is acyclic")
}

/// Fraction of matched pairs kept by [`random_instance`]; below 1 so that
/// instances have several critical cells and non-trivial Hom posets.
pub const KEEP_PAIRS: f64 = 0.6;

/// A random complex with `<= max_cells` cells together with a random gradient field.
pub fn random_instance(seed: u64, max_cells: usize) -> (RegularCwComplex, GradientVectorField) {
    let mut r = rng(seed);
    let (_, cx) = random_simplicial(&mut r, max_cells);
    let v = random_acyclic_field(&mut r, &cx, KEEP_PAIRS);
    (cx, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_respect_the_size_bound() {
        for seed in 0..40 {
            let (cx, v) = random_instance(seed, 20);
            assert!(cx.len() <= 20 && !cx.is_empty());
            assert!(v.pairs().len() * 2 <= cx.len());
        }
    }

    #[test]
    fn generation_is_reproducible() {
        let (a, va) = random_instance(7, 20);
        let (b, vb) = random_instance(7, 20);
        assert_eq!(a, b);
        assert_eq!(va, vb);
    }
}
