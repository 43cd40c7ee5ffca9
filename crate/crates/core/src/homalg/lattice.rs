//! Integer row echelon forms on sparse vectors, and the lattice operations
//! built on them: kernels, images, preimages and quotient invariants.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{combine, scale, unit, SparseMatrix, SparseVec};

#[derive(Clone, Debug)]
struct Row {
    vec: SparseVec,
    tag: SparseVec,
}

impl Row {
    fn lead(&self) -> Option<usize> {
        self.vec.first().map(|e| e.0)
    }

    fn lead_value(&self) -> &BigInt {
        &self.vec[0].1
    }
}

/// Result of unimodular row reduction of a list of generators.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Basis of the generated lattice; each row's leading column is strictly
    /// greater than the previous row's, and leading entries are positive.
    pub rows: Vec<SparseVec>,
    /// For each basis row, its expression in terms of the input generators.
    pub row_tags: Vec<SparseVec>,
    /// A basis of the relation lattice among the generators.
    pub relations: Vec<SparseVec>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots_are_units(&self) -> bool {
        self.rows.iter().all(|r| r[0].1.is_one())
    }

    /// Coordinates of `v` in the echelon basis, or `None` if `v` is not in the lattice.
    pub fn coordinates(&self, v: &[(usize, BigInt)]) -> Option<SparseVec> {
        let mut rest: SparseVec = v.to_vec();
        let mut coords = Vec::new();
        for (k, row) in self.rows.iter().enumerate() {
            let (pc, pv) = (&row[0].0, &row[0].1);
            let Some(pos) = rest.iter().position(|e| e.0 >= *pc) else { break };
            if pos > 0 {
                // nonzero entry left of this pivot that no remaining row can clear
                return None;
            }
            if rest[0].0 != *pc {
                continue;
            }
            let (q, r) = rest[0].1.div_rem(pv);
            if !r.is_zero() {
                return None;
            }
            rest = combine(&BigInt::one(), &rest, &(-&q), row);
            coords.push((k, q));
        }
        if rest.is_empty() {
            Some(coords)
        } else {
            None
        }
    }
}

fn bucket(buckets: &mut BTreeMap<usize, Vec<Row>>, zeros: &mut Vec<Row>, row: Row) {
    match row.lead() {
        Some(c) => buckets.entry(c).or_default().push(row),
        None => zeros.push(row),
    }
}

/// Unimodular row reduction of `generators` (each a vector in `Z^n`).
///
/// When `track` is false the tags and relations are left empty.
pub fn echelon(generators: &[SparseVec], track: bool) -> Echelon {
    let mut buckets: BTreeMap<usize, Vec<Row>> = BTreeMap::new();
    let mut zeros = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        let tag = if track { unit(i) } else { Vec::new() };
        bucket(&mut buckets, &mut zeros, Row { vec: g.clone(), tag });
    }
    let mut rows = Vec::new();
    let mut row_tags = Vec::new();
    while let Some((_, mut group)) = buckets.pop_first() {
        // pivot: smallest leading magnitude, then sparsest
        let best = (0..group.len())
            .min_by(|&a, &b| {
                let (ra, rb) = (&group[a], &group[b]);
                ra.lead_value().abs().cmp(&rb.lead_value().abs()).then(ra.vec.len().cmp(&rb.vec.len()))
            })
            .expect("non-empty bucket");
        let mut pivot = group.swap_remove(best);
        for mut other in group {
            let a = pivot.lead_value().clone();
            let b = other.lead_value().clone();
            let (q, r) = b.div_rem(&a);
            if r.is_zero() {
                let nq = -q;
                other.vec = combine(&BigInt::one(), &other.vec, &nq, &pivot.vec);
                if track {
                    other.tag = combine(&BigInt::one(), &other.tag, &nq, &pivot.tag);
                }
            } else {
                let ext = a.extended_gcd(&b);
                let (g, s, t) = (ext.gcd, ext.x, ext.y);
                let bg = &b / &g;
                let ag = -(&a / &g);
                let new_pivot = combine(&s, &pivot.vec, &t, &other.vec);
                let new_other = combine(&bg, &pivot.vec, &ag, &other.vec);
                if track {
                    let pt = combine(&s, &pivot.tag, &t, &other.tag);
                    let ot = combine(&bg, &pivot.tag, &ag, &other.tag);
                    pivot.tag = pt;
                    other.tag = ot;
                }
                pivot.vec = new_pivot;
                other.vec = new_other;
            }
            debug_assert!(other.lead() != pivot.lead());
            bucket(&mut buckets, &mut zeros, other);
        }
        if pivot.lead_value().is_negative() {
            let m = BigInt::from(-1);
            pivot.vec = scale(&m, &pivot.vec);
            pivot.tag = scale(&m, &pivot.tag);
        }
        rows.push(pivot.vec);
        row_tags.push(pivot.tag);
    }
    let relations = if track { zeros.into_iter().map(|r| r.tag).collect() } else { Vec::new() };
    Echelon { rows, row_tags, relations }
}

/// A Z-basis of the kernel of `m`, as vectors in its column space.
pub fn kernel(m: &SparseMatrix) -> Vec<SparseVec> {
    echelon(m.columns(), true).relations
}

/// Nonzero invariant factors of `m` (the SNF diagonal), ascending along the divisibility chain.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let mut e = echelon(m.columns(), false);
    if e.pivots_are_units() {
        return vec![BigInt::one(); e.rank()];
    }
    // alternate row and column reduction until diagonal
    loop {
        let diagonal = e.rows.iter().all(|r| r.len() == 1);
        if diagonal {
            break;
        }
        let n = e.rows.iter().map(|r| r.last().map_or(0, |x| x.0 + 1)).max().unwrap_or(0);
        let t = SparseMatrix::from_columns(n, e.rows.clone()).transpose();
        e = echelon(t.columns(), false);
    }
    let mut d: Vec<BigInt> = e.rows.iter().map(|r| r[0].1.abs()).collect();
    normalize_diagonal(&mut d);
    d
}

/// Turns any diagonal into the divisibility-chain form with the same cokernel.
pub(crate) fn normalize_diagonal(d: &mut [BigInt]) {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            if g.is_zero() {
                continue;
            }
            let l = &d[i] / &g * &d[j];
            d[i] = g;
            d[j] = l.abs();
        }
    }
}

/// Invariants of the quotient `sub_outer / sub_inner` of two lattices in `Z^n`
/// given by generators, with `sub_inner` contained in `sub_outer`.
///
/// Returns `(free_rank, torsion)`; panics if the containment fails.
pub fn quotient_invariants(outer: &[SparseVec], inner: &[SparseVec]) -> (usize, Vec<BigInt>) {
    let basis = echelon(outer, false);
    let k = basis.rank();
    let coords: Vec<SparseVec> =
        inner.iter().map(|v| basis.coordinates(v).expect("inner lattice not contained in outer lattice")).collect();
    let m = SparseMatrix::from_columns(k, coords);
    let d = invariant_factors(&m);
    let torsion = d.iter().filter(|x| !x.is_one()).cloned().collect();
    (k - d.len(), torsion)
}

/// Generators of `{ x in span(basis) : f(x) in target }`, returned in ambient coordinates.
///
/// `basis` spans a sublattice `L` of the domain of `f`, `target` generates a
/// sublattice of its codomain.
pub fn preimage_in(basis: &[SparseVec], f: &SparseMatrix, target: &[SparseVec]) -> Vec<SparseVec> {
    // kernel of (y, u) -> f(B y) - T u, projected to y
    let k = basis.len();
    let mut gens: Vec<SparseVec> = basis.iter().map(|b| f.apply(b)).collect();
    let minus = BigInt::from(-1);
    gens.extend(target.iter().map(|t| scale(&minus, t)));
    let rel = echelon(&gens, true).relations;
    rel.into_iter()
        .map(|r| {
            let mut acc: SparseVec = Vec::new();
            for (i, c) in r.iter().filter(|(i, _)| *i < k) {
                acc = combine(&BigInt::one(), &acc, c, &basis[*i]);
            }
            acc
        })
        .filter(|v| !v.is_empty())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::matrix::{from_i64s, IntegerMatrix};

    fn m(rows: &[Vec<i64>]) -> SparseMatrix {
        IntegerMatrix::from_rows(rows).to_sparse()
    }

    #[test]
    fn invariant_factors_small_cases() {
        assert_eq!(invariant_factors(&m(&[vec![2, 4], vec![6, 8]])), vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(invariant_factors(&m(&[vec![0, 0], vec![0, 0]])), Vec::<BigInt>::new());
        assert_eq!(invariant_factors(&m(&[vec![2, 0], vec![0, 3]])), vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(invariant_factors(&m(&[vec![1, 0], vec![0, 1]])), vec![BigInt::one(); 2]);
    }

    #[test]
    fn kernel_of_circle_boundary() {
        // edges 01, 12, 02 over vertices 0, 1, 2
        let d = m(&[vec![-1, 0, -1], vec![1, -1, 0], vec![0, 1, 1]]);
        let k = kernel(&d);
        assert_eq!(k.len(), 1);
        assert!(d.apply(&k[0]).is_empty());
    }

    #[test]
    fn coordinates_detect_non_members() {
        let e = echelon(&[from_i64s(&[(0, 2)]), from_i64s(&[(1, 1)])], false);
        assert!(e.coordinates(&from_i64s(&[(0, 4), (1, 3)])).is_some());
        assert!(e.coordinates(&from_i64s(&[(0, 1)])).is_none());
    }

    #[test]
    fn quotient_of_2z_in_z() {
        let (free, torsion) = quotient_invariants(&[from_i64s(&[(0, 1)])], &[from_i64s(&[(0, 2)])]);
        assert_eq!(free, 0);
        assert_eq!(torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn preimage_of_even_sublattice() {
        // f = 1x1 identity, basis Z, target 2Z -> preimage 2Z
        let f = m(&[vec![1]]);
        let pre = preimage_in(&[unit(0)], &f, &[from_i64s(&[(0, 2)])]);
        let (free, torsion) = quotient_invariants(&[unit(0)], &pre);
        assert_eq!((free, torsion), (0, vec![BigInt::from(2)]));
    }
}
