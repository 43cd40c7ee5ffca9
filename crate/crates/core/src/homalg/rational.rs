//! Gaussian elimination over the rationals. Kept separate from the integer
//! lattice code so rational ranks serve as an independent cross-check.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::SparseMatrix;

pub type QVec = Vec<(usize, BigRational)>;

fn axpy(v: &QVec, k: &BigRational, w: &QVec) -> QVec {
    // v + k * w
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        if j >= w.len() || (i < v.len() && v[i].0 < w[j].0) {
            out.push(v[i].clone());
            i += 1;
        } else if i >= v.len() || w[j].0 < v[i].0 {
            out.push((w[j].0, k * &w[j].1));
            j += 1;
        } else {
            let s = &v[i].1 + k * &w[j].1;
            if !s.is_zero() {
                out.push((v[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn to_q(v: &[(usize, BigInt)]) -> QVec {
    v.iter().map(|(i, x)| (*i, BigRational::from_integer(x.clone()))).collect()
}

pub fn columns_q(m: &SparseMatrix) -> Vec<QVec> {
    m.columns().iter().map(|c| to_q(c)).collect()
}

/// `m * v` over the rationals.
pub fn apply_q(m: &SparseMatrix, v: &QVec) -> QVec {
    let mut acc = Vec::new();
    for (j, x) in v {
        acc = axpy(&acc, x, &to_q(m.column(*j)));
    }
    acc
}

/// Reduced basis of the span of `vectors` plus a basis of the linear relations among them.
pub struct QEchelon {
    pub basis: Vec<QVec>,
    pub relations: Vec<QVec>,
}

pub fn q_echelon(vectors: &[QVec], track: bool) -> QEchelon {
    // pivot column -> (row, tag)
    let mut pivots: BTreeMap<usize, (QVec, QVec)> = BTreeMap::new();
    let mut relations = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        let mut row = v.clone();
        let mut tag: QVec = if track { vec![(i, BigRational::one())] } else { Vec::new() };
        while let Some((prow, ptag)) = row.first().and_then(|(c, _)| pivots.get(c)) {
            // pivot rows are normalized to leading 1
            let k = -row[0].1.clone();
            row = axpy(&row, &k, prow);
            if track {
                tag = axpy(&tag, &k, ptag);
            }
        }
        match row.first() {
            Some((c, x)) => {
                let inv = x.recip();
                let c = *c;
                let row: QVec = row.into_iter().map(|(j, y)| (j, y * &inv)).collect();
                let tag: QVec = tag.into_iter().map(|(j, y)| (j, y * &inv)).collect();
                pivots.insert(c, (row, tag));
            }
            None => {
                if track {
                    relations.push(tag);
                }
            }
        }
    }
    QEchelon { basis: pivots.into_values().map(|(r, _)| r).collect(), relations }
}

pub fn rank_q(vectors: &[QVec]) -> usize {
    q_echelon(vectors, false).basis.len()
}

/// Basis of the kernel of `m` over the rationals.
pub fn kernel_q(m: &SparseMatrix) -> Vec<QVec> {
    q_echelon(&columns_q(m), true).relations
}
