use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::lattice::invariant_factors;
use super::matrix::SparseMatrix;
use super::rational::{columns_q, rank_q};
use super::HomalgError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    #[default]
    Integers,
    Rationals,
}

impl Coefficients {
    pub fn symbol(self) -> &'static str {
        match self {
            Coefficients::Integers => "Z",
            Coefficients::Rationals => "Q",
        }
    }
}

/// A finitely generated abelian group `Z^free + Z/t1 + ... + Z/tk`
/// (or a rational vector space when `torsion` is empty and the coefficients are Q).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free: usize,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { free: rank, torsion: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }

    pub(crate) fn from_factors(free: usize, torsion: &[BigInt]) -> Self {
        let mut torsion: Vec<u64> =
            torsion.iter().map(|t| t.to_u64().expect("torsion coefficient exceeds u64")).filter(|&t| t > 1).collect();
        torsion.sort_unstable();
        AbelianGroup { free, torsion }
    }

    /// Drops torsion, as tensoring with Q does.
    pub fn rationalize(&self) -> Self {
        Self::free(self.free)
    }

    /// Renders as `0`, `Z`, `Z^3`, `Z + Z/2`, `Q^2`, ...
    pub fn render(&self, coeff: Coefficients) -> String {
        let sym = coeff.symbol();
        let mut parts = Vec::new();
        match self.free {
            0 => {}
            1 => parts.push(sym.to_string()),
            n => parts.push(format!("{sym}^{n}")),
        }
        if coeff == Coefficients::Integers {
            parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(Coefficients::Integers))
    }
}

/// Renders a homology list as `Z, 0, Z`.
pub fn render_groups(groups: &[AbelianGroup], coeff: Coefficients) -> String {
    groups.iter().map(|g| g.render(coeff)).collect::<Vec<_>>().join(", ")
}

/// Pads two homology lists with zero groups to a common length and compares them.
pub fn same_homology(a: &[AbelianGroup], b: &[AbelianGroup]) -> bool {
    let n = a.len().max(b.len());
    let zero = AbelianGroup::zero();
    (0..n).all(|i| a.get(i).unwrap_or(&zero) == b.get(i).unwrap_or(&zero))
}

/// Finite free chain complex `C_top -> ... -> C_0` with labelled bases.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    labels: Vec<Vec<String>>,
    // boundaries[n] : C_n -> C_{n-1}; boundaries[0] is the zero map to nothing
    boundaries: Vec<SparseMatrix>,
    truncated: bool,
}

impl ChainComplex {
    /// `boundaries[n - 1]` is `d_n : C_n -> C_{n-1}` for `n >= 1`.
    ///
    /// Checks shapes and `d_n d_{n+1} = 0`.
    pub fn new(labels: Vec<Vec<String>>, boundaries: Vec<SparseMatrix>) -> Result<Self, HomalgError> {
        let expected = labels.len().saturating_sub(1);
        if boundaries.len() != expected {
            return Err(HomalgError::ShapeMismatch { degree: boundaries.len() });
        }
        let mut all = Vec::with_capacity(labels.len());
        if let Some(l0) = labels.first() {
            all.push(SparseMatrix::zeros(0, l0.len()));
        }
        for (i, d) in boundaries.into_iter().enumerate() {
            let n = i + 1;
            if d.ncols() != labels[n].len() || d.nrows() != labels[n - 1].len() {
                return Err(HomalgError::ShapeMismatch { degree: n });
            }
            all.push(d);
        }
        for n in 1..all.len().saturating_sub(1) {
            if !all[n].compose(&all[n + 1]).is_zero() {
                return Err(HomalgError::BoundaryNotNilpotent { degree: n + 1 });
            }
        }
        Ok(ChainComplex { labels, boundaries: all, truncated: false })
    }

    /// Marks the top degree as truncated: `d_{top+1}` was never built, so the
    /// reported top homology only bounds the true group from above.
    pub fn with_truncation(mut self, truncated: bool) -> Self {
        self.truncated = truncated;
        self
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.labels.len().checked_sub(1)
    }

    pub fn rank(&self, n: usize) -> usize {
        self.labels.get(n).map_or(0, Vec::len)
    }

    pub fn labels(&self, n: usize) -> &[String] {
        self.labels.get(n).map_or(&[], Vec::as_slice)
    }

    /// `d_n : C_n -> C_{n-1}`; `None` beyond the top degree.
    pub fn boundary(&self, n: usize) -> Option<&SparseMatrix> {
        self.boundaries.get(n)
    }

    pub fn homology(&self, coeff: Coefficients) -> Vec<AbelianGroup> {
        match coeff {
            Coefficients::Integers => self.integral_homology(),
            Coefficients::Rationals => self.rational_homology(),
        }
    }

    fn integral_homology(&self) -> Vec<AbelianGroup> {
        let factors: Vec<Vec<BigInt>> = self.boundaries.iter().map(invariant_factors).collect();
        (0..self.labels.len())
            .map(|n| {
                let rk_out = factors[n].len();
                let (rk_in, tors) = match factors.get(n + 1) {
                    Some(f) => (f.len(), f.as_slice()),
                    None => (0, &[][..]),
                };
                AbelianGroup::from_factors(self.rank(n) - rk_out - rk_in, tors)
            })
            .collect()
    }

    fn rational_homology(&self) -> Vec<AbelianGroup> {
        let ranks: Vec<usize> = self.boundaries.iter().map(|d| rank_q(&columns_q(d))).collect();
        (0..self.labels.len())
            .map(|n| {
                let rk_in = ranks.get(n + 1).copied().unwrap_or(0);
                AbelianGroup::free(self.rank(n) - ranks[n] - rk_in)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::matrix::IntegerMatrix;

    fn labels(sizes: &[usize]) -> Vec<Vec<String>> {
        sizes.iter().map(|&n| (0..n).map(|i| i.to_string()).collect()).collect()
    }

    #[test]
    fn triangle_boundary_is_a_circle() {
        // vertices 0,1,2; edges 01, 02, 12
        let d1 = IntegerMatrix::from_rows(&[vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]]);
        let c = ChainComplex::new(labels(&[3, 3]), vec![d1.to_sparse()]).unwrap();
        let h = c.homology(Coefficients::Integers);
        assert_eq!(h, vec![AbelianGroup::free(1), AbelianGroup::free(1)]);
        assert_eq!(c.homology(Coefficients::Rationals), h);
    }

    #[test]
    fn zero_boundaries_give_free_chains() {
        let c = ChainComplex::new(labels(&[2, 3]), vec![SparseMatrix::zeros(2, 3)]).unwrap();
        assert_eq!(c.homology(Coefficients::Integers), vec![AbelianGroup::free(2), AbelianGroup::free(3)]);
    }

    #[test]
    fn torsion_is_reported() {
        // Z --2--> Z
        let d1 = IntegerMatrix::from_rows(&[vec![2]]);
        let c = ChainComplex::new(labels(&[1, 1]), vec![d1.to_sparse()]).unwrap();
        let h = c.homology(Coefficients::Integers);
        assert_eq!(h[0], AbelianGroup { free: 0, torsion: vec![2] });
        assert_eq!(h[1], AbelianGroup::zero());
        assert_eq!(c.homology(Coefficients::Rationals)[0], AbelianGroup::zero());
        assert_eq!(h[0].render(Coefficients::Integers), "Z/2");
    }

    #[test]
    fn rejects_non_nilpotent_boundary() {
        let d1 = IntegerMatrix::from_rows(&[vec![1]]).to_sparse();
        let d2 = IntegerMatrix::from_rows(&[vec![1]]).to_sparse();
        assert!(matches!(
            ChainComplex::new(labels(&[1, 1, 1]), vec![d1, d2]),
            Err(HomalgError::BoundaryNotNilpotent { degree: 2 })
        ));
    }

    #[test]
    fn rendering() {
        assert_eq!(AbelianGroup::free(2).render(Coefficients::Rationals), "Q^2");
        assert_eq!(AbelianGroup::zero().render(Coefficients::Integers), "0");
        assert_eq!(render_groups(&[AbelianGroup::free(1), AbelianGroup::zero()], Coefficients::Integers), "Z, 0");
    }
}
