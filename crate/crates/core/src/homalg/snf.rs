use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntegerMatrix;

/// `diagonal = left * m * right` with `left`, `right` unimodular.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub diagonal: IntegerMatrix,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let n = self.diagonal.rows().min(self.diagonal.cols());
        (0..n).map(|i| self.diagonal.get(i, i).clone()).take_while(|x| !x.is_zero()).collect()
    }

    /// Checks `left * m * right == diagonal`, unimodularity of both transforms,
    /// diagonal shape, and the divisibility chain.
    pub fn verify(&self, m: &IntegerMatrix) -> bool {
        if self.left.mul(m).mul(&self.right) != self.diagonal {
            return false;
        }
        if !self.left.determinant().abs().is_one() || !self.right.determinant().abs().is_one() {
            return false;
        }
        let d = &self.diagonal;
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i != j && !d.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        let diag: Vec<BigInt> = (0..d.rows().min(d.cols())).map(|i| d.get(i, i).clone()).collect();
        diag.iter().all(|x| !x.is_negative())
            && diag.windows(2).all(|w| if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) })
    }
}

/// Dense Smith normal form with transforms.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntegerMatrix::identity(rows);
    let mut right = IntegerMatrix::identity(cols);

    for t in 0..rows.min(cols) {
        // smallest nonzero entry of the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        left.swap_rows(t, pi);
        a.swap_cols(t, pj);
        right.swap_cols(t, pj);

        loop {
            let mut clean = true;
            // clear column t
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t).div_floor(a.get(t, t));
                let nq = -q;
                a.add_row_multiple(i, t, &nq);
                left.add_row_multiple(i, t, &nq);
                if !a.get(i, t).is_zero() {
                    a.swap_rows(t, i);
                    left.swap_rows(t, i);
                    clean = false;
                }
            }
            // clear row t
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j).div_floor(a.get(t, t));
                let nq = -q;
                a.add_col_multiple(j, t, &nq);
                right.add_col_multiple(j, t, &nq);
                if !a.get(t, j).is_zero() {
                    a.swap_cols(t, j);
                    right.swap_cols(t, j);
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let p = a.get(t, t).clone();
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a.get(i, j).is_multiple_of(&p));
            match offender {
                Some((i, _)) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    left.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            left.negate_row(t);
        }
    }
    SmithForm { diagonal: a, left, right }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(rows: &[Vec<i64>]) -> Vec<i64> {
        let m = IntegerMatrix::from_rows(rows);
        let s = smith_normal_form(&m);
        assert!(s.verify(&m), "SNF verification failed for {m:?}");
        s.invariant_factors().iter().map(|x| x.try_into().unwrap()).collect()
    }

    #[test]
    fn identity_is_its_own_form() {
        assert_eq!(factors(&[vec![1, 0], vec![0, 1]]), vec![1, 1]);
    }

    #[test]
    fn two_four_six_eight() {
        // gcd of entries 2, |det| 8 -> (2, 4)
        assert_eq!(factors(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(factors(&[vec![0, 0, 0], vec![0, 0, 0]]), Vec::<i64>::new());
    }

    #[test]
    fn non_square_and_coprime_diagonal() {
        assert_eq!(factors(&[vec![2, 0, 0], vec![0, 3, 0]]), vec![1, 6]);
        assert_eq!(factors(&[vec![4], vec![6]]), vec![2]);
    }

    #[test]
    fn empty_shapes() {
        let m = IntegerMatrix::zeros(0, 3);
        assert!(smith_normal_form(&m).verify(&m));
        let m = IntegerMatrix::zeros(2, 0);
        assert!(smith_normal_form(&m).verify(&m));
    }
}
