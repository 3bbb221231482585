//! Transversals of an n x n array of distinct elements: one column choice per
//! row. Since all array elements are distinct, two transversals are disjoint
//! exactly when their choices differ in every row.
//!
//! Transversals are ordered lexicographically on the choice sequence, i.e. by
//! the mixed-radix value with row 1 most significant. Under that order the
//! disjointness matrix of order n equals the n-fold Kronecker power of
//! [`build_b`], with no index permutation in between.

use num_bigint::BigInt;
use num_traits::{One, Zero};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Default cap on n for operations that materialize an n^n x n^n matrix.
pub const DEFAULT_MAX_DENSE_N: usize = 6;

/// One column choice per row; entries are 1-based and lie in `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transversal {
    n: usize,
    choices: Vec<usize>,
}

impl Transversal {
    pub fn new(n: usize, choices: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroSize);
        }
        if choices.len() != n {
            return Err(Error::InvalidTransversal(format!(
                "expected {n} choices, got {}",
                choices.len()
            )));
        }
        if let Some(&bad) = choices.iter().find(|&&c| c < 1 || c > n) {
            return Err(Error::InvalidTransversal(format!(
                "choice {bad} is outside 1..={n}"
            )));
        }
        Ok(Transversal { n, choices })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn choices(&self) -> &[usize] {
        &self.choices
    }

    /// Position in the lexicographic order: `sum_r (choice[r] - 1) * n^(n-1-r)`.
    pub fn rank(&self) -> u64 {
        self.choices
            .iter()
            .fold(0u64, |acc, &c| acc * self.n as u64 + (c as u64 - 1))
    }

    /// Inverse of [`Transversal::rank`].
    pub fn unrank(n: usize, rank: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroSize);
        }
        let count = transversal_count(n);
        if rank >= count {
            return Err(Error::RankOutOfRange { n, rank, count });
        }
        Ok(Transversal {
            n,
            choices: rank_digits(n, rank),
        })
    }

    /// True when the two transversals share no array element, i.e. their
    /// choices differ in every row.
    pub fn is_disjoint(&self, other: &Transversal) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(self
            .choices
            .iter()
            .zip(&other.choices)
            .all(|(a, b)| a != b))
    }

    /// All transversals disjoint from `self`, in rank order. There are
    /// exactly `(n-1)^n` of them.
    pub fn disjoint_neighbors(&self) -> Vec<Transversal> {
        let n = self.n;
        let mut out = Vec::new();
        let mut current = vec![0usize; n];
        // Candidates per row are 1..=n minus our own choice, in increasing
        // order; the depth-first product enumerates neighbors in rank order.
        fn fill(
            row: usize,
            n: usize,
            own: &[usize],
            current: &mut Vec<usize>,
            out: &mut Vec<Transversal>,
        ) {
            if row == n {
                out.push(Transversal {
                    n,
                    choices: current.clone(),
                });
                return;
            }
            for c in 1..=n {
                if c != own[row] {
                    current[row] = c;
                    fill(row + 1, n, own, current, out);
                }
            }
        }
        fill(0, n, &self.choices, &mut current, &mut out);
        out
    }
}

/// Digits of `rank` in base n, most significant first, shifted to 1-based.
pub(crate) fn rank_digits(n: usize, rank: u64) -> Vec<usize> {
    let mut digits = vec![1usize; n];
    let mut r = rank;
    for slot in digits.iter_mut().rev() {
        *slot = (r % n as u64) as usize + 1;
        r /= n as u64;
    }
    digits
}

/// `n^n`, the number of transversals. Checked against u64 overflow.
pub fn transversal_count(n: usize) -> u64 {
    assert!(n >= 1, "n must be at least 1");
    assert!(n <= 15, "n^n does not fit in 64 bits beyond n = 15");
    (n as u64).pow(n as u32)
}

/// The n x n matrix with zero diagonal and ones elsewhere.
pub fn build_b(n: usize) -> IntMatrix {
    assert!(n >= 1, "n must be at least 1");
    IntMatrix::from_fn(n, n, |r, c| {
        if r == c {
            BigInt::zero()
        } else {
            BigInt::one()
        }
    })
}

/// The n^n x n^n disjointness matrix under the default size guard.
pub fn incidence_matrix(n: usize) -> Result<IntMatrix> {
    incidence_matrix_with_limit(n, DEFAULT_MAX_DENSE_N)
}

/// As [`incidence_matrix`] with a caller-chosen guard.
pub fn incidence_matrix_with_limit(n: usize, limit: usize) -> Result<IntMatrix> {
    check_dense_guard(n, limit)?;
    #[cfg(feature = "parallel")]
    {
        Ok(fill_incidence_par(n))
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok(fill_incidence_seq(n))
    }
}

/// Sequential variant of [`incidence_matrix`].
pub fn incidence_matrix_seq(n: usize) -> Result<IntMatrix> {
    check_dense_guard(n, DEFAULT_MAX_DENSE_N)?;
    Ok(fill_incidence_seq(n))
}

pub(crate) fn check_dense_guard(n: usize, limit: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    if n > limit {
        return Err(Error::SizeGuard {
            n,
            limit,
            hint: "the dense n^n x n^n matrix is out of reach; use the structured or closed-form paths",
        });
    }
    Ok(())
}

fn choice_table(n: usize) -> Vec<Vec<usize>> {
    let count = transversal_count(n);
    (0..count).map(|r| rank_digits(n, r)).collect()
}

fn incidence_row_into(choices: &[Vec<usize>], i: usize, out: &mut [BigInt]) {
    let ti = &choices[i];
    for (j, tj) in choices.iter().enumerate() {
        if ti.iter().zip(tj).all(|(a, b)| a != b) {
            out[j] = BigInt::one();
        }
    }
}

fn fill_incidence_seq(n: usize) -> IntMatrix {
    let choices = choice_table(n);
    let side = choices.len();
    IntMatrix::from_fn(side, side, |i, j| {
        if choices[i].iter().zip(&choices[j]).all(|(a, b)| a != b) {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    })
}

#[cfg(feature = "parallel")]
fn fill_incidence_par(n: usize) -> IntMatrix {
    let choices = choice_table(n);
    let side = choices.len();
    let mut entries = vec![BigInt::zero(); side * side];
    entries
        .par_chunks_mut(side)
        .enumerate()
        .for_each(|(i, row)| incidence_row_into(&choices, i, row));
    IntMatrix::from_entries(side, side, entries).expect("shape is consistent")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: usize, choices: &[usize]) -> Transversal {
        Transversal::new(n, choices.to_vec()).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(t(3, &[1, 1, 1]).rank(), 0);
        assert_eq!(t(3, &[2, 3, 1]).rank(), 15);
        assert_eq!(t(2, &[2, 2]).rank(), 3);
    }

    #[test]
    fn unrank_examples() {
        assert_eq!(Transversal::unrank(3, 0).unwrap(), t(3, &[1, 1, 1]));
        assert_eq!(Transversal::unrank(3, 26).unwrap(), t(3, &[3, 3, 3]));
        assert_eq!(Transversal::unrank(3, 15).unwrap(), t(3, &[2, 3, 1]));
        assert!(Transversal::unrank(3, 27).is_err());
    }

    #[test]
    fn rank_unrank_round_trip() {
        for n in 1..=4 {
            for r in 0..transversal_count(n) {
                assert_eq!(Transversal::unrank(n, r).unwrap().rank(), r);
            }
        }
    }

    #[test]
    fn disjointness() {
        assert!(t(3, &[1, 2, 3]).is_disjoint(&t(3, &[2, 3, 1])).unwrap());
        assert!(!t(3, &[1, 2, 3]).is_disjoint(&t(3, &[2, 2, 1])).unwrap());
        for r in 0..transversal_count(3) {
            let x = Transversal::unrank(3, r).unwrap();
            assert!(!x.is_disjoint(&x).unwrap());
        }
        assert!(t(2, &[1, 1]).is_disjoint(&t(3, &[1, 1, 1])).is_err());
    }

    #[test]
    fn invalid_transversals() {
        assert!(Transversal::new(0, vec![]).is_err());
        assert!(Transversal::new(2, vec![1]).is_err());
        assert!(Transversal::new(2, vec![1, 3]).is_err());
        assert!(Transversal::new(2, vec![0, 1]).is_err());
    }

    #[test]
    fn build_b_examples() {
        assert_eq!(build_b(2), IntMatrix::from_i64(2, 2, &[0, 1, 1, 0]));
        assert_eq!(
            build_b(3),
            IntMatrix::from_i64(3, 3, &[0, 1, 1, 1, 0, 1, 1, 1, 0])
        );
        assert_eq!(build_b(1), IntMatrix::from_i64(1, 1, &[0]));
    }

    #[test]
    fn incidence_n1_and_n2() {
        assert_eq!(
            incidence_matrix(1).unwrap(),
            IntMatrix::from_i64(1, 1, &[0])
        );
        let a2 = incidence_matrix(2).unwrap();
        let expected = IntMatrix::from_i64(
            4,
            4,
            &[0, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 0, 0, 0],
        );
        assert_eq!(a2, expected);
        assert_eq!(incidence_matrix_seq(2).unwrap(), expected);
    }

    #[test]
    fn incidence_row_sums_n3() {
        let a3 = incidence_matrix(3).unwrap();
        assert_eq!(a3.rows(), 27);
        for r in 0..27 {
            let sum: BigInt = a3.row(r).iter().sum();
            assert_eq!(sum, BigInt::from(8), "row {r}");
        }
        assert_eq!(a3.trace().unwrap(), BigInt::zero());
    }

    #[test]
    fn incidence_symmetry() {
        let a3 = incidence_matrix(3).unwrap();
        assert_eq!(a3.transpose(), a3);
    }

    #[test]
    fn incidence_guard() {
        let err = incidence_matrix(7).unwrap_err();
        assert!(err.to_string().contains("size guard"), "{err}");
        assert!(incidence_matrix(0).is_err());
    }

    #[test]
    fn neighbors_examples() {
        assert_eq!(
            t(2, &[1, 1]).disjoint_neighbors(),
            vec![t(2, &[2, 2])]
        );
        let nb = t(3, &[1, 1, 1]).disjoint_neighbors();
        assert_eq!(nb.len(), 8);
        for x in &nb {
            assert!(x.choices().iter().all(|&c| c == 2 || c == 3));
        }
        // Rank order is preserved.
        let mut ranks: Vec<u64> = nb.iter().map(|x| x.rank()).collect();
        let sorted = {
            let mut s = ranks.clone();
            s.sort_unstable();
            s
        };
        assert_eq!(ranks, sorted);
        ranks.dedup();
        assert_eq!(ranks.len(), 8);
        assert_eq!(t(1, &[1]).disjoint_neighbors(), Vec::<Transversal>::new());
    }
}
