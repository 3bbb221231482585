//! Property tests for the algebraic invariants: Kronecker/product algebra,
//! rank facts, transversal order, and the minor-gcd characterization of the
//! invariant factors on small random matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use transversals::field::FieldSpec;
use transversals::matrix::IntMatrix;
use transversals::smith::snf;
use transversals::transversal::{transversal_count, Transversal};

fn matrix(rows: usize, cols: usize, lo: i64, hi: i64) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(lo..=hi, rows * cols)
        .prop_map(move |v| IntMatrix::from_i64(rows, cols, &v))
}

fn small_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=3, 1usize..=3).prop_flat_map(|(r, c)| matrix(r, c, -5, 5))
}

fn small_square() -> impl Strategy<Value = IntMatrix> {
    (1usize..=3).prop_flat_map(|n| matrix(n, n, -5, 5))
}

/// All k-element index subsets of 0..n, lexicographic.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// gcd of the absolute values of all r x r minors.
fn minor_gcd(a: &IntMatrix, r: usize) -> BigInt {
    let mut g = BigInt::zero();
    for rows in subsets(a.rows(), r) {
        for cols in subsets(a.cols(), r) {
            let sub = IntMatrix::from_fn(r, r, |i, j| a.entry(rows[i], cols[j]).clone());
            g = g.gcd(&sub.determinant().unwrap());
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kronecker_is_associative(a in small_matrix(), b in small_matrix(), c in small_matrix()) {
        let left = a.kronecker(&b).kronecker(&c);
        let right = a.kronecker(&b.kronecker(&c));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn kronecker_mixed_product(a in small_square(), b in small_square(), c in small_square(), d in small_square()) {
        // (a (x) b)(c (x) d) = (a c) (x) (b d) whenever the shapes agree;
        // squares of matching size always do.
        prop_assume!(a.rows() == c.rows() && b.rows() == d.rows());
        let left = a.kronecker(&b).mul(&c.kronecker(&d)).unwrap();
        let right = a.mul(&c).unwrap().kronecker(&b.mul(&d).unwrap());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn kronecker_determinant_identity(a in small_square(), b in small_square()) {
        let det = a.kronecker(&b).determinant().unwrap();
        let expected = a.determinant().unwrap().pow(b.rows() as u32)
            * b.determinant().unwrap().pow(a.rows() as u32);
        prop_assert_eq!(det, expected);
    }

    #[test]
    fn matmul_is_associative(a in matrix(3, 3, -5, 5), b in matrix(3, 3, -5, 5), c in matrix(3, 3, -5, 5)) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn determinant_is_multiplicative(a in matrix(3, 3, -5, 5), b in matrix(3, 3, -5, 5)) {
        let det = a.mul(&b).unwrap().determinant().unwrap();
        prop_assert_eq!(det, a.determinant().unwrap() * b.determinant().unwrap());
    }

    #[test]
    fn full_rank_over_q_iff_nonzero_determinant(a in small_square()) {
        let full = a.rank_over_field(&FieldSpec::Rationals) == a.rows();
        let invertible = !a.determinant().unwrap().is_zero();
        prop_assert_eq!(full, invertible);
    }

    #[test]
    fn rank_unrank_bijection(n in 1usize..=5, seed in any::<u64>()) {
        let count = transversal_count(n);
        let r = seed % count;
        let t = Transversal::unrank(n, r).unwrap();
        prop_assert_eq!(t.rank(), r);
    }

    #[test]
    fn disjointness_is_symmetric_and_irreflexive(n in 1usize..=4, s1 in any::<u64>(), s2 in any::<u64>()) {
        let count = transversal_count(n);
        let a = Transversal::unrank(n, s1 % count).unwrap();
        let b = Transversal::unrank(n, s2 % count).unwrap();
        prop_assert_eq!(a.is_disjoint(&b).unwrap(), b.is_disjoint(&a).unwrap());
        prop_assert!(!a.is_disjoint(&a).unwrap());
    }

    #[test]
    fn pairwise_disjoint_iff_rows_are_permutations(n in 1usize..=4, seeds in proptest::collection::vec(any::<u64>(), 4)) {
        let count = transversal_count(n);
        let columns: Vec<Transversal> = (0..n)
            .map(|j| Transversal::unrank(n, seeds[j % seeds.len()].wrapping_add(j as u64) % count).unwrap())
            .collect();
        let pairwise = (0..n).all(|i| {
            (i + 1..n).all(|j| columns[i].is_disjoint(&columns[j]).unwrap())
        });
        let per_row = (0..n).all(|r| {
            let mut seen = vec![false; n];
            columns.iter().all(|t| {
                let c = t.choices()[r];
                !std::mem::replace(&mut seen[c - 1], true)
            })
        });
        prop_assert_eq!(pairwise, per_row);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn minor_gcd_matches_invariant_factor_products(
        a in (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| matrix(r, c, -9, 9))
    ) {
        let result = snf(&a);
        let diag = result.d.diagonal();
        for r in 1..=a.rows().min(a.cols()).min(3) {
            let product: BigInt = diag[..r].iter().map(|x| x.abs()).product();
            prop_assert_eq!(&product, &minor_gcd(&a, r), "r = {}", r);
        }
    }
}
