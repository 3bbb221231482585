//! Closed-form spectrum of the disjointness matrix and its exact
//! verification through the integral tensor eigenvector basis.
//!
//! The order-n matrix has eigenvalue `(-1)^(n-k) * (n-1)^k` with multiplicity
//! `C(n,k) * (n-1)^(n-k)` for `k = 0..=n`. Eigenvectors are Kronecker
//! products of the all-ones vector (k factors) and the difference vectors
//! `e1 - ei`; choosing these instead of an orthogonal basis keeps every
//! eigenvector integral, so the eigen-equations can be checked exactly.
//!
//! For n = 1 the formulas are read with the convention `0^0 = 1`: the k = n
//! line carries eigenvalue 0 with multiplicity 1 and the k < n lines carry
//! multiplicity 0, which keeps the multiplicity sum at `n^n`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::Result;
use crate::matrix::IntMatrix;
use crate::transversal::{incidence_matrix, transversal_count};

/// One `(k, eigenvalue, multiplicity)` line of the closed form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumLine {
    pub k: usize,
    pub eigenvalue: BigInt,
    pub multiplicity: BigUint,
}

/// The full closed-form spectrum for one order n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumSummary {
    pub n: usize,
    pub lines: Vec<SpectrumLine>,
}

/// `(-1)^(n-k) * (n-1)^k`, with `0^0 = 1`.
pub fn eigenvalue_for(n: usize, k: usize) -> BigInt {
    debug_assert!(k <= n);
    let mag = BigInt::from(n as i64 - 1).pow(k as u32);
    if (n - k) % 2 == 1 {
        -mag
    } else {
        mag
    }
}

/// `C(n,k) * (n-1)^(n-k)`, with `0^0 = 1`.
pub fn multiplicity_for(n: usize, k: usize) -> BigUint {
    debug_assert!(k <= n);
    let binom = num_integer::binomial(BigUint::from(n), BigUint::from(k));
    binom * BigUint::from(n as u64 - 1).pow((n - k) as u32)
}

pub fn closed_form_spectrum(n: usize) -> SpectrumSummary {
    assert!(n >= 1, "n must be at least 1");
    let lines = (0..=n)
        .map(|k| SpectrumLine {
            k,
            eigenvalue: eigenvalue_for(n, k),
            multiplicity: multiplicity_for(n, k),
        })
        .collect();
    SpectrumSummary { n, lines }
}

/// Base eigenvector `i` of [`crate::transversal::build_b`]: the all-ones
/// vector for `i = 1` (eigenvalue n-1), `e1 - ei` for `i >= 2`
/// (eigenvalue -1).
pub fn base_eigenvector(n: usize, i: usize) -> Vec<BigInt> {
    assert!(n >= 1, "n must be at least 1");
    assert!((1..=n).contains(&i), "base eigenvector index out of range");
    if i == 1 {
        vec![BigInt::one(); n]
    } else {
        let mut v = vec![BigInt::zero(); n];
        v[0] = BigInt::one();
        v[i - 1] = -BigInt::one();
        v
    }
}

/// Which base eigenvector occupies each tensor slot; entries are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorPattern {
    n: usize,
    slots: Vec<usize>,
}

impl TensorPattern {
    pub fn new(n: usize, slots: Vec<usize>) -> Result<Self> {
        // Same shape constraints as a transversal: n slots, each in 1..=n.
        let t = crate::transversal::Transversal::new(n, slots)?;
        Ok(TensorPattern {
            n,
            slots: t.choices().to_vec(),
        })
    }

    pub fn from_rank(n: usize, rank: u64) -> Result<Self> {
        let t = crate::transversal::Transversal::unrank(n, rank)?;
        Ok(TensorPattern {
            n,
            slots: t.choices().to_vec(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    pub fn rank(&self) -> u64 {
        self.slots
            .iter()
            .fold(0u64, |acc, &s| acc * self.n as u64 + (s as u64 - 1))
    }

    /// Number of all-ones factors in the tensor product.
    pub fn k(&self) -> usize {
        self.slots.iter().filter(|&&s| s == 1).count()
    }
}

fn kron_vec(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x * y);
        }
    }
    out
}

/// The length-n^n eigenvector named by `pattern` and its eigenvalue.
pub fn tensor_eigenvector(pattern: &TensorPattern) -> (Vec<BigInt>, BigInt) {
    let n = pattern.n();
    let mut v = vec![BigInt::one()];
    for &slot in pattern.slots() {
        let factor = base_eigenvector(n, slot);
        v = kron_vec(&v, &factor);
    }
    (v, eigenvalue_for(n, pattern.k()))
}

fn mat_vec(a: &IntMatrix, v: &[BigInt]) -> Vec<BigInt> {
    assert_eq!(a.cols(), v.len());
    (0..a.rows())
        .map(|r| {
            let mut acc = BigInt::zero();
            for (x, y) in a.row(r).iter().zip(v) {
                if !x.is_zero() {
                    if x.is_one() {
                        acc += y;
                    } else {
                        acc += x * y;
                    }
                }
            }
            acc
        })
        .collect()
}

/// Per-k outcome of [`verify_spectrum`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KTally {
    pub k: usize,
    pub expected: BigUint,
    pub passed: u64,
}

/// Result of exhaustively checking `A v = lambda v` over all tensor patterns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumReport {
    pub n: usize,
    pub per_k: Vec<KTally>,
    /// Pattern ranks whose eigen-equation failed, in rank order.
    pub failures: Vec<u64>,
}

impl SpectrumReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
            && self
                .per_k
                .iter()
                .all(|t| BigUint::from(t.passed) == t.expected)
    }
}

fn check_pattern(a: &IntMatrix, n: usize, rank: u64) -> (usize, bool) {
    let pattern = TensorPattern::from_rank(n, rank).expect("rank is in range");
    let (v, lambda) = tensor_eigenvector(&pattern);
    let av = mat_vec(a, &v);
    let ok = av.iter().zip(&v).all(|(left, x)| *left == &lambda * x);
    (pattern.k(), ok)
}

/// Checks every one of the n^n tensor eigenvectors against the dense matrix
/// in exact integer arithmetic and tallies the per-k counts.
pub fn verify_spectrum(n: usize) -> Result<SpectrumReport> {
    let a = incidence_matrix(n)?;
    #[cfg(feature = "parallel")]
    {
        Ok(verify_with(&a, n, true))
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok(verify_with(&a, n, false))
    }
}

/// Sequential variant of [`verify_spectrum`], including the matrix fill.
pub fn verify_spectrum_seq(n: usize) -> Result<SpectrumReport> {
    let a = crate::transversal::incidence_matrix_seq(n)?;
    Ok(verify_with(&a, n, false))
}

fn verify_with(a: &IntMatrix, n: usize, _parallel: bool) -> SpectrumReport {
    let count = transversal_count(n);
    let (counts, mut failures) = {
        #[cfg(feature = "parallel")]
        {
            if _parallel {
                (0..count)
                    .into_par_iter()
                    .fold(
                        || (vec![0u64; n + 1], Vec::new()),
                        |(mut counts, mut failures), r| {
                            let (k, ok) = check_pattern(a, n, r);
                            if ok {
                                counts[k] += 1;
                            } else {
                                failures.push(r);
                            }
                            (counts, failures)
                        },
                    )
                    .reduce(
                        || (vec![0u64; n + 1], Vec::new()),
                        |(mut c1, mut f1), (c2, f2)| {
                            for (a, b) in c1.iter_mut().zip(c2) {
                                *a += b;
                            }
                            f1.extend(f2);
                            (c1, f1)
                        },
                    )
            } else {
                tally_seq(a, n, count)
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            tally_seq(a, n, count)
        }
    };
    failures.sort_unstable();
    let per_k = (0..=n)
        .map(|k| KTally {
            k,
            expected: multiplicity_for(n, k),
            passed: counts[k],
        })
        .collect();
    SpectrumReport {
        n,
        per_k,
        failures,
    }
}

fn tally_seq(a: &IntMatrix, n: usize, count: u64) -> (Vec<u64>, Vec<u64>) {
    let mut counts = vec![0u64; n + 1];
    let mut failures = Vec::new();
    for r in 0..count {
        let (k, ok) = check_pattern(a, n, r);
        if ok {
            counts[k] += 1;
        } else {
            failures.push(r);
        }
    }
    (counts, failures)
}
