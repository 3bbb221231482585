//! Smith normal forms two independent ways: a general gcd-elimination
//! algorithm with mirrored unimodular transforms, and a structured
//! construction for the disjointness matrices that assembles the transforms
//! as Kronecker powers of a rank-one base change.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{balanced_div, IntMatrix};
use crate::spectrum::{multiplicity_for, TensorPattern};
use crate::transversal::{build_b, transversal_count};
use crate::VerifyReport;

/// Default cap on n for materializing the n^n x n^n transform pair.
pub const DEFAULT_MAX_STRUCTURED_N: usize = 4;

/// Diagonal form `d` together with unimodular transforms: `p * a * q = d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub p: IntMatrix,
    pub q: IntMatrix,
}

/// Closed-form invariant-factor line: factor `(n-1)^k` with multiplicity
/// `C(n,k) * (n-1)^(n-k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantFactorLine {
    pub k: usize,
    pub factor: BigInt,
    pub multiplicity: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantFactors {
    pub n: usize,
    pub lines: Vec<InvariantFactorLine>,
}

impl InvariantFactors {
    /// Internal consistency: multiplicities sum to n^n and the factors form
    /// a divisibility chain.
    pub fn is_consistent(&self) -> bool {
        let total: BigUint = self.lines.iter().map(|l| l.multiplicity.clone()).sum();
        if total != BigUint::from(self.n).pow(self.n as u32) {
            return false;
        }
        self.lines.windows(2).all(|w| {
            let x = &w[0].factor;
            let y = &w[1].factor;
            if x.is_zero() {
                y.is_zero()
            } else {
                y.is_multiple_of(x)
            }
        })
    }

    /// The diagonal as an explicit list, factors in weakly increasing order.
    /// Only sensible at desk scale; the list has n^n entries.
    pub fn expanded_diagonal(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        for line in &self.lines {
            let m = usize::try_from(&line.multiplicity).expect("multiplicity fits usize");
            out.extend(std::iter::repeat_n(line.factor.clone(), m));
        }
        out
    }
}

pub fn closed_form_invariants(n: usize) -> InvariantFactors {
    assert!(n >= 1, "n must be at least 1");
    let lines = (0..=n)
        .map(|k| InvariantFactorLine {
            k,
            factor: BigInt::from(n as i64 - 1).pow(k as u32),
            multiplicity: multiplicity_for(n, k),
        })
        .collect();
    InvariantFactors { n, lines }
}

/// Elimination engine. Elementary row operations are mirrored into `p`
/// (and inversely into `pinv`), column operations into `q`/`qinv`, so the
/// invariants `m = p * a0 * q`, `p * pinv = I`, `q * qinv = I` hold after
/// every step.
struct SmithEngine {
    m: IntMatrix,
    p: Option<IntMatrix>,
    pinv: Option<IntMatrix>,
    q: Option<IntMatrix>,
    qinv: Option<IntMatrix>,
}

impl SmithEngine {
    fn new(m: IntMatrix, track: [bool; 4]) -> Self {
        let rows = m.rows();
        let cols = m.cols();
        let id = |size: usize, flag: bool| flag.then(|| IntMatrix::identity(size));
        SmithEngine {
            m,
            p: id(rows, track[0]),
            pinv: id(rows, track[1]),
            q: id(cols, track[2]),
            qinv: id(cols, track[3]),
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.m.swap_rows(i, j);
        if let Some(p) = &mut self.p {
            p.swap_rows(i, j);
        }
        if let Some(pinv) = &mut self.pinv {
            pinv.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.m.swap_cols(i, j);
        if let Some(q) = &mut self.q {
            q.swap_cols(i, j);
        }
        if let Some(qinv) = &mut self.qinv {
            qinv.swap_rows(i, j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        let negate = |m: &mut IntMatrix| {
            for x in m.row_mut(i) {
                *x = -std::mem::take(x);
            }
        };
        negate(&mut self.m);
        if let Some(p) = &mut self.p {
            negate(p);
        }
        if let Some(pinv) = &mut self.pinv {
            for r in 0..pinv.rows() {
                let x = pinv.entry_mut(r, i);
                *x = -std::mem::take(x);
            }
        }
    }

    /// row[dst] += c * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        let apply = |m: &mut IntMatrix| {
            let (d_row, s_row) = m.row_pair_mut(dst, src);
            for (d, s) in d_row.iter_mut().zip(s_row.iter()) {
                *d += c * s;
            }
        };
        apply(&mut self.m);
        if let Some(p) = &mut self.p {
            apply(p);
        }
        if let Some(pinv) = &mut self.pinv {
            // Inverse operation on the column side: col[src] -= c * col[dst].
            for r in 0..pinv.rows() {
                let sub = c * pinv.entry(r, dst);
                *pinv.entry_mut(r, src) -= sub;
            }
        }
    }

    /// col[dst] += c * col[src]
    fn add_col_multiple(&mut self, dst: usize, src: usize, c: &BigInt) {
        let apply = |m: &mut IntMatrix| {
            for r in 0..m.rows() {
                let add = c * m.entry(r, src);
                *m.entry_mut(r, dst) += add;
            }
        };
        apply(&mut self.m);
        if let Some(q) = &mut self.q {
            apply(q);
        }
        if let Some(qinv) = &mut self.qinv {
            let (s_row, d_row) = qinv.row_pair_mut(src, dst);
            for (s, d) in s_row.iter_mut().zip(d_row.iter()) {
                *s -= c * d;
            }
        }
    }

    /// rows (i, j) <- [[a, b], [c, d]] * rows (i, j); the transform must have
    /// determinant one.
    fn transform_rows(&mut self, i: usize, j: usize, t: &[BigInt; 4]) {
        let [a, b, c, d] = t;
        debug_assert!((a * d - b * c).is_one());
        let apply = |m: &mut IntMatrix, ta: &BigInt, tb: &BigInt, tc: &BigInt, td: &BigInt| {
            let (ri, rj) = m.row_pair_mut(i, j);
            for (x, y) in ri.iter_mut().zip(rj.iter_mut()) {
                let nx = ta * &*x + tb * &*y;
                let ny = tc * &*x + td * &*y;
                *x = nx;
                *y = ny;
            }
        };
        apply(&mut self.m, a, b, c, d);
        if let Some(p) = &mut self.p {
            apply(p, a, b, c, d);
        }
        if let Some(pinv) = &mut self.pinv {
            // pinv <- pinv * T^-1 with T^-1 = [[d, -b], [-c, a]].
            for r in 0..pinv.rows() {
                let x = pinv.entry(r, i).clone();
                let y = pinv.entry(r, j).clone();
                *pinv.entry_mut(r, i) = d * &x - c * &y;
                *pinv.entry_mut(r, j) = a * &y - b * &x;
            }
        }
    }

    /// cols (i, j) <- cols (i, j) * [[a, b], [c, d]], i.e. new col i is
    /// `a * col_i + c * col_j` and new col j is `b * col_i + d * col_j`.
    fn transform_cols(&mut self, i: usize, j: usize, t: &[BigInt; 4]) {
        let [a, b, c, d] = t;
        debug_assert!((a * d - b * c).is_one());
        let apply = |m: &mut IntMatrix| {
            for r in 0..m.rows() {
                let x = m.entry(r, i).clone();
                let y = m.entry(r, j).clone();
                *m.entry_mut(r, i) = a * &x + c * &y;
                *m.entry_mut(r, j) = b * &x + d * &y;
            }
        };
        apply(&mut self.m);
        if let Some(q) = &mut self.q {
            apply(q);
        }
        if let Some(qinv) = &mut self.qinv {
            // qinv <- T^-1 * qinv with T^-1 = [[d, -b], [-c, a]].
            let (ri, rj) = qinv.row_pair_mut(i, j);
            for (x, y) in ri.iter_mut().zip(rj.iter_mut()) {
                let nx = d * &*x - b * &*y;
                let ny = a * &*y - c * &*x;
                *x = nx;
                *y = ny;
            }
        }
    }

    /// Nonzero entry of minimum absolute value in the trailing submatrix
    /// starting at (t, t); ties resolve to the first in row-major order.
    fn min_abs_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        let mut best_abs = BigInt::zero();
        for i in t..self.m.rows() {
            for j in t..self.m.cols() {
                let x = self.m.entry(i, j);
                if x.is_zero() {
                    continue;
                }
                let a = x.abs();
                if best.is_none() || a < best_abs {
                    best = Some((i, j));
                    best_abs = a;
                    if best_abs.is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    /// Reduces to a diagonal matrix (no divisibility guarantee yet). Pivots
    /// are chosen by minimum absolute value to limit entry growth.
    fn diagonalize(&mut self) {
        let steps = self.m.rows().min(self.m.cols());
        for t in 0..steps {
            loop {
                let Some((pi, pj)) = self.min_abs_pivot(t) else {
                    return; // trailing submatrix is zero
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let mut clean = true;
                for i in t + 1..self.m.rows() {
                    if self.m.entry(i, t).is_zero() {
                        continue;
                    }
                    let (quot, rem) = balanced_div(self.m.entry(i, t), self.m.entry(t, t));
                    if !quot.is_zero() {
                        self.add_row_multiple(i, t, &-quot);
                    }
                    if !rem.is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    continue; // a smaller pivot now exists in column t
                }
                for j in t + 1..self.m.cols() {
                    if self.m.entry(t, j).is_zero() {
                        continue;
                    }
                    let (quot, rem) = balanced_div(self.m.entry(t, j), self.m.entry(t, t));
                    if !quot.is_zero() {
                        self.add_col_multiple(j, t, &-quot);
                    }
                    if !rem.is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
        }
    }

    /// Folds the adjacent diagonal pair (i, i+1) into (gcd, lcm-up-to-sign)
    /// using one determinant-one row transform and one column transform.
    fn fold_pair(&mut self, i: usize) {
        let x = self.m.entry(i, i).clone();
        let y = self.m.entry(i + 1, i + 1).clone();
        let eg = x.extended_gcd(&y);
        let (g, s, t) = (eg.gcd, eg.x, eg.y);
        let a = &x / &g;
        let b = &y / &g;
        self.transform_rows(
            i,
            i + 1,
            &[BigInt::one(), BigInt::one(), -(&t * &b), &s * &a],
        );
        self.transform_cols(i, i + 1, &[s, -b, t, a]);
        debug_assert_eq!(self.m.entry(i, i), &g);
    }

    /// Orders the diagonal into a divisibility chain and strips signs.
    fn normalize_diagonal(&mut self) {
        debug_assert!(self.m.is_diagonal());
        let len = self.m.rows().min(self.m.cols());
        let r = (0..len)
            .take_while(|&i| !self.m.entry(i, i).is_zero())
            .count();
        if r > 0 {
            'outer: loop {
                for i in 0..r - 1 {
                    let x = self.m.entry(i, i);
                    let y = self.m.entry(i + 1, i + 1);
                    if y.is_multiple_of(x) {
                        continue;
                    }
                    if x.is_multiple_of(y) {
                        self.swap_rows(i, i + 1);
                        self.swap_cols(i, i + 1);
                    } else {
                        self.fold_pair(i);
                    }
                    continue 'outer;
                }
                break;
            }
        }
        for i in 0..len {
            if self.m.entry(i, i).is_negative() {
                self.negate_row(i);
            }
        }
    }
}

fn run_engine(a: &IntMatrix, track: [bool; 4]) -> SmithEngine {
    let mut engine = SmithEngine::new(a.clone(), track);
    engine.diagonalize();
    engine.normalize_diagonal();
    engine
}

/// Smith normal form with transforms. Diagonal entries are reported
/// non-negative; the sign is absorbed into `p`.
pub fn snf(a: &IntMatrix) -> SnfResult {
    let engine = run_engine(a, [true, false, true, false]);
    SnfResult {
        d: engine.m,
        p: engine.p.expect("tracked"),
        q: engine.q.expect("tracked"),
    }
}

/// Transform-free fast path: just the diagonal of the Smith normal form.
pub fn snf_diagonal(a: &IntMatrix) -> Vec<BigInt> {
    let engine = run_engine(a, [false; 4]);
    engine.m.diagonal()
}

/// Basis pair (x, y) with `B_n * x = y * diag(n-1, 1, ..., 1)` and both
/// column sets bases of Z^n. Realized from the elimination transforms of
/// `B_n` with the n-1 entry moved to the leading slot.
pub fn snf_basis_pair(n: usize) -> Result<(IntMatrix, IntMatrix)> {
    if n < 2 {
        return Err(Error::DegenerateBasisPair);
    }
    let b = build_b(n);
    let engine = run_engine(&b, [false, true, true, false]);
    let mut x = engine.q.expect("tracked");
    let mut y = engine.pinv.expect("tracked");
    x.swap_cols(0, n - 1);
    y.swap_cols(0, n - 1);
    debug_assert_eq!(
        b.mul(&x).unwrap(),
        y.mul(&factor_first_diag(n)).unwrap(),
        "basis pair fails its defining relation"
    );
    Ok((x, y))
}

/// diag(n-1, 1, ..., 1)
fn factor_first_diag(n: usize) -> IntMatrix {
    IntMatrix::from_fn(n, n, |r, c| {
        if r != c {
            BigInt::zero()
        } else if r == 0 {
            BigInt::from(n as i64 - 1)
        } else {
            BigInt::one()
        }
    })
}

/// Smith normal form of the order-n disjointness matrix by the structured
/// route: transforms are n-fold Kronecker powers of the base change behind
/// [`snf_basis_pair`], composed with one sorting permutation pair (stable by
/// pattern rank) so the diagonal is a divisibility chain.
pub fn structured_snf(n: usize) -> Result<SnfResult> {
    structured_snf_with_limit(n, DEFAULT_MAX_STRUCTURED_N)
}

/// As [`structured_snf`] with a caller-chosen guard.
pub fn structured_snf_with_limit(n: usize, limit: usize) -> Result<SnfResult> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    if n > limit {
        return Err(Error::SizeGuard {
            n,
            limit,
            hint: "materializing the n^n x n^n transform pair is out of reach; use closed_form_invariants",
        });
    }
    if n == 1 {
        // Order one degenerates: the matrix is the 1x1 zero matrix.
        return Ok(SnfResult {
            d: IntMatrix::zeros(1, 1),
            p: IntMatrix::identity(1),
            q: IntMatrix::identity(1),
        });
    }
    let b = build_b(n);
    let engine = run_engine(&b, [true, false, true, false]);
    let mut p_base = engine.p.expect("tracked");
    let mut q_base = engine.q.expect("tracked");
    // Move the n-1 factor to the leading slot on both sides.
    p_base.swap_rows(0, n - 1);
    q_base.swap_cols(0, n - 1);

    let p_big = p_base.kronecker_power(n);
    let q_big = q_base.kronecker_power(n);
    let side = transversal_count(n) as usize;

    // Unsorted, the tensor diagonal has (n-1)^k at each pattern's rank where
    // k counts the leading-slot factors; sort stably by (k, rank).
    let pattern_k = |r: usize| {
        TensorPattern::from_rank(n, r as u64)
            .expect("rank in range")
            .k()
    };
    let mut order: Vec<usize> = (0..side).collect();
    order.sort_by_key(|&r| (pattern_k(r), r));

    let base = BigInt::from(n as i64 - 1);
    let d = IntMatrix::from_fn(side, side, |r, c| {
        if r == c {
            base.pow(pattern_k(order[r]) as u32)
        } else {
            BigInt::zero()
        }
    });
    Ok(SnfResult {
        d,
        p: p_big.permute_rows(&order),
        q: q_big.permute_cols(&order),
    })
}

/// Exact check of a claimed Smith normal form: product, diagonality,
/// divisibility chain, and unimodularity of both transforms.
pub fn verify_snf(a: &IntMatrix, r: &SnfResult) -> VerifyReport {
    let mut reasons = Vec::new();
    if r.p.rows() != a.rows()
        || r.p.cols() != a.rows()
        || r.q.rows() != a.cols()
        || r.q.cols() != a.cols()
        || r.d.rows() != a.rows()
        || r.d.cols() != a.cols()
    {
        reasons.push(format!(
            "shape mismatch: a is {}x{}, p is {}x{}, q is {}x{}, d is {}x{}",
            a.rows(),
            a.cols(),
            r.p.rows(),
            r.p.cols(),
            r.q.rows(),
            r.q.cols(),
            r.d.rows(),
            r.d.cols()
        ));
        return VerifyReport::fail(reasons);
    }
    let product = r
        .p
        .mul(a)
        .and_then(|pa| pa.mul(&r.q))
        .expect("shapes checked above");
    if product != r.d {
        reasons.push("product mismatch: p*a*q != d".to_string());
    }
    if !r.d.is_diagonal() {
        reasons.push("d is not diagonal".to_string());
    }
    let diag = r.d.diagonal();
    for i in 0..diag.len().saturating_sub(1) {
        let x = diag[i].abs();
        let y = diag[i + 1].abs();
        let ok = if x.is_zero() {
            y.is_zero()
        } else {
            y.is_multiple_of(&x)
        };
        if !ok {
            reasons.push(format!(
                "divisibility violated between positions {i} and {}",
                i + 1
            ));
        }
    }
    for (name, m) in [("p", &r.p), ("q", &r.q)] {
        let det = m.determinant().expect("square by shape check");
        if !det.abs().is_one() {
            reasons.push(format!("{name} is not unimodular (det = {det})"));
        }
    }
    if reasons.is_empty() {
        VerifyReport::pass()
    } else {
        VerifyReport::fail(reasons)
    }
}
