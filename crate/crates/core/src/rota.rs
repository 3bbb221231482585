//! Arrangement instances: n bases of an n-dimensional space over Q or GF(p)
//! fill the rows of an n x n array. The goal is n mutually disjoint
//! transversals, one per column, each of which is again a basis; which
//! transversals are bases picks out a principal submatrix of the
//! disjointness matrix.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Echelon, Field, FieldSpec, PrimeField, Rationals};
use crate::matrix::IntMatrix;
use crate::transversal::{check_dense_guard, transversal_count, Transversal, DEFAULT_MAX_DENSE_N};
use crate::VerifyReport;

/// Search and exhaustive rank checks stay at desk scale.
pub const MAX_ROTA_N: usize = 5;

const GUARD_HINT: &str = "instances beyond this are out of desk scale";

/// Field elements that can be read off a stored rational entry.
trait InstanceField: Field {
    fn embed_rational(&self, x: &BigRational) -> Self::Elem;
}

impl InstanceField for Rationals {
    fn embed_rational(&self, x: &BigRational) -> BigRational {
        x.clone()
    }
}

impl InstanceField for PrimeField {
    fn embed_rational(&self, x: &BigRational) -> u64 {
        let num = self.reduce_bigint(x.numer());
        let den = self.reduce_bigint(x.denom());
        let inv = self
            .inv(&den)
            .expect("denominator invertibility is checked at construction");
        self.mul(&num, &inv)
    }
}

/// n ordered bases assigned to the rows of the array; basis i's j-th vector
/// sits at position (i, j). Entries are stored as exact rationals; over
/// GF(p) they are reduced on use (denominators checked invertible).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotaInstance {
    n: usize,
    field: FieldSpec,
    /// bases[i] is row-major n x n; vector j occupies entries j*n..(j+1)*n.
    bases: Vec<Vec<BigRational>>,
}

impl RotaInstance {
    pub fn new(n: usize, field: FieldSpec, bases: Vec<Vec<BigRational>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroSize);
        }
        if bases.len() != n {
            return Err(Error::Instance(format!(
                "expected {n} bases, got {}",
                bases.len()
            )));
        }
        for (i, basis) in bases.iter().enumerate() {
            if basis.len() != n * n {
                return Err(Error::Instance(format!(
                    "basis {} must have {} entries, got {}",
                    i + 1,
                    n * n,
                    basis.len()
                )));
            }
        }
        if let FieldSpec::PrimeField(p) = field {
            let f = PrimeField::new(p)?;
            for (i, basis) in bases.iter().enumerate() {
                for x in basis {
                    if f.reduce_bigint(x.denom()) == 0 {
                        return Err(Error::Instance(format!(
                            "entry {x} in row {} has a denominator divisible by {p}",
                            i + 1
                        )));
                    }
                }
            }
        }
        let inst = RotaInstance { n, field, bases };
        for i in 0..n {
            if inst.row_rank(i) != n {
                return Err(Error::Instance(format!("row {} is not a basis", i + 1)));
            }
        }
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// The vector at array position (row, col); both indices 0-based.
    pub fn vector(&self, row: usize, col: usize) -> &[BigRational] {
        &self.bases[row][col * self.n..(col + 1) * self.n]
    }

    fn row_rank(&self, row: usize) -> usize {
        self.rank_of_selection(&(0..self.n).map(|c| (row, c)).collect::<Vec<_>>())
    }

    /// Rank over the instance field of the vectors at the given positions.
    fn rank_of_selection(&self, picks: &[(usize, usize)]) -> usize {
        match self.field {
            FieldSpec::Rationals => self.rank_with(&Rationals, picks),
            FieldSpec::PrimeField(p) => {
                self.rank_with(&PrimeField::new(p).expect("checked prime"), picks)
            }
        }
    }

    fn rank_with<F: InstanceField>(&self, f: &F, picks: &[(usize, usize)]) -> usize {
        let mut ech = Echelon::new(f, self.n);
        for &(row, col) in picks {
            let v: Vec<F::Elem> = self
                .vector(row, col)
                .iter()
                .map(|x| f.embed_rational(x))
                .collect();
            ech.insert(v);
        }
        ech.rank()
    }

    /// True when the transversal selects a basis of the ambient space.
    pub fn transversal_is_basis(&self, t: &Transversal) -> Result<bool> {
        if t.n() != self.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: t.n(),
            });
        }
        let picks: Vec<(usize, usize)> = t
            .choices()
            .iter()
            .enumerate()
            .map(|(r, &c)| (r, c - 1))
            .collect();
        Ok(self.rank_of_selection(&picks) == self.n)
    }
}

/// Loads and validates an instance from a JSON file.
pub fn load_instance(path: impl AsRef<Path>) -> Result<RotaInstance> {
    let text = std::fs::read_to_string(path)?;
    parse_instance(&text)
}

/// Parses the instance format:
/// `{"n": 3, "field": "Q" | "GF(5)", "bases": [...]}` where each basis is
/// either n rows of n entries or a flat row-major list of n*n entries, and
/// each entry is an integer or a string like `"-3"` or `"1/2"`.
pub fn parse_instance(text: &str) -> Result<RotaInstance> {
    let v: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::Instance(format!("invalid JSON: {e}")))?;
    let n = v
        .get("n")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| Error::Instance("missing or invalid \"n\"".into()))? as usize;
    let field = FieldSpec::parse(
        v.get("field")
            .and_then(|x| x.as_str())
            .ok_or_else(|| Error::Instance("missing or invalid \"field\"".into()))?,
    )?;
    let bases_val = v
        .get("bases")
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::Instance("missing or invalid \"bases\"".into()))?;
    let mut bases = Vec::with_capacity(bases_val.len());
    for (i, basis) in bases_val.iter().enumerate() {
        bases.push(parse_basis(basis, i)?);
    }
    RotaInstance::new(n, field, bases)
}

fn parse_basis(basis: &serde_json::Value, index: usize) -> Result<Vec<BigRational>> {
    let arr = basis
        .as_array()
        .ok_or_else(|| Error::Instance(format!("basis {} is not an array", index + 1)))?;
    let nested = arr.first().map(|x| x.is_array()).unwrap_or(false);
    let mut out = Vec::new();
    if nested {
        for row in arr {
            let row = row.as_array().ok_or_else(|| {
                Error::Instance(format!("basis {} mixes rows and scalars", index + 1))
            })?;
            for entry in row {
                out.push(parse_entry(entry)?);
            }
        }
    } else {
        for entry in arr {
            out.push(parse_entry(entry)?);
        }
    }
    Ok(out)
}

fn parse_entry(entry: &serde_json::Value) -> Result<BigRational> {
    match entry {
        serde_json::Value::Number(num) => {
            let z = num
                .as_i64()
                .ok_or_else(|| {
                    Error::Instance(format!(
                        "entry {num} is not an integer; write rationals as strings like \"1/2\""
                    ))
                })?;
            Ok(BigRational::from_integer(BigInt::from(z)))
        }
        serde_json::Value::String(s) => parse_rational(s),
        other => Err(Error::Instance(format!("entry {other} is not a number or string"))),
    }
}

/// Parses `"p"` or `"p/q"` with arbitrary-precision parts.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = |_| Error::Instance(format!("cannot parse rational '{s}'"));
    match s.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(bad)?;
            let den: BigInt = den.trim().parse().map_err(bad)?;
            if den.is_zero() {
                return Err(Error::Instance(format!("zero denominator in '{s}'")));
            }
            Ok(BigRational::new(num, den))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(bad)?)),
    }
}

/// Ranks of all transversals whose selected vectors span, in increasing
/// order. Exhaustive over all n^n transversals.
pub fn basis_transversals(inst: &RotaInstance) -> Result<Vec<u64>> {
    let n = inst.n();
    if n > MAX_ROTA_N {
        return Err(Error::SizeGuard {
            n,
            limit: MAX_ROTA_N,
            hint: GUARD_HINT,
        });
    }
    let count = transversal_count(n);
    let is_basis = |r: u64| {
        let t = Transversal::unrank(n, r).expect("rank in range");
        inst.transversal_is_basis(&t).expect("sizes agree")
    };
    #[cfg(feature = "parallel")]
    {
        Ok((0..count).into_par_iter().filter(|&r| is_basis(r)).collect())
    }
    #[cfg(not(feature = "parallel"))]
    {
        Ok((0..count).filter(|&r| is_basis(r)).collect())
    }
}

/// 0/1 disjointness matrix restricted to the given transversal ranks, rows
/// and columns in subset order.
pub fn principal_submatrix(n: usize, subset: &[u64]) -> Result<IntMatrix> {
    check_dense_guard(n, DEFAULT_MAX_DENSE_N)?;
    let count = transversal_count(n);
    let transversals: Vec<Transversal> = subset
        .iter()
        .map(|&r| {
            if r >= count {
                Err(Error::RankOutOfRange { n, rank: r, count })
            } else {
                Transversal::unrank(n, r)
            }
        })
        .collect::<Result<_>>()?;
    Ok(IntMatrix::from_fn(subset.len(), subset.len(), |i, j| {
        if transversals[i]
            .is_disjoint(&transversals[j])
            .expect("same order")
        {
            BigInt::one()
        } else {
            BigInt::zero()
        }
    }))
}

/// A witness: n mutually disjoint transversals, one per column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrangement {
    n: usize,
    columns: Vec<Transversal>,
}

impl Arrangement {
    pub fn new(n: usize, columns: Vec<Transversal>) -> Result<Self> {
        if columns.len() != n {
            return Err(Error::Instance(format!(
                "expected {n} columns, got {}",
                columns.len()
            )));
        }
        if let Some(t) = columns.iter().find(|t| t.n() != n) {
            return Err(Error::SizeMismatch {
                left: n,
                right: t.n(),
            });
        }
        Ok(Arrangement { n, columns })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn columns(&self) -> &[Transversal] {
        &self.columns
    }

    /// Mutual disjointness in its per-row form: for every row, the choices
    /// across columns are a permutation of 1..=n.
    pub fn rows_are_permutations(&self) -> bool {
        (0..self.n).all(|r| {
            let mut seen = vec![false; self.n];
            self.columns.iter().all(|t| {
                let c = t.choices()[r];
                !std::mem::replace(&mut seen[c - 1], true)
            })
        })
    }
}

/// Outcome of [`find_arrangement`]. `nodes` counts candidate placements
/// tried, so an exhausted search carries an auditable certificate of work.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { arrangement: Arrangement, nodes: u64 },
    Exhausted { nodes: u64 },
}

impl SearchOutcome {
    pub fn nodes(&self) -> u64 {
        match self {
            SearchOutcome::Found { nodes, .. } | SearchOutcome::Exhausted { nodes } => *nodes,
        }
    }

    pub fn arrangement(&self) -> Option<&Arrangement> {
        match self {
            SearchOutcome::Found { arrangement, .. } => Some(arrangement),
            SearchOutcome::Exhausted { .. } => None,
        }
    }
}

/// Backtracking search for an arrangement: columns are built left to right,
/// rows top to bottom, candidate positions in increasing column order. A
/// partial column is pruned as soon as its vectors are dependent, and a
/// placement is rejected when some later row of the current column has no
/// unused position independent of the column's span so far. The first
/// arrangement in this deterministic order is returned.
pub fn find_arrangement(inst: &RotaInstance) -> Result<SearchOutcome> {
    let n = inst.n();
    if n > MAX_ROTA_N {
        return Err(Error::SizeGuard {
            n,
            limit: MAX_ROTA_N,
            hint: GUARD_HINT,
        });
    }
    match inst.field() {
        FieldSpec::Rationals => run_search(&Rationals, inst),
        FieldSpec::PrimeField(p) => run_search(&PrimeField::new(p).expect("checked prime"), inst),
    }
}

fn run_search<F: InstanceField>(field: &F, inst: &RotaInstance) -> Result<SearchOutcome> {
    let n = inst.n();
    let vectors: Vec<Vec<F::Elem>> = (0..n)
        .flat_map(|row| (0..n).map(move |col| (row, col)))
        .map(|(row, col)| {
            inst.vector(row, col)
                .iter()
                .map(|x| field.embed_rational(x))
                .collect()
        })
        .collect();
    let mut search = Search {
        field,
        n,
        vectors,
        used: vec![false; n * n],
        columns: vec![Vec::new(); n],
        nodes: 0,
    };
    let mut ech = Echelon::new(field, n);
    let found = search.place(0, &mut ech);
    let nodes = search.nodes;
    if found {
        let columns = search
            .columns
            .iter()
            .map(|choices| Transversal::new(n, choices.clone()))
            .collect::<Result<Vec<_>>>()?;
        let arrangement = Arrangement::new(n, columns)?;
        Ok(SearchOutcome::Found { arrangement, nodes })
    } else {
        Ok(SearchOutcome::Exhausted { nodes })
    }
}

struct Search<'f, F: Field> {
    field: &'f F,
    n: usize,
    /// vectors[row * n + col], 0-based.
    vectors: Vec<Vec<F::Elem>>,
    /// used[row * n + col]: position already taken by an earlier column.
    used: Vec<bool>,
    /// Choices per column, 1-based; columns fill left to right.
    columns: Vec<Vec<usize>>,
    nodes: u64,
}

impl<'f, F: Field> Search<'f, F> {
    fn place(&mut self, col: usize, ech: &mut Echelon<'f, F>) -> bool {
        if col == self.n {
            return true;
        }
        let row = self.columns[col].len();
        if row == self.n {
            let mut next = Echelon::new(self.field, self.n);
            return self.place(col + 1, &mut next);
        }
        for c in 1..=self.n {
            let pos = row * self.n + (c - 1);
            if self.used[pos] {
                continue;
            }
            self.nodes += 1;
            let saved = ech.clone_state();
            if !ech.insert(self.vectors[pos].clone()) {
                continue;
            }
            if self.rows_ahead_feasible(col, row + 1, ech) {
                self.used[pos] = true;
                self.columns[col].push(c);
                if self.place(col, ech) {
                    return true;
                }
                self.columns[col].pop();
                self.used[pos] = false;
            }
            ech.restore_state(saved);
        }
        false
    }

    /// Every later row of the current column must still offer an unused
    /// position independent of the span built so far; spans only grow, so a
    /// row failing this can never be filled.
    fn rows_ahead_feasible(&self, _col: usize, from_row: usize, ech: &Echelon<'f, F>) -> bool {
        (from_row..self.n).all(|r| {
            (0..self.n).any(|c| {
                let pos = r * self.n + c;
                !self.used[pos] && ech.accepts(&self.vectors[pos])
            })
        })
    }
}

/// Independent check of a claimed arrangement: pairwise disjointness and one
/// exact rank computation per column.
pub fn verify_arrangement(inst: &RotaInstance, arrangement: &Arrangement) -> VerifyReport {
    let n = inst.n();
    let mut reasons = Vec::new();
    if arrangement.n() != n || arrangement.columns().len() != n {
        reasons.push(format!(
            "shape mismatch: instance has n = {n}, arrangement has n = {} with {} columns",
            arrangement.n(),
            arrangement.columns().len()
        ));
        return VerifyReport::fail(reasons);
    }
    let cols = arrangement.columns();
    for i in 0..n {
        for j in i + 1..n {
            match cols[i].is_disjoint(&cols[j]) {
                Ok(true) => {}
                Ok(false) => reasons.push(format!("columns {},{} not disjoint", i + 1, j + 1)),
                Err(e) => reasons.push(format!("columns {},{}: {e}", i + 1, j + 1)),
            }
        }
    }
    for (j, t) in cols.iter().enumerate() {
        match inst.transversal_is_basis(t) {
            Ok(true) => {}
            Ok(false) => reasons.push(format!("column {} not a basis", j + 1)),
            Err(e) => reasons.push(format!("column {}: {e}", j + 1)),
        }
    }
    if reasons.is_empty() {
        VerifyReport::pass()
    } else {
        VerifyReport::fail(reasons)
    }
}

/// Random instance with invertible rows via seeded rejection sampling:
/// entries are uniform in 0..p over GF(p) and uniform in -9..=9 over Q;
/// candidate rows are redrawn until they span.
pub fn random_instance<R: Rng + ?Sized>(
    n: usize,
    field: FieldSpec,
    rng: &mut R,
) -> Result<RotaInstance> {
    if n == 0 {
        return Err(Error::ZeroSize);
    }
    let mut bases = Vec::with_capacity(n);
    for _ in 0..n {
        loop {
            let entries: Vec<BigInt> = match field {
                FieldSpec::PrimeField(p) => (0..n * n)
                    .map(|_| BigInt::from(rng.random_range(0..p)))
                    .collect(),
                FieldSpec::Rationals => (0..n * n)
                    .map(|_| BigInt::from(rng.random_range(-9i64..=9)))
                    .collect(),
            };
            let candidate = IntMatrix::from_entries(n, n, entries.clone())?;
            if candidate.rank_over_field(&field) == n {
                bases.push(entries.into_iter().map(BigRational::from_integer).collect());
                break;
            }
        }
    }
    RotaInstance::new(n, field, bases)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_instance(n: usize, field: FieldSpec) -> RotaInstance {
        let basis: Vec<BigRational> = (0..n * n)
            .map(|i| {
                if i % n == i / n {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        RotaInstance::new(n, field, vec![basis; n]).unwrap()
    }

    #[test]
    fn load_and_validate() {
        let inst = parse_instance(
            r#"{"n": 3, "field": "Q",
                "bases": [[[1,0,0],[0,1,0],[0,0,1]],
                          [[1,0,0],[0,1,0],[0,0,1]],
                          [[1,0,0],[0,1,0],[0,0,1]]]}"#,
        )
        .unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.field(), FieldSpec::Rationals);

        let inst = parse_instance(
            r#"{"n": 2, "field": "GF(2)", "bases": [[1,0,0,1],[1,0,0,1]]}"#,
        )
        .unwrap();
        assert_eq!(inst.field(), FieldSpec::PrimeField(2));
    }

    #[test]
    fn non_basis_row_is_rejected() {
        let err = parse_instance(
            r#"{"n": 2, "field": "Q", "bases": [[1,0,0,1],[1,0,1,0]]}"#,
        )
        .unwrap_err();
        assert_eq!(err.to_string(), "instance error: row 2 is not a basis");
    }

    #[test]
    fn non_prime_field_is_rejected() {
        let err = parse_instance(
            r#"{"n": 2, "field": "GF(6)", "bases": [[1,0,0,1],[1,0,0,1]]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("not prime"), "{err}");
    }

    #[test]
    fn rational_entries_parse() {
        let inst = parse_instance(
            r#"{"n": 2, "field": "Q", "bases": [["1/2","0","0","-3"],[1,0,0,1]]}"#,
        )
        .unwrap();
        assert_eq!(
            inst.vector(0, 0)[0],
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
        // Denominator divisible by p is rejected over GF(p).
        let err = parse_instance(
            r#"{"n": 2, "field": "GF(2)", "bases": [["1/2","0","0","1"],[1,0,0,1]]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("denominator"), "{err}");
    }

    #[test]
    fn basis_transversals_identity_n2() {
        let inst = identity_instance(2, FieldSpec::Rationals);
        assert_eq!(basis_transversals(&inst).unwrap(), vec![1, 2]);
    }

    #[test]
    fn basis_transversals_identity_n3_are_permutations() {
        let inst = identity_instance(3, FieldSpec::Rationals);
        let ranks = basis_transversals(&inst).unwrap();
        assert_eq!(ranks.len(), 6);
        for &r in &ranks {
            let t = Transversal::unrank(3, r).unwrap();
            let mut sorted = t.choices().to_vec();
            sorted.sort_unstable();
            assert_eq!(sorted, vec![1, 2, 3], "rank {r}");
        }
    }

    #[test]
    fn principal_submatrix_examples() {
        let m = principal_submatrix(2, &[1, 2]).unwrap();
        assert_eq!(m, IntMatrix::from_i64(2, 2, &[0, 1, 1, 0]));
        let single = principal_submatrix(3, &[5]).unwrap();
        assert_eq!(single, IntMatrix::from_i64(1, 1, &[0]));
        assert!(principal_submatrix(2, &[4]).is_err());
    }

    #[test]
    fn derangement_relation_on_permutation_transversals() {
        let inst = identity_instance(3, FieldSpec::Rationals);
        let ranks = basis_transversals(&inst).unwrap();
        let m = principal_submatrix(3, &ranks).unwrap();
        for (i, &ri) in ranks.iter().enumerate() {
            for (j, &rj) in ranks.iter().enumerate() {
                let a = Transversal::unrank(3, ri).unwrap();
                let b = Transversal::unrank(3, rj).unwrap();
                let disagree_everywhere = a
                    .choices()
                    .iter()
                    .zip(b.choices())
                    .all(|(x, y)| x != y);
                let expected = i64::from(disagree_everywhere);
                assert_eq!(m.entry(i, j), &BigInt::from(expected));
            }
        }
    }

    #[test]
    fn find_arrangement_identity_n3() {
        let inst = identity_instance(3, FieldSpec::Rationals);
        let outcome = find_arrangement(&inst).unwrap();
        let arrangement = outcome.arrangement().expect("must exist").clone();
        let choices: Vec<Vec<usize>> = arrangement
            .columns()
            .iter()
            .map(|t| t.choices().to_vec())
            .collect();
        assert_eq!(choices, vec![vec![1, 2, 3], vec![2, 3, 1], vec![3, 1, 2]]);
        assert!(verify_arrangement(&inst, &arrangement).ok);
        assert!(arrangement.rows_are_permutations());
    }

    #[test]
    fn find_arrangement_identity_n2_gf2() {
        let inst = identity_instance(2, FieldSpec::PrimeField(2));
        let outcome = find_arrangement(&inst).unwrap();
        let arrangement = outcome.arrangement().expect("must exist");
        let choices: Vec<Vec<usize>> = arrangement
            .columns()
            .iter()
            .map(|t| t.choices().to_vec())
            .collect();
        assert_eq!(choices, vec![vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn find_arrangement_n1() {
        let inst = identity_instance(1, FieldSpec::Rationals);
        let outcome = find_arrangement(&inst).unwrap();
        let arrangement = outcome.arrangement().expect("must exist");
        assert_eq!(arrangement.columns()[0].choices(), &[1]);
    }

    #[test]
    fn search_guard() {
        assert!(matches!(
            find_arrangement(&identity_instance(6, FieldSpec::Rationals)),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn verify_rejects_bad_arrangements() {
        let inst = identity_instance(2, FieldSpec::Rationals);
        let t12 = Transversal::new(2, vec![1, 2]).unwrap();
        let repeated = Arrangement::new(2, vec![t12.clone(), t12.clone()]).unwrap();
        let report = verify_arrangement(&inst, &repeated);
        assert!(!report.ok);
        assert!(
            report.reasons.iter().any(|r| r.contains("columns 1,2 not disjoint")),
            "{:?}",
            report.reasons
        );

        let t11 = Transversal::new(2, vec![1, 1]).unwrap();
        let t22 = Transversal::new(2, vec![2, 2]).unwrap();
        let dependent = Arrangement::new(2, vec![t11, t22]).unwrap();
        let report = verify_arrangement(&inst, &dependent);
        assert!(!report.ok);
        assert!(
            report.reasons.iter().any(|r| r.contains("column 1 not a basis")),
            "{:?}",
            report.reasons
        );
    }

    #[test]
    fn random_instances_are_valid_and_solvable() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for field in [FieldSpec::PrimeField(5), FieldSpec::Rationals] {
            for _ in 0..5 {
                let inst = random_instance(3, field, &mut rng).unwrap();
                let outcome = find_arrangement(&inst).unwrap();
                let arrangement = outcome.arrangement().expect("n = 3 must be solvable");
                assert!(verify_arrangement(&inst, arrangement).ok);
            }
        }
    }

    #[test]
    fn coordinate_change_preserves_basis_transversals() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let field = FieldSpec::PrimeField(5);
        let inst = random_instance(3, field, &mut rng).unwrap();
        let before = basis_transversals(&inst).unwrap();

        // Invertible coordinate change applied to every vector of every row.
        let m = loop {
            let entries: Vec<BigInt> = (0..9).map(|_| BigInt::from(rng.random_range(0..5))).collect();
            let candidate = IntMatrix::from_entries(3, 3, entries).unwrap();
            if candidate.rank_over_field(&field) == 3 {
                break candidate;
            }
        };
        let changed_bases: Vec<Vec<BigRational>> = (0..3)
            .map(|row| {
                let mut flat = Vec::with_capacity(9);
                for col in 0..3 {
                    // Row vector times m.
                    let v = inst.vector(row, col);
                    for j in 0..3 {
                        let mut acc = BigRational::zero();
                        for (i, vi) in v.iter().enumerate() {
                            acc += vi * BigRational::from_integer(m.entry(i, j).clone());
                        }
                        flat.push(acc);
                    }
                }
                flat
            })
            .collect();
        let changed = RotaInstance::new(3, field, changed_bases).unwrap();
        assert_eq!(basis_transversals(&changed).unwrap(), before);
    }
}
