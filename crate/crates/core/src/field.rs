//! Exact field arithmetic over the rationals and the prime fields GF(p),
//! plus exact-rank routines (Gaussian elimination, incremental echelon forms).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The field a computation runs over. `PrimeField(p)` carries a checked prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u64),
}

impl FieldSpec {
    /// Builds a GF(p) spec, rejecting composite or unit moduli.
    pub fn prime_field(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// Parses `"Q"` or `"GF(p)"`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldSpec::Rationals);
        }
        if let Some(inner) = s.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
            let p: u64 = inner
                .trim()
                .parse()
                .map_err(|_| Error::Instance(format!("invalid field modulus in '{s}'")))?;
            return Self::prime_field(p);
        }
        Err(Error::Instance(format!(
            "unknown field '{s}' (expected \"Q\" or \"GF(p)\")"
        )))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "GF({p})"),
        }
    }
}

/// Trial division; moduli in this crate stay small.
fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Context object providing exact arithmetic on its element type.
pub trait Field {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn embed_int(&self, z: &BigInt) -> Self::Elem;
}

/// The rational numbers with arbitrary-precision numerator and denominator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn embed_int(&self, z: &BigInt) -> BigRational {
        BigRational::from_integer(z.clone())
    }
}

/// GF(p) with elements stored as canonical representatives in `0..p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(PrimeField { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Canonical representative of an arbitrary integer.
    pub fn reduce_bigint(&self, z: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        z.mod_floor(&m).to_u64().expect("residue fits u64")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + (self.p - *b) as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // Extended Euclid on (a, p); p prime so gcd is 1.
        let (mut r0, mut r1) = (*a as i128, self.p as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(s0.rem_euclid(self.p as i128) as u64)
    }
    fn embed_int(&self, z: &BigInt) -> u64 {
        self.reduce_bigint(z)
    }
}

/// Row-echelon accumulator supporting incremental independence queries.
///
/// Stored rows are normalized so their leading entry is one and keep zeros
/// strictly before the pivot column, which makes a single ascending-pivot
/// reduction pass sufficient.
pub struct Echelon<'f, F: Field> {
    field: &'f F,
    dim: usize,
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<'f, F: Field> Echelon<'f, F> {
    pub fn new(field: &'f F, dim: usize) -> Self {
        Echelon {
            field,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce_in_place(&self, v: &mut [F::Elem]) -> Option<usize> {
        for (pivot, row) in &self.rows {
            if !self.field.is_zero(&v[*pivot]) {
                let c = v[*pivot].clone();
                for j in *pivot..self.dim {
                    let delta = self.field.mul(&c, &row[j]);
                    v[j] = self.field.sub(&v[j], &delta);
                }
            }
        }
        v.iter().position(|x| !self.field.is_zero(x))
    }

    /// True if `v` lies outside the current row span.
    pub fn accepts(&self, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w).is_some()
    }

    /// Reduces and inserts `v`; returns false (and leaves the span unchanged)
    /// when `v` is dependent on the rows already stored.
    pub fn insert(&mut self, v: Vec<F::Elem>) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut w = v;
        let Some(pivot) = self.reduce_in_place(&mut w) else {
            return false;
        };
        let lead_inv = self
            .field
            .inv(&w[pivot])
            .expect("pivot entry is nonzero by construction");
        for x in &mut w[pivot..] {
            *x = self.field.mul(x, &lead_inv);
        }
        let pos = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(pos, (pivot, w));
        true
    }

    pub fn clone_state(&self) -> Vec<(usize, Vec<F::Elem>)> {
        self.rows.clone()
    }

    pub fn restore_state(&mut self, rows: Vec<(usize, Vec<F::Elem>)>) {
        self.rows = rows;
    }
}

/// Rank of the given rows, all of length `dim`, over `field`.
pub fn rank_rows<F: Field>(
    field: &F,
    dim: usize,
    rows: impl IntoIterator<Item = Vec<F::Elem>>,
) -> usize {
    let mut ech = Echelon::new(field, dim);
    for row in rows {
        ech.insert(row);
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(97));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(!is_prime(91)); // 7 * 13
        assert!(FieldSpec::prime_field(6).is_err());
        assert!(FieldSpec::prime_field(5).is_ok());
    }

    #[test]
    fn parse_field_spec() {
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rationals);
        assert_eq!(FieldSpec::parse("GF(5)").unwrap(), FieldSpec::PrimeField(5));
        assert!(FieldSpec::parse("GF(4)").is_err());
        assert!(FieldSpec::parse("R").is_err());
        assert_eq!(FieldSpec::PrimeField(7).to_string(), "GF(7)");
    }

    #[test]
    fn gfp_inverses() {
        let f = PrimeField::new(7).unwrap();
        for a in 1..7u64 {
            let inv = f.inv(&a).unwrap();
            assert_eq!(f.mul(&a, &inv), 1, "a = {a}");
        }
        assert_eq!(f.inv(&0), None);
        assert_eq!(f.reduce_bigint(&BigInt::from(-3)), 4);
    }

    #[test]
    fn echelon_rank_rationals() {
        let f = Rationals;
        let q = |x: i64| BigRational::from_integer(BigInt::from(x));
        let rows = vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(0), q(1), q(1)],
        ];
        assert_eq!(rank_rows(&f, 3, rows), 2);
    }

    #[test]
    fn echelon_accepts_matches_insert() {
        let f = PrimeField::new(3).unwrap();
        let mut ech = Echelon::new(&f, 3);
        assert!(ech.accepts(&[1, 0, 2]));
        assert!(ech.insert(vec![1, 0, 2]));
        // (2, 0, 1) = 2 * (1, 0, 2) mod 3
        assert!(!ech.accepts(&[2, 0, 1]));
        assert!(!ech.insert(vec![2, 0, 1]));
        assert!(ech.insert(vec![0, 1, 0]));
        assert_eq!(ech.rank(), 2);
    }
}
