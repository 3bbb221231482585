//! Exact integer linear algebra for the incidence structure of disjoint
//! transversals of an n x n array.
//!
//! The crate constructs the n^n x n^n 0/1 disjointness matrices, computes
//! their spectra and Smith normal forms both by closed forms and by
//! independent general-purpose algorithms, and searches instances of the
//! n-bases arrangement problem through the principal-submatrix reduction.
//! Every computation is exact: entries are arbitrary-precision integers,
//! field work happens over Q or GF(p), and nothing is ever rounded.
//!
//! The `parallel` feature (on by default) runs the data-parallel inner loops
//! (matrix fill, multiplication, eigenvector verification) on a rayon thread
//! pool; results are identical with the feature disabled.

pub mod error;
pub mod field;
pub mod matrix;
pub mod rota;
pub mod smith;
pub mod spectrum;
pub mod transversal;

pub use error::{Error, Result};

/// Pass/fail of a structural check, with human-readable reasons on failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub ok: bool,
    pub reasons: Vec<String>,
}

impl VerifyReport {
    pub fn pass() -> Self {
        VerifyReport {
            ok: true,
            reasons: Vec::new(),
        }
    }

    pub fn fail(reasons: Vec<String>) -> Self {
        VerifyReport { ok: false, reasons }
    }
}
