//! Command-line front end: matrix generation, spectra, Smith normal forms,
//! and arrangement checking, with machine-readable output.
//!
//! Exit codes: 0 on success (and verification passing), 1 when a requested
//! verification fails or a search is exhausted, 2 on usage, parse, or size
//! guard errors. Data goes to stdout (or `--out`), diagnostics to stderr.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use serde::{Deserialize, Serialize};

use transversals::field::FieldSpec;
use transversals::matrix::IntMatrix;
use transversals::rota;
use transversals::smith::{self, InvariantFactors, SnfResult};
use transversals::spectrum;
use transversals::transversal;
use transversals::Error;

/// Expanding a closed-form diagonal beyond this many entries is refused.
const DIAGONAL_EXPANSION_CAP: u64 = 100_000;

#[derive(Parser)]
#[command(name = "transversals", version, about = "Exact spectra, Smith normal forms, and arrangement checks for disjoint-transversal incidence matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the disjointness matrix A_n or the base matrix B_n as plain text
    GenMatrix {
        #[arg(long)]
        n: usize,
        /// Which matrix: the n^n x n^n disjointness matrix or the n x n base
        #[arg(long, value_enum, default_value_t = MatrixKind::A)]
        what: MatrixKind,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the dense size guard (n > 6 allocates beyond desk scale)
        #[arg(long)]
        force: bool,
    },
    /// Print the closed-form spectrum as JSON, optionally verified exactly
    Spectrum {
        #[arg(long)]
        n: usize,
        /// Check every tensor eigenvector against the dense matrix
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smith normal form of an arbitrary integer matrix read from a file
    Snf {
        /// Plain-text matrix file: a "rows cols" header, then the entries
        #[arg(long = "in")]
        input: PathBuf,
        /// Include the unimodular transforms in the output
        #[arg(long)]
        transforms: bool,
        /// JSON output instead of the plain-text matrix format
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smith normal form of the disjointness matrix family, as JSON
    SnfAn {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Structured)]
        method: Method,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Arrangement instances: n bases per row, disjoint spanning columns
    Rota {
        #[command(subcommand)]
        command: RotaCommand,
    },
}

#[derive(Subcommand)]
enum RotaCommand {
    /// Load an instance, search for an arrangement, and verify it
    Check {
        /// Instance JSON: {"n": ..., "field": "Q" | "GF(p)", "bases": [...]}
        #[arg(long = "in")]
        input: PathBuf,
        /// Also emit the basis-transversal ranks and their principal submatrix
        #[arg(long)]
        emit_submatrix: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate seeded random instances and check each one
    Random {
        #[arg(long)]
        n: usize,
        /// "Q" or "GF(p)"
        #[arg(long)]
        field: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixKind {
    A,
    B,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    General,
    Structured,
    ClosedForm,
}

#[derive(Serialize, Deserialize)]
struct SpectrumLineDoc {
    k: usize,
    eigenvalue: String,
    multiplicity: String,
}

#[derive(Serialize, Deserialize)]
struct SpectrumDoc {
    n: usize,
    lines: Vec<SpectrumLineDoc>,
    verified: bool,
}

#[derive(Serialize, Deserialize)]
struct FactorDoc {
    factor: String,
    multiplicity: u64,
}

#[derive(Serialize, Deserialize)]
struct SnfDoc {
    diagonal: Vec<String>,
    invariant_factors: Vec<FactorDoc>,
    verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    q: Option<Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize)]
struct RotaCheckDoc {
    n: usize,
    field: String,
    found: bool,
    arrangement: Option<Vec<Vec<usize>>>,
    verified: bool,
    nodes: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis_transversals: Option<Vec<u64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    submatrix: Option<Vec<Vec<u8>>>,
}

#[derive(Serialize, Deserialize)]
struct RotaRandomDoc {
    index: usize,
    found: bool,
    verified: bool,
    nodes: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, content)?,
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::GenMatrix { n, what, out, force } => {
            if n == 0 {
                return Err(Error::ZeroSize);
            }
            let matrix = match what {
                MatrixKind::B => transversal::build_b(n),
                MatrixKind::A if force => transversal::incidence_matrix_with_limit(n, n)?,
                MatrixKind::A => transversal::incidence_matrix(n)?,
            };
            emit(&out, &matrix.to_text())?;
            Ok(0)
        }
        Command::Spectrum { n, verify, out } => {
            if n == 0 {
                return Err(Error::ZeroSize);
            }
            let summary = spectrum::closed_form_spectrum(n);
            let verified = if verify {
                spectrum::verify_spectrum(n)?.ok()
            } else {
                false
            };
            let doc = SpectrumDoc {
                n,
                lines: summary
                    .lines
                    .iter()
                    .map(|l| SpectrumLineDoc {
                        k: l.k,
                        eigenvalue: l.eigenvalue.to_string(),
                        multiplicity: l.multiplicity.to_string(),
                    })
                    .collect(),
                verified,
            };
            emit(&out, &(serde_json::to_string(&doc).expect("serializable") + "\n"))?;
            Ok(if verify && !verified { 1 } else { 0 })
        }
        Command::Snf { input, transforms, json, out } => {
            let text = fs::read_to_string(&input)?;
            let a = IntMatrix::parse_text(&text)?;
            let result = smith::snf(&a);
            let verified = smith::verify_snf(&a, &result).ok;
            let content = if json {
                let mut doc = snf_doc(&result, verified);
                if transforms {
                    doc.p = Some(matrix_rows(&result.p));
                    doc.q = Some(matrix_rows(&result.q));
                }
                serde_json::to_string(&doc).expect("serializable") + "\n"
            } else if transforms {
                // Three self-delimiting plain blocks: d, p, q.
                format!(
                    "{}{}{}",
                    result.d.to_text(),
                    result.p.to_text(),
                    result.q.to_text()
                )
            } else {
                result.d.to_text()
            };
            emit(&out, &content)?;
            Ok(if verified { 0 } else { 1 })
        }
        Command::SnfAn { n, method, out } => {
            if n == 0 {
                return Err(Error::ZeroSize);
            }
            let closed = smith::closed_form_invariants(n);
            let (doc, ok) = match method {
                Method::General => {
                    let a = transversal::incidence_matrix(n)?;
                    let result = smith::snf(&a);
                    let verified = smith::verify_snf(&a, &result).ok
                        && result.d.diagonal() == closed.expanded_diagonal();
                    (snf_doc(&result, verified), verified)
                }
                Method::Structured => {
                    let result = smith::structured_snf(n)?;
                    let a = transversal::incidence_matrix(n)?;
                    let verified = smith::verify_snf(&a, &result).ok
                        && result.d.diagonal() == closed.expanded_diagonal();
                    (snf_doc(&result, verified), verified)
                }
                Method::ClosedForm => {
                    let verified = closed.is_consistent();
                    (closed_form_doc(&closed, verified), verified)
                }
            };
            emit(&out, &(serde_json::to_string(&doc).expect("serializable") + "\n"))?;
            Ok(if ok { 0 } else { 1 })
        }
        Command::Rota { command } => run_rota(command),
    }
}

fn run_rota(command: RotaCommand) -> Result<u8, Error> {
    match command {
        RotaCommand::Check { input, emit_submatrix, out } => {
            let inst = rota::load_instance(&input)?;
            let outcome = rota::find_arrangement(&inst)?;
            let (found, arrangement, verified) = match outcome.arrangement() {
                Some(arr) => (
                    true,
                    Some(
                        arr.columns()
                            .iter()
                            .map(|t| t.choices().to_vec())
                            .collect::<Vec<_>>(),
                    ),
                    rota::verify_arrangement(&inst, arr).ok,
                ),
                None => (false, None, false),
            };
            let (ranks, submatrix) = if emit_submatrix {
                let ranks = rota::basis_transversals(&inst)?;
                let sub = rota::principal_submatrix(inst.n(), &ranks)?;
                let rows: Vec<Vec<u8>> = (0..sub.rows())
                    .map(|r| {
                        sub.row(r)
                            .iter()
                            .map(|x| u8::try_from(x).expect("0/1 entry"))
                            .collect()
                    })
                    .collect();
                (Some(ranks), Some(rows))
            } else {
                (None, None)
            };
            let doc = RotaCheckDoc {
                n: inst.n(),
                field: inst.field().to_string(),
                found,
                arrangement,
                verified,
                nodes: outcome.nodes(),
                basis_transversals: ranks,
                submatrix,
            };
            emit(&out, &(serde_json::to_string(&doc).expect("serializable") + "\n"))?;
            Ok(if found && verified { 0 } else { 1 })
        }
        RotaCommand::Random { n, field, seed, count, out } => {
            let field = FieldSpec::parse(&field)?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut lines = String::new();
            let mut all_ok = true;
            for index in 0..count {
                let inst = rota::random_instance(n, field, &mut rng)?;
                let outcome = rota::find_arrangement(&inst)?;
                let (found, verified) = match outcome.arrangement() {
                    Some(arr) => (true, rota::verify_arrangement(&inst, arr).ok),
                    None => (false, false),
                };
                all_ok &= found && verified;
                let doc = RotaRandomDoc {
                    index,
                    found,
                    verified,
                    nodes: outcome.nodes(),
                };
                lines.push_str(&serde_json::to_string(&doc).expect("serializable"));
                lines.push('\n');
            }
            emit(&out, &lines)?;
            Ok(if all_ok { 0 } else { 1 })
        }
    }
}

fn matrix_rows(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|x| x.to_string()).collect())
        .collect()
}

/// Run-length encodes the diagonal into factor/multiplicity pairs.
fn factor_docs(diagonal: &[String]) -> Vec<FactorDoc> {
    let mut out: Vec<FactorDoc> = Vec::new();
    for value in diagonal {
        match out.last_mut() {
            Some(last) if &last.factor == value => last.multiplicity += 1,
            _ => out.push(FactorDoc {
                factor: value.clone(),
                multiplicity: 1,
            }),
        }
    }
    out
}

fn snf_doc(result: &SnfResult, verified: bool) -> SnfDoc {
    let diagonal: Vec<String> = result.d.diagonal().iter().map(|x| x.to_string()).collect();
    let invariant_factors = factor_docs(&diagonal);
    SnfDoc {
        diagonal,
        invariant_factors,
        verified,
        p: None,
        q: None,
    }
}

fn closed_form_doc(closed: &InvariantFactors, verified: bool) -> SnfDoc {
    let total: u64 = (closed.n as u64).checked_pow(closed.n as u32).unwrap_or(u64::MAX);
    let diagonal: Vec<String> = if total <= DIAGONAL_EXPANSION_CAP {
        closed
            .expanded_diagonal()
            .iter()
            .map(|x| x.to_string())
            .collect()
    } else {
        eprintln!(
            "note: diagonal with {total} entries not expanded; see invariant_factors"
        );
        Vec::new()
    };
    let invariant_factors = closed
        .lines
        .iter()
        .filter(|l| !l.multiplicity.eq(&0u64.into()))
        .map(|l| FactorDoc {
            factor: l.factor.to_string(),
            multiplicity: u64::try_from(&l.multiplicity).unwrap_or(u64::MAX),
        })
        .collect();
    SnfDoc {
        diagonal,
        invariant_factors,
        verified,
        p: None,
        q: None,
    }
}
