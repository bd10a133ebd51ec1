//! `ccsynth`: synthesis, classification, verification and optimality
//! evidence for three-qubit controlled gates.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error or cost
//! guard, 3 invalid input.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use ccsynth_core::circuit::{matrix_from_json, Circuit};
use ccsynth_core::linalg::{infidelity, phase_distance, ComplexMatrix, EQUALITY_TOL};
use ccsynth_core::search::{optimality_evidence, SearchConfig};
use ccsynth_core::{gates, kak, synthesis, Error};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

#[derive(Parser)]
#[command(name = "ccsynth", version, about = "Three-qubit controlled gates from two-qubit gates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generic lower bound on two-qubit gates for an n-qubit unitary.
    LowerBound { n: u32 },
    /// Print a circuit for `fredkin`, `toffoli` or `ccu`.
    Synth {
        target: String,
        #[command(flatten)]
        u: USpec,
        /// Print a QASM-style listing instead of JSON.
        #[arg(long)]
        listing: bool,
    },
    /// Classify the doubly controlled u by eigenphases and determinant.
    Classify {
        #[command(flatten)]
        u: USpec,
    },
    /// Check a circuit file against a target; exit 1 on mismatch.
    Verify {
        circuit: PathBuf,
        /// `fredkin`, `toffoli`, `ccu`, or a file holding an 8x8 matrix.
        target: String,
        #[command(flatten)]
        u: USpec,
    },
    /// Multi-start search over all structures up to --kmax gates.
    Evidence {
        /// `fredkin`, `toffoli`, `ccu`, or a file holding an 8x8 matrix.
        target: String,
        #[command(flatten)]
        u: USpec,
        #[arg(long, default_value_t = 5)]
        kmax: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        restarts: usize,
        #[arg(long = "max-iter", default_value_t = 2000)]
        max_iter: usize,
    },
    /// Canonical decomposition of a 4x4 unitary read from a file.
    Kak { file: PathBuf },
}

/// One-qubit `u` for the doubly controlled family.
#[derive(Args, Clone)]
struct USpec {
    /// Named gate (I, X, Y, Z, H, S, T), inline JSON [[[re,im],..],..], or 8 reals.
    #[arg(long, conflicts_with = "diag")]
    u: Option<String>,
    /// diag(e^{iθ1}, e^{iθ2}), radians.
    #[arg(long, num_args = 2, allow_negative_numbers = true, value_names = ["THETA1", "THETA2"])]
    diag: Option<Vec<f64>>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }

    fn input(message: impl Into<String>) -> Self {
        Self { code: 3, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CostGuard { .. } | Error::InvalidQubitCount(_) | Error::InvalidConfig(_) => 2,
            _ => 3,
        };
        Self { code, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

fn named_gate(name: &str) -> Option<ComplexMatrix> {
    let s = Complex64::new(0.0, 1.0);
    Some(match name.to_ascii_uppercase().as_str() {
        "I" => gates::identity2(),
        "X" => gates::x(),
        "Y" => gates::y(),
        "Z" => gates::z(),
        "H" => gates::h(),
        "S" => ComplexMatrix::diag(&[Complex64::new(1.0, 0.0), s]),
        "T" => ComplexMatrix::diag_phases(&[0.0, std::f64::consts::FRAC_PI_4]),
        _ => return None,
    })
}

impl USpec {
    fn resolve(&self) -> Result<Option<ComplexMatrix>, Failure> {
        if let Some(d) = &self.diag {
            return Ok(Some(ComplexMatrix::diag_phases(&[d[0], d[1]])));
        }
        let Some(text) = self.u.as_deref() else {
            return Ok(None);
        };
        let text = text.trim();
        let m = if let Some(g) = named_gate(text) {
            g
        } else if text.starts_with('[') {
            matrix_from_json(text)?
        } else {
            let reals: Vec<f64> = text
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| Failure::input(format!("--u: {e}")))?;
            if reals.len() != 8 {
                return Err(Failure::input(format!(
                    "--u: expected a gate name, a JSON matrix or 8 reals, got `{text}`"
                )));
            }
            let entries = reals.chunks(2).map(|p| Complex64::new(p[0], p[1])).collect();
            ComplexMatrix::new(2, 2, entries)?
        };
        if m.shape() != (2, 2) {
            return Err(Failure::input(format!("--u must be 2x2, got {}x{}", m.rows(), m.cols())));
        }
        Ok(Some(m))
    }

    fn require(&self) -> Result<ComplexMatrix, Failure> {
        self.resolve()?
            .ok_or_else(|| Failure::usage("target `ccu` needs --u or --diag"))
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// A target's matrix, a display name, and constructions usable as witnesses.
fn resolve_target(name: &str, u: &USpec) -> Result<(ComplexMatrix, String, Vec<Circuit>), Failure> {
    match name {
        "fredkin" => Ok((gates::fredkin(), name.into(), vec![synthesis::synth_fredkin()])),
        "toffoli" => Ok((gates::toffoli(), name.into(), vec![synthesis::synth_ccu(&gates::x())?])),
        "ccu" => {
            let m = u.require()?;
            let target = synthesis::ccu_target(&m)?;
            let witness = synthesis::synth_ccu(&m)?;
            let witnesses = if witness.is_empty() { vec![] } else { vec![witness] };
            Ok((target, "ccu".into(), witnesses))
        }
        path => {
            let p = Path::new(path);
            if !p.exists() {
                return Err(Failure::usage(format!(
                    "unknown target `{path}` (expected fredkin, toffoli, ccu or a matrix file)"
                )));
            }
            let m = matrix_from_json(&read_file(p)?)?;
            if m.shape() != (8, 8) {
                return Err(Failure::input(format!("target matrix must be 8x8, got {}x{}", m.rows(), m.cols())));
            }
            m.require_unitary(ccsynth_core::linalg::UNITARY_TOL)?;
            Ok((m, path.into(), vec![]))
        }
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("value serializes"));
}

fn cmd_lower_bound(n: u32) -> Outcome {
    if n < 2 {
        return Err(Failure::usage(format!("n must be at least 2, got {n}")));
    }
    println!("{}", synthesis::lower_bound(n)?);
    Ok(0)
}

fn cmd_synth(target: &str, u: &USpec, listing: bool) -> Outcome {
    let (matrix, circuit) = match target {
        "fredkin" => (gates::fredkin(), synthesis::synth_fredkin()),
        "toffoli" => (gates::toffoli(), synthesis::synth_ccu(&gates::x())?),
        "ccu" => {
            let m = u.require()?;
            (synthesis::ccu_target(&m)?, synthesis::synth_ccu(&m)?)
        }
        other => return Err(Failure::usage(format!("unknown synth target `{other}`"))),
    };
    let distance = phase_distance(&circuit.unitary(), &matrix)?;
    if distance >= EQUALITY_TOL {
        eprintln!("self-check failed: phase distance {distance:e}");
        return Ok(1);
    }
    if listing {
        print!("{}", circuit.to_listing());
    } else {
        println!("{}", circuit.to_json());
    }
    Ok(0)
}

fn cmd_classify(u: &USpec) -> Outcome {
    let m = u.require()?;
    print_json(&synthesis::classify_ccu(&m)?.to_json());
    Ok(0)
}

fn cmd_verify(path: &Path, target: &str, u: &USpec) -> Outcome {
    let circuit = Circuit::from_json(&read_file(path)?)?;
    let (matrix, name, _) = resolve_target(target, u)?;
    let full = circuit.unitary();
    let distance = phase_distance(&full, &matrix)?;
    let pass = distance < EQUALITY_TOL;
    print_json(&serde_json::json!({
        "target": name,
        "phase_distance": distance,
        "infidelity": infidelity(&full, &matrix)?,
        "tolerance": EQUALITY_TOL,
        "gates": circuit.len(),
        "merged_gates": circuit.merge_adjacent().len(),
        "pass": pass,
    }));
    Ok(if pass { 0 } else { 1 })
}

fn cmd_evidence(target: &str, u: &USpec, kmax: usize, seed: u64, restarts: usize, max_iter: usize) -> Outcome {
    let (matrix, name, witnesses) = resolve_target(target, u)?;
    let cfg = SearchConfig {
        restarts,
        max_iterations: max_iter,
        seed,
        ..Default::default()
    };
    let report = optimality_evidence(&matrix, &name, kmax, &cfg, &witnesses)?;
    println!("{}", report.to_json());
    Ok(0)
}

fn cmd_kak(path: &Path) -> Outcome {
    let m = matrix_from_json(&read_file(path)?)?;
    let k = kak::kak_decompose(&m)?;
    print_json(&k.to_json());
    Ok(0)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::LowerBound { n } => cmd_lower_bound(n),
        Command::Synth { target, u, listing } => cmd_synth(&target, &u, listing),
        Command::Classify { u } => cmd_classify(&u),
        Command::Verify { circuit, target, u } => cmd_verify(&circuit, &target, &u),
        Command::Evidence {
            target,
            u,
            kmax,
            seed,
            restarts,
            max_iter,
        } => cmd_evidence(&target, &u, kmax, seed, restarts, max_iter),
        Command::Kak { file } => cmd_kak(&file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
