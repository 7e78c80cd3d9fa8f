//! `lca`: batch front end for lca-core.
//!
//! Every command reads and writes canonical JSON. Exit codes: 0 certified
//! positive, 10 certified negative (witness enclosed), 20 inconclusive at
//! the given bounds; see [`exit_code`] for error classes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use lca_core::counterexamples::{
    sigma_nonreversibility_witness, sigma_prime_closure_witness, sigma_prime_forced_support,
};
use lca_core::format::{
    ca_from_json, ca_hash, ca_to_json, canonical_string, closure_certificate, config_from_json,
    element_from_json, forced_support_certificate, group_from_json, parse, pattern_to_json,
    preimage_certificate, reversible_certificate, sigma_witness_certificate, value_from_json,
    verify_certificate, witness_certificate, config_to_json, ValueFile,
};
use lca_core::groups::{subgroup_generated, Embedding, GroupKind, Subgroup};
use lca_core::ml::{invert_ca, kernel_witness, preimage_extract, InvertOptions, InvertOutcome, PreimageOptions, PreimageOutcome, Witness};
use lca_core::transfer::{induce, restrict};
use lca_core::{Error, Fp, GroupDescriptor, GroupElement, LinearCA, Matrix};

const POSITIVE: u8 = 0;
const NEGATIVE: u8 = 10;
const UNKNOWN: u8 = 20;

#[derive(Parser)]
#[command(name = "lca", version, about = "Linear cellular automata over finitely generated groups")]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply an automaton to a configuration or pattern.
    Eval { ca: PathBuf, input: PathBuf },
    /// The composition `outer ∘ inner`.
    Compose { outer: PathBuf, inner: PathBuf },
    /// Search for a two-sided inverse, or a witness that none exists.
    Invert {
        ca: PathBuf,
        #[arg(long, default_value_t = 8)]
        max_radius: usize,
        /// Largest period tried by the periodic kernel search on Z.
        #[arg(long, default_value_t = 8)]
        period_bound: usize,
    },
    /// Search for a nonzero configuration in the kernel.
    KernelWitness {
        ca: PathBuf,
        /// Supports are searched inside balls of radius up to this bound.
        #[arg(long, default_value_t = 6)]
        max_radius: usize,
        #[arg(long, default_value_t = 8)]
        period_bound: usize,
    },
    /// Extract a pattern on `A_N` whose image matches the target on `B_N`.
    Preimage {
        ca: PathBuf,
        target: PathBuf,
        #[arg(long, default_value_t = 6)]
        window: usize,
        #[arg(long, default_value_t = 14)]
        cutoff: usize,
        #[arg(long, default_value_t = 2)]
        plateau_k: usize,
    },
    /// Restrict to the subgroup generated by the given elements.
    Restrict {
        ca: PathBuf,
        /// JSON array of elements of the automaton's group, inline or as a file.
        #[arg(long)]
        generators: String,
    },
    /// Induce an automaton over `H` to an ambient group along an embedding.
    Induce {
        ca: PathBuf,
        /// Ambient group descriptor, inline JSON or a file.
        #[arg(long)]
        ambient: String,
        /// JSON array of ambient elements: the image of 1 (H = Z), of the
        /// basis (H = Z^r) or of every element id (H finite).
        #[arg(long)]
        images: String,
    },
    /// Emit certificates for the built-in counterexamples.
    Demo {
        which: Demo,
        /// Prime of the base field.
        #[arg(long, default_value_t = 2)]
        p: u64,
        /// `sigma`: index of the witness block.
        #[arg(long, default_value_t = 2)]
        j0: usize,
        /// `sigma-prime`: depth of the forced-support system.
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// `sigma`: radius of the agreement window; `sigma-prime`: half-width m.
        #[arg(long)]
        window: Option<usize>,
        /// `random`: seed of the generator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `random`: alphabet dimension.
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Re-check a certificate, or an array of certificates.
    Verify { certificate: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    Sigma,
    SigmaPrime,
    /// A seeded random automaton over Z with memory in {-1, 0, 1}.
    Random,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 3,
        Error::ForeignElement { .. }
        | Error::GroupMismatch(_)
        | Error::FieldMismatch(..)
        | Error::DimensionMismatch(_)
        | Error::NotInSubgroup(_) => 4,
        Error::InvalidTable(_)
        | Error::InvalidGroup(_)
        | Error::NotPrime(_)
        | Error::InvalidRule(_)
        | Error::InvalidConfiguration(_)
        | Error::InvalidArgument(_)
        | Error::NotInjective(_) => 5,
        Error::Unsupported(_) => 6,
        Error::ResourceLimit(_) => 7,
    }
}

const IO_ERROR: u8 = 8;

enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = std::result::Result<(u8, Value), Failure>;

fn read_json(path: &Path) -> std::result::Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(parse(&text)?)
}

/// Inline JSON when the argument starts like JSON, a file path otherwise.
fn json_arg(arg: &str) -> std::result::Result<Value, Failure> {
    match arg.trim_start().chars().next() {
        Some('{' | '[') => Ok(parse(arg)?),
        _ => read_json(Path::new(arg)),
    }
}

fn read_ca(path: &Path) -> std::result::Result<LinearCA, Failure> {
    Ok(ca_from_json(&read_json(path)?)?)
}

fn elements(group: &GroupDescriptor, v: &Value) -> std::result::Result<Vec<GroupElement>, Failure> {
    let items = v.as_array().ok_or_else(|| Error::Parse("expected a JSON array of elements".into()))?;
    Ok(items.iter().map(|x| element_from_json(group, x)).collect::<lca_core::Result<_>>()?)
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Eval { ca, input } => {
            let ca = read_ca(&ca)?;
            let out = match value_from_json(ca.group(), ca.field(), &read_json(&input)?)? {
                ValueFile::Configuration(x) => config_to_json(&ca.apply_config(&x)?),
                ValueFile::Pattern(x) => pattern_to_json(&ca.apply_pattern(&x)?),
            };
            Ok((POSITIVE, out))
        }
        Command::Compose { outer, inner } => {
            let composed = read_ca(&outer)?.compose(&read_ca(&inner)?)?;
            Ok((POSITIVE, ca_to_json(&composed)))
        }
        Command::Invert { ca, max_radius, period_bound } => {
            let ca = read_ca(&ca)?;
            match invert_ca(&ca, InvertOptions { max_radius, period_bound })? {
                InvertOutcome::Reversible(cert) => Ok((POSITIVE, reversible_certificate(&cert)?)),
                InvertOutcome::NotInvertible(w) => Ok((NEGATIVE, witness_certificate(&ca, &w)?)),
                InvertOutcome::Unknown { max_radius } => Ok((UNKNOWN, unknown(&ca, json!({"max_radius": max_radius})))),
            }
        }
        Command::KernelWitness { ca, max_radius, period_bound } => {
            let ca = read_ca(&ca)?;
            match kernel_witness(&ca, max_radius, period_bound)? {
                Some(x) => Ok((NEGATIVE, witness_certificate(&ca, &Witness::Kernel(x))?)),
                None => Ok((
                    UNKNOWN,
                    unknown(&ca, json!({"max_radius": max_radius, "period_bound": period_bound})),
                )),
            }
        }
        Command::Preimage { ca, target, window, cutoff, plateau_k } => {
            let ca = read_ca(&ca)?;
            let y = config_from_json(ca.group(), ca.field(), &read_json(&target)?)?;
            match preimage_extract(&ca, &y, PreimageOptions { window, cutoff, plateau_k })? {
                PreimageOutcome::Found(r) => Ok((POSITIVE, preimage_certificate(&ca, &y, window, &r.pattern)?)),
                PreimageOutcome::NotInImage(w) => Ok((NEGATIVE, witness_certificate(&ca, &w)?)),
                PreimageOutcome::Unknown { level } => {
                    Ok((UNKNOWN, unknown(&ca, json!({"level": level, "cutoff": cutoff, "plateau_k": plateau_k}))))
                }
            }
        }
        Command::Restrict { ca, generators } => {
            let ca = read_ca(&ca)?;
            let gens = elements(ca.group(), &json_arg(&generators)?)?;
            let h = subgroup_generated(ca.group(), &gens)?;
            Ok((POSITIVE, ca_to_json(&restrict(&ca, &h)?)))
        }
        Command::Induce { ca, ambient, images } => {
            let ca = read_ca(&ca)?;
            let g = group_from_json(&json_arg(&ambient)?)?;
            let images = elements(&g, &json_arg(&images)?)?;
            let embedding = match ca.group().kind() {
                GroupKind::Integers if images.len() == 1 => Embedding::Cyclic { image: images[0].clone() },
                GroupKind::Lattice { .. } => Embedding::Lattice { images },
                GroupKind::Finite(_) => Embedding::Finite { images },
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "cannot read an embedding of {} from {} images",
                        ca.group(),
                        images.len()
                    ))
                    .into())
                }
            };
            let h = Subgroup::from_images(&g, ca.group(), embedding)?;
            Ok((POSITIVE, ca_to_json(&induce(&ca, &h)?)))
        }
        Command::Demo { which, p, j0, depth, window, seed, dim } => {
            let f = Fp::new(p)?;
            match which {
                Demo::Sigma => {
                    let w = sigma_nonreversibility_witness(j0, window.unwrap_or(j0 + 2), f)?;
                    Ok((NEGATIVE, sigma_witness_certificate(&w, f)?))
                }
                Demo::SigmaPrime => {
                    let closure = sigma_prime_closure_witness(window.unwrap_or(16), f)?;
                    let forced = sigma_prime_forced_support(depth, f)?;
                    Ok((
                        NEGATIVE,
                        json!([closure_certificate(&closure, f)?, forced_support_certificate(&forced, f)?]),
                    ))
                }
                Demo::Random => Ok((POSITIVE, ca_to_json(&random_ca(seed, f, dim)?))),
            }
        }
        Command::Verify { certificate } => {
            let v = read_json(&certificate)?;
            let certs = match &v {
                Value::Array(items) => items.clone(),
                _ => vec![v.clone()],
            };
            let mut reports = Vec::with_capacity(certs.len());
            let mut all = !certs.is_empty();
            for c in &certs {
                let r = verify_certificate(c)?;
                all &= r.holds;
                reports.push(json!({"kind": r.kind, "holds": r.holds, "reason": r.reason}));
            }
            Ok((if all { POSITIVE } else { NEGATIVE }, json!({"verified": all, "certificates": reports})))
        }
    }
}

fn unknown(ca: &LinearCA, bounds: Value) -> Value {
    json!({"kind": "unknown", "subject": {"hash": ca_hash(ca)}, "bounds": bounds})
}

fn random_ca(seed: u64, f: Fp, dim: usize) -> lca_core::Result<LinearCA> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks: Vec<(GroupElement, Matrix)> = Vec::new();
    for k in -1..=1 {
        if rng.gen_bool(0.25) {
            continue;
        }
        let rows: Vec<Vec<i64>> =
            (0..dim).map(|_| (0..dim).map(|_| rng.gen_range(0..f.p()) as i64).collect()).collect();
        blocks.push((GroupElement::Int(k), Matrix::from_rows(f, &rows)?));
    }
    LinearCA::from_blocks(GroupDescriptor::integers(), f, dim, blocks)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((code, value)) => {
            let text = canonical_string(&value);
            match &cli.output {
                Some(path) => {
                    if let Err(e) = fs::write(path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(IO_ERROR);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(code)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(IO_ERROR)
        }
    }
}
