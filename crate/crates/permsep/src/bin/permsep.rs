//! Batch command-line interface: classification, criterion evaluation,
//! entanglement witness checks, and state-file generation.
//!
//! Exit codes: 0 success (for `witness`: entanglement detected), 1 for a
//! clean negative (`witness` without detection, `classify --oracle`
//! mismatch), 2 usage or state-spec errors, 3 invalid state file.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use permsep::classifier::{
    census_summary, enumerate_classes, oracle_grouping, ClassCensus, ClassLabel,
    DEFAULT_ORACLE_SAMPLES, DEFAULT_ORACLE_SEED, DEFAULT_SPECTRA_TOL,
};
use permsep::criteria::{evaluate_criterion, CriterionVerdict, DEFAULT_DETECTION_TOL};
use permsep::states::{generate, read_state, spec_from_parts, write_state};
use permsep::tensor::DensityMatrix;
use permsep::Error;

/// Thread-count override honored before any parallel work starts.
const THREADS_ENV: &str = "PERMSEP_THREADS";

#[derive(Parser)]
#[command(
    name = "permsep",
    version,
    about = "Permutation-of-indices separability criteria for multipartite density matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate equivalence classes of index permutations, optionally
    /// cross-checked by the numerical grouping oracle.
    Classify {
        /// Number of parties (1..=5).
        #[arg(long)]
        parties: usize,
        /// Common subsystem dimension used by the oracle.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        /// Random samples the oracle draws.
        #[arg(long, default_value_t = DEFAULT_ORACLE_SAMPLES)]
        samples: usize,
        /// Oracle RNG seed.
        #[arg(long, default_value_t = DEFAULT_ORACLE_SEED)]
        seed: u64,
        /// Also run the numerical oracle and report MATCH/MISMATCH.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Evaluate permutation criteria on a state file.
    Evaluate {
        /// Path to a JSON state file.
        #[arg(long)]
        state: PathBuf,
        /// all | pt | realign | a class id such as k1,b2
        #[arg(long, default_value = "all")]
        criteria: String,
        /// Detection slack over the separable bound 1.
        #[arg(long, default_value_t = DEFAULT_DETECTION_TOL)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// One-line entanglement verdict over all non-trivial criteria.
    Witness {
        /// Path to a JSON state file.
        #[arg(long)]
        state: PathBuf,
        /// Detection slack over the separable bound 1.
        #[arg(long, default_value_t = DEFAULT_DETECTION_TOL)]
        tol: f64,
    },
    /// Write a named or random state to a JSON file.
    GenState {
        /// bell | ghz | w | werner:p | isotropic:f | mixed | random |
        /// random-separable
        #[arg(long)]
        name: String,
        /// Subsystem dimensions, e.g. 2,2,2.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// Seed for the random variants.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Rank for --name random (default: full rank).
        #[arg(long)]
        rank: Option<usize>,
        /// Product terms for --name random-separable (default: 8).
        #[arg(long)]
        terms: Option<usize>,
        /// Output path.
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn fail(code: u8, message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    // Die quietly when the reader closes the pipe (`permsep … | head`),
    // like other line-oriented tools, instead of panicking on EPIPE.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    if let Ok(threads) = std::env::var(THREADS_ENV) {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => return fail(2, format!("{THREADS_ENV} must be a positive integer")),
        }
    }
    match Cli::parse().command {
        Command::Classify {
            parties,
            dim,
            samples,
            seed,
            oracle,
            format,
        } => cmd_classify(parties, dim, samples, seed, oracle, format),
        Command::Evaluate {
            state,
            criteria,
            tol,
            format,
        } => cmd_evaluate(&state, &criteria, tol, format),
        Command::Witness { state, tol } => cmd_witness(&state, tol),
        Command::GenState {
            name,
            dims,
            seed,
            rank,
            terms,
            output,
        } => cmd_gen_state(&name, &dims, seed, rank, terms, &output),
    }
}

fn census_json(census: &[ClassCensus]) -> Vec<serde_json::Value> {
    census
        .iter()
        .map(|c| {
            json!({
                "label": c.class.label().to_string(),
                "id": c.class.id(),
                "population": c.population,
                "representative": c.class.representative().map(),
            })
        })
        .collect()
}

fn cmd_classify(
    parties: usize,
    dim: usize,
    samples: usize,
    seed: u64,
    oracle: bool,
    format: Format,
) -> ExitCode {
    let started = Instant::now();
    let census = match enumerate_classes(parties) {
        Ok(census) => census,
        Err(err) => return fail(2, err),
    };
    let summary = census_summary(parties, &census);

    let oracle_outcome = if oracle {
        match oracle_grouping(parties, dim, samples, seed, DEFAULT_SPECTRA_TOL) {
            Ok(grouping) => Some((grouping.len(), grouping.matches(&census))),
            Err(err) => return fail(2, err),
        }
    } else {
        None
    };

    match format {
        Format::Json => {
            let report = json!({
                "command": "classify",
                "parties": parties,
                "dim": dim,
                "classes": census_json(&census),
                "summary": summary,
                "oracle": oracle_outcome.map(|(groups, matched)| json!({
                    "samples": samples,
                    "seed": seed,
                    "tol": DEFAULT_SPECTRA_TOL,
                    "groups": groups,
                    "match": matched,
                })),
                "elapsed_ms": started.elapsed().as_millis() as u64,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("serializable report")
            );
        }
        Format::Table => {
            let label_width = census
                .iter()
                .map(|c| c.class.label().to_string().chars().count())
                .max()
                .unwrap_or(5)
                .max(5);
            let id_width = census
                .iter()
                .map(|c| c.class.id().len())
                .max()
                .unwrap_or(2)
                .max(2);
            println!(
                "{:<label_width$}  {:<id_width$}  {:>10}  representative",
                "label", "id", "population"
            );
            for c in &census {
                println!(
                    "{:<label_width$}  {:<id_width$}  {:>10}  {:?}",
                    c.class.label().to_string(),
                    c.class.id(),
                    c.population,
                    c.class.representative().map(),
                );
            }
            println!("{summary}");
            if let Some((groups, matched)) = oracle_outcome {
                println!(
                    "oracle: {groups} spectral groups ({samples} samples, seed {seed}) — {}",
                    if matched { "MATCH" } else { "MISMATCH" }
                );
            }
        }
    }

    match oracle_outcome {
        Some((_, false)) => ExitCode::from(1),
        _ => ExitCode::SUCCESS,
    }
}

fn select_classes<'c>(
    census: &'c [ClassCensus],
    selector: &str,
) -> Result<Vec<&'c ClassCensus>, String> {
    let nontrivial = || {
        census
            .iter()
            .filter(|c| c.class.label() != &ClassLabel::Trivial)
    };
    let selected: Vec<&ClassCensus> = match selector {
        "all" => nontrivial().collect(),
        "pt" => nontrivial()
            .filter(|c| matches!(c.class.label(), ClassLabel::PartialTranspose { .. }))
            .collect(),
        "realign" => nontrivial()
            .filter(|c| matches!(c.class.label(), ClassLabel::Realign { .. }))
            .collect(),
        id => nontrivial().filter(|c| c.class.id() == id).collect(),
    };
    if selected.is_empty() {
        return Err(format!(
            "--criteria {selector} selects no class; use all, pt, realign, or a class id like {}",
            census
                .iter()
                .find(|c| c.class.label() != &ClassLabel::Trivial)
                .map(|c| c.class.id())
                .unwrap_or_else(|| "k1,b2".into())
        ));
    }
    Ok(selected)
}

fn evaluate_selected(
    rho: &DensityMatrix,
    census: &[ClassCensus],
    selector: &str,
    tol: f64,
) -> Result<Vec<CriterionVerdict>, ExitCode> {
    let selected = match select_classes(census, selector) {
        Ok(selected) => selected,
        Err(message) => return Err(fail(2, message)),
    };
    selected
        .iter()
        .map(|c| evaluate_criterion(rho, c.class.representative(), tol))
        .collect::<Result<Vec<_>, Error>>()
        .map_err(|err| fail(2, err))
}

fn load_state(path: &Path) -> Result<DensityMatrix, ExitCode> {
    read_state(path).map_err(|err| fail(3, format!("{}: {err}", path.display())))
}

fn cmd_evaluate(path: &Path, selector: &str, tol: f64, format: Format) -> ExitCode {
    let started = Instant::now();
    let rho = match load_state(path) {
        Ok(rho) => rho,
        Err(code) => return code,
    };
    let census = match enumerate_classes(rho.subsystems().party_count()) {
        Ok(census) => census,
        Err(err) => return fail(2, err),
    };
    let verdicts = match evaluate_selected(&rho, &census, selector, tol) {
        Ok(verdicts) => verdicts,
        Err(code) => return code,
    };

    match format {
        Format::Json => {
            let results: Vec<serde_json::Value> = verdicts
                .iter()
                .map(|v| {
                    json!({
                        "label": v.class.label().to_string(),
                        "id": v.class.id(),
                        "representative": v.class.representative().map(),
                        "value": v.value,
                        "printed": format!("{:.12}", v.value),
                        "detected": v.detected,
                    })
                })
                .collect();
            let report = json!({
                "command": "evaluate",
                "state": path.display().to_string(),
                "dims": rho.subsystems().dims(),
                "criteria": selector,
                "tolerance": tol,
                "trivial_class_note": "identity class omitted; its value is identically 1",
                "results": results,
                "elapsed_ms": started.elapsed().as_millis() as u64,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("serializable report")
            );
        }
        Format::Table => {
            let label_width = verdicts
                .iter()
                .map(|v| v.class.label().to_string().chars().count())
                .max()
                .unwrap_or(5)
                .max(5);
            println!("{:<label_width$}  {:>16}  detected", "class", "value");
            for v in &verdicts {
                println!(
                    "{:<label_width$}  {:>16.12}  {}",
                    v.class.label().to_string(),
                    v.value,
                    if v.detected { "yes" } else { "no" }
                );
            }
        }
    }
    ExitCode::SUCCESS
}

fn cmd_witness(path: &Path, tol: f64) -> ExitCode {
    let rho = match load_state(path) {
        Ok(rho) => rho,
        Err(code) => return code,
    };
    let census = match enumerate_classes(rho.subsystems().party_count()) {
        Ok(census) => census,
        Err(err) => return fail(2, err),
    };
    let verdicts = match evaluate_selected(&rho, &census, "all", tol) {
        Ok(verdicts) => verdicts,
        Err(code) => return code,
    };
    let detectors: Vec<String> = verdicts
        .iter()
        .filter(|v| v.detected)
        .map(|v| v.class.label().to_string())
        .collect();
    if detectors.is_empty() {
        println!("NOT DETECTED (state may still be entangled)");
        ExitCode::from(1)
    } else {
        println!("ENTANGLED (detected by: {})", detectors.join(", "));
        ExitCode::SUCCESS
    }
}

fn cmd_gen_state(
    name: &str,
    dims: &[usize],
    seed: u64,
    rank: Option<usize>,
    terms: Option<usize>,
    output: &Path,
) -> ExitCode {
    let spec = match spec_from_parts(name, dims, seed, rank, terms) {
        Ok(spec) => spec,
        Err(err) => return fail(2, err),
    };
    let rho = match generate(&spec) {
        Ok(rho) => rho,
        Err(err) => return fail(2, err),
    };
    match write_state(&rho, output) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => fail(1, format!("{}: {err}", output.display())),
    }
}
