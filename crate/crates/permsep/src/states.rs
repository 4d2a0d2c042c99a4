//! Named and random test states, and the JSON state-file format.
//!
//! Random generators draw from ChaCha12 seeded explicitly, so every state is
//! reproducible across platforms from its spec alone. Files round-trip
//! bit-exactly: the writer emits every entry with 17 significant decimal
//! digits, enough to reconstruct the exact binary double.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Deserialize;

use crate::spectra::hermitian_eigenvalues;
use crate::tensor::{DensityMatrix, Subsystems};
use crate::{Error, Result};

/// Hermiticity tolerance for accepting a state read from a file.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Unit-trace tolerance for accepting a state read from a file.
pub const TRACE_TOL: f64 = 1e-12;
/// How far below zero the smallest eigenvalue may sit (solver slack).
pub const POSITIVITY_SLACK: f64 = 1e-10;

/// Recipe for a test state. Random variants carry their seed, making
/// generation a pure function of the spec.
#[derive(Clone, Debug, PartialEq)]
pub enum StateSpec {
    /// Two-qubit Φ⁺ = (|00⟩ + |11⟩)/√2 as a density matrix.
    Bell,
    /// (|0…0⟩ + … + |d−1…d−1⟩)/√d on `parties` subsystems of dimension `dim`.
    Ghz { parties: usize, dim: usize },
    /// Equal superposition of the single-excitation basis states on
    /// `parties` qubits.
    W { parties: usize },
    /// p·|Ψ⁻⟩⟨Ψ⁻| + (1−p)·I/4 on two qubits; entangled iff p > 1/3.
    Werner { p: f64 },
    /// f·|Φ⁺_d⟩⟨Φ⁺_d| + (1−f)·(I − |Φ⁺_d⟩⟨Φ⁺_d|)/(d²−1) on two qudits.
    Isotropic { fidelity: f64, dim: usize },
    /// I/D on the given subsystem dimensions.
    MaximallyMixed { dims: Vec<usize> },
    /// G·G†/tr(G·G†) for a D×rank complex standard-normal G.
    RandomMixed {
        dims: Vec<usize>,
        rank: usize,
        seed: u64,
    },
    /// Mixture of `terms` independent random product pure states with
    /// uniform-simplex weights — separable by construction.
    RandomSeparable {
        dims: Vec<usize>,
        terms: usize,
        seed: u64,
    },
    /// A single random product pure state.
    ProductPure { dims: Vec<usize>, seed: u64 },
}

fn unit_trace(mut entries: Vec<Complex64>, d: usize) -> Vec<Complex64> {
    let tr: f64 = (0..d).map(|i| entries[i * d + i].re).sum();
    for z in &mut entries {
        *z /= tr;
    }
    entries
}

fn outer(vec: &[Complex64]) -> Vec<Complex64> {
    let d = vec.len();
    let mut entries = vec![Complex64::ZERO; d * d];
    for r in 0..d {
        for c in 0..d {
            entries[r * d + c] = vec[r] * vec[c].conj();
        }
    }
    entries
}

fn random_unit_vector(rng: &mut ChaCha12Rng, d: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..d)
        .map(|_| {
            Complex64::new(
                rng.sample(rand_distr::StandardNormal),
                rng.sample(rand_distr::StandardNormal),
            )
        })
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut v {
        *z /= norm;
    }
    v
}

fn random_product_vector(rng: &mut ChaCha12Rng, dims: &[usize]) -> Vec<Complex64> {
    let mut vec = vec![Complex64::ONE];
    for &d in dims {
        let factor = random_unit_vector(rng, d);
        let mut next = Vec::with_capacity(vec.len() * d);
        for &a in &vec {
            for &b in &factor {
                next.push(a * b);
            }
        }
        vec = next;
    }
    vec
}

fn check_unit_interval(name: &str, value: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&value) || !value.is_finite() {
        return Err(Error::InvalidStateSpec(format!(
            "{name} must lie in [0, 1], got {value}"
        )));
    }
    Ok(())
}

/// Build the density matrix described by `spec`.
pub fn generate(spec: &StateSpec) -> Result<DensityMatrix> {
    match spec {
        StateSpec::Bell => {
            let subsystems = Subsystems::new(vec![2, 2])?;
            let mut entries = vec![Complex64::ZERO; 16];
            for &(r, c) in &[(0, 0), (0, 3), (3, 0), (3, 3)] {
                entries[r * 4 + c] = Complex64::new(0.5, 0.0);
            }
            DensityMatrix::from_parts(subsystems, entries)
        }
        StateSpec::Ghz { parties, dim } => {
            if *parties < 2 || *dim < 2 {
                return Err(Error::InvalidStateSpec(format!(
                    "GHZ needs at least 2 parties of dimension 2, got {parties} of dimension {dim}"
                )));
            }
            let subsystems = Subsystems::new(vec![*dim; *parties])?;
            let total = subsystems.total_dim();
            // |i,i,…,i⟩ has composite index i·(1 + d + … + d^{N−1}); the
            // density matrix has the exact entry 1/d on that support.
            let stride = (total - 1) / (dim - 1);
            let amp = Complex64::new(1.0 / *dim as f64, 0.0);
            let mut entries = vec![Complex64::ZERO; total * total];
            for i in 0..*dim {
                for j in 0..*dim {
                    entries[i * stride * total + j * stride] = amp;
                }
            }
            DensityMatrix::from_parts(subsystems, entries)
        }
        StateSpec::W { parties } => {
            if *parties < 2 {
                return Err(Error::InvalidStateSpec(format!(
                    "W needs at least 2 qubits, got {parties}"
                )));
            }
            let subsystems = Subsystems::new(vec![2; *parties])?;
            let total = subsystems.total_dim();
            // Support on the single-excitation basis states, exact weight 1/N.
            let amp = Complex64::new(1.0 / *parties as f64, 0.0);
            let mut entries = vec![Complex64::ZERO; total * total];
            for a in 0..*parties {
                for b in 0..*parties {
                    entries[(1 << (*parties - 1 - a)) * total + (1 << (*parties - 1 - b))] = amp;
                }
            }
            DensityMatrix::from_parts(subsystems, entries)
        }
        StateSpec::Werner { p } => {
            check_unit_interval("p", *p)?;
            let subsystems = Subsystems::new(vec![2, 2])?;
            // |Ψ⁻⟩ = (|01⟩ − |10⟩)/√2.
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let singlet = vec![
                Complex64::ZERO,
                Complex64::new(s, 0.0),
                Complex64::new(-s, 0.0),
                Complex64::ZERO,
            ];
            let mut entries = outer(&singlet);
            for z in &mut entries {
                *z *= *p;
            }
            for i in 0..4 {
                entries[i * 4 + i] += Complex64::new((1.0 - p) / 4.0, 0.0);
            }
            DensityMatrix::from_parts(subsystems, entries)
        }
        StateSpec::Isotropic { fidelity, dim } => {
            check_unit_interval("fidelity", *fidelity)?;
            if *dim < 2 {
                return Err(Error::InvalidStateSpec(format!(
                    "isotropic state needs dimension ≥ 2, got {dim}"
                )));
            }
            let d = *dim;
            let subsystems = Subsystems::new(vec![d, d])?;
            let amp = 1.0 / (d as f64).sqrt();
            let mut vec = vec![Complex64::ZERO; d * d];
            for i in 0..d {
                vec[i * d + i] = Complex64::new(amp, 0.0);
            }
            let projector = outer(&vec);
            let rest = (1.0 - fidelity) / ((d * d - 1) as f64);
            let mut entries: Vec<Complex64> =
                projector.iter().map(|z| z * (*fidelity - rest)).collect();
            for i in 0..d * d {
                entries[i * d * d + i] += Complex64::new(rest, 0.0);
            }
            DensityMatrix::from_parts(subsystems, entries)
        }
        StateSpec::MaximallyMixed { dims } => {
            let subsystems = Subsystems::new(dims.clone())?;
            let total = subsystems.total_dim();
            let mut entries = vec![Complex64::ZERO; total * total];
            for i in 0..total {
                entries[i * total + i] = Complex64::new(1.0 / total as f64, 0.0);
            }
            DensityMatrix::from_parts(subsystems, entries)
        }
        StateSpec::RandomMixed { dims, rank, seed } => {
            if *rank == 0 {
                return Err(Error::InvalidStateSpec("rank must be ≥ 1".into()));
            }
            let subsystems = Subsystems::new(dims.clone())?;
            let total = subsystems.total_dim();
            let mut rng = ChaCha12Rng::seed_from_u64(*seed);
            let g: Vec<Complex64> = (0..total * rank)
                .map(|_| {
                    Complex64::new(
                        rng.sample(rand_distr::StandardNormal),
                        rng.sample(rand_distr::StandardNormal),
                    )
                })
                .collect();
            let mut entries = vec![Complex64::ZERO; total * total];
            for r in 0..total {
                for c in 0..total {
                    let mut acc = Complex64::ZERO;
                    for k in 0..*rank {
                        acc += g[r * rank + k] * g[c * rank + k].conj();
                    }
                    entries[r * total + c] = acc;
                }
            }
            DensityMatrix::from_parts(subsystems, unit_trace(entries, total))
        }
        StateSpec::RandomSeparable { dims, terms, seed } => {
            if *terms == 0 {
                return Err(Error::InvalidStateSpec("terms must be ≥ 1".into()));
            }
            let subsystems = Subsystems::new(dims.clone())?;
            let total = subsystems.total_dim();
            let mut rng = ChaCha12Rng::seed_from_u64(*seed);
            // Exponential draws normalized to the simplex give uniform
            // mixing weights.
            let mut weights: Vec<f64> = (0..*terms)
                .map(|_| rng.sample::<f64, _>(rand_distr::Exp1))
                .collect();
            let sum: f64 = weights.iter().sum();
            for w in &mut weights {
                *w /= sum;
            }
            let mut entries = vec![Complex64::ZERO; total * total];
            for &w in &weights {
                let vec = random_product_vector(&mut rng, dims);
                for r in 0..total {
                    for c in 0..total {
                        entries[r * total + c] += w * vec[r] * vec[c].conj();
                    }
                }
            }
            DensityMatrix::from_parts(subsystems, entries)
        }
        StateSpec::ProductPure { dims, seed } => {
            let subsystems = Subsystems::new(dims.clone())?;
            let mut rng = ChaCha12Rng::seed_from_u64(*seed);
            let vec = random_product_vector(&mut rng, dims);
            DensityMatrix::from_parts(subsystems, outer(&vec))
        }
    }
}

/// Check the physical-state invariants, reporting the first violated one with
/// its measured magnitude.
pub fn validate(rho: &DensityMatrix) -> Result<()> {
    let herm = rho.hermiticity_defect();
    if herm > HERMITICITY_TOL {
        return Err(Error::InvariantViolation {
            what: "hermiticity",
            measured: herm,
            allowed: HERMITICITY_TOL,
        });
    }
    let trace_err = (rho.trace() - Complex64::ONE).norm();
    if trace_err > TRACE_TOL {
        return Err(Error::InvariantViolation {
            what: "trace",
            measured: trace_err,
            allowed: TRACE_TOL,
        });
    }
    let eigs = hermitian_eigenvalues(&rho.as_general())?;
    let smallest = eigs.first().copied().unwrap_or(0.0);
    if smallest < -POSITIVITY_SLACK {
        return Err(Error::InvariantViolation {
            what: "positivity",
            measured: smallest,
            allowed: POSITIVITY_SLACK,
        });
    }
    Ok(())
}

#[derive(Deserialize)]
struct StateFile {
    dims: Vec<usize>,
    matrix: Vec<Vec<[f64; 2]>>,
}

/// Read a state file, checking shape and physical invariants.
pub fn read_state(path: &Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path)?;
    let file: StateFile = serde_json::from_str(&text)?;
    let subsystems = Subsystems::new(file.dims)?;
    let total = subsystems.total_dim();
    if file.matrix.len() != total {
        return Err(Error::MalformedStateFile(format!(
            "expected {total} matrix rows for dims {:?}, found {}",
            subsystems.dims(),
            file.matrix.len()
        )));
    }
    let mut entries = Vec::with_capacity(total * total);
    for (r, row) in file.matrix.iter().enumerate() {
        if row.len() != total {
            return Err(Error::MalformedStateFile(format!(
                "row {r} has {} entries, expected {total}",
                row.len()
            )));
        }
        entries.extend(row.iter().map(|&[re, im]| Complex64::new(re, im)));
    }
    let rho = DensityMatrix::from_parts(subsystems, entries)?;
    validate(&rho)?;
    Ok(rho)
}

/// Write a state file with 17 significant digits per component, so reading
/// it back reproduces every entry bit-exactly.
pub fn write_state(rho: &DensityMatrix, path: &Path) -> Result<()> {
    let total = rho.dim();
    let mut out = String::new();
    out.push_str("{\n  \"dims\": [");
    let dims: Vec<String> = rho
        .subsystems()
        .dims()
        .iter()
        .map(|d| d.to_string())
        .collect();
    out.push_str(&dims.join(", "));
    out.push_str("],\n  \"matrix\": [\n");
    for r in 0..total {
        out.push_str("    [");
        for c in 0..total {
            if c > 0 {
                out.push_str(", ");
            }
            let z = rho.entry(r, c);
            write!(out, "[{:.16e}, {:.16e}]", z.re, z.im).expect("writing to a string");
        }
        out.push_str(if r + 1 < total { "],\n" } else { "]\n" });
    }
    out.push_str("  ]\n}\n");
    std::fs::write(path, out)?;
    Ok(())
}

/// Build a specification from its textual form: a name such as `bell`,
/// `ghz`, `w`, `werner:0.3`, `isotropic:0.9`, `mixed`, `random`, or
/// `random-separable`, plus subsystem dimensions and, for the random
/// variants, a seed, an optional rank, and an optional term count.
pub fn spec_from_parts(
    name: &str,
    dims: &[usize],
    seed: u64,
    rank: Option<usize>,
    terms: Option<usize>,
) -> Result<StateSpec> {
    let bad = |message: String| Error::InvalidStateSpec(message);
    let require_dims = |expected: &[usize]| -> Result<()> {
        if dims == expected {
            Ok(())
        } else {
            Err(bad(format!(
                "{name} requires dimensions {expected:?}, got {dims:?}"
            )))
        }
    };
    if let Some(param) = name.strip_prefix("werner:") {
        require_dims(&[2, 2])?;
        let p: f64 = param
            .parse()
            .map_err(|_| bad(format!("werner parameter must be a number, got {param:?}")))?;
        return Ok(StateSpec::Werner { p });
    }
    if let Some(param) = name.strip_prefix("isotropic:") {
        if dims.len() != 2 || dims[0] != dims[1] {
            return Err(bad(format!(
                "isotropic requires two equal dimensions, got {dims:?}"
            )));
        }
        let fidelity: f64 = param.parse().map_err(|_| {
            bad(format!(
                "isotropic parameter must be a number, got {param:?}"
            ))
        })?;
        return Ok(StateSpec::Isotropic {
            fidelity,
            dim: dims[0],
        });
    }
    match name {
        "bell" => {
            require_dims(&[2, 2])?;
            Ok(StateSpec::Bell)
        }
        "ghz" => {
            if dims.len() < 2 || dims.iter().any(|d| *d != dims[0]) {
                return Err(bad(format!(
                    "ghz requires at least two equal dimensions, got {dims:?}"
                )));
            }
            Ok(StateSpec::Ghz {
                parties: dims.len(),
                dim: dims[0],
            })
        }
        "w" => {
            if dims.len() < 2 || dims.iter().any(|d| *d != 2) {
                return Err(bad(format!(
                    "w requires qubit dimensions 2,2,…, got {dims:?}"
                )));
            }
            Ok(StateSpec::W {
                parties: dims.len(),
            })
        }
        "mixed" => Ok(StateSpec::MaximallyMixed {
            dims: dims.to_vec(),
        }),
        "random" => Ok(StateSpec::RandomMixed {
            dims: dims.to_vec(),
            rank: rank.unwrap_or_else(|| dims.iter().product()),
            seed,
        }),
        "random-separable" => Ok(StateSpec::RandomSeparable {
            dims: dims.to_vec(),
            terms: terms.unwrap_or(8),
            seed,
        }),
        other => Err(bad(format!(
            "unknown state name {other:?}; expected bell, ghz, w, werner:p, isotropic:f, mixed, random, or random-separable"
        ))),
    }
}

/// Parties whose bra slot participates in a partial transposition that
/// detects the given two-qubit Werner state — exposed for tests.
#[cfg(test)]
fn werner_pt_detects(p: f64) -> bool {
    use crate::spectra::trace_norm;
    use crate::tensor::partial_transpose;
    let rho = generate(&StateSpec::Werner { p }).unwrap();
    let pt = partial_transpose(&rho, &[2]).unwrap();
    trace_norm(&pt).unwrap() > 1.0 + 1e-9
}
