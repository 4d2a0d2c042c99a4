//! Equivalence classes of index permutations.
//!
//! Two permutations are considered equivalent when the matrices they produce
//! have the same singular values for every input. The deciding invariant is
//! the *row set*: the set of source slots a permutation sends into row
//! positions. Reordering row factors or column factors among themselves is a
//! unitary relabeling on either side (singular values unchanged), so only the
//! row/column membership matters; and whole transposition exchanges the row
//! set with its complement while preserving singular values. Hence classes
//! correspond to N-element slot subsets modulo complementation, which this
//! module normalizes by keeping the side containing the ket slot of party 1.
//!
//! The analytic classification is cross-checked by [`oracle_grouping`], which
//! brute-forces all (2N)! permutations on random samples and groups them by
//! measured spectra, with no reference to the row-set invariant.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::spectra::{singular_values, spectra_equal, SingularSpectrum};
use crate::tensor::{apply_permutation, DensityMatrix, IndexPermutation, Slot, Subsystems};
use crate::{Error, Result};

/// Default number of random samples the oracle draws.
pub const DEFAULT_ORACLE_SAMPLES: usize = 5;
/// Default oracle RNG seed (any fixed value works; this one is documented so
/// published group listings can be reproduced).
pub const DEFAULT_ORACLE_SEED: u64 = 1729;
/// Default tolerance for comparing singular-value spectra. Distinct classes
/// separate by many orders of magnitude more than this on random samples.
pub const DEFAULT_SPECTRA_TOL: f64 = 1e-8;

/// Human-readable name for an equivalence class, derived purely from the
/// normalized row set.
///
/// With `B` = parties contributing both slots to the row set, `Z` = parties
/// contributing neither, and `T` = parties contributing only their bra slot:
/// - `Trivial`: the row set is all kets (the matrix is the state itself or
///   its transpose / a factor reordering of it).
/// - `PartialTranspose`: every party contributes exactly one slot; `parties`
///   lists those contributing a bra, taken from whichever side of the
///   complementation has fewer of them (ties keep the normalized side), so
///   the list never exceeds ⌊N/2⌋ entries.
/// - `Realign { both, neither }`: on one side of the complementation exactly
///   one party has both slots in rows, one has none, and the rest contribute
///   kets — both slots of party `both` in rows, none of party `neither`.
/// - `Mixed`: anything else, reported from the normalized side; renders as a
///   realignment across `both`/`neither` pairs composed with partial
///   transpositions on `transposed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassLabel {
    Trivial,
    PartialTranspose {
        parties: BTreeSet<usize>,
    },
    Realign {
        both: usize,
        neither: usize,
    },
    Mixed {
        both: BTreeSet<usize>,
        neither: BTreeSet<usize>,
        transposed: BTreeSet<usize>,
    },
}

fn subscript(party: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    party
        .to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).expect("decimal digit") as usize])
        .collect()
}

fn render_set(set: &BTreeSet<usize>) -> String {
    let inner: Vec<String> = set.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Trivial => write!(f, "trivial"),
            ClassLabel::PartialTranspose { parties } => {
                write!(f, "PT({})", render_set(parties))
            }
            ClassLabel::Realign { both, neither } => {
                write!(f, "realign({both}↔{neither})")
            }
            ClassLabel::Mixed {
                both,
                neither,
                transposed,
            } => {
                let mut parts: Vec<String> = both
                    .iter()
                    .zip(neither.iter())
                    .map(|(b, z)| format!("realign({b}↔{z})"))
                    .collect();
                parts.extend(transposed.iter().map(|t| format!("t{}", subscript(*t))));
                write!(f, "{}", parts.join(" ∘ "))
            }
        }
    }
}

impl ClassLabel {
    /// Deterministic ordering key: trivial, then partial transpositions by
    /// (size, parties), then realignments by (both, neither), then mixed
    /// labels lexicographically.
    fn sort_key(&self) -> (u8, usize, Vec<usize>, Vec<usize>, Vec<usize>) {
        match self {
            ClassLabel::Trivial => (0, 0, vec![], vec![], vec![]),
            ClassLabel::PartialTranspose { parties } => (
                1,
                parties.len(),
                parties.iter().copied().collect(),
                vec![],
                vec![],
            ),
            ClassLabel::Realign { both, neither } => (2, 0, vec![*both], vec![*neither], vec![]),
            ClassLabel::Mixed {
                both,
                neither,
                transposed,
            } => (
                3,
                both.len(),
                both.iter().copied().collect(),
                neither.iter().copied().collect(),
                transposed.iter().copied().collect(),
            ),
        }
    }
}

/// An equivalence class of index permutations: the normalized row set, its
/// label, and the lexicographically smallest member as representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalClass {
    parties: usize,
    mask: u32,
    row_set: Vec<Slot>,
    label: ClassLabel,
    representative: IndexPermutation,
}

impl CanonicalClass {
    fn from_mask(mask: u32, parties: usize) -> Self {
        CanonicalClass {
            parties,
            mask,
            row_set: slots_from_mask(mask, parties),
            label: label_from_mask(mask, parties),
            representative: representative_from_mask(mask, parties),
        }
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    /// The source slots occupying row positions, on the normalized side of
    /// the complementation (always contains the ket slot of party 1).
    pub fn row_set(&self) -> &[Slot] {
        &self.row_set
    }

    pub fn label(&self) -> &ClassLabel {
        &self.label
    }

    /// Lexicographically smallest permutation (as a position map) in the
    /// class.
    pub fn representative(&self) -> &IndexPermutation {
        &self.representative
    }

    /// Stable identifier: the normalized row set as a comma-separated slot
    /// list, e.g. `k1,b1,b3`.
    pub fn id(&self) -> String {
        let names: Vec<String> = self.row_set.iter().map(|s| s.to_string()).collect();
        names.join(",")
    }

    pub(crate) fn sort_key(&self) -> (u8, usize, Vec<usize>, Vec<usize>, Vec<usize>) {
        self.label.sort_key()
    }
}

impl fmt::Display for CanonicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.label, self.id())
    }
}

/// Row-set bitmask of a permutation (bit p = source position p lands in a
/// row), normalized so that bit 0 (the ket slot of party 1) is set.
fn canonical_mask(sigma: &IndexPermutation) -> u32 {
    let parties = sigma.party_count();
    let mut mask = 0u32;
    for (src, &tgt) in sigma.map().iter().enumerate() {
        if tgt < parties {
            mask |= 1 << src;
        }
    }
    if mask & 1 == 0 {
        mask ^= (1u32 << (2 * parties)) - 1;
    }
    mask
}

fn slots_from_mask(mask: u32, parties: usize) -> Vec<Slot> {
    (0..2 * parties)
        .filter(|pos| mask & (1 << pos) != 0)
        .map(|pos| Slot::at_source_position(pos, parties))
        .collect()
}

/// Per-party membership split of a row-set side: parties with both slots,
/// with neither, with only the bra, and with only the ket.
struct SideSplit {
    both: BTreeSet<usize>,
    neither: BTreeSet<usize>,
    bra_only: BTreeSet<usize>,
    ket_only: BTreeSet<usize>,
}

fn split_mask(mask: u32, parties: usize) -> SideSplit {
    let mut split = SideSplit {
        both: BTreeSet::new(),
        neither: BTreeSet::new(),
        bra_only: BTreeSet::new(),
        ket_only: BTreeSet::new(),
    };
    for party in 1..=parties {
        let ket = mask & (1 << (party - 1)) != 0;
        let bra = mask & (1 << (parties + party - 1)) != 0;
        let bucket = match (ket, bra) {
            (true, true) => &mut split.both,
            (false, false) => &mut split.neither,
            (false, true) => &mut split.bra_only,
            (true, false) => &mut split.ket_only,
        };
        bucket.insert(party);
    }
    split
}

fn label_from_mask(mask: u32, parties: usize) -> ClassLabel {
    let side = split_mask(mask, parties);
    // On the complementary side the roles swap: both↔neither, bra↔ket.
    if side.both.is_empty() {
        // Every party contributes exactly one slot on both sides.
        if side.bra_only.is_empty() {
            return ClassLabel::Trivial;
        }
        // Transposed parties seen from this side vs. from the complement;
        // report the smaller set (ties keep the normalized side).
        let here = &side.bra_only;
        let there = &side.ket_only;
        let parties = if there.len() < here.len() {
            there.clone()
        } else {
            here.clone()
        };
        return ClassLabel::PartialTranspose { parties };
    }
    if side.both.len() == 1 {
        if side.bra_only.is_empty() {
            return ClassLabel::Realign {
                both: *side.both.first().expect("nonempty"),
                neither: *side.neither.first().expect("|B|=|Z|"),
            };
        }
        if side.ket_only.is_empty() {
            // The complement side is a pure realignment.
            return ClassLabel::Realign {
                both: *side.neither.first().expect("|B|=|Z|"),
                neither: *side.both.first().expect("nonempty"),
            };
        }
    }
    ClassLabel::Mixed {
        both: side.both,
        neither: side.neither,
        transposed: side.bra_only,
    }
}

/// Lexicographically smallest permutation whose normalized row set is `mask`:
/// walk source positions in order, assigning the lowest free row position to
/// row-set members and the lowest free column position otherwise. The side
/// containing the ket slot of party 1 always yields the smaller map, since
/// its position 0 maps to 0.
fn representative_from_mask(mask: u32, parties: usize) -> IndexPermutation {
    let mut map = vec![0usize; 2 * parties];
    let mut next_row = 0;
    let mut next_col = parties;
    for (pos, slot) in map.iter_mut().enumerate() {
        if mask & (1 << pos) != 0 {
            *slot = next_row;
            next_row += 1;
        } else {
            *slot = next_col;
            next_col += 1;
        }
    }
    IndexPermutation::from_map(map).expect("greedy fill is a bijection")
}

/// Reduce a permutation to its equivalence class.
pub fn canonical_form(sigma: &IndexPermutation) -> CanonicalClass {
    CanonicalClass::from_mask(canonical_mask(sigma), sigma.party_count())
}

/// Human-readable class description of a permutation, e.g. `PT({1})` or
/// `realign(1↔2) ∘ t₃`.
pub fn classify_permutation_label(sigma: &IndexPermutation) -> String {
    canonical_form(sigma).label().to_string()
}

/// A class together with how many of the (2N)! permutations fall into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCensus {
    pub class: CanonicalClass,
    pub population: usize,
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Advance `perm` to its lexicographic successor in place; false once the
/// last arrangement has been visited.
fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

fn check_party_range(parties: usize) -> Result<()> {
    if parties == 0 {
        return Err(Error::NoParties);
    }
    if parties > 5 {
        return Err(Error::ResourceGuard(format!(
            "classification enumerates (2N)! permutations; N={parties} exceeds the supported maximum of 5"
        )));
    }
    Ok(())
}

/// Enumerate all (2N)! permutations and reduce them to canonical classes,
/// returned in deterministic label order with population counts summing to
/// (2N)!.
pub fn enumerate_classes(parties: usize) -> Result<Vec<ClassCensus>> {
    check_party_range(parties)?;
    let slots = 2 * parties;
    let mut populations = vec![0usize; 1 << slots];
    let mut perm: Vec<usize> = (0..slots).collect();
    loop {
        let sigma = IndexPermutation::from_map(perm.clone()).expect("valid by construction");
        populations[canonical_mask(&sigma) as usize] += 1;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let mut census: Vec<ClassCensus> = populations
        .iter()
        .enumerate()
        .filter(|&(_, &count)| count > 0)
        .map(|(mask, &count)| ClassCensus {
            class: CanonicalClass::from_mask(mask as u32, parties),
            population: count,
        })
        .collect();
    census.sort_by_key(|c| c.class.sort_key());
    debug_assert_eq!(
        census.iter().map(|c| c.population).sum::<usize>(),
        factorial(slots)
    );
    Ok(census)
}

/// One-line census summary, e.g. for three parties:
/// `719 candidate criteria, 9 non-equivalent non-trivial`.
pub fn census_summary(parties: usize, census: &[ClassCensus]) -> String {
    let candidates = factorial(2 * parties) - 1;
    let nontrivial = census
        .iter()
        .filter(|c| c.class.label() != &ClassLabel::Trivial)
        .count();
    format!("{candidates} candidate criteria, {nontrivial} non-equivalent non-trivial")
}

/// One spectra-defined group of permutations found by the oracle.
#[derive(Clone, Debug)]
pub struct OracleGroup {
    representative: IndexPermutation,
    population: usize,
    homogeneous: bool,
    class: CanonicalClass,
}

impl OracleGroup {
    /// First permutation (in lexicographic enumeration order) that opened
    /// this group.
    pub fn representative(&self) -> &IndexPermutation {
        &self.representative
    }

    pub fn population(&self) -> usize {
        self.population
    }

    /// True when every member of the group reduces to the same canonical
    /// class analytically.
    pub fn homogeneous(&self) -> bool {
        self.homogeneous
    }

    /// Canonical class of the representative.
    pub fn class(&self) -> &CanonicalClass {
        &self.class
    }
}

/// Partition of all (2N)! permutations by measured singular-value spectra.
#[derive(Clone, Debug)]
pub struct OracleGrouping {
    groups: Vec<OracleGroup>,
}

impl OracleGrouping {
    pub fn groups(&self) -> &[OracleGroup] {
        &self.groups
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    /// True iff this partition is identical to the analytic one: same number
    /// of groups, every group analytically homogeneous, and group classes
    /// with populations matching the census one-to-one.
    pub fn matches(&self, census: &[ClassCensus]) -> bool {
        self.groups.len() == census.len()
            && self
                .groups
                .iter()
                .zip(census)
                .all(|(g, c)| g.homogeneous && g.class == c.class && g.population == c.population)
    }
}

/// A random matrix carrying the N-party tensor structure, Frobenius-normalized.
///
/// Samples are deliberately generic (non-Hermitian): on Hermitian inputs,
/// classes whose row sets are related by exchanging every ket slot with its
/// bra partner produce mutually conjugate matrices — identical singular
/// values — and would merge even though generic inputs tell them apart.
/// Generic samples realize the full equivalence notion (equal spectra on
/// *every* input).
fn oracle_sample(rng: &mut ChaCha12Rng, dims: &Subsystems) -> DensityMatrix {
    let d = dims.total_dim();
    let mut entries: Vec<Complex64> = (0..d * d)
        .map(|_| {
            Complex64::new(
                rng.sample(rand_distr::StandardNormal),
                rng.sample(rand_distr::StandardNormal),
            )
        })
        .collect();
    let fro = entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in &mut entries {
        *z /= fro;
    }
    DensityMatrix::from_parts(dims.clone(), entries).expect("shape consistent by construction")
}

/// Brute-force the spectral partition of all (2N)! permutations on `samples`
/// random inputs with every subsystem dimension `dim`: two permutations share
/// a group iff their singular values agree within `tol` on every sample.
/// Deterministic given `seed`. Groups are returned in canonical label order.
pub fn oracle_grouping(
    parties: usize,
    dim: usize,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<OracleGrouping> {
    check_party_range(parties)?;
    if dim < 2 {
        return Err(Error::BadDimension(dim));
    }
    if samples < 3 {
        return Err(Error::TooFewSamples(samples));
    }
    if parties >= 5 && dim >= 3 {
        return Err(Error::ResourceGuard(format!(
            "oracle at N={parties}, d={dim} needs {} SVDs of side {}; refusing",
            factorial(2 * parties) * samples,
            dim.pow(parties as u32)
        )));
    }

    let dims = Subsystems::new(vec![dim; parties])?;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let inputs: Vec<DensityMatrix> = (0..samples)
        .map(|_| oracle_sample(&mut rng, &dims))
        .collect();

    struct Accum {
        spectra: Vec<SingularSpectrum>,
        representative: Vec<usize>,
        population: usize,
        mask: u32,
        homogeneous: bool,
    }
    let mut groups: Vec<Accum> = Vec::new();

    // Enumerate lexicographically in chunks: spectra in parallel, grouping
    // sequential so group identity is deterministic.
    const CHUNK: usize = 4096;
    let slots = 2 * parties;
    let mut perm: Vec<usize> = (0..slots).collect();
    let mut chunk: Vec<Vec<usize>> = Vec::with_capacity(CHUNK);
    let mut more = true;
    while more {
        chunk.push(perm.clone());
        more = next_permutation(&mut perm);
        if chunk.len() < CHUNK && more {
            continue;
        }
        let measured: Vec<(u32, Vec<SingularSpectrum>)> = chunk
            .par_iter()
            .map(|map| {
                let sigma = IndexPermutation::from_map(map.clone())?;
                let mask = canonical_mask(&sigma);
                let spectra = inputs
                    .iter()
                    .map(|input| singular_values(&apply_permutation(input, &sigma)?))
                    .collect::<Result<Vec<_>>>()?;
                Ok((mask, spectra))
            })
            .collect::<Result<Vec<_>>>()?;
        for (map, (mask, spectra)) in chunk.iter().zip(measured) {
            let found = groups.iter_mut().find(|g| {
                g.spectra
                    .iter()
                    .zip(&spectra)
                    .all(|(a, b)| spectra_equal(a, b, tol))
            });
            match found {
                Some(group) => {
                    group.population += 1;
                    if group.mask != mask {
                        group.homogeneous = false;
                    }
                }
                None => groups.push(Accum {
                    spectra,
                    representative: map.clone(),
                    population: 1,
                    mask,
                    homogeneous: true,
                }),
            }
        }
        chunk.clear();
    }

    let mut groups: Vec<OracleGroup> = groups
        .into_iter()
        .map(|g| OracleGroup {
            representative: IndexPermutation::from_map(g.representative)
                .expect("valid by construction"),
            population: g.population,
            homogeneous: g.homogeneous,
            class: CanonicalClass::from_mask(g.mask, parties),
        })
        .collect();
    groups.sort_by_key(|g| g.class.sort_key());
    Ok(OracleGrouping { groups })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::trace_norm;

    fn pt(parties: usize, set: &[usize]) -> IndexPermutation {
        IndexPermutation::partial_transpose(parties, set).unwrap()
    }

    #[test]
    fn identity_is_trivial() {
        for parties in 1..=4 {
            let class = canonical_form(&IndexPermutation::identity(parties));
            assert_eq!(class.label(), &ClassLabel::Trivial);
            assert_eq!(class.representative(), &IndexPermutation::identity(parties));
        }
    }

    #[test]
    fn bipartite_partial_transposes_share_one_class() {
        let t2 = canonical_form(&pt(2, &[2]));
        assert_eq!(
            t2.label(),
            &ClassLabel::PartialTranspose {
                parties: BTreeSet::from([2])
            }
        );
        assert_eq!(t2.label().to_string(), "PT({2})");
        // t₁ composed with the whole transpose lands in the same class.
        let t1_then_t = pt(2, &[1])
            .then(&IndexPermutation::whole_transpose(2))
            .unwrap();
        assert_eq!(canonical_form(&t1_then_t), t2);
        // As does t₁ itself (complementation).
        assert_eq!(canonical_form(&pt(2, &[1])), t2);
    }

    #[test]
    fn tripartite_label_examples() {
        assert_eq!(classify_permutation_label(&pt(3, &[1])), "PT({1})");
        // Exchange bra slots of parties 1,2 then transpose party 2: both
        // slots of party 1 occupy rows, neither slot of party 2 does.
        let sigma = IndexPermutation::swap_bras(3, 1, 2)
            .unwrap()
            .then(&pt(3, &[2]))
            .unwrap();
        assert_eq!(
            canonical_form(&sigma).label(),
            &ClassLabel::Realign {
                both: 1,
                neither: 2
            }
        );
        // Same swap followed by t₁ gives the mirrored realignment.
        let mirrored = IndexPermutation::swap_bras(3, 1, 2)
            .unwrap()
            .then(&pt(3, &[1]))
            .unwrap();
        assert_eq!(
            canonical_form(&mirrored).label(),
            &ClassLabel::Realign {
                both: 2,
                neither: 1
            }
        );
        assert_eq!(classify_permutation_label(&mirrored), "realign(2↔1)");
    }

    #[test]
    fn four_party_mixed_example() {
        // Exchange bra slots of parties 1,2, then transpose parties 2 and 3.
        let sigma = IndexPermutation::swap_bras(4, 1, 2)
            .unwrap()
            .then(&pt(4, &[2, 3]))
            .unwrap();
        let class = canonical_form(&sigma);
        assert_eq!(
            class.label(),
            &ClassLabel::Mixed {
                both: BTreeSet::from([1]),
                neither: BTreeSet::from([2]),
                transposed: BTreeSet::from([3]),
            }
        );
        assert_eq!(class.label().to_string(), "realign(1↔2) ∘ t₃");
        assert_eq!(class.id(), "k1,k4,b1,b3");
        // Its whole transpose is the same class.
        let transposed = sigma.then(&IndexPermutation::whole_transpose(4)).unwrap();
        assert_eq!(canonical_form(&transposed), class);
    }

    #[test]
    fn class_is_stable_under_row_and_column_reordering() {
        // Post-composing with maps that keep rows rows and columns columns
        // (factor reorderings of the output) must not change the class.
        let sigma = IndexPermutation::swap_bras(3, 1, 3)
            .unwrap()
            .then(&pt(3, &[3]))
            .unwrap();
        let base = canonical_form(&sigma);
        let reorder = IndexPermutation::from_map(vec![2, 0, 1, 3, 5, 4]).unwrap();
        assert_eq!(canonical_form(&sigma.then(&reorder).unwrap()), base);
        let transpose = IndexPermutation::whole_transpose(3);
        assert_eq!(canonical_form(&sigma.then(&transpose).unwrap()), base);
    }

    #[test]
    fn single_party_census() {
        let census = enumerate_classes(1).unwrap();
        assert_eq!(census.len(), 1);
        assert_eq!(census[0].population, 2);
        assert_eq!(census[0].class.label(), &ClassLabel::Trivial);
    }

    #[test]
    fn bipartite_census() {
        let census = enumerate_classes(2).unwrap();
        let rendered: Vec<(String, usize)> = census
            .iter()
            .map(|c| (c.class.label().to_string(), c.population))
            .collect();
        assert_eq!(
            rendered,
            vec![
                ("trivial".into(), 8),
                ("PT({2})".into(), 8),
                ("realign(1↔2)".into(), 8),
            ]
        );
        assert_eq!(
            census_summary(2, &census),
            "23 candidate criteria, 2 non-equivalent non-trivial"
        );
    }

    #[test]
    fn tripartite_census() {
        let census = enumerate_classes(3).unwrap();
        assert_eq!(census.len(), 10);
        assert!(census.iter().all(|c| c.population == 72));
        let labels: Vec<String> = census.iter().map(|c| c.class.label().to_string()).collect();
        assert_eq!(
            labels,
            vec![
                "trivial",
                "PT({1})",
                "PT({2})",
                "PT({3})",
                "realign(1↔2)",
                "realign(1↔3)",
                "realign(2↔1)",
                "realign(2↔3)",
                "realign(3↔1)",
                "realign(3↔2)",
            ]
        );
        assert_eq!(
            census_summary(3, &census),
            "719 candidate criteria, 9 non-equivalent non-trivial"
        );
    }

    #[test]
    fn four_party_census_breakdown() {
        let census = enumerate_classes(4).unwrap();
        assert_eq!(census.len(), 35);
        assert_eq!(
            census.iter().map(|c| c.population).sum::<usize>(),
            factorial(8)
        );
        assert!(census.iter().all(|c| c.population == 2 * 24 * 24));
        let mut trivial = 0;
        let mut partial = 0;
        let mut realign = 0;
        let mut mixed = 0;
        for c in &census {
            match c.class.label() {
                ClassLabel::Trivial => trivial += 1,
                ClassLabel::PartialTranspose { parties } => {
                    assert!(parties.len() <= 2);
                    partial += 1;
                }
                ClassLabel::Realign { .. } => realign += 1,
                ClassLabel::Mixed { .. } => mixed += 1,
            }
        }
        assert_eq!((trivial, partial, realign, mixed), (1, 7, 12, 15));
    }

    #[test]
    fn representatives_are_lexicographically_smallest() {
        // Brute force: for every bipartite permutation, the class
        // representative's map is ≤ the member's map.
        let mut perm: Vec<usize> = (0..4).collect();
        loop {
            let sigma = IndexPermutation::from_map(perm.clone()).unwrap();
            let class = canonical_form(&sigma);
            assert!(class.representative().map() <= perm.as_slice());
            assert_eq!(canonical_form(class.representative()), class);
            if !next_permutation(&mut perm) {
                break;
            }
        }
    }

    #[test]
    fn party_range_is_guarded() {
        assert!(matches!(enumerate_classes(0), Err(Error::NoParties)));
        assert!(matches!(enumerate_classes(6), Err(Error::ResourceGuard(_))));
        assert!(matches!(
            oracle_grouping(5, 3, 3, 1, 1e-8),
            Err(Error::ResourceGuard(_))
        ));
        assert!(matches!(
            oracle_grouping(2, 1, 3, 1, 1e-8),
            Err(Error::BadDimension(1))
        ));
        assert!(matches!(
            oracle_grouping(2, 2, 2, 1, 1e-8),
            Err(Error::TooFewSamples(2))
        ));
    }

    #[test]
    fn single_party_oracle_groups_transpose_with_identity() {
        let grouping = oracle_grouping(1, 2, 3, DEFAULT_ORACLE_SEED, 1e-8).unwrap();
        assert_eq!(grouping.len(), 1);
        assert_eq!(grouping.groups()[0].population(), 2);
        assert!(grouping.matches(&enumerate_classes(1).unwrap()));
    }

    #[test]
    fn bipartite_oracle_matches_census() {
        let census = enumerate_classes(2).unwrap();
        let grouping = oracle_grouping(
            2,
            2,
            DEFAULT_ORACLE_SAMPLES,
            DEFAULT_ORACLE_SEED,
            DEFAULT_SPECTRA_TOL,
        )
        .unwrap();
        assert_eq!(grouping.len(), 3);
        assert!(grouping.matches(&census));
        assert!(grouping.groups().iter().all(|g| g.homogeneous()));
    }

    #[test]
    fn mirrored_realignments_coincide_on_hermitian_inputs_only() {
        // The two tripartite classes realign(1↔2) and realign(2↔1) have
        // mirror-image row sets (every ket slot swapped with its bra
        // partner). Conjugating a Hermitian matrix's entries is the same as
        // exchanging its primed/unprimed indices, so on any *state* the two
        // permuted matrices are mutual conjugates and their spectra agree —
        // while generic complex inputs separate them.
        let census = enumerate_classes(3).unwrap();
        let find = |label: &str| {
            census
                .iter()
                .find(|c| c.class.label().to_string() == label)
                .unwrap()
                .class
                .representative()
                .clone()
        };
        let forward = find("realign(1↔2)");
        let mirrored = find("realign(2↔1)");
        let dims = Subsystems::new(vec![2, 2, 2]).unwrap();

        let mut rng = ChaCha12Rng::seed_from_u64(5150);
        let generic = oracle_sample(&mut rng, &dims);
        let sv_fwd = singular_values(&apply_permutation(&generic, &forward).unwrap()).unwrap();
        let sv_mir = singular_values(&apply_permutation(&generic, &mirrored).unwrap()).unwrap();
        assert!(!spectra_equal(&sv_fwd, &sv_mir, 1e-8));

        // Hermitian PSD unit-trace input built from the same generator.
        let g = oracle_sample(&mut rng, &dims);
        let d = dims.total_dim();
        let mut entries = vec![Complex64::ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                let mut acc = Complex64::ZERO;
                for k in 0..d {
                    acc += g.entry(r, k) * g.entry(c, k).conj();
                }
                entries[r * d + c] = acc;
            }
        }
        let tr: f64 = (0..d).map(|i| entries[i * d + i].re).sum();
        for z in &mut entries {
            *z /= tr;
        }
        let state = DensityMatrix::from_parts(dims, entries).unwrap();
        let sv_fwd = singular_values(&apply_permutation(&state, &forward).unwrap()).unwrap();
        let sv_mir = singular_values(&apply_permutation(&state, &mirrored).unwrap()).unwrap();
        assert!(spectra_equal(&sv_fwd, &sv_mir, 1e-10));
        // The trace norms coincide as well, so both report the same verdict
        // on states even though the classes are distinct.
        let t1 = trace_norm(&apply_permutation(&state, &forward).unwrap()).unwrap();
        let t2 = trace_norm(&apply_permutation(&state, &mirrored).unwrap()).unwrap();
        assert!((t1 - t2).abs() < 1e-10);
    }

    #[test]
    fn next_permutation_visits_all_arrangements_in_order() {
        let mut perm = vec![0usize, 1, 2];
        let mut seen = vec![perm.clone()];
        while next_permutation(&mut perm) {
            seen.push(perm.clone());
        }
        assert_eq!(seen.len(), 6);
        let mut sorted = seen.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted, seen);
    }
}
