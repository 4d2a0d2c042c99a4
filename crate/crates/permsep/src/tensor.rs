//! Subsystem layouts, slot bookkeeping, and the index-permutation engine.
//!
//! # Conventions
//!
//! A state on N parties with dimensions d₁,…,d_N carries 2N *slots*: one ket
//! index and one bra index per party. The standard density-matrix layout puts
//! the ket slots at positions 0..N (party 1 first) and the bra slots at
//! positions N..2N, with composite row/column indices built row-major — party 1
//! varies slowest. Entry (r, c) of ρ is ⟨r-digits| ρ |c-digits⟩.
//!
//! An [`IndexPermutation`] is a bijection on the 2N slot *positions*:
//! `map[p] = q` moves the slot sitting at source position `p` to target
//! position `q`. Target positions 0..N label rows of the result, N..2N label
//! columns. Applying a permutation never mixes or combines entries — it is a
//! pure relabeling of which matrix element a given slot-value assignment maps
//! to, performed with integer index arithmetic only.
//!
//! All matrices here are stated in a fixed product basis and transforms are
//! defined by their action on basis labels; complex conjugation never touches a
//! basis label. Consequently the swap + partial-transpose composition of the
//! realignment holds entrywise exactly, not merely up to phases.
//!
//! Parties are numbered 1..=N in every public signature, matching the usual
//! physics notation for criteria such as "t₂" or "V₁₂".

use num_complex::Complex64;
use std::fmt;

use crate::{Error, Result};

/// Which half of a party's index pair a slot refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Ket,
    Bra,
}

/// One tensor index of a multipartite matrix: the ket or bra slot of a party.
///
/// Ordering sorts all ket slots (by party) before all bra slots, which is the
/// canonical order used when rendering slot sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub side: Side,
    /// 1-based party index.
    pub party: usize,
}

impl Slot {
    pub fn ket(party: usize) -> Self {
        Slot {
            side: Side::Ket,
            party,
        }
    }

    pub fn bra(party: usize) -> Self {
        Slot {
            side: Side::Bra,
            party,
        }
    }

    /// Position of this slot in the standard density-matrix layout.
    pub fn source_position(&self, parties: usize) -> usize {
        match self.side {
            Side::Ket => self.party - 1,
            Side::Bra => parties + self.party - 1,
        }
    }

    /// Slot occupying `position` in the standard density-matrix layout.
    pub fn at_source_position(position: usize, parties: usize) -> Self {
        if position < parties {
            Slot::ket(position + 1)
        } else {
            Slot::bra(position - parties + 1)
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.side {
            Side::Ket => 'k',
            Side::Bra => 'b',
        };
        write!(f, "{}{}", tag, self.party)
    }
}

/// The party structure of a multipartite system: dimensions d₁,…,d_N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsystems {
    dims: Vec<usize>,
}

impl Subsystems {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::NoParties);
        }
        if let Some(&d) = dims.iter().find(|&&d| d == 0) {
            return Err(Error::BadDimension(d));
        }
        Ok(Subsystems { dims })
    }

    pub fn party_count(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Dimension of a party (1-based). Callers must pass a valid party;
    /// boundaries that accept user input should go through [`Subsystems::check_party`].
    pub fn dim(&self, party: usize) -> usize {
        self.dims[party - 1]
    }

    pub fn check_party(&self, party: usize) -> Result<()> {
        if party == 0 || party > self.dims.len() {
            return Err(Error::PartyOutOfRange {
                party,
                count: self.dims.len(),
            });
        }
        Ok(())
    }

    /// Product of all party dimensions (the matrix side D).
    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn slot_dim(&self, slot: Slot) -> usize {
        self.dim(slot.party)
    }
}

/// A density matrix in the standard layout: D×D row-major entries over the
/// composite ket/bra indices of [`Subsystems`].
///
/// Construction via [`DensityMatrix::from_parts`] checks only the shape.
/// Physical invariants (hermiticity, unit trace, positivity) are enforced where
/// untrusted data enters the system — see `states::read_state`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    subsystems: Subsystems,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn from_parts(subsystems: Subsystems, entries: Vec<Complex64>) -> Result<Self> {
        let d = subsystems.total_dim();
        if entries.len() != d * d {
            return Err(Error::EntryCountMismatch {
                got: entries.len(),
                expected: d * d,
            });
        }
        Ok(DensityMatrix {
            subsystems,
            entries,
        })
    }

    pub fn subsystems(&self) -> &Subsystems {
        &self.subsystems
    }

    /// Matrix side D = ∏ dᵢ.
    pub fn dim(&self) -> usize {
        self.subsystems.total_dim()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn trace(&self) -> Complex64 {
        let d = self.dim();
        (0..d).map(|i| self.entries[i * d + i]).sum()
    }

    /// Largest |ρ[r,c] − conj(ρ[c,r])| over all entries.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in r..d {
                let diff = (self.entry(r, c) - self.entry(c, r).conj()).norm();
                if diff > worst {
                    worst = diff;
                }
            }
        }
        worst
    }

    /// View in the standard slot layout: rows k1..kN, columns b1..bN.
    pub fn as_general(&self) -> GeneralMatrix {
        let n = self.subsystems.party_count();
        let row_slots = (1..=n)
            .map(|p| (Slot::ket(p), self.subsystems.dim(p)))
            .collect();
        let col_slots = (1..=n)
            .map(|p| (Slot::bra(p), self.subsystems.dim(p)))
            .collect();
        GeneralMatrix {
            row_slots,
            col_slots,
            entries: self.entries.clone(),
        }
    }
}

/// A complex matrix carrying per-factor slot metadata: each row/column axis
/// records which slot it reads and that slot's dimension.
///
/// Results of index permutations partition the full slot set between rows and
/// columns. Operator matrices (e.g. [`swap_operator`]) reuse the type with the
/// same slot appearing on both sides; the metadata then just names the factor
/// structure.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralMatrix {
    row_slots: Vec<(Slot, usize)>,
    col_slots: Vec<(Slot, usize)>,
    /// Row-major over (row axes ++ column axes).
    entries: Vec<Complex64>,
}

impl GeneralMatrix {
    pub fn new(
        row_slots: Vec<(Slot, usize)>,
        col_slots: Vec<(Slot, usize)>,
        entries: Vec<Complex64>,
    ) -> Result<Self> {
        let nrows: usize = row_slots.iter().map(|&(_, d)| d).product();
        let ncols: usize = col_slots.iter().map(|&(_, d)| d).product();
        if entries.len() != nrows * ncols {
            return Err(Error::EntryCountMismatch {
                got: entries.len(),
                expected: nrows * ncols,
            });
        }
        Ok(GeneralMatrix {
            row_slots,
            col_slots,
            entries,
        })
    }

    pub fn nrows(&self) -> usize {
        self.row_slots.iter().map(|&(_, d)| d).product()
    }

    pub fn ncols(&self) -> usize {
        self.col_slots.iter().map(|&(_, d)| d).product()
    }

    pub fn row_slots(&self) -> &[(Slot, usize)] {
        &self.row_slots
    }

    pub fn col_slots(&self) -> &[(Slot, usize)] {
        &self.col_slots
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.ncols() + col]
    }

    /// Entrywise complex conjugate (slot layout unchanged).
    pub fn conjugate(&self) -> GeneralMatrix {
        GeneralMatrix {
            row_slots: self.row_slots.clone(),
            col_slots: self.col_slots.clone(),
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    fn axes(&self) -> Vec<(Slot, usize)> {
        let mut axes = self.row_slots.clone();
        axes.extend_from_slice(&self.col_slots);
        axes
    }
}

/// A bijection on the 2N slot positions of a layout; `map[p] = q` sends the
/// slot at source position `p` to target position `q`.
///
/// ```
/// use permsep::tensor::IndexPermutation;
///
/// let t2 = IndexPermutation::partial_transpose(2, &[2]).unwrap();
/// assert_eq!(t2.map(), &[0, 3, 2, 1]);
/// assert_eq!(t2.then(&t2.inverse()).unwrap(), IndexPermutation::identity(2));
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IndexPermutation {
    map: Vec<usize>,
}

impl IndexPermutation {
    /// Identity on the 2N slot positions of an N-party layout.
    pub fn identity(parties: usize) -> Self {
        IndexPermutation {
            map: (0..2 * parties).collect(),
        }
    }

    pub fn from_map(map: Vec<usize>) -> Result<Self> {
        if map.is_empty() || !map.len().is_multiple_of(2) {
            return Err(Error::OddSlotCount(map.len()));
        }
        let mut seen = vec![false; map.len()];
        for &q in &map {
            if q >= map.len() || seen[q] {
                return Err(Error::NotABijection { map });
            }
            seen[q] = true;
        }
        Ok(IndexPermutation { map })
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn slot_count(&self) -> usize {
        self.map.len()
    }

    pub fn party_count(&self) -> usize {
        self.map.len() / 2
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (p, &q) in self.map.iter().enumerate() {
            inv[q] = p;
        }
        IndexPermutation { map: inv }
    }

    /// Apply `self` first, then `other`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.map.len() != other.map.len() {
            return Err(Error::SlotCountMismatch {
                got: other.map.len(),
                expected: self.map.len(),
            });
        }
        let map = self.map.iter().map(|&q| other.map[q]).collect();
        Ok(IndexPermutation { map })
    }

    /// Exchange every ket position with its bra partner: the matrix transpose.
    pub fn whole_transpose(parties: usize) -> Self {
        let map = (0..2 * parties)
            .map(|p| (p + parties) % (2 * parties))
            .collect();
        IndexPermutation { map }
    }

    /// Exchange ket and bra positions for each party in `set`.
    pub fn partial_transpose(parties: usize, set: &[usize]) -> Result<Self> {
        let mut map: Vec<usize> = (0..2 * parties).collect();
        let mut seen = vec![false; parties + 1];
        for &party in set {
            if party == 0 || party > parties {
                return Err(Error::PartyOutOfRange {
                    party,
                    count: parties,
                });
            }
            if seen[party] {
                return Err(Error::RepeatedParty(party));
            }
            seen[party] = true;
            map.swap(party - 1, parties + party - 1);
        }
        Ok(IndexPermutation { map })
    }

    /// Exchange the bra positions of parties `j` and `k` (right swap multiply).
    pub fn swap_bras(parties: usize, j: usize, k: usize) -> Result<Self> {
        Self::swap_pair(parties, j, k, parties)
    }

    /// Exchange the ket positions of parties `j` and `k` (left swap multiply).
    pub fn swap_kets(parties: usize, j: usize, k: usize) -> Result<Self> {
        Self::swap_pair(parties, j, k, 0)
    }

    fn swap_pair(parties: usize, j: usize, k: usize, offset: usize) -> Result<Self> {
        for &party in &[j, k] {
            if party == 0 || party > parties {
                return Err(Error::PartyOutOfRange {
                    party,
                    count: parties,
                });
            }
        }
        if j == k {
            return Err(Error::RepeatedParty(j));
        }
        let mut map: Vec<usize> = (0..2 * parties).collect();
        map.swap(offset + j - 1, offset + k - 1);
        Ok(IndexPermutation { map })
    }
}

/// Core relabeling kernel: rebuild `m` so that target axis `q` reads the
/// source axis `order[q]`; the first `target_rows` target axes become rows.
///
/// Runs one pass over the entries with an incremental mixed-radix counter, so
/// the cost is O(size) regardless of how many axes move.
fn reindex(m: &GeneralMatrix, order: &[usize], target_rows: usize) -> GeneralMatrix {
    let axes = m.axes();
    let n_axes = axes.len();
    debug_assert_eq!(order.len(), n_axes);

    let mut stride = vec![0usize; n_axes];
    let mut s = 1;
    for i in (0..n_axes).rev() {
        stride[i] = s;
        s *= axes[i].1;
    }

    let target_axes: Vec<(Slot, usize)> = order.iter().map(|&i| axes[i]).collect();
    let src_strides: Vec<usize> = order.iter().map(|&i| stride[i]).collect();
    let tgt_dims: Vec<usize> = target_axes.iter().map(|&(_, d)| d).collect();
    let total: usize = tgt_dims.iter().product();

    let mut out = vec![Complex64::ZERO; total];
    let mut digits = vec![0usize; n_axes];
    let mut src = 0usize;
    for slot in out.iter_mut() {
        *slot = m.entries[src];
        for ax in (0..n_axes).rev() {
            digits[ax] += 1;
            src += src_strides[ax];
            if digits[ax] < tgt_dims[ax] {
                break;
            }
            digits[ax] = 0;
            src -= tgt_dims[ax] * src_strides[ax];
        }
    }

    GeneralMatrix {
        row_slots: target_axes[..target_rows].to_vec(),
        col_slots: target_axes[target_rows..].to_vec(),
        entries: out,
    }
}

/// Apply an index permutation to a matrix whose layout has N row and N column
/// factors. The slot at position `p` moves to position `sigma.map()[p]`; the
/// entry at any slot-value assignment is unchanged.
pub fn permute_layout(m: &GeneralMatrix, sigma: &IndexPermutation) -> Result<GeneralMatrix> {
    let n = m.row_slots.len();
    if m.col_slots.len() != n || sigma.slot_count() != 2 * n {
        return Err(Error::SlotCountMismatch {
            got: sigma.slot_count(),
            expected: m.row_slots.len() + m.col_slots.len(),
        });
    }
    let inv = sigma.inverse();
    Ok(reindex(m, inv.map(), n))
}

/// Apply an index permutation to a density matrix.
///
/// ```
/// use permsep::states::{generate, StateSpec};
/// use permsep::tensor::{apply_permutation, IndexPermutation};
///
/// let bell = generate(&StateSpec::Bell).unwrap();
/// let t2 = IndexPermutation::partial_transpose(2, &[2]).unwrap();
/// let m = apply_permutation(&bell, &t2).unwrap();
/// assert_eq!((m.nrows(), m.ncols()), (4, 4));
/// ```
pub fn apply_permutation(rho: &DensityMatrix, sigma: &IndexPermutation) -> Result<GeneralMatrix> {
    permute_layout(&rho.as_general(), sigma)
}

/// Transpose the tensor factors at the given 1-based positions: the row slot
/// and column slot at each position trade places.
pub fn factor_transpose(m: &GeneralMatrix, positions: &[usize]) -> Result<GeneralMatrix> {
    let rows = m.row_slots.len();
    let cols = m.col_slots.len();
    let mut order: Vec<usize> = (0..rows + cols).collect();
    let mut seen = vec![false; rows.min(cols) + 1];
    for &pos in positions {
        if pos == 0 || pos > rows.min(cols) {
            return Err(Error::FactorOutOfRange {
                pos,
                limit: rows.min(cols),
            });
        }
        if seen[pos] {
            return Err(Error::RepeatedParty(pos));
        }
        seen[pos] = true;
        order.swap(pos - 1, rows + pos - 1);
    }
    Ok(reindex(m, &order, rows))
}

/// Matrix transpose, tracking slot metadata.
pub fn whole_transpose(m: &GeneralMatrix) -> GeneralMatrix {
    let rows = m.row_slots.len();
    let cols = m.col_slots.len();
    let order: Vec<usize> = (rows..rows + cols).chain(0..rows).collect();
    reindex(m, &order, cols)
}

/// Partial transpose of a density matrix over a set of parties.
///
/// Equivalent to [`apply_permutation`] with the permutation that exchanges the
/// ket and bra positions of each listed party; the result is square and, for a
/// Hermitian input, Hermitian.
pub fn partial_transpose(rho: &DensityMatrix, parties: &[usize]) -> Result<GeneralMatrix> {
    let n = rho.subsystems().party_count();
    let sigma = IndexPermutation::partial_transpose(n, parties)?;
    apply_permutation(rho, &sigma)
}

/// The swap operators for C^{d₁}⊗C^{d₂} as explicit 0/1 matrices, returned as
/// (V^L, V^R).
///
/// V^R is indexed with rows in C^{d₁}⊗C^{d₂} and columns in C^{d₂}⊗C^{d₁},
/// with V^R[(j,k),(k,j)] = 1; right-multiplying a bipartite matrix by V^R
/// exchanges its two column factors. V^L = (V^R)ᵀ = (V^R)⁻¹ acts as
/// V^L |j⟩|k⟩ = |k⟩|j⟩ on kets. Both are unitary permutation matrices, and
/// V^L = V^R when d₁ = d₂. The slot tags record the bra factors the operators
/// act on in the realignment construction.
pub fn swap_operator(d1: usize, d2: usize) -> Result<(GeneralMatrix, GeneralMatrix)> {
    if d1 == 0 {
        return Err(Error::BadDimension(d1));
    }
    if d2 == 0 {
        return Err(Error::BadDimension(d2));
    }
    let side = d1 * d2;
    let mut entries = vec![Complex64::ZERO; side * side];
    for j in 0..d1 {
        for k in 0..d2 {
            let row = j * d2 + k;
            let col = k * d1 + j;
            entries[row * side + col] = Complex64::new(1.0, 0.0);
        }
    }
    let vr = GeneralMatrix {
        row_slots: vec![(Slot::bra(1), d1), (Slot::bra(2), d2)],
        col_slots: vec![(Slot::bra(2), d2), (Slot::bra(1), d1)],
        entries,
    };
    let vl = whole_transpose(&vr);
    Ok((vl, vr))
}

/// Right-multiply by the swap of column factors `j` and `k` (1-based), i.e.
/// compute m·V_{jk}^R as a pure column relabeling.
pub fn right_multiply_swap(m: &GeneralMatrix, j: usize, k: usize) -> Result<GeneralMatrix> {
    let rows = m.row_slots.len();
    let cols = m.col_slots.len();
    if j == k {
        return Err(Error::RepeatedParty(j));
    }
    for &pos in &[j, k] {
        if pos == 0 || pos > cols {
            return Err(Error::FactorOutOfRange { pos, limit: cols });
        }
    }
    let mut order: Vec<usize> = (0..rows + cols).collect();
    order.swap(rows + j - 1, rows + k - 1);
    Ok(reindex(m, &order, rows))
}

/// Left-multiply by the swap of row factors `a` and `b` (1-based): V^L·m as a
/// pure row relabeling.
pub fn swap_row_factors(m: &GeneralMatrix, a: usize, b: usize) -> Result<GeneralMatrix> {
    let rows = m.row_slots.len();
    if a == b {
        return Err(Error::RepeatedParty(a));
    }
    for &pos in &[a, b] {
        if pos == 0 || pos > rows {
            return Err(Error::FactorOutOfRange { pos, limit: rows });
        }
    }
    let mut order: Vec<usize> = (0..rows + m.col_slots.len()).collect();
    order.swap(a - 1, b - 1);
    Ok(reindex(m, &order, rows))
}

/// Dense complex matrix product. Used to verify relabeling-based transforms
/// against explicit operator algebra; desk-scale only.
pub fn matmul(a: &GeneralMatrix, b: &GeneralMatrix) -> Result<GeneralMatrix> {
    let (ar, ac) = (a.nrows(), a.ncols());
    let (br, bc) = (b.nrows(), b.ncols());
    if ac != br {
        return Err(Error::ProductShapeMismatch {
            a_rows: ar,
            a_cols: ac,
            b_rows: br,
            b_cols: bc,
        });
    }
    let mut entries = vec![Complex64::ZERO; ar * bc];
    for i in 0..ar {
        for k in 0..ac {
            let aik = a.entries[i * ac + k];
            if aik == Complex64::ZERO {
                continue;
            }
            for j in 0..bc {
                entries[i * bc + j] += aik * b.entries[k * bc + j];
            }
        }
    }
    Ok(GeneralMatrix {
        row_slots: a.row_slots.clone(),
        col_slots: b.col_slots.clone(),
        entries,
    })
}
