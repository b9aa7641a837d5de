//! Canonical occupation-number representation of bosonic and fermionic
//! multi-particle states.
//!
//! Multi-particle kets are sparse maps from occupation basis states to
//! complex amplitudes ([`FockVector`]). Product states are expanded with
//! permanent (bosons) or determinant (fermions) amplitude kernels over a
//! fixed global ordering of single-particle modes; that ordering also fixes
//! every fermionic sign in the crate.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Amplitudes below this threshold are dropped from sparse vectors.
pub const PRUNE_EPS: f64 = 1e-14;

/// Largest matrix dimension accepted by the permanent/determinant kernels.
pub const KERNEL_SIZE_LIMIT: usize = 14;

/// Exchange statistics of the particle species.
///
/// Selects the symmetric (`Boson`) or exterior (`Fermion`) product algebra
/// everywhere: amplitude kernels, operator signs, and sector keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistics {
    Boson,
    Fermion,
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistics::Boson => write!(f, "boson"),
            Statistics::Fermion => write!(f, "fermion"),
        }
    }
}

/// A single-particle mode: spatial mode index plus internal level index.
///
/// The derived lexicographic order (spatial, then internal) is the global
/// mode order; it is fixed per problem instance and determines the canonical
/// form of every occupation basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModeLabel {
    pub spatial: usize,
    pub internal: usize,
}

impl ModeLabel {
    pub fn new(spatial: usize, internal: usize) -> Self {
        Self { spatial, internal }
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.spatial, self.internal)
    }
}

/// Shape of the single-particle Hilbert space: `spatial_modes` spatial modes,
/// each carrying `internal_dim` internal levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModeSpace {
    pub spatial_modes: usize,
    pub internal_dim: usize,
}

impl ModeSpace {
    pub fn new(spatial_modes: usize, internal_dim: usize) -> Self {
        assert!(spatial_modes > 0 && internal_dim > 0, "empty mode space");
        Self { spatial_modes, internal_dim }
    }

    /// Total single-particle dimension.
    pub fn dim(&self) -> usize {
        self.spatial_modes * self.internal_dim
    }

    /// Flat index of a label, following the global mode order.
    pub fn index_of(&self, label: ModeLabel) -> usize {
        debug_assert!(label.spatial < self.spatial_modes && label.internal < self.internal_dim);
        label.spatial * self.internal_dim + label.internal
    }

    /// Label at a flat index.
    pub fn label_at(&self, index: usize) -> ModeLabel {
        debug_assert!(index < self.dim());
        ModeLabel::new(index / self.internal_dim, index % self.internal_dim)
    }

    /// All labels in global order.
    pub fn labels(&self) -> impl Iterator<Item = ModeLabel> + '_ {
        (0..self.dim()).map(|i| self.label_at(i))
    }
}

/// A normalized single-particle state: a complex amplitude vector over the
/// mode labels of a [`ModeSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct SingleParticleState {
    space: ModeSpace,
    amplitudes: Vec<Complex64>,
}

impl SingleParticleState {
    /// Builds and normalizes a state from a dense amplitude vector.
    ///
    /// Rejects zero (or non-finite) vectors.
    pub fn new(space: ModeSpace, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::TypeMismatch(format!(
                "amplitude vector length {} does not match mode-space dimension {}",
                amplitudes.len(),
                space.dim()
            )));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sq.is_finite() || norm_sq < 1e-24 {
            return Err(Error::DegenerateInput(
                "single-particle amplitude vector has (near-)zero norm".into(),
            ));
        }
        let inv = 1.0 / norm_sq.sqrt();
        let amplitudes = amplitudes.into_iter().map(|a| a * inv).collect();
        Ok(Self { space, amplitudes })
    }

    /// Builds a state from `(label, amplitude)` pairs; unlisted labels are zero.
    pub fn from_pairs(space: ModeSpace, pairs: &[(ModeLabel, Complex64)]) -> Result<Self> {
        let mut amplitudes = vec![Complex64::ZERO; space.dim()];
        for &(label, amp) in pairs {
            amplitudes[space.index_of(label)] += amp;
        }
        Self::new(space, amplitudes)
    }

    /// The basis state occupying exactly one mode.
    pub fn basis(space: ModeSpace, label: ModeLabel) -> Self {
        let mut amplitudes = vec![Complex64::ZERO; space.dim()];
        amplitudes[space.index_of(label)] = Complex64::ONE;
        Self { space, amplitudes }
    }

    pub fn space(&self) -> ModeSpace {
        self.space
    }

    pub fn amplitude(&self, label: ModeLabel) -> Complex64 {
        self.amplitudes[self.space.index_of(label)]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn overlap(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Labels carrying non-negligible amplitude.
    pub fn support(&self) -> Vec<ModeLabel> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > PRUNE_EPS * PRUNE_EPS)
            .map(|(i, _)| self.space.label_at(i))
            .collect()
    }
}

/// A canonical occupation basis state: a sorted list of occupied modes.
///
/// Bosons carry a non-decreasing multiset, fermions a strictly increasing
/// set (Pauli exclusion). The empty list is the vacuum.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OccupationBasisState {
    statistics: Statistics,
    labels: Vec<ModeLabel>,
}

impl OccupationBasisState {
    /// Vacuum state of the given statistics.
    pub fn vacuum(statistics: Statistics) -> Self {
        Self { statistics, labels: Vec::new() }
    }

    /// Builds a canonical key from already-sorted labels, validating the
    /// statistics-specific ordering invariant.
    pub fn new(statistics: Statistics, labels: Vec<ModeLabel>) -> Result<Self> {
        let ok = match statistics {
            Statistics::Boson => labels.windows(2).all(|w| w[0] <= w[1]),
            Statistics::Fermion => labels.windows(2).all(|w| w[0] < w[1]),
        };
        if !ok {
            return Err(Error::TypeMismatch(format!(
                "labels are not canonically sorted for {statistics} statistics"
            )));
        }
        Ok(Self { statistics, labels })
    }

    /// Sorts arbitrary labels into canonical form, returning the key together
    /// with the sorting parity (always `+1` for bosons). Returns `None` for a
    /// fermionic list with a repeated label.
    pub fn from_unsorted(statistics: Statistics, mut labels: Vec<ModeLabel>) -> Option<(Self, f64)> {
        let parity = sort_labels_with_parity(&mut labels);
        if statistics == Statistics::Fermion {
            if labels.windows(2).any(|w| w[0] == w[1]) {
                return None;
            }
            Some((Self { statistics, labels }, parity))
        } else {
            Some((Self { statistics, labels }, 1.0))
        }
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn labels(&self) -> &[ModeLabel] {
        &self.labels
    }

    pub fn particle_count(&self) -> usize {
        self.labels.len()
    }

    pub fn is_vacuum(&self) -> bool {
        self.labels.is_empty()
    }

    /// Occupation multiplicities of repeated labels (bosons).
    pub fn multiplicities(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut run = 0usize;
        for (i, l) in self.labels.iter().enumerate() {
            if i > 0 && *l == self.labels[i - 1] {
                run += 1;
            } else {
                if run > 0 {
                    out.push(run);
                }
                run = 1;
            }
        }
        if run > 0 {
            out.push(run);
        }
        out
    }

    /// ∏ₖ nₖ! over the occupation multiplicities.
    pub fn multiplicity_factorial(&self) -> f64 {
        self.multiplicities().iter().map(|&n| factorial(n)).product()
    }

    /// Enumerates every occupation key with `n` particles drawn from the
    /// given labels (combinations for fermions, multisets for bosons).
    pub fn enumerate(statistics: Statistics, labels: &[ModeLabel], n: usize) -> Vec<Self> {
        let mut sorted = labels.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if n == 0 {
            return vec![Self::vacuum(statistics)];
        }
        match statistics {
            Statistics::Fermion => sorted
                .iter()
                .copied()
                .combinations(n)
                .map(|labels| Self { statistics, labels })
                .collect(),
            Statistics::Boson => sorted
                .iter()
                .copied()
                .combinations_with_replacement(n)
                .map(|labels| Self { statistics, labels })
                .collect(),
        }
    }
}

// Keys sort by particle number first, then lexicographically: vectors print
// graded by sector and sector blocks stay contiguous.
impl PartialOrd for OccupationBasisState {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OccupationBasisState {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.labels.len(), &self.labels).cmp(&(other.labels.len(), &other.labels))
    }
}

impl fmt::Display for OccupationBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.labels.is_empty() {
            write!(f, "vac")
        } else {
            write!(f, "{}", self.labels.iter().map(|l| l.to_string()).join(" "))
        }
    }
}

/// Sparse multi-particle state: a map from occupation basis states to
/// amplitudes. May mix particle-number sectors (it lives in Fock space, not a
/// fixed-N subspace).
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    statistics: Statistics,
    space: ModeSpace,
    terms: BTreeMap<OccupationBasisState, Complex64>,
}

impl FockVector {
    /// The zero vector.
    pub fn zero(space: ModeSpace, statistics: Statistics) -> Self {
        Self { statistics, space, terms: BTreeMap::new() }
    }

    /// The vacuum ket |vac⟩ with amplitude one.
    pub fn vacuum(space: ModeSpace, statistics: Statistics) -> Self {
        let mut v = Self::zero(space, statistics);
        v.terms.insert(OccupationBasisState::vacuum(statistics), Complex64::ONE);
        v
    }

    /// A single occupation basis ket with amplitude one.
    pub fn basis_state(space: ModeSpace, key: OccupationBasisState) -> Self {
        let mut v = Self::zero(space, key.statistics());
        v.terms.insert(key, Complex64::ONE);
        v
    }

    /// Builds a vector from `(key, amplitude)` pairs, accumulating duplicates
    /// and pruning negligible amplitudes.
    pub fn from_terms<I>(space: ModeSpace, statistics: Statistics, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (OccupationBasisState, Complex64)>,
    {
        let mut v = Self::zero(space, statistics);
        for (key, amp) in terms {
            if key.statistics() != statistics {
                return Err(Error::TypeMismatch(
                    "occupation key statistics differs from vector statistics".into(),
                ));
            }
            v.accumulate(key, amp);
        }
        v.prune();
        Ok(v)
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn space(&self) -> ModeSpace {
        self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OccupationBasisState, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn amplitude(&self, key: &OccupationBasisState) -> Complex64 {
        self.terms.get(key).copied().unwrap_or(Complex64::ZERO)
    }

    /// Particle numbers present with non-negligible weight.
    pub fn particle_sectors(&self) -> Vec<usize> {
        let mut sectors: Vec<usize> = self.terms.keys().map(|k| k.particle_count()).collect();
        sectors.dedup();
        sectors
    }

    pub(crate) fn accumulate(&mut self, key: OccupationBasisState, amp: Complex64) {
        let entry = self.terms.entry(key).or_insert(Complex64::ZERO);
        *entry += amp;
    }

    pub(crate) fn prune(&mut self) {
        self.terms.retain(|_, a| a.norm() >= PRUNE_EPS);
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.statistics != other.statistics {
            return Err(Error::TypeMismatch(format!(
                "cannot combine {} and {} vectors",
                self.statistics, other.statistics
            )));
        }
        if self.space != other.space {
            return Err(Error::TypeMismatch(
                "vectors live on different mode spaces".into(),
            ));
        }
        Ok(())
    }

    /// Sum of two vectors.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (key, amp) in &other.terms {
            out.accumulate(key.clone(), *amp);
        }
        out.prune();
        Ok(out)
    }

    /// Scalar multiple.
    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for amp in out.terms.values_mut() {
            *amp *= factor;
        }
        out.prune();
        out
    }

    /// Euclidean norm over the orthonormal occupation basis.
    pub fn norm(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Unit-norm copy; errors on (near-)zero vectors.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm < 1e-12 {
            return Err(Error::DegenerateInput(format!(
                "cannot normalize vector of norm {norm:.3e}"
            )));
        }
        Ok(self.scale(Complex64::new(1.0 / norm, 0.0)))
    }

    /// Sesquilinear inner product ⟨self|other⟩, conjugate-linear in `self`.
    /// Terms in different particle-number sectors contribute zero.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_compatible(other)?;
        let mut acc = Complex64::ZERO;
        if self.terms.len() <= other.terms.len() {
            for (key, bra) in &self.terms {
                if let Some(ket) = other.terms.get(key) {
                    acc += bra.conj() * ket;
                }
            }
        } else {
            for (key, ket) in &other.terms {
                if let Some(bra) = self.terms.get(key) {
                    acc += bra.conj() * ket;
                }
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for FockVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (key, amp)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({:.6}{:+.6}i)|{}⟩", amp.re, amp.im, key)?;
        }
        Ok(())
    }
}

/// Sorts labels in place, returning the permutation parity as ±1.
pub fn sort_labels_with_parity(labels: &mut [ModeLabel]) -> f64 {
    // insertion sort; lists are tiny
    let mut parity = 1.0;
    for i in 1..labels.len() {
        let mut j = i;
        while j > 0 && labels[j - 1] > labels[j] {
            labels.swap(j - 1, j);
            parity = -parity;
            j -= 1;
        }
    }
    parity
}

/// Parity picked up when concatenating two ascending label lists and sorting
/// the result: −1 per (a, b) pair with `b < a`.
pub fn merge_parity(a: &[ModeLabel], b: &[ModeLabel]) -> f64 {
    let mut inversions = 0usize;
    let mut bi = 0usize;
    for x in a {
        while bi < b.len() && b[bi] < *x {
            bi += 1;
        }
        inversions += bi;
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Permanent of a complex square matrix via Ryser's inclusion–exclusion
/// formula with Gray-code subset updates, O(2ⁿ·n).
///
/// Dimension is capped at [`KERNEL_SIZE_LIMIT`].
pub fn permanent(matrix: &[Vec<Complex64>]) -> Result<Complex64> {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return Err(Error::TypeMismatch("permanent of a non-square matrix".into()));
    }
    if n > KERNEL_SIZE_LIMIT {
        return Err(Error::SizeLimit { dim: n, limit: KERNEL_SIZE_LIMIT });
    }
    if n == 0 {
        return Ok(Complex64::ONE);
    }
    let mut row_sums = vec![Complex64::ZERO; n];
    let mut total = Complex64::ZERO;
    let mut prev_gray: u64 = 0;
    for k in 1u64..(1 << n) {
        let gray = k ^ (k >> 1);
        let changed = gray ^ prev_gray;
        let col = changed.trailing_zeros() as usize;
        let added = gray & changed != 0;
        for (i, row) in matrix.iter().enumerate() {
            if added {
                row_sums[i] += row[col];
            } else {
                row_sums[i] -= row[col];
            }
        }
        prev_gray = gray;
        let product: Complex64 = row_sums.iter().product();
        let sign = if (gray.count_ones() as usize + n) % 2 == 0 { 1.0 } else { -1.0 };
        total += product * sign;
    }
    Ok(total)
}

/// Determinant of a complex square matrix by LU with partial pivoting.
pub fn determinant(matrix: &[Vec<Complex64>]) -> Result<Complex64> {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return Err(Error::TypeMismatch("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(Complex64::ONE);
    }
    let mut m: Vec<Vec<Complex64>> = matrix.to_vec();
    let mut det = Complex64::ONE;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].norm().partial_cmp(&m[b][col].norm()).unwrap())
            .unwrap();
        if m[pivot][col].norm() == 0.0 {
            return Ok(Complex64::ZERO);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            for k in col..n {
                let sub = factor * m[col][k];
                m[row][k] -= sub;
            }
        }
    }
    Ok(det)
}

fn amplitude_kernel(statistics: Statistics, matrix: &[Vec<Complex64>]) -> Result<Complex64> {
    match statistics {
        Statistics::Boson => permanent(matrix),
        Statistics::Fermion => determinant(matrix),
    }
}

/// Normalization factor of the raw (anti)symmetrized product of the given
/// single-particle states: √|Per/Det(Gram)| with Gram[i][j] = ⟨Ψᵢ|Ψⱼ⟩.
pub fn product_norm_factor(states: &[SingleParticleState], statistics: Statistics) -> Result<f64> {
    let gram: Vec<Vec<Complex64>> = states
        .iter()
        .map(|a| states.iter().map(|b| a.overlap(b)).collect())
        .collect();
    let g = amplitude_kernel(statistics, &gram)?;
    // Gram permanents/determinants are real and nonnegative up to rounding.
    Ok(g.re.max(0.0).sqrt())
}

/// Normalized symmetric (∨) or exterior (∧) product of single-particle
/// states, expanded over the occupation basis.
///
/// The amplitude on a basis state `B` with labels `b₁ ≤ … ≤ b_N` is
/// `Per[⟨b_j|Ψᵢ⟩] / √(∏ₖ nₖ!)` for bosons and `Det[⟨b_j|Ψᵢ⟩]` for fermions
/// (labels strictly ascending), after which the whole vector is rescaled to
/// unit norm. A fermionic input whose wedge vanishes numerically (linearly
/// dependent states) yields [`Error::ZeroWedge`].
pub fn product_state(states: &[SingleParticleState], statistics: Statistics) -> Result<FockVector> {
    if states.is_empty() {
        return Err(Error::DegenerateInput("empty single-particle state list".into()));
    }
    let space = states[0].space();
    if states.iter().any(|s| s.space() != space) {
        return Err(Error::TypeMismatch(
            "single-particle states live on different mode spaces".into(),
        ));
    }
    let n = states.len();
    if statistics == Statistics::Boson && n > KERNEL_SIZE_LIMIT {
        return Err(Error::SizeLimit { dim: n, limit: KERNEL_SIZE_LIMIT });
    }

    // Union of the single-particle supports; only these modes can be occupied.
    let mut support: Vec<ModeLabel> = states.iter().flat_map(|s| s.support()).collect();
    support.sort_unstable();
    support.dedup();

    let mut out = FockVector::zero(space, statistics);
    for key in OccupationBasisState::enumerate(statistics, &support, n) {
        let matrix: Vec<Vec<Complex64>> = states
            .iter()
            .map(|psi| key.labels().iter().map(|&l| psi.amplitude(l)).collect())
            .collect();
        let mut amp = amplitude_kernel(statistics, &matrix)?;
        if statistics == Statistics::Boson {
            amp /= key.multiplicity_factorial().sqrt();
        }
        if amp.norm() >= PRUNE_EPS {
            out.accumulate(key, amp);
        }
    }
    let norm = out.norm();
    if norm < 1e-12 {
        return Err(Error::ZeroWedge { norm });
    }
    Ok(out.scale(Complex64::new(1.0 / norm, 0.0)))
}

/// Transition amplitude between two normalized product states,
/// `Per/Det[⟨Φᵢ|Ψⱼ⟩]` divided by both normalization factors.
///
/// Equals `inner(product_state(bra), product_state(ket))`. Lists of unequal
/// length overlap exactly zero (different particle-number sectors) — that is
/// a result, not an error.
pub fn transition_amplitude(
    bra_states: &[SingleParticleState],
    ket_states: &[SingleParticleState],
    statistics: Statistics,
) -> Result<Complex64> {
    if bra_states.len() != ket_states.len() {
        return Ok(Complex64::ZERO);
    }
    if bra_states.is_empty() {
        return Ok(Complex64::ONE);
    }
    let nf_bra = product_norm_factor(bra_states, statistics)?;
    let nf_ket = product_norm_factor(ket_states, statistics)?;
    if nf_bra < 1e-12 || nf_ket < 1e-12 {
        return Err(Error::ZeroWedge { norm: nf_bra.min(nf_ket) });
    }
    let cross: Vec<Vec<Complex64>> = bra_states
        .iter()
        .map(|phi| ket_states.iter().map(|psi| phi.overlap(psi)).collect())
        .collect();
    let kernel = amplitude_kernel(statistics, &cross)?;
    Ok(kernel / (nf_bra * nf_ket))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{naive_determinant, naive_permanent};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_state(space: ModeSpace, rng: &mut ChaCha8Rng) -> SingleParticleState {
        let amps: Vec<Complex64> = (0..space.dim())
            .map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        SingleParticleState::new(space, amps).unwrap()
    }

    #[test]
    fn permanent_two_by_two() {
        let m = vec![vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(3.0, 0.0), c(4.0, 0.0)]];
        // ad + bc
        assert!((permanent(&m).unwrap() - c(10.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn permanent_identity_is_one() {
        for n in 1..=6 {
            let m: Vec<Vec<Complex64>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { Complex64::ONE } else { Complex64::ZERO }).collect())
                .collect();
            assert!((permanent(&m).unwrap() - Complex64::ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn permanent_matches_naive_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = 5;
            let m: Vec<Vec<Complex64>> = (0..n)
                .map(|_| (0..n).map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect())
                .collect();
            let fast = permanent(&m).unwrap();
            let slow = naive_permanent(&m);
            assert!((fast - slow).norm() < 1e-9, "ryser {fast} vs naive {slow}");
        }
    }

    #[test]
    fn permanent_rejects_oversized_matrices() {
        let n = KERNEL_SIZE_LIMIT + 1;
        let m = vec![vec![Complex64::ONE; n]; n];
        assert!(matches!(permanent(&m), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn determinant_matches_naive_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let n = 5;
        let m: Vec<Vec<Complex64>> = (0..n)
            .map(|_| (0..n).map(|_| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect())
            .collect();
        let lu = determinant(&m).unwrap();
        let slow = naive_determinant(&m);
        assert!((lu - slow).norm() < 1e-9);
    }

    #[test]
    fn two_orthogonal_fermions_form_a_single_slater_term() {
        let space = ModeSpace::new(2, 2);
        let up = SingleParticleState::basis(space, ModeLabel::new(0, 0));
        let down = SingleParticleState::basis(space, ModeLabel::new(0, 1));
        let v = product_state(&[up, down], Statistics::Fermion).unwrap();
        assert_eq!(v.len(), 1);
        let key = OccupationBasisState::new(
            Statistics::Fermion,
            vec![ModeLabel::new(0, 0), ModeLabel::new(0, 1)],
        )
        .unwrap();
        assert!((v.amplitude(&key) - Complex64::ONE).norm() < 1e-12);
    }

    #[test]
    fn identical_fermions_annihilate() {
        let space = ModeSpace::new(2, 2);
        let up = SingleParticleState::basis(space, ModeLabel::new(0, 0));
        let result = product_state(&[up.clone(), up], Statistics::Fermion);
        assert!(matches!(result, Err(Error::ZeroWedge { .. })));
    }

    #[test]
    fn two_balanced_bosons_expand_with_condensate_weights() {
        // both particles in (|X⟩ + |Y⟩)/√2, single internal level
        let space = ModeSpace::new(2, 1);
        let s = SingleParticleState::from_pairs(
            space,
            &[
                (ModeLabel::new(0, 0), c(1.0, 0.0)),
                (ModeLabel::new(1, 0), c(1.0, 0.0)),
            ],
        )
        .unwrap();
        let v = product_state(&[s.clone(), s], Statistics::Boson).unwrap();
        let xx = OccupationBasisState::new(
            Statistics::Boson,
            vec![ModeLabel::new(0, 0), ModeLabel::new(0, 0)],
        )
        .unwrap();
        let xy = OccupationBasisState::new(
            Statistics::Boson,
            vec![ModeLabel::new(0, 0), ModeLabel::new(1, 0)],
        )
        .unwrap();
        let yy = OccupationBasisState::new(
            Statistics::Boson,
            vec![ModeLabel::new(1, 0), ModeLabel::new(1, 0)],
        )
        .unwrap();
        assert!((v.amplitude(&xx) - c(0.5, 0.0)).norm() < 1e-12);
        assert!((v.amplitude(&xy) - c(1.0 / 2.0_f64.sqrt(), 0.0)).norm() < 1e-12);
        assert!((v.amplitude(&yy) - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn transition_amplitude_of_orthonormal_list_is_one() {
        let space = ModeSpace::new(2, 2);
        let states: Vec<_> = (0..3)
            .map(|i| SingleParticleState::basis(space, space.label_at(i)))
            .collect();
        for stat in [Statistics::Boson, Statistics::Fermion] {
            let t = transition_amplitude(&states, &states, stat).unwrap();
            assert!((t - Complex64::ONE).norm() < 1e-12);
        }
    }

    #[test]
    fn fermionic_row_swap_negates_amplitude() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let space = ModeSpace::new(3, 2);
        let bra: Vec<_> = (0..3).map(|_| random_state(space, &mut rng)).collect();
        let ket: Vec<_> = (0..3).map(|_| random_state(space, &mut rng)).collect();
        let t = transition_amplitude(&bra, &ket, Statistics::Fermion).unwrap();
        let mut swapped = bra.clone();
        swapped.swap(0, 2);
        let t_swapped = transition_amplitude(&swapped, &ket, Statistics::Fermion).unwrap();
        assert!((t + t_swapped).norm() < 1e-10, "determinant antisymmetry broken");
        // guard: a permanent kernel would NOT flip the sign here
        let p = naive_permanent(
            &bra.iter()
                .map(|a| ket.iter().map(|b| a.overlap(b)).collect())
                .collect::<Vec<_>>(),
        );
        let p_swapped = naive_permanent(
            &swapped
                .iter()
                .map(|a| ket.iter().map(|b| a.overlap(b)).collect())
                .collect::<Vec<_>>(),
        );
        assert!((p - p_swapped).norm() < 1e-10);
        assert!(p.norm() > 1e-6, "degenerate draw");
    }

    #[test]
    fn mismatched_particle_numbers_overlap_to_zero() {
        let space = ModeSpace::new(2, 1);
        let a = SingleParticleState::basis(space, ModeLabel::new(0, 0));
        let b = SingleParticleState::basis(space, ModeLabel::new(1, 0));
        let t = transition_amplitude(&[a.clone()], &[a, b], Statistics::Boson).unwrap();
        assert_eq!(t, Complex64::ZERO);
    }

    #[test]
    fn product_matches_kernel_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for stat in [Statistics::Boson, Statistics::Fermion] {
            for _ in 0..30 {
                let space = ModeSpace::new(2, 2);
                let n = rng.gen_range(1..=3);
                let bra: Vec<_> = (0..n).map(|_| random_state(space, &mut rng)).collect();
                let ket: Vec<_> = (0..n).map(|_| random_state(space, &mut rng)).collect();
                let via_kernel = transition_amplitude(&bra, &ket, stat).unwrap();
                let via_products = product_state(&bra, stat)
                    .unwrap()
                    .inner(&product_state(&ket, stat).unwrap())
                    .unwrap();
                assert!(
                    (via_kernel - via_products).norm() < 1e-9,
                    "{stat}: kernel {via_kernel} vs products {via_products}"
                );
            }
        }
    }

    #[test]
    fn exchange_symmetry_of_product_inputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let space = ModeSpace::new(2, 3);
        for _ in 0..20 {
            let n = rng.gen_range(2..=4usize);
            let states: Vec<_> = (0..n).map(|_| random_state(space, &mut rng)).collect();
            let reference = match product_state(&states, Statistics::Fermion) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let mut labels: Vec<ModeLabel> = perm.iter().map(|&i| ModeLabel::new(i, 0)).collect();
            let parity = sort_labels_with_parity(&mut labels);
            let permuted: Vec<_> = perm.iter().map(|&i| states[i].clone()).collect();

            let fermi = product_state(&permuted, Statistics::Fermion).unwrap();
            let expected = reference.scale(c(parity, 0.0));
            let diff = fermi.add(&expected.scale(c(-1.0, 0.0))).unwrap();
            assert!(diff.norm() < 1e-10, "fermion exchange parity broken");

            let bose_ref = product_state(&states, Statistics::Boson).unwrap();
            let bose = product_state(&permuted, Statistics::Boson).unwrap();
            let diff = bose.add(&bose_ref.scale(c(-1.0, 0.0))).unwrap();
            assert!(diff.norm() < 1e-10, "boson exchange symmetry broken");
        }
    }

    #[test]
    fn inner_product_basics() {
        let space = ModeSpace::new(2, 2);
        for stat in [Statistics::Boson, Statistics::Fermion] {
            let vac = FockVector::vacuum(space, stat);
            assert!((vac.inner(&vac).unwrap() - Complex64::ONE).norm() < 1e-15);
            let key = OccupationBasisState::new(stat, vec![ModeLabel::new(0, 1)]).unwrap();
            let b = FockVector::basis_state(space, key);
            assert!((b.inner(&b).unwrap() - Complex64::ONE).norm() < 1e-15);
            // cross-sector overlap vanishes
            assert_eq!(vac.inner(&b).unwrap(), Complex64::ZERO);
        }
    }

    #[test]
    fn statistics_mismatch_is_rejected() {
        let space = ModeSpace::new(2, 1);
        let b = FockVector::vacuum(space, Statistics::Boson);
        let f = FockVector::vacuum(space, Statistics::Fermion);
        assert!(matches!(b.inner(&f), Err(Error::TypeMismatch(_))));
        assert!(matches!(b.add(&f), Err(Error::TypeMismatch(_))));
    }

    #[test]
    fn merge_parity_counts_inversions() {
        let a = [ModeLabel::new(1, 0)];
        let b = [ModeLabel::new(0, 0)];
        assert_eq!(merge_parity(&a, &b), -1.0);
        assert_eq!(merge_parity(&b, &a), 1.0);
        assert_eq!(merge_parity(&[], &b), 1.0);
    }
}
