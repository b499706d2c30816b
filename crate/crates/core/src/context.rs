//! Gibbs contexts, population vectors, β-orderings and the decomposition of
//! a non-interacting Hamiltonian into degenerate energy subspaces.
//!
//! Every type here is immutable after construction.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Input normalization tolerance.
pub const TAU_NORM: f64 = 1e-10;

/// Relative tolerance for grouping degenerate energies (scaled by max |E|).
pub const TAU_DEG_REL: f64 = 1e-9;

/// Inverse temperature. Zero temperature is represented explicitly so that
/// the ground-state-only Gibbs vector is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beta {
    Finite(f64),
    Infinite,
}

impl Beta {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Beta::Infinite)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Beta::Finite(b) if *b == 0.0)
    }

    /// The finite value, if any.
    pub fn value(&self) -> Option<f64> {
        match self {
            Beta::Finite(b) => Some(*b),
            Beta::Infinite => None,
        }
    }
}

impl From<f64> for Beta {
    fn from(b: f64) -> Self {
        if b == f64::INFINITY {
            Beta::Infinite
        } else {
            Beta::Finite(b)
        }
    }
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beta::Finite(b) => write!(f, "{b}"),
            Beta::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Beta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(Beta::Infinite);
        }
        let b: f64 = t
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("cannot parse beta from {s:?}")))?;
        if b.is_nan() {
            return Err(Error::InvalidConfig("beta is NaN".into()));
        }
        Ok(Beta::from(b))
    }
}

impl Serialize for Beta {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Beta::Finite(b) => s.serialize_f64(*b),
            Beta::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Beta {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(b) => Ok(Beta::from(b)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Energy spectrum plus inverse temperature, with the derived Gibbs vector.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsContext {
    energies: Vec<f64>,
    beta: Beta,
    gamma: Vec<f64>,
}

impl GibbsContext {
    pub fn new(energies: Vec<f64>, beta: Beta) -> Result<Self> {
        make_context(energies, beta)
    }

    /// Two non-interacting qubits with local gap `gap`: energies (0, E, E, 2E)
    /// in the basis order |00⟩, |01⟩, |10⟩, |11⟩.
    pub fn two_qubit(gap: f64, beta: Beta) -> Result<Self> {
        if !(gap > 0.0) || !gap.is_finite() {
            return Err(Error::NonPositiveGap(gap));
        }
        make_context(vec![0.0, gap, gap, 2.0 * gap], beta)
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn beta(&self) -> Beta {
        self.beta
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Degeneracy tolerance for this spectrum.
    pub fn tau_deg(&self) -> f64 {
        tau_deg(&self.energies)
    }

    /// The Gibbs vector as a state.
    pub fn gibbs_state(&self) -> PopVector {
        PopVector { probs: self.gamma.clone() }
    }

    /// Returns the local gap E when the spectrum is (0, E, E, 2E) up to a
    /// common offset.
    pub fn two_qubit_gap(&self) -> Option<f64> {
        if self.energies.len() != 4 {
            return None;
        }
        let e = &self.energies;
        let gap = e[1] - e[0];
        let tol = self.tau_deg().max(f64::EPSILON);
        let ok = gap > tol
            && (e[2] - e[0] - gap).abs() <= tol
            && (e[3] - e[0] - 2.0 * gap).abs() <= tol;
        ok.then_some(gap)
    }

    /// Same spectrum at a different temperature.
    pub fn with_beta(&self, beta: Beta) -> Result<Self> {
        make_context(self.energies.clone(), beta)
    }

    pub(crate) fn check_dim(&self, p: &PopVector) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: p.dim() });
        }
        Ok(())
    }
}

fn tau_deg(energies: &[f64]) -> f64 {
    let scale = energies.iter().fold(0.0_f64, |m, e| m.max(e.abs()));
    TAU_DEG_REL * scale
}

/// Builds a Gibbs context. The exponent is shifted by the ground energy so
/// that the largest Boltzmann weight is exactly 1.
pub fn make_context(energies: Vec<f64>, beta: Beta) -> Result<GibbsContext> {
    if energies.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    if let Some(&e) = energies.iter().find(|e| !e.is_finite()) {
        return Err(Error::NonFiniteEnergy(e));
    }
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let weights: Vec<f64> = match beta {
        Beta::Finite(b) => {
            if !(b >= 0.0) || !b.is_finite() {
                return Err(Error::NegativeBeta(b));
            }
            energies.iter().map(|&e| (-b * (e - e_min)).exp()).collect()
        }
        Beta::Infinite => {
            let tol = tau_deg(&energies);
            energies
                .iter()
                .map(|&e| if e - e_min <= tol { 1.0 } else { 0.0 })
                .collect()
        }
    };
    let z: f64 = weights.iter().sum();
    let gamma = weights.into_iter().map(|w| w / z).collect();
    Ok(GibbsContext { energies, beta, gamma })
}

/// An energy-incoherent state: a point of the probability simplex.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PopVector {
    probs: Vec<f64>,
}

impl PopVector {
    /// Validates `probs`. Entries down to −τ_norm are clamped to 0 and the
    /// sum must be within τ_norm of 1; the result is rescaled to sum to 1.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidState("empty vector".into()));
        }
        let mut probs = probs;
        for p in probs.iter_mut() {
            if !p.is_finite() {
                return Err(Error::InvalidState(format!("non-finite entry {p}")));
            }
            if *p < -TAU_NORM {
                return Err(Error::InvalidState(format!("negative entry {p}")));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > TAU_NORM {
            return Err(Error::InvalidState(format!("entries sum to {sum}, not 1")));
        }
        probs.iter_mut().for_each(|p| *p /= sum);
        Ok(PopVector { probs })
    }

    /// Clamps negatives to zero and divides by the sum. Only for explicit
    /// renormalization requests.
    pub fn renormalized(probs: Vec<f64>) -> Result<Self> {
        let clamped: Vec<f64> = probs.into_iter().map(|p| p.max(0.0)).collect();
        let sum: f64 = clamped.iter().sum();
        if !(sum > 0.0) || !sum.is_finite() {
            return Err(Error::InvalidState("cannot renormalize a zero vector".into()));
        }
        PopVector::new(clamped.into_iter().map(|p| p / sum).collect())
    }

    /// For vectors produced by internal arithmetic: rounding noise below zero
    /// is clamped, no validation.
    pub(crate) fn from_computed(mut probs: Vec<f64>) -> Self {
        probs.iter_mut().for_each(|p| *p = p.max(0.0));
        PopVector { probs }
    }

    /// A basis vector of dimension `d`.
    pub fn basis(d: usize, level: usize) -> Self {
        let mut probs = vec![0.0; d];
        probs[level] = 1.0;
        PopVector { probs }
    }

    pub fn uniform(d: usize) -> Self {
        PopVector { probs: vec![1.0 / d as f64; d] }
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probs
    }

    /// Applies a level permutation: entry `i` of the result is `self[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> PopVector {
        PopVector { probs: perm.iter().map(|&i| self.probs[i]).collect() }
    }

    /// Convex combination `w·self + (1−w)·other`.
    pub fn mix(&self, other: &PopVector, w: f64) -> PopVector {
        let probs = self
            .probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| w * a + (1.0 - w) * b)
            .collect();
        PopVector::from_computed(probs)
    }

    pub fn max_abs_diff(&self, other: &PopVector) -> f64 {
        self.probs
            .iter()
            .zip(&other.probs)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

impl std::ops::Index<usize> for PopVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.probs[i]
    }
}

impl<'de> Deserialize<'de> for PopVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let probs = Vec::<f64>::deserialize(d)?;
        PopVector::new(probs).map_err(serde::de::Error::custom)
    }
}

/// A permutation of levels listing them by non-increasing p_i/γ_i.
/// Stored 0-based; `one_based` gives the conventional (π(1),…,π(d)) form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BetaOrdering {
    perm: Vec<usize>,
}

impl BetaOrdering {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let d = perm.len();
        let mut seen = vec![false; d];
        for &i in &perm {
            if i >= d || seen[i] {
                return Err(Error::InvalidPermutation(format!("{perm:?} is not a bijection on 0..{d}")));
            }
            seen[i] = true;
        }
        Ok(BetaOrdering { perm })
    }

    pub fn from_one_based(perm: &[usize]) -> Result<Self> {
        if perm.contains(&0) {
            return Err(Error::InvalidPermutation(format!("{perm:?} contains 0")));
        }
        Self::new(perm.iter().map(|i| i - 1).collect())
    }

    pub fn identity(d: usize) -> Self {
        BetaOrdering { perm: (0..d).collect() }
    }

    /// The two-qubit ordering (2,1,3,4).
    pub fn pi_star() -> Self {
        BetaOrdering { perm: vec![1, 0, 2, 3] }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.perm.iter().map(|i| i + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }
}

impl fmt::Display for BetaOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Rank class of a level: zero-γ occupied levels precede all finite ratios,
/// zero-γ empty levels come last.
#[derive(Clone, Copy)]
enum Rank {
    Unbounded(f64),
    Ratio(f64),
    Empty,
}

fn rank(p: f64, g: f64) -> Rank {
    if g > 0.0 {
        Rank::Ratio(p / g)
    } else if p > 0.0 {
        Rank::Unbounded(p)
    } else {
        Rank::Empty
    }
}

fn rank_cmp(a: Rank, b: Rank) -> Ordering {
    use Rank::*;
    match (a, b) {
        (Unbounded(x), Unbounded(y)) | (Ratio(x), Ratio(y)) => y.partial_cmp(&x).unwrap_or(Ordering::Equal),
        (Unbounded(_), _) => Ordering::Less,
        (_, Unbounded(_)) => Ordering::Greater,
        (Empty, Empty) => Ordering::Equal,
        (Empty, _) => Ordering::Greater,
        (_, Empty) => Ordering::Less,
    }
}

/// Sorts levels by non-increasing p_i/γ_i; ties keep ascending index order.
pub fn beta_order(p: &PopVector, ctx: &GibbsContext) -> Result<BetaOrdering> {
    ctx.check_dim(p)?;
    Ok(beta_order_unchecked(p.as_slice(), ctx.gamma()))
}

pub(crate) fn beta_order_unchecked(p: &[f64], gamma: &[f64]) -> BetaOrdering {
    let mut perm: Vec<usize> = (0..p.len()).collect();
    perm.sort_by(|&i, &j| rank_cmp(rank(p[i], gamma[i]), rank(p[j], gamma[j])));
    BetaOrdering { perm }
}

/// Basis levels of a tensor-product system grouped by total energy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubspaceDecomposition {
    groups: Vec<(f64, Vec<usize>)>,
}

impl SubspaceDecomposition {
    /// Groups in ascending energy; each holds ascending level indices.
    pub fn groups(&self) -> &[(f64, Vec<usize>)] {
        &self.groups
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(|(_, g)| g.len()).collect()
    }

    /// The group whose energy is within `tol` of `energy`.
    pub fn group_at(&self, energy: f64, tol: f64) -> Option<&[usize]> {
        self.groups
            .iter()
            .find(|(e, _)| (e - energy).abs() <= tol)
            .map(|(_, g)| g.as_slice())
    }
}

/// Energies of the product basis. Subsystem `k` has levels
/// (0, gaps[k][0], gaps[k][1], …); the first subsystem is the most
/// significant digit of the basis index.
pub fn product_energies(local_gaps: &[Vec<f64>]) -> Result<Vec<f64>> {
    if local_gaps.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let mut energies = vec![0.0];
    for gaps in local_gaps {
        if let Some(&e) = gaps.iter().find(|e| !e.is_finite()) {
            return Err(Error::NonFiniteEnergy(e));
        }
        let levels: Vec<f64> = std::iter::once(0.0).chain(gaps.iter().copied()).collect();
        energies = energies
            .iter()
            .flat_map(|&e| levels.iter().map(move |&l| e + l))
            .collect();
    }
    Ok(energies)
}

pub fn decompose_subspaces(local_gaps: &[Vec<f64>]) -> Result<SubspaceDecomposition> {
    let energies = product_energies(local_gaps)?;
    Ok(group_by_energy(&energies))
}

/// Single-linkage clustering of sorted energies at τ_deg.
pub fn group_by_energy(energies: &[f64]) -> SubspaceDecomposition {
    let tol = tau_deg(energies);
    let mut idx: Vec<usize> = (0..energies.len()).collect();
    idx.sort_by(|&a, &b| energies[a].total_cmp(&energies[b]).then(a.cmp(&b)));
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for i in idx {
        let e = energies[i];
        match groups.last_mut() {
            Some((_, g)) if e - last <= tol => g.push(i),
            _ => groups.push((e, vec![i])),
        }
        last = e;
    }
    for (_, g) in groups.iter_mut() {
        g.sort_unstable();
    }
    SubspaceDecomposition { groups }
}

/// JSON form of a state together with its context.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateSpec {
    pub probs: Vec<f64>,
    pub energies: Vec<f64>,
    pub beta: Beta,
}

impl StateSpec {
    pub fn into_parts(self) -> Result<(PopVector, GibbsContext)> {
        let ctx = make_context(self.energies, self.beta)?;
        let p = PopVector::new(self.probs)?;
        ctx.check_dim(&p)?;
        Ok((p, ctx))
    }
}
