//! Exact symbolic normalized Laplacian spectra of iterated triangulations.
//!
//! One triangulation step maps a spectrum `σ` to
//!
//! ```text
//! σ' = { λ/2 : λ ∈ σ, λ ≠ 2 } ∪ { 3/2 × N } ∪ { 1 × r }
//! ```
//!
//! where `N` is the vertex count before the step. Unrolled over `n` steps the
//! spectrum is the seed spectrum (one copy of 2 removed for a bipartite seed)
//! halved `n` times, plus, for every generation `g = 1..n`, a block of 3/2 and
//! a block of 1 that have each been halved `n − g` times. A
//! [`SpectrumDescriptor`] stores exactly that: the seed spectrum plus `2n`
//! exceptional blocks with big-integer multiplicities, so it costs `O(n + N₀)`
//! to build no matter how large `N_n` is.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::count::BigCount;
use crate::graph::{predicted_counts, Graph, GraphAnalysis};
use crate::numeric::{eigenvalues_sym, normalized_laplacian, NumericError, DEFAULT_EIGEN_TOL};

/// Default limit on the number of values [`SpectrumDescriptor::expand`]
/// materializes.
pub const DEFAULT_EXPANSION_CAP: usize = 1_000_000;

/// Seed eigenvalues this close to 0 are snapped to exactly 0.
const ZERO_CLAMP: f64 = 1e-9;
/// The top seed eigenvalue of a bipartite seed must be this close to 2.
const TWO_CLAMP: f64 = 1e-6;
/// Sorted seed eigenvalues closer than this are merged into one entry.
const GROUPING_TOL: f64 = 1e-9;
/// Window for matching a queried value against seed-derived eigenvalues,
/// measured on the unhalved seed scale.
const SEED_MATCH_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("seed spectrum has {eigenvalues} values for a graph with {vertices} vertices")]
    LengthMismatch { vertices: usize, eigenvalues: usize },
    #[error("seed spectrum has {count} eigenvalues within {ZERO_CLAMP:e} of 0; a connected graph has exactly one")]
    ZeroMultiplicity { count: usize },
    #[error("seed is bipartite but its largest eigenvalue is {top}, not 2")]
    MissingTwo { top: f64 },
    #[error("negative multiplicity {value} for eigenvalue 1 at generation {generation}")]
    NegativeMultiplicity { generation: u64, value: BigInt },
    #[error("descriptor multiplicities sum to {total}, expected {expected}")]
    CardinalityMismatch { total: BigCount, expected: BigCount },
    #[error("expanding {size} eigenvalues exceeds the cap of {cap}")]
    ExpansionCapExceeded { size: BigCount, cap: usize },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

/// The two eigenvalue classes that appear fresh at every generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EigenClass {
    ThreeHalves,
    One,
}

impl EigenClass {
    pub fn exact(self) -> BigRational {
        match self {
            EigenClass::ThreeHalves => BigRational::new(3.into(), 2.into()),
            EigenClass::One => BigRational::one(),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            EigenClass::ThreeHalves => 1.5,
            EigenClass::One => 1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EigenBase {
    /// Index into [`SpectrumDescriptor::seed_eigs`].
    Seed(usize),
    Class(EigenClass),
}

/// An eigenvalue written as `base / 2^halvings`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct DyadicEigenvalue {
    pub base: EigenBase,
    pub halvings: u64,
}

/// A distinct seed eigenvalue with its multiplicity; serialized as
/// `[value, multiplicity]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, usize)", into = "(f64, usize)")]
pub struct SeedEigenvalue {
    pub value: f64,
    pub multiplicity: usize,
}

impl From<(f64, usize)> for SeedEigenvalue {
    fn from((value, multiplicity): (f64, usize)) -> Self {
        SeedEigenvalue { value, multiplicity }
    }
}

impl From<SeedEigenvalue> for (f64, usize) {
    fn from(s: SeedEigenvalue) -> Self {
        (s.value, s.multiplicity)
    }
}

/// Block of an exceptional class introduced at `generation`; serialized as
/// `[generation, class, "multiplicity"]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "(u64, EigenClass, BigCount)", into = "(u64, EigenClass, BigCount)")]
pub struct ExceptionalBlock {
    pub generation: u64,
    pub class: EigenClass,
    pub multiplicity: BigCount,
}

impl From<(u64, EigenClass, BigCount)> for ExceptionalBlock {
    fn from((generation, class, multiplicity): (u64, EigenClass, BigCount)) -> Self {
        ExceptionalBlock { generation, class, multiplicity }
    }
}

impl From<ExceptionalBlock> for (u64, EigenClass, BigCount) {
    fn from(b: ExceptionalBlock) -> Self {
        (b.generation, b.class, b.multiplicity)
    }
}

/// Symbolic spectrum of the normalized Laplacian of `τⁿ(G)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDescriptor {
    pub n: u64,
    pub n0: usize,
    pub e0: usize,
    pub bipartite_seed: bool,
    /// The full seed spectrum, ascending. For `n ≥ 1` the single eigenvalue 2
    /// of a bipartite seed is not part of `σ_n`.
    pub seed_eigs: Vec<SeedEigenvalue>,
    /// Blocks ordered by generation, 3/2 before 1.
    pub exceptional: Vec<ExceptionalBlock>,
}

/// `Σ 1/λ` over the nonzero eigenvalues of a descriptor, split into the exact
/// exceptional contribution and the floating seed contribution.
#[derive(Clone, Debug, PartialEq)]
pub struct ReciprocalSum {
    pub exceptional: BigRational,
    pub seed: f64,
}

impl ReciprocalSum {
    pub fn total(&self) -> f64 {
        rational_to_f64(&self.exceptional) + self.seed
    }
}

pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Divides every element by 2.
pub fn halve_multiset(values: &[f64]) -> Vec<f64> {
    values.iter().map(|v| v / 2.0).collect()
}

/// Multiplicity of the eigenvalue 1 introduced at generation `n ≥ 1`, before
/// the bipartite correction: `(3^{n−1} + 1)/2 · e0 − n0`. Negative only when
/// `n = 1`.
pub fn r_n_formula(n0: usize, e0: usize, n: u64) -> BigInt {
    assert!(n >= 1, "r_n is defined for n >= 1");
    let pow = BigInt::from(3u32).pow((n - 1) as u32);
    (pow + 1u32) / 2u32 * BigInt::from(e0) - BigInt::from(n0)
}

#[inline]
fn scale_down(value: f64, halvings: u64) -> f64 {
    value * 0.5f64.powi(halvings.min(i32::MAX as u64) as i32)
}

fn group_seed(values: &[f64]) -> Vec<SeedEigenvalue> {
    let mut groups: Vec<(f64, f64, usize)> = Vec::new();
    for &v in values {
        match groups.last_mut() {
            Some((start, sum, count)) if v - *start <= GROUPING_TOL => {
                *sum += v;
                *count += 1;
            }
            _ => groups.push((v, v, 1)),
        }
    }
    groups
        .into_iter()
        .map(|(_, sum, count)| SeedEigenvalue { value: sum / count as f64, multiplicity: count })
        .collect()
}

/// Unrolls the triangulation spectrum recursion `n` times from a seed.
///
/// `seed_spectrum` is the numeric normalized Laplacian spectrum of the seed,
/// and `seed` its combinatorial summary; the bipartite flag, not a float
/// comparison, decides whether the eigenvalue 2 is dropped. `n = 0` yields
/// the seed spectrum unchanged.
pub fn build_descriptor(
    seed: &GraphAnalysis,
    seed_spectrum: &[f64],
    n: u64,
) -> Result<SpectrumDescriptor, SpectrumError> {
    if seed_spectrum.len() != seed.n_vertices {
        return Err(SpectrumError::LengthMismatch {
            vertices: seed.n_vertices,
            eigenvalues: seed_spectrum.len(),
        });
    }
    let mut sorted = seed_spectrum.to_vec();
    sorted.sort_by(f64::total_cmp);
    let zeros = sorted.iter().filter(|v| v.abs() <= ZERO_CLAMP).count();
    if zeros != 1 {
        return Err(SpectrumError::ZeroMultiplicity { count: zeros });
    }
    sorted[0] = 0.0;
    if seed.bipartite {
        let top = sorted.last_mut().expect("nonempty seed spectrum");
        if (*top - 2.0).abs() > TWO_CLAMP {
            return Err(SpectrumError::MissingTwo { top: *top });
        }
        *top = 2.0;
    }
    let seed_eigs = group_seed(&sorted);

    let (n0, e0) = (seed.n_vertices, seed.n_edges);
    let mut exceptional = Vec::with_capacity(2 * n as usize);
    for g in 1..=n {
        let (prev_vertices, _) = predicted_counts(n0, e0, (g - 1) as usize);
        exceptional.push(ExceptionalBlock {
            generation: g,
            class: EigenClass::ThreeHalves,
            multiplicity: prev_vertices,
        });
        let mut ones = r_n_formula(n0, e0, g);
        if g == 1 {
            ones += BigInt::from(seed.multiplicity_of_two());
        }
        let Some(ones) = ones.to_biguint() else {
            return Err(SpectrumError::NegativeMultiplicity { generation: g, value: ones });
        };
        exceptional.push(ExceptionalBlock {
            generation: g,
            class: EigenClass::One,
            multiplicity: BigCount(ones),
        });
    }

    let d = SpectrumDescriptor { n, n0, e0, bipartite_seed: seed.bipartite, seed_eigs, exceptional };
    let total = d.total_multiplicity();
    let (expected, _) = predicted_counts(n0, e0, n as usize);
    if total != expected {
        return Err(SpectrumError::CardinalityMismatch { total, expected });
    }
    Ok(d)
}

impl SpectrumDescriptor {
    /// Eigensolves the seed and builds the depth-`n` descriptor.
    pub fn from_graph(seed: &Graph, n: u64) -> Result<Self, SpectrumError> {
        let eigs = eigenvalues_sym(&normalized_laplacian(seed), DEFAULT_EIGEN_TOL)?;
        build_descriptor(&seed.analyze(), &eigs.eigenvalues, n)
    }

    fn drops_two(&self) -> bool {
        self.n >= 1 && self.bipartite_seed
    }

    /// Seed entries that belong to `σ_n`, with multiplicities, unhalved.
    pub fn seed_part(&self) -> Vec<SeedEigenvalue> {
        let mut part = self.seed_eigs.clone();
        if self.drops_two() {
            let last = part.last_mut().expect("nonempty seed spectrum");
            last.multiplicity -= 1;
            if last.multiplicity == 0 {
                part.pop();
            }
        }
        part
    }

    /// Every distinct symbolic eigenvalue with its multiplicity.
    pub fn classes(&self) -> Vec<(DyadicEigenvalue, BigCount)> {
        let mut out: Vec<(DyadicEigenvalue, BigCount)> = self
            .seed_part()
            .iter()
            .enumerate()
            .map(|(idx, s)| {
                (DyadicEigenvalue { base: EigenBase::Seed(idx), halvings: self.n }, BigCount::from(s.multiplicity))
            })
            .collect();
        for b in &self.exceptional {
            out.push((
                DyadicEigenvalue { base: EigenBase::Class(b.class), halvings: self.n - b.generation },
                b.multiplicity.clone(),
            ));
        }
        out
    }

    pub fn value_of(&self, e: &DyadicEigenvalue) -> f64 {
        let base = match e.base {
            EigenBase::Seed(idx) => self.seed_eigs[idx].value,
            EigenBase::Class(c) => c.value(),
        };
        scale_down(base, e.halvings)
    }

    /// Exact value for exceptional eigenvalues; `None` for seed-derived ones.
    pub fn exact_value(&self, e: &DyadicEigenvalue) -> Option<BigRational> {
        match e.base {
            EigenBase::Seed(_) => None,
            EigenBase::Class(c) => {
                let denom = BigInt::from(BigUint::one() << e.halvings as usize);
                Some(c.exact() / BigRational::from_integer(denom))
            }
        }
    }

    /// Total multiplicity; equals `N_n`.
    pub fn total_multiplicity(&self) -> BigCount {
        let seed: usize = self.seed_part().iter().map(|s| s.multiplicity).sum();
        let exceptional: BigCount = self.exceptional.iter().map(|b| b.multiplicity.clone()).sum();
        &BigCount::from(seed) + &exceptional
    }

    /// Materializes `σ_n` as an ascending list of floats.
    pub fn expand(&self, cap: usize) -> Result<Vec<f64>, SpectrumError> {
        let size = self.total_multiplicity();
        match size.to_usize() {
            Some(s) if s <= cap => {}
            _ => return Err(SpectrumError::ExpansionCapExceeded { size, cap }),
        }
        let mut values = Vec::with_capacity(size.to_usize().unwrap_or(0));
        for (e, mult) in self.classes() {
            let v = self.value_of(&e);
            let m = mult.to_usize().expect("bounded by the cap");
            values.extend(std::iter::repeat_n(v, m));
        }
        values.sort_by(f64::total_cmp);
        Ok(values)
    }

    /// Sum of reciprocals of all nonzero eigenvalues (Kemeny's constant of
    /// `τⁿ(G)`).
    pub fn reciprocal_sum(&self) -> ReciprocalSum {
        let mut exceptional = BigRational::zero();
        for b in &self.exceptional {
            let scale = BigRational::from_integer(BigInt::from(BigUint::one() << (self.n - b.generation) as usize));
            let inverse = b.class.exact().recip();
            let mult = BigRational::from_integer(BigInt::from(b.multiplicity.0.clone()));
            exceptional += mult * inverse * scale;
        }
        let factor = 2f64.powi(self.n.min(i32::MAX as u64) as i32);
        let seed = self
            .seed_part()
            .iter()
            .filter(|s| s.value != 0.0)
            .map(|s| s.multiplicity as f64 * factor / s.value)
            .sum();
        ReciprocalSum { exceptional, seed }
    }

    /// Multiplicity of `value` in `σ_n`: exact for the exceptional classes,
    /// within a `1e-9` window (on the unhalved seed scale) for seed-derived
    /// eigenvalues.
    pub fn multiplicity_of(&self, value: &BigRational) -> BigCount {
        let mut total = BigCount::zero();
        for b in &self.exceptional {
            let halvings = self.n - b.generation;
            let v = DyadicEigenvalue { base: EigenBase::Class(b.class), halvings };
            if self.exact_value(&v).as_ref() == Some(value) {
                total = total + b.multiplicity.clone();
            }
        }
        let scaled = value * BigRational::from_integer(BigInt::from(BigUint::one() << self.n as usize));
        let scaled = rational_to_f64(&scaled);
        for s in self.seed_part() {
            let hit = if value.is_zero() { s.value == 0.0 } else { s.value != 0.0 && (s.value - scaled).abs() <= SEED_MATCH_TOL };
            if hit {
                total = total + BigCount::from(s.multiplicity);
            }
        }
        total
    }

    /// Largest seed-derived value and smallest exceptional value of `σ_n`.
    pub fn separation(&self) -> (f64, Option<f64>) {
        let seed_max = self.seed_part().last().map(|s| scale_down(s.value, self.n)).unwrap_or(0.0);
        let exceptional_min = self
            .exceptional
            .iter()
            .filter(|b| !b.multiplicity.is_zero())
            .map(|b| scale_down(b.class.value(), self.n - b.generation))
            .min_by(f64::total_cmp);
        (seed_max, exceptional_min)
    }
}
