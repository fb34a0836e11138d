//! Degree-Kirchhoff index, Kemeny's constant and spanning-tree counts of
//! `τⁿ(G)`, each available as a closed form, as a one-step recursion, and
//! from the symbolic spectrum; plus a harness that checks all of them against
//! first-principles oracles on explicitly built graphs.
//!
//! Only the seed graph is ever eigensolved. The integer parts of the closed
//! forms are evaluated exactly and converted to floating point at the final
//! addition. Spanning-tree counts are kept as `3^a · 2^b · N_st(G)` with exact
//! exponents, since their decimal expansion has on the order of `3ⁿ` digits.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::count::BigCount;
use crate::graph::{predicted_counts, Graph, GraphAnalysis, GraphError, DEFAULT_EXPLICIT_CAP};
use crate::numeric::{
    eigenvalues_sym, kf_star_direct, normalized_laplacian, spanning_trees_chung,
    spanning_trees_matrix_tree, NumericError, DEFAULT_EIGEN_TOL,
};
use crate::spectra::{rational_to_f64, SpectrumDescriptor, SpectrumError, DEFAULT_EXPANSION_CAP};

/// Spanning-tree counts above this many bits are printed in factored form.
pub const DECIMAL_BIT_LIMIT: u64 = 1 << 20;
/// Tolerance of the floating Chung route against the exact count.
pub const CHUNG_REL_TOL: f64 = 1e-6;
/// Tolerance of the `Kf* = 2 E_n K` identity.
pub const IDENTITY_REL_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvariantError {
    #[error("negative exponent in spanning-tree formula at n = {n}: {exponent}")]
    NegativeExponent { n: u64, exponent: BigInt },
    #[error("spanning-tree count has about {bits} bits, above the expansion limit of {limit}")]
    TooLarge { bits: BigUint, limit: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Spectrum(#[from] SpectrumError),
}

fn pow_big(base: u32, exp: u64) -> BigInt {
    BigInt::from(base).pow(exp as u32)
}

fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Exact integer part of the closed form for `n ≥ 1`:
/// `(2·3ⁿ⁻¹ − 4·6ⁿ⁻¹)·N₀E₀ + (5·3²ⁿ⁻¹ − 8·6ⁿ⁻¹ − 3ⁿ⁻¹)·E₀²`.
pub fn kf_star_closed_offset(n0: usize, e0: usize, n: u64) -> BigInt {
    assert!(n >= 1);
    let (n0, e0) = (BigInt::from(n0), BigInt::from(e0));
    let p3 = pow_big(3, n - 1);
    let p6 = pow_big(6, n - 1);
    let linear = (BigInt::from(2) * &p3 - BigInt::from(4) * &p6) * &n0 * &e0;
    let quadratic = (BigInt::from(5) * pow_big(3, 2 * n - 1) - BigInt::from(8) * &p6 - &p3) * &e0 * &e0;
    linear + quadratic
}

/// `Kf*(τⁿ(G))` from `kf0 = Kf*(G)`.
pub fn kf_star_closed(kf0: f64, n0: usize, e0: usize, n: u64) -> f64 {
    if n == 0 {
        return kf0;
    }
    big_to_f64(&pow_big(6, n)) * kf0 + big_to_f64(&kf_star_closed_offset(n0, e0, n))
}

/// One step `Kf*(τⁿ⁻¹(G)) → Kf*(τⁿ(G))`:
/// `6·prev − 2·3ⁿ⁻¹·N₀E₀ + (5·3²ⁿ⁻² + 3ⁿ⁻¹)·E₀²`.
pub fn kf_star_recursive(prev: f64, n0: usize, e0: usize, n: u64) -> f64 {
    assert!(n >= 1);
    let (n0, e0) = (BigInt::from(n0), BigInt::from(e0));
    let p3 = pow_big(3, n - 1);
    let offset = -BigInt::from(2) * &p3 * &n0 * &e0 + (BigInt::from(5) * &p3 * &p3 + &p3) * &e0 * &e0;
    6.0 * prev + big_to_f64(&offset)
}

/// Exact rational part of the Kemeny closed form:
/// `(1 − 2ⁿ)/3 · N₀ + (5·3ⁿ − 2ⁿ⁺² − 1)/6 · E₀`.
pub fn kemeny_closed_offset(n0: usize, e0: usize, n: u64) -> BigRational {
    let p2 = pow_big(2, n);
    let a = BigRational::new((BigInt::one() - &p2) * BigInt::from(n0), BigInt::from(3));
    let b = BigRational::new(
        (BigInt::from(5) * pow_big(3, n) - BigInt::from(4) * &p2 - BigInt::one()) * BigInt::from(e0),
        BigInt::from(6),
    );
    a + b
}

/// `K(τⁿ(G))` from `k0 = K(G)`.
pub fn kemeny_closed(k0: f64, n0: usize, e0: usize, n: u64) -> f64 {
    if n == 0 {
        return k0;
    }
    big_to_f64(&pow_big(2, n)) * k0 + rational_to_f64(&kemeny_closed_offset(n0, e0, n))
}

fn kemeny_step(prev: f64, n0: usize, e0: usize, growth: BigInt) -> f64 {
    let offset = BigRational::new(-BigInt::from(n0), BigInt::from(3))
        + BigRational::new((growth + BigInt::one()) * BigInt::from(e0), BigInt::from(6));
    2.0 * prev + rational_to_f64(&offset)
}

/// One step `K(τⁿ⁻¹(G)) → K(τⁿ(G))`: `2·prev − N₀/3 + (5·3ⁿ⁻¹ + 1)/6 · E₀`.
///
/// This is the recursion implied by the Kirchhoff closed form together with
/// `Kf* = 2 E_n K`.
pub fn kemeny_recursive(prev: f64, n0: usize, e0: usize, n: u64) -> f64 {
    assert!(n >= 1);
    kemeny_step(prev, n0, e0, BigInt::from(5) * pow_big(3, n - 1))
}

/// The same step with the growth term `5ⁿ⁻¹` as it is commonly printed.
/// Iterating it does not reproduce [`kemeny_closed`]; kept so the discrepancy
/// stays visible in tests.
pub fn kemeny_recursive_printed(prev: f64, n0: usize, e0: usize, n: u64) -> f64 {
    assert!(n >= 1);
    kemeny_step(prev, n0, e0, pow_big(5, n - 1))
}

/// `κ = Σ_{i<n} N_i`, by summation; checked against the closed form
/// `(3ⁿ − 1)/4 · E₀ + n·(N₀ − E₀/2)` in exact rationals.
pub fn kappa(n0: usize, e0: usize, n: u64) -> BigCount {
    let total: BigCount = (0..n).map(|i| predicted_counts(n0, e0, i as usize).0).sum();
    let closed = BigRational::new((pow_big(3, n) - BigInt::one()) * BigInt::from(e0), BigInt::from(4))
        + BigRational::from_integer(BigInt::from(n))
            * BigRational::new(BigInt::from(2 * n0) - BigInt::from(e0), BigInt::from(2));
    assert_eq!(
        closed,
        BigRational::from_integer(BigInt::from(total.0.clone())),
        "kappa summation disagrees with its closed form"
    );
    total
}

/// `3^pow3 · 2^pow2 · cofactor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredCount {
    pub pow3: BigUint,
    pub pow2: BigUint,
    pub cofactor: BigCount,
}

impl FactoredCount {
    pub fn from_count(c: BigCount) -> Self {
        FactoredCount { pow3: BigUint::zero(), pow2: BigUint::zero(), cofactor: c }
    }

    /// Upper bound on the bit length.
    pub fn bits_estimate(&self) -> BigUint {
        // log2(3) < 1.585 = 317/200
        (&self.pow3 * 317u32) / 200u32 + 1u32 + &self.pow2 + self.cofactor.0.bits()
    }

    pub fn log10(&self) -> f64 {
        let l3 = self.pow3.to_f64().unwrap_or(f64::INFINITY) * 3f64.log10();
        let l2 = self.pow2.to_f64().unwrap_or(f64::INFINITY) * 2f64.log10();
        let lc = self.cofactor.to_f64().log10();
        l3 + l2 + lc
    }

    /// The exact integer, refused above `bit_limit` bits.
    pub fn expand(&self, bit_limit: u64) -> Result<BigCount, InvariantError> {
        let bits = self.bits_estimate();
        if bits > BigUint::from(bit_limit) {
            return Err(InvariantError::TooLarge { bits, limit: bit_limit });
        }
        let p3 = self.pow3.to_u32().expect("bounded by bit limit");
        let p2 = self.pow2.to_u64().expect("bounded by bit limit");
        let v = BigUint::from(3u32).pow(p3) * &self.cofactor.0;
        Ok(BigCount(v << p2 as usize))
    }

    fn mul(&self, other: &FactoredCount) -> FactoredCount {
        FactoredCount {
            pow3: &self.pow3 + &other.pow3,
            pow2: &self.pow2 + &other.pow2,
            cofactor: &self.cofactor * &other.cofactor,
        }
    }
}

/// Decimal when at most [`DECIMAL_BIT_LIMIT`] bits, else `3^a * 2^b * c`.
impl fmt::Display for FactoredCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expand(DECIMAL_BIT_LIMIT) {
            Ok(v) => write!(f, "{v}"),
            Err(_) => write!(f, "3^{} * 2^{} * {}", self.pow3, self.pow2, self.cofactor),
        }
    }
}

impl Serialize for FactoredCount {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

fn nonnegative(n: u64, exponent: BigInt) -> Result<BigUint, InvariantError> {
    exponent.to_biguint().ok_or(InvariantError::NegativeExponent { n, exponent })
}

/// Spanning trees of `τⁿ(G)` from `nst0 = N_st(G)`:
/// `3^{κ−n} · 2^{κ − n(2N₀ − E₀ − 1)} · nst0`.
pub fn spanning_trees_closed(
    nst0: &BigCount,
    n0: usize,
    e0: usize,
    n: u64,
) -> Result<FactoredCount, InvariantError> {
    if n == 0 {
        return Ok(FactoredCount::from_count(nst0.clone()));
    }
    let k = BigInt::from(kappa(n0, e0, n).0);
    let nb = BigInt::from(n);
    let pow3 = nonnegative(n, &k - &nb)?;
    let pow2 = nonnegative(n, &k - &nb * (BigInt::from(2 * n0) - BigInt::from(e0) - 1))?;
    Ok(FactoredCount { pow3, pow2, cofactor: nst0.clone() })
}

/// Ratio `N_st(τⁿ) / N_st(τⁿ⁻¹) = 3^{N_{n−1} − 1} · 2^{N_{n−1} − 2N₀ + E₀ + 1}`.
pub fn spanning_tree_step(n0: usize, e0: usize, n: u64) -> Result<FactoredCount, InvariantError> {
    assert!(n >= 1);
    let prev = BigInt::from(predicted_counts(n0, e0, (n - 1) as usize).0 .0);
    let pow3 = nonnegative(n, &prev - 1)?;
    let pow2 = nonnegative(n, prev - BigInt::from(2 * n0) + BigInt::from(e0) + 1)?;
    Ok(FactoredCount { pow3, pow2, cofactor: BigCount::one() })
}

pub fn spanning_trees_recursive(
    prev: &FactoredCount,
    n0: usize,
    e0: usize,
    n: u64,
) -> Result<FactoredCount, InvariantError> {
    Ok(prev.mul(&spanning_tree_step(n0, e0, n)?))
}

/// One route's value for an invariant. Exact values serialize as decimal (or
/// factored) strings.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum RouteValue {
    Real(f64),
    Exact(String),
}

/// Invariants of `τⁿ(G)` at one depth, with every route that produced them.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub n: u64,
    #[serde(rename = "Nn")]
    pub num_vertices: BigCount,
    #[serde(rename = "En")]
    pub num_edges: BigCount,
    pub kf_star: f64,
    pub kemeny: f64,
    pub spanning_trees: FactoredCount,
    pub kappa: BigCount,
    /// invariant name → route name → value
    pub routes: BTreeMap<String, BTreeMap<String, RouteValue>>,
}

impl InvariantReport {
    /// Relative deviation from `Kf* = 2 E_n K`.
    pub fn identity_deviation(&self) -> f64 {
        let rhs = 2.0 * self.num_edges.to_f64() * self.kemeny;
        (self.kf_star - rhs).abs() / self.kf_star.abs().max(f64::MIN_POSITIVE)
    }

    fn route(&mut self, invariant: &str, route: &str, value: RouteValue) {
        self.routes.entry(invariant.to_string()).or_default().insert(route.to_string(), value);
    }
}

/// Seed quantities every closed form starts from, all computed from oracles.
#[derive(Clone, Debug)]
pub struct SeedInvariants {
    pub analysis: GraphAnalysis,
    pub spectrum: Vec<f64>,
    /// `Σ 1/λ` over the nonzero seed eigenvalues.
    pub kemeny: f64,
    /// `2 E₀ · kemeny`.
    pub kf_star: f64,
    pub spanning_trees: BigCount,
}

impl SeedInvariants {
    pub fn from_graph(g: &Graph) -> Result<Self, InvariantError> {
        let eigs = eigenvalues_sym(&normalized_laplacian(g), DEFAULT_EIGEN_TOL)?;
        let analysis = g.analyze();
        let d0 = crate::spectra::build_descriptor(&analysis, &eigs.eigenvalues, 0)?;
        let kemeny = d0.reciprocal_sum().total();
        Ok(SeedInvariants {
            kf_star: 2.0 * g.num_edges() as f64 * kemeny,
            kemeny,
            spanning_trees: spanning_trees_matrix_tree(g),
            spectrum: eigs.eigenvalues,
            analysis,
        })
    }

    pub fn descriptor(&self, n: u64) -> Result<SpectrumDescriptor, InvariantError> {
        Ok(crate::spectra::build_descriptor(&self.analysis, &self.spectrum, n)?)
    }
}

/// Reports for depths `0..=max_n` using only symbolic routes: closed form,
/// iterated recursion and the spectrum sum over the descriptor.
pub fn symbolic_reports(seed: &SeedInvariants, max_n: u64) -> Result<Vec<InvariantReport>, InvariantError> {
    let (n0, e0) = (seed.analysis.n_vertices, seed.analysis.n_edges);
    let mut kf_rec = seed.kf_star;
    let mut kem_rec = seed.kemeny;
    let mut nst_rec = FactoredCount::from_count(seed.spanning_trees.clone());
    let mut reports = Vec::with_capacity(max_n as usize + 1);
    for n in 0..=max_n {
        if n >= 1 {
            kf_rec = kf_star_recursive(kf_rec, n0, e0, n);
            kem_rec = kemeny_recursive(kem_rec, n0, e0, n);
            nst_rec = spanning_trees_recursive(&nst_rec, n0, e0, n)?;
        }
        let (num_vertices, num_edges) = predicted_counts(n0, e0, n as usize);
        let kf_star = kf_star_closed(seed.kf_star, n0, e0, n);
        let kemeny = kemeny_closed(seed.kemeny, n0, e0, n);
        let spanning_trees = spanning_trees_closed(&seed.spanning_trees, n0, e0, n)?;
        let spectral = seed.descriptor(n)?.reciprocal_sum().total();

        let mut report = InvariantReport {
            n,
            kf_star,
            kemeny,
            kappa: kappa(n0, e0, n),
            routes: BTreeMap::new(),
            spanning_trees: spanning_trees.clone(),
            num_edges: num_edges.clone(),
            num_vertices,
        };
        let two_e = 2.0 * num_edges.to_f64();
        report.route("kf_star", "closed_form", RouteValue::Real(kf_star));
        report.route("kf_star", "recursion", RouteValue::Real(kf_rec));
        report.route("kf_star", "spectrum_sum", RouteValue::Real(two_e * spectral));
        report.route("kemeny", "closed_form", RouteValue::Real(kemeny));
        report.route("kemeny", "recursion", RouteValue::Real(kem_rec));
        report.route("kemeny", "spectrum_sum", RouteValue::Real(spectral));
        report.route("spanning_trees", "closed_form", RouteValue::Exact(spanning_trees.to_string()));
        report.route("spanning_trees", "recursion", RouteValue::Exact(nst_rec.to_string()));
        reports.push(report);
    }
    Ok(reports)
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Relative tolerance for floating routes and absolute tolerance for the
    /// elementwise spectrum comparison.
    pub tol: f64,
    pub explicit_cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { tol: 1e-8, explicit_cap: DEFAULT_EXPLICIT_CAP }
    }
}

/// One row of the agreement table.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub n: u64,
    /// `kf_star`, `kemeny`, `spanning_trees`, `spectrum` or `identity`.
    pub quantity: String,
    /// Largest relative discrepancy against the closed form; absolute for
    /// `spectrum`; 0 or 1 for exact comparisons.
    pub discrepancy: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub passed: bool,
    pub checks: Vec<Check>,
    pub reports: Vec<InvariantReport>,
}

fn relative(a: f64, reference: f64) -> f64 {
    (a - reference).abs() / reference.abs().max(f64::MIN_POSITIVE)
}

fn real_routes(report: &InvariantReport, invariant: &str) -> Vec<f64> {
    report.routes[invariant]
        .values()
        .filter_map(|v| match v {
            RouteValue::Real(x) => Some(*x),
            RouteValue::Exact(_) => None,
        })
        .collect()
}

/// Computes every invariant of `τⁿ(g)` for `n = 0..=max_n` by all routes,
/// including the resistance-distance and matrix-tree oracles and a fresh
/// eigensolve of each materialized graph, and checks that they agree.
///
/// Fails up front with [`GraphError::CapExceeded`] if `τ^max_n(g)` is too
/// large to build.
pub fn verify_all(g: &Graph, max_n: u64, options: VerifyOptions) -> Result<Verification, InvariantError> {
    let (n0, e0) = (g.num_vertices(), g.num_edges());
    let (largest, _) = predicted_counts(n0, e0, max_n as usize);
    if largest.0 > BigUint::from(options.explicit_cap) {
        return Err(GraphError::CapExceeded { predicted: largest, cap: options.explicit_cap }.into());
    }
    let seed = SeedInvariants::from_graph(g)?;
    let mut reports = symbolic_reports(&seed, max_n)?;
    let mut checks = Vec::new();
    let mut current = g.clone();
    for report in reports.iter_mut() {
        let n = report.n;
        if n > 0 {
            current = current.triangulate_with_cap(options.explicit_cap)?;
        }
        let eigs = eigenvalues_sym(&normalized_laplacian(&current), DEFAULT_EIGEN_TOL)?;
        let two_e = 2.0 * current.num_edges() as f64;
        let kemeny_numeric: f64 = eigs.eigenvalues.iter().skip(1).map(|l| 1.0 / l).sum();
        report.route("kemeny", "eigensolve", RouteValue::Real(kemeny_numeric));
        report.route("kf_star", "eigensolve", RouteValue::Real(two_e * kemeny_numeric));
        report.route("kf_star", "direct_oracle", RouteValue::Real(kf_star_direct(&current)?));

        let matrix_tree = spanning_trees_matrix_tree(&current);
        let chung = spanning_trees_chung(&eigs, &current.degrees())?;
        report.route("spanning_trees", "matrix_tree", RouteValue::Exact(matrix_tree.to_string()));
        report.route("spanning_trees", "chung", RouteValue::Real(chung));

        for (quantity, reference) in [("kf_star", report.kf_star), ("kemeny", report.kemeny)] {
            let discrepancy = real_routes(report, quantity)
                .into_iter()
                .map(|v| relative(v, reference))
                .fold(0.0, f64::max);
            checks.push(Check {
                n,
                quantity: quantity.into(),
                discrepancy,
                tolerance: options.tol,
                passed: discrepancy <= options.tol,
            });
        }

        let exact_agree = report.routes["spanning_trees"]
            .values()
            .filter_map(|v| match v {
                RouteValue::Exact(s) => Some(s.as_str()),
                RouteValue::Real(_) => None,
            })
            .all(|s| s == matrix_tree.to_string());
        let chung_error = relative(chung, matrix_tree.to_f64());
        checks.push(Check {
            n,
            quantity: "spanning_trees".into(),
            discrepancy: if exact_agree { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed: exact_agree,
        });
        checks.push(Check {
            n,
            quantity: "spanning_trees_chung".into(),
            discrepancy: chung_error,
            tolerance: CHUNG_REL_TOL,
            passed: chung_error <= CHUNG_REL_TOL,
        });

        let analytic = seed.descriptor(n)?.expand(DEFAULT_EXPANSION_CAP)?;
        let spectrum_gap = analytic
            .iter()
            .zip(&eigs.eigenvalues)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let same_len = analytic.len() == eigs.eigenvalues.len();
        checks.push(Check {
            n,
            quantity: "spectrum".into(),
            discrepancy: if same_len { spectrum_gap } else { f64::INFINITY },
            tolerance: options.tol,
            passed: same_len && spectrum_gap <= options.tol,
        });

        let identity = report.identity_deviation();
        checks.push(Check {
            n,
            quantity: "identity".into(),
            discrepancy: identity,
            tolerance: IDENTITY_REL_TOL,
            passed: identity <= IDENTITY_REL_TOL,
        });
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(Verification { passed, checks, reports })
}
