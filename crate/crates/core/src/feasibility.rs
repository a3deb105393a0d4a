//! Arithmetic of extremal k-packings: the radius bound, the divisibility
//! criterion for existence, the lines `L_N` of parameters sharing a cell
//! size, primitive pairs, dual extremality and the uniqueness predicate.
//!
//! Everything here is a pure function of small integers. Integer arithmetic
//! is exact and checked for overflow; real values are double precision.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Cell sizes `N` for which `Δ⁺(2,3,N)` is arithmetic. Only these admit
/// surfaces carrying more than one extremal packing.
pub const ARITHMETIC_CELL_SIZES: [u64; 11] = [7, 8, 9, 10, 11, 12, 14, 16, 18, 24, 30];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FeasibilityError {
    #[error("genus must be at least 3 (got {0})")]
    GenusTooSmall(i64),
    #[error("number of discs must be at least 1 (got {0})")]
    KTooSmall(i64),
    #[error("cell size N must be at least 7 (got {0})")]
    CellSizeTooSmall(i64),
    #[error("j_max must be at least 1")]
    EmptyLine,
    #[error("infeasible: {k} does not divide 6(g-2) = {six_g_minus_2}")]
    Infeasible { k: u64, g: u64, six_g_minus_2: u64 },
    #[error("integer overflow evaluating parameters")]
    Overflow,
}

/// Number of discs `k` and non-orientable genus `g` of a packing problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PackingSpec {
    k: u64,
    g: u64,
}

impl PackingSpec {
    pub fn new(k: i64, g: i64) -> Result<Self, FeasibilityError> {
        if k < 1 {
            return Err(FeasibilityError::KTooSmall(k));
        }
        if g < 3 {
            return Err(FeasibilityError::GenusTooSmall(g));
        }
        Ok(PackingSpec { k: k as u64, g: g as u64 })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn g(&self) -> u64 {
        self.g
    }

    /// `6(g-2)`, the quantity `k` must divide.
    pub fn six_g_minus_2(&self) -> Result<u64, FeasibilityError> {
        (self.g - 2).checked_mul(6).ok_or(FeasibilityError::Overflow)
    }

    /// `6g + 6k - 12 = kN`.
    pub fn total_sides(&self) -> Result<u64, FeasibilityError> {
        self.six_g_minus_2()?
            .checked_add(self.k.checked_mul(6).ok_or(FeasibilityError::Overflow)?)
            .ok_or(FeasibilityError::Overflow)
    }
}

impl fmt::Display for PackingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(k={}, g={})", self.k, self.g)
    }
}

/// Cells per polygon, possibly non-integral when `k ∤ 6(g-2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellSize {
    /// `6g + 6k - 12`
    pub numerator: u64,
    /// `k`
    pub denominator: u64,
}

impl CellSize {
    pub fn is_integral(&self) -> bool {
        self.numerator % self.denominator == 0
    }

    pub fn as_integer(&self) -> Option<u64> {
        self.is_integral().then(|| self.numerator / self.denominator)
    }

    pub fn as_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

/// Extremal radius data for a packing problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalParams {
    pub spec: PackingSpec,
    pub cell_size: CellSize,
    /// Integral `N` when `k | 6(g-2)`.
    pub n: Option<u64>,
    /// `2kN = 12g + 12k - 24`, the index in `Δ±(2,3,N)`; only when `N` is integral.
    pub index: Option<u64>,
    pub cosh_r: f64,
    pub r: f64,
}

/// Upper bound on the radius of `k` disjoint discs in a non-orientable
/// surface of genus `g`: `cosh R = 1 / (2 sin(kπ / (6g+6k-12)))`.
pub fn packing_radius_bound(spec: PackingSpec) -> Result<ExtremalParams, FeasibilityError> {
    let total = spec.total_sides()?;
    let cell_size = CellSize { numerator: total, denominator: spec.k };
    let angle = spec.k as f64 * PI / total as f64;
    let cosh_r = 1.0 / (2.0 * angle.sin());
    let n = cell_size.as_integer();
    let index = match n {
        Some(n) => Some(
            spec.k
                .checked_mul(n)
                .and_then(|x| x.checked_mul(2))
                .ok_or(FeasibilityError::Overflow)?,
        ),
        None => None,
    };
    Ok(ExtremalParams { spec, cell_size, n, index, cosh_r, r: cosh_r.acosh() })
}

/// `k | 6(g-2)`: extremal k-packings exist in genus `g` exactly then.
pub fn is_feasible(spec: PackingSpec) -> Result<bool, FeasibilityError> {
    Ok(spec.six_g_minus_2()? % spec.k == 0)
}

fn require_feasible(spec: PackingSpec) -> Result<u64, FeasibilityError> {
    let s = spec.six_g_minus_2()?;
    if s % spec.k != 0 {
        return Err(FeasibilityError::Infeasible { k: spec.k, g: spec.g, six_g_minus_2: s });
    }
    Ok(6 + s / spec.k)
}

/// Cell size `N = 6 + 6(g-2)/k` of a feasible spec.
pub fn cell_size(spec: PackingSpec) -> Result<u64, FeasibilityError> {
    require_feasible(spec)
}

/// The values of `k` that are feasible in every genus.
pub fn universal_k() -> BTreeSet<u64> {
    [1, 2, 3, 6].into_iter().collect()
}

/// `g ≡ residue (mod modulus)` guarantees feasibility of a given `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceClass {
    pub modulus: u64,
    pub residue: u64,
}

impl CongruenceClass {
    pub fn contains(&self, g: u64) -> bool {
        g % self.modulus == self.residue % self.modulus
    }
}

pub fn feasible_genus_progression(k: u64) -> Result<CongruenceClass, FeasibilityError> {
    if k == 0 {
        return Err(FeasibilityError::KTooSmall(0));
    }
    Ok(CongruenceClass { modulus: k / gcd(k, 6), residue: 2 })
}

/// Exact number of `k ≥ 1` dividing `6(g-2)`, i.e. its divisor count.
pub fn count_feasible_k(g: u64) -> Result<u64, FeasibilityError> {
    if g < 3 {
        return Err(FeasibilityError::GenusTooSmall(g as i64));
    }
    let mut m = (g - 2).checked_mul(6).ok_or(FeasibilityError::Overflow)?;
    let mut count = 1;
    let mut p = 2;
    while p * p <= m {
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        count *= e + 1;
        p += 1;
    }
    if m > 1 {
        count *= 2;
    }
    Ok(count)
}

/// Parameters `(k, g)` sharing cell size `N`, indexed by `j ≥ 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineLN {
    pub n: u64,
    pub entries: Vec<(u64, u64)>,
}

/// The `j`-th entry of `L_N`.
pub fn line_entry(n: u64, j: u64) -> Result<(u64, u64), FeasibilityError> {
    if n < 7 {
        return Err(FeasibilityError::CellSizeTooSmall(n as i64));
    }
    let over = || FeasibilityError::Overflow;
    let (k_step, g_num) = match n % 6 {
        0 => (1, n - 6),
        1 | 5 => (6, 6 * (n - 6)),
        2 | 4 => (3, 3 * (n - 6)),
        _ => (2, 2 * (n - 6)),
    };
    // g = 2 + k(N-6)/6 with k = k_step * j
    let k = k_step * j;
    let g = j.checked_mul(g_num).ok_or_else(over)? / 6 + 2;
    Ok((k, g))
}

pub fn line_ln(n: u64, j_max: u64) -> Result<LineLN, FeasibilityError> {
    if n < 7 {
        return Err(FeasibilityError::CellSizeTooSmall(n as i64));
    }
    if j_max == 0 {
        return Err(FeasibilityError::EmptyLine);
    }
    let entries = (1..=j_max).map(|j| line_entry(n, j)).collect::<Result<_, _>>()?;
    Ok(LineLN { n, entries })
}

/// `(k_N, g_N)`: the entry `j = 1` of `L_N`.
pub fn primitive_pair(n: u64) -> Result<(u64, u64), FeasibilityError> {
    line_entry(n, 1)
}

/// Position `j` of a feasible spec on its line `L_N`, together with `N`.
pub fn line_position(spec: PackingSpec) -> Result<(u64, u64), FeasibilityError> {
    let n = require_feasible(spec)?;
    let (k_n, _) = primitive_pair(n)?;
    Ok((n, spec.k / k_n))
}

/// Whether `(k, g)` is the primitive pair of its line.
///
/// This follows the `j = 1` definition; the alternative characterization
/// by "k = 2 and g even" disagrees with `(k_9, g_9) = (2, 3)`.
pub fn is_primitive(spec: PackingSpec) -> Result<bool, FeasibilityError> {
    let n = require_feasible(spec)?;
    Ok(primitive_pair(n)? == (spec.k, spec.g))
}

/// Unordered pairs `{k1, k2}` such that some genus-`g` surface can be
/// extremal for both.
pub fn dual_extremal_pairs(g: u64) -> BTreeSet<(u64, u64)> {
    let mut out = BTreeSet::new();
    if g >= 4 && g % 2 == 0 {
        out.insert(((g - 2) / 2, 2 * g - 4));
    }
    if g >= 3 && g % 4 == 2 {
        out.insert(((3 * g - 6) / 4, 6 * g - 12));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Uniqueness {
    Unique,
    PossiblyMultiple,
}

pub fn uniqueness_class(spec: PackingSpec) -> Result<Uniqueness, FeasibilityError> {
    let n = require_feasible(spec)?;
    Ok(if ARITHMETIC_CELL_SIZES.contains(&n) {
        Uniqueness::PossiblyMultiple
    } else {
        Uniqueness::Unique
    })
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
