//! Lyapunov inequalities for nabla fractional differences.
//!
//! Each inequality bounds the fractional difference of a composite function
//! of the state by an expression linear in the fractional difference of the
//! state. [`inequality_sides`] evaluates both sides at one grid point for an
//! arbitrary [`Operator`]; the gap `lhs - rhs` is nonpositive whenever
//! `0 < α < 1` and the parameters are admissible.
//!
//! | kind | left side | right side |
//! |------|-----------|------------|
//! | `EvenPower{m}` | `D x^{2m}` | `2 x^m D x^m` |
//! | `ConjugatePower{m,n}` | `D x^{2m/n}` | `2m/(2m-n) · x D x^{2m/n-1}` |
//! | `PowerChain{m,n}` | `D x^{2m/n}` | `2m/n · x^{2m/n-1} D x` |
//! | `Dyadic{m}` | `D x^{2^m}` | `2^m x^{2^m-1} D x` |
//! | `QuadraticForm{P}` | `D yᵀPy` | `2 yᵀP D y` |

mod suite;

pub use suite::{
    run_property_suite, CheckKind, OperatorFamily, PairSummary, SuiteConfig, SuiteReport, Witness,
};

use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::math::{fabs, pow, powi};
use crate::operators::{DefinitionKind, Operator};
use crate::signal::{GridIndex, SampledSignal};
use crate::{Error, Result};

/// `x^{num/den}` on the real line. Negative bases are accepted only when the
/// reduced denominator is odd (odd-root semantics).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RationalPower {
    num: u64,
    den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl RationalPower {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter("exponent denominator must be positive"));
        }
        let g = gcd(num, den).max(1);
        Ok(Self { num: num / g, den: den / g })
    }

    pub fn integer(n: u64) -> Self {
        Self { num: n, den: 1 }
    }

    pub fn numerator(self) -> u64 {
        self.num
    }

    pub fn denominator(self) -> u64 {
        self.den
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// True when `x ↦ x^{num/den}` is an even function on all of ℝ, i.e.
    /// negative inputs are defined and give the same value as `|x|`.
    pub fn is_even_on_reals(self) -> bool {
        self.den % 2 == 1 && self.num.is_multiple_of(2)
    }

    pub fn apply(self, x: f64) -> Result<f64> {
        if self.den == 1 {
            return Ok(match u32::try_from(self.num) {
                Ok(n) => powi(x, n),
                Err(_) => pow(x, self.num as f64),
            });
        }
        let e = self.value();
        if x >= 0.0 {
            Ok(pow(x, e))
        } else if self.den % 2 == 1 {
            let magnitude = pow(-x, e);
            Ok(if self.num % 2 == 1 { -magnitude } else { magnitude })
        } else {
            Err(Error::PowerDomain { base: x, num: self.num, den: self.den })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InequalityKind {
    EvenPower { m: u32 },
    ConjugatePower { m: u32, n: u32 },
    PowerChain { m: u32, n: u32 },
    Dyadic { m: u32 },
    QuadraticForm { weight: Matrix },
}

impl InequalityKind {
    pub fn validate(&self) -> Result<()> {
        match self {
            InequalityKind::EvenPower { m } if *m >= 1 => Ok(()),
            InequalityKind::ConjugatePower { m, n } if *m >= 1 && *n >= 1 => {
                if 2 * m > *n {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter("conjugate power needs 2m > n"))
                }
            }
            InequalityKind::PowerChain { m, n } if *m >= 1 && *n >= 1 => {
                if 2 * m >= *n {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter("power chain needs 2m >= n"))
                }
            }
            InequalityKind::Dyadic { m } if (1..=16).contains(m) => Ok(()),
            InequalityKind::QuadraticForm { weight } => spd_factor(weight).map(|_| ()),
            _ => Err(Error::InvalidParameter("m and n must be positive")),
        }
    }

    /// Exponent applied to the state on the left side (scalar kinds only).
    pub fn lyapunov_exponent(&self) -> Option<RationalPower> {
        match self {
            InequalityKind::EvenPower { m } => Some(RationalPower::integer(2 * u64::from(*m))),
            InequalityKind::ConjugatePower { m, n } | InequalityKind::PowerChain { m, n } => {
                RationalPower::new(2 * u64::from(*m), u64::from(*n)).ok()
            }
            InequalityKind::Dyadic { m } => Some(RationalPower::integer(1 << m)),
            InequalityKind::QuadraticForm { .. } => None,
        }
    }

    /// Whether the inequality is claimed for signed data. Kinds whose
    /// Lyapunov exponent is not an even function need nonnegative signals.
    pub fn admits_signed_data(&self) -> bool {
        self.lyapunov_exponent().is_none_or(RationalPower::is_even_on_reals)
    }
}

/// Both sides of one inequality at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Sides {
    pub lhs: f64,
    pub rhs: f64,
}

impl Sides {
    pub fn gap(&self) -> f64 {
        self.lhs - self.rhs
    }

    /// `max(1, |lhs|, |rhs|)`: the magnitude a relative tolerance scales by.
    pub fn scale(&self) -> f64 {
        1.0f64.max(fabs(self.lhs)).max(fabs(self.rhs))
    }
}

fn scalar_power(signal: &SampledSignal, power: RationalPower) -> Result<SampledSignal> {
    signal.try_map(|row| power.apply(row[0]))
}

fn ensure_scalar(signal: &SampledSignal) -> Result<()> {
    if signal.dimension() == 1 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: 1, found: signal.dimension() })
    }
}

/// Evaluates both sides of `kind` under `op` at grid point `k`.
pub fn inequality_sides(
    kind: &InequalityKind,
    op: &Operator,
    signal: &SampledSignal,
    k: GridIndex,
) -> Result<Sides> {
    kind.validate()?;
    match kind {
        InequalityKind::EvenPower { m } => {
            ensure_scalar(signal)?;
            let half = RationalPower::integer(u64::from(*m));
            let full = RationalPower::integer(2 * u64::from(*m));
            let lhs = op.apply_scalar(&scalar_power(signal, full)?, k)?;
            let xm = half.apply(signal.scalar_at(k)?)?;
            let d = op.apply_scalar(&scalar_power(signal, half)?, k)?;
            Ok(Sides { lhs, rhs: 2.0 * xm * d })
        }
        InequalityKind::ConjugatePower { m, n } => {
            ensure_scalar(signal)?;
            let (two_m, n) = (2 * u64::from(*m), u64::from(*n));
            let p = RationalPower::new(two_m, n)?;
            let p_minus_one = RationalPower::new(two_m - n, n)?;
            let coeff = two_m as f64 / (two_m - n) as f64;
            let lhs = op.apply_scalar(&scalar_power(signal, p)?, k)?;
            let d = op.apply_scalar(&scalar_power(signal, p_minus_one)?, k)?;
            Ok(Sides { lhs, rhs: coeff * signal.scalar_at(k)? * d })
        }
        InequalityKind::PowerChain { m, n } => {
            ensure_scalar(signal)?;
            let (two_m, n) = (2 * u64::from(*m), u64::from(*n));
            let p = RationalPower::new(two_m, n)?;
            let p_minus_one = RationalPower::new(two_m - n, n)?;
            let coeff = two_m as f64 / n as f64;
            let lhs = op.apply_scalar(&scalar_power(signal, p)?, k)?;
            let factor = p_minus_one.apply(signal.scalar_at(k)?)?;
            let d = op.apply_scalar(signal, k)?;
            Ok(Sides { lhs, rhs: coeff * factor * d })
        }
        InequalityKind::Dyadic { m } => {
            ensure_scalar(signal)?;
            let p = 1u64 << m;
            let lhs = op.apply_scalar(&scalar_power(signal, RationalPower::integer(p))?, k)?;
            let factor = RationalPower::integer(p - 1).apply(signal.scalar_at(k)?)?;
            let d = op.apply_scalar(signal, k)?;
            Ok(Sides { lhs, rhs: p as f64 * factor * d })
        }
        InequalityKind::QuadraticForm { weight } => {
            if signal.dimension() != weight.rows() {
                return Err(Error::DimensionMismatch { expected: weight.rows(), found: signal.dimension() });
            }
            let energy = signal.try_map(|y| weight.bilinear(y, y))?;
            let lhs = op.apply_scalar(&energy, k)?;
            let d = op.apply(signal, k)?;
            let rhs = 2.0 * weight.bilinear(signal.at(k)?, &d)?;
            Ok(Sides { lhs, rhs })
        }
    }
}

/// `lhs - rhs` for one of the standard definitions of order `α ∈ (0, 1)`.
pub fn inequality_gap(
    kind: &InequalityKind,
    definition: DefinitionKind,
    signal: &SampledSignal,
    alpha: f64,
    k: GridIndex,
) -> Result<f64> {
    crate::operators::ensure_unit_order(alpha)?;
    inequality_sides(kind, &Operator::standard(definition, alpha), signal, k).map(|s| s.gap())
}

/// Integer-exponent specializations of the Caputo inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorollaryBound {
    /// `D x^{2m} ≤ 2m/(2m-1) · x D x^{2m-1}`.
    ConjugateOdd { m: u32 },
    /// `D x^{2m} ≤ 2m x^{2m-1} D x`.
    ChainOdd { m: u32 },
    /// `D x² ≤ 2x D x`.
    Square,
}

impl CorollaryBound {
    pub fn as_inequality(self) -> InequalityKind {
        match self {
            CorollaryBound::ConjugateOdd { m } => InequalityKind::ConjugatePower { m, n: 1 },
            CorollaryBound::ChainOdd { m } => InequalityKind::PowerChain { m, n: 1 },
            CorollaryBound::Square => InequalityKind::EvenPower { m: 1 },
        }
    }
}

/// Caputo gap of a corollary bound.
pub fn corollary_gap(bound: CorollaryBound, signal: &SampledSignal, alpha: f64, k: GridIndex) -> Result<f64> {
    inequality_gap(&bound.as_inequality(), DefinitionKind::Caputo, signal, alpha, k)
}

/// `a^p/p + b^q/q - ab` for conjugate exponents; nonnegative, zero iff `a^p = b^q`.
pub fn young_gap(a: f64, b: f64, p: f64, q: f64) -> Result<f64> {
    if !(a >= 0.0 && b >= 0.0) {
        return Err(Error::InvalidParameter("Young's inequality needs nonnegative a and b"));
    }
    if !(p > 1.0 && q > 1.0) || fabs(1.0 / p + 1.0 / q - 1.0) > 1e-12 {
        return Err(Error::NotConjugate { p, q });
    }
    Ok(pow(a, p) / p + pow(b, q) / q - a * b)
}

/// A nonsingular `M` with `MᵀM = P` for symmetric positive definite `P`.
pub fn spd_factor(weight: &Matrix) -> Result<Matrix> {
    if !weight.is_square() || weight.asymmetry() > 1e-12 * weight.max_abs().max(1.0) {
        return Err(Error::NotSpd);
    }
    Ok(weight.cholesky()?.transpose())
}

/// Per-grid-point gaps of one inequality along a signal.
///
/// A point violates the inequality when `gap > tolerance · scale`, where
/// `scale = max(1, |lhs|, |rhs|)`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GapReport {
    pub first_index: GridIndex,
    pub gaps: Vec<f64>,
    pub scales: Vec<f64>,
    /// `-∞` when no point was evaluated.
    pub max_gap: f64,
    pub violations: usize,
    pub tolerance: f64,
}

impl GapReport {
    pub fn from_sides(first_index: GridIndex, sides: &[Sides], tolerance: f64) -> Self {
        let gaps: Vec<f64> = sides.iter().map(Sides::gap).collect();
        let scales: Vec<f64> = sides.iter().map(Sides::scale).collect();
        let max_gap = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let violations = gaps.iter().zip(&scales).filter(|(g, s)| **g > tolerance * **s).count();
        Self { first_index, gaps, scales, max_gap, violations, tolerance }
    }

    pub fn is_clean(&self) -> bool {
        self.violations == 0
    }
}

/// Gaps of `kind` under `op` for every `k` from the signal base to its end.
pub fn gap_report(
    kind: &InequalityKind,
    op: &Operator,
    signal: &SampledSignal,
    tolerance: f64,
) -> Result<GapReport> {
    let sides = (signal.base()..=signal.last_index())
        .map(|k| inequality_sides(kind, op, signal, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(GapReport::from_sides(signal.base(), &sides, tolerance))
}
