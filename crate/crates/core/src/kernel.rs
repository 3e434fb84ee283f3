//! Numerical primitives shared by every operator.
//!
//! Fractional weights come from a multiplicative recurrence rather than
//! Gamma quotients, which overflow long before the horizons used here are
//! reached. The Gamma route ([`rising_factorial_ratio`]) is kept for the
//! closed-form correction terms and as an independent check.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{exp, is_integer};
use crate::signal::{GridIndex, SampledSignal};
use crate::{Error, Result};

/// `Γ(x)`.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `(ln|Γ(x)|, sign Γ(x))`.
pub fn ln_gamma(x: f64) -> (f64, i32) {
    libm::lgamma_r(x)
}

/// Rising factorial `t^(r) = Γ(t + r) / Γ(t)`.
///
/// `t = 0` yields `0`, the limit of `Γ(r)/Γ(0)`.
pub fn rising_factorial_ratio(t: u64, r: f64) -> Result<f64> {
    if t == 0 {
        return Ok(0.0);
    }
    if r == 0.0 {
        return Ok(1.0);
    }
    let shifted = t as f64 + r;
    if shifted <= 0.0 && is_integer(shifted) {
        return Err(Error::GammaPole(shifted));
    }
    let (num, sign) = ln_gamma(shifted);
    let (den, _) = ln_gamma(t as f64);
    Ok(f64::from(sign) * exp(num - den))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum WeightKind {
    /// `(-1)^j binom(α, j)`: coefficients of the order-α GL difference.
    Difference,
    /// `(-1)^j binom(α - 1, j)`: coefficients of the order-(α-1) GL sum that
    /// sits inside the Caputo and Riemann–Liouville differences.
    Sum,
}

/// Precomputed weights `values[j]`, `j = 0..count`, for one order and kind.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTable {
    alpha: f64,
    kind: WeightKind,
    values: Vec<f64>,
}

impl WeightTable {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, j: usize) -> Option<f64> {
        self.values.get(j).copied()
    }

    /// Running sums `Σ_{i ≤ j} values[i]`.
    pub fn partial_sums(&self) -> Vec<f64> {
        self.values
            .iter()
            .scan(0.0, |acc, v| {
                *acc += v;
                Some(*acc)
            })
            .collect()
    }

    /// Extends the table in place to hold at least `count` weights.
    pub fn extend_to(&mut self, count: usize) {
        let order = match self.kind {
            WeightKind::Difference => self.alpha,
            WeightKind::Sum => self.alpha - 1.0,
        };
        while self.values.len() < count {
            let j = self.values.len();
            let prev = self.values[j - 1];
            // `+ 0.0` turns the -0 of integer orders into 0
            self.values.push(prev * ((j - 1) as f64 - order) / j as f64 + 0.0);
        }
    }
}

fn binomial_weights(alpha: f64, kind: WeightKind, count: usize) -> Result<WeightTable> {
    if count == 0 {
        return Err(Error::EmptyWeights);
    }
    let mut table = WeightTable { alpha, kind, values: vec![1.0] };
    table.extend_to(count);
    Ok(table)
}

/// Grünwald–Letnikov difference weights: `c_0 = 1`, `c_j = c_{j-1}(j-1-α)/j`.
pub fn gl_diff_weights(alpha: f64, count: usize) -> Result<WeightTable> {
    binomial_weights(alpha, WeightKind::Difference, count)
}

/// Order-(α-1) sum weights: `w_0 = 1`, `w_j = w_{j-1}(j-α)/j`, equal to
/// `(j+1)^(-α) / Γ(1-α)`.
pub fn gl_sum_weights(alpha: f64, count: usize) -> Result<WeightTable> {
    binomial_weights(alpha, WeightKind::Sum, count)
}

/// `n`-th backward difference `Σ_{j=0}^{n} (-1)^j binom(n, j) x(k-j)`,
/// componentwise.
pub fn backward_difference(signal: &SampledSignal, n: u32, k: GridIndex) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("backward difference order must be positive"));
    }
    let earliest = k - GridIndex::from(n);
    if earliest < signal.first_index() {
        return Err(Error::InsufficientHistory { needed: earliest, first: signal.first_index() });
    }
    let mut out = signal.at(k)?.to_vec();
    let mut coeff = 1.0;
    for j in 1..=n {
        coeff *= -f64::from(n - j + 1) / f64::from(j);
        for (o, x) in out.iter_mut().zip(signal.at(k - GridIndex::from(j))?) {
            *o += coeff * x;
        }
    }
    Ok(out)
}

/// Residuals `LHS - RHS` of the two summation-by-parts formulas on `a..=k`:
///
/// ```text
/// Σ_{j=a}^{k} f(j-1)∇g(j) = f(j)g(j)|_{a-1}^{k} - Σ_{j=a}^{k} ∇f(j)g(j)
/// Σ_{j=a}^{k} f(j)∇g(j)   = f(j)g(j)|_{a-1}^{k} - Σ_{j=a}^{k} ∇f(j)g(j-1)
/// ```
///
/// Both signals must be scalar and cover the same range, including `a - 1`
/// and `k`.
pub fn summation_by_parts_residuals(
    f: &SampledSignal,
    g: &SampledSignal,
    a: GridIndex,
    k: GridIndex,
) -> Result<(f64, f64)> {
    if f.first_index() != g.first_index() || f.last_index() != g.last_index() {
        return Err(Error::LengthMismatch);
    }
    for s in [f, g] {
        if s.dimension() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: s.dimension() });
        }
    }
    if k < a {
        return Err(Error::OutOfRange { k, first: a, last: f.last_index() });
    }
    let x = |s: &SampledSignal, j: GridIndex| s.scalar_at(j);
    let boundary = x(f, k)? * x(g, k)? - x(f, a - 1)? * x(g, a - 1)?;
    let (mut lhs3, mut rhs3_sum, mut lhs4, mut rhs4_sum) = (0.0, 0.0, 0.0, 0.0);
    for j in a..=k {
        let dg = x(g, j)? - x(g, j - 1)?;
        let df = x(f, j)? - x(f, j - 1)?;
        lhs3 += x(f, j - 1)? * dg;
        rhs3_sum += df * x(g, j)?;
        lhs4 += x(f, j)? * dg;
        rhs4_sum += df * x(g, j - 1)?;
    }
    Ok((lhs3 - (boundary - rhs3_sum), lhs4 - (boundary - rhs4_sum)))
}
