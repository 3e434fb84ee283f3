//! Nabla fractional differences on sampled signals.
//!
//! All operators act componentwise on vector signals. Sums whose upper limit
//! falls below the lower limit are zero.
//!
//! The Caputo and Riemann–Liouville differences are restricted to
//! `0 < α < 1` (one integer difference). Higher orders can be assembled from
//! [`crate::kernel::backward_difference`] and a GL sum but are not exposed.

use alloc::vec;
use alloc::vec::Vec;

use crate::kernel::{gamma, gl_diff_weights, gl_sum_weights, rising_factorial_ratio};
use crate::signal::{GridIndex, SampledSignal};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum DefinitionKind {
    #[cfg_attr(feature = "serde", serde(rename = "GL"))]
    GrunwaldLetnikov,
    #[cfg_attr(feature = "serde", serde(rename = "RL"))]
    RiemannLiouville,
    Caputo,
}

impl DefinitionKind {
    pub const ALL: [DefinitionKind; 3] =
        [DefinitionKind::GrunwaldLetnikov, DefinitionKind::RiemannLiouville, DefinitionKind::Caputo];

    pub fn label(self) -> &'static str {
        match self {
            DefinitionKind::GrunwaldLetnikov => "GL",
            DefinitionKind::RiemannLiouville => "RL",
            DefinitionKind::Caputo => "Caputo",
        }
    }
}

/// Time-varying order `α(k)` for `k = base, base + 1, …`.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableOrder {
    base: GridIndex,
    orders: Vec<f64>,
}

impl VariableOrder {
    pub fn new(base: GridIndex, orders: Vec<f64>) -> Result<Self> {
        if orders.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { base, orders })
    }

    pub fn constant(base: GridIndex, alpha: f64, len: usize) -> Result<Self> {
        Self::new(base, vec![alpha; len])
    }

    pub fn base(&self) -> GridIndex {
        self.base
    }

    pub fn orders(&self) -> &[f64] {
        &self.orders
    }

    pub fn at(&self, k: GridIndex) -> Result<f64> {
        let last = self.base + self.orders.len() as GridIndex - 1;
        if k < self.base || k > last {
            return Err(Error::OutOfRange { k, first: self.base, last });
        }
        Ok(self.orders[(k - self.base) as usize])
    }
}

pub(crate) fn ensure_unit_order(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::OrderOutOfRange(alpha))
    }
}

fn ensure_evaluable(signal: &SampledSignal, k: GridIndex, first: GridIndex) -> Result<()> {
    if k < first || k > signal.last_index() {
        return Err(Error::OutOfRange { k, first, last: signal.last_index() });
    }
    Ok(())
}

fn ensure_history(signal: &SampledSignal, needed: GridIndex) -> Result<()> {
    if needed < signal.first_index() {
        return Err(Error::InsufficientHistory { needed, first: signal.first_index() });
    }
    Ok(())
}

/// `Σ_{j=0}^{lags} w_j x(k-j)`.
fn weighted_lags(signal: &SampledSignal, k: GridIndex, weights: &[f64], lags: usize) -> Result<Vec<f64>> {
    let mut out = vec![0.0; signal.dimension()];
    for (j, w) in weights.iter().take(lags + 1).enumerate() {
        for (o, x) in out.iter_mut().zip(signal.at(k - j as GridIndex)?) {
            *o += w * x;
        }
    }
    Ok(out)
}

/// `Σ_{j=0}^{lags} w_j ∇x(k-j)`.
fn weighted_difference_lags(
    signal: &SampledSignal,
    k: GridIndex,
    weights: &[f64],
    lags: usize,
) -> Result<Vec<f64>> {
    let mut out = vec![0.0; signal.dimension()];
    for (j, w) in weights.iter().take(lags + 1).enumerate() {
        let t = k - j as GridIndex;
        for ((o, x), y) in out.iter_mut().zip(signal.at(t)?).zip(signal.at(t - 1)?) {
            *o += w * (x - y);
        }
    }
    Ok(out)
}

fn lag_count(k: GridIndex, a: GridIndex) -> usize {
    (k - a) as usize
}

/// Grünwald–Letnikov difference `Σ_{j=0}^{k-a} (-1)^j binom(α, j) x(k-j)`.
/// Any real order is accepted; negative orders give the GL sum.
pub fn gl_difference(signal: &SampledSignal, alpha: f64, k: GridIndex) -> Result<Vec<f64>> {
    let a = signal.base();
    ensure_evaluable(signal, k, a)?;
    let lags = lag_count(k, a);
    let w = gl_diff_weights(alpha, lags + 1)?;
    weighted_lags(signal, k, w.values(), lags)
}

/// Caputo difference: the order-(α-1) GL sum of `∇x`,
/// `Σ_{j=a}^{k} w_{k-j} ∇x(j)`.
pub fn caputo_difference(signal: &SampledSignal, alpha: f64, k: GridIndex) -> Result<Vec<f64>> {
    ensure_unit_order(alpha)?;
    let a = signal.base();
    ensure_evaluable(signal, k, a)?;
    ensure_history(signal, a - 1)?;
    let lags = lag_count(k, a);
    let w = gl_sum_weights(alpha, lags + 1)?;
    weighted_difference_lags(signal, k, w.values(), lags)
}

/// Riemann–Liouville difference `s(k) - s(k-1)` with `s` the order-(α-1)
/// GL sum based at `a` and `s(a-1) = 0`.
///
/// At `k = a` this evaluates to `x(a)`.
pub fn rl_difference(signal: &SampledSignal, alpha: f64, k: GridIndex) -> Result<Vec<f64>> {
    ensure_unit_order(alpha)?;
    let a = signal.base();
    ensure_evaluable(signal, k, a)?;
    let lags = lag_count(k, a);
    let w = gl_sum_weights(alpha, lags + 1)?;
    let mut out = weighted_lags(signal, k, w.values(), lags)?;
    if k > a {
        let prev = weighted_lags(signal, k - 1, w.values(), lags - 1)?;
        out.iter_mut().zip(prev).for_each(|(o, p)| *o -= p);
    }
    Ok(out)
}

/// Riemann–Liouville difference through the Caputo difference plus the
/// initial-value correction `(k-a+1)^(-α) / Γ(1-α) · x(a-1)`, valid for
/// `k ≥ a + 1`. The correction is evaluated through Gamma functions.
pub fn rl_from_caputo(signal: &SampledSignal, alpha: f64, k: GridIndex) -> Result<Vec<f64>> {
    ensure_unit_order(alpha)?;
    let a = signal.base();
    ensure_evaluable(signal, k, a + 1)?;
    let mut out = caputo_difference(signal, alpha, k)?;
    let weight = rl_correction_weight(alpha, k - a)?;
    for (o, x) in out.iter_mut().zip(signal.at(a - 1)?) {
        *o += weight * x;
    }
    Ok(out)
}

/// `(m+1)^(-α) / Γ(1-α)` for `m = k - a`.
pub fn rl_correction_weight(alpha: f64, offset: GridIndex) -> Result<f64> {
    if offset < 0 {
        return Err(Error::InvalidParameter("correction offset must be nonnegative"));
    }
    Ok(rising_factorial_ratio(offset as u64 + 1, -alpha)? / gamma(1.0 - alpha))
}

/// GL difference with the sum stopped one lag short,
/// `Σ_{j=0}^{k-a-1} (-1)^j binom(α, j) x(k-j)`, so the sample at `a` is
/// never used. Requires `k ≥ a + 1`.
pub fn gl_modified_difference(signal: &SampledSignal, alpha: f64, k: GridIndex) -> Result<Vec<f64>> {
    let a = signal.base();
    ensure_evaluable(signal, k, a + 1)?;
    let lags = lag_count(k, a) - 1;
    let w = gl_diff_weights(alpha, lags + 1)?;
    weighted_lags(signal, k, w.values(), lags)
}

/// Fixed-memory differences: only the `memory` most recent lags enter.
///
/// The window never reaches before the base `a`, so with `memory ≥ k - a`
/// every kind coincides with its full-memory counterpart.
///
/// * GL: `Σ_{j=0}^{L} c_j x(k-j)`, `L = min(K, k-a)`.
/// * Caputo: `Σ_{j=0}^{L} w_j ∇x(k-j)`.
/// * RL: `S(k) - S(k-1)` with `S(t) = Σ_{j=0}^{min(K, t-a)} w_j x(t-j)`.
pub fn fixed_memory_difference(
    signal: &SampledSignal,
    alpha: f64,
    memory: usize,
    k: GridIndex,
    kind: DefinitionKind,
) -> Result<Vec<f64>> {
    let a = signal.base();
    ensure_evaluable(signal, k, a)?;
    let lags = lag_count(k, a).min(memory);
    match kind {
        DefinitionKind::GrunwaldLetnikov => {
            let w = gl_diff_weights(alpha, lags + 1)?;
            weighted_lags(signal, k, w.values(), lags)
        }
        DefinitionKind::Caputo => {
            ensure_unit_order(alpha)?;
            ensure_history(signal, k - lags as GridIndex - 1)?;
            let w = gl_sum_weights(alpha, lags + 1)?;
            weighted_difference_lags(signal, k, w.values(), lags)
        }
        DefinitionKind::RiemannLiouville => {
            ensure_unit_order(alpha)?;
            let w = gl_sum_weights(alpha, lags + 1)?;
            let mut out = weighted_lags(signal, k, w.values(), lags)?;
            if k > a {
                let prev_lags = lag_count(k - 1, a).min(memory);
                let prev = weighted_lags(signal, k - 1, w.values(), prev_lags)?;
                out.iter_mut().zip(prev).for_each(|(o, p)| *o -= p);
            }
            Ok(out)
        }
    }
}

/// Variable-order difference: the weights are generated from `α(k)` at the
/// evaluation instant only.
pub fn variable_order_difference(
    signal: &SampledSignal,
    orders: &VariableOrder,
    k: GridIndex,
    kind: DefinitionKind,
) -> Result<Vec<f64>> {
    let alpha = orders.at(k)?;
    nabla_difference(signal, alpha, k, kind)
}

/// Dispatch on [`DefinitionKind`].
pub fn nabla_difference(
    signal: &SampledSignal,
    alpha: f64,
    k: GridIndex,
    kind: DefinitionKind,
) -> Result<Vec<f64>> {
    match kind {
        DefinitionKind::GrunwaldLetnikov => gl_difference(signal, alpha, k),
        DefinitionKind::RiemannLiouville => rl_difference(signal, alpha, k),
        DefinitionKind::Caputo => caputo_difference(signal, alpha, k),
    }
}

/// A fully specified fractional difference, ready to apply to signals.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    Standard { kind: DefinitionKind, alpha: f64 },
    FixedMemory { kind: DefinitionKind, alpha: f64, memory: usize },
    VariableOrder { kind: DefinitionKind, orders: VariableOrder },
}

impl Operator {
    pub fn standard(kind: DefinitionKind, alpha: f64) -> Self {
        Operator::Standard { kind, alpha }
    }

    pub fn kind(&self) -> DefinitionKind {
        match self {
            Operator::Standard { kind, .. }
            | Operator::FixedMemory { kind, .. }
            | Operator::VariableOrder { kind, .. } => *kind,
        }
    }

    pub fn apply(&self, signal: &SampledSignal, k: GridIndex) -> Result<Vec<f64>> {
        match self {
            Operator::Standard { kind, alpha } => nabla_difference(signal, *alpha, k, *kind),
            Operator::FixedMemory { kind, alpha, memory } => {
                fixed_memory_difference(signal, *alpha, *memory, k, *kind)
            }
            Operator::VariableOrder { kind, orders } => variable_order_difference(signal, orders, k, *kind),
        }
    }

    pub fn apply_scalar(&self, signal: &SampledSignal, k: GridIndex) -> Result<f64> {
        if signal.dimension() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: signal.dimension() });
        }
        self.apply(signal, k).map(|v| v[0])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn three_point() -> SampledSignal {
        // x(-1) = 1, x(0) = 2, x(1) = 3
        SampledSignal::scalar(0, &[1.0], &[2.0, 3.0]).unwrap()
    }

    #[test]
    fn gl_initial_value() {
        let s = SampledSignal::scalar(4, &[9.0], &[-1.25, 3.0]).unwrap();
        assert_eq!(gl_difference(&s, 0.37, 4).unwrap(), vec![-1.25]);
    }

    #[test]
    fn gl_constant_partial_sum() {
        let s = SampledSignal::scalar(0, &[], &[2.0; 3]).unwrap();
        assert_relative_eq!(gl_difference(&s, 0.5, 2).unwrap()[0], 0.375 * 2.0, max_relative = 1e-15);
    }

    #[test]
    fn gl_order_one_is_first_difference() {
        let s = SampledSignal::scalar(0, &[], &[1.0, 4.0, 9.0, 16.0]).unwrap();
        for k in 1..=3 {
            let d = gl_difference(&s, 1.0, k).unwrap()[0];
            assert_eq!(d, s.scalar_at(k).unwrap() - s.scalar_at(k - 1).unwrap());
        }
    }

    #[test]
    fn gl_rejects_k_before_base() {
        let s = three_point();
        assert!(matches!(gl_difference(&s, 0.5, -1), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn caputo_examples() {
        let s = three_point();
        assert_eq!(caputo_difference(&s, 0.5, 0).unwrap(), vec![1.0]);
        assert_eq!(caputo_difference(&s, 0.5, 1).unwrap(), vec![1.5]);
        let c = SampledSignal::scalar(0, &[3.0], &[3.0; 6]).unwrap();
        for k in 0..6 {
            assert_eq!(caputo_difference(&c, 0.3, k).unwrap(), vec![0.0]);
        }
    }

    #[test]
    fn caputo_order_and_history_errors() {
        let s = three_point();
        assert_eq!(caputo_difference(&s, 1.0, 1), Err(Error::OrderOutOfRange(1.0)));
        assert_eq!(caputo_difference(&s, 0.0, 1), Err(Error::OrderOutOfRange(0.0)));
        let bare = SampledSignal::scalar(0, &[], &[1.0, 2.0]).unwrap();
        assert!(matches!(caputo_difference(&bare, 0.5, 1), Err(Error::InsufficientHistory { needed: -1, .. })));
    }

    #[test]
    fn rl_examples() {
        let c = SampledSignal::scalar(0, &[7.0], &[2.0, 2.0]).unwrap();
        assert_relative_eq!(rl_difference(&c, 0.5, 1).unwrap()[0], 0.5 * 2.0, max_relative = 1e-15);
        let z = SampledSignal::scalar(0, &[0.0], &[0.0; 4]).unwrap();
        assert_eq!(rl_difference(&z, 0.5, 3).unwrap(), vec![0.0]);
        // k = a: composition with s(a-1) = 0 gives x(a)
        assert_eq!(rl_difference(&three_point(), 0.5, 0).unwrap(), vec![2.0]);
    }

    #[test]
    fn rl_from_caputo_examples() {
        let s = three_point();
        let rl = rl_from_caputo(&s, 0.5, 1).unwrap()[0];
        assert_relative_eq!(rl, 1.5 + 0.5, max_relative = 1e-14);
        assert_relative_eq!(rl, rl_difference(&s, 0.5, 1).unwrap()[0], max_relative = 1e-14);
        let zero_start = SampledSignal::scalar(0, &[0.0], &[2.0, 3.0, -1.0]).unwrap();
        for k in 1..=2 {
            assert_eq!(rl_from_caputo(&zero_start, 0.4, k).unwrap(), caputo_difference(&zero_start, 0.4, k).unwrap());
        }
        assert!(matches!(rl_from_caputo(&s, 0.5, 0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn correction_weight_is_one_minus_alpha_at_first_lag() {
        assert_relative_eq!(rl_correction_weight(0.5, 1).unwrap(), 0.5, max_relative = 1e-14);
        assert_relative_eq!(rl_correction_weight(0.3, 0).unwrap(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn modified_gl_examples() {
        let s = SampledSignal::scalar(0, &[], &[5.0, 2.0, -4.0]).unwrap();
        assert_eq!(gl_modified_difference(&s, 0.5, 1).unwrap(), vec![2.0]);
        let c = SampledSignal::scalar(0, &[], &[3.0; 3]).unwrap();
        assert_eq!(gl_modified_difference(&c, 0.5, 2).unwrap(), vec![1.5]);
        assert_eq!(gl_modified_difference(&s, 1.0, 2).unwrap(), vec![-6.0]);
        assert!(matches!(gl_modified_difference(&s, 0.5, 0), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn fixed_memory_examples() {
        let s = SampledSignal::scalar(0, &[0.5], &[1.0, -2.0, 4.0, 0.25]).unwrap();
        let g = DefinitionKind::GrunwaldLetnikov;
        assert_eq!(fixed_memory_difference(&s, 0.3, 10, 3, g).unwrap(), gl_difference(&s, 0.3, 3).unwrap());
        assert_eq!(fixed_memory_difference(&s, 0.3, 0, 3, g).unwrap(), vec![0.25]);
        let k1 = fixed_memory_difference(&s, 0.5, 1, 3, DefinitionKind::Caputo).unwrap()[0];
        assert_eq!(k1, (0.25 - 4.0) + 0.5 * (4.0 - (-2.0)));
        for kind in DefinitionKind::ALL {
            assert_eq!(
                fixed_memory_difference(&s, 0.6, 3, 3, kind).unwrap(),
                nabla_difference(&s, 0.6, 3, kind).unwrap()
            );
        }
    }

    #[test]
    fn variable_order_examples() {
        let s = SampledSignal::scalar(0, &[0.0], &[1.0, 3.0, 2.0]).unwrap();
        let orders = VariableOrder::new(0, vec![0.3, 0.7, 0.2]).unwrap();
        assert_eq!(
            variable_order_difference(&s, &orders, 0, DefinitionKind::Caputo).unwrap(),
            vec![1.0]
        );
        assert_eq!(
            variable_order_difference(&s, &orders, 0, DefinitionKind::GrunwaldLetnikov).unwrap(),
            vec![1.0]
        );
        assert_eq!(
            variable_order_difference(&s, &orders, 2, DefinitionKind::Caputo).unwrap(),
            caputo_difference(&s, 0.2, 2).unwrap()
        );
        let bad = VariableOrder::new(0, vec![1.5, 1.5, 1.5]).unwrap();
        assert_eq!(
            variable_order_difference(&s, &bad, 1, DefinitionKind::RiemannLiouville),
            Err(Error::OrderOutOfRange(1.5))
        );
        assert!(variable_order_difference(&s, &bad, 1, DefinitionKind::GrunwaldLetnikov).is_ok());
    }

    #[test]
    fn vector_signals_are_componentwise() {
        let s = SampledSignal::from_rows(0, 1, &[[1.0, 0.0], [2.0, 1.0], [3.0, 5.0]]).unwrap();
        let both = caputo_difference(&s, 0.5, 1).unwrap();
        for (i, value) in both.iter().enumerate() {
            let c = caputo_difference(&s.component(i).unwrap(), 0.5, 1).unwrap();
            assert_eq!(*value, c[0]);
        }
    }
}
