//! Seeded randomized harness over every inequality and definition.

use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::{inequality_sides, CorollaryBound, InequalityKind, Sides};
use crate::linalg::Matrix;
use crate::math::fabs;
use crate::operators::{DefinitionKind, Operator, VariableOrder};
use crate::signal::{GridIndex, SampledSignal};
use crate::{Error, Result};

/// Which operator variant the suite exercises.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase", tag = "variant"))]
pub enum OperatorFamily {
    /// GL, RL and Caputo with a constant order drawn from `alpha_range`.
    Standard,
    /// Fixed-memory GL, RL and Caputo; `None` keeps the full history.
    FixedMemory { memory: Option<usize> },
    /// Variable-order GL and Caputo, `α(k)` uniform in `(min, max)` per point.
    VariableOrder { min: f64, max: f64 },
}

impl OperatorFamily {
    pub fn definitions(&self) -> &'static [DefinitionKind] {
        match self {
            OperatorFamily::Standard | OperatorFamily::FixedMemory { .. } => &DefinitionKind::ALL,
            OperatorFamily::VariableOrder { .. } => {
                &[DefinitionKind::GrunwaldLetnikov, DefinitionKind::Caputo]
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct SuiteConfig {
    pub trials: usize,
    /// Longest signal, counted from the base (one history sample is added).
    pub max_len: usize,
    pub value_range: (f64, f64),
    pub alpha_range: (f64, f64),
    pub seed: u64,
    /// Relative tolerance; a gap is a violation above `tolerance · max(1, |lhs|, |rhs|)`.
    pub tolerance: f64,
    pub family: OperatorFamily,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            trials: 200,
            max_len: 50,
            value_range: (-2.0, 2.0),
            alpha_range: (0.05, 0.95),
            seed: 42,
            tolerance: 1e-9,
            family: OperatorFamily::Standard,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum CheckKind {
    EvenPower,
    ConjugatePower,
    PowerChain,
    Dyadic,
    QuadraticForm,
    CorollaryConjugate,
    CorollaryChain,
    CorollarySquare,
}

impl CheckKind {
    pub const THEOREM: [CheckKind; 5] = [
        CheckKind::EvenPower,
        CheckKind::ConjugatePower,
        CheckKind::PowerChain,
        CheckKind::Dyadic,
        CheckKind::QuadraticForm,
    ];
    pub const COROLLARY: [CheckKind; 3] =
        [CheckKind::CorollaryConjugate, CheckKind::CorollaryChain, CheckKind::CorollarySquare];

    pub fn label(self) -> &'static str {
        match self {
            CheckKind::EvenPower => "even-power",
            CheckKind::ConjugatePower => "conjugate-power",
            CheckKind::PowerChain => "power-chain",
            CheckKind::Dyadic => "dyadic",
            CheckKind::QuadraticForm => "quadratic-form",
            CheckKind::CorollaryConjugate => "corollary-conjugate",
            CheckKind::CorollaryChain => "corollary-chain",
            CheckKind::CorollarySquare => "corollary-square",
        }
    }
}

/// The evaluation that produced a pair's largest relative gap.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct Witness {
    pub trial: usize,
    pub k: GridIndex,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct PairSummary {
    pub kind: CheckKind,
    pub definition: DefinitionKind,
    pub trials: usize,
    pub evaluations: usize,
    pub max_gap: f64,
    /// Largest `gap / max(1, |lhs|, |rhs|)`.
    pub max_relative_gap: f64,
    pub violations: usize,
    pub worst: Option<Witness>,
}

impl PairSummary {
    fn new(kind: CheckKind, definition: DefinitionKind) -> Self {
        Self {
            kind,
            definition,
            trials: 0,
            evaluations: 0,
            max_gap: f64::NEG_INFINITY,
            max_relative_gap: f64::NEG_INFINITY,
            violations: 0,
            worst: None,
        }
    }

    fn record(&mut self, trial: usize, k: GridIndex, sides: Sides, tolerance: f64) {
        let gap = sides.gap();
        let relative = gap / sides.scale();
        self.evaluations += 1;
        self.max_gap = self.max_gap.max(gap);
        if relative > self.max_relative_gap || self.worst.is_none() {
            self.max_relative_gap = relative;
            self.worst = Some(Witness { trial, k, lhs: sides.lhs, rhs: sides.rhs });
        }
        if gap > tolerance * sides.scale() {
            self.violations += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub pairs: Vec<PairSummary>,
}

impl SuiteReport {
    pub fn total_violations(&self) -> usize {
        self.pairs.iter().map(|p| p.violations).sum()
    }

    pub fn is_clean(&self) -> bool {
        self.total_violations() == 0
    }

    pub fn pair(&self, kind: CheckKind, definition: DefinitionKind) -> Option<&PairSummary> {
        self.pairs.iter().find(|p| p.kind == kind && p.definition == definition)
    }
}

struct Sampler(ChaCha8Rng);

impl Sampler {
    /// Uniform on the open interval (0, 1).
    fn unit(&mut self) -> f64 {
        ((self.0.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    /// Uniform integer in `lo..=hi`.
    fn int(&mut self, lo: i64, hi: i64) -> i64 {
        lo + (self.0.next_u64() % (hi - lo + 1) as u64) as i64
    }
}

#[derive(Debug, Clone, Copy)]
enum Shape {
    Uniform,
    Constant,
    Alternating,
    Spike,
    Ramp,
}

impl Shape {
    fn draw(rng: &mut Sampler) -> Self {
        match rng.int(0, 9) {
            0 => Shape::Constant,
            1 => Shape::Alternating,
            2 => Shape::Spike,
            3 => Shape::Ramp,
            _ => Shape::Uniform,
        }
    }

    fn values(self, rng: &mut Sampler, len: usize, (lo, hi): (f64, f64)) -> Vec<f64> {
        match self {
            Shape::Uniform => (0..len).map(|_| rng.uniform(lo, hi)).collect(),
            Shape::Constant => vec![rng.uniform(lo, hi); len],
            Shape::Alternating => {
                let amp = rng.uniform(lo, hi);
                (0..len).map(|i| if i % 2 == 0 { amp } else { (-amp).clamp(lo, hi) }).collect()
            }
            Shape::Spike => {
                let mut v = vec![rng.uniform(lo, hi); len];
                let at = rng.int(0, len as i64 - 1) as usize;
                v[at] = rng.uniform(lo, hi);
                v
            }
            Shape::Ramp => {
                let (start, end) = (rng.uniform(lo, hi), rng.uniform(lo, hi));
                let span = (len.max(2) - 1) as f64;
                (0..len).map(|i| start + (end - start) * i as f64 / span).collect()
            }
        }
    }
}

fn draw_kind(rng: &mut Sampler, kind: CheckKind) -> Result<InequalityKind> {
    let m = rng.int(1, 3) as u32;
    Ok(match kind {
        CheckKind::EvenPower => InequalityKind::EvenPower { m },
        CheckKind::ConjugatePower => InequalityKind::ConjugatePower { m, n: rng.int(1, 2 * i64::from(m) - 1) as u32 },
        CheckKind::PowerChain => InequalityKind::PowerChain { m, n: rng.int(1, 2 * i64::from(m)) as u32 },
        CheckKind::Dyadic => InequalityKind::Dyadic { m },
        CheckKind::QuadraticForm => {
            let dim = rng.int(1, 3) as usize;
            let a = Matrix::from_row_major(dim, dim, (0..dim * dim).map(|_| rng.uniform(-1.0, 1.0)).collect())?;
            let mut p = a.transpose().matmul(&a)?;
            for i in 0..dim {
                p.set(i, i, p.get(i, i) + 0.1);
            }
            InequalityKind::QuadraticForm { weight: p }
        }
        CheckKind::CorollaryConjugate => CorollaryBound::ConjugateOdd { m }.as_inequality(),
        CheckKind::CorollaryChain => CorollaryBound::ChainOdd { m }.as_inequality(),
        CheckKind::CorollarySquare => CorollaryBound::Square.as_inequality(),
    })
}

fn draw_signal(
    rng: &mut Sampler,
    kind: &InequalityKind,
    base: GridIndex,
    len: usize,
    range: (f64, f64),
) -> Result<SampledSignal> {
    let dim = match kind {
        InequalityKind::QuadraticForm { weight } => weight.rows(),
        _ => 1,
    };
    let nonnegative = !kind.admits_signed_data();
    let columns: Vec<Vec<f64>> = (0..dim)
        .map(|_| {
            let shape = Shape::draw(rng);
            let mut v = shape.values(rng, len + 1, range);
            if nonnegative {
                v.iter_mut().for_each(|x| *x = fabs(*x));
            }
            v
        })
        .collect();
    let data = (0..=len).flat_map(|i| columns.iter().map(move |c| c[i])).collect();
    SampledSignal::new(base, 1, dim, data)
}

fn validate(config: &SuiteConfig) -> Result<()> {
    if config.trials == 0 {
        return Err(Error::InvalidParameter("property suite needs at least one trial"));
    }
    if config.max_len == 0 {
        return Err(Error::InvalidParameter("maximum signal length must be positive"));
    }
    let (lo, hi) = config.value_range;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::InvalidParameter("value range must be finite and ordered"));
    }
    let (alo, ahi) = match config.family {
        OperatorFamily::VariableOrder { min, max } => (min, max),
        _ => config.alpha_range,
    };
    if !(alo > 0.0 && ahi < 1.0 && alo <= ahi) {
        return Err(Error::InvalidParameter("order range must lie inside (0, 1)"));
    }
    Ok(())
}

/// Runs every (inequality, definition) pair over `config.trials` random
/// signals, evaluating at every grid point. Deterministic in `config.seed`.
///
/// Pairs: the five theorem kinds for each definition of the family, then the
/// three corollary bounds under the family's Caputo operator.
pub fn run_property_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    validate(config)?;
    let definitions = config.family.definitions();
    let mut pairs: Vec<PairSummary> = Vec::new();
    for kind in CheckKind::THEOREM {
        pairs.extend(definitions.iter().map(|d| PairSummary::new(kind, *d)));
    }
    for kind in CheckKind::COROLLARY {
        pairs.push(PairSummary::new(kind, DefinitionKind::Caputo));
    }

    let mut rng = Sampler(ChaCha8Rng::seed_from_u64(config.seed));
    for trial in 0..config.trials {
        let len = rng.int(1, config.max_len as i64) as usize;
        let base = rng.int(-3, 3);
        let alpha = rng.uniform(config.alpha_range.0, config.alpha_range.1);
        let orders = match config.family {
            OperatorFamily::VariableOrder { min, max } => {
                Some(VariableOrder::new(base, (0..len).map(|_| rng.uniform(min, max)).collect())?)
            }
            _ => None,
        };
        let operator = |definition: DefinitionKind| match (config.family, &orders) {
            (OperatorFamily::FixedMemory { memory }, _) => {
                Operator::FixedMemory { kind: definition, alpha, memory: memory.unwrap_or(usize::MAX) }
            }
            (OperatorFamily::VariableOrder { .. }, Some(orders)) => {
                Operator::VariableOrder { kind: definition, orders: orders.clone() }
            }
            _ => Operator::Standard { kind: definition, alpha },
        };

        for check in CheckKind::THEOREM.into_iter().chain(CheckKind::COROLLARY) {
            let kind = draw_kind(&mut rng, check)?;
            let signal = draw_signal(&mut rng, &kind, base, len, config.value_range)?;
            for summary in pairs.iter_mut().filter(|p| p.kind == check) {
                let op = operator(summary.definition);
                summary.trials += 1;
                for k in base..=signal.last_index() {
                    let sides = inequality_sides(&kind, &op, &signal, k)?;
                    summary.record(trial, k, sides, config.tolerance);
                }
            }
        }
    }
    Ok(SuiteReport { config: config.clone(), pairs })
}
