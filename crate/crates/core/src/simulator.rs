//! Nonlinear Caputo systems `C∇^α x(k) = f(x(k))`, `k = a, a+1, …`.
//!
//! Expanding the Caputo difference and isolating its `j = k` term (weight 1)
//! gives the implicit step
//!
//! ```text
//! x(k) = x(k-1) - H(k) + f(x(k)),   H(k) = Σ_{j=a}^{k-1} w_{k-j} ∇x(j)
//! ```
//!
//! which is solved by damped fixed-point iteration from `x(k-1)`. When the
//! iteration does not contract (stiff fields such as gradient flows of
//! steep objectives) the step falls back to Newton's method on the same
//! equation. The history sum is recomputed from scratch at every step.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use crate::kernel::{backward_difference, gl_sum_weights, WeightTable};
use crate::linalg::Matrix;
use crate::math::{fabs, max_abs, pow};
use crate::operators::caputo_difference;
use crate::signal::{GridIndex, SampledSignal};
use crate::{Error, Result};

/// Right-hand side `f` of the system. Implementations must be reentrant.
pub trait VectorField {
    fn dimension(&self) -> usize;

    fn evaluate(&self, x: &[f64], out: &mut [f64]);

    /// Jacobian of `f`; central differences unless overridden.
    fn jacobian(&self, x: &[f64], jac: &mut Matrix) {
        let n = self.dimension();
        let mut probe = x.to_vec();
        let (mut plus, mut minus) = (vec![0.0; n], vec![0.0; n]);
        for j in 0..n {
            let h = 1e-7 * fabs(x[j]).max(1.0);
            probe[j] = x[j] + h;
            self.evaluate(&probe, &mut plus);
            probe[j] = x[j] - h;
            self.evaluate(&probe, &mut minus);
            probe[j] = x[j];
            for i in 0..n {
                jac.set(i, j, (plus[i] - minus[i]) / (2.0 * h));
            }
        }
    }
}

impl<F: VectorField + ?Sized> VectorField for &F {
    fn dimension(&self) -> usize {
        (**self).dimension()
    }

    fn evaluate(&self, x: &[f64], out: &mut [f64]) {
        (**self).evaluate(x, out)
    }

    fn jacobian(&self, x: &[f64], jac: &mut Matrix) {
        (**self).jacobian(x, jac)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "camelCase"))]
pub struct SolverConfig {
    /// Stop when the infinity norm of an update falls to this value.
    pub tolerance: f64,
    /// Per attempt (fixed point, damped retry, Newton).
    pub max_iterations: usize,
    /// Relaxation factor of the first fixed-point attempt, in `(0, 1]`.
    pub damping: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tolerance: 1e-12, max_iterations: 100, damping: 1.0 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidParameter("solver tolerance must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidParameter("solver needs at least one iteration"));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidParameter("damping must lie in (0, 1]"));
        }
        Ok(())
    }
}

/// Everything needed to simulate one system.
#[derive(Debug, Clone)]
pub struct SystemSpec<F> {
    /// Order in `(0, 1]`; `α = 1` reduces the step to implicit Euler.
    pub alpha: f64,
    pub base: GridIndex,
    /// `x(a - 1)`.
    pub initial_state: Vec<f64>,
    pub field: F,
    pub solver: SolverConfig,
}

impl<F: VectorField> SystemSpec<F> {
    pub fn new(field: F, alpha: f64, base: GridIndex, initial_state: Vec<f64>) -> Result<Self> {
        let spec = Self { alpha, base, initial_state, field, solver: SolverConfig::default() };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_solver(mut self, solver: SolverConfig) -> Result<Self> {
        solver.validate()?;
        self.solver = solver;
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.field.dimension()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::OrderOutOfRange(self.alpha));
        }
        if self.initial_state.len() != self.field.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.field.dimension(),
                found: self.initial_state.len(),
            });
        }
        if self.initial_state.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        self.solver.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub state: Vec<f64>,
    /// Iterations over all attempts.
    pub iterations: usize,
}

enum Attempt {
    Converged(Vec<f64>, usize),
    Failed(Vec<f64>, usize),
}

fn inf_norm_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| f64::max(m, fabs(x - y)))
}

/// `x ← x + θ(target + f(x) - x)` from `start`.
fn fixed_point<F: VectorField>(field: &F, target: &[f64], start: &[f64], damping: f64, solver: &SolverConfig) -> Attempt {
    let mut x = start.to_vec();
    let mut fx = vec![0.0; x.len()];
    let mut previous = f64::INFINITY;
    let mut growing = 0;
    for it in 1..=solver.max_iterations {
        field.evaluate(&x, &mut fx);
        let mut update = 0.0f64;
        for i in 0..x.len() {
            let delta = damping * (target[i] + fx[i] - x[i]);
            x[i] += delta;
            update = update.max(fabs(delta));
        }
        if !update.is_finite() || update > 1e12 {
            return Attempt::Failed(x, it);
        }
        if update <= solver.tolerance {
            return Attempt::Converged(x, it);
        }
        // Give up early when the iteration is not contracting fast enough
        // to reach the tolerance within the remaining budget.
        let ratio = update / previous;
        growing = if ratio >= 1.0 { growing + 1 } else { 0 };
        let remaining = (solver.max_iterations - it) as f64;
        let needed = if ratio < 1.0 { libm::log(solver.tolerance / update) / libm::log(ratio) } else { f64::INFINITY };
        if growing >= 3 || (it >= 5 && needed > 2.0 * remaining) {
            return Attempt::Failed(x, it);
        }
        previous = update;
    }
    Attempt::Failed(x, solver.max_iterations)
}

/// Residual `x - target - f(x)`.
fn step_residual<F: VectorField>(field: &F, target: &[f64], x: &[f64], fx: &mut [f64]) -> Vec<f64> {
    field.evaluate(x, fx);
    x.iter().zip(target).zip(fx.iter()).map(|((x, t), f)| x - t - f).collect()
}

/// Newton's method with backtracking on `‖x - target - f(x)‖∞`.
fn newton<F: VectorField>(field: &F, target: &[f64], start: &[f64], solver: &SolverConfig) -> Attempt {
    let n = start.len();
    let mut x = start.to_vec();
    let mut fx = vec![0.0; n];
    let mut jac = Matrix::zeros(n, n);
    let mut g = step_residual(field, target, &x, &mut fx);
    for it in 1..=solver.max_iterations {
        let g_norm = max_abs(&g);
        if g_norm == 0.0 {
            return Attempt::Converged(x, it - 1);
        }
        field.jacobian(&x, &mut jac);
        for i in 0..n {
            for j in 0..n {
                let identity = if i == j { 1.0 } else { 0.0 };
                jac.set(i, j, identity - jac.get(i, j));
            }
        }
        let Ok(delta) = jac.solve(&g) else {
            return Attempt::Failed(x, it);
        };
        let mut t = 1.0;
        let (mut trial, mut g_trial);
        loop {
            trial = x.iter().zip(&delta).map(|(x, d)| x - t * d).collect::<Vec<_>>();
            g_trial = step_residual(field, target, &trial, &mut fx);
            let norm = max_abs(&g_trial);
            if (norm.is_finite() && norm <= (1.0 - 1e-4 * t) * g_norm) || t < 1e-10 {
                break;
            }
            t *= 0.5;
        }
        let moved = inf_norm_diff(&trial, &x);
        x = trial;
        g = g_trial;
        if !max_abs(&x).is_finite() {
            return Attempt::Failed(x, it);
        }
        if moved <= solver.tolerance {
            return Attempt::Converged(x, it);
        }
    }
    Attempt::Failed(x, solver.max_iterations)
}

/// Solves `x = target + f(x)` starting from `start`.
fn solve_implicit<F: VectorField>(
    field: &F,
    solver: &SolverConfig,
    target: &[f64],
    start: &[f64],
    k: GridIndex,
) -> Result<StepOutcome> {
    let mut total = 0;
    for damping in [solver.damping, 0.5 * solver.damping] {
        match fixed_point(field, target, start, damping, solver) {
            Attempt::Converged(state, it) => return Ok(StepOutcome { state, iterations: total + it }),
            Attempt::Failed(_, it) => total += it,
        }
    }
    match newton(field, target, start, solver) {
        Attempt::Converged(state, it) => Ok(StepOutcome { state, iterations: total + it }),
        Attempt::Failed(last, it) => {
            if !max_abs(&last).is_finite() {
                return Err(Error::Overflow { k });
            }
            let mut fx = vec![0.0; last.len()];
            let residual = max_abs(&step_residual(field, target, &last, &mut fx));
            Err(Error::NonConvergence { k, iterations: total + it, residual, last_iterate: last })
        }
    }
}

/// `target = x(k-1) - H(k)` from states stored row-major from `a - 1`.
fn step_target(states: &[f64], dim: usize, weights: &[f64], steps_done: usize) -> Vec<f64> {
    // states rows: 0 ↔ a-1, i ↔ a+i-1; k = a + steps_done
    let row = |i: usize| &states[i * dim..(i + 1) * dim];
    let mut target = row(steps_done).to_vec();
    for j in 0..steps_done {
        // ∇x(a+j) = row(j+1) - row(j), weight w_{k-(a+j)}
        let w = weights[steps_done - j];
        for ((t, x), y) in target.iter_mut().zip(row(j + 1)).zip(row(j)) {
            *t -= w * (x - y);
        }
    }
    target
}

/// Computes `x(k)` from a history covering `a - 1 .. k - 1`.
pub fn step<F: VectorField>(history: &SampledSignal, spec: &SystemSpec<F>, k: GridIndex) -> Result<StepOutcome> {
    spec.validate()?;
    let a = spec.base;
    let dim = spec.dimension();
    if history.dimension() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: history.dimension() });
    }
    if k < a {
        return Err(Error::OutOfRange { k, first: a, last: history.last_index() + 1 });
    }
    let steps_done = (k - a) as usize;
    let mut rows = Vec::with_capacity((steps_done + 1) * dim);
    for t in a - 1..k {
        rows.extend_from_slice(history.at(t)?);
    }
    let weights = gl_sum_weights(spec.alpha, steps_done + 1)?;
    let target = step_target(&rows, dim, weights.values(), steps_done);
    let start = history.at(k - 1)?;
    solve_implicit(&spec.field, &spec.solver, &target, start, k)
}

/// States `x(a-1), x(a), …` with per-step diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    base: GridIndex,
    dimension: usize,
    states: Vec<f64>,
    iterations: Vec<usize>,
    /// Largest defect `‖C∇^α x(k) - f(x(k))‖∞` over the computed steps.
    pub max_residual: f64,
}

impl Trajectory {
    pub fn base(&self) -> GridIndex {
        self.base
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of stored states, `x(a-1)` included.
    pub fn len(&self) -> usize {
        self.iterations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.iterations.is_empty()
    }

    /// Number of computed steps (`len() - 1`).
    pub fn steps(&self) -> usize {
        self.len() - 1
    }

    pub fn first_index(&self) -> GridIndex {
        self.base - 1
    }

    pub fn last_index(&self) -> GridIndex {
        self.first_index() + self.len() as GridIndex - 1
    }

    pub fn state(&self, k: GridIndex) -> Option<&[f64]> {
        if k < self.first_index() || k > self.last_index() {
            return None;
        }
        let i = (k - self.first_index()) as usize * self.dimension;
        Some(&self.states[i..i + self.dimension])
    }

    pub fn last_state(&self) -> &[f64] {
        &self.states[self.states.len() - self.dimension..]
    }

    /// Solver iterations for `k`; zero for the initial state.
    pub fn iterations(&self) -> &[usize] {
        &self.iterations
    }

    pub fn states(&self) -> impl Iterator<Item = (GridIndex, &[f64])> + '_ {
        let first = self.first_index();
        self.states.chunks_exact(self.dimension).enumerate().map(move |(i, s)| (first + i as GridIndex, s))
    }

    pub fn to_signal(&self) -> Result<SampledSignal> {
        SampledSignal::new(self.base, 1, self.dimension, self.states.clone())
    }
}

/// Incremental simulation; keeps everything computed so far when a step fails.
#[derive(Debug, Clone)]
pub struct Simulator<F> {
    spec: SystemSpec<F>,
    weights: WeightTable,
    states: Vec<f64>,
    iterations: Vec<usize>,
}

impl<F: VectorField> Simulator<F> {
    pub fn new(spec: SystemSpec<F>) -> Result<Self> {
        spec.validate()?;
        let weights = gl_sum_weights(spec.alpha, 1)?;
        let states = spec.initial_state.clone();
        Ok(Self { spec, weights, states, iterations: vec![0] })
    }

    pub fn spec(&self) -> &SystemSpec<F> {
        &self.spec
    }

    /// Grid index of the next state to compute.
    pub fn next_index(&self) -> GridIndex {
        self.spec.base + self.iterations.len() as GridIndex - 1
    }

    pub fn advance(&mut self) -> Result<&[f64]> {
        let dim = self.spec.dimension();
        let steps_done = self.iterations.len() - 1;
        self.weights.extend_to(steps_done + 1);
        let target = step_target(&self.states, dim, self.weights.values(), steps_done);
        let start = &self.states[steps_done * dim..];
        let outcome = solve_implicit(&self.spec.field, &self.spec.solver, &target, start, self.next_index())?;
        self.states.extend_from_slice(&outcome.state);
        self.iterations.push(outcome.iterations);
        Ok(&self.states[(steps_done + 1) * dim..])
    }

    /// Snapshot of the states computed so far, with the defect residual.
    pub fn trajectory(&self) -> Result<Trajectory> {
        let mut traj = Trajectory {
            base: self.spec.base,
            dimension: self.spec.dimension(),
            states: self.states.clone(),
            iterations: self.iterations.clone(),
            max_residual: 0.0,
        };
        traj.max_residual = residual(&traj, &self.spec)?;
        Ok(traj)
    }
}

/// Simulates `steps` steps, `x(a) … x(a + steps - 1)`.
pub fn simulate<F: VectorField>(spec: SystemSpec<F>, steps: usize) -> Result<Trajectory> {
    if steps == 0 {
        return Err(Error::InvalidParameter("simulation needs at least one step"));
    }
    let mut sim = Simulator::new(spec)?;
    for _ in 0..steps {
        sim.advance()?;
    }
    sim.trajectory()
}

/// `max_k ‖C∇^α x(k) - f(x(k))‖∞`, with the Caputo difference evaluated
/// directly by the operators module.
pub fn residual<F: VectorField>(traj: &Trajectory, spec: &SystemSpec<F>) -> Result<f64> {
    let signal = traj.to_signal()?;
    let mut fx = vec![0.0; traj.dimension()];
    let mut worst = 0.0f64;
    for k in traj.base()..=traj.last_index() {
        let lhs = if spec.alpha < 1.0 {
            caputo_difference(&signal, spec.alpha, k)?
        } else {
            backward_difference(&signal, 1, k)?
        };
        spec.field.evaluate(signal.at(k)?, &mut fx);
        worst = worst.max(inf_norm_diff(&lhs, &fx));
    }
    Ok(worst)
}

/// `sign(v)·|v|^p`: odd real roots for negative states.
pub fn signed_power(v: f64, p: f64) -> f64 {
    let magnitude = pow(fabs(v), p);
    if v < 0.0 {
        -magnitude
    } else {
        magnitude
    }
}

/// Derivative `p·|v|^(p-1)` of [`signed_power`], capped where it blows up.
fn signed_power_slope(v: f64, p: f64) -> f64 {
    let slope = p * pow(fabs(v), p - 1.0);
    if slope.is_finite() {
        slope.min(1e150)
    } else {
        1e150
    }
}

/// Built-in right-hand sides.
#[derive(Debug, Clone, PartialEq)]
pub enum BuiltinSystem {
    /// `(-x₁ + x₂³, -x₁ - x₂)`.
    CubicCoupling,
    /// `(-x₁ + x₂^{1/3}, -x₁^{1/5} - x₂)` with signed roots.
    RootCoupling,
    /// `A·x`.
    Linear(Matrix),
}

impl BuiltinSystem {
    /// Resolves the command-line names `example1`, `example2` and `linear`.
    pub fn from_name(name: &str, matrix: Option<Matrix>) -> Result<Self> {
        match (name, matrix) {
            ("example1", _) => Ok(BuiltinSystem::CubicCoupling),
            ("example2", _) => Ok(BuiltinSystem::RootCoupling),
            ("linear", Some(m)) if m.is_square() => Ok(BuiltinSystem::Linear(m)),
            ("linear", _) => Err(Error::InvalidParameter("linear system needs a square matrix")),
            (other, _) => Err(Error::UnknownSystem(other.to_string())),
        }
    }
}

impl VectorField for BuiltinSystem {
    fn dimension(&self) -> usize {
        match self {
            BuiltinSystem::CubicCoupling | BuiltinSystem::RootCoupling => 2,
            BuiltinSystem::Linear(a) => a.rows(),
        }
    }

    fn evaluate(&self, x: &[f64], out: &mut [f64]) {
        match self {
            BuiltinSystem::CubicCoupling => {
                out[0] = -x[0] + x[1] * x[1] * x[1];
                out[1] = -x[0] - x[1];
            }
            BuiltinSystem::RootCoupling => {
                out[0] = -x[0] + signed_power(x[1], 1.0 / 3.0);
                out[1] = -signed_power(x[0], 1.0 / 5.0) - x[1];
            }
            BuiltinSystem::Linear(a) => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = (0..a.cols()).map(|j| a.get(i, j) * x[j]).sum();
                }
            }
        }
    }

    fn jacobian(&self, x: &[f64], jac: &mut Matrix) {
        match self {
            BuiltinSystem::CubicCoupling => {
                jac.set(0, 0, -1.0);
                jac.set(0, 1, 3.0 * x[1] * x[1]);
                jac.set(1, 0, -1.0);
                jac.set(1, 1, -1.0);
            }
            BuiltinSystem::Linear(a) => jac.clone_from(a),
            BuiltinSystem::RootCoupling => {
                jac.set(0, 0, -1.0);
                jac.set(0, 1, signed_power_slope(x[1], 1.0 / 3.0));
                jac.set(1, 0, -signed_power_slope(x[0], 1.0 / 5.0));
                jac.set(1, 1, -1.0);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn decay(lambda: f64) -> BuiltinSystem {
        BuiltinSystem::Linear(Matrix::diagonal(&[-lambda]))
    }

    #[test]
    fn hand_steps() {
        let spec = SystemSpec::new(decay(1.0), 0.5, 0, vec![1.0]).unwrap();
        let h0 = SampledSignal::new(0, 1, 1, vec![1.0]).unwrap();
        let x0 = step(&h0, &spec, 0).unwrap().state[0];
        assert_relative_eq!(x0, 0.5, epsilon = 1e-12);
        let h1 = SampledSignal::new(0, 1, 1, vec![1.0, x0]).unwrap();
        assert_relative_eq!(step(&h1, &spec, 1).unwrap().state[0], 0.375, epsilon = 1e-12);
    }

    #[test]
    fn zero_field_freezes() {
        let spec = SystemSpec::new(BuiltinSystem::Linear(Matrix::zeros(2, 2)), 0.7, 3, vec![1.5, -2.0]).unwrap();
        let traj = simulate(spec, 25).unwrap();
        for (_, s) in traj.states() {
            assert_eq!(s, &[1.5, -2.0]);
        }
        assert_eq!(traj.max_residual, 0.0);
    }

    #[test]
    fn equilibrium_is_preserved() {
        let spec = SystemSpec::new(BuiltinSystem::CubicCoupling, 0.8, 0, vec![0.0, 0.0]).unwrap();
        let traj = simulate(spec, 30).unwrap();
        assert!(traj.states().all(|(_, s)| s == [0.0, 0.0]));
        assert_eq!(traj.max_residual, 0.0);
    }

    #[test]
    fn trajectory_bookkeeping() {
        let spec = SystemSpec::new(decay(1.0), 0.5, 0, vec![1.0]).unwrap();
        let traj = simulate(spec, 2).unwrap();
        assert_eq!(traj.len(), 3);
        assert_eq!(traj.first_index(), -1);
        assert_eq!(traj.last_index(), 1);
        assert_eq!(traj.iterations()[0], 0);
        assert_eq!(traj.state(-1).unwrap(), &[1.0]);
        assert_relative_eq!(traj.last_state()[0], 0.375, epsilon = 1e-12);
    }

    #[test]
    fn builtin_fields() {
        let mut out = [0.0; 2];
        BuiltinSystem::CubicCoupling.evaluate(&[1.0, 1.0], &mut out);
        assert_eq!(out, [0.0, -2.0]);
        BuiltinSystem::RootCoupling.evaluate(&[-8.0, 0.0], &mut out);
        assert_eq!(out[0], 8.0);
        assert_relative_eq!(out[1], 8f64.powf(0.2), max_relative = 1e-15);
        assert_relative_eq!(out[1], 1.515_716_566_510_398, max_relative = 1e-14);
        let lin = BuiltinSystem::from_name("linear", Some(Matrix::diagonal(&[-1.0, -1.0]))).unwrap();
        lin.evaluate(&[3.0, 4.0], &mut out);
        assert_eq!(out, [-3.0, -4.0]);
    }

    #[test]
    fn builtin_names() {
        assert_eq!(BuiltinSystem::from_name("example1", None).unwrap(), BuiltinSystem::CubicCoupling);
        assert_eq!(BuiltinSystem::from_name("example2", None).unwrap(), BuiltinSystem::RootCoupling);
        assert!(matches!(BuiltinSystem::from_name("linear", None), Err(Error::InvalidParameter(_))));
        assert_eq!(
            BuiltinSystem::from_name("lorenz", None),
            Err(Error::UnknownSystem("lorenz".into()))
        );
    }

    #[test]
    fn signed_power_examples() {
        assert_eq!(signed_power(-1.0, 1.0 / 3.0), -1.0);
        assert_relative_eq!(signed_power(8.0, 1.0 / 3.0), 2.0, max_relative = 1e-15);
        assert_relative_eq!(signed_power(-32.0, 0.2), -2.0, max_relative = 1e-15);
        assert_eq!(signed_power(0.0, 0.2), 0.0);
    }

    #[test]
    fn spec_validation() {
        assert_eq!(SystemSpec::new(decay(1.0), 1.2, 0, vec![1.0]).err(), Some(Error::OrderOutOfRange(1.2)));
        assert!(matches!(SystemSpec::new(decay(1.0), 0.5, 0, vec![1.0, 2.0]), Err(Error::DimensionMismatch { .. })));
        let spec = SystemSpec::new(decay(1.0), 0.5, 0, vec![1.0]).unwrap();
        assert!(spec.with_solver(SolverConfig { damping: 0.0, ..SolverConfig::default() }).is_err());
    }

    #[test]
    fn non_convergence_is_an_error() {
        let spec = SystemSpec::new(BuiltinSystem::CubicCoupling, 0.8, 0, vec![2.0, -1.0])
            .unwrap()
            .with_solver(SolverConfig { max_iterations: 1, ..SolverConfig::default() })
            .unwrap();
        match simulate(spec, 5) {
            Err(Error::NonConvergence { k, last_iterate, .. }) => {
                assert_eq!(k, 0);
                assert_eq!(last_iterate.len(), 2);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn simulator_keeps_partial_progress() {
        let spec = SystemSpec::new(decay(0.5), 0.4, 0, vec![2.0]).unwrap();
        let mut sim = Simulator::new(spec).unwrap();
        sim.advance().unwrap();
        sim.advance().unwrap();
        assert_eq!(sim.next_index(), 2);
        assert_eq!(sim.trajectory().unwrap().len(), 3);
    }
}
