//! Fractional-order gradient descent: the Caputo dynamics
//! `C∇^α x(k) = -ρ ∇f(x(k))` integrated with the simulator's implicit step.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::Matrix;
use crate::lyapunov::{GapReport, Sides};
use crate::math::fabs;
use crate::operators::caputo_difference;
use crate::signal::{GridIndex, SampledSignal};
use crate::simulator::{Simulator, SolverConfig, SystemSpec, Trajectory, VectorField};
use crate::{Error, Result};

/// Relative tolerance used by [`certificate_check`].
pub const CERTIFICATE_TOLERANCE: f64 = 1e-9;

pub trait Objective {
    fn dimension(&self) -> usize;

    fn evaluate(&self, x: &[f64]) -> f64;

    fn gradient(&self, x: &[f64], out: &mut [f64]);

    /// Hessian; central differences of the gradient unless overridden.
    fn hessian(&self, x: &[f64], out: &mut Matrix) {
        let n = self.dimension();
        let mut probe = x.to_vec();
        let (mut plus, mut minus) = (vec![0.0; n], vec![0.0; n]);
        for j in 0..n {
            let h = 1e-6 * fabs(x[j]).max(1.0);
            probe[j] = x[j] + h;
            self.gradient(&probe, &mut plus);
            probe[j] = x[j] - h;
            self.gradient(&probe, &mut minus);
            probe[j] = x[j];
            for i in 0..n {
                out.set(i, j, (plus[i] - minus[i]) / (2.0 * h));
            }
        }
    }

    /// Known minimizer, when there is one.
    fn optimum(&self) -> Option<Vec<f64>> {
        None
    }
}

/// `f(x) = (x₁ - a)² + b(x₁² - x₂)²`, minimized at `(a, a²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rosenbrock {
    pub a: f64,
    pub b: f64,
}

/// The valley `(x₁ - 1)² + 2(x₁² - x₂)²` with minimizer `(1, 1)`.
pub fn valley_objective() -> Rosenbrock {
    Rosenbrock { a: 1.0, b: 2.0 }
}

impl Objective for Rosenbrock {
    fn dimension(&self) -> usize {
        2
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        let (d, c) = (x[0] - self.a, x[0] * x[0] - x[1]);
        d * d + self.b * c * c
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let c = x[0] * x[0] - x[1];
        out[0] = 2.0 * (x[0] - self.a) + 4.0 * self.b * x[0] * c;
        out[1] = -2.0 * self.b * c;
    }

    fn hessian(&self, x: &[f64], out: &mut Matrix) {
        out.set(0, 0, 2.0 + 4.0 * self.b * (3.0 * x[0] * x[0] - x[1]));
        out.set(0, 1, -4.0 * self.b * x[0]);
        out.set(1, 0, -4.0 * self.b * x[0]);
        out.set(1, 1, 2.0 * self.b);
    }

    fn optimum(&self) -> Option<Vec<f64>> {
        Some(vec![self.a, self.a * self.a])
    }
}

/// `f(x) = ½ (x - c)ᵀ Q (x - c)` with symmetric `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadratic {
    q: Matrix,
    center: Vec<f64>,
}

impl Quadratic {
    pub fn new(q: Matrix, center: Vec<f64>) -> Result<Self> {
        if !q.is_square() {
            return Err(Error::DimensionMismatch { expected: q.rows(), found: q.cols() });
        }
        if center.len() != q.rows() {
            return Err(Error::DimensionMismatch { expected: q.rows(), found: center.len() });
        }
        if q.asymmetry() > 1e-12 * q.max_abs().max(1.0) {
            return Err(Error::InvalidParameter("quadratic objective needs a symmetric matrix"));
        }
        Ok(Self { q, center })
    }

    fn shifted(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.center).map(|(x, c)| x - c).collect()
    }
}

impl Objective for Quadratic {
    fn dimension(&self) -> usize {
        self.center.len()
    }

    fn evaluate(&self, x: &[f64]) -> f64 {
        let y = self.shifted(x);
        let mut qy = vec![0.0; y.len()];
        self.gradient(x, &mut qy);
        0.5 * y.iter().zip(&qy).map(|(a, b)| a * b).sum::<f64>()
    }

    fn gradient(&self, x: &[f64], out: &mut [f64]) {
        let y = self.shifted(x);
        for (i, o) in out.iter_mut().enumerate() {
            *o = y.iter().enumerate().map(|(j, v)| self.q.get(i, j) * v).sum();
        }
    }

    fn hessian(&self, _x: &[f64], out: &mut Matrix) {
        out.clone_from(&self.q);
    }

    /// The center; a minimizer only when `Q` is positive semidefinite.
    fn optimum(&self) -> Option<Vec<f64>> {
        Some(self.center.clone())
    }
}

/// The vector field `-ρ ∇f`.
#[derive(Debug, Clone, Copy)]
pub struct GradientFlow<O> {
    pub objective: O,
    pub rho: f64,
}

impl<O: Objective> VectorField for GradientFlow<O> {
    fn dimension(&self) -> usize {
        self.objective.dimension()
    }

    fn evaluate(&self, x: &[f64], out: &mut [f64]) {
        self.objective.gradient(x, out);
        for v in out.iter_mut() {
            *v *= -self.rho;
        }
    }

    fn jacobian(&self, x: &[f64], jac: &mut Matrix) {
        self.objective.hessian(x, jac);
        for i in 0..jac.rows() {
            for j in 0..jac.cols() {
                jac.set(i, j, -self.rho * jac.get(i, j));
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerRun {
    pub alpha: f64,
    pub rho: f64,
    pub base: GridIndex,
    pub initial_point: Vec<f64>,
    pub steps: usize,
    pub trajectory: Trajectory,
    /// `f(x(k))` for every stored state, `x(a-1)` first.
    pub objective_values: Vec<f64>,
    pub optimum: Option<Vec<f64>>,
}

fn validate_run_parameters(alpha: f64, rho: f64, steps: usize) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::OrderOutOfRange(alpha));
    }
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(Error::InvalidParameter("rho must be positive"));
    }
    if steps == 0 {
        return Err(Error::InvalidParameter("optimizer needs at least one step"));
    }
    Ok(())
}

/// Runs `steps` implicit steps from `x(a-1) = initial_point` with `a = 0`.
pub fn fractional_gradient_descent<O: Objective>(
    objective: O,
    alpha: f64,
    rho: f64,
    initial_point: &[f64],
    steps: usize,
) -> Result<OptimizerRun> {
    fractional_gradient_descent_with(objective, alpha, rho, initial_point, steps, SolverConfig::default())
}

pub fn fractional_gradient_descent_with<O: Objective>(
    objective: O,
    alpha: f64,
    rho: f64,
    initial_point: &[f64],
    steps: usize,
    solver: SolverConfig,
) -> Result<OptimizerRun> {
    validate_run_parameters(alpha, rho, steps)?;
    let sim = optimizer_simulator(objective, alpha, rho, initial_point, solver)?;
    run_to_completion(sim, steps)
}

/// The underlying simulator, for callers that want to keep partial progress.
pub fn optimizer_simulator<O: Objective>(
    objective: O,
    alpha: f64,
    rho: f64,
    initial_point: &[f64],
    solver: SolverConfig,
) -> Result<Simulator<GradientFlow<O>>> {
    validate_run_parameters(alpha, rho, 1)?;
    let field = GradientFlow { objective, rho };
    let spec = SystemSpec::new(field, alpha, 0, initial_point.to_vec())?.with_solver(solver)?;
    Simulator::new(spec)
}

fn run_to_completion<O: Objective>(mut sim: Simulator<GradientFlow<O>>, steps: usize) -> Result<OptimizerRun> {
    for _ in 0..steps {
        sim.advance()?;
    }
    run_from_simulator(&sim)
}

/// Packages whatever the simulator has computed so far.
pub fn run_from_simulator<O: Objective>(sim: &Simulator<GradientFlow<O>>) -> Result<OptimizerRun> {
    let spec = sim.spec();
    let trajectory = sim.trajectory()?;
    let objective = &spec.field.objective;
    let objective_values = trajectory.states().map(|(_, x)| objective.evaluate(x)).collect();
    Ok(OptimizerRun {
        alpha: spec.alpha,
        rho: spec.field.rho,
        base: spec.base,
        initial_point: spec.initial_state.clone(),
        steps: trajectory.steps(),
        trajectory,
        objective_values,
        optimum: objective.optimum(),
    })
}

/// States shifted to the optimum, `y(k) = x(k) - x*`, as a two-component signal.
fn shifted_states(run: &OptimizerRun) -> Result<SampledSignal> {
    let Some(optimum) = run.optimum.as_ref() else {
        return Err(Error::InvalidParameter("certificate needs an objective with a known optimum"));
    };
    if run.trajectory.dimension() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: run.trajectory.dimension() });
    }
    run.trajectory.to_signal()?.map_rows(2, |x| Ok(vec![x[0] - optimum[0], x[1] - optimum[1]]))
}

/// Both sides of `C∇^α V(k) ≤ ½ y₁ C∇^α y₁ + y₂ C∇^α y₂` with
/// `V = ¼ y₁² + ½ y₂²`, for every computed `k`.
pub fn certificate_sides(run: &OptimizerRun) -> Result<Vec<Sides>> {
    let y = shifted_states(run)?;
    let v = y.try_map(|row| Ok(0.25 * row[0] * row[0] + 0.5 * row[1] * row[1]))?;
    (y.base()..=y.last_index())
        .map(|k| {
            let dy = caputo_difference(&y, run.alpha, k)?;
            let lhs = caputo_difference(&v, run.alpha, k)?[0];
            let row = y.at(k)?;
            Ok(Sides { lhs, rhs: 0.5 * row[0] * dy[0] + row[1] * dy[1] })
        })
        .collect()
}

/// Gap report of [`certificate_sides`] at [`CERTIFICATE_TOLERANCE`].
pub fn certificate_check(run: &OptimizerRun) -> Result<GapReport> {
    let sides = certificate_sides(run)?;
    Ok(GapReport::from_sides(run.base, &sides, CERTIFICATE_TOLERANCE))
}

/// `-ρ [2y₁² + 3y₁ - 2y₂]²` for every computed `k`. Along a run of
/// [`valley_objective`] this equals the right-hand side of the certificate.
pub fn descent_square(run: &OptimizerRun) -> Result<Vec<f64>> {
    let y = shifted_states(run)?;
    (y.base()..=y.last_index())
        .map(|k| {
            let row = y.at(k)?;
            let s = 2.0 * row[0] * row[0] + 3.0 * row[0] - 2.0 * row[1];
            Ok(-run.rho * s * s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn valley_values() {
        let f = valley_objective();
        let mut g = [0.0; 2];
        assert_eq!(f.evaluate(&[1.0, 1.0]), 0.0);
        f.gradient(&[1.0, 1.0], &mut g);
        assert_eq!(g, [0.0, 0.0]);
        assert_eq!(f.evaluate(&[0.0, 0.0]), 1.0);
        f.gradient(&[0.0, 0.0], &mut g);
        assert_eq!(g, [-2.0, 0.0]);
        assert_eq!(f.evaluate(&[2.0, -1.0]), 51.0);
        f.gradient(&[2.0, -1.0], &mut g);
        assert_eq!(g, [82.0, -20.0]);
        assert_eq!(f.optimum(), Some(vec![1.0, 1.0]));
    }

    #[test]
    fn quadratic_single_step() {
        let f = Quadratic::new(Matrix::diagonal(&[2.0]), vec![0.0]).unwrap();
        let run = fractional_gradient_descent(f, 0.5, 0.25, &[1.0], 1).unwrap();
        assert_relative_eq!(run.trajectory.last_state()[0], 1.0 / 1.5, epsilon = 1e-12);
        assert_eq!(run.objective_values.len(), 2);
        assert_eq!(run.objective_values[0], 1.0);
    }

    #[test]
    fn stationary_start_is_constant() {
        let run = fractional_gradient_descent(valley_objective(), 0.8, 2.0, &[1.0, 1.0], 20).unwrap();
        assert!(run.trajectory.states().all(|(_, x)| x == [1.0, 1.0]));
        let report = certificate_check(&run).unwrap();
        assert_eq!(report.gaps.len(), 20);
        assert!(report.gaps.iter().all(|&g| g == 0.0));
    }

    #[test]
    fn single_step_certificate() {
        let run = fractional_gradient_descent(valley_objective(), 0.8, 2.0, &[2.0, -1.0], 1).unwrap();
        let report = certificate_check(&run).unwrap();
        assert_eq!(report.gaps.len(), 1);
        assert!(report.is_clean());
    }

    #[test]
    fn parameter_checks() {
        let f = valley_objective();
        assert!(matches!(fractional_gradient_descent(f, 0.8, 0.0, &[2.0, -1.0], 5), Err(Error::InvalidParameter(_))));
        assert_eq!(fractional_gradient_descent(f, 1.0, 2.0, &[2.0, -1.0], 5).err(), Some(Error::OrderOutOfRange(1.0)));
        assert!(Quadratic::new(Matrix::from_row_major(2, 2, vec![1.0, 2.0, 0.0, 1.0]).unwrap(), vec![0.0; 2]).is_err());
    }

    #[test]
    fn certificate_needs_two_dimensions() {
        let f = Quadratic::new(Matrix::diagonal(&[1.0]), vec![0.0]).unwrap();
        let run = fractional_gradient_descent(f, 0.5, 1.0, &[1.0], 3).unwrap();
        assert!(matches!(certificate_check(&run), Err(Error::DimensionMismatch { .. })));
    }
}
