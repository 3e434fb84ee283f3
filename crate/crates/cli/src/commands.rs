use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use nabla_fc_core::kernel::{gl_diff_weights, gl_sum_weights};
use nabla_fc_core::lyapunov::{run_property_suite, OperatorFamily, SuiteConfig, SuiteReport};
use nabla_fc_core::operators::{fixed_memory_difference, gl_modified_difference, nabla_difference, DefinitionKind};
use nabla_fc_core::optimizer::{optimizer_simulator, run_from_simulator, valley_objective, OptimizerRun};
use nabla_fc_core::simulator::{BuiltinSystem, Simulator, SolverConfig, SystemSpec, Trajectory, VectorField};
use nabla_fc_core::{Matrix, SampledSignal};

use crate::args::{
    Command, DefinitionArg, DiffArgs, ExampleArgs, FamilyArg, OptimizeArgs, SimulateArgs, SolverArgs, SystemArg,
    VerifyArgs, WeightKindArg, WeightsArgs,
};
use crate::csvio::{self, csv_error, write_indexed, write_trajectory};
use crate::error::{CliError, CliResult};
use crate::manifest::{manifest_path, RunManifest};
use crate::plot::{self, Chart, Series};

pub const SEED_ENV: &str = "NABLA_FC_SEED";

pub fn dispatch(command: Command) -> CliResult<()> {
    match command {
        Command::Weights(args) => with_manifest("weights", &args, None, args.out.clone(), weights(&args)),
        Command::Diff(args) => with_manifest("diff", &args, None, args.out.clone(), diff(&args)),
        Command::Verify(args) => {
            let seed = seed_override()?.unwrap_or(args.seed);
            verify(VerifyArgs { seed, ..args })
        }
        Command::Simulate(args) => {
            let outputs = simulate(&args)?;
            write_manifest("simulate", &args, None, args.out.as_deref(), outputs)
        }
        Command::Optimize(args) => {
            let outputs = optimize(&args)?;
            write_manifest("optimize", &args, None, args.out.as_deref(), outputs)
        }
        Command::Example(args) => example(&args),
        Command::Replay(args) => replay(&RunManifest::read(&args.manifest)?),
    }
}

fn seed_override() -> CliResult<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{SEED_ENV}={text:?} is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

fn with_manifest<P: serde::Serialize>(
    command: &str,
    params: &P,
    seed: Option<u64>,
    out: Option<PathBuf>,
    result: CliResult<()>,
) -> CliResult<()> {
    result?;
    let outputs = out.iter().cloned().collect();
    write_manifest(command, params, seed, out.as_deref(), outputs)
}

/// Writes `<out>.manifest.json` when the primary output is a file.
fn write_manifest<P: serde::Serialize>(
    command: &str,
    params: &P,
    seed: Option<u64>,
    out: Option<&Path>,
    outputs: Vec<PathBuf>,
) -> CliResult<()> {
    match out {
        Some(path) => RunManifest::new(command, params, seed, outputs)?.write(&manifest_path(path)),
        None => Ok(()),
    }
}

/// Runs `body` against the named file or standard output.
fn emit(out: Option<&Path>, body: impl FnOnce(&mut dyn Write) -> csv::Result<()>) -> CliResult<()> {
    let label = out.unwrap_or(Path::new("<stdout>"));
    match out {
        Some(path) => {
            let file = File::create(path).map_err(CliError::io(path))?;
            let mut writer = BufWriter::new(file);
            body(&mut writer).map_err(csv_error(label))?;
            writer.flush().map_err(CliError::io(path))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock).map_err(csv_error(label))
        }
    }
}

fn weights(args: &WeightsArgs) -> CliResult<()> {
    if args.count == 0 {
        return Err(CliError::Usage("--count must be at least 1".into()));
    }
    if !args.alpha.is_finite() {
        return Err(CliError::Usage("--alpha must be finite".into()));
    }
    let table = match args.kind {
        WeightKindArg::Diff => gl_diff_weights(args.alpha, args.count)?,
        WeightKindArg::Sum => gl_sum_weights(args.alpha, args.count)?,
    };
    let header = ["j".to_string(), "weight".to_string()];
    let rows = table.values().iter().enumerate().map(|(j, &w)| (j as i64, vec![w]));
    emit(args.out.as_deref(), |w| write_indexed(w, &header, rows))
}

fn definition(arg: DefinitionArg) -> DefinitionKind {
    match arg {
        DefinitionArg::Gl | DefinitionArg::GlMod => DefinitionKind::GrunwaldLetnikov,
        DefinitionArg::Rl => DefinitionKind::RiemannLiouville,
        DefinitionArg::Caputo => DefinitionKind::Caputo,
    }
}

/// Evaluates the requested difference at every admissible point.
pub fn difference_rows(signal: &SampledSignal, args: &DiffArgs) -> CliResult<Vec<(i64, Vec<f64>)>> {
    let first = match args.definition {
        DefinitionArg::GlMod => signal.base() + 1,
        _ => signal.base(),
    };
    (first..=signal.last_index())
        .map(|k| {
            let value = match (args.definition, args.memory) {
                (DefinitionArg::GlMod, Some(_)) => {
                    return Err(CliError::Usage("--memory is not available with --def gl-mod".into()))
                }
                (DefinitionArg::GlMod, None) => gl_modified_difference(signal, args.alpha, k)?,
                (def, Some(memory)) => fixed_memory_difference(signal, args.alpha, memory, k, definition(def))?,
                (def, None) => nabla_difference(signal, args.alpha, k, definition(def))?,
            };
            Ok((k, value))
        })
        .collect()
}

pub fn read_signal(path: &Path, base: Option<i64>) -> CliResult<SampledSignal> {
    let (first, dimension, data) = csvio::read_signal_rows(path)?;
    let base = base.unwrap_or(first + 1);
    if base < first {
        return Err(CliError::Data(format!("base {base} precedes the first sample at k={first}")));
    }
    let points = data.len() / dimension;
    if base > first + points as i64 - 1 {
        return Err(CliError::Data(format!("base {base} lies past the last sample")));
    }
    Ok(SampledSignal::new(base, (base - first) as usize, dimension, data)?)
}

fn diff(args: &DiffArgs) -> CliResult<()> {
    let signal = read_signal(&args.input, args.base)?;
    let rows = difference_rows(&signal, args)?;
    let header = csvio::component_header("k", "value", signal.dimension());
    emit(args.out.as_deref(), |w| write_indexed(w, &header, rows))
}

pub fn suite_config(args: &VerifyArgs) -> SuiteConfig {
    let family = match args.family {
        FamilyArg::Standard => OperatorFamily::Standard,
        FamilyArg::FixedMemory => OperatorFamily::FixedMemory { memory: args.memory },
        FamilyArg::VariableOrder => OperatorFamily::VariableOrder { min: args.alpha_min, max: args.alpha_max },
    };
    SuiteConfig {
        trials: args.trials,
        max_len: args.max_len,
        alpha_range: (args.alpha_min, args.alpha_max),
        seed: args.seed,
        tolerance: args.tolerance,
        family,
        ..SuiteConfig::default()
    }
}

fn summary_table(report: &SuiteReport) -> String {
    let mut text = format!("{:<22} {:<7} {:>12} {:>10}\n", "kind", "def", "max gap", "violations");
    for p in &report.pairs {
        text.push_str(&format!(
            "{:<22} {:<7} {:>12.3e} {:>10}\n",
            p.kind.label(),
            p.definition.label(),
            p.max_gap,
            p.violations
        ));
    }
    text
}

/// `args.seed` is used as given; environment overrides happen in [`dispatch`].
fn verify(args: VerifyArgs) -> CliResult<()> {
    let report = run_property_suite(&suite_config(&args))?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| CliError::Data(e.to_string()))?;
    match &args.out {
        Some(path) => {
            std::fs::write(path, json + "\n").map_err(CliError::io(path))?;
            print!("{}", summary_table(&report));
        }
        None => println!("{json}"),
    }
    write_manifest("verify", &args, Some(args.seed), args.out.as_deref(), args.out.iter().cloned().collect())?;
    match report.total_violations() {
        0 => Ok(()),
        violations => Err(CliError::Violation { violations }),
    }
}

fn solver_config(args: &SolverArgs) -> SolverConfig {
    SolverConfig { tolerance: args.solver_tolerance, max_iterations: args.max_iterations, damping: args.damping }
}

pub fn build_system(system: SystemArg, matrix: Option<&[f64]>) -> CliResult<BuiltinSystem> {
    let matrix = match (system, matrix) {
        (SystemArg::Linear, None) => return Err(CliError::Usage("--system linear needs --matrix".into())),
        (SystemArg::Linear, Some(m)) => Some(Matrix::square(m.to_vec()).map_err(|e| match e {
            nabla_fc_core::Error::NonFinite => CliError::Usage("--matrix entries must be finite".into()),
            other => CliError::Usage(format!("--matrix: {other}")),
        })?),
        (_, Some(_)) => return Err(CliError::Usage("--matrix only applies to --system linear".into())),
        (_, None) => None,
    };
    Ok(BuiltinSystem::from_name(system.name(), matrix)?)
}

fn check_state(x0: &[f64], dimension: usize) -> CliResult<()> {
    if x0.len() != dimension {
        return Err(CliError::Usage(format!("--x0 has {} entries, the system has dimension {dimension}", x0.len())));
    }
    Ok(())
}

fn check_steps(steps: usize) -> CliResult<()> {
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    Ok(())
}

/// Steps the simulator; on failure keeps what was computed and reports the error.
fn drive<F: VectorField>(sim: &mut Simulator<F>, steps: usize) -> Option<nabla_fc_core::Error> {
    (0..steps).find_map(|_| sim.advance().err())
}

fn write_trajectory_file(out: Option<&Path>, traj: &Trajectory, failure: Option<&nabla_fc_core::Error>) -> CliResult<()> {
    emit(out, |w| {
        write_trajectory(&mut *w, traj)?;
        if let Some(e) = failure {
            let k = traj.last_index() + 1;
            writeln!(w, "# FAILED at k={k}: {e}")?;
        }
        Ok(())
    })
}

fn component_chart(title: &str, traj: &Trajectory) -> Chart {
    let series = (0..traj.dimension())
        .map(|i| Series {
            name: format!("x{}", i + 1),
            points: traj.states().map(|(k, s)| (k as f64, s[i])).collect(),
        })
        .collect();
    Chart { title: title.into(), x_label: "k".into(), y_label: "state".into(), series }
}

fn write_plot(path: &Path, charts: &[Chart]) -> CliResult<()> {
    std::fs::write(path, plot::render(charts)).map_err(CliError::io(path))
}

/// Returns the files written.
fn simulate(args: &SimulateArgs) -> CliResult<Vec<PathBuf>> {
    check_steps(args.steps)?;
    let field = build_system(args.system, args.matrix.as_deref())?;
    check_state(&args.x0, field.dimension())?;
    let spec = SystemSpec::new(field, args.alpha, args.base, args.x0.clone())?.with_solver(solver_config(&args.solver))?;
    let mut sim = Simulator::new(spec)?;
    let failure = drive(&mut sim, args.steps);
    let traj = sim.trajectory()?;
    write_trajectory_file(args.out.as_deref(), &traj, failure.as_ref())?;
    let mut outputs: Vec<PathBuf> = args.out.iter().cloned().collect();
    if let Some(path) = &args.plot {
        let title = format!("{} system, alpha = {}", args.system.name(), args.alpha);
        write_plot(path, &[component_chart(&title, &traj)])?;
        outputs.push(path.clone());
    }
    match failure {
        Some(e) => Err(e.into()),
        None => {
            eprintln!(
                "simulated {} steps; final state {:?}; max residual {:.3e}",
                traj.steps(),
                traj.last_state(),
                traj.max_residual
            );
            Ok(outputs)
        }
    }
}

fn optimizer_charts(run: &OptimizerRun) -> Vec<Chart> {
    let path = Series { name: "path".into(), points: run.trajectory.states().map(|(_, s)| (s[0], s[1])).collect() };
    let values = Series {
        name: "f".into(),
        points: run.trajectory.states().zip(&run.objective_values).map(|((k, _), &f)| (k as f64, f)).collect(),
    };
    vec![
        Chart {
            title: format!("search path, alpha = {}, rho = {}", run.alpha, run.rho),
            x_label: "x1".into(),
            y_label: "x2".into(),
            series: vec![path],
        },
        Chart { title: "objective".into(), x_label: "k".into(), y_label: "f(x(k))".into(), series: vec![values] },
    ]
}

fn objective_path(args: &OptimizeArgs) -> Option<PathBuf> {
    args.objective_out.clone().or_else(|| args.out.as_ref().map(|p| p.with_extension("objective.csv")))
}

fn optimize(args: &OptimizeArgs) -> CliResult<Vec<PathBuf>> {
    check_steps(args.steps)?;
    if !(args.rho > 0.0 && args.rho.is_finite()) {
        return Err(CliError::Usage(format!("--rho must be positive, got {}", args.rho)));
    }
    check_state(&args.x0, 2)?;
    let mut sim = optimizer_simulator(valley_objective(), args.alpha, args.rho, &args.x0, solver_config(&args.solver))?;
    let failure = drive(&mut sim, args.steps);
    let run = run_from_simulator(&sim)?;
    write_trajectory_file(args.out.as_deref(), &run.trajectory, failure.as_ref())?;
    let mut outputs: Vec<PathBuf> = args.out.iter().cloned().collect();
    if let Some(path) = objective_path(args) {
        let header = ["k".to_string(), "f_value".to_string()];
        let rows = run.trajectory.states().zip(&run.objective_values).map(|((k, _), &f)| (k, vec![f]));
        emit(Some(&path), |w| write_indexed(w, &header, rows))?;
        outputs.push(path);
    }
    if let Some(path) = &args.plot {
        write_plot(path, &optimizer_charts(&run))?;
        outputs.push(path.clone());
    }
    match failure {
        Some(e) => Err(e.into()),
        None => {
            eprintln!(
                "ran {} steps; final point {:?}; f = {:e}",
                run.steps,
                run.trajectory.last_state(),
                run.objective_values.last().copied().unwrap_or(f64::NAN)
            );
            Ok(outputs)
        }
    }
}

pub const EXAMPLE_STEPS: [usize; 3] = [200, 200, 500];

fn default_solver() -> SolverArgs {
    let solver = SolverConfig::default();
    SolverArgs { solver_tolerance: solver.tolerance, max_iterations: solver.max_iterations, damping: solver.damping }
}

fn example(args: &ExampleArgs) -> CliResult<()> {
    std::fs::create_dir_all(&args.out_dir).map_err(CliError::io(&args.out_dir))?;
    let n = args.number;
    let steps = args.steps.unwrap_or(EXAMPLE_STEPS[usize::from(n) - 1]);
    let file = |ext: &str| args.out_dir.join(format!("example{n}.{ext}"));
    let csv = file("csv");
    let outputs = match n {
        1 | 2 => simulate(&SimulateArgs {
            system: if n == 1 { SystemArg::Example1 } else { SystemArg::Example2 },
            matrix: None,
            alpha: 0.8,
            base: 0,
            x0: vec![2.0, -1.0],
            steps,
            out: Some(csv.clone()),
            plot: Some(file("svg")),
            solver: default_solver(),
        })?,
        3 => optimize(&OptimizeArgs {
            alpha: 0.8,
            rho: 2.0,
            x0: vec![2.0, -1.0],
            steps,
            out: Some(csv.clone()),
            objective_out: Some(file("objective.csv")),
            plot: Some(file("svg")),
            solver: default_solver(),
        })?,
        _ => return Err(CliError::Usage(format!("no example {n}"))),
    };
    let recorded = ExampleArgs { steps: Some(steps), ..args.clone() };
    write_manifest("example", &recorded, None, Some(&csv), outputs)
}

/// Re-runs a recorded command with its recorded parameters.
pub fn replay(manifest: &RunManifest) -> CliResult<()> {
    match manifest.command.as_str() {
        "weights" => weights(&manifest.parameters_as()?),
        "diff" => diff(&manifest.parameters_as()?),
        "verify" => {
            let mut args: VerifyArgs = manifest.parameters_as()?;
            if let Some(seed) = manifest.seed {
                args.seed = seed;
            }
            verify(args)
        }
        "simulate" => simulate(&manifest.parameters_as()?).map(drop),
        "optimize" => optimize(&manifest.parameters_as()?).map(drop),
        "example" => example(&manifest.parameters_as()?),
        other => Err(CliError::Usage(format!("manifest names unknown command {other:?}"))),
    }
}
