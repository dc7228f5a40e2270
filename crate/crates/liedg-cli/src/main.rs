//! `liedg` — run the energy-preserving Lie-group integrators from the
//! command line and write deterministic CSV files.
//!
//! Exit codes: `0` success (including `--help`/`--version`), `2` runtime
//! failure (solver breakdown, broken invariants, I/O), `3` invalid
//! invocation or experiment spec.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use nalgebra::{Matrix3, Vector3};

use liedg::harness::{
    compare_methods, convergence_study, csv, parse, run_trajectory, CompareSpec, ConvergenceSpec,
    ExperimentSpec, MethodId, ProblemId,
};
use liedg::Error;

#[derive(Parser)]
#[command(
    name = "liedg",
    version,
    about = "Energy-preserving one-step integrators on Lie groups",
    subcommand_required = true,
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one trajectory and write its time series as CSV.
    Simulate(SimulateArgs),
    /// Run a convergence study over a decreasing list of step sizes.
    Converge(ConvergeArgs),
    /// Run several methods on one problem and tabulate their energy errors.
    Compare(CompareArgs),
}

/// Flags shared by every subcommand.
#[derive(Args)]
struct CommonArgs {
    /// Problem to integrate: sphere-rb, quat-rb, or pseudo-rigid.
    #[arg(long)]
    problem: ProblemId,
    /// End of the time interval; the run takes round(t_end / h) steps.
    #[arg(long = "t-end")]
    t_end: f64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Fixed-point solver tolerance.
    #[arg(long, default_value_t = 1e-14)]
    tol: f64,
    /// Fixed-point solver iteration budget per step.
    #[arg(long, default_value_t = 2000)]
    max_iter: usize,
    /// Inertia-like diagonal `d1,d2,d3`: body inertia for the rigid-body
    /// problems, reference inertia for pseudo-rigid.
    #[arg(long, value_parser = vec3_value)]
    inertia: Option<Vector3<f64>>,
    /// Elastic moduli `lambda,mu` (pseudo-rigid only).
    #[arg(long, value_parser = lame_value)]
    lame: Option<LamePair>,
    /// Initial state override, comma-separated: 3 values (sphere momentum),
    /// 4 values (attitude quaternion), or 3/9 values (pseudo-rigid momentum
    /// matrix, diagonal or row-major).
    #[arg(long, value_parser = reals_value)]
    p0: Option<Reals>,
    /// Initial deformation gradient, 3 (diagonal) or 9 (row-major) values
    /// (pseudo-rigid only).
    #[arg(long, value_parser = mat3_value)]
    f0: Option<Matrix3<f64>>,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Integration method: dg-gonzalez, dg-avf, colloc4, sym-alpha0, or heun.
    #[arg(long)]
    method: MethodId,
    /// Step size.
    #[arg(long)]
    h: f64,
}

#[derive(Args)]
struct ConvergeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Method under study.
    #[arg(long)]
    method: MethodId,
    /// Strictly decreasing step sizes `h1,h2,...` (at least four).
    #[arg(long = "h-list", value_parser = h_list_value)]
    h_list: HList,
    /// Reference method (default: colloc4 where supported, else the
    /// studied method).
    #[arg(long = "ref-method")]
    ref_method: Option<MethodId>,
    /// Reference step size (default: smallest h / 8).
    #[arg(long = "ref-h")]
    ref_h: Option<f64>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated methods to run side by side, e.g.
    /// `dg-gonzalez,sym-alpha0`.
    #[arg(long, value_parser = methods_value)]
    methods: MethodList,
    /// Step size shared by all runs.
    #[arg(long)]
    h: f64,
}

// Newtype wrappers so clap treats each comma-separated list as a single
// value rather than a repeated flag.
#[derive(Clone)]
struct Reals(Vec<f64>);
#[derive(Clone)]
struct HList(Vec<f64>);
#[derive(Clone)]
struct MethodList(Vec<MethodId>);
#[derive(Clone)]
struct LamePair(f64, f64);

fn vec3_value(s: &str) -> Result<Vector3<f64>, String> {
    parse::parse_vec3(s).map_err(|e| e.to_string())
}

fn mat3_value(s: &str) -> Result<Matrix3<f64>, String> {
    parse::parse_mat3(s).map_err(|e| e.to_string())
}

fn reals_value(s: &str) -> Result<Reals, String> {
    parse::parse_real_list(s).map(Reals).map_err(|e| e.to_string())
}

fn h_list_value(s: &str) -> Result<HList, String> {
    parse::parse_h_list(s).map(HList).map_err(|e| e.to_string())
}

fn lame_value(s: &str) -> Result<LamePair, String> {
    parse::parse_lame(s)
        .map(|(l, m)| LamePair(l, m))
        .map_err(|e| e.to_string())
}

fn methods_value(s: &str) -> Result<MethodList, String> {
    s.split(',')
        .map(|entry| entry.trim().parse::<MethodId>())
        .collect::<Result<Vec<_>, _>>()
        .map(MethodList)
        .map_err(|e| e.to_string())
}

impl CommonArgs {
    fn experiment(&self, method: MethodId, h: f64) -> ExperimentSpec {
        let mut spec = ExperimentSpec::new(self.problem, method, h, self.t_end);
        spec.solver_tol = self.tol;
        spec.max_iter = self.max_iter;
        spec.inertia = self.inertia;
        spec.lame = self.lame.as_ref().map(|l| (l.0, l.1));
        spec.initial_p = self.p0.as_ref().map(|r| r.0.clone());
        spec.initial_f = self.f0;
        spec
    }

    fn write(&self, contents: &str) -> Result<(), Error> {
        std::fs::write(&self.out, contents)?;
        Ok(())
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Simulate(args) => {
            let spec = args.common.experiment(args.method, args.h);
            let traj = run_trajectory(&spec)?;
            args.common.write(&csv::trajectory_csv(&traj))?;
            println!(
                "wrote {} ({} records, max |H_err| = {:.3e})",
                args.common.out.display(),
                traj.records.len(),
                traj.max_abs_energy_err()
            );
        }
        Command::Converge(args) => {
            let h = args.h_list.0[0];
            let mut spec = ConvergenceSpec::new(
                args.common.experiment(args.method, h),
                args.h_list.0.clone(),
            );
            spec.reference_method = args.ref_method;
            spec.reference_h = args.ref_h;
            let study = convergence_study(&spec)?;
            args.common.write(&csv::convergence_csv(&study))?;
            println!(
                "wrote {} ({} step sizes, slope = {:.4})",
                args.common.out.display(),
                study.rows.len(),
                study.slope
            );
        }
        Command::Compare(args) => {
            let first = args.methods.0.first().copied().ok_or_else(|| {
                Error::InvalidConfig("compare needs at least one method".into())
            })?;
            let spec = CompareSpec {
                base: args.common.experiment(first, args.h),
                methods: args.methods.0.clone(),
            };
            let table = compare_methods(&spec)?;
            args.common.write(&csv::compare_csv(&table))?;
            println!(
                "wrote {} ({} methods, {} rows)",
                args.common.out.display(),
                table.methods.len(),
                table.t.len()
            );
        }
    }
    Ok(())
}

/// `3` for errors in the experiment description itself, `2` for failures
/// while running a valid one.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::InvalidConfig(_)
        | Error::Parse(_)
        | Error::UnsupportedKind { .. }
        | Error::KindMismatch { .. } => 3,
        Error::StepFailed { source, .. } => exit_code_for(source),
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                clap::error::ErrorKind::DisplayHelp
                | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
