//! Harness around the solver core: configuration, threaded assembly,
//! convergence reports, CSV emission and diagnostic dumps.

pub mod config;
pub mod dump;
pub mod parallel;
pub mod report;

use std::time::Instant;

use mib_elastic::assembly::AssemblyInputs;
use mib_elastic::mms::Case;
use mib_elastic::pipeline::{finish_run, prepare, PipelineError, RunOutput};
use mib_elastic::solver::SolverConfig;

/// One case/grid run with timing, threaded assembly and optional dumps.
pub struct TimedRun {
    pub output: RunOutput,
    pub seconds: f64,
}

/// Resolve the automatic preconditioner choice for one level: ILU(0) unless
/// the shear modulus is nonpositive at some node of its own side, where an
/// incomplete factorization of the weakly indefinite operator converges far
/// worse than plain diagonal scaling.
pub fn resolve_precond(
    case: &Case,
    grid: &mib_elastic::grid::GridSpec,
    class: &mib_elastic::grid::Classification,
    choice: config::PrecondChoice,
) -> mib_elastic::solver::Preconditioner {
    match choice {
        config::PrecondChoice::Fixed(p) => p,
        config::PrecondChoice::Auto => {
            for j in 0..grid.ny {
                for i in 0..grid.nx {
                    let (x, y) = grid.node(i, j);
                    if case.field.eval(class.side(i, j), x, y).mu <= 0.0 {
                        return mib_elastic::solver::Preconditioner::Jacobi;
                    }
                }
            }
            mib_elastic::solver::Preconditioner::Ilu0
        }
    }
}

pub fn run_level(
    case: &Case,
    nx: usize,
    ny: usize,
    solver: &SolverConfig,
    precond: config::PrecondChoice,
    threads: usize,
    dumps: &config::DumpPaths,
) -> Result<TimedRun, PipelineError> {
    let start = Instant::now();
    let prep = prepare(case, nx, ny)?;
    let mut solver = *solver;
    solver.precond = resolve_precond(case, &prep.grid, &prep.class, precond);
    let solver = &solver;
    if !prep.crossings.multi_cross_segments.is_empty() {
        eprintln!(
            "warning: {} mesh segment(s) crossed more than once at {}x{} (geometry marginally resolved)",
            prep.crossings.multi_cross_segments.len(),
            nx,
            ny
        );
    }
    let inp = AssemblyInputs { grid: &prep.grid, class: &prep.class, reps: &prep.reps, case };
    let sys = parallel::assemble_threaded(&inp, threads).map_err(|e| PipelineError {
        stage: mib_elastic::pipeline::Stage::Assembly,
        message: e.to_string(),
        partial: None,
    })?;
    if let Some(path) = &dumps.matrix {
        dump::write_matrix(path, &sys).map_err(io_err)?;
    }
    if let Some(path) = &dumps.reps {
        dump::write_reps(path, &prep.grid, &prep.reps).map_err(io_err)?;
    }
    let output = finish_run(case, &prep, &sys, solver)?;
    Ok(TimedRun { output, seconds: start.elapsed().as_secs_f64() })
}

fn io_err(e: std::io::Error) -> PipelineError {
    PipelineError {
        stage: mib_elastic::pipeline::Stage::Assembly,
        message: format!("dump failed: {e}"),
        partial: None,
    }
}

/// Assembly thread count: `MIB_THREADS` caps the machine's parallelism;
/// unset or unparsable falls back to the available cores (at most 8).
pub fn thread_count() -> usize {
    let avail = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(8);
    match std::env::var("MIB_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        Some(cap) if cap >= 1 => avail.min(cap),
        _ => avail,
    }
}
