//! End-to-end solve of one case on one grid: geometry → classification →
//! ghost representations → assembly → Krylov solve → error norms.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::assembly::{assemble, AssemblyInputs, SparseSystem};
use crate::fictitious::{build_rep_table, RepStats, RepTable};
use crate::geometry::{find_crossings, Crossings};
use crate::grid::{classify_nodes, Classification, GridSpec};
use crate::mms::Case;
use crate::norms::{error_norms, ErrorNorms};
use crate::solver::{bicgstab, SolveStats, SolverConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Grid,
    Geometry,
    Classification,
    Reps,
    Assembly,
    Solve,
}

impl Stage {
    pub fn label(&self) -> &'static str {
        match self {
            Stage::Grid => "grid",
            Stage::Geometry => "geometry",
            Stage::Classification => "classification",
            Stage::Reps => "fictitious",
            Stage::Assembly => "assembly",
            Stage::Solve => "solve",
        }
    }
}

/// A pipeline failure, labeled with the stage it came from.
#[derive(Clone, Debug)]
pub struct PipelineError {
    pub stage: Stage,
    pub message: String,
    /// Best iterate when the solve stage failed to converge.
    pub partial: Option<Vec<f64>>,
}

impl core::fmt::Display for PipelineError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "[{}] {}", self.stage.label(), self.message)
    }
}

fn err(stage: Stage, message: impl core::fmt::Display) -> PipelineError {
    PipelineError { stage, message: format!("{message}"), partial: None }
}

/// Result of one case/grid run.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub nx: usize,
    pub ny: usize,
    /// Component-major solution vector (all u1, then all u2).
    pub solution: Vec<f64>,
    pub norms_u1: ErrorNorms,
    pub norms_u2: ErrorNorms,
    pub solve: SolveStats,
    pub rep_stats: RepStats,
    pub crossings: usize,
    pub irregular5: usize,
    pub irregular9: usize,
    pub multi_cross_segments: usize,
}

/// Intermediate products, exposed so drivers can assemble in parallel or dump
/// diagnostics without re-running the geometry.
pub struct Prepared {
    pub grid: GridSpec,
    pub class: Classification,
    pub crossings: Crossings,
    pub reps: RepTable,
}

/// Run geometry, classification and ghost construction for a case.
pub fn prepare(case: &Case, nx: usize, ny: usize) -> Result<Prepared, PipelineError> {
    let (a, b, c, d) = case.bounds;
    let grid = GridSpec::new(a, b, c, d, nx, ny).map_err(|e| err(Stage::Grid, e))?;
    let class = classify_nodes(&grid, &case.curve);
    let crossings = find_crossings(&case.curve, &grid).map_err(|e| err(Stage::Geometry, e))?;
    let reps = build_rep_table(&grid, &class, &crossings.list, case)
        .map_err(|e| err(Stage::Reps, e))?;
    Ok(Prepared { grid, class, crossings, reps })
}

/// Exact nodal solution in the unknown ordering, classified per node.
pub fn exact_solution(case: &Case, grid: &GridSpec, class: &Classification) -> Vec<f64> {
    let n = grid.n_nodes();
    let mut u = vec![0.0; 2 * n];
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            let (x, y) = grid.node(i, j);
            let e = case.eval_exact(class.side(i, j), x, y);
            u[grid.flat(i, j)] = e.u1.v;
            u[n + grid.flat(i, j)] = e.u2.v;
        }
    }
    u
}

/// Norms of a solution vector against the exact nodal field, per component.
pub fn solution_norms(
    case: &Case,
    grid: &GridSpec,
    class: &Classification,
    solution: &[f64],
) -> (ErrorNorms, ErrorNorms) {
    let n = grid.n_nodes();
    let exact = exact_solution(case, grid, class);
    (error_norms(&solution[..n], &exact[..n]), error_norms(&solution[n..], &exact[n..]))
}

/// Full pipeline with serial assembly.
pub fn run_case(
    case: &Case,
    nx: usize,
    ny: usize,
    cfg: &SolverConfig,
) -> Result<RunOutput, PipelineError> {
    let prep = prepare(case, nx, ny)?;
    let inp = AssemblyInputs { grid: &prep.grid, class: &prep.class, reps: &prep.reps, case };
    let sys = assemble(&inp).map_err(|e| err(Stage::Assembly, e))?;
    finish_run(case, &prep, &sys, cfg)
}

/// Solve an already-assembled system and collect norms and diagnostics.
pub fn finish_run(
    case: &Case,
    prep: &Prepared,
    sys: &SparseSystem,
    cfg: &SolverConfig,
) -> Result<RunOutput, PipelineError> {
    let (solution, solve) = match bicgstab(&sys.matrix, &sys.rhs, cfg) {
        Ok(pair) => pair,
        Err((best, e)) => {
            return Err(PipelineError {
                stage: Stage::Solve,
                message: format!("{e}"),
                partial: Some(best),
            })
        }
    };
    let (norms_u1, norms_u2) = solution_norms(case, &prep.grid, &prep.class, &solution);
    Ok(RunOutput {
        nx: prep.grid.nx,
        ny: prep.grid.ny,
        solution,
        norms_u1,
        norms_u2,
        solve,
        rep_stats: prep.reps.stats,
        crossings: prep.crossings.list.len(),
        irregular5: prep.class.count_irregular5(),
        irregular9: prep.class.count_irregular9(),
        multi_cross_segments: prep.crossings.multi_cross_segments.len(),
    })
}
