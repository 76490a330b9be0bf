use std::process::ExitCode;

use mib_elastic::mms::{Case, CaseId};
use mib_elastic::pipeline::{PipelineError, Stage};

use mib_elastic_cli::config::{self, RunConfig, USAGE};
use mib_elastic_cli::report::{ConvergenceReport, ReportRow};
use mib_elastic_cli::{run_level, thread_count};

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let Some((sub, rest)) = args.split_first() else {
        eprint!("{USAGE}");
        return ExitCode::from(1);
    };
    match sub.as_str() {
        "run" => dispatch(rest, cmd_run),
        "converge" => dispatch(rest, cmd_converge),
        "list" => {
            for id in CaseId::all() {
                let case = Case::from_id(id);
                let grids = Case::default_grids(id)
                    .iter()
                    .map(|(nx, ny)| format!("{nx}x{ny}"))
                    .collect::<Vec<_>>()
                    .join(",");
                println!("{:<3} domain {:?}  grids {}", case.name, case.bounds, grids);
            }
            ExitCode::SUCCESS
        }
        "--help" | "-h" | "help" => {
            print!("{USAGE}");
            ExitCode::SUCCESS
        }
        other => {
            eprintln!("unknown subcommand '{other}'");
            eprint!("{USAGE}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(args: &[String], f: fn(RunConfig) -> ExitCode) -> ExitCode {
    match config::parse(args) {
        Ok(cfg) => f(cfg),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn exit_for(err: &PipelineError) -> ExitCode {
    eprintln!("error: {err}");
    match err.stage {
        Stage::Solve => ExitCode::from(2),
        _ => ExitCode::from(3),
    }
}

fn emit(report: &ConvergenceReport, csv: &Option<String>) -> std::io::Result<()> {
    print!("{}", report.table());
    if let Some(path) = csv {
        std::fs::write(path, report.csv())?;
        eprintln!("wrote {path}");
    }
    Ok(())
}

fn cmd_run(cfg: RunConfig) -> ExitCode {
    let Some((nx, ny)) = cfg.grid else {
        eprintln!("error: run needs --grid NXxNY");
        return ExitCode::from(1);
    };
    let case = match config::build_case(&cfg) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let threads = thread_count();
    match run_level(&case, nx, ny, &cfg.solver, cfg.precond, threads, &cfg.dumps) {
        Ok(run) => {
            let report = ConvergenceReport {
                case: case.name.to_string(),
                rows: vec![ReportRow {
                    nx,
                    ny,
                    u1: run.output.norms_u1,
                    u2: run.output.norms_u2,
                    solve: run.output.solve,
                    seconds: run.seconds,
                }],
            };
            if emit(&report, &cfg.csv).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => exit_for(&e),
    }
}

fn cmd_converge(cfg: RunConfig) -> ExitCode {
    let case = match config::build_case(&cfg) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let grids =
        if cfg.grids.is_empty() { Case::default_grids(cfg.case_id) } else { cfg.grids.clone() };
    let threads = thread_count();
    let mut report = ConvergenceReport { case: case.name.to_string(), rows: Vec::new() };
    let mut failure: Option<PipelineError> = None;
    for (nx, ny) in grids {
        match run_level(&case, nx, ny, &cfg.solver, cfg.precond, threads, &cfg.dumps) {
            Ok(run) => report.rows.push(ReportRow {
                nx,
                ny,
                u1: run.output.norms_u1,
                u2: run.output.norms_u2,
                solve: run.output.solve,
                seconds: run.seconds,
            }),
            Err(e) => {
                // Emit the partial table, then report the failed level.
                eprintln!("level {nx}x{ny} failed: {e}");
                failure = Some(e);
                break;
            }
        }
    }
    if emit(&report, &cfg.csv).is_err() {
        return ExitCode::from(1);
    }
    match failure {
        None => ExitCode::SUCCESS,
        Some(e) => exit_for(&e),
    }
}
