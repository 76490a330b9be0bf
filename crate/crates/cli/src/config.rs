//! Run configuration: command-line flags over an optional key=value file.
//!
//! Flags mirror the file keys (`tol = 1e-12` in a file equals `--tol 1e-12`
//! on the command line); the command line wins where both appear.

use std::collections::BTreeMap;
use std::fmt;

use mib_elastic::material::{ElasticField, SideMaterial};
use mib_elastic::mms::{Case, CaseId};
use mib_elastic::solver::{Preconditioner, SolverConfig};

/// Preconditioner choice, resolved per level when `Auto`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PrecondChoice {
    /// ILU(0) normally; plain diagonal scaling when the case's shear modulus
    /// loses positivity somewhere (incomplete factors behave badly on weakly
    /// indefinite operators).
    Auto,
    Fixed(Preconditioner),
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Clone, Debug, Default)]
pub struct DumpPaths {
    pub matrix: Option<String>,
    pub reps: Option<String>,
}

/// Fully resolved configuration for one invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub case_id: CaseId,
    /// Explicit grid for `run`.
    pub grid: Option<(usize, usize)>,
    /// Grid ladder for `converge`; empty selects the case's published ladder.
    pub grids: Vec<(usize, usize)>,
    pub solver: SolverConfig,
    pub precond: PrecondChoice,
    pub csv: Option<String>,
    pub dumps: DumpPaths,
    /// Optional overrides for the constant-material cases (4 and 5 take
    /// their parameters from case 1a unless told otherwise).
    pub material_override: Option<(f64, f64, f64, f64)>, // mu+, nu+, mu-, nu-
}

/// The converge/run default solver setup: residual well below the scheme
/// error on the finest published grids, preconditioned, with two
/// iterative-refinement passes. `--tol`, `--max-iter` and `--precond`
/// override.
pub fn default_solver() -> SolverConfig {
    SolverConfig { rel_tol: 1e-12, max_iter: 0, precond: Preconditioner::Ilu0, refine_steps: 2 }
}

pub const USAGE: &str = "\
mibelast — matched interface and boundary solver for 2D elasticity interface problems

USAGE:
    mibelast run --case <id> --grid NXxNY [options]
    mibelast converge --case <id> [--grids 20,40,80,160,320] [options]
    mibelast list

Cases: 1a 1b 1c 2a 2b 2c 3a 3b 4 5 6 7 8

OPTIONS:
    --config PATH        key=value file; flags given here override it
    --tol T              solver relative residual target (default 1e-12)
    --max-iter K         solver iteration cap (default 20·n)
    --precond P          auto|none|jacobi|ilu (default auto: ILU(0), or
                         diagonal scaling where the shear modulus loses
                         positivity)
    --csv PATH           write the report as CSV
    --dump-matrix PATH   write the assembled matrix as 'row col value' lines
    --dump-reps PATH     write the fictitious-value table
    --mu-plus V --nu-plus V --mu-minus V --nu-minus V
                         override constant material parameters
    --grids LIST         comma-separated sizes: '20,40' (square) or '40x30,80x60'

Environment: MIB_THREADS caps assembly parallelism.

Exit codes: 0 success, 2 solver did not converge, 3 geometry/classification failure.
";

fn parse_grid(s: &str) -> Result<(usize, usize), ConfigError> {
    if let Some((a, b)) = s.split_once('x') {
        let nx = a.trim().parse().map_err(|_| bad(format!("bad grid '{s}'")))?;
        let ny = b.trim().parse().map_err(|_| bad(format!("bad grid '{s}'")))?;
        Ok((nx, ny))
    } else {
        let n = s.trim().parse().map_err(|_| bad(format!("bad grid '{s}'")))?;
        Ok((n, n))
    }
}

fn parse_grids(s: &str) -> Result<Vec<(usize, usize)>, ConfigError> {
    s.split(',').filter(|t| !t.trim().is_empty()).map(parse_grid).collect()
}

fn parse_bool(s: &str) -> Result<bool, ConfigError> {
    match s {
        "yes" | "true" | "1" | "on" => Ok(true),
        "no" | "false" | "0" | "off" => Ok(false),
        other => Err(bad(format!("expected yes/no, got '{other}'"))),
    }
}

/// Key=value file: one pair per line, '#' comments.
fn parse_config_file(path: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| bad(format!("cannot read {path}: {e}")))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| bad(format!("{path}:{}: expected key = value", lineno + 1)))?;
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Parse the arguments after the subcommand. Flags override file keys.
pub fn parse(args: &[String]) -> Result<RunConfig, ConfigError> {
    let mut flags: BTreeMap<String, String> = BTreeMap::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let key = arg
            .strip_prefix("--")
            .ok_or_else(|| bad(format!("unexpected argument '{arg}'")))?;
        let val = it.next().ok_or_else(|| bad(format!("--{key} needs a value")))?;
        flags.insert(key.to_string(), val.clone());
    }

    let mut merged = match flags.get("config") {
        Some(path) => parse_config_file(path)?,
        None => BTreeMap::new(),
    };
    for (k, v) in flags {
        if k != "config" {
            merged.insert(k, v);
        }
    }

    let case_name = merged.get("case").ok_or_else(|| bad("--case is required"))?;
    let case_id =
        CaseId::parse(case_name).ok_or_else(|| bad(format!("unknown case '{case_name}'")))?;

    let mut solver = default_solver();
    if let Some(t) = merged.get("tol") {
        solver.rel_tol = t.parse().map_err(|_| bad(format!("bad --tol '{t}'")))?;
        if !(solver.rel_tol > 0.0 && solver.rel_tol < 1.0) {
            return Err(bad("--tol must be in (0, 1)"));
        }
    }
    if let Some(k) = merged.get("max-iter") {
        solver.max_iter = k.parse().map_err(|_| bad(format!("bad --max-iter '{k}'")))?;
    }
    let mut precond = PrecondChoice::Auto;
    if let Some(p) = merged.get("precond") {
        precond = match p.as_str() {
            "auto" => PrecondChoice::Auto,
            "none" => PrecondChoice::Fixed(Preconditioner::None),
            "jacobi" => PrecondChoice::Fixed(Preconditioner::Jacobi),
            "ilu" | "ilu0" => PrecondChoice::Fixed(Preconditioner::Ilu0),
            other => return Err(bad(format!("unknown preconditioner '{other}'"))),
        };
    }
    // Alternative spelling for plain diagonal scaling.
    if let Some(b) = merged.get("diag-precond") {
        precond = PrecondChoice::Fixed(if parse_bool(b)? {
            Preconditioner::Jacobi
        } else {
            Preconditioner::None
        });
    }

    let material_override = match (
        merged.get("mu-plus"),
        merged.get("nu-plus"),
        merged.get("mu-minus"),
        merged.get("nu-minus"),
    ) {
        (None, None, None, None) => None,
        (Some(mp), Some(np), Some(mm), Some(nm)) => Some((
            mp.parse().map_err(|_| bad("bad --mu-plus"))?,
            np.parse().map_err(|_| bad("bad --nu-plus"))?,
            mm.parse().map_err(|_| bad("bad --mu-minus"))?,
            nm.parse().map_err(|_| bad("bad --nu-minus"))?,
        )),
        _ => return Err(bad("material override needs all of --mu-plus --nu-plus --mu-minus --nu-minus")),
    };

    Ok(RunConfig {
        case_id,
        grid: merged.get("grid").map(|g| parse_grid(g)).transpose()?,
        grids: merged.get("grids").map(|g| parse_grids(g)).transpose()?.unwrap_or_default(),
        solver,
        precond,
        csv: merged.get("csv").cloned(),
        dumps: DumpPaths {
            matrix: merged.get("dump-matrix").cloned(),
            reps: merged.get("dump-reps").cloned(),
        },
        material_override,
    })
}

/// Materialize the case, applying any constant-material override.
pub fn build_case(cfg: &RunConfig) -> Result<Case, ConfigError> {
    let case = Case::from_id(cfg.case_id);
    match cfg.material_override {
        None => Ok(case),
        Some((mp, np, mm, nm)) => {
            let plus = SideMaterial::constant(mp, np)
                .map_err(|e| bad(format!("plus material: {e}")))?;
            let minus = SideMaterial::constant(mm, nm)
                .map_err(|e| bad(format!("minus material: {e}")))?;
            Ok(case.with_field(ElasticField { plus, minus }))
        }
    }
}
