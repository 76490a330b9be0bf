//! Diagnostic dumps: assembled matrix in coordinate text form, and the
//! fictitious-value table in a line-oriented listing.

use std::fs::File;
use std::io::{BufWriter, Write};

use mib_elastic::assembly::SparseSystem;
use mib_elastic::fictitious::RepTable;
use mib_elastic::grid::GridSpec;

/// One `row col value` line per nonzero, zero-based indices.
pub fn write_matrix(path: &str, sys: &SparseSystem) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for r in 0..sys.matrix.n {
        let (cols, vals) = sys.matrix.row(r);
        for (c, v) in cols.iter().zip(vals) {
            writeln!(w, "{} {} {:.17e}", r, c, v)?;
        }
    }
    w.flush()
}

/// Ghost-value listing: one `rep` line per (node, component) followed by its
/// weighted terms and jump-data constant.
pub fn write_reps(path: &str, grid: &GridSpec, reps: &RepTable) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for (&(flat, comp), rep) in reps.iter() {
        let (i, j) = (flat % grid.nx, flat / grid.nx);
        writeln!(w, "rep {} {} u{} constant {:.17e}", i, j, comp + 1, rep.constant)?;
        for &(tf, tc, tw) in &rep.terms {
            writeln!(w, "  term {} {} u{} {:.17e}", tf % grid.nx, tf / grid.nx, tc + 1, tw)?;
        }
    }
    w.flush()
}
