//! Central-difference discretization and sparse assembly.
//!
//! Unknowns are ordered component-major: all u1 values (row-major over the
//! grid), then all u2. Interior rows carry the 5-point second differences,
//! the 9-point cross difference, and (for variable coefficients) central
//! first differences; every stencil reference that lands on the other side
//! of the interface is replaced by its ghost representation, whose constant
//! moves to the right-hand side. Boundary rows are identity rows pinned to
//! the Dirichlet data, and references to boundary values fold into the
//! right-hand side, so interior equations never couple to pinned unknowns.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::fictitious::RepTable;
use crate::grid::{Classification, GridSpec};
use crate::mms::{Case, GoverningForm};

#[derive(Clone, Debug, PartialEq)]
pub enum AssembleError {
    /// An interior stencil references an opposite-side node with no ghost
    /// representation. Fatal; reported with the node's indices.
    MissingRep { node: (usize, usize), comp: usize },
    Internal(String),
}

impl core::fmt::Display for AssembleError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            AssembleError::MissingRep { node, comp } => {
                write!(f, "missing ghost representation at node {node:?} component {comp}")
            }
            AssembleError::Internal(m) => write!(f, "assembly error: {m}"),
        }
    }
}

/// Compressed sparse row matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Csr {
    pub n: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<u32>,
    pub data: Vec<f64>,
}

impl Csr {
    pub fn nnz(&self) -> usize {
        self.data.len()
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for r in 0..self.n {
            let mut acc = 0.0;
            for k in self.indptr[r]..self.indptr[r + 1] {
                acc += self.data[k] * x[self.indices[k] as usize];
            }
            y[r] = acc;
        }
    }

    pub fn row(&self, r: usize) -> (&[u32], &[f64]) {
        let (s, e) = (self.indptr[r], self.indptr[r + 1]);
        (&self.indices[s..e], &self.data[s..e])
    }

    pub fn max_row_nnz(&self) -> usize {
        (0..self.n).map(|r| self.indptr[r + 1] - self.indptr[r]).max().unwrap_or(0)
    }
}

/// Assembled linear system over the 2·nx·ny displacement unknowns.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSystem {
    pub matrix: Csr,
    pub rhs: Vec<f64>,
}

/// Everything one row needs; shared by the serial and threaded drivers.
pub struct AssemblyInputs<'a> {
    pub grid: &'a GridSpec,
    pub class: &'a Classification,
    pub reps: &'a RepTable,
    pub case: &'a Case,
}

/// One assembled matrix row: sorted (column, value) pairs plus its rhs entry.
pub type RowEntries = (Vec<(u32, f64)>, f64);

/// Build row `row` (unknown index, component-major). Pure; rows can be built
/// in any order or in parallel and concatenated.
pub fn assemble_row(inp: &AssemblyInputs<'_>, row: usize) -> Result<RowEntries, AssembleError> {
    let grid = inp.grid;
    let n = grid.n_nodes();
    let comp = row / n;
    let flat = row % n;
    let (i, j) = (flat % grid.nx, flat / grid.nx);
    let (x, y) = grid.node(i, j);

    if grid.is_boundary(i, j) {
        let bv = inp.case.eval_boundary(x, y);
        let val = if comp == 0 { bv.0 } else { bv.1 };
        return Ok((vec![(row as u32, 1.0)], val));
    }

    let side = inp.class.side(i, j);
    let m = inp.case.field.eval(side, x, y);
    let (f1, f2) = inp.case.eval_force(side, x, y);

    let mut cols: BTreeMap<u32, f64> = BTreeMap::new();
    let mut rhs;

    let hx = grid.hx();
    let hy = grid.hy();
    let ixx = 1.0 / (hx * hx);
    let iyy = 1.0 / (hy * hy);
    let ixy = 1.0 / (4.0 * hx * hy);
    let ix = 1.0 / (2.0 * hx);
    let iy = 1.0 / (2.0 * hy);

    // Stencil references; cross-side ones go through the ghost table.
    let add = |cols: &mut BTreeMap<u32, f64>,
                   rhs: &mut f64,
                   di: i32,
                   dj: i32,
                   c: usize,
                   w: f64|
     -> Result<(), AssembleError> {
        if w == 0.0 {
            return Ok(());
        }
        let (ni, nj) = ((i as i32 + di) as usize, (j as i32 + dj) as usize);
        let nflat = grid.flat(ni, nj);
        let push = |cols: &mut BTreeMap<u32, f64>, rhs: &mut f64, fl: usize, cc: usize, wt: f64| {
            let (ti, tj) = (fl % grid.nx, fl / grid.nx);
            if grid.is_boundary(ti, tj) {
                let bv = inp.case.eval_boundary(grid.x(ti), grid.y(tj));
                *rhs -= wt * if cc == 0 { bv.0 } else { bv.1 };
            } else {
                *cols.entry((cc * n + fl) as u32).or_insert(0.0) += wt;
            }
        };
        if inp.class.side(ni, nj) == side {
            push(cols, rhs, nflat, c, w);
        } else {
            let rep = inp
                .reps
                .get(nflat, c)
                .ok_or(AssembleError::MissingRep { node: (ni, nj), comp: c })?;
            for &(tf, tc, tw) in &rep.terms {
                push(cols, rhs, tf, tc, w * tw);
            }
            *rhs -= w * rep.constant;
        }
        Ok(())
    };

    // (cxx, cyy, cxy on the other component, first-derivative terms, rhs)
    let (cxx, cyy, cxy, rhs0);
    let mut first_order: [(usize, f64, f64); 2] = [(0, 0.0, 0.0); 2]; // (comp, wx, wy)
    match inp.case.form {
        GoverningForm::HomogeneousScaled => {
            let nu = m.nu;
            if comp == 0 {
                cxx = 2.0 * (1.0 - nu);
                cyy = 1.0 - 2.0 * nu;
            } else {
                cxx = 1.0 - 2.0 * nu;
                cyy = 2.0 * (1.0 - nu);
            }
            cxy = 1.0;
            let force = if comp == 0 { f1 } else { f2 };
            rhs0 = -force / (m.mu + m.lambda);
        }
        GoverningForm::Inhomogeneous => {
            if comp == 0 {
                cxx = m.lambda + 2.0 * m.mu;
                cyy = m.mu;
                // (λx+2μx)·u1_x + μy·u1_y + λx·u2_y + μy·u2_x
                first_order = [
                    (0, m.lambda_x + 2.0 * m.mu_x, m.mu_y),
                    (1, m.mu_y, m.lambda_x),
                ];
            } else {
                cxx = m.mu;
                cyy = m.lambda + 2.0 * m.mu;
                // μx·u1_y + λy·u1_x + μx·u2_x + (λy+2μy)·u2_y
                first_order = [
                    (0, m.lambda_y, m.mu_x),
                    (1, m.mu_x, m.lambda_y + 2.0 * m.mu_y),
                ];
            }
            cxy = m.lambda + m.mu;
            rhs0 = -if comp == 0 { f1 } else { f2 };
        }
    }
    rhs = rhs0;

    let other = 1 - comp;
    add(&mut cols, &mut rhs, -1, 0, comp, cxx * ixx)?;
    add(&mut cols, &mut rhs, 1, 0, comp, cxx * ixx)?;
    add(&mut cols, &mut rhs, 0, 0, comp, -2.0 * cxx * ixx)?;
    add(&mut cols, &mut rhs, 0, -1, comp, cyy * iyy)?;
    add(&mut cols, &mut rhs, 0, 1, comp, cyy * iyy)?;
    add(&mut cols, &mut rhs, 0, 0, comp, -2.0 * cyy * iyy)?;
    // Cross derivative of the other component on the diagonal corners.
    add(&mut cols, &mut rhs, 1, 1, other, cxy * ixy)?;
    add(&mut cols, &mut rhs, -1, -1, other, cxy * ixy)?;
    add(&mut cols, &mut rhs, -1, 1, other, -cxy * ixy)?;
    add(&mut cols, &mut rhs, 1, -1, other, -cxy * ixy)?;
    if inp.case.form == GoverningForm::Inhomogeneous {
        for (c, wx, wy) in first_order {
            add(&mut cols, &mut rhs, 1, 0, c, wx * ix)?;
            add(&mut cols, &mut rhs, -1, 0, c, -wx * ix)?;
            add(&mut cols, &mut rhs, 0, 1, c, wy * iy)?;
            add(&mut cols, &mut rhs, 0, -1, c, -wy * iy)?;
        }
    }

    Ok((cols.into_iter().collect(), rhs))
}

/// Serial assembly of the full system.
pub fn assemble(inp: &AssemblyInputs<'_>) -> Result<SparseSystem, AssembleError> {
    let n = 2 * inp.grid.n_nodes();
    let mut indptr = Vec::with_capacity(n + 1);
    let mut indices: Vec<u32> = Vec::new();
    let mut data: Vec<f64> = Vec::new();
    let mut rhs = vec![0.0; n];
    indptr.push(0);
    for row in 0..n {
        let (entries, r) = assemble_row(inp, row)?;
        for (c, v) in entries {
            indices.push(c);
            data.push(v);
        }
        rhs[row] = r;
        indptr.push(indices.len());
    }
    Ok(SparseSystem { matrix: Csr { n, indptr, indices, data }, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fictitious::build_rep_table;
    use crate::geometry::find_crossings;
    use crate::grid::classify_nodes;
    use crate::math::abs;
    use crate::mms::{CaseId, DisplacementField};

    fn build(case: &Case, nx: usize, ny: usize) -> (GridSpec, SparseSystem) {
        let (a, b, c, d) = case.bounds;
        let grid = GridSpec::new(a, b, c, d, nx, ny).unwrap();
        let class = classify_nodes(&grid, &case.curve);
        let crossings = find_crossings(&case.curve, &grid).unwrap();
        let reps = build_rep_table(&grid, &class, &crossings.list, case).unwrap();
        let inp = AssemblyInputs { grid: &grid, class: &class, reps: &reps, case };
        let sys = assemble(&inp).unwrap();
        (grid, sys)
    }

    /// Regular interior row of the scaled constant-coefficient form carries
    /// the textbook 5-point weights plus the corner coupling.
    #[test]
    fn regular_row_matches_hand_stencil() {
        let case = Case::from_id(CaseId::E1a);
        let (grid, sys) = build(&case, 21, 21);
        // Node far from the ellipse, exterior (minus side): (2, 2).
        let (i, j) = (2usize, 2usize);
        let n = grid.n_nodes();
        let row = grid.flat(i, j);
        let (cols, vals) = sys.matrix.row(row);
        let h2 = 1.0 / (grid.hx() * grid.hx());
        let nu = 0.24;
        let expect_center = -2.0 * (2.0 * (1.0 - nu) + (1.0 - 2.0 * nu)) * h2;
        let mut seen_center = false;
        for (c, v) in cols.iter().zip(vals) {
            if *c as usize == row {
                assert!(abs(v - expect_center) < 1e-9 * abs(expect_center));
                seen_center = true;
            }
            if *c as usize == n + grid.flat(i + 1, j + 1) {
                let want = 1.0 / (4.0 * grid.hx() * grid.hy());
                assert!(abs(v - want) < 1e-9 * want);
            }
        }
        assert!(seen_center);
    }

    /// Central differences are exact on linear fields: zero residual.
    #[test]
    fn linear_field_rows_have_zero_residual() {
        let case = Case::from_id(CaseId::E1a).with_displacement(DisplacementField::Linear, false);
        let (grid, sys) = build(&case, 21, 21);
        let n = grid.n_nodes();
        let mut u = vec![0.0; 2 * n];
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                let (x, y) = grid.node(i, j);
                let side = crate::geometry::classify_point(&case.curve, x, y).side();
                let e = case.eval_exact(side, x, y);
                u[grid.flat(i, j)] = e.u1.v;
                u[n + grid.flat(i, j)] = e.u2.v;
            }
        }
        let mut au = vec![0.0; 2 * n];
        sys.matrix.matvec(&u, &mut au);
        let scale = 1.0 / (grid.hx() * grid.hx());
        for r in 0..2 * n {
            assert!(
                abs(au[r] - sys.rhs[r]) < 1e-9 * scale,
                "row {r}: {} vs {}",
                au[r],
                sys.rhs[r]
            );
        }
    }

    #[test]
    fn assembly_is_deterministic() {
        let case = Case::from_id(CaseId::E1a);
        let (_, sys1) = build(&case, 41, 41);
        let (_, sys2) = build(&case, 41, 41);
        assert_eq!(sys1, sys2);
    }

    #[test]
    fn dirichlet_rows_are_identity() {
        let case = Case::from_id(CaseId::E1a);
        let (grid, sys) = build(&case, 21, 21);
        let row = grid.flat(0, 5);
        let (cols, vals) = sys.matrix.row(row);
        assert_eq!(cols, &[row as u32]);
        assert_eq!(vals, &[1.0]);
        let (x, y) = grid.node(0, 5);
        assert_eq!(sys.rhs[row], case.eval_boundary(x, y).0);
    }
}
