//! Convergence reports: table printing and CSV emission.

use std::fmt::Write as _;

use mib_elastic::norms::{compute_order, ErrorNorms};
use mib_elastic::solver::SolveStats;

/// One grid level of a refinement study.
#[derive(Clone, Debug)]
pub struct ReportRow {
    pub nx: usize,
    pub ny: usize,
    pub u1: ErrorNorms,
    pub u2: ErrorNorms,
    pub solve: SolveStats,
    pub seconds: f64,
}

/// Completed (possibly partial) refinement study for one case.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub case: String,
    pub rows: Vec<ReportRow>,
}

/// Orders per column, aligned with `rows`; `None` on the first row and
/// wherever the preceding level is not an exact 2× refinement.
#[derive(Clone, Copy, Debug, Default)]
pub struct OrderRow {
    pub linf_u1: Option<f64>,
    pub l2_u1: Option<f64>,
    pub linf_u2: Option<f64>,
    pub l2_u2: Option<f64>,
}

impl ConvergenceReport {
    pub fn orders(&self) -> Vec<OrderRow> {
        let mut out = vec![OrderRow::default(); self.rows.len()];
        for k in 1..self.rows.len() {
            let (prev, cur) = (&self.rows[k - 1], &self.rows[k]);
            if cur.nx == 2 * prev.nx && cur.ny == 2 * prev.ny {
                let ord = |coarse: f64, fine: f64| {
                    (fine > 0.0).then(|| compute_order(coarse, fine))
                };
                out[k] = OrderRow {
                    linf_u1: ord(prev.u1.linf, cur.u1.linf),
                    l2_u1: ord(prev.u1.l2, cur.u1.l2),
                    linf_u2: ord(prev.u2.linf, cur.u2.linf),
                    l2_u2: ord(prev.u2.l2, cur.u2.l2),
                };
            }
        }
        out
    }

    pub fn table(&self) -> String {
        let orders = self.orders();
        let mut s = String::new();
        let _ = writeln!(s, "case {}", self.case);
        let _ = writeln!(
            s,
            "{:>9}  {:>10} {:>6}  {:>10} {:>6}  {:>10} {:>6}  {:>10} {:>6}  {:>7} {:>9} {:>8}",
            "grid", "Linf(u1)", "order", "L2(u1)", "order", "Linf(u2)", "order", "L2(u2)", "order",
            "iters", "residual", "seconds"
        );
        for (row, ord) in self.rows.iter().zip(&orders) {
            let o = |v: Option<f64>| v.map(|x| format!("{x:.2}")).unwrap_or_default();
            let _ = writeln!(
                s,
                "{:>4}x{:<4}  {:>10.3e} {:>6}  {:>10.3e} {:>6}  {:>10.3e} {:>6}  {:>10.3e} {:>6}  {:>7} {:>9.2e} {:>8.2}",
                row.nx,
                row.ny,
                row.u1.linf,
                o(ord.linf_u1),
                row.u1.l2,
                o(ord.l2_u1),
                row.u2.linf,
                o(ord.linf_u2),
                row.u2.l2,
                o(ord.l2_u2),
                row.solve.iterations,
                row.solve.residual,
                row.seconds,
            );
        }
        s
    }

    pub fn csv(&self) -> String {
        let orders = self.orders();
        let mut s = String::from(
            "case,nx,ny,linf_u1,ord_linf_u1,l2_u1,ord_l2_u1,linf_u2,ord_linf_u2,l2_u2,ord_l2_u2,iters,residual,seconds\n",
        );
        for (row, ord) in self.rows.iter().zip(&orders) {
            let o = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_default();
            let _ = writeln!(
                s,
                "{},{},{},{:e},{},{:e},{},{:e},{},{:e},{},{},{:e},{:.3}",
                self.case,
                row.nx,
                row.ny,
                row.u1.linf,
                o(ord.linf_u1),
                row.u1.l2,
                o(ord.l2_u1),
                row.u2.linf,
                o(ord.linf_u2),
                row.u2.l2,
                o(ord.l2_u2),
                row.solve.iterations,
                row.solve.residual,
                row.seconds,
            );
        }
        s
    }
}
