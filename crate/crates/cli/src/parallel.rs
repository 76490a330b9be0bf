//! Threaded assembly driver.
//!
//! Rows are pure functions of immutable inputs, so the matrix is built in
//! contiguous row chunks on worker threads and concatenated in row order:
//! the result is bit-identical to the serial assembly for any thread count.

use mib_elastic::assembly::{assemble, assemble_row, AssembleError, AssemblyInputs, Csr, SparseSystem};

pub fn assemble_threaded(
    inp: &AssemblyInputs<'_>,
    threads: usize,
) -> Result<SparseSystem, AssembleError> {
    let n = 2 * inp.grid.n_nodes();
    if threads <= 1 || n < 4 * threads {
        return assemble(inp);
    }
    let chunk = n.div_ceil(threads);
    let parts: Vec<Result<(Vec<(u32, f64)>, Vec<usize>, Vec<f64>), AssembleError>> =
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let lo = t * chunk;
                    let hi = ((t + 1) * chunk).min(n);
                    scope.spawn(move || {
                        let mut entries = Vec::new();
                        let mut counts = Vec::with_capacity(hi.saturating_sub(lo));
                        let mut rhs = Vec::with_capacity(hi.saturating_sub(lo));
                        for row in lo..hi {
                            let (cols, r) = assemble_row(inp, row)?;
                            counts.push(cols.len());
                            entries.extend(cols);
                            rhs.push(r);
                        }
                        Ok((entries, counts, rhs))
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("assembly worker panicked")).collect()
        });

    let mut indptr = Vec::with_capacity(n + 1);
    let mut indices = Vec::new();
    let mut data = Vec::new();
    let mut rhs = Vec::with_capacity(n);
    indptr.push(0);
    for part in parts {
        let (entries, counts, part_rhs) = part?;
        let mut k = 0;
        for c in counts {
            for (col, val) in &entries[k..k + c] {
                indices.push(*col);
                data.push(*val);
            }
            k += c;
            indptr.push(indices.len());
        }
        rhs.extend(part_rhs);
    }
    Ok(SparseSystem { matrix: Csr { n, indptr, indices, data }, rhs })
}
