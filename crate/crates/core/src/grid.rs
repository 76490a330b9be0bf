//! Uniform Cartesian grid and per-node stencil regularity.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::{classify_point, InterfaceCurve, Side};

#[derive(Clone, Debug, PartialEq)]
pub enum GridError {
    BadSpec(String),
}

impl core::fmt::Display for GridError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            GridError::BadSpec(msg) => write!(f, "bad grid spec: {msg}"),
        }
    }
}

/// Rectangular domain `[a,b]×[c,d]` with `nx×ny` nodes; spacings follow from
/// the node counts. Node `(i,j)` (zero-based) sits at
/// `(a + i·hx, c + j·hy)`.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub nx: usize,
    pub ny: usize,
}

impl GridSpec {
    pub fn new(a: f64, b: f64, c: f64, d: f64, nx: usize, ny: usize) -> Result<Self, GridError> {
        if nx < 5 || ny < 5 {
            return Err(GridError::BadSpec(String::from("need at least 5 nodes per direction")));
        }
        if !(b > a) || !(d > c) {
            return Err(GridError::BadSpec(String::from("inverted or empty domain bounds")));
        }
        Ok(GridSpec { a, b, c, d, nx, ny })
    }

    pub fn hx(&self) -> f64 {
        (self.b - self.a) / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        (self.d - self.c) / (self.ny - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.a + i as f64 * self.hx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.c + j as f64 * self.hy()
    }

    pub fn node(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x(i), self.y(j))
    }

    pub fn n_nodes(&self) -> usize {
        self.nx * self.ny
    }

    pub fn flat(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn is_boundary(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i == self.nx - 1 || j == self.ny - 1
    }
}

/// Alias kept for readability at call sites that think of the grid as built.
pub type Grid = GridSpec;

/// Offsets of the 8 neighbors in the 9-point stencil.
pub const NEIGHBORS9: [(i32, i32); 8] =
    [(-1, 0), (1, 0), (0, -1), (0, 1), (-1, -1), (1, -1), (-1, 1), (1, 1)];

/// Offsets of the 4 axis neighbors in the 5-point stencil.
pub const NEIGHBORS5: [(i32, i32); 4] = [(-1, 0), (1, 0), (0, -1), (0, 1)];

/// Per-node interface sides and stencil regularity flags.
#[derive(Clone, Debug)]
pub struct Classification {
    pub nx: usize,
    pub ny: usize,
    side: Vec<Side>,
    irregular5: Vec<bool>,
    irregular9: Vec<bool>,
}

impl Classification {
    pub fn side(&self, i: usize, j: usize) -> Side {
        self.side[j * self.nx + i]
    }

    /// True when any referenced 5-point neighbor lies on the other side.
    /// Boundary nodes are Dirichlet-pinned and never irregular.
    pub fn irregular5(&self, i: usize, j: usize) -> bool {
        self.irregular5[j * self.nx + i]
    }

    /// Same for the 9-point stencil used by the cross derivatives.
    pub fn irregular9(&self, i: usize, j: usize) -> bool {
        self.irregular9[j * self.nx + i]
    }

    /// Offsets of 9-point neighbors lying on the opposite side of `(i,j)`.
    pub fn fictitious_needed(&self, grid: &GridSpec, i: usize, j: usize) -> Vec<(i32, i32)> {
        let mut out = Vec::new();
        if grid.is_boundary(i, j) {
            return out;
        }
        let s = self.side(i, j);
        for (di, dj) in NEIGHBORS9 {
            let ni = (i as i32 + di) as usize;
            let nj = (j as i32 + dj) as usize;
            if self.side(ni, nj) != s {
                out.push((di, dj));
            }
        }
        out
    }

    pub fn count_irregular5(&self) -> usize {
        self.irregular5.iter().filter(|&&b| b).count()
    }

    pub fn count_irregular9(&self) -> usize {
        self.irregular9.iter().filter(|&&b| b).count()
    }
}

/// Classify every node of `grid` against `curve`.
pub fn classify_nodes(grid: &GridSpec, curve: &InterfaceCurve) -> Classification {
    let (nx, ny) = (grid.nx, grid.ny);
    let mut side = vec![Side::Plus; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let (x, y) = grid.node(i, j);
            side[j * nx + i] = classify_point(curve, x, y).side();
        }
    }
    let mut irregular5 = vec![false; nx * ny];
    let mut irregular9 = vec![false; nx * ny];
    for j in 1..ny - 1 {
        for i in 1..nx - 1 {
            let s = side[j * nx + i];
            irregular5[j * nx + i] = NEIGHBORS5
                .iter()
                .any(|&(di, dj)| side[(j as i32 + dj) as usize * nx + (i as i32 + di) as usize] != s);
            irregular9[j * nx + i] = NEIGHBORS9
                .iter()
                .any(|&(di, dj)| side[(j as i32 + dj) as usize * nx + (i as i32 + di) as usize] != s);
        }
    }
    Classification { nx, ny, side, irregular5, irregular9 }
}
