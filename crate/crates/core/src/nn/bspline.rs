//! Open-uniform degree-1 B-spline basis over `[0, 1]^2` with 5 control points
//! per axis (25 per kernel function).

pub const GRID: usize = 5;
pub const KERNEL_SIZE: usize = GRID * GRID;

/// Up to four `(control index, weight)` pairs with non-zero weight; the
/// weights sum to one. Control index is `GRID * i0 + i1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Basis {
    len: u8,
    entries: [(u8, f64); 4],
}

impl Basis {
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries[..self.len as usize].iter().map(|&(k, w)| (k as usize, w))
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

fn axis(u: f64) -> [(usize, f64); 2] {
    let x = u.clamp(0.0, 1.0) * (GRID - 1) as f64;
    let i = (x.floor() as usize).min(GRID - 2);
    let frac = x - i as f64;
    [(i, 1.0 - frac), (i + 1, frac)]
}

pub fn bspline_basis(u: [f64; 2]) -> Basis {
    let mut b = Basis { len: 0, entries: [(0, 0.0); 4] };
    for (i0, w0) in axis(u[0]) {
        for (i1, w1) in axis(u[1]) {
            let w = w0 * w1;
            if w > 0.0 {
                b.entries[b.len as usize] = ((i0 * GRID + i1) as u8, w);
                b.len += 1;
            }
        }
    }
    b
}
