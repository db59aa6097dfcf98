//! Geometric realisations of the built-in patterns, in exact integer
//! coordinates. Used for rendering and bitmap import.

use crate::cell::{Cell, Symbol};
use crate::builtin::CARPET_POSITIONS;

/// Lower corner of a Euclidean cell, in units of `2^-depth`.
pub fn euclid_position(c: &Cell, n: usize) -> Vec<u64> {
    let mut pos = vec![0u64; n];
    for s in c.symbols() {
        for (axis, p) in pos.iter_mut().enumerate() {
            *p = *p * 2 + ((s.0 as u64 >> axis) & 1);
        }
    }
    pos
}

/// Inverse of [`euclid_position`].
pub fn euclid_cell(pos: &[u64], depth: usize) -> Cell {
    let word = (0..depth)
        .map(|i| {
            let shift = depth - 1 - i;
            let id = pos.iter().enumerate().fold(0u8, |acc, (axis, p)| acc | ((((p >> shift) & 1) as u8) << axis));
            Symbol(id)
        })
        .collect();
    Cell::from_symbols(word)
}

/// Lower-left corner of a carpet cell, in units of `3^-depth`.
pub fn carpet_position(c: &Cell) -> (u64, u64) {
    c.symbols().iter().fold((0, 0), |(x, y), s| {
        let (col, row) = CARPET_POSITIONS[s.id()];
        (x * 3 + col as u64, y * 3 + row as u64)
    })
}

/// Vertices of a triangle cell in the lattice spanned by the unit
/// triangle `(0,0)`, `(2^depth,0)`, `(0,2^depth)`, indexed by label.
///
/// Child `s` keeps vertex `s`; its vertex `t` is the midpoint between the
/// parent's vertex `s` and the parent's vertex carrying the third label.
pub fn triangle_vertices(c: &Cell) -> [(i64, i64); 3] {
    let l = 1i64 << c.depth();
    let mut v = [(0, 0), (l, 0), (0, l)];
    for s in c.symbols() {
        let s = s.id();
        let mid = |a: (i64, i64), b: (i64, i64)| ((a.0 + b.0) / 2, (a.1 + b.1) / 2);
        let mut next = v;
        for (t, slot) in next.iter_mut().enumerate() {
            if t != s {
                let u = 3 - s - t;
                *slot = mid(v[s], v[u]);
            }
        }
        v = next;
    }
    v
}
