//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's own geometry.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use continuum::{level_graph, AdjacencyPattern, Cell};

pub type Word = Vec<u8>;
pub type EdgeSet = BTreeSet<(Word, Word)>;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn words(arity: u8, k: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|w: Word| {
                (0..arity).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

fn pair(a: Word, b: Word) -> (Word, Word) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn generated(p: &AdjacencyPattern, k: usize) -> EdgeSet {
    let g = level_graph(p, k).unwrap();
    g.edges()
        .iter()
        .map(|&(a, b)| {
            let w = |i: u32| g.cell(i as usize).symbols().iter().map(|s| s.0).collect::<Word>();
            pair(w(a), w(b))
        })
        .collect()
}

pub fn all_pairs(arity: u8, k: usize, adjacent: impl Fn(&Word, &Word) -> bool) -> EdgeSet {
    let ws = words(arity, k);
    let mut out = BTreeSet::new();
    for (i, a) in ws.iter().enumerate() {
        for b in &ws[i + 1..] {
            if adjacent(a, b) {
                out.insert(pair(a.clone(), b.clone()));
            }
        }
    }
    out
}

/// Dyadic cube of a word: bit `axis` of each symbol is the next binary
/// digit of that coordinate.
pub fn cube_coords(w: &[u8], n: usize) -> Vec<i64> {
    (0..n)
        .map(|axis| w.iter().fold(0i64, |acc, s| acc * 2 + ((s >> axis) & 1) as i64))
        .collect()
}

/// Cubes sharing a full face: one coordinate differs by one, the rest
/// agree.
pub fn grid_oracle(n: usize, k: usize) -> EdgeSet {
    all_pairs(1 << n, k, |a, b| {
        let (x, y) = (cube_coords(a, n), cube_coords(b, n));
        x.iter().zip(&y).map(|(p, q)| (p - q).abs()).sum::<i64>() == 1
    })
}

/// Intervals `[i, i+1]` at scale `2^-k`, adjacent iff `|i - j| = 1`.
pub fn interval_oracle(k: usize) -> EdgeSet {
    grid_oracle(1, k)
}

/// Carpet squares from base-3 digits, row-major order skipping the centre.
pub fn carpet_coords(w: &[u8]) -> (i64, i64) {
    const POS: [(i64, i64); 8] = [(0, 0), (1, 0), (2, 0), (0, 1), (2, 1), (0, 2), (1, 2), (2, 2)];
    w.iter().fold((0, 0), |(x, y), &s| (x * 3 + POS[s as usize].0, y * 3 + POS[s as usize].1))
}

pub fn carpet_oracle(k: usize) -> EdgeSet {
    all_pairs(8, k, |a, b| {
        let (p, q) = (carpet_coords(a), carpet_coords(b));
        (p.0 - q.0).abs() + (p.1 - q.1).abs() == 1
    })
}

/// Gasket triangles as vertex sets: child `s` keeps corner `s` and has its
/// other corners at the midpoints of the parent's edges through `s`, each
/// labelled by the remaining third label.
pub fn gasket_vertices(w: &[u8]) -> BTreeSet<(i64, i64)> {
    let l = 1i64 << w.len();
    let mut v = [(0i64, 0i64), (l, 0), (0, l)];
    for &s in w {
        let s = s as usize;
        let old = v;
        for (t, vt) in v.iter_mut().enumerate() {
            if t != s {
                let u = 3 - s - t;
                *vt = ((old[s].0 + old[u].0) / 2, (old[s].1 + old[u].1) / 2);
            }
        }
    }
    v.into_iter().collect()
}

/// Two gasket triangles are adjacent iff they share a vertex.
pub fn gasket_oracle(k: usize) -> EdgeSet {
    all_pairs(3, k, |a, b| !gasket_vertices(a).is_disjoint(&gasket_vertices(b)))
}

/// `x.s.r^m` and `x.t.r^m` with `{s, t, r} = {0, 1, 2}`.
pub fn gasket_suffix_oracle(k: usize) -> EdgeSet {
    all_pairs(3, k, |a, b| {
        let split = a.iter().zip(b).position(|(p, q)| p != q).unwrap();
        let (s, t) = (a[split], b[split]);
        let r = 3 - s - t;
        a[split + 1..].iter().all(|&c| c == r) && b[split + 1..].iter().all(|&c| c == r)
    })
}

pub fn cell(w: &[u8]) -> Cell {
    Cell::from_ids(w)
}

/// Segments and segment adjacency of a two-dimensional colouring, by flood
/// fill on grid coordinates. Segment 0 is the one holding the border.
pub struct BruteShape {
    /// (colour, number of cells)
    pub segments: Vec<(u8, usize)>,
    pub edges: BTreeSet<(usize, usize)>,
}

pub fn brute_shape(k: usize, color_of: impl Fn(&[u8]) -> u8) -> BruteShape {
    let side = 1i64 << k;
    let mut grid = vec![vec![0u8; side as usize]; side as usize];
    for w in words(4, k) {
        let c = cube_coords(&w, 2);
        grid[c[0] as usize][c[1] as usize] = color_of(&w);
    }
    let on_boundary = |x: i64, y: i64| x == 0 || y == 0 || x == side - 1 || y == side - 1;
    // node `side*side` is the border, which is black
    let border = (side * side) as usize;
    let id = |x: i64, y: i64| (x * side + y) as usize;
    let color = |n: usize| if n == border { 2 } else { grid[n / side as usize][n % side as usize] };
    let neighbours = |n: usize| -> Vec<usize> {
        if n == border {
            return (0..side * side)
                .filter(|&m| on_boundary(m / side, m % side))
                .map(|m| m as usize)
                .collect();
        }
        let (x, y) = ((n / side as usize) as i64, (n % side as usize) as i64);
        let mut out: Vec<usize> = [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .iter()
            .map(|(dx, dy)| (x + dx, y + dy))
            .filter(|&(a, b)| a >= 0 && b >= 0 && a < side && b < side)
            .map(|(a, b)| id(a, b))
            .collect();
        if on_boundary(x, y) {
            out.push(border);
        }
        out
    };
    let mut label = vec![usize::MAX; border + 1];
    let mut segments = Vec::new();
    let order: Vec<usize> = std::iter::once(border).chain(0..border).collect();
    for &start in &order {
        if label[start] != usize::MAX {
            continue;
        }
        let seg = segments.len();
        let mut stack = vec![start];
        label[start] = seg;
        let mut size = 0;
        while let Some(n) = stack.pop() {
            if n != border {
                size += 1;
            }
            for m in neighbours(n) {
                if label[m] == usize::MAX && color(m) == color(start) {
                    label[m] = seg;
                    stack.push(m);
                }
            }
        }
        segments.push((color(start), size));
    }
    let mut edges = BTreeSet::new();
    for n in 0..=border {
        for m in neighbours(n) {
            if color(n) != color(m) {
                let (a, b) = (label[n], label[m]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
    }
    BruteShape { segments, edges }
}
