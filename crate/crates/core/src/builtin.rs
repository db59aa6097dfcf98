//! Built-in patterns: Euclidean cubes of any dimension, the Sierpiński
//! triangle and carpet, and gluings of Euclidean patterns (circle, sphere,
//! torus, Möbius strip, Klein bottle).

use crate::cell::{Alphabet, Symbol};
use crate::error::{Error, Result};
use crate::pattern::{AdjacencyPattern, BorderGluing, DPattern, GluingKind, MRule};

/// Names accepted by [`by_name`].
pub const BUILTIN_NAMES: &[&str] = &[
    "euclid1",
    "euclid2",
    "euclid3",
    "euclid4",
    "sierpinski_triangle",
    "sierpinski_carpet",
    "circle",
    "sphere",
    "torus",
    "moebius",
    "klein",
];

pub fn by_name(name: &str) -> Result<AdjacencyPattern> {
    match name {
        "sierpinski_triangle" => Ok(sierpinski_triangle()),
        "sierpinski_carpet" => Ok(sierpinski_carpet()),
        "circle" => glue(&euclid(1)?, BorderGluing::torus_opposite()).map(|p| p.renamed("circle")),
        "sphere" => {
            let e = euclid(2)?;
            let corner = e.alphabet().symbol("c")?;
            glue(&e, BorderGluing::sphere_corner(corner)).map(|p| p.renamed("sphere"))
        }
        "torus" => glue(&euclid(2)?, BorderGluing::torus_opposite()).map(|p| p.renamed("torus")),
        "moebius" => glue(&euclid(2)?, BorderGluing::moebius()).map(|p| p.renamed("moebius")),
        "klein" => {
            let e = euclid(2)?;
            let corner = e.alphabet().symbol("a")?;
            glue(&e, BorderGluing::klein(corner)).map(|p| p.renamed("klein"))
        }
        other => match other.strip_prefix("euclid").and_then(|n| n.parse::<usize>().ok()) {
            Some(n) => euclid(n),
            None => Err(Error::UnsupportedPattern(format!("no built-in pattern named `{other}`"))),
        },
    }
}

fn euclid_symbol_names(size: usize) -> Vec<String> {
    if size <= 26 {
        (0..size).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (0..size).map(|i| format!("s{i}")).collect()
    }
}

/// Euclidean pattern of dimension `n`.
///
/// Symbol `i` sits at position `(bit_0(i), ..., bit_{n-1}(i))` of its parent,
/// so for `n = 2` the order is `a = (0,0)`, `b = (1,0)`, `c = (0,1)`,
/// `d = (1,1)`. Two cells touching along axis `k` have tops that differ only
/// in bit `k`; the lexicographically smaller cell is the lower one, and its
/// children on the upper face meet the larger cell's children on the lower
/// face at matching transverse positions.
pub fn euclid(n: usize) -> Result<AdjacencyPattern> {
    if n == 0 {
        return Err(Error::InvalidPattern("Euclidean dimension must be at least 1".into()));
    }
    if n > 7 {
        return Err(Error::InvalidPattern(format!("Euclidean dimension {n} exceeds the alphabet limit")));
    }
    let size = 1usize << n;
    let alphabet = Alphabet::new(euclid_symbol_names(size))?;
    let mut base = Vec::new();
    for s in 0..size {
        for axis in 0..n {
            let t = s ^ (1 << axis);
            if s < t {
                base.push((Symbol(s as u8), Symbol(t as u8)));
            }
        }
    }
    let d = DPattern::new(alphabet, base)?;

    let mut rules = Vec::new();
    for s in 0..size {
        for axis in 0..n {
            let t = s ^ (1 << axis);
            let children = (0..size)
                .filter(|u| u & (1 << axis) != 0)
                .map(|u| (Symbol(u as u8), Symbol((u ^ (1 << axis)) as u8)));
            rules.push(MRule::new((Symbol(s as u8), Symbol(t as u8)), children)?);
        }
    }
    AdjacencyPattern::new(format!("euclid{n}"), d, rules)
}

/// Three pairwise adjacent parts; two touching parts meet through their
/// children labelled with the remaining symbol, and from then on through
/// constant suffixes.
pub fn sierpinski_triangle() -> AdjacencyPattern {
    let alphabet = Alphabet::new(["1", "2", "3"]).expect("valid alphabet");
    let s = |i: u8| Symbol(i - 1);
    let d = DPattern::new(alphabet, [(s(1), s(2)), (s(1), s(3)), (s(2), s(3))]).expect("K3 is connected");
    let rules = [
        ((1, 2), (3, 3)),
        ((1, 3), (2, 2)),
        ((2, 3), (1, 1)),
        ((1, 1), (1, 1)),
        ((2, 2), (2, 2)),
        ((3, 3), (3, 3)),
    ]
    .into_iter()
    .map(|((k0, k1), (u, v))| MRule::new((s(k0), s(k1)), [(s(u), s(v))]).expect("nonempty"));
    AdjacencyPattern::new("sierpinski_triangle", d, rules).expect("valid pattern")
}

/// Grid positions `(column, row)` of the carpet symbols, rows counted
/// upwards, row-major with the centre removed.
pub const CARPET_POSITIONS: [(u8, u8); 8] = [(0, 0), (1, 0), (2, 0), (0, 1), (2, 1), (0, 2), (1, 2), (2, 2)];
const CARPET_NAMES: [&str; 8] = ["sw", "s", "se", "w", "e", "nw", "n", "ne"];

fn carpet_symbol(col: u8, row: u8) -> Option<Symbol> {
    CARPET_POSITIONS.iter().position(|&p| p == (col, row)).map(|i| Symbol(i as u8))
}

/// The 3×3 grid minus its centre. Parts sharing a grid edge are adjacent;
/// a horizontal contact refines into the three right-column / left-column
/// child pairs on matching rows, and a vertical contact likewise into the
/// top-row / bottom-row pairs on matching columns.
pub fn sierpinski_carpet() -> AdjacencyPattern {
    let alphabet = Alphabet::new(CARPET_NAMES).expect("valid alphabet");
    let mut base = Vec::new();
    for (i, &(c0, r0)) in CARPET_POSITIONS.iter().enumerate() {
        for (j, &(c1, r1)) in CARPET_POSITIONS.iter().enumerate().skip(i + 1) {
            if c0.abs_diff(c1) + r0.abs_diff(r1) == 1 {
                base.push((Symbol(i as u8), Symbol(j as u8)));
            }
        }
    }
    let d = DPattern::new(alphabet, base).expect("ring is connected");

    let horizontal: Vec<_> = (0..3)
        .map(|row| (carpet_symbol(2, row).unwrap(), carpet_symbol(0, row).unwrap()))
        .collect();
    let vertical: Vec<_> = (0..3)
        .map(|col| (carpet_symbol(col, 2).unwrap(), carpet_symbol(col, 0).unwrap()))
        .collect();
    let mut rules = Vec::new();
    for (i, &(c0, r0)) in CARPET_POSITIONS.iter().enumerate() {
        for (j, &(c1, r1)) in CARPET_POSITIONS.iter().enumerate() {
            let key = (Symbol(i as u8), Symbol(j as u8));
            if r0 == r1 && c1 == (c0 + 1) % 3 {
                rules.push(MRule::new(key, horizontal.clone()).expect("nonempty"));
            } else if c0 == c1 && r1 == (r0 + 1) % 3 {
                rules.push(MRule::new(key, vertical.clone()).expect("nonempty"));
            }
        }
    }
    AdjacencyPattern::new("sierpinski_carpet", d, rules).expect("valid pattern")
}

/// `base` with a border gluing attached.
pub fn glue(base: &AdjacencyPattern, g: BorderGluing) -> Result<AdjacencyPattern> {
    if base.gluing().is_some() {
        return Err(Error::UnsupportedGluing(format!("{} is already glued", base.name())));
    }
    let name = format!("{}+{}", base.name(), g.kind().as_str());
    base.clone().with_gluing(Some(g)).map(|p| p.renamed(name))
}

/// Symbol-set bitmask of every cell of depth `k`, indexed by cell code.
fn cell_masks(arity: usize, k: usize) -> Vec<u64> {
    let mut masks = vec![0u64];
    for _ in 0..k {
        let mut next = Vec::with_capacity(masks.len() * arity);
        for m in &masks {
            for s in 0..arity {
                next.push(m | (1 << s));
            }
        }
        masks = next;
    }
    masks
}

fn constant_code(arity: usize, s: Symbol, k: usize) -> u32 {
    (0..k).fold(0u32, |acc, _| acc * arity as u32 + s.0 as u32)
}

/// Gluing edges at depth `k`, as unordered index pairs.
pub(crate) fn gluing_edges(p: &AdjacencyPattern, g: BorderGluing, k: usize) -> Result<Vec<(u32, u32)>> {
    let n = p
        .d()
        .hypercube_dimension()
        .ok_or_else(|| Error::UnsupportedGluing("gluing needs a Euclidean division pattern".into()))?;
    let arity = p.arity();
    let masks = cell_masks(arity, k);
    // symbols with bit `axis` equal to `value`
    let face = |axis: usize, value: usize| -> u64 {
        (0..arity).filter(|s| (s >> axis) & 1 == value).fold(0, |m, s| m | (1 << s))
    };
    let on_face = |code: usize, axis: usize, value: usize| masks[code] & !face(axis, value) == 0;

    let mut edges = Vec::new();
    match g.kind() {
        GluingKind::SphereCorner => {
            let corner = constant_code(arity, g.corner().unwrap(), k);
            let mut ranks = crate::structure::RankTable::new(p.d(), n);
            for (code, &mask) in masks.iter().enumerate() {
                if code as u32 != corner && ranks.rank(mask).is_some() {
                    edges.push((corner, code as u32));
                }
            }
        }
        GluingKind::TorusOpposite => {
            let repunit: u64 = (0..k).fold(0, |acc, _| acc * arity as u64 + 1);
            for axis in 0..n {
                let shift = (1u64 << axis) * repunit;
                for code in 0..masks.len() {
                    if on_face(code, axis, 0) {
                        edges.push((code as u32, (code as u64 + shift) as u32));
                    }
                }
            }
        }
        GluingKind::Moebius | GluingKind::Klein => {
            let bottom: Vec<u32> = (0..masks.len()).filter(|&c| on_face(c, 1, 0)).map(|c| c as u32).collect();
            let top: Vec<u32> = (0..masks.len()).filter(|&c| on_face(c, 1, 1)).map(|c| c as u32).collect();
            for (i, &lo) in bottom.iter().enumerate() {
                edges.push((lo, top[top.len() - 1 - i]));
            }
            if g.kind() == GluingKind::Klein {
                let corner = constant_code(arity, g.corner().unwrap(), k);
                for value in [0, 1] {
                    for code in 0..masks.len() {
                        if code as u32 != corner && on_face(code, 0, value) {
                            edges.push((corner, code as u32));
                        }
                    }
                }
            }
        }
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjacency::{level_graph, EdgeProvenance};

    #[test]
    fn euclid1_rules() {
        assert_eq!(euclid(1).unwrap().rule_table(), "(a,b) -> (b,a)\n(b,a) -> (b,a)\n");
    }

    #[test]
    fn euclid2_selected_rules() {
        let p = euclid(2).unwrap();
        let al = p.alphabet();
        let s = |n| al.symbol(n).unwrap();
        assert_eq!(p.rule((s("a"), s("b"))).unwrap().children(), &[(s("b"), s("a")), (s("d"), s("c"))]);
        assert_eq!(p.rule((s("a"), s("c"))).unwrap().children(), &[(s("c"), s("a")), (s("d"), s("b"))]);
        assert_eq!(p.rules().count(), 8);
    }

    #[test]
    fn euclid_zero_rejected() {
        assert!(euclid(0).is_err());
    }

    #[test]
    fn triangle_rules() {
        assert_eq!(
            sierpinski_triangle().rule_table(),
            "(1,1) -> (1,1)\n(1,2) -> (3,3)\n(1,3) -> (2,2)\n(2,2) -> (2,2)\n(2,3) -> (1,1)\n(3,3) -> (3,3)\n"
        );
    }

    #[test]
    fn carpet_base_is_a_ring() {
        let p = sierpinski_carpet();
        assert_eq!(p.d().edge_count(), 8);
        assert_eq!(p.d().regular_degree(), Some(2));
    }

    #[test]
    fn moebius_depth2_edges() {
        let p = by_name("moebius").unwrap();
        let g = level_graph(&p, 2).unwrap();
        let al = p.alphabet();
        let glued: Vec<(String, String)> = g
            .edges_with_origin()
            .filter(|(_, o)| *o == EdgeProvenance::Gluing)
            .map(|((i, j), _)| (al.format_cell(&g.cell(i as usize)), al.format_cell(&g.cell(j as usize))))
            .collect();
        let expected = [("a.a", "d.d"), ("a.b", "d.c"), ("b.a", "c.d"), ("b.b", "c.c")];
        assert_eq!(glued.len(), 4);
        for (x, y) in expected {
            assert!(glued.contains(&(x.to_string(), y.to_string())), "{x} -- {y}");
        }
    }

    #[test]
    fn torus_pairs_opposite_cells() {
        let p = by_name("torus").unwrap();
        let g = level_graph(&p, 2).unwrap();
        let al = p.alphabet();
        let idx = |s| g.index(&al.parse_cell(s).unwrap()).unwrap();
        // bottom a.b <-> top c.d, left c.a <-> right d.b
        assert!(g.contains_edge(idx("a.b"), idx("c.d")));
        assert!(g.contains_edge(idx("c.a"), idx("d.b")));
        assert!(!g.contains_edge(idx("a.b"), idx("d.c")));
    }

    #[test]
    fn unsupported_gluing_combination() {
        assert!(glue(&sierpinski_triangle(), BorderGluing::torus_opposite()).is_err());
        assert!(glue(&euclid(3).unwrap(), BorderGluing::moebius()).is_err());
        assert!(glue(&by_name("torus").unwrap(), BorderGluing::moebius()).is_err());
    }

    #[test]
    fn names_resolve() {
        for name in BUILTIN_NAMES {
            assert!(by_name(name).is_ok(), "{name}");
        }
        assert!(by_name("nonsense").is_err());
    }
}
