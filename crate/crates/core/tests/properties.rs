mod common;

use std::sync::Arc;

use common::*;
use continuum::builtin::{by_name, euclid, BUILTIN_NAMES};
use continuum::complex::{CellSpace, Complex, Node, BLACK, WHITE};
use continuum::function::{brouwer_witness, is_continuous, is_monotonic, stream_image, streams_equivalent, CellFunction};
use continuum::structure::BorderClassifier;
use continuum::{level_graph, AdjacencyPattern, Alphabet, Cell, PrefixRelation, Symbol};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn word(arity: u8, max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0..arity, 0..=max)
}

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn pred_inverts_suc(w in word(4, 8), s in 0u8..4) {
        let c = cell(&w);
        prop_assert_eq!(c.suc(Symbol(s)).pred(), c);
    }

    #[test]
    fn prefix_relation_is_exclusive(a in word(2, 5), b in word(2, 5)) {
        let (x, y) = (cell(&a), cell(&b));
        let r = x.prefix_relation(&y);
        let holds = [
            a == b,
            a.len() < b.len() && b.starts_with(&a),
            b.len() < a.len() && a.starts_with(&b),
            !a.starts_with(&b) && !b.starts_with(&a),
        ];
        prop_assert_eq!(holds.iter().filter(|&&h| h).count(), 1);
        let expected = match holds.iter().position(|&h| h).unwrap() {
            0 => PrefixRelation::Equal,
            1 => PrefixRelation::Ancestor,
            2 => PrefixRelation::Descendant,
            _ => PrefixRelation::Incomparable,
        };
        prop_assert_eq!(r, expected);
    }

    #[test]
    fn encoding_preserves_order((a, b) in (0usize..7).prop_flat_map(|n| {
        (prop::collection::vec(0u8..4, n), prop::collection::vec(0u8..4, n))
    })) {
        let (x, y) = (cell(&a), cell(&b));
        prop_assert_eq!(x.cmp(&y), x.encode(4).cmp(&y.encode(4)));
    }

    #[test]
    fn refined_edges_come_from_adjacent_or_equal_parents(k in 2usize..5, n in 1usize..3) {
        let p = euclid(n).unwrap();
        let parent = level_graph(&p, k - 1).unwrap();
        let g = level_graph(&p, k).unwrap();
        for &(a, b) in g.edges() {
            let (x, y) = (g.cell(a as usize).pred(), g.cell(b as usize).pred());
            prop_assert!(x == y || parent.contains_edge(parent.index(&x).unwrap(), parent.index(&y).unwrap()));
        }
    }

    #[test]
    fn random_complex_invariants(seed in any::<u64>(), k in 1usize..4, black in 0.1f64..0.9) {
        let space = Arc::new(CellSpace::new(&euclid(2).unwrap(), k).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cx = Complex::random(space.clone(), &mut rng, black);
        let seg = cx.segments();
        prop_assert_eq!(&seg, &cx.segments());
        let tree = cx.segment_adjacency();
        prop_assert!(tree.is_properly_colored());
        prop_assert!(tree.is_bipartite());
        prop_assert!(tree.is_connected());
        // path exists iff same segment, over all pairs
        let nodes: Vec<Node> = (0..space.cell_count())
            .map(|i| Node::Cell(space.graph().cell(i)))
            .chain([Node::Border])
            .collect();
        for a in &nodes {
            for b in &nodes {
                let (qa, qb) = (cx.q_e(k, a), cx.q_e(k, b));
                match cx.path(a, b) {
                    Ok(path) => {
                        prop_assert_eq!(path.is_some(), qa == qb);
                        if let Some(path) = path {
                            prop_assert_eq!(path.first(), Some(a));
                            prop_assert_eq!(path.last(), Some(b));
                            for w in path.windows(2) {
                                prop_assert!(cx.bordered_adjacency(&w[0], &w[1]));
                                prop_assert_eq!(cx.color(&w[0]), cx.color(&w[1]));
                            }
                        }
                    }
                    Err(_) => prop_assert_ne!(qa.1, qb.1),
                }
            }
        }
    }

    #[test]
    fn monotone_images_cohere(seed in any::<u64>(), noise in 0.0f64..1.0) {
        let p = euclid(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = CellFunction::random_monotone(&p, 5, noise, &mut rng).unwrap();
        prop_assert!(is_monotonic(&f, 5).unwrap().holds);
        for w in words(2, 5) {
            let s = cell(&w);
            let img = stream_image(&f, &s).unwrap();
            for j in 0..w.len() {
                prop_assert!(stream_image(&f, &s.prefix(j)).unwrap().is_prefix_of(&img));
            }
        }
    }

    #[test]
    fn witnesses_are_valid_and_match_continuity(seed in any::<u64>(), noise in 0.0f64..0.5) {
        let p = euclid(1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = CellFunction::random_monotone(&p, 4, noise, &mut rng).unwrap();
        let continuous = is_continuous(&f, 4).unwrap().holds;
        let w = brouwer_witness(&f, 4).unwrap();
        prop_assert_eq!(w.is_some(), !continuous);
        if let Some(w) = w {
            prop_assert!(streams_equivalent(&p, &w.stream_u, &w.stream_z).unwrap());
            prop_assert!(!streams_equivalent(&p, &w.image_u, &w.image_z).unwrap());
            prop_assert!(w.u.is_prefix_of(&w.stream_u) && w.z.is_prefix_of(&w.stream_z));
        }
    }
}

#[test]
fn parse_format_round_trip_exhaustive() {
    let al = Alphabet::new(["a", "b", "c", "d"]).unwrap();
    for k in 0..=4 {
        for c in al.cells_at_depth(k) {
            assert_eq!(al.parse_cell(&al.format_cell(&c)).unwrap(), c);
        }
    }
}

#[test]
fn prefix_order_is_a_partial_order() {
    let cells: Vec<Cell> = (0..=4).flat_map(|k| words(2, k)).map(|w| cell(&w)).collect();
    let le = |x: &Cell, y: &Cell| matches!(x.prefix_relation(y), PrefixRelation::Equal | PrefixRelation::Ancestor);
    for x in &cells {
        assert!(le(x, x));
        for y in &cells {
            if le(x, y) && le(y, x) {
                assert_eq!(x, y);
            }
            if le(x, y) {
                for z in cells.iter().filter(|z| le(y, z)) {
                    assert!(le(x, z));
                }
            }
        }
    }
}

#[test]
fn lex_order_is_total_per_depth() {
    for k in 1..=4 {
        let mut cs: Vec<Cell> = words(3, k).iter().map(|w| cell(w)).collect();
        cs.reverse();
        cs.sort();
        assert!(cs.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn level_graphs_are_simple_and_deterministic() {
    for name in BUILTIN_NAMES {
        let p = by_name(name).unwrap();
        let k = if p.arity() > 8 { 2 } else { 3 };
        let g = level_graph(&p, k).unwrap();
        assert_eq!(g, level_graph(&p, k).unwrap(), "{name}");
        assert!(g.edges().iter().all(|&(a, b)| a < b), "{name}");
        assert!(g.edges().windows(2).all(|w| w[0] < w[1]), "{name}");
        for &(a, b) in g.edges() {
            assert!(g.neighbors(a as usize).contains(&b) && g.neighbors(b as usize).contains(&a));
        }
        assert_eq!(g.node_count(), p.arity().pow(k as u32));
    }
}

#[test]
fn gluing_does_not_change_border_ranks() {
    let plane = euclid(2).unwrap();
    let mut plain = BorderClassifier::new(&plane).unwrap();
    for name in ["sphere", "torus", "moebius", "klein"] {
        let glued = by_name(name).unwrap();
        let mut c = BorderClassifier::with_dimension(&glued, 2);
        for w in words(4, 3) {
            assert_eq!(c.rank(&cell(&w)), plain.rank(&cell(&w)), "{name} {w:?}");
        }
    }
}

#[test]
fn pattern_files_round_trip() {
    for name in BUILTIN_NAMES {
        let p = by_name(name).unwrap();
        assert_eq!(AdjacencyPattern::from_json(&p.to_json()).unwrap(), p, "{name}");
    }
    let text = std::fs::read_to_string(fixture("pattern_path3.json")).unwrap();
    let p = AdjacencyPattern::from_json(&text).unwrap();
    assert_eq!(AdjacencyPattern::from_json(&p.to_json()).unwrap(), p);
}

#[test]
fn complex_files_round_trip() {
    for name in ["complex_all_white.json", "complex_center.json", "complex_two_blobs.json", "complex_diamond.json"] {
        let cx = Complex::from_json(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
        let again = Complex::from_json(&cx.to_json()).unwrap();
        assert_eq!(again, cx, "{name}");
        assert_eq!(again.to_json(), cx.to_json());
    }
    let space = Arc::new(CellSpace::new(&euclid(2).unwrap(), 3).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let cx = Complex::random(space.clone(), &mut rng, 0.4);
        assert_eq!(Complex::from_json(&cx.to_json()).unwrap(), cx);
    }
}

#[test]
fn multi_colour_segments() {
    let p = euclid(2).unwrap();
    let mut cx = Complex::uniform(&p, 2, WHITE).unwrap();
    for (w, c) in [("a.d", 3), ("b.c", 3), ("c.b", BLACK)] {
        cx.set_color(&p.alphabet().parse_cell(w).unwrap(), c).unwrap();
    }
    let seg = cx.segments();
    assert_eq!(seg.len(), 4);
    let tree = cx.segment_adjacency();
    assert!(tree.is_properly_colored());
    // the colour-3 segment touches both the white ring and the black cell
    let three = seg.segments().iter().find(|s| s.color == 3).unwrap().id;
    assert_eq!(tree.degree(three), 2);
}
