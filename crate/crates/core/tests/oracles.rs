mod common;

use common::*;
use continuum::builtin::{by_name, euclid, sierpinski_carpet, sierpinski_triangle};
use continuum::{adjacent_general, level_graph, Levels};

#[test]
fn interval_matches_dyadic_oracle() {
    let p = euclid(1).unwrap();
    for k in 1..=10 {
        assert_eq!(generated(&p, k), interval_oracle(k), "depth {k}");
    }
}

#[test]
fn square_matches_grid_oracle() {
    let p = euclid(2).unwrap();
    for k in 1..=5 {
        let g = generated(&p, k);
        assert_eq!(g.len(), 2 * (1 << k) * ((1 << k) - 1));
        assert_eq!(g, grid_oracle(2, k), "depth {k}");
    }
}

#[test]
fn cube_matches_grid_oracle() {
    let p = euclid(3).unwrap();
    for k in 1..=3 {
        assert_eq!(generated(&p, k), grid_oracle(3, k), "depth {k}");
    }
}

#[test]
fn four_cube_matches_grid_oracle() {
    let p = euclid(4).unwrap();
    for k in 1..=2 {
        assert_eq!(generated(&p, k), grid_oracle(4, k), "depth {k}");
    }
}

#[test]
fn triangle_matches_gasket_geometry() {
    let p = sierpinski_triangle();
    for k in 1..=6 {
        assert_eq!(generated(&p, k), gasket_oracle(k), "depth {k}");
    }
}

#[test]
fn triangle_matches_suffix_characterization() {
    let p = sierpinski_triangle();
    for k in 1..=7 {
        assert_eq!(generated(&p, k), gasket_suffix_oracle(k), "depth {k}");
    }
}

#[test]
fn carpet_matches_thirds_grid() {
    let p = sierpinski_carpet();
    for k in 1..=3 {
        assert_eq!(generated(&p, k), carpet_oracle(k), "depth {k}");
    }
}

#[test]
fn lex_order_is_geometric_order() {
    let p = euclid(2).unwrap();
    for k in 1..=4 {
        for (a, b) in generated(&p, k) {
            let (x, y) = (cube_coords(&a, 2), cube_coords(&b, 2));
            // a < b lexicographically: a is left of or below b
            assert!(x[0] < y[0] || x[1] < y[1], "{a:?} {b:?}");
        }
    }
}

#[test]
fn circle_is_a_cycle() {
    let p = by_name("circle").unwrap();
    assert_eq!(level_graph(&p, 1).unwrap().edge_count(), 1);
    for k in 2..=8 {
        let g = level_graph(&p, k).unwrap();
        let n = 1usize << k;
        assert_eq!(g.edge_count(), n);
        assert!((0..n).all(|i| g.degree(i) == 2));
        assert!(g.is_connected());
    }
}

#[test]
fn torus_is_four_regular() {
    let p = by_name("torus").unwrap();
    for k in 2..=4 {
        let g = level_graph(&p, k).unwrap();
        assert!((0..g.node_count()).all(|i| g.degree(i) == 4), "depth {k}");
    }
}

#[test]
fn cross_length_adjacency_brute_force() {
    let p = euclid(2).unwrap();
    let mut levels = Levels::new(&p);
    for long in 2..=3 {
        let edges = generated(&p, long);
        for short in 1..long {
            for x in words(4, short) {
                for y in words(4, long) {
                    let expected = !y.starts_with(&x)
                        && edges.iter().any(|(a, b)| {
                            (a == &y && b.starts_with(&x)) || (b == &y && a.starts_with(&x))
                        });
                    let got = levels.adjacent_general(&cell(&x), &cell(&y)).unwrap();
                    assert_eq!(got, expected, "{x:?} {y:?}");
                }
            }
        }
    }
    assert!(!adjacent_general(&p, &cell(&[0]), &cell(&[0, 1])).unwrap());
}
