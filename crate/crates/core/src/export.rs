//! DOT, JSON and SVG output. Node and edge order is always canonical
//! (cells lexicographically, edges as sorted index pairs).

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::adjacency::LevelGraph;
use crate::builtin::{euclid, sierpinski_carpet, sierpinski_triangle};
use crate::cell::Alphabet;
use crate::complex::{Complex, ShapeTree, BLACK, WHITE};
use crate::error::{Error, Result};
use crate::geometry::{carpet_position, euclid_position, triangle_vertices};
use crate::pattern::AdjacencyPattern;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn graph_to_dot(p: &AdjacencyPattern, g: &LevelGraph) -> String {
    let al = p.alphabet();
    let name = |i: u32| quote(&al.format_cell(&g.cell(i as usize)));
    let mut out = String::new();
    writeln!(out, "graph {} {{", quote(&format!("{}_depth{}", p.name(), g.depth()))).unwrap();
    let border = g.border_flags();
    for i in 0..g.node_count() as u32 {
        match border {
            Some(b) if b[i as usize] => writeln!(out, "  {} [border=true];", name(i)).unwrap(),
            _ => writeln!(out, "  {};", name(i)).unwrap(),
        }
    }
    for ((a, b), origin) in g.edges_with_origin() {
        writeln!(out, "  {} -- {} [origin={}];", name(a), name(b), origin.as_str()).unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn graph_to_json(p: &AdjacencyPattern, g: &LevelGraph) -> Value {
    let al = p.alphabet();
    let name = |i: u32| al.format_cell(&g.cell(i as usize));
    let nodes: Vec<Value> = (0..g.node_count() as u32)
        .map(|i| match g.border_flags() {
            Some(b) => json!({"cell": name(i), "border": b[i as usize]}),
            None => json!({"cell": name(i)}),
        })
        .collect();
    let edges: Vec<Value> = g
        .edges_with_origin()
        .map(|((a, b), o)| json!({"source": name(a), "target": name(b), "origin": o.as_str()}))
        .collect();
    json!({"pattern": p.name(), "depth": g.depth(), "nodes": nodes, "edges": edges})
}

fn color_name(c: u8) -> String {
    match c {
        WHITE => "white".into(),
        BLACK => "black".into(),
        other => format!("color{other}"),
    }
}

pub fn shape_tree_to_dot(tree: &ShapeTree) -> String {
    let mut out = String::from("graph shape {\n");
    for s in &tree.nodes {
        let root = if s.id == tree.root { ", root" } else { "" };
        writeln!(
            out,
            "  \"{}\" [label=\"{} {} ({} cells{root})\"];",
            s.id,
            s.id,
            color_name(s.color),
            s.size
        )
        .unwrap();
    }
    for &(a, b) in &tree.edges {
        writeln!(out, "  \"{a}\" -- \"{b}\";").unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn shape_tree_to_json(tree: &ShapeTree) -> Value {
    json!({
        "root": tree.root,
        "nodes": tree.nodes,
        "edges": tree.edges,
        "is_tree": tree.is_tree(),
        "is_bipartite": tree.is_bipartite(),
    })
}

pub fn segments_to_json(cx: &Complex) -> Value {
    let seg = cx.segments();
    let al: &Alphabet = cx.pattern().alphabet();
    let cells: serde_json::Map<String, Value> = seg
        .ids()
        .iter()
        .enumerate()
        .map(|(i, &id)| (al.format_cell(&cx.space().graph().cell(i)), json!([id, cx.colors()[i]])))
        .collect();
    json!({"depth": cx.depth(), "segments": seg.segments(), "cells": cells})
}

/// Patterns with a geometric picture.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Embedding {
    Interval,
    Square,
    Carpet,
    Triangle,
}

impl Embedding {
    /// Recognises the built-in patterns by structure, whatever their name.
    pub fn of(p: &AdjacencyPattern) -> Option<Self> {
        let same = |q: AdjacencyPattern| p.clone().renamed(q.name().to_string()) == q;
        if same(euclid(1).ok()?) {
            Some(Embedding::Interval)
        } else if same(euclid(2).ok()?) {
            Some(Embedding::Square)
        } else if same(sierpinski_carpet()) {
            Some(Embedding::Carpet)
        } else if same(sierpinski_triangle()) {
            Some(Embedding::Triangle)
        } else {
            None
        }
    }
}

fn fill(c: u8) -> &'static str {
    const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"];
    match c {
        WHITE => "#ffffff",
        BLACK => "#000000",
        other => PALETTE[(other as usize - 3) % PALETTE.len()],
    }
}

/// Cell shape in viewBox units: a polygon and its centre.
fn cell_shape(e: Embedding, g: &LevelGraph, i: usize) -> (Vec<(f64, f64)>, (f64, f64)) {
    let c = g.cell(i);
    let k = g.depth() as u32;
    let square = |x: f64, y: f64, side: f64, height: f64| {
        // flip so that the last axis points up
        let top = height - y - side;
        (vec![(x, top), (x + side, top), (x + side, top + side), (x, top + side)], (x + side / 2.0, top + side / 2.0))
    };
    match e {
        Embedding::Interval => {
            let x = euclid_position(&c, 1)[0] as f64;
            (vec![(x, 0.0), (x + 1.0, 0.0), (x + 1.0, 1.0), (x, 1.0)], (x + 0.5, 0.5))
        }
        Embedding::Square => {
            let pos = euclid_position(&c, 2);
            square(pos[0] as f64, pos[1] as f64, 1.0, 2f64.powi(k as i32))
        }
        Embedding::Carpet => {
            let (x, y) = carpet_position(&c);
            square(x as f64, y as f64, 1.0, 3f64.powi(k as i32))
        }
        Embedding::Triangle => {
            let l = (1i64 << k) as f64;
            let h = 3f64.sqrt() / 2.0;
            let map = |(x, y): (i64, i64)| (x as f64 + y as f64 / 2.0, (l - y as f64) * h);
            let pts: Vec<(f64, f64)> = triangle_vertices(&c).iter().map(|&v| map(v)).collect();
            let cx = pts.iter().map(|p| p.0).sum::<f64>() / 3.0;
            let cy = pts.iter().map(|p| p.1).sum::<f64>() / 3.0;
            (pts, (cx, cy))
        }
    }
}

/// SVG picture of level `g`, cells filled by the complex's colours when
/// one is given, with the level adjacency drawn on top when `overlay`.
pub fn render_svg(p: &AdjacencyPattern, g: &LevelGraph, complex: Option<&Complex>, overlay: bool) -> Result<String> {
    let e = Embedding::of(p)
        .ok_or_else(|| Error::UnsupportedPattern(format!("{} has no geometric embedding", p.name())))?;
    if let Some(cx) = complex {
        if cx.depth() != g.depth() || cx.pattern() != p {
            return Err(Error::InvalidComplex("complex does not match the rendered level".into()));
        }
    }
    let k = g.depth() as i32;
    let (w, h) = match e {
        Embedding::Interval => (2f64.powi(k), 1.0),
        Embedding::Square => (2f64.powi(k), 2f64.powi(k)),
        Embedding::Carpet => (3f64.powi(k), 3f64.powi(k)),
        Embedding::Triangle => (2f64.powi(k), 2f64.powi(k) * 3f64.sqrt() / 2.0),
    };
    let (pw, ph) = if e == Embedding::Interval { (512, 64) } else { (512, (512.0 * h / w).round() as u32) };
    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{pw}\" height=\"{ph}\" viewBox=\"0 0 {} {}\" preserveAspectRatio=\"none\">",
        num(w),
        num(h)
    )
    .unwrap();
    writeln!(out, "<title>{} depth {}</title>", p.name(), g.depth()).unwrap();
    let mut centres = Vec::with_capacity(g.node_count());
    for i in 0..g.node_count() {
        let (pts, centre) = cell_shape(e, g, i);
        centres.push(centre);
        let color = complex.map_or(WHITE, |cx| cx.colors()[i]);
        let points: Vec<String> = pts.iter().map(|&(x, y)| format!("{},{}", num(x), num(y))).collect();
        writeln!(
            out,
            "<polygon points=\"{}\" fill=\"{}\" stroke=\"#808080\" vector-effect=\"non-scaling-stroke\"/>",
            points.join(" "),
            fill(color)
        )
        .unwrap();
    }
    if overlay {
        for &(a, b) in g.edges() {
            let (p0, p1) = (centres[a as usize], centres[b as usize]);
            writeln!(
                out,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#d62728\" vector-effect=\"non-scaling-stroke\"/>",
                num(p0.0),
                num(p0.1),
                num(p1.0),
                num(p1.1)
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Fixed-precision number without trailing zeros.
fn num(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}
