//! Command-line front end. Exit codes: 0 when the command succeeds or the
//! checked property holds, 1 when a property fails or a witness is found,
//! 2 for usage and input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::adjacency::{check_refinement, connectivity, level_graph};
use crate::builtin::{by_name, BUILTIN_NAMES};
use crate::cell::Cell;
use crate::complex::{CellSpace, Complex, Node};
use crate::error::Error;
use crate::export::{graph_to_dot, graph_to_json, render_svg, segments_to_json, shape_tree_to_dot, shape_tree_to_json};
use crate::function::{brouwer_witness, is_continuous, is_monotonic, is_strict, stream_image, CellFunction, FunctionReport};
use crate::pattern::AdjacencyPattern;
use crate::structure::{border_census, check_homogeneity, check_indiscernibility, dimension, BorderClassifier, PropertyReport};

#[derive(Parser, Debug)]
#[command(name = "continuum", version, about = "Discrete continua: patterns, level graphs, complexes and cell functions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Built-in pattern name or pattern JSON file [default: euclid2, or
    /// euclid1 for functions].
    #[arg(long, global = true)]
    pattern: Option<String>,
    /// Cell depth; each command has its own default.
    #[arg(long, global = true)]
    depth: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for sampled commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

impl Global {
    fn pattern(&self) -> &str {
        self.pattern.as_deref().unwrap_or("euclid2")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Json,
    Text,
    Svg,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List or show patterns.
    Pattern {
        #[command(subcommand)]
        action: PatternAction,
    },
    /// Level graphs.
    Graph {
        #[command(subcommand)]
        action: GraphAction,
    },
    /// Structural checks.
    Check {
        #[command(subcommand)]
        property: CheckProperty,
    },
    /// Border ranks of the cells at one depth.
    Borders,
    /// Coloured complexes.
    Complex {
        #[command(subcommand)]
        action: ComplexAction,
    },
    /// Cell functions.
    Fn {
        #[command(subcommand)]
        action: FnAction,
    },
    /// SVG picture of a level, optionally coloured by a complex.
    Render {
        #[arg(long)]
        complex: Option<PathBuf>,
        /// Draw the adjacency graph over the cells.
        #[arg(long)]
        overlay: bool,
    },
}

#[derive(Subcommand, Debug)]
enum PatternAction {
    List,
    Show,
}

#[derive(Subcommand, Debug)]
enum GraphAction {
    Gen,
}

#[derive(Subcommand, Debug)]
enum CheckProperty {
    Refinement,
    Connectivity,
    Indiscernibility,
    Homogeneity,
    Dimension,
}

#[derive(Args, Debug)]
struct ComplexSource {
    /// Complex JSON file.
    #[arg(long, conflicts_with = "bitmap")]
    complex: Option<PathBuf>,
    /// PBM/PGM image over the plane (black pixels are black cells).
    #[arg(long)]
    bitmap: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum ComplexAction {
    Segments(ComplexSource),
    Tree(ComplexSource),
    Path {
        #[command(flatten)]
        source: ComplexSource,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Random two-colour complexes: bipartite and tree statistics.
    Sample {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Probability of a black cell.
        #[arg(long, default_value_t = 0.5)]
        black: f64,
    },
}

#[derive(Args, Debug)]
struct FnSource {
    /// Built-in function name or function table file.
    #[arg(long = "fn", default_value = "identity")]
    function: String,
}

#[derive(Subcommand, Debug)]
enum FnAction {
    Monotone(FnSource),
    Strict(FnSource),
    Continuous(FnSource),
    Image {
        #[command(flatten)]
        source: FnSource,
        #[arg(long)]
        cell: String,
    },
    Brouwer(FnSource),
}

struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = std::result::Result<(String, i32), Failure>;

/// Runs the command line `argv` (program name first), writing results to
/// standard output or `--out` and diagnostics to standard error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(&cli) {
        Ok((text, code)) => match &cli.global.out {
            Some(path) => match fs::write(path, &text) {
                Ok(()) => code,
                Err(e) => {
                    let _ = writeln!(err, "error: {}: {e}", path.display());
                    2
                }
            },
            None => {
                let _ = out.write_all(text.as_bytes());
                code
            }
        },
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn in_file(path: &Path, e: Error) -> Failure {
    Failure(format!("{}: {e}", path.display()))
}

fn load_pattern(name: &str) -> std::result::Result<AdjacencyPattern, Failure> {
    match by_name(name) {
        Ok(p) => Ok(p),
        Err(e) => {
            let path = Path::new(name);
            if path.is_file() || name.contains('/') || name.ends_with(".json") {
                AdjacencyPattern::from_json(&read(path)?).map_err(|e| in_file(path, e))
            } else {
                Err(e.into())
            }
        }
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn dispatch(cli: &Cli) -> Outcome {
    let g = &cli.global;
    let depth = |default: usize| g.depth.unwrap_or(default);
    let format = |default: Format, allowed: &[Format]| -> std::result::Result<Format, Failure> {
        let f = g.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(Failure(format!("format {f:?} is not available for this command").to_lowercase()))
        }
    };
    match &cli.command {
        Command::Pattern { action: PatternAction::List } => {
            let f = format(Format::Text, &[Format::Text, Format::Json])?;
            Ok(match f {
                Format::Json => (pretty(&BUILTIN_NAMES), 0),
                _ => (BUILTIN_NAMES.iter().map(|n| format!("{n}\n")).collect(), 0),
            })
        }
        Command::Pattern { action: PatternAction::Show } => {
            let p = load_pattern(g.pattern())?;
            let f = format(Format::Text, &[Format::Text, Format::Json])?;
            Ok(match f {
                Format::Json => (format!("{}\n", p.to_json()), 0),
                _ => {
                    let al = p.alphabet();
                    let mut s = format!("pattern {}\nalphabet {}\nbase", p.name(), al.names().join(" "));
                    for (a, b) in p.d().edges() {
                        s.push_str(&format!(" {}-{}", al.name(a), al.name(b)));
                    }
                    s.push('\n');
                    if let Some(gl) = p.gluing() {
                        s.push_str(&format!("gluing {}", gl.kind().as_str()));
                        if let Some(c) = gl.corner() {
                            s.push_str(&format!(" corner {}", al.name(c)));
                        }
                        s.push('\n');
                    }
                    s.push_str(&p.rule_table());
                    (s, 0)
                }
            })
        }
        Command::Graph { action: GraphAction::Gen } => {
            let p = load_pattern(g.pattern())?;
            let f = format(Format::Dot, &[Format::Dot, Format::Json, Format::Text, Format::Svg])?;
            let lg = level_graph(&p, depth(2))?;
            Ok(match f {
                Format::Dot => (graph_to_dot(&p, &lg), 0),
                Format::Json => (pretty(&graph_to_json(&p, &lg)), 0),
                Format::Svg => (render_svg(&p, &lg, None, true)?, 0),
                Format::Text => {
                    let al = p.alphabet();
                    let mut s = format!("{} depth {}: {} cells, {} edges\n", p.name(), lg.depth(), lg.node_count(), lg.edge_count());
                    for ((a, b), o) in lg.edges_with_origin() {
                        s.push_str(&format!(
                            "{} {} {}\n",
                            al.format_cell(&lg.cell(a as usize)),
                            al.format_cell(&lg.cell(b as usize)),
                            o.as_str()
                        ));
                    }
                    (s, 0)
                }
            })
        }
        Command::Check { property } => check(cli, property),
        Command::Borders => {
            let p = load_pattern(g.pattern())?;
            let f = format(Format::Text, &[Format::Text, Format::Json])?;
            let k = depth(2);
            let mut classifier = BorderClassifier::new(&p)?;
            let lg = level_graph(&p, k)?;
            let census = border_census(&p, k)?;
            let n = classifier.dimension();
            let al = p.alphabet();
            let ranks: Vec<(String, Option<usize>)> = (0..lg.node_count())
                .map(|i| {
                    let c = lg.cell(i);
                    (al.format_cell(&c), classifier.rank(&c).0)
                })
                .collect();
            Ok(match f {
                Format::Json => {
                    let cells: serde_json::Map<String, Value> =
                        ranks.iter().map(|(c, r)| (c.clone(), json!(r))).collect();
                    (pretty(&json!({"pattern": p.name(), "depth": k, "dimension": n, "census": census, "cells": cells})), 0)
                }
                _ => {
                    let mut s = format!("{} depth {k}, dimension {n}\n", p.name());
                    for (j, count) in census.iter().enumerate() {
                        if j < n {
                            s.push_str(&format!("rank {j}: {count}\n"));
                        } else {
                            s.push_str(&format!("interior: {count}\n"));
                        }
                    }
                    for (c, r) in &ranks {
                        match r {
                            Some(j) => s.push_str(&format!("{c} {j}\n")),
                            None => s.push_str(&format!("{c} -\n")),
                        }
                    }
                    (s, 0)
                }
            })
        }
        Command::Complex { action } => complex(cli, action),
        Command::Fn { action } => function(cli, action),
        Command::Render { complex, overlay } => {
            format(Format::Svg, &[Format::Svg])?;
            let (p, cx) = match complex {
                Some(path) => {
                    let cx = Complex::from_json(&read(path)?).map_err(|e| in_file(path, e))?;
                    (cx.pattern().clone(), Some(cx))
                }
                None => (load_pattern(g.pattern())?, None),
            };
            let k = cx.as_ref().map_or(depth(2), |c| c.depth());
            let lg = level_graph(&p, k)?;
            Ok((render_svg(&p, &lg, cx.as_ref(), *overlay)?, 0))
        }
    }
}

fn property_output(r: &PropertyReport, f: Format) -> (String, i32) {
    let code = if r.holds { 0 } else { 1 };
    match f {
        Format::Json => (pretty(r), code),
        _ => {
            let mut s = format!("{} {}: {}\n", r.property, r.pattern, if r.holds { "holds" } else { "fails" });
            for n in &r.notes {
                s.push_str(&format!("  {n}\n"));
            }
            for w in &r.witnesses {
                s.push_str(&format!("  witness: {w}\n"));
            }
            (s, code)
        }
    }
}

fn check(cli: &Cli, property: &CheckProperty) -> Outcome {
    let g = &cli.global;
    let p = load_pattern(g.pattern())?;
    let f = g.format.unwrap_or(Format::Text);
    if !matches!(f, Format::Text | Format::Json) {
        return Err(Failure("check output is text or json".into()));
    }
    match property {
        CheckProperty::Refinement => {
            let r = check_refinement(&p, g.depth.unwrap_or(4))?;
            let code = if r.passed() { 0 } else { 1 };
            Ok(match f {
                Format::Json => (pretty(&r), code),
                _ => {
                    let mut s = format!(
                        "refinement {} up to depth {}: {}\n",
                        p.name(),
                        r.max_depth,
                        if r.passed() { "holds" } else { "fails" }
                    );
                    for v in &r.violations {
                        s.push_str(&format!("  depth {}: {} {} {:?}\n", v.depth, v.smaller, v.larger, v.kind));
                    }
                    (s, code)
                }
            })
        }
        CheckProperty::Connectivity => {
            let r = connectivity(&p, g.depth.unwrap_or(4))?;
            let code = if r.all_connected() { 0 } else { 1 };
            Ok(match f {
                Format::Json => (pretty(&r), code),
                _ => {
                    let mut s = format!("connectivity {}: {}\n", p.name(), if code == 0 { "holds" } else { "fails" });
                    for l in &r.levels {
                        s.push_str(&format!("  depth {}: {} component(s)\n", l.depth, l.components));
                    }
                    (s, code)
                }
            })
        }
        CheckProperty::Indiscernibility => Ok(property_output(&check_indiscernibility(&p), f)),
        CheckProperty::Homogeneity => Ok(property_output(&check_homogeneity(&p, g.depth.unwrap_or(3))?, f)),
        CheckProperty::Dimension => {
            let d = dimension(&p);
            let code = if d.is_some() { 0 } else { 1 };
            Ok(match f {
                Format::Json => (pretty(&json!({"pattern": p.name(), "dimension": d})), code),
                _ => match d {
                    Some(n) => (format!("dimension {}: {n}\n", p.name()), code),
                    None => (format!("dimension {}: undefined\n", p.name()), code),
                },
            })
        }
    }
}

fn load_complex(cli: &Cli, src: &ComplexSource) -> std::result::Result<Complex, Failure> {
    match (&src.complex, &src.bitmap) {
        (Some(path), _) => Complex::from_json(&read(path)?).map_err(|e| in_file(path, e)),
        (None, Some(path)) => {
            let bytes = fs::read(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            let p = load_pattern(cli.global.pattern())?;
            Complex::from_bitmap(&p, &bytes).map_err(|e| in_file(path, e))
        }
        (None, None) => Err(Failure("give --complex <file> or --bitmap <file>".into())),
    }
}

fn complex(cli: &Cli, action: &ComplexAction) -> Outcome {
    let g = &cli.global;
    match action {
        ComplexAction::Segments(src) => {
            let cx = load_complex(cli, src)?;
            match g.format.unwrap_or(Format::Text) {
                Format::Json => Ok((pretty(&segments_to_json(&cx)), 0)),
                Format::Text => {
                    let seg = cx.segments();
                    let mut s = format!("{} segments\n", seg.len());
                    for x in seg.segments() {
                        let tag = if x.contains_border { " border" } else { "" };
                        s.push_str(&format!("{} color {} size {}{tag}\n", x.id, x.color, x.size));
                    }
                    Ok((s, 0))
                }
                _ => Err(Failure("segments output is text or json".into())),
            }
        }
        ComplexAction::Tree(src) => {
            let cx = load_complex(cli, src)?;
            let tree = cx.segment_adjacency();
            match g.format.unwrap_or(Format::Text) {
                Format::Json => Ok((pretty(&shape_tree_to_json(&tree)), 0)),
                Format::Dot => Ok((shape_tree_to_dot(&tree), 0)),
                Format::Text => {
                    let mut s = format!(
                        "{} segments, {} edges, tree: {}, bipartite: {}\n",
                        tree.nodes.len(),
                        tree.edges.len(),
                        tree.is_tree(),
                        tree.is_bipartite()
                    );
                    for (a, b) in &tree.edges {
                        s.push_str(&format!("{a} {b}\n"));
                    }
                    Ok((s, 0))
                }
                Format::Svg => Err(Failure("tree output is text, json or dot".into())),
            }
        }
        ComplexAction::Path { source, from, to } => {
            let cx = load_complex(cli, source)?;
            let al = cx.pattern().alphabet().clone();
            let node = |s: &str| -> std::result::Result<Node, Failure> {
                if s == "border" {
                    Ok(Node::Border)
                } else {
                    Ok(Node::Cell(al.parse_cell(s)?))
                }
            };
            let path = cx.path(&node(from)?, &node(to)?)?;
            let names: Option<Vec<String>> = path.map(|p| {
                p.iter()
                    .map(|n| match n {
                        Node::Border => "border".to_string(),
                        Node::Cell(c) => al.format_cell(c),
                    })
                    .collect()
            });
            let code = if names.is_some() { 0 } else { 1 };
            Ok(match g.format.unwrap_or(Format::Text) {
                Format::Json => (pretty(&json!({"path": names})), code),
                _ => match names {
                    Some(n) => (format!("{}\n", n.join(" ")), code),
                    None => ("no path\n".into(), code),
                },
            })
        }
        ComplexAction::Sample { samples, black } => {
            if !(0.0..=1.0).contains(black) {
                return Err(Failure("--black must lie in [0, 1]".into()));
            }
            let p = load_pattern(g.pattern())?;
            let space = Arc::new(CellSpace::new(&p, g.depth.unwrap_or(4))?);
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let (mut bipartite, mut trees, mut colored) = (0usize, 0usize, 0usize);
            let mut non_trees = Vec::new();
            for i in 0..*samples {
                let cx = Complex::random(space.clone(), &mut rng, *black);
                let t = cx.segment_adjacency();
                bipartite += t.is_bipartite() as usize;
                colored += t.is_properly_colored() as usize;
                if t.is_tree() {
                    trees += 1;
                } else {
                    non_trees.push(i);
                }
            }
            let code = if bipartite == *samples && colored == *samples { 0 } else { 1 };
            let summary = json!({
                "pattern": p.name(),
                "depth": space.depth(),
                "seed": g.seed,
                "samples": samples,
                "bipartite": bipartite,
                "properly_colored": colored,
                "trees": trees,
                "non_tree_samples": non_trees,
            });
            Ok(match g.format.unwrap_or(Format::Text) {
                Format::Json => (pretty(&summary), code),
                _ => (
                    format!(
                        "{samples} samples of {} depth {} (seed {}): {bipartite} bipartite, {trees} trees, {} non-trees\n",
                        p.name(),
                        space.depth(),
                        g.seed,
                        non_trees.len()
                    ),
                    code,
                ),
            })
        }
    }
}

fn load_function(cli: &Cli, name: &str) -> std::result::Result<CellFunction, Failure> {
    if crate::function::BUILTIN_FUNCTIONS.contains(&name) {
        let domain = cli.global.pattern.as_deref().map(load_pattern).transpose()?;
        return Ok(CellFunction::builtin(name, domain.as_ref())?);
    }
    let path = Path::new(name);
    if !path.is_file() {
        return Err(Failure(format!("`{name}` is neither a built-in function nor a file")));
    }
    let name = path.file_stem().map_or("table".into(), |s| s.to_string_lossy().into_owned());
    CellFunction::from_json(name, &read(path)?).map_err(|e| in_file(path, e))
}

fn report_output(r: &FunctionReport, f: Format) -> (String, i32) {
    let code = if r.holds { 0 } else { 1 };
    match f {
        Format::Json => (pretty(r), code),
        _ => {
            let mut s = format!(
                "{} {} up to depth {}: {}\n",
                r.property,
                r.function,
                r.depth,
                if r.holds { "holds" } else { "fails" }
            );
            if let Some(u) = r.unverified {
                s.push_str(&format!("  {u} cells at depth {} unverified\n", r.depth));
            }
            for v in &r.violations {
                if v.x == v.y {
                    s.push_str(&format!("  depth {}: {} -> {}\n", v.depth, v.x, v.fx));
                } else {
                    s.push_str(&format!("  depth {}: {} {} -> {} {}\n", v.depth, v.x, v.y, v.fx, v.fy));
                }
            }
            if r.violation_count > r.violations.len() {
                s.push_str(&format!("  ... {} more\n", r.violation_count - r.violations.len()));
            }
            (s, code)
        }
    }
}

fn function(cli: &Cli, action: &FnAction) -> Outcome {
    let g = &cli.global;
    let f = g.format.unwrap_or(Format::Text);
    if !matches!(f, Format::Text | Format::Json) {
        return Err(Failure("fn output is text or json".into()));
    }
    let k = g.depth.unwrap_or(4);
    match action {
        FnAction::Monotone(src) => Ok(report_output(&is_monotonic(&load_function(cli, &src.function)?, k)?, f)),
        FnAction::Strict(src) => Ok(report_output(&is_strict(&load_function(cli, &src.function)?, k)?, f)),
        FnAction::Continuous(src) => Ok(report_output(&is_continuous(&load_function(cli, &src.function)?, k)?, f)),
        FnAction::Image { source, cell } => {
            let func = load_function(cli, &source.function)?;
            let c: Cell = func.domain().alphabet().parse_cell(cell)?;
            let img = func.codomain().alphabet().format_cell(&stream_image(&func, &c)?);
            Ok(match f {
                Format::Json => (pretty(&json!({"cell": cell, "image": img})), 0),
                _ => (format!("{img}\n"), 0),
            })
        }
        FnAction::Brouwer(src) => {
            let func = load_function(cli, &src.function)?;
            match brouwer_witness(&func, k)? {
                Some(w) => {
                    let v = w.to_json(func.domain().alphabet(), func.codomain().alphabet());
                    Ok((pretty(&json!({"function": func.name(), "depth": k, "witness": v})), 1))
                }
                None => Ok(match f {
                    Format::Json => (pretty(&json!({"function": func.name(), "depth": k, "witness": null})), 0),
                    _ => (format!("no witness for {} up to depth {k}\n", func.name()), 0),
                }),
            }
        }
    }
}
