//! Level-by-level generation of the adjacency relation.
//!
//! Level 1 is the base adjacency on the alphabet. Level `k + 1` is the
//! union of
//!
//! * the sibling lift: `x.s -- x.t` for every depth-`k` cell `x` and every
//!   base pair `(s, t)` (plus any declared sibling extras),
//! * rule application: for every non-gluing depth-`k` edge `x' -- y'` with
//!   `x'` lexicographically smaller and top pair `(s, t)`, the edges
//!   `x'.u -- y'.v` for each child pair `(u, v)` of the rule keyed `(s, t)`,
//! * gluing edges of the pattern's border gluing, if any.
//!
//! Cells of depth `k` are indexed by their base-`|alphabet|` code, so node
//! order is lexicographic order and edges are stored as sorted index pairs.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::cell::{Cell, Symbol};
use crate::error::{Error, Result};
use crate::pattern::AdjacencyPattern;

/// Largest level graph we are willing to materialise.
pub const MAX_NODES: u64 = 1 << 24;

/// How an edge entered a level graph. An edge produced by several
/// mechanisms keeps the first one in this order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeProvenance {
    BaseLift,
    Rule,
    Gluing,
}

impl EdgeProvenance {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeProvenance::BaseLift => "base_lift",
            EdgeProvenance::Rule => "rule",
            EdgeProvenance::Gluing => "gluing",
        }
    }
}

/// The adjacency graph on all cells of one depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelGraph {
    depth: usize,
    arity: usize,
    node_count: usize,
    edges: Vec<(u32, u32)>,
    origins: Vec<EdgeProvenance>,
    offsets: Vec<usize>,
    adjacency: Vec<u32>,
    border_flags: Option<Vec<bool>>,
}

impl LevelGraph {
    fn from_edge_map(depth: usize, arity: usize, node_count: usize, map: HashMap<(u32, u32), EdgeProvenance>) -> Self {
        let mut pairs: Vec<_> = map.into_iter().collect();
        pairs.sort_unstable();
        let (edges, origins): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();

        let mut degree = vec![0usize; node_count];
        for &(a, b) in &edges {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(node_count + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets.clone();
        let mut adjacency = vec![0u32; offsets[node_count]];
        for &(a, b) in &edges {
            adjacency[fill[a as usize]] = b;
            fill[a as usize] += 1;
            adjacency[fill[b as usize]] = a;
            fill[b as usize] += 1;
        }
        for i in 0..node_count {
            adjacency[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Self { depth, arity, node_count, edges, origins, offsets, adjacency, border_flags: None }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn cell(&self, index: usize) -> Cell {
        Cell::decode(index as u64, self.arity as u64, self.depth)
    }

    /// Node index of a cell of this depth.
    pub fn index(&self, c: &Cell) -> Option<usize> {
        (c.depth() == self.depth && c.symbols().iter().all(|s| s.id() < self.arity))
            .then(|| c.encode(self.arity as u64) as usize)
    }

    /// Edges as `(smaller index, larger index)`, sorted.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn origins(&self) -> &[EdgeProvenance] {
        &self.origins
    }

    pub fn edges_with_origin(&self) -> impl Iterator<Item = ((u32, u32), EdgeProvenance)> + '_ {
        self.edges.iter().copied().zip(self.origins.iter().copied())
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.adjacency[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    pub fn contains_edge(&self, i: usize, j: usize) -> bool {
        i < self.node_count && j < self.node_count && self.neighbors(i).binary_search(&(j as u32)).is_ok()
    }

    pub fn origin(&self, i: usize, j: usize) -> Option<EdgeProvenance> {
        let key = (i.min(j) as u32, i.max(j) as u32);
        self.edges.binary_search(&key).ok().map(|p| self.origins[p])
    }

    /// Connected component label per node, labels in order of first member.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let mut label = vec![usize::MAX; self.node_count];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..self.node_count {
            if label[start] != usize::MAX {
                continue;
            }
            label[start] = count;
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                for &w in self.neighbors(v) {
                    if label[w as usize] == usize::MAX {
                        label[w as usize] = count;
                        queue.push_back(w as usize);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    pub fn is_connected(&self) -> bool {
        self.component_labels().1 == 1
    }

    pub fn border_flags(&self) -> Option<&[bool]> {
        self.border_flags.as_deref()
    }

    pub(crate) fn set_border_flags(&mut self, flags: Vec<bool>) {
        debug_assert_eq!(flags.len(), self.node_count);
        self.border_flags = Some(flags);
    }
}

fn node_count(arity: usize, depth: usize) -> Result<usize> {
    let cells = (arity as u128).checked_pow(depth as u32).unwrap_or(u128::MAX);
    if cells > MAX_NODES as u128 {
        return Err(Error::DepthTooLarge { depth, cells });
    }
    Ok(cells as usize)
}

/// A top pair with no rule, found while refining an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MissingRule {
    pub depth: usize,
    pub smaller: u32,
    pub larger: u32,
}

fn first_level(p: &AdjacencyPattern) -> Result<LevelGraph> {
    let arity = p.arity();
    let mut map = HashMap::new();
    for (s, t) in p.d().edges() {
        map.insert((s.0 as u32, t.0 as u32), EdgeProvenance::BaseLift);
    }
    add_gluing(p, 1, &mut map)?;
    Ok(LevelGraph::from_edge_map(1, arity, arity, map))
}

/// Builds level `prev.depth + 1`. Missing rules are reported through
/// `missing`; the offending edge then simply has no children.
fn next_level(p: &AdjacencyPattern, prev: &LevelGraph, missing: &mut Vec<MissingRule>) -> Result<LevelGraph> {
    let arity = p.arity();
    let depth = prev.depth + 1;
    let count = node_count(arity, depth)?;
    let a = arity as u32;
    let mut map: HashMap<(u32, u32), EdgeProvenance> = HashMap::with_capacity(prev.edge_count() * 4 + count);

    let base: Vec<(Symbol, Symbol)> = p.d().edges().collect();
    let extras: Vec<(Symbol, Symbol)> = p.sibling_extras().collect();
    for x in 0..prev.node_count as u32 {
        for &(s, t) in base.iter().chain(extras.iter()) {
            let (i, j) = (x * a + s.0 as u32, x * a + t.0 as u32);
            map.entry((i.min(j), i.max(j))).or_insert(EdgeProvenance::BaseLift);
        }
    }

    for ((lo, hi), origin) in prev.edges_with_origin() {
        if origin == EdgeProvenance::Gluing {
            continue;
        }
        let key = (Symbol((lo % a) as u8), Symbol((hi % a) as u8));
        match p.rule(key) {
            Some(rule) => {
                for &(u, v) in rule.children() {
                    let i = lo * a + u.0 as u32;
                    let j = hi * a + v.0 as u32;
                    map.entry((i.min(j), i.max(j))).or_insert(EdgeProvenance::Rule);
                }
            }
            None => missing.push(MissingRule { depth: prev.depth, smaller: lo, larger: hi }),
        }
    }

    add_gluing(p, depth, &mut map)?;
    Ok(LevelGraph::from_edge_map(depth, arity, count, map))
}

fn add_gluing(p: &AdjacencyPattern, depth: usize, map: &mut HashMap<(u32, u32), EdgeProvenance>) -> Result<()> {
    if let Some(g) = p.gluing() {
        for (i, j) in crate::builtin::gluing_edges(p, g, depth)? {
            if i != j {
                map.entry((i.min(j), i.max(j))).or_insert(EdgeProvenance::Gluing);
            }
        }
    }
    Ok(())
}

fn missing_rule_error(p: &AdjacencyPattern, m: &MissingRule) -> Error {
    let al = p.alphabet();
    let a = p.arity() as u64;
    let lo = Cell::decode(m.smaller as u64, a, m.depth);
    let hi = Cell::decode(m.larger as u64, a, m.depth);
    Error::MissingRule {
        depth: m.depth,
        smaller: al.format_cell(&lo),
        larger: al.format_cell(&hi),
        key_left: al.name(Symbol((m.smaller as u64 % a) as u8)).to_string(),
        key_right: al.name(Symbol((m.larger as u64 % a) as u8)).to_string(),
    }
}

/// Level graphs of one pattern for depths `1..=max_depth`, built
/// incrementally.
#[derive(Clone, Debug)]
pub struct Levels<'p> {
    pattern: &'p AdjacencyPattern,
    levels: Vec<LevelGraph>,
}

impl<'p> Levels<'p> {
    pub fn new(pattern: &'p AdjacencyPattern) -> Self {
        Self { pattern, levels: Vec::new() }
    }

    /// Builds every level up to `k`; fails on the first missing rule.
    pub fn build(pattern: &'p AdjacencyPattern, k: usize) -> Result<Self> {
        let mut levels = Self::new(pattern);
        levels.extend_to(k)?;
        Ok(levels)
    }

    pub fn pattern(&self) -> &'p AdjacencyPattern {
        self.pattern
    }

    pub fn max_depth(&self) -> usize {
        self.levels.len()
    }

    pub fn extend_to(&mut self, k: usize) -> Result<()> {
        node_count(self.pattern.arity(), k)?;
        while self.levels.len() < k {
            let level = match self.levels.last() {
                None => first_level(self.pattern)?,
                Some(prev) => {
                    let mut missing = Vec::new();
                    let next = next_level(self.pattern, prev, &mut missing)?;
                    if let Some(m) = missing.first() {
                        return Err(missing_rule_error(self.pattern, m));
                    }
                    next
                }
            };
            self.levels.push(level);
        }
        Ok(())
    }

    /// Level `k`, which must already be built (`1 <= k <= max_depth`).
    pub fn get(&self, k: usize) -> &LevelGraph {
        &self.levels[k - 1]
    }

    pub fn level(&mut self, k: usize) -> Result<&LevelGraph> {
        if k == 0 {
            return Err(Error::DepthTooSmall { min: 1, got: 0 });
        }
        self.extend_to(k)?;
        Ok(&self.levels[k - 1])
    }

    pub fn into_vec(self) -> Vec<LevelGraph> {
        self.levels
    }

    pub fn adjacent_same_length(&mut self, x: &Cell, y: &Cell) -> Result<bool> {
        let al = self.pattern.alphabet();
        al.check_cell(x)?;
        al.check_cell(y)?;
        if x.depth() != y.depth() {
            return Err(Error::LengthMismatch { left: x.depth(), right: y.depth() });
        }
        if x.depth() == 0 {
            return Ok(false);
        }
        let g = self.level(x.depth())?;
        let (i, j) = (g.index(x).unwrap(), g.index(y).unwrap());
        Ok(g.contains_edge(i, j))
    }

    /// Cross-length adjacency. A shorter cell is adjacent to a longer one when
    /// one of its descendants at the longer depth is level-adjacent to it;
    /// prefix-related cells are never adjacent.
    pub fn adjacent_general(&mut self, x: &Cell, y: &Cell) -> Result<bool> {
        if x.depth() == y.depth() {
            return self.adjacent_same_length(x, y);
        }
        let al = self.pattern.alphabet();
        al.check_cell(x)?;
        al.check_cell(y)?;
        let (short, long) = if x.depth() < y.depth() { (x, y) } else { (y, x) };
        if short.is_prefix_of(long) {
            return Ok(false);
        }
        let g = self.level(long.depth())?;
        let shift = (g.arity() as u64).pow((long.depth() - short.depth()) as u32);
        let target = short.encode(g.arity() as u64);
        let li = g.index(long).unwrap();
        Ok(g.neighbors(li).iter().any(|&n| n as u64 / shift == target))
    }
}

pub fn level_graph(p: &AdjacencyPattern, k: usize) -> Result<LevelGraph> {
    if k == 0 {
        return Err(Error::DepthTooSmall { min: 1, got: 0 });
    }
    let mut levels = Levels::build(p, k)?;
    Ok(levels.levels.pop().unwrap())
}

pub fn adjacent_same_length(p: &AdjacencyPattern, x: &Cell, y: &Cell) -> Result<bool> {
    Levels::new(p).adjacent_same_length(x, y)
}

pub fn adjacent_general(p: &AdjacencyPattern, x: &Cell, y: &Cell) -> Result<bool> {
    Levels::new(p).adjacent_general(x, y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// No rule exists for the edge's top pair.
    MissingRule,
    /// The rule (or gluing) produced no edge between the two cells' children.
    NoChildEdge,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementViolation {
    pub depth: usize,
    pub smaller: String,
    pub larger: String,
    pub kind: ViolationKind,
}

/// Edges of levels `1..max_depth` that have no adjacent pair of children.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementReport {
    pub pattern: String,
    pub max_depth: usize,
    pub violations: Vec<RefinementViolation>,
}

impl RefinementReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that every edge at depth `k < max_depth` has at least one
/// adjacent pair of children at depth `k + 1`. Missing rules are collected
/// as violations instead of aborting generation.
pub fn check_refinement(p: &AdjacencyPattern, max_depth: usize) -> Result<RefinementReport> {
    if max_depth == 0 {
        return Err(Error::DepthTooSmall { min: 1, got: 0 });
    }
    let al = p.alphabet();
    let a = p.arity() as u32;
    let mut violations = Vec::new();
    let mut prev = first_level(p)?;
    for _ in 1..max_depth {
        let mut missing = Vec::new();
        let next = next_level(p, &prev, &mut missing)?;
        for m in &missing {
            violations.push(RefinementViolation {
                depth: m.depth,
                smaller: al.format_cell(&prev.cell(m.smaller as usize)),
                larger: al.format_cell(&prev.cell(m.larger as usize)),
                kind: ViolationKind::MissingRule,
            });
        }
        for &(lo, hi) in prev.edges() {
            if missing.iter().any(|m| m.smaller == lo && m.larger == hi) {
                continue;
            }
            let (hi_start, hi_end) = (hi * a, hi * a + a);
            let has_child = (lo * a..lo * a + a).any(|c| {
                next.neighbors(c as usize).iter().any(|&n| n >= hi_start && n < hi_end)
            });
            if !has_child {
                violations.push(RefinementViolation {
                    depth: prev.depth,
                    smaller: al.format_cell(&prev.cell(lo as usize)),
                    larger: al.format_cell(&prev.cell(hi as usize)),
                    kind: ViolationKind::NoChildEdge,
                });
            }
        }
        prev = next;
    }
    Ok(RefinementReport { pattern: p.name().to_string(), max_depth, violations })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelConnectivity {
    pub depth: usize,
    pub components: usize,
    pub connected: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityReport {
    pub pattern: String,
    pub levels: Vec<LevelConnectivity>,
}

impl ConnectivityReport {
    pub fn all_connected(&self) -> bool {
        self.levels.iter().all(|l| l.connected)
    }
}

pub fn connectivity(p: &AdjacencyPattern, max_depth: usize) -> Result<ConnectivityReport> {
    if max_depth == 0 {
        return Err(Error::DepthTooSmall { min: 1, got: 0 });
    }
    let levels = Levels::build(p, max_depth)?;
    let levels = levels
        .levels
        .iter()
        .map(|g| {
            let components = g.component_labels().1;
            LevelConnectivity { depth: g.depth(), components, connected: components == 1 }
        })
        .collect();
    Ok(ConnectivityReport { pattern: p.name().to_string(), levels })
}
