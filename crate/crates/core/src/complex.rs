//! Coloured complexes: a colouring of all cells of one depth together with
//! a single black border element. Segments are the connected same-colour
//! regions, and the segment adjacency graph is the shape tree.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adjacency::{level_graph, LevelGraph};
use crate::cell::Cell;
use crate::error::{Error, Result};
use crate::geometry::euclid_cell;
use crate::pattern::{AdjacencyPattern, PatternRef};
use crate::structure::BorderClassifier;

pub const WHITE: u8 = 1;
pub const BLACK: u8 = 2;

/// Segment id reserved for cells outside the complex.
pub const OUT_OF_DOMAIN: u32 = 1;
/// Segment id of the border element.
pub const BORDER_SEGMENT: u32 = 2;

/// A cell of the complex or the border element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Cell(Cell),
    Border,
}

/// Level graph of one depth with border flags, shared by all complexes
/// over it.
#[derive(Clone, Debug)]
pub struct CellSpace {
    pattern: AdjacencyPattern,
    graph: LevelGraph,
    border: Vec<bool>,
}

impl CellSpace {
    /// Fails unless the pattern has a dimension (so borders are defined).
    pub fn new(p: &AdjacencyPattern, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::DepthTooSmall { min: 1, got: 0 });
        }
        let mut classifier = BorderClassifier::new(p)?;
        let mut graph = level_graph(p, depth)?;
        classifier.annotate(&mut graph);
        let border = graph.border_flags().expect("annotated").to_vec();
        Ok(Self { pattern: p.clone(), graph, border })
    }

    pub fn pattern(&self) -> &AdjacencyPattern {
        &self.pattern
    }

    pub fn depth(&self) -> usize {
        self.graph.depth()
    }

    pub fn graph(&self) -> &LevelGraph {
        &self.graph
    }

    pub fn cell_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn is_border_cell(&self, index: usize) -> bool {
        self.border[index]
    }

    fn node_index(&self, n: &Node) -> Option<usize> {
        match n {
            Node::Border => Some(self.cell_count()),
            Node::Cell(c) => {
                if c.depth() != self.depth() || self.pattern.alphabet().check_cell(c).is_err() {
                    None
                } else {
                    self.graph.index(c)
                }
            }
        }
    }

    /// Cell-cell adjacency at this depth, extended by cell-border adjacency
    /// for border cells. The border is not adjacent to itself.
    pub fn bordered_adjacency(&self, a: &Node, b: &Node) -> bool {
        let n = self.cell_count();
        match (self.node_index(a), self.node_index(b)) {
            (Some(i), Some(j)) if i == n && j == n => false,
            (Some(i), Some(j)) if i == n => self.border[j],
            (Some(i), Some(j)) if j == n => self.border[i],
            (Some(i), Some(j)) => self.graph.contains_edge(i, j),
            _ => false,
        }
    }
}

/// A total colouring of the cells of a [`CellSpace`]. Colour 1 is white,
/// 2 is black; further colours are allowed. The border is always black.
#[derive(Clone, Debug)]
pub struct Complex {
    space: Arc<CellSpace>,
    colors: Vec<u8>,
}

impl PartialEq for Complex {
    fn eq(&self, other: &Self) -> bool {
        self.space.pattern == other.space.pattern
            && self.depth() == other.depth()
            && self.colors == other.colors
    }
}

impl Complex {
    pub fn new(p: &AdjacencyPattern, depth: usize, colors: Vec<u8>) -> Result<Self> {
        Self::in_space(Arc::new(CellSpace::new(p, depth)?), colors)
    }

    /// Colours are indexed by cell code (lexicographic order).
    pub fn in_space(space: Arc<CellSpace>, colors: Vec<u8>) -> Result<Self> {
        if colors.len() != space.cell_count() {
            return Err(Error::InvalidComplex(format!(
                "{} colours given for {} cells",
                colors.len(),
                space.cell_count()
            )));
        }
        if colors.contains(&0) {
            return Err(Error::InvalidComplex("colour 0 is not allowed".into()));
        }
        Ok(Self { space, colors })
    }

    pub fn uniform(p: &AdjacencyPattern, depth: usize, color: u8) -> Result<Self> {
        let space = CellSpace::new(p, depth)?;
        let n = space.cell_count();
        Self::in_space(Arc::new(space), vec![color; n])
    }

    /// Each cell black with probability `black`, otherwise white.
    pub fn random<R: Rng>(space: Arc<CellSpace>, rng: &mut R, black: f64) -> Self {
        let colors = (0..space.cell_count())
            .map(|_| if rng.gen_bool(black) { BLACK } else { WHITE })
            .collect();
        Self { space, colors }
    }

    pub fn space(&self) -> &Arc<CellSpace> {
        &self.space
    }

    pub fn pattern(&self) -> &AdjacencyPattern {
        &self.space.pattern
    }

    pub fn depth(&self) -> usize {
        self.space.depth()
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn color(&self, n: &Node) -> Option<u8> {
        match self.space.node_index(n)? {
            i if i == self.colors.len() => Some(BLACK),
            i => Some(self.colors[i]),
        }
    }

    pub fn set_color(&mut self, c: &Cell, color: u8) -> Result<()> {
        if color == 0 {
            return Err(Error::InvalidComplex("colour 0 is not allowed".into()));
        }
        let i = self
            .space
            .node_index(&Node::Cell(c.clone()))
            .ok_or_else(|| Error::OutOfDomain(self.pattern().alphabet().format_cell(c)))?;
        self.colors[i] = color;
        Ok(())
    }

    pub fn bordered_adjacency(&self, a: &Node, b: &Node) -> bool {
        self.space.bordered_adjacency(a, b)
    }

    fn node(&self, i: usize) -> Node {
        if i == self.colors.len() {
            Node::Border
        } else {
            Node::Cell(self.space.graph.cell(i))
        }
    }

    fn node_color(&self, i: usize) -> u8 {
        self.colors.get(i).copied().unwrap_or(BLACK)
    }

    /// Same-colour neighbours of node `i`, the border node included.
    fn same_color_neighbors(&self, i: usize) -> Vec<usize> {
        let n = self.colors.len();
        let color = self.node_color(i);
        if i == n {
            return (0..n).filter(|&j| self.space.border[j] && self.colors[j] == BLACK).collect();
        }
        let mut out: Vec<usize> = self
            .space
            .graph
            .neighbors(i)
            .iter()
            .map(|&j| j as usize)
            .filter(|&j| self.colors[j] == color)
            .collect();
        if color == BLACK && self.space.border[i] {
            out.push(n);
        }
        out
    }

    pub fn segments(&self) -> SegmentMap {
        let n = self.colors.len();
        let mut parent: Vec<usize> = (0..=n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut union = |a: usize, b: usize| {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra.max(rb)] = ra.min(rb);
            }
        };
        for &(i, j) in self.space.graph.edges() {
            let (i, j) = (i as usize, j as usize);
            if self.colors[i] == self.colors[j] {
                union(i, j);
            }
        }
        for i in 0..n {
            if self.space.border[i] && self.colors[i] == BLACK {
                union(i, n);
            }
        }

        let mut id_of_root: BTreeMap<usize, u32> = BTreeMap::new();
        let border_root = find(&mut parent, n);
        id_of_root.insert(border_root, BORDER_SEGMENT);
        let mut ids = vec![0u32; n];
        let mut segments = vec![Segment { id: BORDER_SEGMENT, color: BLACK, size: 0, contains_border: true }];
        for (i, slot) in ids.iter_mut().enumerate() {
            let root = find(&mut parent, i);
            let next = segments.len() as u32 + BORDER_SEGMENT;
            let id = *id_of_root.entry(root).or_insert(next);
            if id == next {
                segments.push(Segment { id, color: self.colors[i], size: 0, contains_border: false });
            }
            segments[(id - BORDER_SEGMENT) as usize].size += 1;
            *slot = id;
        }
        SegmentMap { depth: self.depth(), ids, colors: self.colors.clone(), segments }
    }

    /// `(segment id, colour)` of a node; `(1, 0)` for anything outside the
    /// complex, including cells of another depth.
    pub fn q_e(&self, k: usize, n: &Node) -> (u32, u8) {
        if k != self.depth() {
            return (OUT_OF_DOMAIN, 0);
        }
        self.segments().query(self, n)
    }

    /// Segment adjacency graph, rooted at the border segment.
    pub fn segment_adjacency(&self) -> ShapeTree {
        self.shape_tree(&self.segments())
    }

    pub fn shape_tree(&self, seg: &SegmentMap) -> ShapeTree {
        let n = self.colors.len();
        let mut edges = BTreeSet::new();
        let mut add = |a: u32, b: u32| {
            if a != b {
                edges.insert((a.min(b), a.max(b)));
            }
        };
        for &(i, j) in self.space.graph.edges() {
            let (i, j) = (i as usize, j as usize);
            if self.colors[i] != self.colors[j] {
                add(seg.ids[i], seg.ids[j]);
            }
        }
        for i in 0..n {
            if self.space.border[i] && self.colors[i] != BLACK {
                add(seg.ids[i], BORDER_SEGMENT);
            }
        }
        ShapeTree::new(seg.segments.clone(), edges.into_iter().collect())
    }

    /// Same-colour path from `a` to `b` through successively adjacent
    /// nodes, or `None` if they lie in different segments.
    pub fn path(&self, a: &Node, b: &Node) -> Result<Option<Vec<Node>>> {
        let fmt = |n: &Node| match n {
            Node::Border => "border".to_string(),
            Node::Cell(c) => self.pattern().alphabet().format_cell(c),
        };
        let ia = self.space.node_index(a).ok_or_else(|| Error::OutOfDomain(fmt(a)))?;
        let ib = self.space.node_index(b).ok_or_else(|| Error::OutOfDomain(fmt(b)))?;
        let (ca, cb) = (self.node_color(ia), self.node_color(ib));
        if ca != cb {
            return Err(Error::ColorMismatch { left: ca, right: cb });
        }
        let mut prev = vec![usize::MAX; self.colors.len() + 1];
        prev[ia] = ia;
        let mut queue = VecDeque::from([ia]);
        while let Some(v) = queue.pop_front() {
            if v == ib {
                let mut path = vec![v];
                let mut cur = v;
                while cur != ia {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.reverse();
                return Ok(Some(path.into_iter().map(|i| self.node(i)).collect()));
            }
            for w in self.same_color_neighbors(v) {
                if prev[w] == usize::MAX {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        Ok(None)
    }

    pub fn to_file(&self) -> ComplexFile {
        let mut counts: BTreeMap<u8, usize> = BTreeMap::new();
        for &c in &self.colors {
            *counts.entry(c).or_default() += 1;
        }
        // most frequent colour, smallest on ties
        let default = counts.iter().max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0))).map(|(&c, _)| c).unwrap_or(WHITE);
        let al = self.pattern().alphabet();
        let colors = self
            .colors
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != default)
            .map(|(i, &c)| (al.format_cell(&self.space.graph.cell(i)), c))
            .collect();
        ComplexFile { pattern: PatternRef::of(self.pattern()), depth: self.depth(), colors, default }
    }

    pub fn from_file(file: &ComplexFile) -> Result<Self> {
        let p = file.pattern.resolve()?;
        let space = CellSpace::new(&p, file.depth)?;
        let mut colors = vec![file.default; space.cell_count()];
        for (word, &color) in &file.colors {
            let c = p.alphabet().parse_cell(word)?;
            let i = space
                .node_index(&Node::Cell(c))
                .ok_or_else(|| Error::InvalidComplex(format!("cell `{word}` is not at depth {}", file.depth)))?;
            colors[i] = color;
        }
        Self::in_space(Arc::new(space), colors)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("complex serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ComplexFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    /// Reads a square PBM/PGM image of side `2^k` as a complex over the
    /// Euclidean plane. Intensity 0 is black, anything else white; the top
    /// row of the image is the top row of the square.
    pub fn from_bitmap(p: &AdjacencyPattern, bytes: &[u8]) -> Result<Self> {
        if p.d().hypercube_dimension() != Some(2) {
            return Err(Error::UnsupportedPattern(format!("bitmaps need a planar Euclidean pattern, not {}", p.name())));
        }
        let img = image::load_from_memory_with_format(bytes, image::ImageFormat::Pnm)
            .map_err(|e| Error::Parse(format!("bitmap: {e}")))?
            .into_luma8();
        let (w, h) = img.dimensions();
        if w != h || !w.is_power_of_two() || w < 2 {
            return Err(Error::InvalidComplex(format!("bitmap is {w}x{h}, expected a square of side 2^k")));
        }
        let depth = w.trailing_zeros() as usize;
        let space = CellSpace::new(p, depth)?;
        let mut colors = vec![WHITE; space.cell_count()];
        for (x, y, px) in img.enumerate_pixels() {
            let cell = euclid_cell(&[x as u64, (h - 1 - y) as u64], depth);
            let i = space.graph.index(&cell).expect("cell in range");
            colors[i] = if px.0[0] == 0 { BLACK } else { WHITE };
        }
        Self::in_space(Arc::new(space), colors)
    }
}

/// On-disk complex: colours of the listed cells, `default` for the rest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub pattern: PatternRef,
    pub depth: usize,
    #[serde(default)]
    pub colors: BTreeMap<String, u8>,
    pub default: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub id: u32,
    pub color: u8,
    /// Number of cells, not counting the border element.
    pub size: usize,
    pub contains_border: bool,
}

/// Segment id of every cell; the realisation of `q_e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SegmentMap {
    depth: usize,
    ids: Vec<u32>,
    colors: Vec<u8>,
    segments: Vec<Segment>,
}

impl SegmentMap {
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Segment ids by cell code.
    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn segment(&self, id: u32) -> Option<&Segment> {
        id.checked_sub(BORDER_SEGMENT).and_then(|i| self.segments.get(i as usize))
    }

    pub fn query(&self, cx: &Complex, n: &Node) -> (u32, u8) {
        match cx.space.node_index(n) {
            Some(i) if i == self.ids.len() => (BORDER_SEGMENT, BLACK),
            Some(i) if cx.depth() == self.depth => (self.ids[i], self.colors[i]),
            _ => (OUT_OF_DOMAIN, 0),
        }
    }
}

/// Segments joined when some pair of bordered-adjacent nodes of different
/// colours spans them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeTree {
    pub nodes: Vec<Segment>,
    pub edges: Vec<(u32, u32)>,
    pub root: u32,
}

impl ShapeTree {
    fn new(nodes: Vec<Segment>, edges: Vec<(u32, u32)>) -> Self {
        Self { nodes, edges, root: BORDER_SEGMENT }
    }

    fn index(&self, id: u32) -> usize {
        (id - BORDER_SEGMENT) as usize
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(a, b) in &self.edges {
            adj[self.index(a)].push(self.index(b));
            adj[self.index(b)].push(self.index(a));
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let adj = self.adjacency();
        let mut seen = vec![false; self.nodes.len()];
        let mut stack = vec![self.index(self.root)];
        seen[stack[0]] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().all(|&b| b)
    }

    pub fn is_tree(&self) -> bool {
        self.edges.len() + 1 == self.nodes.len() && self.is_connected()
    }

    /// Every edge joins segments of different colours.
    pub fn is_properly_colored(&self) -> bool {
        self.edges
            .iter()
            .all(|&(a, b)| self.nodes[self.index(a)].color != self.nodes[self.index(b)].color)
    }

    /// Two-colourable as a graph.
    pub fn is_bipartite(&self) -> bool {
        let adj = self.adjacency();
        let mut side = vec![u8::MAX; self.nodes.len()];
        for start in 0..self.nodes.len() {
            if side[start] != u8::MAX {
                continue;
            }
            side[start] = 0;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[v];
                        queue.push_back(w);
                    } else if side[w] == side[v] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn degree(&self, id: u32) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == id || b == id).count()
    }
}
