//! Border classification and the structural properties that single out
//! continua: indiscernibility of parts, homogeneity of cells, dimension.

use std::collections::HashMap;

use serde::Serialize;

use crate::adjacency::{LevelGraph, Levels};
use crate::cell::{Cell, Symbol};
use crate::error::{Error, Result};
use crate::pattern::{AdjacencyPattern, DPattern};

/// Depth used by [`dimension`] to decide homogeneity.
pub const DIMENSION_CHECK_DEPTH: usize = 3;

const MAX_WITNESSES: usize = 8;

/// Minimal `j` such that a cell is a `j`-border object; `None` for
/// interior cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BorderRank(pub Option<usize>);

impl BorderRank {
    pub fn is_border(self) -> bool {
        self.0.is_some()
    }
}

/// Outcome of a property check. A failing report always carries at least
/// one witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub pattern: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Memoised border ranks of symbol sets for one base graph and dimension.
///
/// A set `S` of symbols has rank `j` when `j + 1` is the size of the smallest
/// connected subset of the base graph containing `S`, provided `j < n`.
#[derive(Clone, Debug)]
pub(crate) struct RankTable {
    neighbors: Vec<u64>,
    arity: usize,
    dimension: usize,
    memo: HashMap<u64, Option<usize>>,
}

impl RankTable {
    pub(crate) fn new(d: &DPattern, dimension: usize) -> Self {
        assert!(d.size() <= 64, "rank table supports at most 64 symbols");
        Self { neighbors: d.neighbor_masks(), arity: d.size(), dimension, memo: HashMap::new() }
    }

    fn connected(&self, set: u64) -> bool {
        if set == 0 {
            return false;
        }
        let start = set & set.wrapping_neg();
        let mut seen = start;
        let mut frontier = start;
        while frontier != 0 {
            let mut next = 0;
            let mut f = frontier;
            while f != 0 {
                let s = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.neighbors[s] & set;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen == set
    }

    pub(crate) fn rank(&mut self, set: u64) -> Option<usize> {
        if let Some(&r) = self.memo.get(&set) {
            return r;
        }
        let r = self.compute(set);
        self.memo.insert(set, r);
        r
    }

    fn compute(&self, set: u64) -> Option<usize> {
        let size = set.count_ones() as usize;
        if size == 0 || size > self.dimension {
            return None;
        }
        let free: Vec<usize> = (0..self.arity).filter(|s| set & (1 << s) == 0).collect();
        // smallest connected superset of size at most `dimension`
        for extra in 0..=(self.dimension - size) {
            let mut found = false;
            for_each_combination(&free, extra, &mut |added| {
                if !found && self.connected(set | added) {
                    found = true;
                }
            });
            if found {
                return Some(size + extra - 1);
            }
        }
        None
    }
}

fn for_each_combination(items: &[usize], k: usize, f: &mut dyn FnMut(u64)) {
    fn go(items: &[usize], k: usize, start: usize, acc: u64, f: &mut dyn FnMut(u64)) {
        if k == 0 {
            f(acc);
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k {
                break;
            }
            go(items, k - 1, i + 1, acc | (1 << items[i]), f);
        }
    }
    go(items, k, 0, 0, f);
}

fn symbol_mask(c: &Cell) -> u64 {
    c.symbols().iter().fold(0, |m, s| m | (1 << s.0))
}

/// Border ranks per cell for a pattern whose dimension is known.
#[derive(Clone, Debug)]
pub struct BorderClassifier {
    table: RankTable,
    dimension: usize,
}

impl BorderClassifier {
    /// Fails with `UnsupportedPattern` when the pattern has no dimension.
    pub fn new(p: &AdjacencyPattern) -> Result<Self> {
        let n = dimension(p).ok_or_else(|| {
            Error::UnsupportedPattern(format!(
                "{} is not indiscernible and homogeneous, so borders are undefined",
                p.name()
            ))
        })?;
        Ok(Self::with_dimension(p, n))
    }

    /// Classifier for an assumed dimension, without checking the pattern.
    pub fn with_dimension(p: &AdjacencyPattern, dimension: usize) -> Self {
        Self { table: RankTable::new(p.d(), dimension), dimension }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn rank(&mut self, c: &Cell) -> BorderRank {
        BorderRank(self.table.rank(symbol_mask(c)))
    }

    /// Border flag of every cell of a level graph, by node index.
    pub fn flags(&mut self, g: &LevelGraph) -> Vec<bool> {
        let arity = g.arity();
        let mut masks = vec![0u64];
        for _ in 0..g.depth() {
            masks = masks.iter().flat_map(|m| (0..arity).map(move |s| m | (1 << s))).collect();
        }
        masks.into_iter().map(|m| self.table.rank(m).is_some()).collect()
    }

    pub fn annotate(&mut self, g: &mut LevelGraph) {
        let flags = self.flags(g);
        g.set_border_flags(flags);
    }
}

pub fn border_rank(p: &AdjacencyPattern, c: &Cell) -> Result<BorderRank> {
    p.alphabet().check_cell(c)?;
    if c.is_unit() {
        return Err(Error::DepthTooSmall { min: 1, got: 0 });
    }
    Ok(BorderClassifier::new(p)?.rank(c))
}

pub fn is_border(p: &AdjacencyPattern, c: &Cell) -> Result<bool> {
    border_rank(p, c).map(BorderRank::is_border)
}

/// Number of cells of each border rank at depth `k`; index `dimension`
/// counts interior cells.
pub fn border_census(p: &AdjacencyPattern, k: usize) -> Result<Vec<usize>> {
    let mut classifier = BorderClassifier::new(p)?;
    let n = classifier.dimension();
    let mut counts = vec![0usize; n + 1];
    for c in p.alphabet().cells_at_depth(k) {
        counts[classifier.rank(&c).0.unwrap_or(n)] += 1;
    }
    Ok(counts)
}

fn adjacency_matrix(d: &DPattern) -> Vec<Vec<bool>> {
    let n = d.size();
    let mut m = vec![vec![false; n]; n];
    for (s, t) in d.edges() {
        m[s.id()][t.id()] = true;
        m[t.id()][s.id()] = true;
    }
    m
}

/// Enumerates all automorphisms of a small graph, calling `f` with each.
fn for_each_automorphism(adj: &[Vec<bool>], f: &mut dyn FnMut(&[usize])) {
    let n = adj.len();
    let degree: Vec<usize> = adj.iter().map(|row| row.iter().filter(|&&b| b).count()).collect();
    let mut image = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn extend(
        i: usize,
        adj: &[Vec<bool>],
        degree: &[usize],
        image: &mut [usize],
        used: &mut [bool],
        f: &mut dyn FnMut(&[usize]),
    ) {
        let n = adj.len();
        if i == n {
            f(image);
            return;
        }
        for j in 0..n {
            if used[j] || degree[j] != degree[i] {
                continue;
            }
            if (0..i).all(|h| adj[i][h] == adj[j][image[h]]) {
                image[i] = j;
                used[j] = true;
                extend(i + 1, adj, degree, image, used, f);
                used[j] = false;
                image[i] = usize::MAX;
            }
        }
    }
    extend(0, adj, &degree, &mut image, &mut used, f);
}

/// Passes when the automorphism group of the base graph acts transitively
/// on the parts.
pub fn check_indiscernibility(p: &AdjacencyPattern) -> PropertyReport {
    let al = p.alphabet();
    let adj = adjacency_matrix(p.d());
    let mut orbit = vec![false; adj.len()];
    let mut group_order = 0usize;
    for_each_automorphism(&adj, &mut |image| {
        orbit[image[0]] = true;
        group_order += 1;
    });
    let outside = orbit.iter().position(|&b| !b);
    let witnesses = match outside {
        Some(v) => vec![al.name(Symbol(0)).to_string(), al.name(Symbol(v as u8)).to_string()],
        None => Vec::new(),
    };
    let mut notes = vec![format!("automorphism group order {group_order}")];
    if let Some(v) = outside {
        notes.push(format!(
            "no automorphism maps {} to {}",
            al.name(Symbol(0)),
            al.name(Symbol(v as u8))
        ));
    }
    PropertyReport {
        property: "indiscernibility".into(),
        pattern: p.name().to_string(),
        holds: outside.is_none(),
        depth: None,
        witnesses,
        notes,
    }
}

/// Radius-1 rooted neighbourhood: the neighbours of a cell and the
/// adjacency among them.
#[derive(Clone, Debug)]
struct Neighborhood {
    adj: Vec<Vec<bool>>,
    invariant: (usize, usize, Vec<usize>),
}

impl Neighborhood {
    fn of(g: &LevelGraph, v: usize) -> Self {
        let nbrs = g.neighbors(v);
        let k = nbrs.len();
        let mut adj = vec![vec![false; k]; k];
        for i in 0..k {
            for j in (i + 1)..k {
                if g.contains_edge(nbrs[i] as usize, nbrs[j] as usize) {
                    adj[i][j] = true;
                    adj[j][i] = true;
                }
            }
        }
        let mut degrees: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&b| b).count()).collect();
        let edges = degrees.iter().sum::<usize>() / 2;
        degrees.sort_unstable();
        Self { adj, invariant: (k, edges, degrees) }
    }

    fn isomorphic(&self, other: &Neighborhood) -> bool {
        if self.invariant != other.invariant {
            return false;
        }
        let n = self.adj.len();
        let deg = |a: &Vec<Vec<bool>>, i: usize| a[i].iter().filter(|&&b| b).count();
        let mut image = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn go(
            i: usize,
            a: &[Vec<bool>],
            b: &[Vec<bool>],
            da: &[usize],
            db: &[usize],
            image: &mut [usize],
            used: &mut [bool],
        ) -> bool {
            if i == a.len() {
                return true;
            }
            for j in 0..a.len() {
                if used[j] || da[i] != db[j] || !(0..i).all(|h| a[i][h] == b[j][image[h]]) {
                    continue;
                }
                image[i] = j;
                used[j] = true;
                if go(i + 1, a, b, da, db, image, used) {
                    return true;
                }
                used[j] = false;
            }
            false
        }
        let da: Vec<usize> = (0..n).map(|i| deg(&self.adj, i)).collect();
        let db: Vec<usize> = (0..n).map(|i| deg(&other.adj, i)).collect();
        go(0, &self.adj, &other.adj, &da, &db, &mut image, &mut used)
    }
}

/// Checks, for each depth `1..=max_depth`, that all non-border cells have
/// isomorphic radius-1 neighbourhoods and that no border cell shares that
/// neighbourhood type.
///
/// Border cells are classified with the base graph's common degree as the
/// dimension (its maximum degree when the base graph is irregular).
pub fn check_homogeneity(p: &AdjacencyPattern, max_depth: usize) -> Result<PropertyReport> {
    if max_depth < 2 {
        return Err(Error::DepthTooSmall { min: 2, got: max_depth });
    }
    let al = p.alphabet();
    let mut notes = Vec::new();
    let n = match p.d().regular_degree() {
        Some(d) => d,
        None => {
            let max = al.symbols().map(|s| p.d().degree(s)).max().unwrap_or(0);
            notes.push(format!("base graph is irregular; borders classified with dimension {max}"));
            max
        }
    };
    let mut classifier = BorderClassifier::with_dimension(p, n);
    let levels = Levels::build(p, max_depth)?;
    let mut witnesses = Vec::new();
    let mut holds = true;

    for k in 1..=max_depth {
        let g = levels.get(k);
        let flags = classifier.flags(g);
        let mut classes: Vec<(usize, Neighborhood)> = Vec::new();
        let mut interior = 0usize;
        for v in (0..g.node_count()).filter(|&v| !flags[v]) {
            interior += 1;
            let nb = Neighborhood::of(g, v);
            if !classes.iter().any(|(_, rep)| rep.isomorphic(&nb)) {
                classes.push((v, nb));
            }
        }
        let mut level_ok = classes.len() <= 1;
        if !level_ok {
            for (v, nb) in classes.iter().take(MAX_WITNESSES) {
                if witnesses.len() < MAX_WITNESSES {
                    witnesses.push(format!("depth {k}: interior {} (degree {})", al.format_cell(&g.cell(*v)), nb.invariant.0));
                }
            }
        } else if let Some((_, rep)) = classes.first() {
            for v in (0..g.node_count()).filter(|&v| flags[v]) {
                if Neighborhood::of(g, v).isomorphic(rep) {
                    level_ok = false;
                    if witnesses.len() < MAX_WITNESSES {
                        witnesses.push(format!(
                            "depth {k}: border {} has the interior neighbourhood",
                            al.format_cell(&g.cell(v))
                        ));
                    }
                }
            }
        }
        notes.push(format!(
            "depth {k}: {interior} interior cells, {} neighbourhood class(es){}",
            classes.len(),
            if level_ok { "" } else { ", violated" }
        ));
        holds &= level_ok;
    }

    Ok(PropertyReport {
        property: "homogeneity".into(),
        pattern: p.name().to_string(),
        holds,
        depth: Some(max_depth),
        witnesses,
        notes,
    })
}

/// Common base degree when the pattern is indiscernible and homogeneous
/// (homogeneity checked up to [`DIMENSION_CHECK_DEPTH`]).
pub fn dimension(p: &AdjacencyPattern) -> Option<usize> {
    if !check_indiscernibility(p).holds {
        return None;
    }
    let holds = check_homogeneity(p, DIMENSION_CHECK_DEPTH).map(|r| r.holds).unwrap_or(false);
    if holds {
        p.d().regular_degree()
    } else {
        None
    }
}
