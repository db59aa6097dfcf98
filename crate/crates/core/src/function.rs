//! Cell functions between patterns, their monotone / strict / continuous
//! checks, stream semantics on finite prefixes, and the search for
//! discontinuity witnesses.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::adjacency::Levels;
use crate::builtin::euclid;
use crate::cell::{Alphabet, Cell, Symbol};
use crate::error::{Error, Result};
use crate::pattern::{AdjacencyPattern, PatternRef};

/// Names accepted by [`CellFunction::builtin`].
pub const BUILTIN_FUNCTIONS: &[&str] = &["identity", "head_const", "reverse"];

const MAX_REPORTED: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Evaluator {
    Identity,
    /// First symbol repeated to the input's depth.
    HeadConst,
    /// Every symbol `s` replaced by `|A| - 1 - s`.
    Reverse,
    Constant(Cell),
    Table(BTreeMap<Cell, Cell>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellFunction {
    name: String,
    domain: AdjacencyPattern,
    codomain: AdjacencyPattern,
    k_max: Option<usize>,
    eval: Evaluator,
}

impl CellFunction {
    pub fn identity(p: &AdjacencyPattern) -> Self {
        Self::unbounded("identity", p, Evaluator::Identity)
    }

    pub fn head_const(p: &AdjacencyPattern) -> Self {
        Self::unbounded("head_const", p, Evaluator::HeadConst)
    }

    pub fn reverse(p: &AdjacencyPattern) -> Self {
        Self::unbounded("reverse", p, Evaluator::Reverse)
    }

    /// Maps every cell to `target`.
    pub fn constant(p: &AdjacencyPattern, target: Cell) -> Result<Self> {
        p.alphabet().check_cell(&target)?;
        Ok(Self::unbounded("constant", p, Evaluator::Constant(target)))
    }

    fn unbounded(name: &str, p: &AdjacencyPattern, eval: Evaluator) -> Self {
        Self { name: name.into(), domain: p.clone(), codomain: p.clone(), k_max: None, eval }
    }

    /// A built-in by name; `domain` defaults to the interval.
    pub fn builtin(name: &str, domain: Option<&AdjacencyPattern>) -> Result<Self> {
        let p = match domain {
            Some(p) => p.clone(),
            None => euclid(1)?,
        };
        match name {
            "identity" => Ok(Self::identity(&p)),
            "head_const" => Ok(Self::head_const(&p)),
            "reverse" => Ok(Self::reverse(&p)),
            other => Err(Error::Parse(format!("no built-in function named `{other}`"))),
        }
    }

    /// A finite table defined on every cell of depth `1..=k_max`; the unit
    /// maps to the unit unless listed.
    pub fn table(
        name: impl Into<String>,
        domain: &AdjacencyPattern,
        codomain: &AdjacencyPattern,
        k_max: usize,
        mut map: BTreeMap<Cell, Cell>,
    ) -> Result<Self> {
        let (da, ca) = (domain.alphabet(), codomain.alphabet());
        let total = (1..=k_max).try_fold(1u128, |acc, k| {
            (da.len() as u128).checked_pow(k as u32).map(|n| acc + n)
        });
        if total.is_none_or(|t| t > 1 << 24) {
            return Err(Error::DepthTooLarge { depth: k_max, cells: total.unwrap_or(u128::MAX) });
        }
        map.entry(Cell::unit()).or_insert_with(Cell::unit);
        for (x, y) in &map {
            da.check_cell(x)?;
            ca.check_cell(y)?;
            if x.depth() > k_max {
                return Err(Error::OutOfDomain(format!("`{}` is deeper than k_max {k_max}", da.format_cell(x))));
            }
        }
        for k in 1..=k_max {
            if let Some(x) = da.cells_at_depth(k).find(|x| !map.contains_key(x)) {
                return Err(Error::OutOfDomain(format!("table has no entry for `{}`", da.format_cell(&x))));
            }
        }
        Ok(Self {
            name: name.into(),
            domain: domain.clone(),
            codomain: codomain.clone(),
            k_max: Some(k_max),
            eval: Evaluator::Table(map),
        })
    }

    /// Random length-preserving monotone table: `f(x.s) = f(x).g(x, s)`.
    /// With probability `1 - noise` the appended symbol is `σ(s)` for a
    /// fixed `σ` (identity or reversal, chosen once); otherwise it is
    /// uniform.
    pub fn random_monotone<R: Rng>(p: &AdjacencyPattern, k_max: usize, noise: f64, rng: &mut R) -> Result<Self> {
        let arity = p.arity() as u8;
        let flip = rng.gen_bool(0.5);
        let mut map = BTreeMap::new();
        map.insert(Cell::unit(), Cell::unit());
        let mut frontier = vec![Cell::unit()];
        for _ in 0..k_max {
            let mut next = Vec::with_capacity(frontier.len() * arity as usize);
            for x in &frontier {
                let fx = map[x].clone();
                for s in 0..arity {
                    let t = if rng.gen_bool(noise) {
                        rng.gen_range(0..arity)
                    } else if flip {
                        arity - 1 - s
                    } else {
                        s
                    };
                    let child = x.suc(Symbol(s));
                    map.insert(child.clone(), fx.suc(Symbol(t)));
                    next.push(child);
                }
            }
            frontier = next;
        }
        Self::table("random", p, p, k_max, map)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn domain(&self) -> &AdjacencyPattern {
        &self.domain
    }

    pub fn codomain(&self) -> &AdjacencyPattern {
        &self.codomain
    }

    pub fn k_max(&self) -> Option<usize> {
        self.k_max
    }

    pub fn eval(&self, c: &Cell) -> Result<Cell> {
        self.domain.alphabet().check_cell(c)?;
        if let Some(k) = self.k_max {
            if c.depth() > k {
                return Err(Error::OutOfDomain(format!(
                    "`{}` is deeper than k_max {k}",
                    self.domain.alphabet().format_cell(c)
                )));
            }
        }
        let last = self.domain.arity() as u8 - 1;
        Ok(match &self.eval {
            Evaluator::Identity => c.clone(),
            Evaluator::HeadConst => match c.symbols().first() {
                None => Cell::unit(),
                Some(&s) => Cell::from_symbols(vec![s; c.depth()]),
            },
            Evaluator::Reverse => Cell::from_symbols(c.symbols().iter().map(|s| Symbol(last - s.0)).collect()),
            Evaluator::Constant(t) => t.clone(),
            Evaluator::Table(map) => map[c].clone(),
        })
    }

    fn check_depth(&self, k: usize) -> Result<()> {
        match self.k_max {
            Some(m) if k > m => Err(Error::OutOfDomain(format!("depth {k} exceeds k_max {m}"))),
            _ => Ok(()),
        }
    }

    /// Images of every cell of depth `0..=k`, indexed by depth then code.
    fn images(&self, k: usize) -> Result<Vec<Vec<Cell>>> {
        self.check_depth(k)?;
        (0..=k)
            .map(|j| self.domain.alphabet().cells_at_depth(j).map(|c| self.eval(&c)).collect())
            .collect()
    }

    pub fn to_file(&self) -> Result<FunctionFile> {
        let Evaluator::Table(map) = &self.eval else {
            return Err(Error::Contract(format!("`{}` is a built-in, not a table", self.name)));
        };
        let (da, ca) = (self.domain.alphabet(), self.codomain.alphabet());
        Ok(FunctionFile {
            domain: PatternRef::of(&self.domain),
            codomain: PatternRef::of(&self.codomain),
            k_max: self.k_max.unwrap_or(0),
            map: map.iter().map(|(x, y)| (da.format_cell(x), ca.format_cell(y))).collect(),
        })
    }

    pub fn from_file(name: impl Into<String>, file: &FunctionFile) -> Result<Self> {
        let domain = file.domain.resolve()?;
        let codomain = file.codomain.resolve()?;
        let map = file
            .map
            .iter()
            .map(|(x, y)| Ok((domain.alphabet().parse_cell(x)?, codomain.alphabet().parse_cell(y)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Self::table(name, &domain, &codomain, file.k_max, map)
    }

    pub fn from_json(name: impl Into<String>, text: &str) -> Result<Self> {
        let file: FunctionFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(name, &file)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file()?).expect("function serializes"))
    }
}

/// On-disk function table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionFile {
    pub domain: PatternRef,
    pub codomain: PatternRef,
    pub k_max: usize,
    pub map: BTreeMap<String, String>,
}

/// A pair of related cells and their images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionViolation {
    pub depth: usize,
    pub x: String,
    pub y: String,
    pub fx: String,
    pub fy: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctionReport {
    pub property: String,
    pub function: String,
    pub depth: usize,
    pub holds: bool,
    pub violation_count: usize,
    /// The first violations, in depth then cell order.
    pub violations: Vec<FunctionViolation>,
    /// Cells whose check needs depths beyond the one examined.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unverified: Option<usize>,
}

impl FunctionReport {
    fn new(property: &str, f: &CellFunction, depth: usize) -> Self {
        Self {
            property: property.into(),
            function: f.name.clone(),
            depth,
            holds: true,
            violation_count: 0,
            violations: Vec::new(),
            unverified: None,
        }
    }

    fn push(&mut self, f: &CellFunction, depth: usize, x: &Cell, y: &Cell, fx: &Cell, fy: &Cell) {
        self.holds = false;
        self.violation_count += 1;
        if self.violations.len() < MAX_REPORTED {
            let (da, ca) = (f.domain.alphabet(), f.codomain.alphabet());
            self.violations.push(FunctionViolation {
                depth,
                x: da.format_cell(x),
                y: da.format_cell(y),
                fx: ca.format_cell(fx),
                fy: ca.format_cell(fy),
            });
        }
    }
}

/// Checks that the image of every prefix is a prefix of (or equal to) the
/// image of the longer cell, for all cells up to depth `k`.
pub fn is_monotonic(f: &CellFunction, k: usize) -> Result<FunctionReport> {
    let images = f.images(k)?;
    let mut report = FunctionReport::new("monotone", f, k);
    let arity = f.domain.arity();
    for j in 1..=k {
        for (i, fy) in images[j].iter().enumerate() {
            let fx = &images[j - 1][i / arity];
            if !fx.is_prefix_of(fy) {
                let y = Cell::decode(i as u64, arity as u64, j);
                report.push(f, j, &y.pred(), &y, fx, fy);
            }
        }
    }
    Ok(report)
}

/// Checks that every cell above depth `k` has a descendant within depth
/// `k` with a different image. Cells at depth `k` are counted as
/// unverified.
pub fn is_strict(f: &CellFunction, k: usize) -> Result<FunctionReport> {
    let images = f.images(k)?;
    let mut report = FunctionReport::new("strict", f, k);
    let arity = f.domain.arity();
    // uniform[i]: every descendant within depth k has the same image
    let mut uniform = vec![true; images[k].len()];
    for j in (0..k).rev() {
        let level: Vec<bool> = (0..images[j].len())
            .map(|i| (0..arity).all(|s| uniform[i * arity + s] && images[j + 1][i * arity + s] == images[j][i]))
            .collect();
        for (i, &u) in level.iter().enumerate() {
            if u {
                let x = Cell::decode(i as u64, arity as u64, j);
                report.push(f, j, &x, &x, &images[j][i], &images[j][i]);
            }
        }
        uniform = level;
    }
    report.unverified = Some(images[k].len());
    Ok(report)
}

/// Checks that images of level-adjacent cells are adjacent or equal, for
/// every depth `1..=k`.
pub fn is_continuous(f: &CellFunction, k: usize) -> Result<FunctionReport> {
    let mut report = FunctionReport::new("continuous", f, k);
    for v in continuity_violations(f, k)? {
        report.push(f, v.depth, &v.x, &v.y, &v.fx, &v.fy);
    }
    Ok(report)
}

struct EdgeViolation {
    depth: usize,
    x: Cell,
    y: Cell,
    fx: Cell,
    fy: Cell,
}

fn continuity_violations(f: &CellFunction, k: usize) -> Result<Vec<EdgeViolation>> {
    if k == 0 {
        return Err(Error::DepthTooSmall { min: 1, got: 0 });
    }
    let images = f.images(k)?;
    let domain = Levels::build(&f.domain, k)?;
    let mut codomain = Levels::new(&f.codomain);
    let mut out = Vec::new();
    for (j, level) in images.iter().enumerate().skip(1) {
        let g = domain.get(j);
        for &(a, b) in g.edges() {
            let (fx, fy) = (&level[a as usize], &level[b as usize]);
            if fx != fy && !codomain.adjacent_general(fx, fy)? {
                out.push(EdgeViolation { depth: j, x: g.cell(a as usize), y: g.cell(b as usize), fx: fx.clone(), fy: fy.clone() });
            }
        }
    }
    Ok(out)
}

/// Image of a stream prefix, after checking that the images along its
/// prefix chain grow coherently.
pub fn stream_image(f: &CellFunction, s: &Cell) -> Result<Cell> {
    let mut prev = f.eval(&Cell::unit())?;
    for j in 1..=s.depth() {
        let next = f.eval(&s.prefix(j))?;
        if !prev.is_prefix_of(&next) {
            let (da, ca) = (f.domain.alphabet(), f.codomain.alphabet());
            return Err(Error::Contract(format!(
                "`{}` is not monotone: f({}) = {} does not extend f({}) = {}",
                f.name,
                da.format_cell(&s.prefix(j)),
                ca.format_cell(&next),
                da.format_cell(&s.prefix(j - 1)),
                ca.format_cell(&prev)
            )));
        }
        prev = next;
    }
    Ok(prev)
}

/// Two prefixes of equal depth are equivalent when their prefixes of every
/// length are adjacent or equal.
pub fn streams_equivalent(p: &AdjacencyPattern, s1: &Cell, s2: &Cell) -> Result<bool> {
    Levels::new(p).streams_equivalent(s1, s2)
}

impl Levels<'_> {
    pub fn streams_equivalent(&mut self, s1: &Cell, s2: &Cell) -> Result<bool> {
        if s1.depth() != s2.depth() {
            return Err(Error::LengthMismatch { left: s1.depth(), right: s2.depth() });
        }
        Ok(first_split(self, s1, s2)?.is_none())
    }
}

/// First prefix length at which the two prefixes are neither equal nor
/// adjacent.
fn first_split(levels: &mut Levels<'_>, s1: &Cell, s2: &Cell) -> Result<Option<usize>> {
    for j in 1..=s1.depth() {
        let (a, b) = (s1.prefix(j), s2.prefix(j));
        if a != b && !levels.adjacent_same_length(&a, &b)? {
            return Ok(Some(j));
        }
    }
    Ok(None)
}

/// Equivalent input streams with non-equivalent images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrouwerWitness {
    /// The violating level edge.
    pub u: Cell,
    pub z: Cell,
    pub fu: Cell,
    pub fz: Cell,
    /// Input streams through `u` and `z`, extended to depth `m`.
    pub stream_u: Cell,
    pub stream_z: Cell,
    /// Images of the streams, truncated to a common length.
    pub image_u: Cell,
    pub image_z: Cell,
    pub m: usize,
    /// First length at which the image prefixes are neither adjacent nor
    /// equal.
    pub split: usize,
}

impl BrouwerWitness {
    pub fn to_json(&self, domain: &Alphabet, codomain: &Alphabet) -> Value {
        json!({
            "u": domain.format_cell(&self.u),
            "z": domain.format_cell(&self.z),
            "f_u": codomain.format_cell(&self.fu),
            "f_z": codomain.format_cell(&self.fz),
            "stream_u": domain.format_cell(&self.stream_u),
            "stream_z": domain.format_cell(&self.stream_z),
            "image_u": codomain.format_cell(&self.image_u),
            "image_z": codomain.format_cell(&self.image_z),
            "m": self.m,
            "split": self.split,
        })
    }
}

/// Searches level edges up to depth `k` for a pair with non-adjacent
/// images and expands the first one into a pair of equivalent streams of
/// depth `k` whose images are not equivalent. `None` when `f` is
/// continuous up to `k`.
pub fn brouwer_witness(f: &CellFunction, k: usize) -> Result<Option<BrouwerWitness>> {
    let mono = is_monotonic(f, k)?;
    if !mono.holds {
        return Err(Error::Contract(format!("`{}` is not monotone up to depth {k}", f.name)));
    }
    let strict = is_strict(f, k)?;
    if !strict.holds {
        return Err(Error::Contract(format!("`{}` is not strict up to depth {k}", f.name)));
    }
    let violations = continuity_violations(f, k)?;
    if violations.is_empty() {
        return Ok(None);
    }
    let domain = Levels::build(&f.domain, k)?;
    let mut dom = Levels::new(&f.domain);
    let mut codomain = Levels::new(&f.codomain);
    let arity = f.domain.arity() as u8;
    for v in &violations {
        let Some((su, sz)) = extend_edge(&domain, &v.x, &v.y, k, arity) else {
            continue;
        };
        let (iu, iz) = (stream_image(f, &su)?, stream_image(f, &sz)?);
        let m = iu.depth().min(iz.depth());
        let (iu, iz) = (iu.prefix(m), iz.prefix(m));
        if !dom.streams_equivalent(&su, &sz)? {
            continue;
        }
        if let Some(split) = first_split(&mut codomain, &iu, &iz)? {
            return Ok(Some(BrouwerWitness {
                u: v.x.clone(),
                z: v.y.clone(),
                fu: v.fx.clone(),
                fz: v.fy.clone(),
                stream_u: su,
                stream_z: sz,
                image_u: iu,
                image_z: iz,
                m: k,
                split,
            }));
        }
    }
    Err(Error::Contract(format!(
        "`{}` has {} discontinuities up to depth {k} but none expands into a witness",
        f.name,
        violations.len()
    )))
}

/// Descends from an edge to depth `k`, each step taking the first adjacent
/// child pair in lexicographic order.
fn extend_edge(levels: &Levels<'_>, u: &Cell, z: &Cell, k: usize, arity: u8) -> Option<(Cell, Cell)> {
    let (mut u, mut z) = (u.clone(), z.clone());
    while u.depth() < k {
        let g = levels.get(u.depth() + 1);
        let next = (0..arity)
            .flat_map(|s| (0..arity).map(move |t| (s, t)))
            .map(|(s, t)| (u.suc(Symbol(s)), z.suc(Symbol(t))))
            .find(|(a, b)| g.contains_edge(g.index(a).unwrap(), g.index(b).unwrap()))?;
        (u, z) = next;
    }
    Some((u, z))
}
