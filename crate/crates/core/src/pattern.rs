//! Adjacency patterns: a division pattern (alphabet plus base adjacency)
//! together with merging rules and an optional border gluing.
//!
//! Merging rules are keyed by the ordered pair of top symbols of an
//! adjacent pair of equal-depth cells, the lexicographically smaller cell
//! first. A rule lists the child pairs `(u, v)` that become adjacent: `u`
//! extends the smaller cell and `v` the larger one.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::cell::{Alphabet, Symbol};
use crate::error::{Error, Result};

/// Alphabet plus a connected, irreflexive base adjacency graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DPattern {
    alphabet: Alphabet,
    // unordered pairs stored as (min, max)
    base: BTreeSet<(Symbol, Symbol)>,
}

impl DPattern {
    pub fn new(alphabet: Alphabet, pairs: impl IntoIterator<Item = (Symbol, Symbol)>) -> Result<Self> {
        let mut base = BTreeSet::new();
        for (s, t) in pairs {
            alphabet.check_symbol(s)?;
            alphabet.check_symbol(t)?;
            if s == t {
                return Err(Error::InvalidPattern(format!(
                    "base adjacency must be irreflexive, found ({0},{0})",
                    alphabet.name(s)
                )));
            }
            base.insert((s.min(t), s.max(t)));
        }
        let d = Self { alphabet, base };
        if !d.is_connected() {
            return Err(Error::InvalidPattern("base adjacency graph is not connected".into()));
        }
        Ok(d)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.alphabet.len()
    }

    /// Unordered base pairs as `(smaller id, larger id)`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (Symbol, Symbol)> + '_ {
        self.base.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.base.len()
    }

    pub fn is_adjacent(&self, s: Symbol, t: Symbol) -> bool {
        self.base.contains(&(s.min(t), s.max(t)))
    }

    pub fn neighbors(&self, s: Symbol) -> Vec<Symbol> {
        self.alphabet.symbols().filter(|&t| self.is_adjacent(s, t)).collect()
    }

    pub fn degree(&self, s: Symbol) -> usize {
        self.neighbors(s).len()
    }

    /// The common degree when every symbol has the same number of neighbours.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.degree(Symbol(0));
        self.alphabet.symbols().all(|s| self.degree(s) == d).then_some(d)
    }

    /// Adjacency bitmasks, one per symbol. Only meaningful for alphabets of
    /// at most 64 symbols.
    pub fn neighbor_masks(&self) -> Vec<u64> {
        let mut masks = vec![0u64; self.size()];
        for (s, t) in self.edges() {
            if s.id() < 64 && t.id() < 64 {
                masks[s.id()] |= 1 << t.id();
                masks[t.id()] |= 1 << s.id();
            }
        }
        masks
    }

    fn is_connected(&self) -> bool {
        let n = self.size();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([Symbol(0)]);
        seen[0] = true;
        while let Some(s) = queue.pop_front() {
            for t in self.neighbors(s) {
                if !seen[t.id()] {
                    seen[t.id()] = true;
                    queue.push_back(t);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Dimension `n` when the alphabet has `2^n` symbols and two symbols are
    /// adjacent exactly when their ids differ in one bit. Symbol ids then
    /// encode positions in the parent, one bit per axis.
    pub fn hypercube_dimension(&self) -> Option<usize> {
        let size = self.size();
        if !size.is_power_of_two() || size < 2 {
            return None;
        }
        let n = size.trailing_zeros() as usize;
        let expected = size * n / 2;
        let ok = self.base.len() == expected
            && self.base.iter().all(|(s, t)| (s.0 ^ t.0).count_ones() == 1);
        ok.then_some(n)
    }
}

/// Child pairs made adjacent when the parents' top pair matches `key`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MRule {
    pub key: (Symbol, Symbol),
    children: Vec<(Symbol, Symbol)>,
}

impl MRule {
    pub fn new(key: (Symbol, Symbol), children: impl IntoIterator<Item = (Symbol, Symbol)>) -> Result<Self> {
        let mut children: Vec<_> = children.into_iter().collect();
        children.sort();
        children.dedup();
        if children.is_empty() {
            return Err(Error::InvalidPattern(format!(
                "rule for key ({},{}) has no children",
                key.0 .0, key.1 .0
            )));
        }
        Ok(Self { key, children })
    }

    /// Child pairs in `(u, v)` order.
    pub fn children(&self) -> &[(Symbol, Symbol)] {
        &self.children
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GluingKind {
    SphereCorner,
    TorusOpposite,
    Moebius,
    Klein,
}

impl GluingKind {
    pub fn needs_corner(self) -> bool {
        matches!(self, GluingKind::SphereCorner | GluingKind::Klein)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GluingKind::SphereCorner => "sphere_corner",
            GluingKind::TorusOpposite => "torus_opposite",
            GluingKind::Moebius => "moebius",
            GluingKind::Klein => "klein",
        }
    }
}

/// Extra adjacency added between border cells at every depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BorderGluing {
    kind: GluingKind,
    corner: Option<Symbol>,
}

impl BorderGluing {
    pub fn new(kind: GluingKind, corner: Option<Symbol>) -> Result<Self> {
        match (kind.needs_corner(), corner.is_some()) {
            (true, false) => Err(Error::UnsupportedGluing(format!("{} needs a corner symbol", kind.as_str()))),
            (false, true) => Err(Error::UnsupportedGluing(format!("{} takes no corner symbol", kind.as_str()))),
            _ => Ok(Self { kind, corner }),
        }
    }

    pub fn sphere_corner(corner: Symbol) -> Self {
        Self { kind: GluingKind::SphereCorner, corner: Some(corner) }
    }

    pub fn torus_opposite() -> Self {
        Self { kind: GluingKind::TorusOpposite, corner: None }
    }

    pub fn moebius() -> Self {
        Self { kind: GluingKind::Moebius, corner: None }
    }

    pub fn klein(corner: Symbol) -> Self {
        Self { kind: GluingKind::Klein, corner: Some(corner) }
    }

    pub fn kind(&self) -> GluingKind {
        self.kind
    }

    pub fn corner(&self) -> Option<Symbol> {
        self.corner
    }
}

/// Division pattern, merging rules and optional gluing; fully determines
/// the level graphs of a continuum type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyPattern {
    name: String,
    d: DPattern,
    rules: BTreeMap<(Symbol, Symbol), MRule>,
    sibling_extras: BTreeSet<(Symbol, Symbol)>,
    gluing: Option<BorderGluing>,
}

impl AdjacencyPattern {
    pub fn new(name: impl Into<String>, d: DPattern, rules: impl IntoIterator<Item = MRule>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for rule in rules {
            for s in [rule.key.0, rule.key.1] {
                d.alphabet().check_symbol(s)?;
            }
            for &(u, v) in rule.children() {
                d.alphabet().check_symbol(u)?;
                d.alphabet().check_symbol(v)?;
            }
            if map.insert(rule.key, rule.clone()).is_some() {
                return Err(Error::InvalidPattern(format!(
                    "duplicate rule key ({},{})",
                    d.alphabet().name(rule.key.0),
                    d.alphabet().name(rule.key.1)
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            d,
            rules: map,
            sibling_extras: BTreeSet::new(),
            gluing: None,
        })
    }

    pub fn with_sibling_extras(mut self, extras: impl IntoIterator<Item = (Symbol, Symbol)>) -> Result<Self> {
        for (s, t) in extras {
            self.d.alphabet().check_symbol(s)?;
            self.d.alphabet().check_symbol(t)?;
            if s == t {
                return Err(Error::InvalidPattern("sibling extras must be irreflexive".into()));
            }
            self.sibling_extras.insert((s, t));
        }
        Ok(self)
    }

    /// Attaches a gluing after checking it fits the division pattern.
    pub fn with_gluing(mut self, gluing: Option<BorderGluing>) -> Result<Self> {
        if let Some(g) = gluing {
            let dim = self.d.hypercube_dimension().ok_or_else(|| {
                Error::UnsupportedGluing(format!(
                    "{} requires a Euclidean (hypercube) division pattern",
                    g.kind().as_str()
                ))
            })?;
            if matches!(g.kind(), GluingKind::Moebius | GluingKind::Klein) && dim != 2 {
                return Err(Error::UnsupportedGluing(format!(
                    "{} requires dimension 2, pattern has dimension {dim}",
                    g.kind().as_str()
                )));
            }
            if let Some(c) = g.corner() {
                self.d.alphabet().check_symbol(c)?;
            }
        }
        self.gluing = gluing;
        Ok(self)
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn d(&self) -> &DPattern {
        &self.d
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.d.alphabet()
    }

    pub fn arity(&self) -> usize {
        self.d.size()
    }

    pub fn rule(&self, key: (Symbol, Symbol)) -> Option<&MRule> {
        self.rules.get(&key)
    }

    pub fn rules(&self) -> impl Iterator<Item = &MRule> {
        self.rules.values()
    }

    pub fn sibling_extras(&self) -> impl Iterator<Item = (Symbol, Symbol)> + '_ {
        self.sibling_extras.iter().copied()
    }

    pub fn gluing(&self) -> Option<BorderGluing> {
        self.gluing
    }

    /// Same pattern with one rule removed; used to build negative cases.
    pub fn without_rule(mut self, key: (Symbol, Symbol)) -> Self {
        self.rules.remove(&key);
        self
    }

    /// The rule table as text, one key per line:
    /// `(a,b) -> (b,a) (d,c)`.
    pub fn rule_table(&self) -> String {
        let al = self.alphabet();
        let mut out = String::new();
        for rule in self.rules.values() {
            out.push_str(&format!("({},{}) ->", al.name(rule.key.0), al.name(rule.key.1)));
            for &(u, v) in rule.children() {
                out.push_str(&format!(" ({},{})", al.name(u), al.name(v)));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_file(&self) -> PatternFile {
        let al = self.alphabet();
        let pair = |(s, t): (Symbol, Symbol)| [al.name(s).to_string(), al.name(t).to_string()];
        PatternFile {
            name: self.name.clone(),
            alphabet: al.names().to_vec(),
            adj_d: self.d.edges().map(pair).collect(),
            m_rules: self
                .rules
                .values()
                .map(|r| RuleFile {
                    key: pair(r.key),
                    children: r.children().iter().copied().map(pair).collect(),
                })
                .collect(),
            sibling_extras: self.sibling_extras.iter().copied().map(pair).collect(),
            gluing: self.gluing.map(|g| GluingFile {
                kind: g.kind().into(),
                corner: g.corner().map(|c| al.name(c).to_string()),
            }),
        }
    }

    pub fn from_file(file: &PatternFile) -> Result<Self> {
        let alphabet = Alphabet::new(file.alphabet.iter().cloned())?;
        let sym = |name: &String| alphabet.symbol(name);
        let pair = |p: &[String; 2]| -> Result<(Symbol, Symbol)> { Ok((sym(&p[0])?, sym(&p[1])?)) };
        let base = file.adj_d.iter().map(pair).collect::<Result<Vec<_>>>()?;
        let rules = file
            .m_rules
            .iter()
            .map(|r| MRule::new(pair(&r.key)?, r.children.iter().map(pair).collect::<Result<Vec<_>>>()?))
            .collect::<Result<Vec<_>>>()?;
        let extras = file.sibling_extras.iter().map(pair).collect::<Result<Vec<_>>>()?;
        let gluing = match &file.gluing {
            None => None,
            Some(g) => match g.kind.glued() {
                None if g.corner.is_some() => {
                    return Err(Error::UnsupportedGluing("gluing kind `none` takes no corner".into()))
                }
                None => None,
                Some(kind) => {
                    let corner = g.corner.as_ref().map(sym).transpose()?;
                    Some(BorderGluing::new(kind, corner)?)
                }
            },
        };
        let d = DPattern::new(alphabet.clone(), base)?;
        AdjacencyPattern::new(file.name.clone(), d, rules)?
            .with_sibling_extras(extras)?
            .with_gluing(gluing)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("pattern serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PatternFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }
}

/// A pattern given either by built-in name or inline definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PatternRef {
    Name(String),
    Inline(Box<PatternFile>),
}

impl PatternRef {
    /// Built-in patterns are referenced by name, everything else inline.
    pub fn of(p: &AdjacencyPattern) -> Self {
        match crate::builtin::by_name(p.name()) {
            Ok(b) if &b == p => PatternRef::Name(p.name().to_string()),
            _ => PatternRef::Inline(Box::new(p.to_file())),
        }
    }

    pub fn resolve(&self) -> Result<AdjacencyPattern> {
        match self {
            PatternRef::Name(name) => crate::builtin::by_name(name),
            PatternRef::Inline(file) => AdjacencyPattern::from_file(file),
        }
    }
}

/// On-disk pattern definition. Symbol order in `alphabet` defines the
/// lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternFile {
    pub name: String,
    pub alphabet: Vec<String>,
    pub adj_d: Vec<[String; 2]>,
    pub m_rules: Vec<RuleFile>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sibling_extras: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gluing: Option<GluingFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleFile {
    pub key: [String; 2],
    pub children: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingFile {
    pub kind: GluingFileKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corner: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GluingFileKind {
    None,
    SphereCorner,
    TorusOpposite,
    Moebius,
    Klein,
}

impl GluingFileKind {
    fn glued(self) -> Option<GluingKind> {
        match self {
            GluingFileKind::None => None,
            GluingFileKind::SphereCorner => Some(GluingKind::SphereCorner),
            GluingFileKind::TorusOpposite => Some(GluingKind::TorusOpposite),
            GluingFileKind::Moebius => Some(GluingKind::Moebius),
            GluingFileKind::Klein => Some(GluingKind::Klein),
        }
    }
}

impl From<GluingKind> for GluingFileKind {
    fn from(kind: GluingKind) -> Self {
        match kind {
            GluingKind::SphereCorner => GluingFileKind::SphereCorner,
            GluingKind::TorusOpposite => GluingFileKind::TorusOpposite,
            GluingKind::Moebius => GluingFileKind::Moebius,
            GluingKind::Klein => GluingFileKind::Klein,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_abc() -> DPattern {
        let al = Alphabet::new(["a", "b", "c"]).unwrap();
        DPattern::new(al, [(Symbol(0), Symbol(1)), (Symbol(1), Symbol(2))]).unwrap()
    }

    #[test]
    fn disconnected_base_is_rejected() {
        let al = Alphabet::new(["a", "b", "c"]).unwrap();
        let err = DPattern::new(al, [(Symbol(0), Symbol(1))]).unwrap_err();
        assert!(matches!(err, Error::InvalidPattern(_)));
    }

    #[test]
    fn reflexive_base_is_rejected() {
        let al = Alphabet::new(["a", "b"]).unwrap();
        assert!(DPattern::new(al, [(Symbol(0), Symbol(0)), (Symbol(0), Symbol(1))]).is_err());
    }

    #[test]
    fn empty_rule_is_rejected() {
        assert!(MRule::new((Symbol(0), Symbol(1)), []).is_err());
    }

    #[test]
    fn gluing_parameters_checked() {
        assert!(BorderGluing::new(GluingKind::SphereCorner, None).is_err());
        assert!(BorderGluing::new(GluingKind::Moebius, Some(Symbol(0))).is_err());
        assert!(BorderGluing::new(GluingKind::Klein, Some(Symbol(0))).is_ok());
    }

    #[test]
    fn gluing_requires_hypercube() {
        let p = AdjacencyPattern::new("path", path_abc(), []).unwrap();
        assert!(matches!(
            p.with_gluing(Some(BorderGluing::torus_opposite())),
            Err(Error::UnsupportedGluing(_))
        ));
    }

    #[test]
    fn hypercube_detection() {
        assert_eq!(path_abc().hypercube_dimension(), None);
        let al = Alphabet::new(["a", "b", "c", "d"]).unwrap();
        let sq = DPattern::new(
            al,
            [(Symbol(0), Symbol(1)), (Symbol(1), Symbol(3)), (Symbol(3), Symbol(2)), (Symbol(2), Symbol(0))],
        )
        .unwrap();
        assert_eq!(sq.hypercube_dimension(), Some(2));
        assert_eq!(sq.regular_degree(), Some(2));
        assert_eq!(path_abc().regular_degree(), None);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"name":"x","alphabet":["a","b"],"adj_d":[["a","b"]],"m_rules":[],"extra":1}"#;
        assert!(matches!(AdjacencyPattern::from_json(text), Err(Error::Parse(_))));
    }

    #[test]
    fn gluing_kind_none_parses() {
        let text = r#"{"name":"x","alphabet":["a","b"],"adj_d":[["a","b"]],
            "m_rules":[{"key":["a","b"],"children":[["b","a"]]}],"gluing":{"kind":"none"}}"#;
        let p = AdjacencyPattern::from_json(text).unwrap();
        assert_eq!(p.gluing(), None);
    }
}
