//! Cells: finite division words over an alphabet of parts.
//!
//! A [`Cell`] is the part of the unit reached after a finite sequence of
//! divisions. The unit itself is the empty word. Symbols are plain indices
//! into an [`Alphabet`]; the alphabet order is the order used for
//! lexicographic comparison of cells.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Index of a part within its alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Symbol(pub u8);

impl Symbol {
    pub fn id(self) -> usize {
        self.0 as usize
    }
}

/// Ordered, named parts of a division pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub const MAX_SIZE: usize = 255;

    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::InvalidPattern("alphabet is empty".into()));
        }
        if names.len() > Self::MAX_SIZE {
            return Err(Error::InvalidPattern(format!(
                "alphabet has {} symbols, at most {} are supported",
                names.len(),
                Self::MAX_SIZE
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.contains('.') || name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidPattern(format!(
                    "symbol name `{name}` must be non-empty and free of dots and whitespace"
                )));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidPattern(format!("duplicate symbol name `{name}`")));
            }
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.names.len()).map(|i| Symbol(i as u8))
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s.id()]
    }

    pub fn symbol(&self, name: &str) -> Result<Symbol> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Symbol(i as u8))
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn check_symbol(&self, s: Symbol) -> Result<Symbol> {
        if s.id() < self.len() {
            Ok(s)
        } else {
            Err(Error::InvalidSymbol { id: s.id(), size: self.len() })
        }
    }

    pub fn check_cell(&self, c: &Cell) -> Result<()> {
        if c.symbols().iter().all(|s| s.id() < self.len()) {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(format!("{:?}", c.symbols())))
        }
    }

    /// `suc` with the symbol checked against this alphabet.
    pub fn suc(&self, c: &Cell, s: Symbol) -> Result<Cell> {
        self.check_symbol(s)?;
        Ok(c.suc(s))
    }

    /// Prefix relation of two cells, both checked against this alphabet.
    pub fn prefix_relation(&self, x: &Cell, y: &Cell) -> Result<PrefixRelation> {
        self.check_cell(x)?;
        self.check_cell(y)?;
        Ok(x.prefix_relation(y))
    }

    /// Parses dot notation; the empty string is the unit.
    pub fn parse_cell(&self, text: &str) -> Result<Cell> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Cell::unit());
        }
        text.split('.')
            .map(|name| self.symbol(name))
            .collect::<Result<Vec<_>>>()
            .map(Cell::from_symbols)
    }

    pub fn format_cell(&self, c: &Cell) -> String {
        let mut out = String::new();
        for (i, s) in c.symbols().iter().enumerate() {
            if i > 0 {
                out.push('.');
            }
            out.push_str(self.name(*s));
        }
        out
    }

    /// Every cell of depth `k`, in lexicographic order.
    pub fn cells_at_depth(&self, k: usize) -> impl Iterator<Item = Cell> + '_ {
        let base = self.len() as u64;
        let count = base.checked_pow(k as u32).unwrap_or(u64::MAX);
        (0..count).map(move |code| Cell::decode(code, base, k))
    }
}

/// Result of `top`: either the last symbol or the unit marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Top {
    Unit,
    Symbol(Symbol),
}

/// Exactly one of these holds for any pair of cells.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PrefixRelation {
    Equal,
    /// The left cell is a proper prefix of the right.
    Ancestor,
    /// The right cell is a proper prefix of the left.
    Descendant,
    Incomparable,
}

/// A finite division word. The empty word is the unit.
///
/// The derived ordering is lexicographic with shorter prefixes first, which
/// on cells of equal depth is the lexicographic order induced by the
/// alphabet.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    word: Vec<Symbol>,
}

impl Cell {
    pub fn unit() -> Self {
        Self { word: Vec::new() }
    }

    pub fn from_symbols(word: Vec<Symbol>) -> Self {
        Self { word }
    }

    pub fn from_ids(ids: &[u8]) -> Self {
        Self { word: ids.iter().map(|&i| Symbol(i)).collect() }
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.word
    }

    pub fn is_unit(&self) -> bool {
        self.word.is_empty()
    }

    pub fn suc(&self, s: Symbol) -> Cell {
        let mut word = Vec::with_capacity(self.word.len() + 1);
        word.extend_from_slice(&self.word);
        word.push(s);
        Cell { word }
    }

    /// Drops the last symbol; the unit is a fixed point.
    pub fn pred(&self) -> Cell {
        let mut word = self.word.clone();
        word.pop();
        Cell { word }
    }

    pub fn top(&self) -> Top {
        self.word.last().map_or(Top::Unit, |&s| Top::Symbol(s))
    }

    /// Number of divisions (the unit has depth 0).
    pub fn depth(&self) -> usize {
        self.word.len()
    }

    /// Length counting the unit itself, so the unit has length 1.
    pub fn length(&self) -> usize {
        self.word.len() + 1
    }

    pub fn prefix(&self, depth: usize) -> Cell {
        Cell { word: self.word[..depth.min(self.word.len())].to_vec() }
    }

    pub fn is_prefix_of(&self, other: &Cell) -> bool {
        other.word.starts_with(&self.word)
    }

    pub fn prefix_relation(&self, other: &Cell) -> PrefixRelation {
        match (self.is_prefix_of(other), other.is_prefix_of(self)) {
            (true, true) => PrefixRelation::Equal,
            (true, false) => PrefixRelation::Ancestor,
            (false, true) => PrefixRelation::Descendant,
            (false, false) => PrefixRelation::Incomparable,
        }
    }

    pub fn lex_cmp(&self, other: &Cell) -> Ordering {
        self.cmp(other)
    }

    /// Base-`base` integer code; for a fixed depth, numeric order equals
    /// lexicographic order.
    pub fn encode(&self, base: u64) -> u64 {
        self.word.iter().fold(0, |acc, s| acc * base + s.0 as u64)
    }

    pub fn decode(mut code: u64, base: u64, depth: usize) -> Cell {
        let mut word = vec![Symbol(0); depth];
        for slot in word.iter_mut().rev() {
            *slot = Symbol((code % base) as u8);
            code /= base;
        }
        Cell { word }
    }
}

impl fmt::Display for Cell {
    /// Raw symbol ids joined by dots; use [`Alphabet::format_cell`] for names.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.word.iter().map(|s| s.0.to_string()).collect();
        write!(f, "{}", ids.join("."))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["a", "b"]).unwrap()
    }

    fn abcd() -> Alphabet {
        Alphabet::new(["a", "b", "c", "d"]).unwrap()
    }

    #[test]
    fn suc_pred_top_length() {
        let al = ab();
        let a = al.symbol("a").unwrap();
        let b = al.symbol("b").unwrap();
        assert_eq!(al.format_cell(&Cell::unit().suc(a)), "a");
        let ab_ = al.parse_cell("a.b").unwrap();
        assert_eq!(al.format_cell(&ab_.suc(a)), "a.b.a");
        assert_eq!(al.format_cell(&al.parse_cell("b").unwrap().suc(b)), "b.b");
        assert!(al.suc(&ab_, Symbol(2)).is_err());

        assert_eq!(al.format_cell(&ab_.pred()), "a");
        assert_eq!(Cell::unit().pred(), Cell::unit());
        assert_eq!(al.format_cell(&al.parse_cell("b.a.a").unwrap().pred()), "b.a");

        assert_eq!(ab_.top(), Top::Symbol(b));
        assert_eq!(Cell::unit().top(), Top::Unit);
        assert_eq!(al.parse_cell("b.a.a").unwrap().top(), Top::Symbol(a));

        assert_eq!(Cell::unit().length(), 1);
        assert_eq!(ab_.length(), 3);
        assert_eq!(ab_.depth(), 2);
        assert_eq!(al.parse_cell("a").unwrap().length(), 2);
    }

    #[test]
    fn prefix_relations() {
        let al = ab();
        let p = |s| al.parse_cell(s).unwrap();
        assert_eq!(p("a").prefix_relation(&p("a.b")), PrefixRelation::Ancestor);
        assert_eq!(p("a.b").prefix_relation(&p("a")), PrefixRelation::Descendant);
        assert_eq!(p("a.b").prefix_relation(&p("a.b")), PrefixRelation::Equal);
        assert_eq!(p("a.b").prefix_relation(&p("b.a")), PrefixRelation::Incomparable);
        assert!(al.prefix_relation(&p("a"), &Cell::from_ids(&[3])).is_err());
    }

    #[test]
    fn lexicographic_order() {
        let al = ab();
        assert_eq!(
            al.parse_cell("a.b").unwrap().lex_cmp(&al.parse_cell("b.a").unwrap()),
            Ordering::Less
        );
        let x = al.parse_cell("b.b.a").unwrap();
        assert_eq!(x.lex_cmp(&x), Ordering::Equal);
        let al4 = abcd();
        assert_eq!(
            al4.parse_cell("c.d").unwrap().lex_cmp(&al4.parse_cell("d.a").unwrap()),
            Ordering::Less
        );
    }

    #[test]
    fn parse_and_format() {
        let al = ab();
        assert_eq!(al.parse_cell("a.b.b").unwrap(), Cell::from_ids(&[0, 1, 1]));
        assert_eq!(al.parse_cell("").unwrap(), Cell::unit());
        assert_eq!(al.parse_cell("a.z"), Err(Error::UnknownSymbol("z".into())));
    }

    #[test]
    fn alphabet_rejects_bad_names() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["a.b"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
    }

    #[test]
    fn encoding_matches_lex_order() {
        let al = abcd();
        let cells: Vec<Cell> = al.cells_at_depth(3).collect();
        assert_eq!(cells.len(), 64);
        for (i, c) in cells.iter().enumerate() {
            assert_eq!(c.encode(4), i as u64);
        }
        assert!(cells.windows(2).all(|w| w[0] < w[1]));
    }
}
