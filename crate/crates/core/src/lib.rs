//! Discrete continua: cells as division words, adjacency generated from
//! division and merge patterns, and the structures built on top of them.

pub mod adjacency;
pub mod builtin;
pub mod cell;
pub mod cli;
pub mod complex;
pub mod error;
pub mod export;
pub mod function;
pub mod geometry;
pub mod pattern;
pub mod structure;

pub use adjacency::{adjacent_general, adjacent_same_length, level_graph, EdgeProvenance, LevelGraph, Levels};
pub use cell::{Alphabet, Cell, PrefixRelation, Symbol, Top};
pub use error::{Error, Result};
pub use function::{brouwer_witness, is_continuous, is_monotonic, is_strict, stream_image, streams_equivalent, BrouwerWitness, CellFunction};
pub use complex::{CellSpace, Complex, Node, SegmentMap, ShapeTree};
pub use pattern::{AdjacencyPattern, BorderGluing, DPattern, GluingKind, MRule, PatternRef};
