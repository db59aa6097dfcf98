use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("symbol id {id} is outside an alphabet of size {size}")]
    InvalidSymbol { id: usize, size: usize },

    #[error("unknown symbol name `{0}`")]
    UnknownSymbol(String),

    #[error("cell {0} does not belong to this alphabet")]
    AlphabetMismatch(String),

    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    /// An adjacent pair whose top symbols have no merging rule.
    #[error("refinement violation at depth {depth}: edge {smaller} -- {larger} has no rule for key ({key_left},{key_right})")]
    MissingRule {
        depth: usize,
        smaller: String,
        larger: String,
        key_left: String,
        key_right: String,
    },

    #[error("cells have different depths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("depth must be at least {min}, got {got}")]
    DepthTooSmall { min: usize, got: usize },

    #[error("depth {depth} would produce {cells} cells, above the supported limit")]
    DepthTooLarge { depth: usize, cells: u128 },

    #[error("unsupported pattern: {0}")]
    UnsupportedPattern(String),

    #[error("unsupported gluing: {0}")]
    UnsupportedGluing(String),

    #[error("cells have different colors ({left} vs {right})")]
    ColorMismatch { left: u8, right: u8 },

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("cell {0} is outside the function's domain")]
    OutOfDomain(String),

    #[error("parse error: {0}")]
    Parse(String),
}
