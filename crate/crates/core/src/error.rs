use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
    #[error("factor signature mismatch: {0}")]
    Signature(String),
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("word {0:?} is not reduced")]
    NotReduced(Vec<usize>),
    #[error("size guard exceeded: {what} = {value} > {limit}")]
    Guard {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("parameter q = {0} outside (0, 1)")]
    QOutOfRange(f64),
    #[error("atom {atom} is not allowed on a {kind} factor")]
    AtomKind { atom: String, kind: String },
    #[error("factor {0} is not a Fock factor")]
    NotFock(usize),
    #[error("phase tuple does not sum to 0 mod 2pi (sum = {0})")]
    PhaseSum(f64),
    #[error("representation has no image for generator {0}")]
    MissingSymbol(String),
    #[error("limit q -> 0 diverges: {0}")]
    Divergent(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("construction failed: {0}")]
    Construction(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
