use thiserror::Error;

/// Errors raised by the algebra routines.
///
/// `NotDivisible` is special: inside table generation and the `P_n`
/// recursion it means an integrality statement failed, which is a bug in
/// this crate rather than bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("|det(multiplication by pi)| = {det}, expected q = {q}")]
    WrongResidueSize { det: String, q: u64 },
    #[error("O/pi O is not a field: {0}")]
    QuotientNotField(String),
    #[error("pi does not divide the residue characteristic {0}")]
    PiNotDividingP(u64),
    #[error("not divisible by pi: {0}")]
    NotDivisible(String),
    #[error("size cap exceeded: {needed} candidates, cap is {cap}")]
    SizeCap { needed: String, cap: u64 },
    #[error("feasibility cap exceeded: {0}")]
    FeasibilityCap(String),
    #[error("relation violated: {0}")]
    RelationViolation(String),
    #[error("pi-derivation is ill-defined: {0}")]
    IllDefined(String),
    #[error("coefficient ring must have characteristic {0}")]
    NotCharP(u64),
    #[error("missing assignment for variable {0}")]
    MissingAssignment(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
