use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("carrier must have at least one element")]
    EmptyCarrier,
    #[error("relation matrix is not square: row {row} has {len} entries, expected {size}")]
    NotSquare { row: usize, len: usize, size: usize },
    #[error("index {index} out of range for carrier of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("relation is not reflexive at {0}")]
    NotReflexive(usize),
    #[error("relation is not transitive: {0} <= {1} and {1} <= {2} but not {0} <= {2}")]
    NotTransitive(usize, usize, usize),
    #[error("relation is not antisymmetric: {0} and {1} are mutually related")]
    NotAntisymmetric(usize, usize),
    #[error("no least upper bound for ({0}, {1})")]
    NoLub(usize, usize),
    #[error("no bottom element")]
    NoBottom,
    #[error("join table entry for ({0}, {1}) is missing")]
    MissingJoin(usize, usize),
    #[error("join table entry for ({0}, {1}) is not the least upper bound")]
    InvalidJoin(usize, usize),
    #[error("no least residual c with {1} <= {0} + c")]
    NoLeastResidual(usize, usize),
    #[error("{what} exceeds cap: {value} > {cap}")]
    CapExceeded { what: &'static str, value: u128, cap: u128 },
    #[error("unknown canned name `{0}`")]
    UnknownName(String),
    #[error("operands live in different host posets")]
    HostMismatch,
    #[error("set is not downward closed: {0} is a member but {1} below it is not")]
    NotDownwardClosed(usize, usize),
    #[error("set is not upward closed: {0} is a member but {1} above it is not")]
    NotUpwardClosed(usize, usize),
    #[error("interval [0, a] needs a != 0")]
    BottomTop,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("map is not an upper-semilattice homomorphism at ({0}, {1})")]
    NotAUslHom(usize, usize),
    #[error("syntax error at byte {position}: expected {expected}")]
    SyntaxError { position: usize, expected: String },
    #[error("atom p{} has no value", .0 + 1)]
    UnassignedAtom(usize),
    #[error("map is not a p-morphism: {0}")]
    NotAPMorphism(String),
    #[error("p-morphism is not onto: {0} has no preimage")]
    NotOnto(usize),
    #[error("no p-morphism onto the target exists")]
    NoPMorphismFound,
    #[error("malformed algebra: {0}")]
    MalformedAlgebra(String),
    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub(crate) fn cap_check(what: &'static str, value: u128, cap: u128) -> Result<()> {
    if value > cap {
        Err(Error::CapExceeded { what, value, cap })
    } else {
        Ok(())
    }
}
