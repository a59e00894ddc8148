use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("multiplication is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NonAssociative { a: usize, b: usize, c: usize },
    #[error("table has no two-sided identity element")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },
    #[error("generators produce a subgroup of order {generated}, group order is {order}")]
    GeneratorsDontGenerate { generated: usize, order: usize },
    #[error("{what}: size {size} exceeds limit {limit}")]
    SizeLimit {
        what: String,
        size: u128,
        limit: u128,
    },
    #[error("inconsistent constraint: {0}")]
    InconsistentConstraint(String),
    #[error("index ({i}, {j}) out of range for size {n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("element is not in the kernel")]
    NotInKernel,
    #[error("target mismatch: {0}")]
    TargetMismatch(String),
    #[error("degree {0} is beyond the supported range")]
    DegreeLimit(usize),
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not a homomorphism: f({x}*{y}) != f({x})*f({y})")]
    NotAHomomorphism { x: usize, y: usize },
    #[error("entries do not form a defining system: {0}")]
    NotADefiningSystem(String),
    #[error("search budget of {limit} nodes exhausted")]
    BudgetExceeded { limit: u64 },
    #[error("kernel element {element} is not central")]
    NotCentral { element: usize },
    #[error("kernel has order {order}, expected the prime {p}")]
    KernelNotOrderP { order: usize, p: u8 },
    #[error("no set-theoretic lift exists: {0}")]
    LiftImpossible(String),
    #[error("pattern has adjacent ones at positions {index} and {}", index + 1)]
    AdjacentOnes { index: usize },
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("cup form cannot cancel the obstruction at step {step}")]
    FormDegenerate { step: usize },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn size(what: impl Into<String>, size: u128, limit: u128) -> Self {
        Error::SizeLimit {
            what: what.into(),
            size,
            limit,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
