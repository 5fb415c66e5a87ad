use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {msg}")]
    Parse { offset: usize, msg: String },
    #[error("unknown identifier '{name}' at byte {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("NonTransformable: {0}")]
    NonTransformable(String),
    #[error("UnsupportedAtom: {0}")]
    UnsupportedAtom(String),
    #[error("DeltaNotPointwise: the Dirac delta has no pointwise value")]
    DeltaNotPointwise,
    #[error("SymbolicOnly: {0} has no pointwise evaluator")]
    SymbolicOnly(String),
    #[error("unbound variable '{0}'")]
    UnboundVariable(String),
    #[error("NotHomogeneous: {0}")]
    NotHomogeneous(String),
    #[error("ImproperImage: numerator degree {num} >= denominator degree {den}")]
    ImproperImage { num: usize, den: usize },
    #[error("IrreducibleHighDegree: factor of degree {0} has no rational or quadratic splitting")]
    IrreducibleHighDegree(usize),
    #[error("IrrationalRoots: {0} has real roots outside Q(pi)")]
    IrrationalRoots(String),
    #[error("IrrationalFrequency: {0} has an oscillation frequency outside Q(pi)")]
    IrrationalFrequency(String),
    #[error("UPowerMismatch: image carries u^{0} beyond the homogenized form")]
    UPowerMismatch(i32),
    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("scale factor must be positive, got {0}")]
    NonPositiveScale(String),
    #[error("ConvergenceFailure: {0}")]
    ConvergenceFailure(String),
    #[error("RocViolation: s/u = {r} does not exceed the exponential order {order}")]
    RocViolation { r: f64, order: f64 },
    #[error("OscillationFailure: Talbot estimates disagree by {0:e}")]
    OscillationFailure(f64),
    #[error("NonSineData: {0}")]
    NonSineData(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("schema violation in row {row}: {msg}")]
    Schema { row: i64, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse { .. } => "ParseError",
            Error::UnknownIdentifier { .. } => "UnknownIdentifier",
            Error::NonTransformable(_) => "NonTransformable",
            Error::UnsupportedAtom(_) => "UnsupportedAtom",
            Error::DeltaNotPointwise => "DeltaNotPointwise",
            Error::SymbolicOnly(_) => "SymbolicOnly",
            Error::UnboundVariable(_) => "UnboundVariable",
            Error::NotHomogeneous(_) => "NotHomogeneous",
            Error::ImproperImage { .. } => "ImproperImage",
            Error::IrreducibleHighDegree(_) => "IrreducibleHighDegree",
            Error::IrrationalRoots(_) => "IrrationalRoots",
            Error::IrrationalFrequency(_) => "IrrationalFrequency",
            Error::UPowerMismatch(_) => "UPowerMismatch",
            Error::Arity { .. } => "ArityMismatch",
            Error::NonPositiveScale(_) => "NonPositiveScale",
            Error::ConvergenceFailure(_) => "ConvergenceFailure",
            Error::RocViolation { .. } => "RocViolation",
            Error::OscillationFailure(_) => "OscillationFailure",
            Error::NonSineData(_) => "NonSineData",
            Error::InvalidDomain(_) => "InvalidDomain",
            Error::Schema { .. } => "SchemaViolation",
            Error::Io(_) => "IoError",
        }
    }
}
