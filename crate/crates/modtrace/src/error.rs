use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("vanishing quantum integer in a denominator: [{0}]")]
    QuantumDenominatorZero(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate root of unity: q - 1/q = 0 at ell = {0}")]
    DegenerateRoot(u64),
    #[error("modules are defined over different parameters")]
    ParamsMismatch,
    #[error("unsupported root system {0}")]
    UnsupportedType(String),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("singular weight: [{0}] vanishes")]
    SingularWeight(String),
    #[error("even ell is not supported beyond sl(2): ell = {0}")]
    EvenEllUnsupported(u64),
    #[error("central element {0} does not act by a scalar")]
    NonScalarCentralAction(&'static str),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("not an intertwiner: fails to commute with {0}")]
    NotIntertwiner(&'static str),
    #[error("module is not semisimple: {0}")]
    NotSemisimple(String),
    #[error("non-generic parameter alpha = {0}")]
    NonGenericParameter(String),
    #[error("endomorphism is not scalar")]
    NotScalar,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    SyntaxError { line: usize, col: usize, msg: String },
    #[error("type mismatch at slice {slice}, position {position}: expected {expected}, found {found}")]
    TypeMismatch {
        slice: usize,
        position: usize,
        expected: String,
        found: String,
    },
    #[error("unknown name {0}")]
    UnknownName(String),
    #[error("unbound coupon {0}")]
    UnboundCoupon(String),
    #[error("unsupported orientation: {0}")]
    OrientationUnsupported(String),
    #[error("move not applicable: {0}")]
    MoveNotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
