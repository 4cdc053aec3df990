use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("cannot combine orders {0} and {1} without explicit promotion")]
    IncompatibleOrders(u32, u32),
    #[error("order {from} does not divide {to}")]
    NotDivisible { from: u32, to: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("division by a non-rational cyclotomic number")]
    NonRationalDivisor,
}

#[derive(Debug, Error)]
pub enum GammaError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("class sizes sum to {sum}, expected |G| = {order}")]
    SizeSum { sum: u64, order: u64 },
    #[error("|G|/|c| is not an integer for class {0}")]
    NonIntegerCentralizer(String),
    #[error("inverse map is not an involution fixing the identity class")]
    BadInverse,
    #[error("orthogonality fails for characters ({0}, {1})")]
    Orthogonality(usize, usize),
    #[error("column orthogonality fails for classes ({0}, {1})")]
    ColumnOrthogonality(usize, usize),
    #[error("first character is not trivial")]
    TrivialCharacter,
    #[error("character table is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("character value of order {0} does not fit exponent {1}")]
    ValueOrder(u32, u32),
    #[error("weighted form entry ({0}, {1}) is not an integer")]
    NonIntegerForm(usize, usize),
    #[error("no two-dimensional representation known for {0}; designate it explicitly")]
    NoNaturalRep(String),
    #[error("unknown built-in group {0:?}")]
    UnknownBuiltin(String),
    #[error("character vector has length {0}, expected {1}")]
    Length(usize, usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("group of order {0} exceeds the enumeration guard {1}")]
    TooLarge(u128, u128),
    #[error("elements have different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("no explicit matrices for character {0}")]
    NotRealizable(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FockError {
    #[error("mode {0} must be odd and positive")]
    BadMode(i64),
    #[error("vector is not homogeneous")]
    Inhomogeneous,
    #[error("partition has an even part")]
    EvenPart,
    #[error("degree mismatch: {0} vs {1}")]
    Degree(usize, usize),
    #[error("character vector has length {0}, expected {1}")]
    Length(usize, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartableError {
    #[error("partition at index {0} is not strict")]
    NotStrict(usize),
    #[error("weight mismatch: {0} vs {1}")]
    Weight(usize, usize),
    #[error("degree formula produced a non-integer for {0}")]
    NonIntegerDegree(String),
    #[error("vertex operator product left coset {0}, expected the zero coset")]
    WrongCoset(usize),
    #[error("table check failed: {0}")]
    Check(String),
    #[error(transparent)]
    Fock(#[from] FockError),
}
