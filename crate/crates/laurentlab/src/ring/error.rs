use thiserror::Error;

/// Errors raised by the exact polynomial layer.
///
/// `NotDivisible` is the load-bearing variant: the recurrence engines turn it
/// into a Laurent-property violation, so it carries the nonzero remainder as
/// a witness in canonical text form.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("operands belong to different variable tables")]
    TableMismatch,

    #[error("division by zero polynomial")]
    DivisionByZero,

    #[error("not divisible; remainder witness: {remainder}")]
    NotDivisible { remainder: String },

    #[error("gcd(0, 0) is undefined")]
    GcdOfZeros,

    #[error("zero denominator in rational function")]
    ZeroDenominator,

    #[error("no value assigned for variable `{var}`")]
    MissingAssignment { var: String },

    #[error("zero substituted into negatively exponented variable `{var}`")]
    ZeroToNegativePower { var: String },

    #[error("element is not invertible in Z[t]/(t^{modulus} + 1): {element}")]
    NotInvertible { modulus: usize, element: String },

    #[error("quotient ring modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: usize, right: usize },

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid variable table: {0}")]
    BadTable(String),
}
