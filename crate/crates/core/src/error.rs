use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix does not have full column rank")]
    RankDeficient,
    #[error("Gram matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("{0} is not a negative discriminant")]
    NotDiscriminant(i64),
    #[error("form {0} is not primitive")]
    ImprimitiveForm(String),
    #[error("|D| = {d} is not an admissible split prime for N = {n}")]
    NotSplitPrime { n: i64, d: i64 },
    #[error("unsupported base field N = {0} (class number one fields -7, -11, -19, -43, -67, -163 only)")]
    UnsupportedField(i64),
    #[error("conductor {0} is not a prime = 3 mod 4 above 3")]
    UnsupportedConductor(i64),
    #[error("element lies in the conductor ideal; the character vanishes there")]
    InConductor,
    #[error("point is not in the upper half plane")]
    NotUpperHalfPlane,
    #[error("incompatible ideal bases: {0}")]
    IncompatibleBasis(String),
    #[error("integer recognition failed for {what}: residual {residual:e} exceeds tolerance {tolerance:e}")]
    Residual { what: String, residual: f64, tolerance: f64 },
    #[error("oracle disagreement: |L_formula - L_oracle| = {diff:e} exceeds {tolerance:e}")]
    OracleDisagreement { diff: f64, tolerance: f64 },
    #[error("precision failure: {0}")]
    Precision(String),
    #[error("no primitive solution found within search bound {0}")]
    SearchBound(i64),
    #[error("convention violation: {0}")]
    Convention(String),
    #[error("ideals have different left orders")]
    MismatchedOrders,
    #[error("mass identity not reached: {found} of {expected} after exhausting neighbours")]
    MassNotReached { found: String, expected: String },
    #[error("inconsistent |n| within ideal class {label}: {values:?}")]
    InconsistentM { label: String, values: Vec<i64> },
    #[error("non-integral multiplicity r for class {label}")]
    NonIntegralR { label: String },
    #[error("even parity at |D| = {d}: sum of n = {sum}")]
    EvenParity { d: i64, sum: i64 },
    #[error("identity `{identity}` failed: {detail}")]
    Identity { identity: String, detail: String },
}

impl Error {
    pub(crate) fn identity(identity: &str, detail: impl Into<String>) -> Self {
        Error::Identity { identity: identity.to_string(), detail: detail.into() }
    }
}
