use thiserror::Error;

use crate::fusion_ring::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear system is inconsistent (residual {residual:.3e})")]
    Inconsistent { residual: f64 },
    #[error("matrix is not diagonalizable within tolerance")]
    NotDiagonalizable,
    #[error("matrices do not commute (commutator norm {residual:.3e})")]
    NotCommuting { residual: f64 },
    #[error("random combination stayed degenerate after {attempts} seeds starting at {seed}")]
    DegenerateSeed { seed: u64, attempts: usize },
    #[error("{value} is not within snapping distance of an integer")]
    NotNearInteger { value: String },

    #[error("fusion ring data is invalid: {}", format_violations(.0))]
    InvalidRing(Vec<Violation>),
    #[error("Frobenius-Perron computation failed: {0}")]
    PerronFailure(String),
    #[error("subcategory enumeration exceeded {0} closure calls")]
    EnumerationBound(usize),

    #[error("block splitting failed: {0}")]
    SplitFailure(String),
    #[error("class function algebra is not semisimple: {0}")]
    NotSemisimple(String),
    #[error("element is not idempotent: block eigenvalue {0} outside the {{0,1}} band")]
    NotIdempotent(String),

    #[error("index set {0:?} is not closed under fusion")]
    ClosureViolation(Vec<usize>),
    #[error("block partition does not reproduce idempotents of CE(L): {0}")]
    PartitionMismatch(String),
    #[error("span of CE(L) is not closed under multiplication (residual {0:.3e})")]
    ClosureFailure(f64),
    #[error("CE intersection has dimension {found}, expected {expected}")]
    CeIntersectionMismatch { expected: usize, found: usize },
    #[error("dimension inequality violated: {lhs} > {rhs}")]
    InequalityViolation { lhs: f64, rhs: f64 },
    #[error("round trip failed for subcategory {0:?}")]
    RoundTripFailure(Vec<usize>),
    #[error("lattice monotonicity failed: {0}")]
    MonotonicityFailure(String),

    #[error("bad group table: {0}")]
    BadTable(String),
    #[error("unknown builtin group `{0}`")]
    UnknownBuiltin(String),
    #[error("character table degeneration: {0}")]
    DegenerationFailure(String),
    #[error("value could not be snapped to an integer: {0}")]
    SnapFailure(String),
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("oracle mismatch:\n{}", .0.join("\n"))]
    OracleMismatch(Vec<String>),

    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}
