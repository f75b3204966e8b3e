use thiserror::Error;

/// Every failure the library reports. Theorem-check failures are not errors;
/// they surface as failing verdicts in the report types.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QgError {
    #[error("axiom `{axiom}` violated (residual {residual:e})")]
    AxiomViolation { axiom: String, residual: f64 },

    #[error("Haar state is not faithful (smallest Gram eigenvalue {0:e})")]
    NonFaithfulHaar(f64),

    #[error("Haar state is not tracial (residual {0:e})")]
    NonTracialHaar(f64),

    #[error("no invariant state exists")]
    NoInvariantState,

    #[error("invariant states form a space of dimension {0}")]
    NonUniqueInvariantState(usize),

    #[error("no orientation of the fundamental unitary satisfies all contracts: {0}")]
    OrientationFailure(String),

    #[error("invalid group table: {0}")]
    InvalidGroupTable(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("functional is not positive (min density eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("functional is not unital (value at 1 is {0})")]
    NotUnital(String),

    #[error("states belong to different quantum groups")]
    MixedQuantumGroups,

    #[error("non-degeneracy criteria disagree: cesaro-limit says {primary}, support search says {oracle}")]
    OracleDisagreement { primary: bool, oracle: bool },

    #[error("Markov operator is not covariant (residual {0:e})")]
    CovarianceViolation(f64),

    #[error("mean ergodic decomposition failed: {0}")]
    MeanErgodicFailure(String),

    #[error("Choi-Effros product is not associative (residual {0:e})")]
    NonAssociativeProduct(f64),

    #[error("Choi-Effros product is not a *-product (residual {0:e})")]
    NonStarProduct(f64),

    #[error("Wedderburn decomposition failed: {0}")]
    WedderburnFailure(String),

    #[error("boundary is not trivial (dimension {0})")]
    BoundaryNotTrivial(usize),

    #[error("second leg leaves pi(A) (residual {0:e})")]
    SecondLegEscape(f64),

    #[error("extension contract violated (residual {0:e})")]
    ExtensionContractViolation(f64),

    #[error("right leg of the coaction leaves the harmonic space (residual {0:e})")]
    RightLegEscape(f64),

    #[error("crossed product constructions disagree (residual {0:e})")]
    BetaMismatch(f64),

    #[error("spectrum is not closed: {0}")]
    ClosureFailure(String),

    #[error("Gelfand map is not surjective (rank {rank}, expected {expected})")]
    SurjectivityFailure { rank: usize, expected: usize },

    #[error("Gelfand map does not intertwine comultiplications (residual {0:e})")]
    IntertwinerFailure(f64),

    #[error("weights are not a probability vector: {0}")]
    NotProbabilityVector(String),
}

pub type Result<T> = std::result::Result<T, QgError>;

impl QgError {
    pub(crate) fn axiom(axiom: &str, residual: f64) -> Self {
        QgError::AxiomViolation { axiom: axiom.to_string(), residual }
    }
}
