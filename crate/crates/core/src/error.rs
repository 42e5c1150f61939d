use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole hit: a denominator factor vanishes at the evaluation point")]
    PoleHit,

    #[error("factor bag is not a sub-multiset of the target")]
    NotDivisible,

    #[error("{what} index {index} is outside the stored range (length {len})")]
    ParamOutOfRange {
        what: &'static str,
        index: usize,
        len: usize,
    },

    #[error("invalid parameter {field}[{index}]: {reason}")]
    InvalidParam {
        field: &'static str,
        index: usize,
        reason: String,
    },

    #[error("regularity violated: {condition} at n = {n}")]
    RegularityViolation { n: usize, condition: String },

    #[error("free subdiagonal value h[{index}] must be nonzero")]
    ZeroFreeVariable { index: usize },

    #[error("root finder did not converge in {iterations} iterations (worst residual {worst:e})")]
    NoConvergence { iterations: usize, worst: f64 },

    #[error("not expressible against O_{index}: {reason}")]
    NotExpressible { index: usize, reason: String },

    #[error("degenerate moments: m1 equals d1 * m0")]
    DegenerateMoments,

    #[error("special case violated: {0}")]
    SpecialCaseViolation(String),

    #[error("inadmissible shift point: {what} vanishes at index {index}")]
    InadmissibleShift { what: &'static str, index: usize },

    #[error("instance generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
