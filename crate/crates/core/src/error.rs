use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("moment E[x^{a} conj(x)^{b}] diverges for {spec}")]
    InfiniteMoment { spec: String, a: u32, b: u32 },

    #[error("conjugate power requested from real atom {0}")]
    ConjugateOfReal(String),

    #[error("invalid atom spec: {0}")]
    InvalidAtom(String),

    #[error("invalid ensemble: {0}")]
    InvalidEnsemble(String),

    #[error("eigensolver did not converge for eigenvalue {index} after {iterations} iterations")]
    EigenNoConvergence { index: usize, iterations: usize },

    #[error("non-finite matrix entry at ({0}, {1})")]
    NonFiniteEntry(usize, usize),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("signed measure has total mass {0}, expected 0")]
    NotNullMass(f64),

    #[error("mean oracle unavailable for k = {0}")]
    OracleUnavailable(u32),

    #[error("sample length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("{failed} of {trials} trials failed, above the 1% budget")]
    TooManyFailures { failed: usize, trials: usize },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
