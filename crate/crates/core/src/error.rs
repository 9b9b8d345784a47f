use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("spec error: {0}")]
    Spec(String),
    #[error("unknown generator: {0}")]
    UnknownGenerator(String),
    #[error("states belong to different algebras")]
    MixedAlgebras,
    #[error("grade mismatch: {0}")]
    GradeMismatch(String),
    #[error("operator is not nilpotent on the piece")]
    NotNilpotent,
    #[error("bilinear form is degenerate")]
    DegenerateForm,
    #[error("invalid Lie data: {0}")]
    InvalidLieData(String),
    #[error("no candidate differential satisfies the pinned identities")]
    NoValidDifferential,
    #[error("Lie algebra mismatch: {0}")]
    LieMismatch(String),
    #[error("piece is not finite: {0}")]
    InfinitePiece(String),
    #[error("Lie algebra is not abelian")]
    NotAbelian,
    #[error("operator only defined at weight one, got weight {0}")]
    WrongWeight(i32),
    #[error("target is not closed")]
    NotClosed,
    #[error("target is not in the subspace")]
    NotInSubspace,
    #[error("operator is not well defined on cohomology")]
    NotWellDefined,
    #[error("cache entry corrupt: {0}")]
    CacheCorrupt(String),
    #[error("Lie algebra is not semisimple")]
    NotSemisimple,
    #[error("representation is not faithful")]
    NotFaithful,
    #[error("no fixture available: {0}")]
    NoFixture(String),
    #[error("hypothesis failed: {0}")]
    HypothesisFailed(String),
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown name '{name}' at {pos}")]
    UnknownName { pos: usize, name: String },
    #[error("grade error at {pos}: {msg}")]
    GradeError { pos: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InfinitePiece(_) | Error::NotNilpotent => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Spec(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
