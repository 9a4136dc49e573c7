use thiserror::Error;

/// Everything that can go wrong inside the library.
///
/// Variants split into input problems (bad field, bad form) and
/// mathematical outcomes (no root in the residue field, precision ran out,
/// total space not normal, ...). The CLI maps the latter to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("elements belong to different rings")]
    RingMismatch,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("no root in the residue field: {0}")]
    NoResidueRoot(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("no unit pivot available during elimination")]
    NoUnitPivot,
    #[error("operation not available in this characteristic")]
    WrongCharacteristic,
    #[error("the form is identically zero")]
    ZeroForm,
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("not a conic bundle: every coefficient lies in the maximal ideal")]
    NotConicBundle,
    #[error("total space is not normal: {0}")]
    NotCanonicalTotalSpace(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("all cross terms vanish to the working precision (wild bundle, or precision too low)")]
    WildOrPrecision,
    #[error("no normal form reached: {0}")]
    Unnormalizable(String),
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
    #[error("unrecognized family: {0}")]
    UnrecognizedFamily(String),
    #[error("discriminant is identically zero")]
    ZeroDiscriminant,
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Stable machine-readable code, used in JSON error reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidField(_) => "InvalidField",
            Error::RingMismatch => "RingMismatch",
            Error::NotAUnit => "NotAUnit",
            Error::NoResidueRoot(_) => "NoResidueRoot",
            Error::NotInvertible => "NotInvertible",
            Error::NoUnitPivot => "NoUnitPivot",
            Error::WrongCharacteristic => "WrongCharacteristic",
            Error::ZeroForm => "ZeroForm",
            Error::TooLarge(_) => "TooLarge",
            Error::NotConicBundle => "NotConicBundle",
            Error::NotCanonicalTotalSpace(_) => "NotCanonicalTotalSpace",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::WildOrPrecision => "WildOrPrecision",
            Error::Unnormalizable(_) => "Unnormalizable",
            Error::Inconsistent(_) => "Inconsistent",
            Error::UnrecognizedFamily(_) => "UnrecognizedFamily",
            Error::ZeroDiscriminant => "ZeroDiscriminant",
            Error::Unsupported(_) => "Unsupported",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
