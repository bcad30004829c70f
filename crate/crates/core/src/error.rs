use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("relative entropy diverges: support of the first argument is not contained in the second")]
    InfiniteDivergence,

    #[error("populations {populations:?} require a negative bath temperature")]
    NegativeTemperatureRequired { populations: [f64; 3] },

    #[error("population mismatch on level {level}: {engine} vs {partner}")]
    PopulationMismatch {
        level: usize,
        engine: f64,
        partner: f64,
    },

    #[error("invalid acceptor: {0}")]
    InvalidAcceptor(String),

    #[error("work is zero, entropy pollution undefined")]
    ZeroWork,

    #[error("not an engine: efficiency {0} is not positive")]
    NotAnEngine(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("collective angle must be pi, got {0}")]
    WrongOmega(f64),

    #[error("unit index {index} out of range 1..={n_units}")]
    IndexOutOfRange { index: usize, n_units: usize },

    #[error("config error on line {line}: {message}")]
    Config { line: usize, message: String },
}

impl Error {
    /// Short variant name, used on the CLI diagnostic stream.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidState(_) => "InvalidState",
            Error::InfiniteDivergence => "InfiniteDivergence",
            Error::NegativeTemperatureRequired { .. } => "NegativeTemperatureRequired",
            Error::PopulationMismatch { .. } => "PopulationMismatch",
            Error::InvalidAcceptor(_) => "InvalidAcceptor",
            Error::ZeroWork => "ZeroWork",
            Error::NotAnEngine(_) => "NotAnEngine",
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::WrongOmega(_) => "WrongOmega",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::Config { .. } => "ConfigError",
        }
    }
}
