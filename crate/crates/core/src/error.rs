use thiserror::Error;

/// Error type shared by every stage of the simulation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// The grid cannot represent the requested field, carrier or loop.
    #[error("sampling error: {0}")]
    Sampling(String),
    /// A parameter is outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Grids, centers or displacements are geometrically incompatible.
    #[error("geometry error: {0}")]
    Geometry(String),
    /// Fringe demodulation could not isolate the carrier lobe.
    #[error("demodulation error: {0}")]
    Demodulation(String),
    /// A winding loop crossed a region without usable phase.
    #[error("unreliable loop: {0}")]
    UnreliableLoop(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("image format error: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    /// Any of the above, annotated with the scenario that produced it.
    #[error("{context}: {source}")]
    Scenario {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Sampling,
    Domain,
    Geometry,
    Demodulation,
    Config,
    Format,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Sampling(_) => ErrorKind::Sampling,
            Error::Domain(_) => ErrorKind::Domain,
            Error::Geometry(_) => ErrorKind::Geometry,
            Error::Demodulation(_) | Error::UnreliableLoop(_) => ErrorKind::Demodulation,
            Error::Config(_) => ErrorKind::Config,
            Error::Format(_) => ErrorKind::Format,
            Error::Io(_) => ErrorKind::Io,
            Error::Scenario { source, .. } => source.kind(),
        }
    }

    pub fn with_context(self, context: impl Into<String>) -> Self {
        Error::Scenario {
            context: context.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
