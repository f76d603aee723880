use posaffine::cocycle::CocycleError;
use posaffine::crooked::CrookedError;
use posaffine::flags::FlagError;
use posaffine::freegroup::GroupError;
use posaffine::margulis::MargulisError;
use posaffine::numcore::NumError;
use posaffine::posrep::RepError;

/// Exit status of a failed certification.
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_AMBIGUOUS: i32 = 3;
pub const EXIT_CONFIG: i32 = 4;
/// I/O and other errors outside the documented classes.
pub const EXIT_OTHER: i32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{stage}: ambiguous sign: {message}")]
    Ambiguous { stage: String, message: String },
    #[error("{stage} failed: {message}")]
    Stage { stage: String, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Ambiguous { .. } => EXIT_AMBIGUOUS,
            CliError::Stage { .. } => EXIT_FAIL,
            CliError::Io { .. } => EXIT_OTHER,
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> CliError {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Ambiguity errors become `Ambiguous`, everything else `Stage`.
    pub fn at(stage: &str, e: impl Into<AnyError>) -> CliError {
        let e = e.into();
        let message = e.to_string();
        let stage = stage.to_string();
        if e.ambiguous() {
            CliError::Ambiguous { stage, message }
        } else {
            CliError::Stage { stage, message }
        }
    }

    pub fn stage(&self) -> Option<&str> {
        match self {
            CliError::Ambiguous { stage, .. } | CliError::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }
}

/// Library errors the pipeline can hit.
#[derive(Debug, thiserror::Error)]
pub enum AnyError {
    #[error(transparent)]
    Num(#[from] NumError),
    #[error(transparent)]
    Flag(#[from] FlagError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
    #[error(transparent)]
    Margulis(#[from] MargulisError),
    #[error(transparent)]
    Crooked(#[from] CrookedError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn flag_ambiguous(e: &FlagError) -> bool {
    matches!(e, FlagError::AmbiguousSign { .. } | FlagError::Num(NumError::AmbiguousSign { .. }))
}

fn rep_ambiguous(e: &RepError) -> bool {
    match e {
        RepError::Num(NumError::AmbiguousSign { .. }) => true,
        RepError::Flag(f) => flag_ambiguous(f),
        _ => false,
    }
}

impl AnyError {
    fn ambiguous(&self) -> bool {
        match self {
            AnyError::Num(e) => matches!(e, NumError::AmbiguousSign { .. }),
            AnyError::Flag(e) => flag_ambiguous(e),
            AnyError::Rep(e) => rep_ambiguous(e),
            AnyError::Cocycle(CocycleError::Rep(e)) => rep_ambiguous(e),
            AnyError::Cocycle(CocycleError::Num(e)) => matches!(e, NumError::AmbiguousSign { .. }),
            AnyError::Margulis(e) => e.is_numeric_ambiguity(),
            AnyError::Crooked(e) => e.is_numeric_ambiguity(),
            _ => false,
        }
    }
}
