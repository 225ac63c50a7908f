use std::fmt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at row {row}{}: {message}", column_suffix(.column))]
    Parse {
        /// 1-based data row (the header is row 0).
        row: usize,
        column: Option<String>,
        message: String,
    },

    #[error("input contains no data rows")]
    EmptyInput,

    #[error("size error: {0}")]
    Size(String),

    #[error("state error: {0}")]
    State(String),

    #[error("sample id {0} is not in the buffer")]
    Membership(usize),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn column_suffix(column: &Option<String>) -> String {
    match column {
        Some(c) => format!(", column {c}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn dimension(expected: usize, got: usize, what: impl fmt::Display) -> Self {
        Error::Dimension(format!("{what}: expected {expected}, got {got}"))
    }

    /// Strips any [`Error::Context`] layers.
    pub fn root(&self) -> &Error {
        match self {
            Error::Context { source, .. } => source.root(),
            other => other,
        }
    }
}

pub(crate) trait ResultExt<T> {
    fn context<C: fmt::Display>(self, f: impl FnOnce() -> C) -> Result<T>;
}

impl<T> ResultExt<T> for Result<T> {
    fn context<C: fmt::Display>(self, f: impl FnOnce() -> C) -> Result<T> {
        self.map_err(|e| Error::Context { context: f().to_string(), source: Box::new(e) })
    }
}
