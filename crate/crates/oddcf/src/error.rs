use thiserror::Error;

/// Errors surfaced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed textual input (a rational or a continued-fraction string).
    #[error("parse: {0}")]
    Parse(String),
    /// Structurally fine input that lies outside an operation's domain.
    #[error("domain: {0}")]
    Domain(String),
    /// A size or precision limit was exceeded.
    #[error("resource: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;
