use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    /// The input is not the shape an operation needs: a solution that is not
    /// a tree of the parent graph, a tree instance with a cycle, and so on.
    #[error("structural error: {0}")]
    Structural(String),
    #[error("graph is not connected")]
    Disconnected,
    /// A value is outside the operation's domain (non-positive cost, s < 1,
    /// oracle size guard exceeded, ...).
    #[error("domain error: {0}")]
    Domain(String),
}

macro_rules! structural {
    ($($arg:tt)*) => { $crate::error::Error::Structural(alloc::format!($($arg)*)) };
}

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(alloc::format!($($arg)*)) };
}

pub(crate) use {domain, structural};
