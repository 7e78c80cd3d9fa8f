use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("element {element} does not belong to group {group}")]
    ForeignElement { element: String, group: String },

    #[error("group descriptors differ: {0}")]
    GroupMismatch(String),

    #[error("invalid group table: {0}")]
    InvalidTable(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("element {0} is not in the subgroup")]
    NotInSubgroup(String),

    #[error("map is not an injective homomorphism: {0}")]
    NotInjective(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("fields differ: GF({0}) vs GF({1})")]
    FieldMismatch(u32, u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid rule: {0}")]
    InvalidRule(String),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
