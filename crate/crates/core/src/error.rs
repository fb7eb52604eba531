use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u64),

    #[error("digit vectors must have length at least 1")]
    EmptyVector,

    #[error("digit {digit} at position {position} is not a base-{base} digit")]
    DigitOutOfRange {
        digit: u32,
        position: usize,
        base: u32,
    },

    #[error("base {base} with length {length} exceeds 2^64 elements")]
    TooLarge { base: u32, length: usize },

    #[error("value {value} does not fit in {length} base-{base} digits")]
    ValueOutOfRange {
        value: u128,
        base: u32,
        length: usize,
    },

    #[error("dimension mismatch: scheme expects base {expected_base} length {expected_length}, got base {base} length {length}")]
    DimensionMismatch {
        expected_base: u32,
        expected_length: usize,
        base: u32,
        length: usize,
    },

    #[error("invalid composition: {0}")]
    InvalidComposition(String),

    #[error("twist has {twist} units but composition has {parts} parts")]
    TwistLengthMismatch { twist: usize, parts: usize },

    #[error("twist unit {unit} for component {component} is not a unit modulo {modulus}")]
    InvalidTwist {
        component: usize,
        unit: u128,
        modulus: u128,
    },

    #[error("operation requires an untwisted scheme")]
    TwistedScheme,

    #[error("{elements} elements exceed the table cap of {cap}")]
    CapExceeded { elements: u128, cap: usize },

    #[error("enumeration of {required} items exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("key too short: {required} bytes required, {actual} given")]
    KeyTooShort { required: usize, actual: usize },

    #[error("stream length {length} is not a multiple of the block length {block}")]
    StreamLength { length: usize, block: usize },

    #[error("keystream exhausted: {required} digits required, {available} available")]
    KeystreamExhausted { required: usize, available: usize },

    #[error("table is not a group: {0}")]
    NotAGroup(String),

    #[error("order profile collision between partitions {0:?} and {1:?}")]
    FingerprintCollision(Vec<usize>, Vec<usize>),

    #[error("order profiles disagree within partition {0:?}")]
    FingerprintSplit(Vec<usize>),
}
