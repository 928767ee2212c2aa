use thiserror::Error;

/// Errors raised by shift-of-finite-type operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SftError {
    /// The transition matrix has no rows.
    #[error("transition matrix is empty")]
    EmptyMatrix,
    /// The transition matrix is not square.
    #[error("transition matrix is not square ({rows} rows, a row of length {cols})")]
    NotSquare { rows: usize, cols: usize },
    /// A matrix entry is neither 0 nor 1.
    #[error("transition entry ({row}, {col}) = {value} is not 0 or 1")]
    InvalidEntry { row: usize, col: usize, value: u8 },
    /// A symbol has no successor or no predecessor.
    #[error("symbol {symbol} has no successor or no predecessor")]
    EmptyRowOrColumn { symbol: usize },
    /// An enumeration would exceed its configured budget.
    #[error("enumeration of {count} items exceeds the budget of {budget}")]
    CapacityExceeded { count: u128, budget: usize },
    /// A word is too short for the requested Birkhoff sum.
    #[error("word of length {len} is too short (need {needed})")]
    WordTooShort { len: usize, needed: usize },
    /// A word is not admissible for the shift.
    #[error("word {word:?} is not admissible")]
    NotAdmissible { word: Vec<usize> },
    /// Two objects live on cylinders of incompatible depth or shift.
    #[error("depth mismatch: {0}")]
    DepthMismatch(String),
    /// A serialized function is missing a word or names an unknown one.
    #[error("function table mismatch: {0}")]
    TableMismatch(String),
}
