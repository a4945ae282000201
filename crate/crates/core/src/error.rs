use thiserror::Error;

use crate::letter::Letter;

/// Errors raised by constructors and domain operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiebraError {
    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,

    #[error("alphabet of size {0} exceeds the supported maximum of {max}", max = crate::letter::MAX_LETTERS)]
    AlphabetTooLarge(usize),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("letter {0} appears more than once")]
    RepeatedLetter(Letter),

    #[error("letter {0} is missing from the expression")]
    MissingLetter(Letter),

    #[error("letter {letter} lies outside the alphabet x1..x{n}")]
    LetterOutOfRange { letter: Letter, n: usize },

    #[error("pattern {pattern} occurs at ({i},{j},{k})")]
    PatternViolation {
        pattern: crate::graph::Pattern,
        i: u8,
        j: u8,
        k: u8,
    },

    #[error("graph is not a tree: {0}")]
    NotATree(String),

    #[error("vertex {0} is the root; the operation needs a non-root vertex")]
    RootVertex(Letter),

    #[error("letter {0} does not occur in the tree")]
    LetterAbsent(Letter),

    #[error("order is not a permutation of the basis index set: {0}")]
    NotAPermutation(String),

    #[error("malformed graph description on line {line}: {message}")]
    GraphFormat { line: usize, message: String },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, LiebraError>;
