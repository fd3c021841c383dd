//! Dewey positions addressing sub-terms of an interaction.

use crate::error::CoreError;
use std::fmt;

/// A path into a binary term: a sequence of digits over {1, 2}.
///
/// Digit 1 descends into the left child (or a loop body), digit 2 into the
/// right child. The empty path addresses the term itself.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Position(Vec<u8>);

impl Position {
    /// The empty path, addressing the root.
    pub fn root() -> Self {
        Position(Vec::new())
    }

    /// Parses a digit string such as `"221"`. The empty string is the root.
    pub fn parse(text: &str) -> Result<Self, CoreError> {
        let mut digits = Vec::with_capacity(text.len());
        for c in text.chars() {
            match c {
                '1' => digits.push(1),
                '2' => digits.push(2),
                _ => return Err(CoreError::InvalidPosition(Position(Vec::new()))),
            }
        }
        Ok(Position(digits))
    }

    /// This position extended by one digit (1 or 2).
    pub fn child(&self, digit: u8) -> Self {
        debug_assert!(digit == 1 || digit == 2);
        let mut digits = Vec::with_capacity(self.0.len() + 1);
        digits.extend_from_slice(&self.0);
        digits.push(digit);
        Position(digits)
    }

    /// The position with `digit` prepended, i.e. `digit.self`.
    pub fn prefixed(&self, digit: u8) -> Self {
        debug_assert!(digit == 1 || digit == 2);
        let mut digits = Vec::with_capacity(self.0.len() + 1);
        digits.push(digit);
        digits.extend_from_slice(&self.0);
        Position(digits)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}
