//! Ordered alphabets of single-character symbols.

use std::error::Error;
use std::fmt;
use std::str::FromStr;

/// An ordered set of distinct symbols. The order is significant: matrix
/// columns, digit values and lexicographic word enumeration all follow it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DuplicateSymbol(pub char);

impl fmt::Display for DuplicateSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "duplicate symbol '{}'", self.0)
    }
}

impl Error for DuplicateSymbol {}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self, DuplicateSymbol> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        for (i, &c) in symbols.iter().enumerate() {
            if symbols[..i].contains(&c) {
                return Err(DuplicateSymbol(c));
            }
        }
        Ok(Alphabet { symbols })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn contains(&self, symbol: char) -> bool {
        self.symbols.contains(&symbol)
    }

    pub fn index_of(&self, symbol: char) -> Option<usize> {
        self.symbols.iter().position(|&c| c == symbol)
    }

    pub fn symbol(&self, index: usize) -> char {
        self.symbols[index]
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn iter(&self) -> impl Iterator<Item = char> + '_ {
        self.symbols.iter().copied()
    }
}

impl FromStr for Alphabet {
    type Err = DuplicateSymbol;

    fn from_str(s: &str) -> Result<Self, DuplicateSymbol> {
        Alphabet::new(s.chars())
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", c)?;
        }
        Ok(())
    }
}
