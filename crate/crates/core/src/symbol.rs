//! Symbols, words and the closed alphabet every expression is interpreted over.

use std::fmt;

use crate::error::{Error, Result};

/// A single letter of the alphabet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub char);

impl Symbol {
    pub fn as_char(self) -> char {
        self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Words are plain symbol vectors; the empty vector is ε.
pub type Word = Vec<Symbol>;

/// Builds a word from a string, one symbol per char. `@e` is read as ε.
pub fn word(s: &str) -> Word {
    if s == "@e" {
        return Vec::new();
    }
    s.chars().map(Symbol).collect()
}

/// Renders a word, printing ε as `@e` so output can be parsed back.
pub fn fmt_word(w: &[Symbol]) -> String {
    if w.is_empty() {
        "@e".to_string()
    } else {
        w.iter().map(|s| s.0).collect()
    }
}

/// Characters that may name a symbol.
pub fn is_symbol_char(c: char) -> bool {
    c.is_ascii_alphanumeric()
}

/// A finite, nonempty, sorted set of symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = Symbol>) -> Result<Self> {
        let mut symbols: Vec<Symbol> = symbols.into_iter().collect();
        symbols.sort();
        symbols.dedup();
        if symbols.is_empty() {
            return Err(Error::Definitions {
                line: 0,
                msg: "alphabet must not be empty".into(),
            });
        }
        if let Some(bad) = symbols.iter().find(|s| !is_symbol_char(s.0)) {
            return Err(Error::Definitions {
                line: 0,
                msg: format!("`{}` cannot be used as a symbol", bad.0),
            });
        }
        Ok(Alphabet { symbols })
    }

    /// Parses a whitespace separated list such as `a b c`.
    pub fn parse(list: &str) -> Result<Self> {
        let mut out = Vec::new();
        for tok in list.split_whitespace() {
            let mut chars = tok.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => out.push(Symbol(c)),
                _ => {
                    return Err(Error::Definitions {
                        line: 0,
                        msg: format!("alphabet entry `{tok}` is not a single character"),
                    })
                }
            }
        }
        Alphabet::new(out)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.symbols.binary_search(&s).is_ok()
    }

    pub fn index_of(&self, s: Symbol) -> Option<usize> {
        self.symbols.binary_search(&s).ok()
    }

    /// All words of length exactly `n`, in lexicographic order.
    pub fn words_of_len(&self, n: usize) -> Vec<Word> {
        let mut out: Vec<Word> = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::with_capacity(out.len() * self.symbols.len());
            for w in &out {
                for &s in &self.symbols {
                    let mut w2 = w.clone();
                    w2.push(s);
                    next.push(w2);
                }
            }
            out = next;
        }
        out
    }

    /// All words of length at most `n`, shortest first, lexicographic within a length.
    pub fn words_up_to(&self, n: usize) -> Vec<Word> {
        (0..=n).flat_map(|k| self.words_of_len(k)).collect()
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Alphabet {
            symbols: vec![Symbol('a'), Symbol('b')],
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}
