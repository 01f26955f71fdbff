//! Finite ordered alphabets.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

struct Inner {
    symbols: Vec<String>,
    index: HashMap<String, usize>,
}

/// An ordered finite set of distinct symbol labels.
///
/// The order given at construction is fixed and defines the coordinate
/// indexing used by every weight vector in the crate. Cloning is cheap; all
/// clones share the same backing storage.
#[derive(Clone)]
pub struct Alphabet {
    inner: Arc<Inner>,
}

impl Alphabet {
    /// Builds an alphabet from an ordered list of labels.
    ///
    /// Fails on an empty list or a repeated label.
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut index = HashMap::with_capacity(symbols.len());
        for (i, s) in symbols.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Self {
            inner: Arc::new(Inner { symbols, index }),
        })
    }

    pub fn len(&self) -> usize {
        self.inner.symbols.len()
    }

    /// Always false: construction rejects empty symbol lists.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> &[String] {
        &self.inner.symbols
    }

    /// Label at coordinate `i`. Panics if out of range.
    pub fn label(&self, i: usize) -> &str {
        &self.inner.symbols[i]
    }

    pub fn index_of(&self, symbol: &str) -> Option<usize> {
        self.inner.index.get(symbol).copied()
    }

    /// Like [`index_of`](Self::index_of) but fails with [`Error::UnknownSymbol`].
    pub fn require(&self, symbol: &str) -> Result<usize> {
        self.index_of(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))
    }

    /// Checks that two alphabets list the same labels in the same order.
    pub fn check_same(&self, other: &Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch(format!(
                "{:?} vs {:?}",
                self.symbols(),
                other.symbols()
            )))
        }
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.symbols == other.inner.symbols
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Alphabet").field(&self.inner.symbols).finish()
    }
}
