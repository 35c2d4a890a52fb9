use crate::error::{Error, Result};
use crate::Symbol;

/// A finite alphabet. Letters are addressed by their position; names are
/// only used for parsing and printing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Domain("alphabet must have at least one letter".into()));
        }
        if names.len() > Symbol::MAX as usize + 1 {
            return Err(Error::Unsupported(format!("alphabets are limited to {} letters", Symbol::MAX as usize + 1)));
        }
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() || a.chars().any(char::is_whitespace) {
                return Err(Error::Parse(format!("invalid letter name `{a}`")));
            }
            if names[..i].contains(a) {
                return Err(Error::Domain(format!("letter `{a}` listed twice")));
            }
        }
        Ok(Alphabet { names })
    }

    /// Letters named `0`, `1`, …, `size - 1`.
    pub fn numeric(size: usize) -> Result<Self> {
        Self::new((0..size).map(|i| i.to_string()))
    }

    pub fn binary() -> Self {
        Self::numeric(2).expect("two letters")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, a: Symbol) -> Option<&str> {
        self.names.get(a as usize).map(String::as_str)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn symbol(&self, name: &str) -> Result<Symbol> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| i as Symbol)
            .ok_or_else(|| Error::Parse(format!("`{name}` is not a letter of the alphabet")))
    }

    pub fn check(&self, a: Symbol) -> Result<()> {
        if (a as usize) < self.len() {
            Ok(())
        } else {
            Err(Error::Domain(format!("symbol {a} outside alphabet of size {}", self.len())))
        }
    }
}
