//! Finite or co-finite subsets of ℕ.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `elems` lists the members.
    Finite,
    /// `elems` lists the non-members.
    Cofinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteOrCofinite {
    mode: Mode,
    elems: Vec<usize>,
}

impl FiniteOrCofinite {
    pub fn new(mode: Mode, elems: impl IntoIterator<Item = usize>) -> Self {
        let mut elems: Vec<usize> = elems.into_iter().collect();
        elems.sort_unstable();
        elems.dedup();
        FiniteOrCofinite { mode, elems }
    }

    pub fn finite(elems: impl IntoIterator<Item = usize>) -> Self {
        Self::new(Mode::Finite, elems)
    }

    pub fn cofinite(excluded: impl IntoIterator<Item = usize>) -> Self {
        Self::new(Mode::Cofinite, excluded)
    }

    /// All of ℕ.
    pub fn naturals() -> Self {
        Self::cofinite([])
    }

    pub fn empty() -> Self {
        Self::finite([])
    }

    pub fn single(k: usize) -> Self {
        Self::finite([k])
    }

    /// `{ i : i ≥ k }`.
    pub fn at_least(k: usize) -> Self {
        Self::cofinite(0..k)
    }

    /// `{ i : i ≤ k }`.
    pub fn at_most(k: usize) -> Self {
        Self::finite(0..=k)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    pub fn contains(&self, x: usize) -> bool {
        let listed = self.elems.binary_search(&x).is_ok();
        match self.mode {
            Mode::Finite => listed,
            Mode::Cofinite => !listed,
        }
    }

    /// Smallest `d` such that membership is constant on `{ i : i ≥ d }`:
    /// 0 for ℕ and ∅, otherwise one more than the largest listed element.
    pub fn d_value(&self) -> usize {
        self.elems.last().map_or(0, |m| m + 1)
    }
}

impl fmt::Display for FiniteOrCofinite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.mode {
            Mode::Finite => "fin",
            Mode::Cofinite => "cof",
        })?;
        for e in &self.elems {
            write!(f, " {e}")?;
        }
        Ok(())
    }
}

impl FiniteOrCofinite {
    /// Parses the token list `fin|cof <ints...>`.
    pub fn from_tokens(tokens: &[&str]) -> Result<Self> {
        let (mode, rest) = tokens.split_first().ok_or_else(|| Error::InvalidArgument("empty set spec".into()))?;
        let mode = match *mode {
            "fin" => Mode::Finite,
            "cof" => Mode::Cofinite,
            other => return Err(Error::InvalidArgument(format!("expected `fin` or `cof`, found `{other}`"))),
        };
        let elems = rest
            .iter()
            .map(|t| t.parse::<usize>().map_err(|_| Error::InvalidArgument(format!("`{t}` is not a non-negative integer"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(mode, elems))
    }
}

impl FromStr for FiniteOrCofinite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::from_tokens(&s.split_whitespace().collect::<Vec<_>>())
    }
}
