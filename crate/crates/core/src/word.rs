//! Words over named generators, the transpositions τ(j) and the shift σ.

use std::fmt;
use std::str::FromStr;

use crate::error::{NvError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gen {
    Named(String),
    /// The transposition of letter positions j and j+1.
    Tau(usize),
    Sigma,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Token {
    pub gen: Gen,
    pub inverse: bool,
}

impl Token {
    pub fn named(name: impl Into<String>) -> Self {
        Self { gen: Gen::Named(name.into()), inverse: false }
    }

    pub fn named_inv(name: impl Into<String>) -> Self {
        Self { gen: Gen::Named(name.into()), inverse: true }
    }

    pub fn tau(j: usize) -> Self {
        Self { gen: Gen::Tau(j), inverse: false }
    }

    pub fn sigma() -> Self {
        Self { gen: Gen::Sigma, inverse: false }
    }

    pub fn sigma_inv() -> Self {
        Self { gen: Gen::Sigma, inverse: true }
    }

    /// Inverse token; τ(j) is an involution and stays uninverted.
    pub fn inv(&self) -> Self {
        match self.gen {
            Gen::Tau(_) => self.clone(),
            _ => Self { gen: self.gen.clone(), inverse: !self.inverse },
        }
    }

    /// `‖t‖`: τ(j) has size j+1, every other token size 1.
    pub fn size(&self) -> usize {
        match self.gen {
            Gen::Tau(j) => j + 1,
            _ => 1,
        }
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.gen {
            Gen::Named(n) => f.write_str(n)?,
            Gen::Tau(j) => write!(f, "tau({j})")?,
            Gen::Sigma => f.write_str("sigma")?,
        }
        if self.inverse {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

pub(crate) fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.' || c == '-')
        && name != "sigma"
        && name != "tau"
}

impl FromStr for Token {
    type Err = NvError;

    fn from_str(s: &str) -> Result<Self> {
        let (base, inverse) = if let Some(b) = s.strip_suffix("^-1") {
            (b, true)
        } else if let Some(b) = s.strip_suffix("⁻¹") {
            (b, true)
        } else {
            (s, false)
        };
        if base == "sigma" {
            return Ok(Self { gen: Gen::Sigma, inverse });
        }
        if let Some(rest) = base.strip_prefix("tau(").and_then(|r| r.strip_suffix(')')) {
            let j: usize = rest
                .trim()
                .parse()
                .map_err(|_| NvError::Parse(format!("bad tau index in {s:?}")))?;
            if j == 0 {
                return Err(NvError::BadIndices(format!("tau index must be >= 1 in {s:?}")));
            }
            return Ok(Self::tau(j));
        }
        if valid_name(base) {
            return Ok(Self { gen: Gen::Named(base.to_string()), inverse });
        }
        Err(NvError::Parse(format!("bad token {s:?}")))
    }
}

/// A word `t1 t2 … tm`, denoting the composite `t1 ∘ t2 ∘ … ∘ tm`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    pub tokens: Vec<Token>,
}

impl Word {
    pub fn new(tokens: Vec<Token>) -> Self {
        Self { tokens }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// `‖w‖`.
    pub fn size(&self) -> usize {
        self.tokens.iter().map(Token::size).sum()
    }

    /// Reverse order and invert each token; no free reduction.
    pub fn inverse(&self) -> Word {
        Word::new(self.tokens.iter().rev().map(Token::inv).collect())
    }

    /// `self · other`, i.e. `other` is applied first.
    pub fn concat(&self, other: &Word) -> Word {
        let mut tokens = self.tokens.clone();
        tokens.extend(other.tokens.iter().cloned());
        Word::new(tokens)
    }

    pub fn pow(&self, e: usize) -> Word {
        let mut out = Word::empty();
        for _ in 0..e {
            out = out.concat(self);
        }
        out
    }

    pub fn max_tau_index(&self) -> usize {
        self.tokens
            .iter()
            .filter_map(|t| match t.gen {
                Gen::Tau(j) => Some(j),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    /// Tokens in the order they act on an input.
    pub fn application_order(&self) -> impl Iterator<Item = &Token> {
        self.tokens.iter().rev()
    }

    /// Builds a word from tokens listed in application order.
    pub fn from_application_order(tokens: Vec<Token>) -> Word {
        let mut tokens = tokens;
        tokens.reverse();
        Word::new(tokens)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.tokens.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = NvError;

    fn from_str(s: &str) -> Result<Self> {
        let tokens = s
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace)
            .map(Token::from_str)
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::new(tokens))
    }
}

/// The word `τ_{i,i+1} τ_{i+1,i+2} … τ_{j−1,j} … τ_{i,i+1}` for `τ_{i,j}`.
pub fn expand_tau_ij(i: usize, j: usize) -> Result<Word> {
    if i == 0 || i >= j {
        return Err(NvError::BadIndices(format!("need 1 <= i < j, got i={i}, j={j}")));
    }
    let mut tokens: Vec<Token> = (i..j).map(Token::tau).collect();
    tokens.extend((i..j - 1).rev().map(Token::tau));
    Ok(Word::new(tokens))
}

/// `τ_{i,j}`, or the empty word when `i = j`.
pub fn tau_ij_or_empty(i: usize, j: usize) -> Result<Word> {
    let (a, b) = (i.min(j), i.max(j));
    if a == b {
        Ok(Word::empty())
    } else {
        expand_tau_ij(a, b)
    }
}

/// `σ^{j−1} τ(1) σ^{−(j−1)}`, which acts as `τ_{j,j+1}` on the first coordinate.
pub fn sigma_conjugate(j: usize) -> Result<Word> {
    if j == 0 {
        return Err(NvError::BadIndices("sigma conjugate index must be >= 1".into()));
    }
    let mut tokens = vec![Token::sigma(); j - 1];
    tokens.push(Token::tau(1));
    tokens.extend(std::iter::repeat(Token::sigma_inv()).take(j - 1));
    Ok(Word::new(tokens))
}
