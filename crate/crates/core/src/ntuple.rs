//! The free monoid nA* of n-tuples of strings over `A = {0, .., k-1}`.
//!
//! Tuples are ordered by the initial-factor order: `u <= v` iff every
//! coordinate of `u` is a prefix of the corresponding coordinate of `v`.
//! Digits are stored as small integers and printed as `'0'..='9'`; the empty
//! string prints as `-`.

use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{NvError, Result};

/// Dimension `n` and alphabet size `k` of nA*.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    n: usize,
    k: u8,
}

impl Signature {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || !(2..=10).contains(&k) {
            return Err(NvError::InvalidSignature { n, k });
        }
        Ok(Self { n, k: k as u8 })
    }

    /// Binary alphabet, the case of the Brin-Thompson groups nV.
    pub fn binary(n: usize) -> Self {
        Self::new(n, 2).expect("n >= 1")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub(crate) fn check(&self, other: &Signature) -> Result<()> {
        if self != other {
            return Err(NvError::SignatureMismatch(self.to_string(), other.to_string()));
        }
        Ok(())
    }

    pub(crate) fn check_axis(&self, axis: usize) -> Result<()> {
        if axis == 0 || axis > self.n {
            return Err(NvError::BadAxis { axis, n: self.n });
        }
        Ok(())
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, k={})", self.n, self.k)
    }
}

/// An element of nA*.
///
/// The derived `Ord` (coordinate 1 first, each coordinate compared
/// lexicographically) is the fixed total order used for every deterministic
/// tie-break in the crate.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NTuple {
    sig: Signature,
    coords: Vec<Vec<u8>>,
}

impl NTuple {
    /// The all-empty tuple `(ε)^n`.
    pub fn root(sig: Signature) -> Self {
        Self { sig, coords: vec![Vec::new(); sig.n] }
    }

    pub fn new(sig: Signature, coords: Vec<Vec<u8>>) -> Result<Self> {
        if coords.len() != sig.n {
            return Err(NvError::Parse(format!(
                "expected {} coordinates, got {}",
                sig.n,
                coords.len()
            )));
        }
        for c in &coords {
            if let Some(&d) = c.iter().find(|&&d| d >= sig.k) {
                return Err(NvError::InvalidDigit { digit: digit_char(d), k: sig.k });
            }
        }
        Ok(Self { sig, coords })
    }

    /// Build from digit strings; `""` and `"-"` both denote ε.
    pub fn from_strs<S: AsRef<str>>(sig: Signature, coords: &[S]) -> Result<Self> {
        let coords = coords
            .iter()
            .map(|s| parse_digits(s.as_ref(), sig.k))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sig, coords)
    }

    /// Parse the textual form `(010,-)`. For n = 1 the parentheses are optional.
    pub fn parse(sig: Signature, text: &str) -> Result<Self> {
        let t = text.trim();
        let inner = match t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            Some(inner) => inner,
            None if sig.n == 1 => t,
            None => return Err(NvError::Parse(format!("expected parenthesized tuple, got {t:?}"))),
        };
        let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        Self::from_strs(sig, &parts)
    }

    pub(crate) fn from_raw(sig: Signature, coords: Vec<Vec<u8>>) -> Self {
        debug_assert_eq!(coords.len(), sig.n);
        Self { sig, coords }
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn coords(&self) -> &[Vec<u8>] {
        &self.coords
    }

    /// Coordinate `i`, 1-based.
    pub fn coord(&self, i: usize) -> &[u8] {
        &self.coords[i - 1]
    }

    pub fn is_root(&self) -> bool {
        self.coords.iter().all(Vec::is_empty)
    }

    /// Total length `|x_1| + .. + |x_n|`, the depth of `x` in the P-DAG.
    pub fn depth(&self) -> usize {
        self.coords.iter().map(Vec::len).sum()
    }

    /// `ℓ(x)`: the maximum coordinate length.
    pub fn ell(&self) -> usize {
        self.coords.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// `μ(x) = k^-(|x_1| + .. + |x_n|)`, exactly.
    pub fn measure(&self) -> BigRational {
        let den = BigUint::from(self.sig.k).pow(self.depth() as u32);
        BigRational::new(One::one(), den.into())
    }

    pub fn leq_init(&self, other: &NTuple) -> Result<bool> {
        self.sig.check(&other.sig)?;
        Ok(self.leq_init_raw(other))
    }

    pub(crate) fn leq_init_raw(&self, other: &NTuple) -> bool {
        self.coords.iter().zip(&other.coords).all(|(a, b)| b.starts_with(a))
    }

    /// Coordinatewise longest common prefix.
    pub fn meet(&self, other: &NTuple) -> Result<NTuple> {
        self.sig.check(&other.sig)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| {
                let l = a.iter().zip(b).take_while(|(x, y)| x == y).count();
                a[..l].to_vec()
            })
            .collect();
        Ok(Self::from_raw(self.sig, coords))
    }

    /// The least common upper bound in the initial-factor order, if any.
    pub fn join(&self, other: &NTuple) -> Result<Option<NTuple>> {
        self.sig.check(&other.sig)?;
        Ok(self.join_raw(other))
    }

    pub(crate) fn join_raw(&self, other: &NTuple) -> Option<NTuple> {
        let mut coords = Vec::with_capacity(self.coords.len());
        for (a, b) in self.coords.iter().zip(&other.coords) {
            if b.starts_with(a) {
                coords.push(b.clone());
            } else if a.starts_with(b) {
                coords.push(a.clone());
            } else {
                return None;
            }
        }
        Some(Self::from_raw(self.sig, coords))
    }

    pub(crate) fn joinable_raw(&self, other: &NTuple) -> bool {
        self.coords
            .iter()
            .zip(&other.coords)
            .all(|(a, b)| a.starts_with(b) || b.starts_with(a))
    }

    /// Coordinatewise concatenation `u · v`.
    pub fn concat(&self, other: &NTuple) -> Result<NTuple> {
        self.sig.check(&other.sig)?;
        Ok(self.concat_raw(other))
    }

    pub(crate) fn concat_raw(&self, other: &NTuple) -> NTuple {
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| {
                let mut c = Vec::with_capacity(a.len() + b.len());
                c.extend_from_slice(a);
                c.extend_from_slice(b);
                c
            })
            .collect();
        Self::from_raw(self.sig, coords)
    }

    /// The `u` with `self · u = x`, when `self <= x`.
    pub fn left_quotient(&self, x: &NTuple) -> Result<Option<NTuple>> {
        self.sig.check(&x.sig)?;
        Ok(self.left_quotient_raw(x))
    }

    pub(crate) fn left_quotient_raw(&self, x: &NTuple) -> Option<NTuple> {
        if !self.leq_init_raw(x) {
            return None;
        }
        let coords = self
            .coords
            .iter()
            .zip(&x.coords)
            .map(|(p, c)| c[p.len()..].to_vec())
            .collect();
        Some(Self::from_raw(self.sig, coords))
    }

    /// `self` with digit `a` appended to coordinate `axis` (1-based).
    pub fn child(&self, axis: usize, digit: u8) -> NTuple {
        let mut c = self.clone();
        c.coords[axis - 1].push(digit);
        c
    }

    /// All k one-digit extensions along `axis`.
    pub fn children(&self, axis: usize) -> impl Iterator<Item = NTuple> + '_ {
        (0..self.sig.k).map(move |a| self.child(axis, a))
    }

    /// `self` with the last digit of coordinate `axis` removed.
    pub fn parent(&self, axis: usize) -> Option<NTuple> {
        if self.coords[axis - 1].is_empty() {
            return None;
        }
        let mut p = self.clone();
        p.coords[axis - 1].pop();
        Some(p)
    }

    /// Every initial factor of `self` (including `self` and the root).
    pub fn initial_factors(&self) -> Vec<NTuple> {
        let mut out = vec![NTuple::root(self.sig)];
        for (i, c) in self.coords.iter().enumerate() {
            let mut next = Vec::with_capacity(out.len() * (c.len() + 1));
            for base in &out {
                for l in 0..=c.len() {
                    let mut t = base.clone();
                    t.coords[i] = c[..l].to_vec();
                    next.push(t);
                }
            }
            out = next;
        }
        out
    }
}

impl fmt::Display for NTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(&digits_to_string(c))?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for NTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn digit_char(d: u8) -> char {
    char::from(b'0' + d)
}

/// Render a coordinate, with `-` for ε.
pub fn digits_to_string(c: &[u8]) -> String {
    if c.is_empty() {
        "-".to_string()
    } else {
        c.iter().map(|&d| digit_char(d)).collect()
    }
}

/// Render a coordinate for the JSON formats, where ε is `""`.
pub(crate) fn digits_to_plain(c: &[u8]) -> String {
    c.iter().map(|&d| digit_char(d)).collect()
}

pub fn parse_digits(s: &str, k: u8) -> Result<Vec<u8>> {
    if s == "-" || s == "ε" {
        return Ok(Vec::new());
    }
    s.chars()
        .map(|ch| match ch.to_digit(10) {
            Some(d) if (d as u8) < k => Ok(d as u8),
            _ => Err(NvError::InvalidDigit { digit: ch, k }),
        })
        .collect()
}
