//! Finite joinless codes and maximal joinless codes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{NvError, Result};
use crate::ntuple::{NTuple, Signature};

/// Lookup structure over a list of tuples, bucketed by the first coordinate.
///
/// Answers "which elements are initial factors of x" and "which elements
/// have a join with x" without a full scan.
#[derive(Debug, Clone, Default)]
pub(crate) struct TupleIndex {
    by_first: BTreeMap<Vec<u8>, Vec<usize>>,
}

impl TupleIndex {
    pub(crate) fn build<'a, I: IntoIterator<Item = &'a NTuple>>(items: I) -> Self {
        let mut by_first: BTreeMap<Vec<u8>, Vec<usize>> = BTreeMap::new();
        for (i, t) in items.into_iter().enumerate() {
            by_first.entry(t.coord(1).to_vec()).or_default().push(i);
        }
        Self { by_first }
    }

    /// Indices of elements `e` with `e <= x`.
    pub(crate) fn initial_factors_of<'a>(
        &'a self,
        items: &'a [NTuple],
        x: &'a NTuple,
    ) -> impl Iterator<Item = usize> + 'a {
        let first = x.coord(1);
        (0..=first.len())
            .filter_map(move |l| self.by_first.get(&first[..l]))
            .flatten()
            .copied()
            .filter(move |&i| items[i].leq_init_raw(x))
    }

    /// Indices of elements that have a join with `x`.
    pub(crate) fn joinable_with<'a>(
        &'a self,
        items: &'a [NTuple],
        x: &'a NTuple,
    ) -> impl Iterator<Item = usize> + 'a {
        let first = x.coord(1);
        let below = (0..first.len())
            .filter_map(move |l| self.by_first.get(&first[..l]))
            .flatten();
        let above = self
            .by_first
            .range(first.to_vec()..)
            .take_while(move |(key, _)| key.starts_with(first))
            .flat_map(|(_, v)| v.iter());
        below
            .chain(above)
            .copied()
            .filter(move |&i| items[i].joinable_raw(x))
    }
}

/// A cached yes/no answer of one of the code decision procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cert {
    VerifiedTrue,
    VerifiedFalse,
    Unknown,
}

impl Cert {
    fn of(cell: &OnceLock<bool>) -> Self {
        match cell.get() {
            Some(true) => Cert::VerifiedTrue,
            Some(false) => Cert::VerifiedFalse,
            None => Cert::Unknown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Certifications {
    pub initial_factor_code: Cert,
    pub joinless: Cert,
    pub maximal_joinless: Cert,
}

/// A finite set of n-tuples, stored sorted in the fixed total order.
///
/// Values are immutable; every operation returns a fresh code, and the
/// decision results are computed at most once per value.
#[derive(Clone)]
pub struct CodeSet {
    sig: Signature,
    elements: Vec<NTuple>,
    index: OnceLock<TupleIndex>,
    initial_factor: OnceLock<bool>,
    joinless: OnceLock<bool>,
    maximal: OnceLock<bool>,
}

impl PartialEq for CodeSet {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.elements == other.elements
    }
}

impl Eq for CodeSet {}

impl fmt::Debug for CodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl CodeSet {
    pub fn new<I: IntoIterator<Item = NTuple>>(sig: Signature, elements: I) -> Result<Self> {
        let set: BTreeSet<NTuple> = elements.into_iter().collect();
        for e in &set {
            sig.check(&e.sig())?;
        }
        Ok(Self::from_sorted(sig, set.into_iter().collect()))
    }

    pub(crate) fn from_sorted(sig: Signature, elements: Vec<NTuple>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Self {
            sig,
            elements,
            index: OnceLock::new(),
            initial_factor: OnceLock::new(),
            joinless: OnceLock::new(),
            maximal: OnceLock::new(),
        }
    }

    pub(crate) fn from_unsorted(sig: Signature, mut elements: Vec<NTuple>) -> Self {
        elements.sort();
        elements.dedup();
        Self::from_sorted(sig, elements)
    }

    /// Convenience constructor from string coordinates, `""` for ε.
    pub fn from_strs(sig: Signature, tuples: &[&[&str]]) -> Result<Self> {
        let ts = tuples
            .iter()
            .map(|c| NTuple::from_strs(sig, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sig, ts)
    }

    pub fn empty(sig: Signature) -> Self {
        Self::from_sorted(sig, Vec::new())
    }

    /// `{(ε)^n}`.
    pub fn root(sig: Signature) -> Self {
        Self::from_sorted(sig, vec![NTuple::root(sig)])
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn elements(&self) -> &[NTuple] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: &NTuple) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, NTuple> {
        self.elements.iter()
    }

    pub(crate) fn index(&self) -> &TupleIndex {
        self.index.get_or_init(|| TupleIndex::build(&self.elements))
    }

    /// The unique element that is an initial factor of `x`, for a joinless code.
    pub fn initial_factor_of(&self, x: &NTuple) -> Option<&NTuple> {
        self.index()
            .initial_factors_of(&self.elements, x)
            .next()
            .map(|i| &self.elements[i])
    }

    /// Elements that have a join with `x`.
    pub fn joinable_with<'a>(&'a self, x: &'a NTuple) -> impl Iterator<Item = &'a NTuple> + 'a {
        self.index().joinable_with(&self.elements, x).map(|i| &self.elements[i])
    }

    pub fn certifications(&self) -> Certifications {
        Certifications {
            initial_factor_code: Cert::of(&self.initial_factor),
            joinless: Cert::of(&self.joinless),
            maximal_joinless: Cert::of(&self.maximal),
        }
    }

    /// No two distinct elements are comparable in the initial-factor order.
    pub fn is_initial_factor_code(&self) -> bool {
        *self.initial_factor.get_or_init(|| {
            let idx = self.index();
            self.elements.iter().enumerate().all(|(i, x)| {
                idx.initial_factors_of(&self.elements, x).all(|j| j == i)
            })
        })
    }

    /// No two distinct elements have a join.
    pub fn is_joinless(&self) -> bool {
        *self.joinless.get_or_init(|| {
            if self.sig.n() == 1 {
                // Sorted prefix-free iff no element is a prefix of its successor.
                return self
                    .elements
                    .windows(2)
                    .all(|w| !w[1].coord(1).starts_with(w[0].coord(1)));
            }
            let idx = self.index();
            self.elements
                .iter()
                .enumerate()
                .all(|(i, x)| idx.joinable_with(&self.elements, x).all(|j| j == i))
        })
    }

    /// `Σ_{x ∈ P} μ(x)` as an exact rational.
    pub fn kraft_sum(&self) -> BigRational {
        let Some(max_depth) = self.elements.iter().map(NTuple::depth).max() else {
            return BigRational::zero();
        };
        let k = BigUint::from(self.sig.k());
        let mut num = BigUint::zero();
        for e in &self.elements {
            num += k.pow((max_depth - e.depth()) as u32);
        }
        BigRational::new(num.into(), k.pow(max_depth as u32).into())
    }

    /// Kraft equality decides maximality of a finite joinless code.
    pub fn is_maximal_joinless(&self) -> Result<bool> {
        if !self.is_joinless() {
            return Err(NvError::NotJoinless);
        }
        Ok(*self.maximal.get_or_init(|| self.kraft_sum().is_one()))
    }

    pub(crate) fn require_maximal(&self) -> Result<()> {
        match self.is_maximal_joinless() {
            Ok(true) => Ok(()),
            Ok(false) | Err(NvError::NotJoinless) => Err(NvError::NotMaximal),
            Err(e) => Err(e),
        }
    }

    /// `P ∨ Q = {p ∨ q : p ∈ P, q ∈ Q}`, the code of the intersection of the right ideals.
    pub fn elementwise_join(&self, other: &CodeSet) -> Result<CodeSet> {
        self.sig.check(&other.sig)?;
        if !self.is_joinless() || !other.is_joinless() {
            return Err(NvError::NotJoinless);
        }
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut out = Vec::new();
        for p in small.iter() {
            for q in large.joinable_with(p) {
                out.push(p.join_raw(q).expect("joinable"));
            }
        }
        let result = CodeSet::from_unsorted(self.sig, out);
        let _ = result.joinless.set(true);
        Ok(result)
    }

    /// Replace `p` by its k one-digit extensions along `axis`.
    pub fn one_step_restriction(&self, p: &NTuple, axis: usize) -> Result<CodeSet> {
        self.sig.check(&p.sig())?;
        self.sig.check_axis(axis)?;
        if !self.contains(p) {
            return Err(NvError::ElementNotInCode(p.to_string()));
        }
        let mut out: Vec<NTuple> = self.elements.iter().filter(|e| *e != p).cloned().collect();
        out.extend(p.children(axis));
        let result = CodeSet::from_unsorted(self.sig, out);
        self.transfer_certs(&result);
        Ok(result)
    }

    /// Replace the k one-digit extensions of `v` along `axis` by `v`.
    pub fn one_step_extension(&self, v: &NTuple, axis: usize) -> Result<CodeSet> {
        self.sig.check(&v.sig())?;
        self.sig.check_axis(axis)?;
        let children: Vec<NTuple> = v.children(axis).collect();
        if !children.iter().all(|c| self.contains(c)) {
            return Err(NvError::ChildrenMissing(v.to_string(), axis));
        }
        let mut out: Vec<NTuple> = self
            .elements
            .iter()
            .filter(|e| !children.contains(e))
            .cloned()
            .collect();
        out.push(v.clone());
        let result = CodeSet::from_unsorted(self.sig, out);
        self.transfer_certs(&result);
        Ok(result)
    }

    // Joinlessness and maximality are invariant under one-step restriction
    // and extension in both directions.
    fn transfer_certs(&self, target: &CodeSet) {
        if let Some(&j) = self.joinless.get() {
            let _ = target.joinless.set(j);
        }
        if let Some(&m) = self.maximal.get() {
            let _ = target.maximal.set(m);
        }
    }

    /// The code with one element removed.
    pub fn without(&self, x: &NTuple) -> CodeSet {
        CodeSet::from_sorted(self.sig, self.elements.iter().filter(|e| *e != x).cloned().collect())
    }

    /// The full product code `A^{k_1} × .. × A^{k_n}`.
    pub fn uniform(sig: Signature, lengths: &[usize]) -> Result<CodeSet> {
        if lengths.len() != sig.n() {
            return Err(NvError::Parse(format!(
                "expected {} lengths, got {}",
                sig.n(),
                lengths.len()
            )));
        }
        let k = sig.k();
        let mut tuples = vec![Vec::<Vec<u8>>::new()];
        for &len in lengths {
            let strings = all_strings(k, len);
            let mut next = Vec::with_capacity(tuples.len() * strings.len());
            for t in &tuples {
                for s in &strings {
                    let mut c = t.clone();
                    c.push(s.clone());
                    next.push(c);
                }
            }
            tuples = next;
        }
        let elements = tuples.into_iter().map(|c| NTuple::from_raw(sig, c)).collect();
        let code = CodeSet::from_unsorted(sig, elements);
        let _ = code.joinless.set(true);
        let _ = code.maximal.set(true);
        let _ = code.initial_factor.set(true);
        Ok(code)
    }

    /// Maximum length of coordinate `axis` over all elements.
    pub fn max_coord_len(&self, axis: usize) -> usize {
        self.elements.iter().map(|e| e.coord(axis).len()).max().unwrap_or(0)
    }

    /// `ℓ(P)`.
    pub fn ell(&self) -> usize {
        self.elements.iter().map(NTuple::ell).max().unwrap_or(0)
    }

    /// A sequence of restriction steps taking a maximal code to the uniform
    /// code `X A^{k_i}` with `k_i` the maximal coordinate-i length.
    pub fn restrict_to_uniform(&self) -> Result<Vec<(NTuple, usize)>> {
        self.require_maximal()?;
        let targets: Vec<usize> = (1..=self.sig.n()).map(|i| self.max_coord_len(i)).collect();
        let mut work: BTreeSet<NTuple> = self.elements.iter().cloned().collect();
        let mut steps = Vec::new();
        loop {
            let next = work.iter().find_map(|e| {
                (1..=self.sig.n())
                    .find(|&i| e.coord(i).len() < targets[i - 1])
                    .map(|i| (e.clone(), i))
            });
            let Some((e, axis)) = next else { break };
            work.remove(&e);
            work.extend(e.children(axis));
            steps.push((e, axis));
        }
        Ok(steps)
    }

    /// Replay restriction steps.
    pub fn apply_restrictions(&self, steps: &[(NTuple, usize)]) -> Result<CodeSet> {
        let mut code = self.clone();
        for (p, axis) in steps {
            code = code.one_step_restriction(p, *axis)?;
        }
        Ok(code)
    }
}

/// All strings of length `len` over `{0, .., k-1}`, in lexicographic order.
pub(crate) fn all_strings(k: u8, len: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * k as usize);
        for s in &out {
            for a in 0..k {
                let mut t = s.clone();
                t.push(a);
                next.push(t);
            }
        }
        out = next;
    }
    out
}
