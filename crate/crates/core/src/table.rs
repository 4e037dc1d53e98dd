//! Tables: bijections between finite maximal joinless codes.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use crate::code::CodeSet;
use crate::error::{NvError, Result};
use crate::ntuple::{NTuple, Signature};

/// A bijection `domC -> imC` between finite maximal joinless codes.
///
/// Pairs are stored sorted by domain tuple, so `pairs()[i].0` is the i-th
/// element of `dom()`.
#[derive(Clone)]
pub struct Table {
    sig: Signature,
    pairs: Vec<(NTuple, NTuple)>,
    dom: CodeSet,
    im: CodeSet,
}

impl PartialEq for Table {
    fn eq(&self, other: &Self) -> bool {
        self.sig == other.sig && self.pairs == other.pairs
    }
}

impl Eq for Table {}

impl std::hash::Hash for Table {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.pairs.hash(state);
    }
}

impl fmt::Debug for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (d, r)) in self.pairs.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{d}->{r}")?;
        }
        f.write_str("}")
    }
}

/// Outcome of table validation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Validation {
    pub valid: bool,
    pub diagnostic: Option<String>,
}

impl Validation {
    fn fail(msg: String) -> Self {
        Self { valid: false, diagnostic: Some(msg) }
    }
}

/// Checks the table invariants, naming the first one that fails.
pub fn validate(sig: Signature, pairs: &[(NTuple, NTuple)]) -> Validation {
    for (d, r) in pairs {
        if d.sig() != sig || r.sig() != sig {
            return Validation::fail(format!("pair {d}->{r} does not have signature {sig}"));
        }
    }
    let mut seen = HashSet::new();
    for (d, _) in pairs {
        if !seen.insert(d) {
            return Validation::fail(format!("domain tuple {d} appears twice"));
        }
    }
    let mut seen = HashSet::new();
    for (_, r) in pairs {
        if !seen.insert(r) {
            return Validation::fail(format!("image tuple {r} appears twice; not a bijection"));
        }
    }
    for (side, code) in [
        ("domain", CodeSet::from_unsorted(sig, pairs.iter().map(|p| p.0.clone()).collect())),
        ("image", CodeSet::from_unsorted(sig, pairs.iter().map(|p| p.1.clone()).collect())),
    ] {
        if !code.is_joinless() {
            return Validation::fail(format!("{side} code is not joinless"));
        }
        if !code.is_maximal_joinless().unwrap_or(false) {
            return Validation::fail(format!("{side} code is not maximal (Kraft sum {})", code.kraft_sum()));
        }
    }
    Validation { valid: true, diagnostic: None }
}

impl Table {
    /// Builds a validated table.
    pub fn new(sig: Signature, pairs: Vec<(NTuple, NTuple)>) -> Result<Self> {
        let v = validate(sig, &pairs);
        if !v.valid {
            return Err(NvError::InvalidTable(v.diagnostic.unwrap_or_default()));
        }
        Ok(Self::from_pairs_trusted(sig, pairs))
    }

    /// Builds a table from string pairs, `""` for ε.
    pub fn from_strs(sig: Signature, pairs: &[(&[&str], &[&str])]) -> Result<Self> {
        let ps = pairs
            .iter()
            .map(|(d, r)| Ok((NTuple::from_strs(sig, d)?, NTuple::from_strs(sig, r)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(sig, ps)
    }

    /// For n = 1: pairs of digit strings.
    pub fn from_strings(k: u8, pairs: &[(&str, &str)]) -> Result<Self> {
        let sig = Signature::new(1, k as usize)?;
        let ps: Vec<(&[&str], &[&str])> = pairs
            .iter()
            .map(|(d, r)| (std::slice::from_ref(d), std::slice::from_ref(r)))
            .collect();
        Self::from_strs(sig, &ps)
    }

    /// Assumes the invariants hold; used for results of table operations.
    pub(crate) fn from_pairs_trusted(sig: Signature, mut pairs: Vec<(NTuple, NTuple)>) -> Self {
        pairs.sort();
        let dom = CodeSet::from_sorted(sig, pairs.iter().map(|p| p.0.clone()).collect());
        let im = CodeSet::from_unsorted(sig, pairs.iter().map(|p| p.1.clone()).collect());
        debug_assert_eq!(dom.len(), pairs.len());
        debug_assert_eq!(im.len(), pairs.len());
        Self { sig, pairs, dom, im }
    }

    pub fn identity(code: &CodeSet) -> Result<Self> {
        code.require_maximal()?;
        Ok(Self::from_pairs_trusted(
            code.sig(),
            code.iter().map(|x| (x.clone(), x.clone())).collect(),
        ))
    }

    /// The identity on `{(ε)^n}`.
    pub fn root_identity(sig: Signature) -> Self {
        let r = NTuple::root(sig);
        Self::from_pairs_trusted(sig, vec![(r.clone(), r)])
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn pairs(&self) -> &[(NTuple, NTuple)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn dom(&self) -> &CodeSet {
        &self.dom
    }

    pub fn im(&self) -> &CodeSet {
        &self.im
    }

    pub fn validate(&self) -> Validation {
        validate(self.sig, &self.pairs)
    }

    /// `F(p)` for a domain element `p`.
    pub fn image_of(&self, p: &NTuple) -> Option<&NTuple> {
        self.pairs.binary_search_by(|(d, _)| d.cmp(p)).ok().map(|i| &self.pairs[i].1)
    }

    /// `f(x) = F(p)·(p \ x)` for the unique `p ∈ domC` below `x`.
    pub fn apply(&self, x: &NTuple) -> Option<NTuple> {
        if x.sig() != self.sig {
            return None;
        }
        let p = self.dom.initial_factor_of(x)?;
        let rest = p.left_quotient_raw(x).expect("initial factor");
        Some(self.image_of(p).expect("domain element").concat_raw(&rest))
    }

    pub fn inverse(&self) -> Table {
        let pairs = self.pairs.iter().map(|(d, r)| (r.clone(), d.clone())).collect();
        Self::from_pairs_trusted(self.sig, pairs)
    }

    /// The table of `f2 ∘ f1` on `f1^{-1}(P2 ∨ Q1) -> f2(P2 ∨ Q1)`.
    pub fn compose(f2: &Table, f1: &Table) -> Result<Table> {
        f2.sig.check(&f1.sig)?;
        let mut out = Vec::with_capacity(f1.len().max(f2.len()));
        for (p, q) in &f1.pairs {
            for d in f2.dom.joinable_with(q) {
                let img = f2.image_of(d).expect("domain element");
                if d.leq_init_raw(q) {
                    out.push((p.clone(), img.concat_raw(&d.left_quotient_raw(q).unwrap())));
                } else {
                    let z = q.join_raw(d).expect("joinable");
                    let src = p.concat_raw(&q.left_quotient_raw(&z).unwrap());
                    let dst = img.concat_raw(&d.left_quotient_raw(&z).unwrap());
                    out.push((src, dst));
                }
            }
        }
        Ok(Self::from_pairs_trusted(f1.sig, out))
    }

    /// `self ∘ other`.
    pub fn then_after(&self, other: &Table) -> Result<Table> {
        Table::compose(self, other)
    }

    /// The restriction to a finite maximal joinless code below the domain.
    pub fn restrict(&self, code: &CodeSet) -> Result<Table> {
        self.sig.check(&code.sig())?;
        code.require_maximal()?;
        let mut out = Vec::with_capacity(code.len());
        for x in code.iter() {
            let y = self.apply(x).ok_or_else(|| NvError::NotBelowDomain(x.to_string()))?;
            out.push((x.clone(), y));
        }
        Ok(Self::from_pairs_trusted(self.sig, out))
    }

    /// Equality of group elements: agreement on the join of the domain codes.
    pub fn end_equivalent(&self, other: &Table) -> Result<bool> {
        self.sig.check(&other.sig)?;
        let j = self.dom.elementwise_join(&other.dom)?;
        Ok(j.iter().all(|x| self.apply(x) == other.apply(x)))
    }

    pub fn is_identity(&self) -> bool {
        self.pairs.iter().all(|(d, r)| d == r)
    }

    /// `ℓ(f)`: longest coordinate over the domain and image codes.
    pub fn ell(&self) -> usize {
        self.dom.ell().max(self.im.ell())
    }

    /// Pair sets reached by a single extension step.
    fn extension_steps(sig: Signature, pairs: &BTreeMap<NTuple, NTuple>) -> Vec<BTreeMap<NTuple, NTuple>> {
        let k = sig.k();
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for x in pairs.keys() {
            for axis in 1..=sig.n() {
                let Some(v) = x.parent(axis) else { continue };
                if !seen.insert((v.clone(), axis)) {
                    continue;
                }
                let Some(w) = pairs.get(&v.child(axis, 0)).and_then(|y| y.parent(axis)) else {
                    continue;
                };
                let ok = (0..k).all(|a| pairs.get(&v.child(axis, a)) == Some(&w.child(axis, a)));
                if ok {
                    let mut next = pairs.clone();
                    for a in 0..k {
                        next.remove(&v.child(axis, a));
                    }
                    next.insert(v.clone(), w);
                    out.push(next);
                }
            }
        }
        out
    }

    /// All terminal tables reachable by extension steps.
    pub fn maximal_extensions(&self) -> Vec<Table> {
        let start: BTreeMap<NTuple, NTuple> = self.pairs.iter().cloned().collect();
        let mut visited: HashSet<Vec<(NTuple, NTuple)>> = HashSet::new();
        let mut queue = VecDeque::from([start]);
        let mut terminal = BTreeSet::new();
        while let Some(state) = queue.pop_front() {
            let key: Vec<_> = state.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
            if !visited.insert(key.clone()) {
                continue;
            }
            let next = Self::extension_steps(self.sig, &state);
            if next.is_empty() {
                terminal.insert(key);
            } else {
                queue.extend(next);
            }
        }
        terminal.into_iter().map(|p| Self::from_pairs_trusted(self.sig, p)).collect()
    }

    /// The unique maximum extension of an element of V.
    pub fn max_extension_v(&self) -> Result<Table> {
        if self.sig.n() != 1 {
            return Err(NvError::WrongDimension { expected: "n = 1", n: self.sig.n(), k: self.sig.k() });
        }
        let k = self.sig.k() as usize;
        let mut stack: Vec<(Vec<u8>, Vec<u8>)> = Vec::with_capacity(self.pairs.len());
        for (d, r) in &self.pairs {
            stack.push((d.coord(1).to_vec(), r.coord(1).to_vec()));
            while stack.len() >= k {
                let top = &stack[stack.len() - k..];
                let (s, t) = (&top[0].0, &top[0].1);
                if s.is_empty() || t.is_empty() {
                    break;
                }
                let (sp, tp) = (&s[..s.len() - 1], &t[..t.len() - 1]);
                let merges = top.iter().enumerate().all(|(a, (x, y))| {
                    x.len() == s.len()
                        && y.len() == t.len()
                        && x.starts_with(sp)
                        && y.starts_with(tp)
                        && x[x.len() - 1] as usize == a
                        && y[y.len() - 1] as usize == a
                });
                if !merges {
                    break;
                }
                let (sp, tp) = (sp.to_vec(), tp.to_vec());
                stack.truncate(stack.len() - k);
                stack.push((sp, tp));
            }
        }
        let pairs = stack
            .into_iter()
            .map(|(d, r)| (NTuple::from_raw(self.sig, vec![d]), NTuple::from_raw(self.sig, vec![r])))
            .collect();
        Ok(Self::from_pairs_trusted(self.sig, pairs))
    }

    /// Applies extension steps in a fixed order until none applies.
    ///
    /// The result is end-equivalent to `self` but for n ≥ 2 depends on the
    /// order; use [`maximal_extensions`](Self::maximal_extensions) for all of them.
    pub fn reduce_greedy(&self) -> Table {
        let k = self.sig.k();
        let mut map: BTreeMap<NTuple, NTuple> = self.pairs.iter().cloned().collect();
        loop {
            let mut changed = false;
            let keys: Vec<NTuple> = map.keys().cloned().collect();
            for x in keys {
                if !map.contains_key(&x) {
                    continue;
                }
                for axis in 1..=self.sig.n() {
                    let Some(v) = x.parent(axis) else { continue };
                    let Some(w) = map.get(&v.child(axis, 0)).and_then(|y| y.parent(axis)) else {
                        continue;
                    };
                    if (0..k).all(|a| map.get(&v.child(axis, a)) == Some(&w.child(axis, a))) {
                        for a in 0..k {
                            map.remove(&v.child(axis, a));
                        }
                        map.insert(v, w);
                        changed = true;
                        break;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        Self::from_pairs_trusted(self.sig, map.into_iter().collect())
    }

    /// Lookup from domain tuple to image, for callers applying many inputs.
    pub fn as_map(&self) -> HashMap<&NTuple, &NTuple> {
        self.pairs.iter().map(|(a, b)| (a, b)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s2() -> Signature {
        Signature::binary(2)
    }

    fn t2(pairs: &[([&str; 2], [&str; 2])]) -> Table {
        let v: Vec<(&[&str], &[&str])> = pairs.iter().map(|(a, b)| (&a[..], &b[..])).collect();
        Table::from_strs(s2(), &v).unwrap()
    }

    fn sigma() -> Table {
        t2(&[(["", "0"], ["0", ""]), (["", "1"], ["1", ""])])
    }

    fn nonmax_f() -> Table {
        t2(&[
            (["0", "0"], ["0", "0"]),
            (["0", "1"], ["0", "1"]),
            (["1", "0"], ["1", "0"]),
            (["1", "10"], ["1", "11"]),
            (["1", "11"], ["1", "10"]),
        ])
    }

    fn tup(a: &str, b: &str) -> NTuple {
        NTuple::from_strs(s2(), &[a, b]).unwrap()
    }

    #[test]
    fn validation() {
        let u = CodeSet::uniform(s2(), &[1, 1]).unwrap();
        assert!(Table::identity(&u).unwrap().validate().valid);
        assert!(nonmax_f().validate().valid);
        let dup = vec![(tup("0", ""), tup("0", "")), (tup("1", ""), tup("0", ""))];
        let v = validate(s2(), &dup);
        assert!(!v.valid);
        assert!(v.diagnostic.unwrap().contains("bijection"));
        assert!(Table::new(s2(), vec![(tup("0", ""), tup("0", ""))]).is_err());
    }

    #[test]
    fn apply_examples() {
        assert_eq!(sigma().apply(&tup("", "010")), Some(tup("0", "10")));
        assert_eq!(nonmax_f().apply(&tup("1", "10")), Some(tup("1", "11")));
        assert_eq!(sigma().apply(&tup("0", "")), None);
    }

    #[test]
    fn inverse_examples() {
        let inv = sigma().inverse();
        assert_eq!(inv.dom(), &CodeSet::from_strs(s2(), &[&["0", ""], &["1", ""]]).unwrap());
        assert_eq!(inv.inverse(), sigma());
        let id = Table::root_identity(s2());
        assert_eq!(id.inverse(), id);
    }

    #[test]
    fn compose_examples() {
        let f = nonmax_f();
        assert!(Table::compose(&f, &f).unwrap().is_identity());
        let s = sigma();
        let c = Table::compose(&s, &s.inverse()).unwrap();
        assert!(c.end_equivalent(&Table::root_identity(s2())).unwrap());
        let sq = Table::compose(&s, &s).unwrap();
        assert_eq!(sq.apply(&tup("", "01")), Some(tup("10", "")));
        assert!(sq.ell() <= 2 * s.ell());
    }

    #[test]
    fn restrict_examples() {
        let id = Table::root_identity(s2());
        let u = CodeSet::uniform(s2(), &[1, 1]).unwrap();
        let r = id.restrict(&u).unwrap();
        assert_eq!(r.len(), 4);
        assert!(r.is_identity());
        let f = nonmax_f();
        assert_eq!(f.restrict(f.dom()).unwrap(), f);
        assert!(matches!(sigma().restrict(&CodeSet::root(s2())), Err(NvError::NotBelowDomain(_))));
    }

    #[test]
    fn end_equivalence_examples() {
        let f = nonmax_f();
        let u = CodeSet::uniform(s2(), &[2, 2]).unwrap();
        assert!(f.end_equivalent(&f.restrict(&u).unwrap()).unwrap());
        assert!(!Table::root_identity(s2()).end_equivalent(&sigma()).unwrap());
    }

    #[test]
    fn ell_examples() {
        assert_eq!(Table::root_identity(s2()).ell(), 0);
        assert_eq!(sigma().ell(), 1);
        assert_eq!(nonmax_f().ell(), 2);
    }

    #[test]
    fn two_maximal_extensions() {
        let exts = nonmax_f().maximal_extensions();
        let f1 = t2(&[
            (["", "0"], ["", "0"]),
            (["0", "1"], ["0", "1"]),
            (["1", "10"], ["1", "11"]),
            (["1", "11"], ["1", "10"]),
        ]);
        let f2 = t2(&[
            (["0", ""], ["0", ""]),
            (["1", "0"], ["1", "0"]),
            (["1", "10"], ["1", "11"]),
            (["1", "11"], ["1", "10"]),
        ]);
        assert_eq!(exts.len(), 2);
        assert!(exts.contains(&f1) && exts.contains(&f2));
        assert!(f1.end_equivalent(&f2).unwrap());
        assert!(Table::compose(&f1, &f2.inverse()).unwrap().is_identity());
    }

    #[test]
    fn maximal_extensions_trivial_cases() {
        let u = CodeSet::uniform(s2(), &[1, 1]).unwrap();
        let exts = Table::identity(&u).unwrap().maximal_extensions();
        assert_eq!(exts, vec![Table::root_identity(s2())]);
        assert_eq!(sigma().maximal_extensions(), vec![sigma()]);
    }

    #[test]
    fn max_extension_in_v() {
        let t = Table::from_strings(2, &[("0", "0"), ("10", "10"), ("11", "11")]).unwrap();
        assert_eq!(t.max_extension_v().unwrap(), Table::root_identity(Signature::binary(1)));
        let not = Table::from_strings(2, &[("0", "1"), ("1", "0")]).unwrap();
        assert_eq!(not.max_extension_v().unwrap(), not);
        let fine = not.restrict(&CodeSet::uniform(Signature::binary(1), &[3]).unwrap()).unwrap();
        assert_eq!(fine.len(), 8);
        assert_eq!(fine.max_extension_v().unwrap(), not);
        assert!(sigma().max_extension_v().is_err());
    }

    #[test]
    fn max_extension_ternary() {
        let sig = Signature::new(1, 3).unwrap();
        let t = Table::identity(&CodeSet::uniform(sig, &[2]).unwrap()).unwrap();
        assert_eq!(t.max_extension_v().unwrap(), Table::root_identity(sig));
    }
}
