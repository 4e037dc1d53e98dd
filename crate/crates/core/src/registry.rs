//! Generator registries and word evaluation.

use indexmap::IndexMap;

use crate::error::{NvError, Result};
use crate::ntuple::{NTuple, Signature};
use crate::table::Table;
use crate::word::{sigma_conjugate, valid_name, Gen, Token, Word};

/// Largest `j` for which `tau(j)` is materialized as an explicit table.
pub const MAX_EXPLICIT_TAU: usize = 20;

/// Default bound on `k^{nλ}` for the exhaustive identity test.
pub const DEFAULT_EXHAUSTIVE_LIMIT: u64 = 1 << 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IdentityMode {
    Table,
    Exhaustive,
}

/// Result of an identity test, with a moved point when the answer is no.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub identity: bool,
    pub witness: Option<(NTuple, Option<NTuple>)>,
}

/// Named tables plus the schematic families `tau(j)` and `sigma`.
///
/// For n ≥ 2, `tau(j)` acts on the first coordinate only and `sigma`
/// moves the first letter of coordinate 2 to the front of coordinate 1.
#[derive(Debug, Clone)]
pub struct GeneratorRegistry {
    sig: Signature,
    named: IndexMap<String, (Table, Table)>,
    tau: bool,
    sigma: Option<(Table, Table)>,
}

impl GeneratorRegistry {
    /// An empty registry with `tau` enabled, and `sigma` enabled when n = 2.
    pub fn new(sig: Signature) -> Self {
        let sigma = (sig.n() == 2).then(|| {
            let t = sigma_table(sig);
            let inv = t.inverse();
            (t, inv)
        });
        Self { sig, named: IndexMap::new(), tau: true, sigma }
    }

    pub fn with_schematic(mut self, tau: bool, sigma: bool) -> Result<Self> {
        self.tau = tau;
        if !sigma {
            self.sigma = None;
        } else if self.sigma.is_none() {
            if self.sig.n() != 2 {
                return Err(NvError::WrongDimension { expected: "n = 2 for sigma", n: self.sig.n(), k: self.sig.k() });
            }
            let t = sigma_table(self.sig);
            let inv = t.inverse();
            self.sigma = Some((t, inv));
        }
        Ok(self)
    }

    pub fn insert(&mut self, name: &str, table: Table) -> Result<()> {
        self.sig.check(&table.sig())?;
        if !valid_name(name) {
            return Err(NvError::Parse(format!("invalid generator name {name:?}")));
        }
        if self.named.contains_key(name) {
            return Err(NvError::Parse(format!("duplicate generator name {name:?}")));
        }
        let v = table.validate();
        if !v.valid {
            return Err(NvError::InvalidTable(format!("{name}: {}", v.diagnostic.unwrap_or_default())));
        }
        let inv = table.inverse();
        self.named.insert(name.to_string(), (table, inv));
        Ok(())
    }

    pub fn with(mut self, name: &str, table: Table) -> Result<Self> {
        self.insert(name, table)?;
        Ok(self)
    }

    pub fn sig(&self) -> Signature {
        self.sig
    }

    pub fn tau_enabled(&self) -> bool {
        self.tau
    }

    pub fn sigma_enabled(&self) -> bool {
        self.sigma.is_some()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.named.keys().map(String::as_str)
    }

    pub fn named_count(&self) -> usize {
        self.named.len()
    }

    pub fn get(&self, name: &str) -> Option<&Table> {
        self.named.get(name).map(|p| &p.0)
    }

    pub fn named_tables(&self) -> impl Iterator<Item = (&str, &Table)> {
        self.named.iter().map(|(k, v)| (k.as_str(), &v.0))
    }

    /// `c_Γ`: the largest `ℓ` over named generators and `sigma`.
    pub fn c_gamma(&self) -> usize {
        let named = self.named.values().map(|p| p.0.ell()).max().unwrap_or(0);
        named.max(usize::from(self.sigma.is_some()))
    }

    pub fn check_token(&self, t: &Token) -> Result<()> {
        match &t.gen {
            Gen::Named(n) if self.named.contains_key(n) => Ok(()),
            Gen::Tau(_) if self.tau => Ok(()),
            Gen::Sigma if self.sigma.is_some() => Ok(()),
            _ => Err(NvError::UnknownGenerator(t.to_string())),
        }
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        w.tokens.iter().try_for_each(|t| self.check_token(t))
    }

    fn named_table(&self, name: &str, inverse: bool) -> Result<&Table> {
        let (t, inv) = self
            .named
            .get(name)
            .ok_or_else(|| NvError::UnknownGenerator(name.to_string()))?;
        Ok(if inverse { inv } else { t })
    }

    fn sigma_tables(&self, inverse: bool) -> Result<&Table> {
        let (t, inv) = self.sigma.as_ref().ok_or_else(|| NvError::UnknownGenerator("sigma".into()))?;
        Ok(if inverse { inv } else { t })
    }

    /// The explicit table of a token.
    pub fn token_table(&self, t: &Token) -> Result<Table> {
        self.check_token(t)?;
        match &t.gen {
            Gen::Named(n) => Ok(self.named_table(n, t.inverse)?.clone()),
            Gen::Sigma => Ok(self.sigma_tables(t.inverse)?.clone()),
            Gen::Tau(j) => tau_table(self.sig, *j),
        }
    }

    /// `ℓ` of the token's table.
    pub fn token_ell(&self, t: &Token) -> Result<usize> {
        self.check_token(t)?;
        Ok(match &t.gen {
            Gen::Named(n) => self.named_table(n, false)?.ell(),
            Gen::Sigma => 1,
            Gen::Tau(j) => j + 1,
        })
    }

    /// `λ(w)`: the sum of token lengths, an upper bound for `ℓ(f_w)`.
    pub fn lambda(&self, w: &Word) -> Result<usize> {
        w.tokens.iter().map(|t| self.token_ell(t)).sum()
    }

    /// Applies one token to `x`; `None` when `x` is too shallow.
    pub fn apply_token(&self, t: &Token, x: &NTuple) -> Result<Option<NTuple>> {
        self.check_token(t)?;
        self.sig.check(&x.sig())?;
        Ok(self.apply_token_unchecked(t, x))
    }

    fn apply_token_unchecked(&self, t: &Token, x: &NTuple) -> Option<NTuple> {
        match &t.gen {
            Gen::Named(n) => self.named_table(n, t.inverse).ok()?.apply(x),
            Gen::Tau(j) => {
                let c = x.coord(1);
                if c.len() < j + 1 {
                    return None;
                }
                let mut coords = x.coords().to_vec();
                coords[0].swap(j - 1, *j);
                Some(NTuple::from_raw(self.sig, coords))
            }
            Gen::Sigma => {
                let mut coords = x.coords().to_vec();
                if !t.inverse {
                    let a = *coords[1].first()?;
                    coords[1].remove(0);
                    coords[0].insert(0, a);
                } else {
                    let a = *coords[0].first()?;
                    coords[0].remove(0);
                    coords[1].insert(0, a);
                }
                Some(NTuple::from_raw(self.sig, coords))
            }
        }
    }

    /// Applies the tokens right to left.
    pub fn streaming_eval(&self, w: &Word, x: &NTuple) -> Result<Option<NTuple>> {
        self.check_word(w)?;
        self.sig.check(&x.sig())?;
        Ok(self.streaming_unchecked(w, x))
    }

    pub(crate) fn streaming_unchecked(&self, w: &Word, x: &NTuple) -> Option<NTuple> {
        let mut cur = x.clone();
        for t in w.application_order() {
            cur = self.apply_token_unchecked(t, &cur)?;
        }
        Some(cur)
    }

    /// `t ∘ acc`, with `tau(j)` acting virtually so it is never materialized.
    pub fn compose_token(&self, t: &Token, acc: &Table) -> Result<Table> {
        self.check_token(t)?;
        let out = match &t.gen {
            Gen::Named(n) => Table::compose(self.named_table(n, t.inverse)?, acc)?,
            Gen::Sigma => Table::compose(self.sigma_tables(t.inverse)?, acc)?,
            Gen::Tau(j) => {
                let need = j + 1;
                let k = self.sig.k();
                let mut pairs = Vec::with_capacity(acc.len());
                for (p, q) in acc.pairs() {
                    let have = q.coord(1).len();
                    if have >= need {
                        pairs.push((p.clone(), self.apply_token_unchecked(t, q).unwrap()));
                    } else {
                        for u in crate::code::all_strings(k, need - have) {
                            let p2 = extend_first(p, &u);
                            let q2 = extend_first(q, &u);
                            pairs.push((p2, self.apply_token_unchecked(t, &q2).unwrap()));
                        }
                    }
                }
                Table::from_pairs_trusted(self.sig, pairs)
            }
        };
        Ok(out)
    }

    /// The table of `f_w`, folded from the rightmost token and kept reduced.
    pub fn eval_to_table(&self, w: &Word) -> Result<Table> {
        self.check_word(w)?;
        let mut acc = Table::root_identity(self.sig);
        let mut bound = 0usize;
        for t in w.application_order() {
            bound += self.token_ell(t)?;
            acc = self.reduce(self.compose_token(t, &acc)?);
            assert!(acc.ell() <= bound, "length bound violated after {t}");
        }
        Ok(acc)
    }

    /// `f_w ∘ start`, where `start` may be a partial table such as the
    /// identity on one subtree.
    pub fn eval_after(&self, w: &Word, start: &Table) -> Result<Table> {
        self.check_word(w)?;
        self.sig.check(&start.sig())?;
        let mut acc = start.clone();
        for t in w.application_order() {
            acc = self.reduce(self.compose_token(t, &acc)?);
        }
        Ok(acc)
    }

    fn reduce(&self, t: Table) -> Table {
        if self.sig.n() == 1 {
            t.max_extension_v().expect("n = 1")
        } else {
            t.reduce_greedy()
        }
    }

    pub fn is_identity_word(&self, w: &Word, mode: IdentityMode) -> Result<IdentityReport> {
        match mode {
            IdentityMode::Table => {
                let t = self.eval_to_table(w)?;
                let witness = t
                    .pairs()
                    .iter()
                    .find(|(d, r)| d != r)
                    .map(|(d, r)| (d.clone(), Some(r.clone())));
                Ok(IdentityReport { identity: witness.is_none(), witness })
            }
            IdentityMode::Exhaustive => self.is_identity_exhaustive(w, DEFAULT_EXHAUSTIVE_LIMIT),
        }
    }

    /// Checks `f_w(x) = x` for every `x` whose coordinates all have length `λ(w)`.
    pub fn is_identity_exhaustive(&self, w: &Word, limit: u64) -> Result<IdentityReport> {
        self.check_word(w)?;
        let lambda = self.lambda(w)?;
        let count = uniform_count(self.sig, lambda)
            .filter(|&c| c <= limit)
            .ok_or_else(|| {
                NvError::TooLarge(format!(
                    "exhaustive test needs {}^({}*{}) inputs, limit {limit}",
                    self.sig.k(),
                    self.sig.n(),
                    lambda
                ))
            })?;
        let check = |i: u64| {
            let x = uniform_tuple(self.sig, lambda, i);
            let y = self.streaming_unchecked(w, &x);
            (y.as_ref() != Some(&x)).then_some((x, y))
        };
        let witness = find_first(count, check);
        Ok(IdentityReport { identity: witness.is_none(), witness })
    }

    /// Prefix-free binary encoding of a word.
    pub fn encode(&self, w: &Word) -> Result<String> {
        self.check_word(w)?;
        let mut out = String::new();
        for t in &w.tokens {
            match &t.gen {
                Gen::Tau(j) => {
                    out.extend(std::iter::repeat('0').take(*j));
                    out.push('1');
                }
                _ => {
                    let slot = self.slot_of(t).expect("checked token");
                    out.push('1');
                    out.extend(std::iter::repeat('0').take(slot));
                    out.push('1');
                }
            }
        }
        Ok(out)
    }

    fn slot_of(&self, t: &Token) -> Option<usize> {
        match &t.gen {
            Gen::Sigma => Some(usize::from(t.inverse)),
            Gen::Named(n) => self.named.get_index_of(n).map(|r| 2 + 2 * r + usize::from(t.inverse)),
            Gen::Tau(_) => None,
        }
    }

    fn token_of_slot(&self, slot: usize) -> Option<Token> {
        match slot {
            0 | 1 if self.sigma.is_some() => Some(Token { gen: Gen::Sigma, inverse: slot == 1 }),
            0 | 1 => None,
            s => {
                let (name, _) = self.named.get_index((s - 2) / 2)?;
                Some(Token { gen: Gen::Named(name.clone()), inverse: s % 2 == 1 })
            }
        }
    }

    /// Inverse of [`encode`](Self::encode).
    pub fn decode(&self, bits: &str) -> Result<Word> {
        let b = bits.trim().as_bytes();
        let mut tokens = Vec::new();
        let mut i = 0;
        while i < b.len() {
            let start = i;
            let lead = b[i];
            if lead != b'0' && lead != b'1' {
                return Err(NvError::MalformedBits(start));
            }
            if lead == b'1' {
                i += 1;
            }
            let zeros_from = i;
            while i < b.len() && b[i] == b'0' {
                i += 1;
            }
            if i >= b.len() || b[i] != b'1' {
                return Err(NvError::MalformedBits(start));
            }
            let zeros = i - zeros_from;
            i += 1;
            let tok = if lead == b'1' {
                self.token_of_slot(zeros)
            } else {
                (self.tau && zeros >= 1).then(|| Token::tau(zeros))
            };
            tokens.push(tok.ok_or(NvError::MalformedBits(start))?);
        }
        Ok(Word::new(tokens))
    }

    /// The n = 2 registry of `γ × 1` for each named `γ`, with `tau` and `sigma`.
    pub fn embed_into_2v(&self) -> Result<GeneratorRegistry> {
        if self.sig.n() != 1 {
            return Err(NvError::WrongDimension { expected: "n = 1", n: self.sig.n(), k: self.sig.k() });
        }
        let sig2 = Signature::new(2, self.sig.k() as usize)?;
        let mut reg = GeneratorRegistry::new(sig2);
        for (name, (t, _)) in &self.named {
            reg.insert(name, times_one(t, sig2))?;
        }
        Ok(reg)
    }
}

/// Rewrites a word over an n = 1 registry into the corresponding 2V word.
pub fn embed_v_into_2v(w: &Word, reg: &GeneratorRegistry) -> Result<Word> {
    reg.check_word(w)?;
    let mut tokens = Vec::new();
    for t in &w.tokens {
        match t.gen {
            Gen::Tau(j) => tokens.extend(sigma_conjugate(j)?.tokens),
            Gen::Named(_) => tokens.push(t.clone()),
            Gen::Sigma => return Err(NvError::UnknownGenerator(t.to_string())),
        }
    }
    Ok(Word::new(tokens))
}

/// `γ × 1`: domain and image codes padded with ε in the extra coordinates.
pub fn times_one(t: &Table, sig: Signature) -> Table {
    let pad = |x: &NTuple| {
        let mut coords = x.coords().to_vec();
        coords.resize(sig.n(), Vec::new());
        NTuple::from_raw(sig, coords)
    };
    Table::from_pairs_trusted(sig, t.pairs().iter().map(|(d, r)| (pad(d), pad(r))).collect())
}

/// The shift `σ(x, a y) = (a x, y)` on `{ε} × A -> A × {ε}`.
pub fn sigma_table(sig: Signature) -> Table {
    let pairs = (0..sig.k())
        .map(|a| {
            let mut d = vec![Vec::new(); sig.n()];
            d[1] = vec![a];
            let mut r = vec![Vec::new(); sig.n()];
            r[0] = vec![a];
            (NTuple::from_raw(sig, d), NTuple::from_raw(sig, r))
        })
        .collect();
    Table::from_pairs_trusted(sig, pairs)
}

/// The table of `τ_{j,j+1}` on `A^{j+1}` (first coordinate).
pub fn tau_table(sig: Signature, j: usize) -> Result<Table> {
    if j == 0 {
        return Err(NvError::BadIndices("tau index must be >= 1".into()));
    }
    if j > MAX_EXPLICIT_TAU {
        return Err(NvError::TooLarge(format!("explicit table of tau({j})")));
    }
    let pairs = crate::code::all_strings(sig.k(), j + 1)
        .into_iter()
        .map(|s| {
            let mut t = s.clone();
            t.swap(j - 1, j);
            let mut d = vec![Vec::new(); sig.n()];
            d[0] = s;
            let mut r = vec![Vec::new(); sig.n()];
            r[0] = t;
            (NTuple::from_raw(sig, d), NTuple::from_raw(sig, r))
        })
        .collect();
    Ok(Table::from_pairs_trusted(sig, pairs))
}

fn extend_first(x: &NTuple, u: &[u8]) -> NTuple {
    let mut coords = x.coords().to_vec();
    coords[0].extend_from_slice(u);
    NTuple::from_raw(x.sig(), coords)
}

/// `k^{nλ}`, if it fits in a u64.
pub(crate) fn uniform_count(sig: Signature, lambda: usize) -> Option<u64> {
    let exp = u32::try_from(sig.n().checked_mul(lambda)?).ok()?;
    (sig.k() as u64).checked_pow(exp)
}

/// The `i`-th tuple (in base-k digit order) with all coordinates of length `λ`.
pub(crate) fn uniform_tuple(sig: Signature, lambda: usize, mut i: u64) -> NTuple {
    let k = sig.k() as u64;
    let mut coords = vec![vec![0u8; lambda]; sig.n()];
    for c in coords.iter_mut().rev() {
        for d in c.iter_mut().rev() {
            *d = (i % k) as u8;
            i /= k;
        }
    }
    NTuple::from_raw(sig, coords)
}

/// The first index in `0..count` for which `f` returns a value.
#[cfg(feature = "parallel")]
pub(crate) fn find_first<T: Send, F: Fn(u64) -> Option<T> + Sync + Send>(count: u64, f: F) -> Option<T> {
    use rayon::prelude::*;
    (0..count).into_par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn find_first<T: Send, F: Fn(u64) -> Option<T> + Sync + Send>(count: u64, f: F) -> Option<T> {
    (0..count).find_map(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::CodeSet;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn reg1() -> GeneratorRegistry {
        let not = Table::from_strings(2, &[("0", "1"), ("1", "0")]).unwrap();
        let a = Table::from_strings(2, &[("0", "00"), ("10", "01"), ("11", "1")]).unwrap();
        GeneratorRegistry::new(Signature::binary(1)).with("g", a).unwrap().with("n", not).unwrap()
    }

    fn reg2() -> GeneratorRegistry {
        GeneratorRegistry::new(Signature::binary(2))
    }

    fn t2(a: &str, b: &str) -> NTuple {
        NTuple::from_strs(Signature::binary(2), &[a, b]).unwrap()
    }

    #[test]
    fn identity_words() {
        let r = reg1();
        for mode in [IdentityMode::Table, IdentityMode::Exhaustive] {
            assert!(r.is_identity_word(&w("g g^-1"), mode).unwrap().identity);
            assert!(r.is_identity_word(&w("tau(1) tau(1)"), mode).unwrap().identity);
            assert!(r.is_identity_word(&w("n n"), mode).unwrap().identity);
            assert!(!r.is_identity_word(&w("g"), mode).unwrap().identity);
        }
        let r2 = reg2();
        let rep = r2.is_identity_word(&w("sigma"), IdentityMode::Exhaustive).unwrap();
        assert!(!rep.identity);
        assert!(rep.witness.is_some());
        assert!(r2.is_identity_word(&w("sigma sigma^-1"), IdentityMode::Table).unwrap().identity);
    }

    #[test]
    fn streaming_shift() {
        let r = reg2();
        assert_eq!(r.streaming_eval(&w("sigma"), &t2("", "01")).unwrap(), Some(t2("0", "1")));
        assert_eq!(r.streaming_eval(&w("sigma"), &t2("", "")).unwrap(), None);
        assert_eq!(r.streaming_eval(&w("sigma^-1"), &t2("10", "")).unwrap(), Some(t2("0", "1")));
    }

    #[test]
    fn virtual_tau_matches_explicit_table() {
        let r = reg1();
        let word = w("tau(2) g tau(3) n^-1 tau(1)");
        let virt = r.eval_to_table(&word).unwrap();
        let mut acc = Table::root_identity(r.sig());
        for t in word.application_order() {
            acc = Table::compose(&r.token_table(t).unwrap(), &acc).unwrap();
        }
        assert!(virt.end_equivalent(&acc).unwrap());
        let code = CodeSet::uniform(r.sig(), &[r.lambda(&word).unwrap()]).unwrap();
        for x in code.iter() {
            assert_eq!(virt.apply(x), r.streaming_eval(&word, x).unwrap());
        }
    }

    #[test]
    fn shift_conjugation() {
        let r = reg2();
        let word = sigma_conjugate(2).unwrap();
        let t = r.eval_to_table(&word).unwrap();
        assert!(t.end_equivalent(&tau_table(r.sig(), 2).unwrap()).unwrap());
    }

    #[test]
    fn encoding_round_trip() {
        let r = reg1();
        assert_eq!(r.encode(&w("tau(2)")).unwrap(), "001");
        assert_eq!(r.encode(&w("g")).unwrap(), "1001");
        assert_eq!(r.encode(&w("n^-1")).unwrap(), "1000001");
        let word = w("g tau(3) n^-1 g^-1 tau(1)");
        assert_eq!(r.decode(&r.encode(&word).unwrap()).unwrap(), word);
        assert_eq!(r.decode("0"), Err(NvError::MalformedBits(0)));
        assert_eq!(r.decode("0110"), Err(NvError::MalformedBits(2)));
        // Slot 0 is reserved for sigma, which this registry lacks.
        assert_eq!(r.decode("11"), Err(NvError::MalformedBits(0)));
        assert_eq!(r.decode("01").unwrap(), w("tau(1)"));
    }

    #[test]
    fn unknown_generator() {
        let r = reg1();
        assert!(matches!(r.eval_to_table(&w("h")), Err(NvError::UnknownGenerator(_))));
        assert!(matches!(r.eval_to_table(&w("sigma")), Err(NvError::UnknownGenerator(_))));
    }

    #[test]
    fn embedding_preserves_identity() {
        let r = reg1();
        let r2 = r.embed_into_2v().unwrap();
        assert_eq!(embed_v_into_2v(&w("tau(1)"), &r).unwrap(), w("tau(1)"));
        let e = embed_v_into_2v(&w("tau(3) tau(3)"), &r).unwrap();
        assert_eq!(e.len(), 10);
        assert!(r2.is_identity_word(&e, IdentityMode::Table).unwrap().identity);
        let e = embed_v_into_2v(&w("g tau(2)"), &r).unwrap();
        assert!(!r2.is_identity_word(&e, IdentityMode::Table).unwrap().identity);
    }

    #[test]
    fn c_gamma_reported() {
        assert_eq!(reg1().c_gamma(), 2);
        assert_eq!(reg2().c_gamma(), 1);
    }

    #[test]
    fn exhaustive_limit() {
        let r = reg1();
        let word = w("tau(30)");
        assert!(matches!(r.is_identity_exhaustive(&word, 1000), Err(NvError::TooLarge(_))));
    }
}
