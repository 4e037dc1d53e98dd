//! Partial fixators, the embeddings of V into them, the commutation test and
//! the reduction from circuit equivalence to identity tests.

use crate::circuit::{bits_to_string, index_bits, Circuit, GateKind, Wire};
use crate::code::CodeSet;
use crate::compiler::compile_circuit;
use crate::error::{NvError, Result};
use crate::gates::{default_v_registry, jordan_registry, thompson_generators, FREDKIN};
use crate::ntuple::{NTuple, Signature};
use crate::registry::GeneratorRegistry;
use crate::table::Table;
use crate::word::{tau_ij_or_empty, Token, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Image in the elements fixing the 1-subtree.
    Fix1,
    /// Image in the elements fixing the 0-subtree.
    Fix0,
}

impl Side {
    fn fixed_letter(self) -> u8 {
        match self {
            Side::Fix1 => 1,
            Side::Fix0 => 0,
        }
    }
}

fn sig1() -> Signature {
    Signature::binary(1)
}

fn require_v(t: &Table) -> Result<()> {
    let s = t.sig();
    if s != sig1() {
        return Err(NvError::WrongDimension { expected: "n = 1, k = 2", n: s.n(), k: s.k() });
    }
    Ok(())
}

fn tuple(bits: Vec<u8>) -> NTuple {
    NTuple::new(sig1(), vec![bits]).expect("binary digits")
}

/// Whether `t` acts as the identity on every string starting with `letter`.
pub fn in_partial_fixator(t: &Table, letter: u8) -> Result<bool> {
    require_v(t)?;
    let halves = CodeSet::uniform(sig1(), &[1])?;
    let dom = t.dom().elementwise_join(&halves)?;
    let r = t.restrict(&dom)?;
    Ok(r.pairs().iter().filter(|(d, _)| d.coord(1)[0] == letter).all(|(d, q)| d == q))
}

pub fn in_pfix0(t: &Table) -> Result<bool> {
    in_partial_fixator(t, 0)
}

pub fn in_pfix1(t: &Table) -> Result<bool> {
    in_partial_fixator(t, 1)
}

/// `θ(g)`: `g` acting under the non-fixed letter, identity under the fixed one.
pub fn theta(g: &Table, side: Side) -> Result<Table> {
    require_v(g)?;
    let fixed = side.fixed_letter();
    let moved = 1 - fixed;
    let prefix = |x: &NTuple| {
        let mut v = vec![moved];
        v.extend_from_slice(x.coord(1));
        tuple(v)
    };
    let mut pairs = vec![(tuple(vec![fixed]), tuple(vec![fixed]))];
    pairs.extend(g.pairs().iter().map(|(d, r)| (prefix(d), prefix(r))));
    Table::new(sig1(), pairs)
}

/// The registry extended by `theta1_<name>` for each listed generator.
pub fn theta_registry(reg: &GeneratorRegistry, gens: &[String]) -> Result<GeneratorRegistry> {
    let mut out = reg.clone();
    for name in gens {
        let t = reg.get(name).ok_or_else(|| NvError::UnknownGenerator(name.clone()))?;
        out.insert(&theta_name(name), theta(t, Side::Fix1)?)?;
    }
    Ok(out)
}

pub fn theta_name(name: &str) -> String {
    format!("theta1_{name}")
}

/// `[g, h] = g⁻¹ h⁻¹ g h`.
pub fn commutator(g: &Word, h: &Word) -> Word {
    g.inverse().concat(&h.inverse()).concat(g).concat(h)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionOutput {
    pub instances: Vec<Word>,
    pub verdict: bool,
    pub arity: usize,
    /// Index of the first instance that is not the identity.
    pub failing: Option<usize>,
}

fn reduce(t: Table) -> Table {
    t.max_extension_v().expect("n = 1")
}

/// The identity on the strings starting with 0, as a partial table.
pub fn zero_subtree_identity() -> Table {
    Table::from_pairs_trusted(sig1(), vec![(tuple(vec![0]), tuple(vec![0]))])
}

/// `g` restricted to the 0-subtree.
pub fn restrict_to_zero_subtree(g: &Table) -> Result<Table> {
    require_v(g)?;
    Ok(reduce(Table::compose(g, &zero_subtree_identity())?))
}

/// Whether `g` commutes with `h ∈ pFix(1)`, given only `g0 = g|_{0-subtree}`.
///
/// On the 0-subtree both composites are computable from `g0`; on the
/// 1-subtree they agree exactly when `h` fixes the part of the 0-subtree
/// not covered by the image of `g0`.
pub fn commutes_with_fix1(g0: &Table, h: &Table) -> Result<bool> {
    let h0 = Table::compose(h, &zero_subtree_identity())?;
    if reduce(Table::compose(g0, &h0)?) != reduce(Table::compose(h, g0)?) {
        return Ok(false);
    }
    let mut covered: Vec<Vec<u8>> =
        g0.im().iter().map(|y| y.coord(1).to_vec()).filter(|y| y.first() == Some(&0)).collect();
    covered.push(vec![1]);
    let cells = complete_prefix_code(&covered)?;
    for r in cells.iter().filter(|c| !covered.contains(c)) {
        let r = tuple(r.clone());
        for d in h.dom().joinable_with(&r) {
            let z = d.join_raw(&r).expect("joinable");
            let hz = h.image_of(d).expect("domain").concat_raw(&d.left_quotient_raw(&z).expect("below"));
            if hz != z {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `g` commutes with `θ(γ)` for each generator table `γ`.
///
/// Returns the index of the first generator it fails to commute with.
pub fn commutation_test(g: &Table, gens: &[Table]) -> Result<Option<usize>> {
    commutation_test_restricted(&restrict_to_zero_subtree(g)?, gens)
}

fn commutation_test_restricted(g0: &Table, gens: &[Table]) -> Result<Option<usize>> {
    for (i, h) in gens.iter().enumerate() {
        if !commutes_with_fix1(g0, &theta(h, Side::Fix1)?)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// The commutators `[u⁻¹v, θ(γ_i)]` for the generators `gens` of `reg`.
///
/// The verdict is decided exactly from `u⁻¹v` restricted to the 0-subtree,
/// which is all the commutators depend on.
pub fn commutation_instances(
    u: &Word,
    v: &Word,
    reg: &GeneratorRegistry,
    gens: &[String],
) -> Result<ReductionOutput> {
    if reg.sig() != sig1() {
        return Err(NvError::WrongDimension { expected: "n = 1, k = 2", n: reg.sig().n(), k: reg.sig().k() });
    }
    let gen_tables = gens
        .iter()
        .map(|n| reg.get(n).cloned().ok_or_else(|| NvError::UnknownGenerator(n.clone())))
        .collect::<Result<Vec<_>>>()?;
    let g_word = u.inverse().concat(v);
    let instances: Vec<Word> =
        gens.iter().map(|n| commutator(&g_word, &Word::new(vec![Token::named(theta_name(n))]))).collect();
    let g0 = reg.eval_after(&g_word, &zero_subtree_identity())?;
    let failing = commutation_test_restricted(&g0, &gen_tables)?;
    Ok(ReductionOutput { arity: instances.len(), instances, verdict: failing.is_none(), failing })
}

/// Names of the four standard generators of V.
pub fn thompson_generator_names() -> Vec<String> {
    thompson_generators().into_iter().map(|(n, _)| n.to_string()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquivalenceMode {
    Group,
    TruthTable,
    Jordan,
}

impl std::str::FromStr for EquivalenceMode {
    type Err = NvError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "group" => Ok(Self::Group),
            "truthtable" => Ok(Self::TruthTable),
            "jordan" => Ok(Self::Jordan),
            _ => Err(NvError::Parse(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    /// An input on which the circuits differ, when one is known.
    pub witness: Option<String>,
    pub reduction: Option<ReductionOutput>,
    /// The two words compared in group or Jordan mode.
    pub words: Option<(Word, Word)>,
}

fn check_arity(c1: &Circuit, c2: &Circuit) -> Result<()> {
    if c1.m() != c2.m() || c1.n() != c2.n() {
        return Err(NvError::ArityMismatch(format!(
            "({}, {}) vs ({}, {})",
            c1.m(),
            c1.n(),
            c2.m(),
            c2.n()
        )));
    }
    Ok(())
}

fn truth_table_witness(c1: &Circuit, c2: &Circuit) -> Result<Option<String>> {
    let (t1, t2) = (c1.truth_table()?, c2.truth_table()?);
    Ok(t1
        .iter()
        .zip(&t2)
        .position(|(a, b)| a != b)
        .map(|i| bits_to_string(&index_bits(i as u64, c1.m()))))
}

/// A word over `{F} ∪ τ` computing a network of Fredkin gates on `{0,1}^m`.
pub fn jordan_word(c: &Circuit) -> Result<Word> {
    if c.m() != c.n() {
        return Err(NvError::ArityMismatch(format!("Fredkin network needs m = n, got {} and {}", c.m(), c.n())));
    }
    if let Some(g) = c.gates().iter().find(|g| !matches!(g.kind, GateKind::Fredkin | GateKind::Id)) {
        return Err(NvError::InvalidCircuit(format!("gate {} is {}, not FREDKIN", g.id, g.kind)));
    }
    let width = c.m();
    // at[p] is the wire whose value currently sits at position p + 1.
    let mut at: Vec<Wire> = (0..width).map(Wire::Input).collect();
    let mut tokens = Vec::new();
    let swap = |at: &mut Vec<Wire>, tokens: &mut Vec<Token>, a: usize, b: usize| {
        if a != b {
            tokens.extend(tau_ij_or_empty(a + 1, b + 1).expect("positive").tokens);
            at.swap(a, b);
        }
    };
    for (gi, g) in c.gates().iter().enumerate() {
        if g.kind == GateKind::Id {
            let p = at.iter().position(|w| *w == g.inputs[0]).expect("live wire");
            at[p] = Wire::Port(gi, 0);
            continue;
        }
        for (slot, w) in g.inputs.iter().enumerate() {
            let p = at.iter().position(|x| x == w).expect("live wire");
            swap(&mut at, &mut tokens, slot, p);
        }
        tokens.push(Token::named(FREDKIN));
        for p in 0..3 {
            at[p] = Wire::Port(gi, p);
        }
    }
    for (o, w) in c.outputs().iter().enumerate() {
        let p = at.iter().position(|x| x == w).expect("live wire");
        swap(&mut at, &mut tokens, o, p);
    }
    Ok(Word::from_application_order(tokens))
}

/// Decides `f_{C1} = f_{C2}`.
pub fn circuit_equivalence(c1: &Circuit, c2: &Circuit, mode: EquivalenceMode) -> Result<EquivalenceReport> {
    check_arity(c1, c2)?;
    match mode {
        EquivalenceMode::TruthTable => {
            let witness = truth_table_witness(c1, c2)?;
            Ok(EquivalenceReport { equivalent: witness.is_none(), witness, reduction: None, words: None })
        }
        EquivalenceMode::Group => {
            let reg = default_v_registry();
            let u = compile_circuit(c1)?.final_word;
            let v = compile_circuit(c2)?.final_word;
            let out = commutation_instances(&u, &v, &reg, &thompson_generator_names())?;
            Ok(EquivalenceReport { equivalent: out.verdict, witness: None, reduction: Some(out), words: Some((u, v)) })
        }
        EquivalenceMode::Jordan => {
            let reg = jordan_registry()?;
            let u = jordan_word(c1)?;
            let v = jordan_word(c2)?;
            let t = reg.eval_to_table(&u.inverse().concat(&v))?;
            let witness = t
                .pairs()
                .iter()
                .find(|(d, r)| d != r)
                .map(|(d, _)| crate::ntuple::digits_to_plain(d.coord(1)));
            Ok(EquivalenceReport { equivalent: witness.is_none(), witness, reduction: None, words: Some((u, v)) })
        }
    }
}

/// A pair `(0x, g(0x))` of prefix-incomparable strings in the table of `g`.
pub fn incomparable_zero_pair(g: &Table) -> Result<Option<(NTuple, NTuple)>> {
    require_v(g)?;
    Ok(g.pairs()
        .iter()
        .find(|(d, r)| d.coord(1).first() == Some(&0) && !d.leq_init_raw(r) && !r.leq_init_raw(d))
        .cloned())
}

/// Completes a prefix code to a maximal one by adding the uncovered subtrees.
pub fn complete_prefix_code(words: &[Vec<u8>]) -> Result<Vec<Vec<u8>>> {
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            if a.starts_with(b) || b.starts_with(a) {
                return Err(NvError::NotJoinless);
            }
        }
    }
    fn go(node: &mut Vec<u8>, words: &[Vec<u8>], out: &mut Vec<Vec<u8>>) {
        if words.iter().any(|w| w == node) || !words.iter().any(|w| w.starts_with(node)) {
            out.push(node.clone());
            return;
        }
        for a in 0..2 {
            node.push(a);
            go(node, words, out);
            node.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), words, &mut out);
    Ok(out)
}

/// The element swapping `0y0 ↔ 0y1` and fixing everything else, for
/// prefix-incomparable strings `0x`, `0y`.
pub fn swap_below(zx: &[u8], zy: &[u8]) -> Result<Table> {
    if zx.first() != Some(&0) || zy.first() != Some(&0) || zx.starts_with(zy) || zy.starts_with(zx) {
        return Err(NvError::BadIndices("need prefix-incomparable strings starting with 0".into()));
    }
    let a = [zy, &[0]].concat();
    let b = [zy, &[1]].concat();
    let code = complete_prefix_code(&[zx.to_vec(), a.clone(), b.clone(), vec![1]])?;
    let pairs = code
        .into_iter()
        .map(|w| {
            let img = if w == a {
                b.clone()
            } else if w == b {
                a.clone()
            } else {
                w.clone()
            };
            (tuple(w), tuple(img))
        })
        .collect();
    Table::new(sig1(), pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{builtin_tables, fredkin_table};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn s(x: &str) -> NTuple {
        NTuple::from_strs(sig1(), &[x]).unwrap()
    }

    fn random_v(rng: &mut impl Rng, len: usize) -> Table {
        let gens = thompson_generators();
        let mut t = Table::root_identity(sig1());
        for _ in 0..len {
            let (_, g) = &gens[rng.gen_range(0..gens.len())];
            let g = if rng.gen() { g.clone() } else { g.inverse() };
            t = reduce(Table::compose(&g, &t).unwrap());
        }
        t
    }

    #[test]
    fn fixator_oracle() {
        let id = Table::root_identity(sig1());
        assert!(in_pfix0(&id).unwrap());
        assert!(!in_pfix0(&builtin_tables().phi_not).unwrap());
        let g = thompson_generators()[2].1.clone();
        assert!(in_pfix0(&theta(&g, Side::Fix0).unwrap()).unwrap());
        assert!(in_pfix1(&theta(&g, Side::Fix1).unwrap()).unwrap());
        assert!(!in_pfix0(&theta(&g, Side::Fix1).unwrap()).unwrap());
    }

    #[test]
    fn theta_examples() {
        let id = Table::root_identity(sig1());
        assert!(theta(&id, Side::Fix1).unwrap().is_identity());
        let t = theta(&builtin_tables().phi_not, Side::Fix1).unwrap();
        let expect = Table::from_strings(2, &[("1", "1"), ("00", "01"), ("01", "00")]).unwrap();
        assert_eq!(t, expect);
    }

    #[test]
    fn theta_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let g = random_v(&mut rng, 4);
            let h = random_v(&mut rng, 4);
            for side in [Side::Fix0, Side::Fix1] {
                let lhs = theta(&Table::compose(&g, &h).unwrap(), side).unwrap();
                let rhs = Table::compose(&theta(&g, side).unwrap(), &theta(&h, side).unwrap()).unwrap();
                assert!(lhs.end_equivalent(&rhs).unwrap());
            }
        }
    }

    #[test]
    fn commutation_matches_oracle() {
        let gens: Vec<Table> = thompson_generators().into_iter().map(|(_, t)| t).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..40 {
            let g = theta(&random_v(&mut rng, 5), Side::Fix0).unwrap();
            assert_eq!(commutation_test(&g, &gens).unwrap(), None);
            let g = random_v(&mut rng, 5);
            let inside = in_pfix0(&g).unwrap();
            assert_eq!(commutation_test(&g, &gens).unwrap().is_none(), inside);
        }
    }

    #[test]
    fn restricted_test_matches_full_commutation() {
        let gens: Vec<Table> = thompson_generators().into_iter().map(|(_, t)| t).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for i in 0..60 {
            let g = if i % 3 == 0 { theta(&random_v(&mut rng, 4), Side::Fix0).unwrap() } else { random_v(&mut rng, 5) };
            let g0 = restrict_to_zero_subtree(&g).unwrap();
            for h in &gens {
                let h = theta(h, Side::Fix1).unwrap();
                let full = reduce(Table::compose(&g, &h).unwrap()) == reduce(Table::compose(&h, &g).unwrap());
                assert_eq!(commutes_with_fix1(&g0, &h).unwrap(), full, "{g}");
            }
        }
    }

    #[test]
    fn instances_for_equal_words() {
        let reg = default_v_registry();
        let u: Word = "A B^-1 tau(2)".parse().unwrap();
        let out = commutation_instances(&u, &u, &reg, &thompson_generator_names()).unwrap();
        assert!(out.verdict);
        assert_eq!(out.arity, 4);
        let ext = theta_registry(&reg, &thompson_generator_names()).unwrap();
        for w in &out.instances {
            assert!(ext.eval_to_table(w).unwrap().is_identity());
        }
    }

    fn circuit(s: &str) -> Circuit {
        Circuit::from_json_str(s).unwrap()
    }

    #[test]
    fn group_mode_examples() {
        let notnot = circuit(
            r#"{"m":1,"n":1,"gates":[{"id":"a","type":"NOT","inputs":["x1"]},
                {"id":"b","type":"NOT","inputs":["a"]}],"outputs":["b"]}"#,
        );
        let id = circuit(r#"{"m":1,"n":1,"gates":[{"id":"a","type":"ID","inputs":["x1"]}],"outputs":["a"]}"#);
        let not = circuit(r#"{"m":1,"n":1,"gates":[{"id":"a","type":"NOT","inputs":["x1"]}],"outputs":["a"]}"#);
        for mode in [EquivalenceMode::Group, EquivalenceMode::TruthTable] {
            assert!(circuit_equivalence(&notnot, &id, mode).unwrap().equivalent);
            assert!(circuit_equivalence(&id, &id, mode).unwrap().equivalent);
            assert!(!circuit_equivalence(&not, &id, mode).unwrap().equivalent);
        }
        let r = circuit_equivalence(&not, &id, EquivalenceMode::Group).unwrap();
        let ext = theta_registry(&default_v_registry(), &thompson_generator_names()).unwrap();
        let red = r.reduction.unwrap();
        let i = red.failing.unwrap();
        assert!(!ext.eval_to_table(&red.instances[i]).unwrap().is_identity());
    }

    #[test]
    fn de_morgan_pair() {
        let and = circuit(r#"{"m":2,"n":1,"gates":[{"id":"a","type":"AND","inputs":["x1","x2"]}],"outputs":["a"]}"#);
        let dm = crate::circuit::rewrite::de_morgan(&and, 0).unwrap();
        assert!(circuit_equivalence(&and, &dm, EquivalenceMode::Group).unwrap().equivalent);
        let or = circuit(r#"{"m":2,"n":1,"gates":[{"id":"a","type":"OR","inputs":["x1","x2"]}],"outputs":["a"]}"#);
        assert!(!circuit_equivalence(&and, &or, EquivalenceMode::Group).unwrap().equivalent);
    }

    #[test]
    fn jordan_words_compute_networks() {
        let reg = jordan_registry().unwrap();
        for seed in 0..10 {
            let c = Circuit::random_fredkin(3 + seed as usize % 3, 4, seed);
            let w = jordan_word(&c).unwrap();
            for i in 0..1u64 << c.m() {
                let x = index_bits(i, c.m());
                let y = reg.streaming_eval(&w, &s(&bits_to_string(&x))).unwrap().unwrap();
                assert_eq!(crate::ntuple::digits_to_plain(y.coord(1)), bits_to_string(&c.evaluate(&x).unwrap()));
            }
        }
        let f = Circuit::random_fredkin(3, 1, 0);
        assert!(circuit_equivalence(&f, &f, EquivalenceMode::Jordan).unwrap().equivalent);
        let and = circuit(r#"{"m":2,"n":1,"gates":[{"id":"a","type":"AND","inputs":["x1","x2"]}],"outputs":["a"]}"#);
        assert!(jordan_word(&and).is_err());
        assert_eq!(reg.get(FREDKIN), Some(&fredkin_table()));
    }

    #[test]
    fn stabilizer_elements_move_some_zero_string() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut checked = 0;
        while checked < 30 {
            let lower = random_v(&mut rng, 4);
            if lower.is_identity() {
                continue;
            }
            let upper = theta(&random_v(&mut rng, 3), Side::Fix0).unwrap();
            let g = Table::compose(&upper, &theta(&lower, Side::Fix1).unwrap()).unwrap();
            assert!(!in_pfix0(&g).unwrap());
            let red = reduce(g);
            assert!(incomparable_zero_pair(&red).unwrap().is_some(), "{red}");
            checked += 1;
        }
    }

    #[test]
    fn swap_helper() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut done = 0;
        while done < 50 {
            let rand_str = |rng: &mut ChaCha8Rng| {
                let len = rng.gen_range(0..4);
                let mut v = vec![0u8];
                v.extend((0..len).map(|_| rng.gen_range(0..2u8)));
                v
            };
            let (x, y) = (rand_str(&mut rng), rand_str(&mut rng));
            if x.starts_with(&y) || y.starts_with(&x) {
                assert!(swap_below(&x, &y).is_err());
                continue;
            }
            let f0 = swap_below(&x, &y).unwrap();
            assert!(in_pfix1(&f0).unwrap());
            for u in ["0", "1", "01"] {
                let tail = crate::ntuple::parse_digits(u, 2).unwrap();
                let xu = tuple([x.clone(), tail.clone()].concat());
                let yu = tuple([y.clone(), tail].concat());
                assert_eq!(f0.apply(&xu), Some(xu.clone()));
                assert_ne!(f0.apply(&yu), Some(yu.clone()));
            }
            done += 1;
        }
    }
}
