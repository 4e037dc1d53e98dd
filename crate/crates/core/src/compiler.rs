//! Compiles boolean circuits into words over the gate tables and `tau` that
//! simulate them: `0 x ↦ 0 f(x) x`.

use serde::Serialize;

use crate::circuit::{bits_to_string, index_bits, permutation_transpositions, Circuit, GateKind, Slice};
use crate::error::{NvError, Result};
use crate::gates::{PHI_AND, PHI_FORK, PHI_NOT, PHI_OR, PHI_ZERO_FORK};
use crate::ntuple::{NTuple, Signature};
use crate::registry::{find_first, GeneratorRegistry};
use crate::word::{tau_ij_or_empty, Token, Word};

/// Default bound on `m` for exhaustive simulation checks.
pub const DEFAULT_MAX_VERIFY_INPUTS: usize = 20;

/// Tokens in application order, tracking the length of the string they act on.
struct Builder {
    tokens: Vec<Token>,
    width: usize,
}

impl Builder {
    fn new(width: usize) -> Self {
        Self { tokens: Vec::new(), width }
    }

    fn tau(&mut self, i: usize, j: usize) {
        assert!(i.max(j) <= self.width, "tau index {} beyond live width {}", i.max(j), self.width);
        let w = tau_ij_or_empty(i, j).expect("positive indices");
        self.tokens.extend(w.tokens);
    }

    /// Moves the letter at position `i` to position `j > i`, shifting the
    /// letters in between one step left.
    fn shift_right(&mut self, i: usize, j: usize) {
        for k in i..j {
            self.tau(k, k + 1);
        }
    }

    fn gen(&mut self, name: &str, grows: bool) {
        self.tokens.push(Token::named(name));
        if grows {
            self.width += 1;
        }
    }

    /// Rearranges `len` letters starting at position `offset` so that
    /// `new[p] = old[perm[p]]`.
    fn permute(&mut self, offset: usize, perm: &[usize]) {
        for (a, b) in permutation_transpositions(perm) {
            self.tau(offset + a, offset + b);
        }
    }

    fn finish(self) -> Word {
        Word::from_application_order(self.tokens)
    }
}

fn inverse_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (p, &i) in perm.iter().enumerate() {
        inv[i] = p;
    }
    inv
}

/// The word `w_S` with `f_{w_S}(0 y) = 0 f_S(y) y` for every input `y` of the slice.
pub fn compile_slice(s: &Slice) -> Result<Word> {
    s.check()?;
    let width_in = s.input_width;
    let mut b = Builder::new(1 + width_in);
    b.permute(2, &s.input_permutation);
    let (mut m, mut n) = (0usize, 0usize);
    for g in &s.gates {
        match g {
            GateKind::Not | GateKind::Id => {
                b.tau(2, n + m + 2);
                b.gen(PHI_FORK, true);
                b.tau(1, 2);
                if *g == GateKind::Not {
                    b.gen(PHI_NOT, false);
                }
                b.tau(3, n + m + 3);
                b.tau(1, 2);
                b.shift_right(2, n + 2);
                m += 1;
                n += 1;
            }
            GateKind::And | GateKind::Or => {
                b.gen(PHI_ZERO_FORK, true);
                b.tau(2, n + m + 3);
                b.tau(3, n + m + 4);
                b.gen(if *g == GateKind::Or { PHI_OR } else { PHI_AND }, false);
                b.tau(3, n + m + 4);
                b.tau(2, n + m + 3);
                b.shift_right(1, n + 2);
                m += 2;
                n += 1;
            }
            GateKind::Fork => {
                b.tau(2, n + m + 2);
                b.gen(PHI_FORK, true);
                b.gen(PHI_FORK, true);
                b.tau(4, n + m + 4);
                b.shift_right(3, n + 3);
                b.shift_right(2, n + 2);
                m += 1;
                n += 2;
            }
            GateKind::Fredkin => {
                return Err(NvError::InvalidSlice("Fredkin gates are not compiled by simulation".into()));
            }
        }
    }
    debug_assert_eq!((m, n), (width_in, s.output_width));
    b.width = 1 + n + width_in;
    b.permute(n + 2, &inverse_permutation(&s.input_permutation));
    b.permute(2, &s.output_permutation);
    Ok(b.finish())
}

/// `σ_{i,j}` applied `times` times, as a word.
fn sigma_power(i: usize, j: usize, times: usize, width: usize) -> Word {
    let mut b = Builder::new(width);
    for _ in 0..times {
        b.shift_right(i, j);
    }
    b.finish()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeReport {
    pub slice_sizes: Vec<usize>,
    pub slice_word_sizes: Vec<usize>,
    pub word_size: usize,
    pub circuit_size: usize,
    pub raw_circuit_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompilationTrace {
    pub circuit: Circuit,
    pub slices: Vec<Slice>,
    pub slice_words: Vec<Word>,
    pub pi1: Word,
    pub pi2: Word,
    pub final_word: Word,
    pub size_report: SizeReport,
}

impl CompilationTrace {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "slice_words": self.slice_words.iter().map(Word::to_string).collect::<Vec<_>>(),
            "pi1": self.pi1.to_string(),
            "pi2": self.pi2.to_string(),
            "final": self.final_word.to_string(),
            "size_report": self.size_report,
        })
    }
}

/// Strictifies, slices and compiles a circuit of NOT/AND/OR/FORK/ID gates.
pub fn compile_circuit(c: &Circuit) -> Result<CompilationTrace> {
    let strict = c.strictify();
    let slices = strict.slices()?;
    let slice_words = slices.iter().map(compile_slice).collect::<Result<Vec<_>>>()?;
    let (m, n) = (strict.m(), strict.n());
    let z_len = 1 + m + slices.iter().map(|s| s.output_width).sum::<usize>();
    let pi1 = sigma_power(2, z_len, n, z_len);
    let pi2 = sigma_power(2, n + m + 1, m, n + m + 1);

    let forward: Vec<Token> = slice_words.iter().rev().flat_map(|w| w.tokens.iter().cloned()).collect();
    let inner: Vec<Token> =
        slice_words[..slice_words.len() - 1].iter().rev().flat_map(|w| w.tokens.iter().cloned()).collect();
    let uncompute = Word::new(inner).inverse();
    let final_word = pi2.concat(&uncompute).concat(&pi1).concat(&Word::new(forward));

    let size_report = SizeReport {
        slice_sizes: slices.iter().map(|s| s.size).collect(),
        slice_word_sizes: slice_words.iter().map(Word::size).collect(),
        word_size: final_word.size(),
        circuit_size: strict.size(),
        raw_circuit_size: c.raw_size(),
    };
    Ok(CompilationTrace { circuit: strict, slices, slice_words, pi1, pi2, final_word, size_report })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationFailure {
    pub input: Vec<bool>,
    pub expected: String,
    pub got: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationReport {
    pub ok: bool,
    pub failure: Option<SimulationFailure>,
}

fn bit_tuple(s: &str) -> NTuple {
    NTuple::from_strs(Signature::binary(1), &[s]).expect("binary string")
}

/// Checks `f_w(0 x) = 0 f_C(x) x` for all `2^m` inputs.
pub fn verify_simulation(
    c: &Circuit,
    w: &Word,
    reg: &GeneratorRegistry,
    max_inputs: usize,
) -> Result<SimulationReport> {
    if c.m() > max_inputs {
        return Err(NvError::TooLarge(format!("simulation check over 2^{} inputs", c.m())));
    }
    reg.check_word(w)?;
    if reg.sig() != Signature::binary(1) {
        return Err(NvError::WrongDimension { expected: "n = 1, k = 2", n: reg.sig().n(), k: reg.sig().k() });
    }
    let m = c.m();
    let failure = find_first(1u64 << m, |i| {
        let x = index_bits(i, m);
        let y = c.evaluate(&x).expect("width");
        let xs = bits_to_string(&x);
        let expected = format!("0{}{}", bits_to_string(&y), xs);
        let got = reg.streaming_unchecked(w, &bit_tuple(&format!("0{xs}")));
        let got = got.map(|t| crate::ntuple::digits_to_plain(t.coord(1)));
        (got.as_deref() != Some(expected.as_str())).then_some(SimulationFailure { input: x, expected, got })
    });
    Ok(SimulationReport { ok: failure.is_none(), failure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::default_v_registry;

    fn circuit(s: &str) -> Circuit {
        Circuit::from_json_str(s).unwrap()
    }

    fn run(w: &Word, input: &str) -> String {
        let reg = default_v_registry();
        let out = reg.streaming_eval(w, &bit_tuple(input)).unwrap().unwrap();
        crate::ntuple::digits_to_plain(out.coord(1))
    }

    fn slice(gates: &[GateKind]) -> Slice {
        let fin: usize = gates.iter().map(|g| g.fan_in()).sum();
        let fout: usize = gates.iter().map(|g| g.fan_out()).sum();
        Slice {
            input_width: fin,
            output_width: fout,
            input_permutation: (0..fin).collect(),
            gates: gates.to_vec(),
            output_permutation: (0..fout).collect(),
            size: fin,
        }
    }

    #[test]
    fn single_gate_slices() {
        let not = compile_slice(&slice(&[GateKind::Not])).unwrap();
        assert_eq!(run(&not, "00"), "010");
        assert_eq!(run(&not, "01"), "001");
        let or = compile_slice(&slice(&[GateKind::Or])).unwrap();
        for x in ["00", "01", "10", "11"] {
            let v = if x == "00" { '0' } else { '1' };
            assert_eq!(run(&or, &format!("0{x}")), format!("0{v}{x}"));
        }
        let fork = compile_slice(&slice(&[GateKind::Fork])).unwrap();
        assert_eq!(run(&fork, "00"), "0000");
        assert_eq!(run(&fork, "01"), "0111");
    }

    #[test]
    fn mixed_slice_with_permutations() {
        let mut s = slice(&[GateKind::And, GateKind::Fork, GateKind::Not, GateKind::Or, GateKind::Id]);
        s.input_permutation = vec![3, 0, 6, 5, 1, 2, 4];
        s.output_permutation = vec![5, 0, 2, 1, 3, 4];
        let w = compile_slice(&s).unwrap();
        for i in 0..128 {
            let x = index_bits(i, 7);
            let y = s.evaluate(&x).unwrap();
            let xs = bits_to_string(&x);
            assert_eq!(run(&w, &format!("0{xs}")), format!("0{}{}", bits_to_string(&y), xs));
        }
    }

    #[test]
    fn fredkin_slices_are_rejected() {
        assert!(matches!(compile_slice(&slice(&[GateKind::Fredkin])), Err(NvError::InvalidSlice(_))));
    }

    #[test]
    fn circuit_examples() {
        let reg = default_v_registry();
        let not = circuit(r#"{"m":1,"n":1,"gates":[{"id":"g","type":"NOT","inputs":["x1"]}],"outputs":["g"]}"#);
        let t = compile_circuit(&not).unwrap();
        assert_eq!(run(&t.final_word, "00"), "010");
        assert_eq!(run(&t.final_word, "01"), "001");
        let notnot = circuit(
            r#"{"m":1,"n":1,"gates":[{"id":"a","type":"NOT","inputs":["x1"]},
                {"id":"b","type":"NOT","inputs":["a"]}],"outputs":["b"]}"#,
        );
        let t = compile_circuit(&notnot).unwrap();
        assert_eq!(t.slice_words.len(), 2);
        assert_eq!(run(&t.final_word, "00"), "000");
        assert_eq!(run(&t.final_word, "01"), "011");
        let and_fork = circuit(
            r#"{"m":1,"n":1,"gates":[{"id":"a","type":"AND","inputs":["x1","x1"]}],"outputs":["a"]}"#,
        );
        let t = compile_circuit(&and_fork).unwrap();
        assert!(verify_simulation(&and_fork, &t.final_word, &reg, 20).unwrap().ok);
        assert_eq!(run(&t.final_word, "01"), "011");
    }

    #[test]
    fn trace_invariant() {
        let c = Circuit::random(3, 7, 11);
        let t = compile_circuit(&c).unwrap();
        let l = t.slice_words.len();
        let inner: Vec<Token> = t.slice_words[..l - 1].iter().rev().flat_map(|w| w.tokens.clone()).collect();
        let forward: Vec<Token> = t.slice_words.iter().rev().flat_map(|w| w.tokens.clone()).collect();
        let expect = t.pi2.concat(&Word::new(inner).inverse()).concat(&t.pi1).concat(&Word::new(forward));
        assert_eq!(t.final_word, expect);
        assert_eq!(t.size_report.word_size, t.final_word.size());
        assert_eq!(t.size_report.slice_sizes.iter().sum::<usize>(), t.size_report.circuit_size);
    }

    #[test]
    fn random_circuits_are_simulated() {
        let reg = default_v_registry();
        for seed in 0..40 {
            let c = Circuit::random(1 + (seed as usize % 4), 2 + seed as usize % 6, seed);
            let t = compile_circuit(&c).unwrap();
            let r = verify_simulation(&c, &t.final_word, &reg, 20).unwrap();
            assert!(r.ok, "seed {seed}: {:?}", r.failure);
        }
    }

    #[test]
    fn mutated_words_fail() {
        let reg = default_v_registry();
        let c = circuit(r#"{"m":2,"n":1,"gates":[{"id":"g","type":"OR","inputs":["x1","x2"]}],"outputs":["g"]}"#);
        let t = compile_circuit(&c).unwrap();
        let bad = Word::new(vec![Token::tau(1)]).concat(&t.final_word);
        let r = verify_simulation(&c, &bad, &reg, 20).unwrap();
        assert!(!r.ok);
        assert!(r.failure.is_some());
        let r = verify_simulation(&c, &Word::empty(), &reg, 20).unwrap();
        assert!(!r.ok);
        assert!(matches!(verify_simulation(&c, &Word::empty(), &reg, 1), Err(NvError::TooLarge(_))));
    }
}
