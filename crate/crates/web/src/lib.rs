//! WebAssembly bindings for the browser demo. Every entry point takes
//! text and returns a JSON string; failures come back as `{"error": ...}`.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use nv_core::gates::default_v_registry;
use nv_core::io;
use nv_core::{Circuit, CodeSet, EquivalenceMode, IdentityMode, NTuple, ParseMode, Signature, Word};

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

/// Parses one tuple per line, coordinates separated by commas, `-` for ε.
fn parse_code(n: usize, text: &str) -> Result<CodeSet, String> {
    let sig = Signature::new(n, 2).map_err(err)?;
    let tuples = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            let l = l.trim_start_matches('(').trim_end_matches(')');
            NTuple::parse(sig, &format!("({l})")).map_err(err)
        })
        .collect::<Result<Vec<_>, _>>()?;
    CodeSet::new(sig, tuples).map_err(err)
}

fn analyze_code_inner(n: usize, text: &str) -> Result<Value, String> {
    let code = parse_code(n, text)?;
    let joinless = code.is_joinless();
    let maximal = joinless && code.is_maximal_joinless().map_err(err)?;
    let trees = if joinless { Some(code.count_parse_trees().map_err(err)?.to_string()) } else { None };
    let steps = if maximal {
        code.parse_tree(ParseMode::Exhaustive)
            .map_err(err)?
            .map(|t| t.restriction_sequence().iter().map(|(v, a)| format!("{v} along axis {a}")).collect::<Vec<_>>())
    } else {
        None
    };
    let svg = if n == 2 { Some(nv_core::svg::tiling_svg(&code, 320).map_err(err)?) } else { None };
    Ok(json!({
        "elements": code.len(),
        "initial_factor_code": code.is_initial_factor_code(),
        "joinless": joinless,
        "maximal": maximal,
        "kraft_sum": code.kraft_sum().to_string(),
        "parse_trees": trees,
        "splits": steps,
        "svg": svg,
    }))
}

/// Joinless, maximality and parse-tree report for a binary code.
#[wasm_bindgen]
pub fn analyze_code(n: usize, text: &str) -> String {
    respond(analyze_code_inner(n, text))
}

fn evaluate_word_inner(word: &str, two_v: bool) -> Result<Value, String> {
    let mut reg = default_v_registry();
    let mut w: Word = word.parse().map_err(err)?;
    if two_v {
        w = nv_core::registry::embed_v_into_2v(&w, &reg).map_err(err)?;
        reg = reg.embed_into_2v().map_err(err)?;
    }
    let identity = reg.is_identity_word(&w, IdentityMode::Table).map_err(err)?;
    let table = reg.eval_to_table(&w).map_err(err)?;
    Ok(json!({
        "word": w.to_string(),
        "length": w.len(),
        "lambda": reg.lambda(&w).map_err(err)?,
        "identity": identity.identity,
        "table": table.to_string(),
        "bits": reg.encode(&w).map_err(err)?,
    }))
}

/// Evaluates a word over the built-in V registry, optionally embedded into 2V.
#[wasm_bindgen]
pub fn evaluate_word(word: &str, two_v: bool) -> String {
    respond(evaluate_word_inner(word, two_v))
}

fn compare_circuits_inner(a: &str, b: &str, mode: &str) -> Result<Value, String> {
    let c1 = Circuit::from_json_str(a).map_err(err)?;
    let c2 = Circuit::from_json_str(b).map_err(err)?;
    let mode: EquivalenceMode = mode.parse().map_err(err)?;
    let r = nv_core::circuit_equivalence(&c1, &c2, mode).map_err(err)?;
    Ok(json!({
        "equivalent": r.equivalent,
        "witness": r.witness,
        "word_sizes": r.words.as_ref().map(|(u, v)| [u.size(), v.size()]),
        "instances": r.reduction.as_ref().map(|red| red.arity),
        "failing_instance": r.reduction.as_ref().and_then(|red| red.failing.map(|i| i + 1)),
    }))
}

/// Circuit equivalence in `group`, `truthtable` or `jordan` mode.
#[wasm_bindgen]
pub fn compare_circuits(a: &str, b: &str, mode: &str) -> String {
    respond(compare_circuits_inner(a, b, mode))
}

/// The contents of a named fixture, or an empty string.
#[wasm_bindgen]
pub fn fixture(name: &str) -> String {
    nv_core::fixtures::corpus().into_iter().find(|(n, _)| *n == name).map(|(_, s)| s).unwrap_or_default()
}

/// A code in the one-tuple-per-line form accepted by [`analyze_code`].
#[wasm_bindgen]
pub fn code_lines(json_text: &str) -> String {
    match io::read_code(json_text) {
        Ok(c) => c.iter().map(NTuple::to_string).collect::<Vec<_>>().join("\n"),
        Err(e) => format!("# {e}"),
    }
}
