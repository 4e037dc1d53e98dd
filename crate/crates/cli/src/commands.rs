use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use nv_core::circuit::{bits_to_string, index_bits, parse_bits, Circuit};
use nv_core::compiler::{compile_circuit, verify_simulation, DEFAULT_MAX_VERIFY_INPUTS};
use nv_core::gates::{default_v_registry, jordan_registry};
use nv_core::io::{self, CodeFile, ParseTreeFile, TableFile};
use nv_core::reduction::{theta_registry, thompson_generator_names};
use nv_core::registry::embed_v_into_2v;
use nv_core::{CodeSet, EquivalenceMode, GeneratorRegistry, IdentityMode, NTuple, ParseMode, Table, Word};

use crate::output::Outcome;

type Res = Result<Outcome, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write(path: &Path, contents: &str) -> Result<(), String> {
    fs::write(path, contents).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_code(path: &Path) -> Result<CodeSet, String> {
    io::read_code(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_table(path: &Path) -> Result<Table, String> {
    io::read_table(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_registry(path: Option<&Path>) -> Result<GeneratorRegistry, String> {
    match path {
        Some(p) => io::read_registry(&read(p)?).map_err(|e| format!("{}: {e}", p.display())),
        None => Ok(default_v_registry()),
    }
}

fn load_word(path: &Path) -> Result<Word, String> {
    read(path)?.parse().map_err(|e| format!("{}: {e}", path.display()))
}

fn load_circuit(path: &Path) -> Result<Circuit, String> {
    Circuit::from_json_str(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn code_value(c: &CodeSet) -> Value {
    serde_json::to_value(CodeFile::from_code(c)).expect("json")
}

fn table_value(t: &Table) -> Value {
    serde_json::to_value(TableFile::from_table(t)).expect("json")
}

pub fn code_validate(file: &Path) -> Res {
    let c = load_code(file)?;
    let ifc = c.is_initial_factor_code();
    let joinless = c.is_joinless();
    let maximal = joinless && c.is_maximal_joinless().map_err(err)?;
    let kraft = c.kraft_sum().to_string();
    let text = format!(
        "{}\n  elements: {}\n  initial factor code: {ifc}\n  joinless: {joinless}\n  maximal: {maximal}\n  kraft sum: {kraft}",
        if joinless { "joinless code" } else { "not joinless" },
        c.len()
    );
    let body = json!({
        "elements": c.len(),
        "initial_factor_code": ifc,
        "joinless": joinless,
        "maximal": maximal,
        "kraft_sum": kraft,
    });
    Ok(Outcome::new(joinless, body, text))
}

pub fn code_maximal(file: &Path) -> Res {
    let c = load_code(file)?;
    let maximal = c.is_maximal_joinless().map_err(err)?;
    let kraft = c.kraft_sum().to_string();
    let text = if maximal { "maximal".to_string() } else { format!("not maximal (kraft sum {kraft})") };
    Ok(Outcome::new(maximal, json!({ "maximal": maximal, "kraft_sum": kraft }), text))
}

pub fn code_parse_tree(file: &Path, exhaustive: bool, count: bool) -> Res {
    let c = load_code(file)?;
    if count {
        let n = c.count_parse_trees().map_err(err)?;
        let found = n > 0u32.into();
        return Ok(Outcome::new(found, json!({ "count": n.to_string() }), format!("{n} parse trees")));
    }
    let mode = if exhaustive { ParseMode::Exhaustive } else { ParseMode::Greedy };
    match c.parse_tree(mode).map_err(err)? {
        Some(t) => {
            let mut text = String::from("parse tree");
            for v in t.restriction_sequence().iter().map(|(v, a)| format!("  {v} splits along axis {a}")) {
                text.push('\n');
                text.push_str(&v);
            }
            let body = json!({ "tree": serde_json::to_value(ParseTreeFile::from_tree(&t)).expect("json") });
            Ok(Outcome::new(true, body, text))
        }
        None => {
            let text = if exhaustive { "no parse tree" } else { "no parse tree found by the greedy search" };
            Ok(Outcome::new(false, json!({ "tree": Value::Null, "exhaustive": exhaustive }), text))
        }
    }
}

fn parse_tuple(c: &CodeSet, s: &str) -> Result<NTuple, String> {
    NTuple::parse(c.sig(), s).map_err(err)
}

pub fn code_restrict(file: &Path, at: &str, axis: usize, extend: bool) -> Res {
    let c = load_code(file)?;
    let p = parse_tuple(&c, at)?;
    let out = if extend { c.one_step_extension(&p, axis) } else { c.one_step_restriction(&p, axis) };
    let out = out.map_err(err)?;
    Ok(Outcome::data(json!({ "code": code_value(&out) }), io::write_code(&out).trim_end()))
}

pub fn code_join(a: &Path, b: &Path) -> Res {
    let out = load_code(a)?.elementwise_join(&load_code(b)?).map_err(err)?;
    Ok(Outcome::data(json!({ "code": code_value(&out) }), io::write_code(&out).trim_end()))
}

pub fn code_to_uniform(file: &Path) -> Res {
    let c = load_code(file)?;
    let steps = c.restrict_to_uniform().map_err(err)?;
    let mut text = format!("{} restriction steps", steps.len());
    for (p, a) in &steps {
        write!(text, "\n  restrict {p} along axis {a}").unwrap();
    }
    let body = json!({
        "steps": steps.iter().map(|(p, a)| json!({ "at": p.to_string(), "axis": a })).collect::<Vec<_>>(),
    });
    Ok(Outcome::data(body, text))
}

pub fn code_dag(file: &Path) -> Res {
    let c = load_code(file)?;
    let dag = c.p_dag();
    let leaves = dag.leaves();
    let leaves_are_code = leaves.len() == c.len() && c.iter().all(|x| leaves.contains(x));
    let interior: Vec<String> = dag.interior_leaves().iter().map(NTuple::to_string).collect();
    let text = format!(
        "{} vertices, {} edges, leaves equal the code: {leaves_are_code}\n  interior leaves: {}",
        dag.vertices().len(),
        dag.edges().len(),
        interior.join(" ")
    );
    let body = json!({
        "vertices": dag.vertices().iter().map(NTuple::to_string).collect::<Vec<_>>(),
        "edges": dag.edges().iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect::<Vec<_>>(),
        "leaves_equal_code": leaves_are_code,
        "interior_leaves": interior,
    });
    Ok(Outcome::data(body, text))
}

pub fn code_tiling(file: &Path, output: &Path, size: u32) -> Res {
    let c = load_code(file)?;
    let svg = nv_core::svg::tiling_svg(&c, size).map_err(err)?;
    write(output, &svg)?;
    Ok(Outcome::data(json!({ "output": output.display().to_string() }), format!("wrote {}", output.display())))
}

pub fn table_validate(file: &Path) -> Res {
    let f: TableFile = serde_json::from_str(&read(file)?).map_err(|e| format!("{}: {e}", file.display()))?;
    let v = f.validation().map_err(err)?;
    let text = match &v.diagnostic {
        None => "valid table".to_string(),
        Some(d) => format!("invalid table: {d}"),
    };
    Ok(Outcome::new(v.valid, json!({ "valid": v.valid, "diagnostic": v.diagnostic }), text))
}

pub fn table_apply(file: &Path, at: &str) -> Res {
    let t = load_table(file)?;
    let x = NTuple::parse(t.sig(), at).map_err(err)?;
    Ok(match t.apply(&x) {
        Some(y) => Outcome::new(true, json!({ "input": x.to_string(), "output": y.to_string() }), y.to_string()),
        None => Outcome::new(
            false,
            json!({ "input": x.to_string(), "output": Value::Null }),
            format!("{x} is not in the domain ideal"),
        ),
    })
}

pub fn table_invert(file: &Path) -> Res {
    let t = load_table(file)?.inverse();
    Ok(Outcome::data(json!({ "table": table_value(&t) }), io::write_table(&t).trim_end()))
}

pub fn table_compose(f2: &Path, f1: &Path) -> Res {
    let t = Table::compose(&load_table(f2)?, &load_table(f1)?).map_err(err)?;
    Ok(Outcome::data(json!({ "table": table_value(&t) }), io::write_table(&t).trim_end()))
}

pub fn table_equiv(a: &Path, b: &Path) -> Res {
    let eq = load_table(a)?.end_equivalent(&load_table(b)?).map_err(err)?;
    let text = if eq { "end-equivalent" } else { "not end-equivalent" };
    Ok(Outcome::new(eq, json!({ "equivalent": eq }), text))
}

pub fn table_extensions(file: &Path) -> Res {
    let t = load_table(file)?;
    let exts = t.maximal_extensions();
    let mut text = format!("{} maximal extensions", exts.len());
    for e in &exts {
        write!(text, "\n  {e}").unwrap();
    }
    let body = json!({ "extensions": exts.iter().map(table_value).collect::<Vec<_>>() });
    Ok(Outcome::data(body, text))
}

pub fn word_eval(file: &Path, registry: Option<&Path>, at: Option<&str>) -> Res {
    let reg = load_registry(registry)?;
    let w = load_word(file)?;
    match at {
        Some(at) => {
            let x = NTuple::parse(reg.sig(), at).map_err(err)?;
            Ok(match reg.streaming_eval(&w, &x).map_err(err)? {
                Some(y) => Outcome::new(true, json!({ "input": x.to_string(), "output": y.to_string() }), y.to_string()),
                None => Outcome::new(
                    false,
                    json!({ "input": x.to_string(), "output": Value::Null }),
                    format!("{x} is too short for the word"),
                ),
            })
        }
        None => {
            let t = reg.eval_to_table(&w).map_err(err)?;
            Ok(Outcome::data(json!({ "table": table_value(&t) }), io::write_table(&t).trim_end()))
        }
    }
}

pub fn word_identity(file: &Path, registry: Option<&Path>, exhaustive: bool) -> Res {
    let reg = load_registry(registry)?;
    let w = load_word(file)?;
    let mode = if exhaustive { IdentityMode::Exhaustive } else { IdentityMode::Table };
    let r = reg.is_identity_word(&w, mode).map_err(err)?;
    let witness = r.witness.as_ref().map(|(x, y)| {
        json!({ "input": x.to_string(), "output": y.as_ref().map(NTuple::to_string) })
    });
    let text = match &r.witness {
        None => "identity".to_string(),
        Some((x, Some(y))) => format!("not the identity: {x} -> {y}"),
        Some((x, None)) => format!("not the identity: undefined at {x}"),
    };
    Ok(Outcome::new(r.identity, json!({ "identity": r.identity, "witness": witness }), text))
}

pub fn word_encode(file: &Path, registry: Option<&Path>) -> Res {
    let reg = load_registry(registry)?;
    let bits = reg.encode(&load_word(file)?).map_err(err)?;
    Ok(Outcome::data(json!({ "bits": bits }), bits))
}

pub fn word_decode(file: &Path, registry: Option<&Path>) -> Res {
    let reg = load_registry(registry)?;
    let w = reg.decode(&read(file)?).map_err(err)?;
    Ok(Outcome::data(json!({ "word": w.to_string() }), w.to_string()))
}

pub fn word_embed(file: &Path, registry: Option<&Path>) -> Res {
    let reg = load_registry(registry)?;
    let w = embed_v_into_2v(&load_word(file)?, &reg).map_err(err)?;
    Ok(Outcome::data(json!({ "word": w.to_string() }), w.to_string()))
}

pub fn circuit_eval(file: &Path, input: Option<&str>) -> Res {
    let c = load_circuit(file)?;
    match input {
        Some(bits) => {
            let x = parse_bits(bits).map_err(err)?;
            let y = bits_to_string(&c.evaluate(&x).map_err(err)?);
            Ok(Outcome::data(json!({ "input": bits, "output": y }), y))
        }
        None => {
            let table = c.truth_table().map_err(err)?;
            let rows: Vec<(String, String)> = table
                .iter()
                .enumerate()
                .map(|(i, y)| (bits_to_string(&index_bits(i as u64, c.m())), bits_to_string(y)))
                .collect();
            let text = rows.iter().map(|(x, y)| format!("{x} -> {y}")).collect::<Vec<_>>().join("\n");
            let body = json!({ "truth_table": rows.iter().map(|(x, y)| json!([x, y])).collect::<Vec<_>>() });
            Ok(Outcome::data(body, text))
        }
    }
}

pub fn circuit_size(file: &Path) -> Res {
    let c = load_circuit(file)?;
    let (_, depth) = c.levels();
    let body = json!({
        "m": c.m(),
        "n": c.n(),
        "gates": c.gates().len(),
        "size": c.size(),
        "raw_size": c.raw_size(),
        "depth": depth,
        "strict": c.is_strict(),
    });
    let text = format!(
        "m = {}, n = {}, gates = {}, size = {} (as written {}), depth = {depth}, strict = {}",
        c.m(),
        c.n(),
        c.gates().len(),
        c.size(),
        c.raw_size(),
        c.is_strict()
    );
    Ok(Outcome::data(body, text))
}

pub fn circuit_strictify(file: &Path) -> Res {
    let s = load_circuit(file)?.strictify();
    Ok(Outcome::data(json!({ "circuit": s.to_json() }), s.to_json_string()))
}

pub fn circuit_slices(file: &Path) -> Res {
    let slices = load_circuit(file)?.strictify().slices().map_err(err)?;
    let items: Vec<Value> = slices
        .iter()
        .map(|s| {
            json!({
                "input_width": s.input_width,
                "output_width": s.output_width,
                "input_permutation": s.input_permutation,
                "gates": s.gates,
                "output_permutation": s.output_permutation,
                "size": s.size,
            })
        })
        .collect();
    let text = slices
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let gates: Vec<String> = s.gates.iter().map(ToString::to_string).collect();
            format!("slice {}: {} -> {} wires, gates {}", i + 1, s.input_width, s.output_width, gates.join(" "))
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Outcome::data(json!({ "slices": items }), text))
}

pub fn compile(circuit: &Path, output: Option<&Path>, trace: Option<&Path>, verify: bool) -> Res {
    let c = load_circuit(circuit)?;
    let t = compile_circuit(&c).map_err(err)?;
    let word = t.final_word.to_string();
    if let Some(o) = output {
        write(o, &format!("{word}\n"))?;
    }
    if let Some(p) = trace {
        write(p, &format!("{}\n", serde_json::to_string_pretty(&t.to_json()).expect("json")))?;
    }
    let r = &t.size_report;
    let mut text = match output {
        Some(o) => format!("wrote {}", o.display()),
        None => word.clone(),
    };
    write!(text, "\nword size {} for circuit size {}", r.word_size, c.size()).unwrap();
    let mut body = json!({ "size_report": r, "word_size": r.word_size, "circuit_size": c.size() });
    if output.is_none() {
        body["word"] = Value::String(word);
    }
    let mut verdict = true;
    if verify {
        let reg = default_v_registry();
        let rep = verify_simulation(&c, &t.final_word, &reg, DEFAULT_MAX_VERIFY_INPUTS).map_err(err)?;
        verdict = rep.ok;
        body["simulation"] = match &rep.failure {
            None => json!({ "ok": true }),
            Some(f) => json!({
                "ok": false,
                "input": bits_to_string(&f.input),
                "expected": f.expected,
                "got": f.got,
            }),
        };
        match &rep.failure {
            None => text.push_str("\nsimulation verified on all inputs"),
            Some(f) => write!(text, "\nsimulation fails on {}", bits_to_string(&f.input)).unwrap(),
        }
    }
    Ok(Outcome::new(verdict, body, text))
}

pub fn equiv(c1: &Path, c2: &Path, mode: EquivalenceMode, emit: Option<&Path>) -> Res {
    let a = load_circuit(c1)?;
    let b = load_circuit(c2)?;
    let r = nv_core::circuit_equivalence(&a, &b, mode).map_err(err)?;
    if let Some(dir) = emit {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        match (mode, &r.reduction, &r.words) {
            (EquivalenceMode::Group, Some(red), _) => {
                let reg = theta_registry(&default_v_registry(), &thompson_generator_names()).map_err(err)?;
                write(&dir.join("registry.json"), &io::write_registry(&reg))?;
                for (i, w) in red.instances.iter().enumerate() {
                    write(&dir.join(format!("instance-{}.txt", i + 1)), &format!("{w}\n"))?;
                }
            }
            (EquivalenceMode::Jordan, _, Some((u, v))) => {
                let reg = jordan_registry().map_err(err)?;
                write(&dir.join("registry.json"), &io::write_registry(&reg))?;
                write(&dir.join("instance-1.txt"), &format!("{}\n", u.inverse().concat(v)))?;
            }
            _ => return Err("truthtable mode produces no word problem instances".into()),
        }
    }
    let mut text = (if r.equivalent { "equivalent" } else { "not equivalent" }).to_string();
    if let Some(w) = &r.witness {
        write!(text, "\n  circuits differ on input {w}").unwrap();
    }
    let mut body = json!({ "equivalent": r.equivalent, "witness": r.witness });
    if let Some(red) = &r.reduction {
        write!(text, "\n  {} commutator instances", red.arity).unwrap();
        if let Some(i) = red.failing {
            write!(text, ", instance {} is not the identity", i + 1).unwrap();
        }
        body["arity"] = json!(red.arity);
        body["failing_instance"] = json!(red.failing.map(|i| i + 1));
    }
    Ok(Outcome::new(r.equivalent, body, text))
}

pub fn fixtures_install(dir: &Path) -> Res {
    let written = nv_core::fixtures::install(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let total = nv_core::fixtures::corpus().len();
    let text = format!("{total} fixtures in {}, {} written", dir.display(), written.len());
    let body = json!({
        "dir": dir.display().to_string(),
        "files": total,
        "written": written.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
    });
    Ok(Outcome::data(body, text))
}
