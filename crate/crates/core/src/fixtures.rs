//! The pinned fixture corpus: example codes, tables, gate tables, registries,
//! words and circuits, serialized in the standard file formats.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::code::CodeSet;
use crate::gates::{builtin_tables, default_v_registry, fredkin_table, jordan_registry};
use crate::io::{to_pretty, write_code, write_parse_tree, write_registry, write_table};
use crate::ntuple::Signature;
use crate::table::Table;
use crate::word::Word;

/// Regression guard for `‖w_S‖ ≤ c₀ |S|³`.
pub const SLICE_SIZE_C0: f64 = 8.0;
/// Regression guard for `‖w_C‖ ≤ c |C|⁶`.
pub const CIRCUIT_SIZE_C: f64 = 0.25;

#[derive(Serialize)]
struct SizeBounds {
    c0: f64,
    c: f64,
}

fn s2() -> Signature {
    Signature::binary(2)
}

fn code2(tuples: &[[&str; 2]]) -> CodeSet {
    let refs: Vec<&[&str]> = tuples.iter().map(|t| &t[..]).collect();
    CodeSet::from_strs(s2(), &refs).expect("fixture code")
}

fn table2(pairs: &[([&str; 2], [&str; 2])]) -> Table {
    let refs: Vec<(&[&str], &[&str])> = pairs.iter().map(|(d, r)| (&d[..], &r[..])).collect();
    Table::from_strs(s2(), &refs).expect("fixture table")
}

pub fn fig1_tuples() -> CodeSet {
    code2(&[["0", "00"], ["010", "0"], ["10", "1101"], ["1", "1110"]])
}

/// An initial factor code that is not joinless.
pub fn initial_factor_example() -> CodeSet {
    code2(&[["", "0"], ["0", ""]])
}

/// A maximal joinless code with ε in one coordinate.
pub fn maximal_example() -> CodeSet {
    code2(&[["", "0"], ["0", "1"], ["1", "1"]])
}

/// An initial factor code that is not joinless but generates an essential right ideal.
pub fn essential_example() -> CodeSet {
    code2(&[["", "0"], ["0", ""], ["1", "1"]])
}

/// The maximal joinless code in `3{0,1}*` that has no parse tree.
pub fn lv_code() -> CodeSet {
    let sig = Signature::binary(3);
    CodeSet::from_strs(
        sig,
        &[&["0", "0", ""], &["1", "", "0"], &["", "1", "1"], &["0", "1", "0"], &["1", "0", "1"]],
    )
    .expect("fixture code")
}

pub fn uniform22() -> CodeSet {
    CodeSet::uniform(s2(), &[1, 1]).expect("uniform")
}

/// A table with two different maximal extensions.
pub fn nonmax_table() -> Table {
    table2(&[
        (["0", "0"], ["0", "0"]),
        (["0", "1"], ["0", "1"]),
        (["1", "0"], ["1", "0"]),
        (["1", "10"], ["1", "11"]),
        (["1", "11"], ["1", "10"]),
    ])
}

pub fn nonmax_f1() -> Table {
    table2(&[
        (["", "0"], ["", "0"]),
        (["0", "1"], ["0", "1"]),
        (["1", "10"], ["1", "11"]),
        (["1", "11"], ["1", "10"]),
    ])
}

pub fn nonmax_f2() -> Table {
    table2(&[
        (["0", ""], ["0", ""]),
        (["1", "0"], ["1", "0"]),
        (["1", "10"], ["1", "11"]),
        (["1", "11"], ["1", "10"]),
    ])
}

/// `τ_{3,4} × 1` written as a conjugate by the shift, which is the identity.
pub fn tau_sigma_relator() -> Word {
    "tau(3) sigma sigma tau(1) sigma^-1 sigma^-1".parse().expect("word")
}

const CIRCUITS: &[(&str, &str)] = &[
    ("circuit-id.json", r#"{"m":1,"n":1,"gates":[{"id":"a","type":"ID","inputs":["x1"]}],"outputs":["a"]}"#),
    ("circuit-not.json", r#"{"m":1,"n":1,"gates":[{"id":"a","type":"NOT","inputs":["x1"]}],"outputs":["a"]}"#),
    (
        "circuit-not-not.json",
        r#"{"m":1,"n":1,"gates":[{"id":"a","type":"NOT","inputs":["x1"]},{"id":"b","type":"NOT","inputs":["a"]}],"outputs":["b"]}"#,
    ),
    ("circuit-and.json", r#"{"m":2,"n":1,"gates":[{"id":"a","type":"AND","inputs":["x1","x2"]}],"outputs":["a"]}"#),
    ("circuit-or.json", r#"{"m":2,"n":1,"gates":[{"id":"a","type":"OR","inputs":["x1","x2"]}],"outputs":["a"]}"#),
    (
        "circuit-and-de-morgan.json",
        r#"{"m":2,"n":1,"gates":[{"id":"p","type":"NOT","inputs":["x1"]},{"id":"q","type":"NOT","inputs":["x2"]},{"id":"o","type":"OR","inputs":["p","q"]},{"id":"a","type":"NOT","inputs":["o"]}],"outputs":["a"]}"#,
    ),
    (
        "circuit-fredkin.json",
        r#"{"m":3,"n":3,"gates":[{"id":"f","type":"FREDKIN","inputs":["x1","x2","x3"]}],"outputs":["f.0","f.1","f.2"]}"#,
    ),
    (
        "circuit-fredkin-twice.json",
        r#"{"m":3,"n":3,"gates":[{"id":"f","type":"FREDKIN","inputs":["x1","x2","x3"]},{"id":"g","type":"FREDKIN","inputs":["f.0","f.1","f.2"]}],"outputs":["g.0","g.1","g.2"]}"#,
    ),
    (
        "circuit-wires3.json",
        r#"{"m":3,"n":3,"gates":[{"id":"a","type":"ID","inputs":["x1"]},{"id":"b","type":"ID","inputs":["x2"]},{"id":"c","type":"ID","inputs":["x3"]}],"outputs":["a","b","c"]}"#,
    ),
];

/// Every fixture as `(file name, contents)`, in a fixed order.
pub fn corpus() -> Vec<(&'static str, String)> {
    let g = builtin_tables();
    let trees = uniform22().all_parse_trees(2).expect("uniform code is joinless");
    let mut out = vec![
        ("fig1-tuples.json", write_code(&fig1_tuples())),
        ("code-initial-factor.json", write_code(&initial_factor_example())),
        ("code-maximal.json", write_code(&maximal_example())),
        ("code-essential.json", write_code(&essential_example())),
        ("lv.json", write_code(&lv_code())),
        ("uniform22.json", write_code(&uniform22())),
        ("uniform22-tree-1.json", write_parse_tree(&trees[0])),
        ("uniform22-tree-2.json", write_parse_tree(&trees[1])),
        ("nonmax.json", write_table(&nonmax_table())),
        ("nonmax-f1.json", write_table(&nonmax_f1())),
        ("nonmax-f2.json", write_table(&nonmax_f2())),
        ("phi_not.json", write_table(&g.phi_not)),
        ("phi_or.json", write_table(&g.phi_or)),
        ("phi_and.json", write_table(&g.phi_and)),
        ("phi_0f.json", write_table(&g.phi_zero_fork)),
        ("phi_f.json", write_table(&g.phi_fork)),
        ("tau12.json", write_table(&g.tau12)),
        ("fredkin.json", write_table(&fredkin_table())),
        ("reg1v.json", write_registry(&default_v_registry())),
        ("reg2v.json", write_registry(&default_v_registry().embed_into_2v().expect("n = 1"))),
        ("jordan.json", write_registry(&jordan_registry().expect("jordan"))),
        ("tau-sigma-relator.txt", format!("{}\n", tau_sigma_relator())),
        ("size-bounds.json", to_pretty(&SizeBounds { c0: SLICE_SIZE_C0, c: CIRCUIT_SIZE_C })),
    ];
    for (name, json) in CIRCUITS {
        out.push((name, format!("{json}\n")));
    }
    out
}

/// Writes the corpus into `dir`, leaving files that already match untouched.
/// Returns the paths of files that were (re)written.
pub fn install(dir: &Path) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, contents) in corpus() {
        let path = dir.join(name);
        if fs::read(&path).ok().as_deref() != Some(contents.as_bytes()) {
            fs::write(&path, &contents)?;
            written.push(path);
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::io::{read_code, read_parse_tree, read_registry, read_table};
    use crate::registry::IdentityMode;
    use sha2::{Digest, Sha256};

    #[test]
    fn every_fixture_validates() {
        for (name, s) in corpus() {
            let ok = match name {
                n if n.starts_with("circuit-") => Circuit::from_json_str(&s).is_ok(),
                n if n.contains("-tree-") => read_parse_tree(&s).map(|t| t.is_sound()).unwrap_or(false),
                n if n.starts_with("reg") || n == "jordan.json" => read_registry(&s).is_ok(),
                "tau-sigma-relator.txt" => s.parse::<Word>().is_ok(),
                "size-bounds.json" => serde_json::from_str::<serde_json::Value>(&s).is_ok(),
                n if n.contains("tuples") || n.starts_with("code-") || n == "lv.json" || n == "uniform22.json" => {
                    read_code(&s).is_ok()
                }
                _ => read_table(&s).map(|t| t.validate().valid).unwrap_or(false),
            };
            assert!(ok, "{name}");
        }
    }

    #[test]
    fn corpus_facts() {
        assert!(lv_code().is_maximal_joinless().unwrap());
        assert!(maximal_example().is_maximal_joinless().unwrap());
        assert!(initial_factor_example().is_initial_factor_code());
        assert!(!initial_factor_example().is_joinless());
        assert!(essential_example().is_initial_factor_code() && !essential_example().is_joinless());
        let exts = nonmax_table().maximal_extensions();
        assert!(exts.contains(&nonmax_f1()) && exts.contains(&nonmax_f2()));
        let reg2 = default_v_registry().embed_into_2v().unwrap();
        assert!(reg2.is_identity_word(&tau_sigma_relator(), IdentityMode::Table).unwrap().identity);
    }

    #[test]
    fn install_is_idempotent() {
        let dir = std::env::temp_dir().join(format!("nv-fixtures-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        let first = install(&dir).unwrap();
        assert_eq!(first.len(), corpus().len());
        let bytes: Vec<Vec<u8>> = first.iter().map(|p| fs::read(p).unwrap()).collect();
        assert!(install(&dir).unwrap().is_empty());
        let again: Vec<Vec<u8>> = first.iter().map(|p| fs::read(p).unwrap()).collect();
        assert_eq!(bytes, again);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn hashes_are_pinned() {
        let mut got: Vec<(&str, String)> = corpus()
            .into_iter()
            .map(|(n, s)| {
                let h = Sha256::digest(s.as_bytes());
                (n, h.iter().map(|b| format!("{b:02x}")).collect())
            })
            .collect();
        got.sort();
        for ((name, hash), (pname, phash)) in got.iter().zip(PINNED) {
            assert_eq!((*name, hash.as_str()), (*pname, *phash));
        }
        assert_eq!(got.len(), PINNED.len());
    }

    const PINNED: &[(&str, &str)] = &[
        ("circuit-and-de-morgan.json", "def574064b0754a44923ca138050d6f3a97caeed38bbb73aac41088aa0ab1044"),
        ("circuit-and.json", "16004b0fce0cea41e4de0911668c3aac82bee472a310c0da970d57939937060e"),
        ("circuit-fredkin-twice.json", "2304c8e0cb73820bcddb16741949d1b3c83f5df9c946e5ce18823a67949ab25c"),
        ("circuit-fredkin.json", "ba3087ba185afce6512257cd23c759ec45785ca76eb04961a68f9ab714078c76"),
        ("circuit-id.json", "d4ced1be055527c543ada23a2beac06197390cf62060fa7f2654e8b40ff71cfa"),
        ("circuit-not-not.json", "200b7c564515fe913fdb8b3539d967baa8532d1372a1680d2555bc7b2fbb296c"),
        ("circuit-not.json", "5c1e7124986d3a2f148711820fb54bda5789ee794c2634838b5fd04ef53c2f08"),
        ("circuit-or.json", "41e396589be8007dc23774caec8950b9cedfeefc517618640c706c0404b4835b"),
        ("circuit-wires3.json", "2b6aec39a4d2040e8df6b2e2b1297d606124f462e6e33929b4ead05853080367"),
        ("code-essential.json", "1f2f151efe4afdf43e5330ac4a51579f4fd2f2181a8b9be07fc0ecd10d7a1baa"),
        ("code-initial-factor.json", "d6380dc1d675e3782aa7855549f59b4cd593b710ae9d87cdfb2c20d59b6dfe71"),
        ("code-maximal.json", "7679b6b1be11223deaa9195e7f56aac2b0b4a0deddad89e7e0116167b0be1dfe"),
        ("fig1-tuples.json", "307f0a6659e7e734ec80830f7b34e344292624a7b76ef62174b2e4ee95256580"),
        ("fredkin.json", "81361e64cb388d13215a6aada9cb5e94fea455e3099c8ec92d3f34b85f95a0d7"),
        ("jordan.json", "291964a0858ecdfc883a4f89ff35ea1380ec478da063724eba965020219469c6"),
        ("lv.json", "8698069dbff86f7d625f5be927c18c7bc5197f6401272b676f7a6b553b1ff43a"),
        ("nonmax-f1.json", "062d355ecc610f619818d18bd13399e3bdee7a740f184295383204b4a9ebab63"),
        ("nonmax-f2.json", "cd533a311fdc9355e73425b4a9b033a7aae9dcbc0882e39eaca02585fde7dfa3"),
        ("nonmax.json", "2271efd17caecc48c3fe9d87c4670a63f5e600077800a86494263816bfdbd33b"),
        ("phi_0f.json", "6f276b8de7c8c16d13954b394c7df83795a089ac371a751f53708d1e44ef7f80"),
        ("phi_and.json", "bd4fcf854236af186cce180bb9644fa910a6fb9f8421767e072aebde44e97b1c"),
        ("phi_f.json", "34b3cfed73096e1ed87a084365df8dc18a608ad030526fad0b34224988ac5426"),
        ("phi_not.json", "a62f4f743a17546054b3ce02962794453033092a1b70cc96ef0a2dbc05844c00"),
        ("phi_or.json", "bebcf2ffd2e8f0c5bcfd543d98f979ca8d2061bc75bfe89c1a300b88bb2dd53a"),
        ("reg1v.json", "8f97da4d549fa93685963f5c25fb0486cc381c10be2d1603688aa5e743272f59"),
        ("reg2v.json", "e1c6df41c678fcd152d69803278512710924038735dc0add52e22cf19ee20b4e"),
        ("size-bounds.json", "14f9f36aa755f732d1f0803127beea3bc8f90236662af52925ea2910855e9d05"),
        ("tau-sigma-relator.txt", "fb9101b574864e1a19d17f17b8f042d4e8f48cfb0de48ad2a6e00632e257d6d2"),
        ("tau12.json", "3b2d841ba084955592f49d34bbbb5bd80695a62838d9b4e52a54778eaf81323e"),
        ("uniform22-tree-1.json", "cff77e1fca963f33c17c88b8716969612a86b6e5e436682cf32ec50a07e90c64"),
        ("uniform22-tree-2.json", "d99e1b6a595fc24d2c5e27a47bf691a62db097091674e709f34ce85c74c9d3d6"),
        ("uniform22.json", "81e5593fd031a935b5614296afe56492d393f5d0b1403b532eb41e297e0493bc"),
    ];
}
