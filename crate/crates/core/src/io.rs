//! JSON file formats for codes, tables and generator registries.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::code::CodeSet;
use crate::error::{NvError, Result};
use crate::ntuple::{digits_to_plain, NTuple, Signature};
use crate::parse_tree::ParseTree;
use crate::registry::GeneratorRegistry;
use crate::table::{validate, Table, Validation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeFile {
    pub n: usize,
    pub k: usize,
    pub tuples: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableFile {
    pub n: usize,
    pub k: usize,
    pub pairs: Vec<(Vec<String>, Vec<String>)>,
}

/// Interior vertices with their split axis, plus the leaf set for checking.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParseTreeFile {
    pub n: usize,
    pub k: usize,
    pub splits: Vec<(Vec<String>, usize)>,
    pub leaves: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub pairs: Vec<(Vec<String>, Vec<String>)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegistryFile {
    pub n: usize,
    pub k: usize,
    #[serde(default = "yes")]
    pub tau: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<bool>,
    pub generators: IndexMap<String, GeneratorEntry>,
}

fn yes() -> bool {
    true
}

fn coords(t: &NTuple) -> Vec<String> {
    t.coords().iter().map(|c| digits_to_plain(c)).collect()
}

fn parse_tuple(sig: Signature, c: &[String]) -> Result<NTuple> {
    if c.len() != sig.n() {
        return Err(NvError::Parse(format!("tuple {c:?} has {} coordinates, expected {}", c.len(), sig.n())));
    }
    NTuple::from_strs(sig, c)
}

fn parse_pairs(sig: Signature, pairs: &[(Vec<String>, Vec<String>)]) -> Result<Vec<(NTuple, NTuple)>> {
    pairs.iter().map(|(d, r)| Ok((parse_tuple(sig, d)?, parse_tuple(sig, r)?))).collect()
}

fn table_pairs(t: &Table) -> Vec<(Vec<String>, Vec<String>)> {
    t.pairs().iter().map(|(d, r)| (coords(d), coords(r))).collect()
}

impl CodeFile {
    pub fn from_code(c: &CodeSet) -> Self {
        let sig = c.sig();
        Self { n: sig.n(), k: sig.k() as usize, tuples: c.iter().map(coords).collect() }
    }

    pub fn to_code(&self) -> Result<CodeSet> {
        let sig = Signature::new(self.n, self.k)?;
        let ts = self.tuples.iter().map(|c| parse_tuple(sig, c)).collect::<Result<Vec<_>>>()?;
        CodeSet::new(sig, ts)
    }
}

impl TableFile {
    pub fn from_table(t: &Table) -> Self {
        let sig = t.sig();
        Self { n: sig.n(), k: sig.k() as usize, pairs: table_pairs(t) }
    }

    pub fn signature(&self) -> Result<Signature> {
        Signature::new(self.n, self.k)
    }

    /// Checks the table invariants without failing on an invalid table.
    pub fn validation(&self) -> Result<Validation> {
        let sig = self.signature()?;
        Ok(validate(sig, &parse_pairs(sig, &self.pairs)?))
    }

    pub fn to_table(&self) -> Result<Table> {
        let sig = self.signature()?;
        Table::new(sig, parse_pairs(sig, &self.pairs)?)
    }
}

impl ParseTreeFile {
    pub fn from_tree(t: &ParseTree) -> Self {
        let sig = t.leaves().sig();
        Self {
            n: sig.n(),
            k: sig.k() as usize,
            splits: t.splits().iter().map(|(v, &a)| (coords(v), a)).collect(),
            leaves: t.leaves().iter().map(coords).collect(),
        }
    }

    pub fn to_tree(&self) -> Result<ParseTree> {
        let sig = Signature::new(self.n, self.k)?;
        let splits = self
            .splits
            .iter()
            .map(|(v, a)| {
                if *a == 0 || *a > sig.n() {
                    return Err(NvError::BadAxis { axis: *a, n: sig.n() });
                }
                Ok((parse_tuple(sig, v)?, *a))
            })
            .collect::<Result<_>>()?;
        let tree = ParseTree::from_splits(sig, splits)?;
        let leaves = CodeSet::new(sig, self.leaves.iter().map(|c| parse_tuple(sig, c)).collect::<Result<Vec<_>>>()?)?;
        if &leaves != tree.leaves() {
            return Err(NvError::Parse("listed leaves do not match the splits".into()));
        }
        Ok(tree)
    }
}

impl RegistryFile {
    pub fn from_registry(r: &GeneratorRegistry) -> Self {
        let sig = r.sig();
        Self {
            n: sig.n(),
            k: sig.k() as usize,
            tau: r.tau_enabled(),
            sigma: (r.sigma_enabled() != (sig.n() == 2)).then_some(r.sigma_enabled()),
            generators: r
                .named_tables()
                .map(|(name, t)| (name.to_string(), GeneratorEntry { pairs: table_pairs(t) }))
                .collect(),
        }
    }

    pub fn to_registry(&self) -> Result<GeneratorRegistry> {
        let sig = Signature::new(self.n, self.k)?;
        let mut reg = GeneratorRegistry::new(sig).with_schematic(self.tau, self.sigma.unwrap_or(sig.n() == 2))?;
        for (name, g) in &self.generators {
            reg.insert(name, Table::new(sig, parse_pairs(sig, &g.pairs)?)?)?;
        }
        Ok(reg)
    }
}

pub fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn read_code(s: &str) -> Result<CodeSet> {
    serde_json::from_str::<CodeFile>(s)?.to_code()
}

pub fn write_code(c: &CodeSet) -> String {
    to_pretty(&CodeFile::from_code(c))
}

pub fn read_table(s: &str) -> Result<Table> {
    serde_json::from_str::<TableFile>(s)?.to_table()
}

pub fn write_table(t: &Table) -> String {
    to_pretty(&TableFile::from_table(t))
}

pub fn read_parse_tree(s: &str) -> Result<ParseTree> {
    serde_json::from_str::<ParseTreeFile>(s)?.to_tree()
}

pub fn write_parse_tree(t: &ParseTree) -> String {
    to_pretty(&ParseTreeFile::from_tree(t))
}

pub fn read_registry(s: &str) -> Result<GeneratorRegistry> {
    serde_json::from_str::<RegistryFile>(s)?.to_registry()
}

pub fn write_registry(r: &GeneratorRegistry) -> String {
    to_pretty(&RegistryFile::from_registry(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::default_v_registry;

    #[test]
    fn code_round_trip() {
        let sig = Signature::binary(2);
        let c = CodeSet::from_strs(sig, &[&["0", ""], &["1", "0"], &["1", "1"]]).unwrap();
        let s = write_code(&c);
        assert!(s.contains("\"\""));
        let back = read_code(&s).unwrap();
        assert_eq!(back.elements(), c.elements());
    }

    #[test]
    fn wrong_arity_is_rejected() {
        let s = r#"{"n":2,"k":2,"tuples":[["0"]]}"#;
        assert!(matches!(read_code(s), Err(NvError::Parse(_))));
        let s = r#"{"n":1,"k":2,"tuples":[["012"]]}"#;
        assert!(matches!(read_code(s), Err(NvError::InvalidDigit { .. })));
    }

    #[test]
    fn table_round_trip_and_validation() {
        let t = Table::from_strings(2, &[("0", "10"), ("10", "0"), ("11", "11")]).unwrap();
        assert_eq!(read_table(&write_table(&t)).unwrap(), t);
        let bad = r#"{"n":1,"k":2,"pairs":[[["0"],["0"]],[["10"],["1"]]]}"#;
        let f: TableFile = serde_json::from_str(bad).unwrap();
        let v = f.validation().unwrap();
        assert!(!v.valid);
        assert!(v.diagnostic.unwrap().contains("maximal"));
        assert!(f.to_table().is_err());
    }

    #[test]
    fn parse_tree_round_trip() {
        let u = CodeSet::uniform(Signature::binary(2), &[1, 1]).unwrap();
        for t in u.all_parse_trees(8).unwrap() {
            assert_eq!(read_parse_tree(&write_parse_tree(&t)).unwrap(), t);
        }
        let bad = r#"{"n":2,"k":2,"splits":[[["",""],1]],"leaves":[["0",""]]}"#;
        assert!(read_parse_tree(bad).is_err());
    }

    #[test]
    fn registry_round_trip() {
        let r = default_v_registry();
        let s = write_registry(&r);
        let back = read_registry(&s).unwrap();
        assert_eq!(back.names().collect::<Vec<_>>(), r.names().collect::<Vec<_>>());
        assert!(back.tau_enabled());
        assert!(!back.sigma_enabled());
        assert_eq!(write_registry(&back), s);
        let two = read_registry(r#"{"n":2,"k":2,"generators":{}}"#).unwrap();
        assert!(two.sigma_enabled());
    }
}
