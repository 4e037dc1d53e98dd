//! Built-in elements of V used by the circuit compiler, and default registries.

use crate::error::Result;
use crate::ntuple::Signature;
use crate::registry::{tau_table, GeneratorRegistry};
use crate::table::Table;

pub const PHI_NOT: &str = "phi_not";
pub const PHI_OR: &str = "phi_or";
pub const PHI_AND: &str = "phi_and";
pub const PHI_ZERO_FORK: &str = "phi_0f";
pub const PHI_FORK: &str = "phi_f";
pub const FREDKIN: &str = "F";

#[derive(Debug, Clone)]
pub struct BuiltinGateTables {
    pub phi_not: Table,
    pub phi_or: Table,
    pub phi_and: Table,
    pub phi_zero_fork: Table,
    pub phi_fork: Table,
    pub tau12: Table,
}

fn bits(v: &[u8]) -> String {
    v.iter().map(|b| char::from(b'0' + b)).collect()
}

/// `b x1 x2 -> (b xor op(x1, x2)) x1 x2` on `{0,1}^3`.
fn controlled_gate(op: fn(u8, u8) -> u8) -> Table {
    let mut pairs = Vec::new();
    for b in 0..2u8 {
        for x1 in 0..2u8 {
            for x2 in 0..2u8 {
                pairs.push((bits(&[b, x1, x2]), bits(&[b ^ op(x1, x2), x1, x2])));
            }
        }
    }
    let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    Table::from_strings(2, &refs).expect("gate table")
}

pub fn builtin_tables() -> BuiltinGateTables {
    let sig = Signature::binary(1);
    let phi_not = Table::from_strings(2, &[("0", "1"), ("1", "0")]).expect("not");
    let phi_or = controlled_gate(|a, b| a | b);
    let phi_and = controlled_gate(|a, b| a & b);
    let phi_zero_fork = Table::from_strings(2, &[("0", "00"), ("10", "01"), ("11", "1")]).expect("0f");
    let tau12 = tau_table(sig, 1).expect("tau");
    let phi_fork = Table::compose(&tau12, &Table::compose(&phi_or, &phi_zero_fork).expect("sig"))
        .expect("sig")
        .max_extension_v()
        .expect("n = 1");
    BuiltinGateTables { phi_not, phi_or, phi_and, phi_zero_fork, phi_fork, tau12 }
}

/// The four standard generators of V.
pub fn thompson_generators() -> Vec<(&'static str, Table)> {
    let t = |p: &[(&str, &str)]| Table::from_strings(2, p).expect("generator");
    vec![
        ("A", t(&[("0", "00"), ("10", "01"), ("11", "1")])),
        ("B", t(&[("0", "0"), ("10", "100"), ("110", "101"), ("111", "11")])),
        ("C", t(&[("0", "11"), ("10", "0"), ("11", "10")])),
        ("pi0", t(&[("0", "10"), ("10", "0"), ("11", "11")])),
    ]
}

/// The gate tables followed by the four generators of V, with `tau`.
pub fn default_v_registry() -> GeneratorRegistry {
    let g = builtin_tables();
    let mut reg = GeneratorRegistry::new(Signature::binary(1));
    for (name, t) in [
        (PHI_NOT, g.phi_not),
        (PHI_OR, g.phi_or),
        (PHI_AND, g.phi_and),
        (PHI_ZERO_FORK, g.phi_zero_fork),
        (PHI_FORK, g.phi_fork),
    ] {
        reg.insert(name, t).expect("builtin");
    }
    for (name, t) in thompson_generators() {
        reg.insert(name, t).expect("generator");
    }
    reg
}

/// The Fredkin gate `1 x2 x3 -> 1 x3 x2`, identity on `0 x2 x3`.
pub fn fredkin_table() -> Table {
    let mut pairs = Vec::new();
    for x2 in 0..2u8 {
        for x3 in 0..2u8 {
            pairs.push((bits(&[0, x2, x3]), bits(&[0, x2, x3])));
            pairs.push((bits(&[1, x2, x3]), bits(&[1, x3, x2])));
        }
    }
    let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    Table::from_strings(2, &refs).expect("fredkin")
}

/// `{F} ∪ tau`.
pub fn jordan_registry() -> Result<GeneratorRegistry> {
    GeneratorRegistry::new(Signature::binary(1)).with(FREDKIN, fredkin_table())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntuple::NTuple;

    fn s(x: &str) -> NTuple {
        NTuple::from_strs(Signature::binary(1), &[x]).unwrap()
    }

    #[test]
    fn displayed_tables() {
        let g = builtin_tables();
        assert_eq!(g.phi_not.apply(&s("0")), Some(s("1")));
        assert_eq!(g.phi_not.apply(&s("1")), Some(s("0")));
        assert_eq!(g.phi_zero_fork.apply(&s("0")), Some(s("00")));
        assert_eq!(g.phi_zero_fork.apply(&s("10")), Some(s("01")));
        assert_eq!(g.phi_zero_fork.apply(&s("11")), Some(s("1")));
        assert_eq!(g.phi_or.apply(&s("001")), Some(s("101")));
        assert_eq!(g.phi_or.apply(&s("111")), Some(s("011")));
        assert_eq!(g.phi_and.apply(&s("011")), Some(s("111")));
        assert_eq!(g.phi_and.apply(&s("101")), Some(s("101")));
        for t in [&g.phi_not, &g.phi_or, &g.phi_and, &g.phi_zero_fork, &g.phi_fork, &g.tau12] {
            assert!(t.validate().valid);
        }
    }

    #[test]
    fn fork_duplicates() {
        let g = builtin_tables();
        assert_eq!(g.phi_fork.apply(&s("00")), Some(s("000")));
        assert_eq!(g.phi_fork.apply(&s("01")), Some(s("011")));
        let direct = Table::compose(&g.tau12, &Table::compose(&g.phi_or, &g.phi_zero_fork).unwrap()).unwrap();
        assert!(direct.end_equivalent(&g.phi_fork).unwrap());
    }

    #[test]
    fn fredkin_swaps_under_control() {
        let f = fredkin_table();
        assert_eq!(f.apply(&s("101")), Some(s("110")));
        assert_eq!(f.apply(&s("001")), Some(s("001")));
        assert!(Table::compose(&f, &f).unwrap().is_identity());
    }

    #[test]
    fn default_registry_order() {
        let r = default_v_registry();
        let names: Vec<&str> = r.names().collect();
        assert_eq!(names, ["phi_not", "phi_or", "phi_and", "phi_0f", "phi_f", "A", "B", "C", "pi0"]);
        assert_eq!(r.c_gamma(), 4);
    }
}
