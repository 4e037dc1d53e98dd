pub mod circuit;
pub mod code;
pub mod compiler;
pub mod error;
pub mod fixtures;
pub mod gates;
pub mod io;
pub mod ntuple;
pub mod parse_tree;
pub mod reduction;
pub mod registry;
pub mod svg;
pub mod table;
pub mod word;

pub use circuit::{Circuit, GateKind, Slice, Wire};
pub use code::CodeSet;
pub use compiler::{compile_circuit, verify_simulation, CompilationTrace};
pub use error::{NvError, Result};
pub use ntuple::{NTuple, Signature};
pub use parse_tree::{ParseMode, ParseTree, PDag};
pub use reduction::{circuit_equivalence, EquivalenceMode, EquivalenceReport};
pub use registry::{GeneratorRegistry, IdentityMode};
pub use table::Table;
pub use word::{Token, Word};
