use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use output::Outcome;

#[derive(Parser)]
#[command(name = "nv", version, about = "Joinless codes, tables, words and circuits for nV")]
struct Cli {
    /// Print machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for exhaustive checks.
    #[arg(long, global = true, env = "NV_JOBS")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Joinless codes.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Tables of elements of nV.
    #[command(subcommand)]
    Table(TableCmd),
    /// Words over a generator registry.
    #[command(subcommand)]
    Word(WordCmd),
    /// Boolean circuits.
    #[command(subcommand)]
    Circuit(CircuitCmd),
    /// Compile a circuit into a word that simulates it.
    Compile {
        circuit: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
    },
    /// Decide whether two circuits compute the same function.
    Equiv {
        c1: PathBuf,
        c2: PathBuf,
        #[arg(long, value_enum, default_value_t = EquivMode::Group)]
        mode: EquivMode,
        #[arg(long)]
        emit_instances: Option<PathBuf>,
    },
    /// The fixture corpus.
    #[command(subcommand)]
    Fixtures(FixturesCmd),
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Report initial factor, joinless and maximality flags.
    Validate { file: PathBuf },
    /// Exit 0 iff the code is a maximal joinless code.
    Maximal { file: PathBuf },
    /// Find a parse tree.
    ParseTree {
        file: PathBuf,
        #[arg(long)]
        exhaustive: bool,
        /// Count all parse trees.
        #[arg(long)]
        count: bool,
    },
    /// Replace an element by its one-digit extensions along an axis.
    Restrict {
        file: PathBuf,
        #[arg(long)]
        at: String,
        #[arg(long)]
        axis: usize,
    },
    /// Collapse the children of a tuple along an axis.
    Extend {
        file: PathBuf,
        #[arg(long)]
        at: String,
        #[arg(long)]
        axis: usize,
    },
    /// Elementwise join of two codes.
    Join { a: PathBuf, b: PathBuf },
    /// Restriction steps leading to a uniform code.
    ToUniform { file: PathBuf },
    /// The initial factor DAG.
    Dag { file: PathBuf },
    /// Draw an n = 2 code as a tiling of the unit square.
    TilingSvg {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 512)]
        size: u32,
    },
}

#[derive(Subcommand)]
enum TableCmd {
    Validate { file: PathBuf },
    Apply {
        file: PathBuf,
        #[arg(long)]
        at: String,
    },
    Invert { file: PathBuf },
    /// `f2 ∘ f1`.
    Compose { f2: PathBuf, f1: PathBuf },
    /// End-equivalence of two tables.
    Equiv { a: PathBuf, b: PathBuf },
    /// All maximal extensions.
    Extensions { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum WordMode {
    Table,
    Exhaustive,
}

#[derive(Args)]
struct RegistryArg {
    /// Registry file; defaults to the built-in n = 1 registry.
    #[arg(long)]
    registry: Option<PathBuf>,
}

#[derive(Subcommand)]
enum WordCmd {
    /// The table of the word, or its value at one tuple.
    Eval {
        file: PathBuf,
        #[command(flatten)]
        reg: RegistryArg,
        #[arg(long)]
        at: Option<String>,
    },
    /// Exit 0 iff the word is the identity.
    Identity {
        file: PathBuf,
        #[command(flatten)]
        reg: RegistryArg,
        #[arg(long, value_enum, default_value_t = WordMode::Table)]
        mode: WordMode,
    },
    Encode {
        file: PathBuf,
        #[command(flatten)]
        reg: RegistryArg,
    },
    /// Decode a file of bits.
    Decode {
        file: PathBuf,
        #[command(flatten)]
        reg: RegistryArg,
    },
    /// Rewrite an n = 1 word into the corresponding 2V word.
    Embed {
        file: PathBuf,
        #[command(flatten)]
        reg: RegistryArg,
    },
}

#[derive(Subcommand)]
enum CircuitCmd {
    /// Evaluate on one input, or print the truth table.
    Eval {
        file: PathBuf,
        #[arg(long)]
        input: Option<String>,
    },
    Size { file: PathBuf },
    Strictify { file: PathBuf },
    Slices { file: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum EquivMode {
    Group,
    Truthtable,
    Jordan,
}

#[derive(Subcommand)]
enum FixturesCmd {
    /// Write the pinned corpus into a directory.
    Install { dir: PathBuf },
}

fn run(cli: Cli) -> Result<Outcome, String> {
    use commands as c;
    match cli.command {
        Command::Code(cmd) => match cmd {
            CodeCmd::Validate { file } => c::code_validate(&file),
            CodeCmd::Maximal { file } => c::code_maximal(&file),
            CodeCmd::ParseTree { file, exhaustive, count } => c::code_parse_tree(&file, exhaustive, count),
            CodeCmd::Restrict { file, at, axis } => c::code_restrict(&file, &at, axis, false),
            CodeCmd::Extend { file, at, axis } => c::code_restrict(&file, &at, axis, true),
            CodeCmd::Join { a, b } => c::code_join(&a, &b),
            CodeCmd::ToUniform { file } => c::code_to_uniform(&file),
            CodeCmd::Dag { file } => c::code_dag(&file),
            CodeCmd::TilingSvg { file, output, size } => c::code_tiling(&file, &output, size),
        },
        Command::Table(cmd) => match cmd {
            TableCmd::Validate { file } => c::table_validate(&file),
            TableCmd::Apply { file, at } => c::table_apply(&file, &at),
            TableCmd::Invert { file } => c::table_invert(&file),
            TableCmd::Compose { f2, f1 } => c::table_compose(&f2, &f1),
            TableCmd::Equiv { a, b } => c::table_equiv(&a, &b),
            TableCmd::Extensions { file } => c::table_extensions(&file),
        },
        Command::Word(cmd) => match cmd {
            WordCmd::Eval { file, reg, at } => c::word_eval(&file, reg.registry.as_deref(), at.as_deref()),
            WordCmd::Identity { file, reg, mode } => {
                c::word_identity(&file, reg.registry.as_deref(), matches!(mode, WordMode::Exhaustive))
            }
            WordCmd::Encode { file, reg } => c::word_encode(&file, reg.registry.as_deref()),
            WordCmd::Decode { file, reg } => c::word_decode(&file, reg.registry.as_deref()),
            WordCmd::Embed { file, reg } => c::word_embed(&file, reg.registry.as_deref()),
        },
        Command::Circuit(cmd) => match cmd {
            CircuitCmd::Eval { file, input } => c::circuit_eval(&file, input.as_deref()),
            CircuitCmd::Size { file } => c::circuit_size(&file),
            CircuitCmd::Strictify { file } => c::circuit_strictify(&file),
            CircuitCmd::Slices { file } => c::circuit_slices(&file),
        },
        Command::Compile { circuit, output, trace, verify } => {
            c::compile(&circuit, output.as_deref(), trace.as_deref(), verify)
        }
        Command::Equiv { c1, c2, mode, emit_instances } => {
            let mode = match mode {
                EquivMode::Group => nv_core::EquivalenceMode::Group,
                EquivMode::Truthtable => nv_core::EquivalenceMode::TruthTable,
                EquivMode::Jordan => nv_core::EquivalenceMode::Jordan,
            };
            c::equiv(&c1, &c2, mode, emit_instances.as_deref())
        }
        Command::Fixtures(FixturesCmd::Install { dir }) => c::fixtures_install(&dir),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("nv: {e}");
            return ExitCode::from(2);
        }
    }
    let json = cli.json;
    match run(cli) {
        Ok(outcome) => outcome.emit(json),
        Err(msg) => output::fail(&msg, json),
    }
}
