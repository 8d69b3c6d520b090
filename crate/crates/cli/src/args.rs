use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug, Clone)]
#[command(name = "laplaza", version)]
#[command(about = "Free theories, coherence checking, strictification and worldsheet gluing")]
pub struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Seed for every randomized check
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,

    /// Worker threads for the exhaustive sweeps
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Args, Debug, Clone)]
pub struct TheoryArgs {
    /// Signature: `cmon`, `csr`, or a file of `symbol arity` lines
    #[arg(long)]
    pub sig: String,

    /// Number of variables; inferred from the largest index when omitted
    #[arg(long)]
    pub arity: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// Laplaza collection: full, operadic or laplaza-semiring
    #[arg(long)]
    pub laplaza: String,

    /// Largest object a search may visit, in nodes
    #[arg(long, default_value_t = 10)]
    pub size_cap: usize,

    /// Longest path a search may build
    #[arg(long, default_value_t = 12)]
    pub depth: usize,

    /// States explored before giving up
    #[arg(long, default_value_t = 20_000)]
    pub states: usize,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Prints the normal form of a word
    Normalize {
        #[command(flatten)]
        theory: TheoryArgs,
        /// Word in prefix form, e.g. `(plus x1 (zero))`
        term: String,
    },
    /// Exits 0 when the word projects into the Laplaza collection, 1 otherwise
    LaplazaCheck {
        #[command(flatten)]
        theory: TheoryArgs,
        /// Laplaza collection: full, operadic or laplaza-semiring
        #[arg(long)]
        laplaza: String,
        term: String,
    },
    /// Searches for a coherence path between two objects
    CoherenceExists {
        #[command(flatten)]
        theory: TheoryArgs,
        #[command(flatten)]
        search: SearchArgs,
        source: String,
        target: String,
    },
    /// Decides whether two parallel coherence paths are equal
    CoherenceEqual {
        /// Signature: `cmon`, `csr`, or a file of `symbol arity` lines
        #[arg(long, required_unless_present = "replay")]
        sig: Option<String>,
        /// Number of variables; inferred from the largest index when omitted
        #[arg(long)]
        arity: Option<usize>,
        /// Laplaza collection: full, operadic or laplaza-semiring
        #[arg(long, required_unless_present = "replay")]
        laplaza: Option<String>,
        /// Largest object a search may visit, in nodes
        #[arg(long, default_value_t = 10)]
        size_cap: usize,
        /// Longest path a search may build
        #[arg(long, default_value_t = 12)]
        depth: usize,
        /// States explored before giving up
        #[arg(long, default_value_t = 20_000)]
        states: usize,
        /// Common source object
        #[arg(required_unless_present = "replay")]
        source: Option<String>,
        /// JSON list of steps for the first path (default: no steps)
        #[arg(long)]
        left: Option<PathBuf>,
        /// JSON list of steps for the second path (default: no steps)
        #[arg(long)]
        right: Option<PathBuf>,
        /// Re-checks a certificate printed by an earlier run, without search
        #[arg(long, conflicts_with_all = ["sig", "laplaza", "source", "left", "right"])]
        replay: Option<PathBuf>,
    },
    /// Evaluates the strand or monomial model on a path
    ModelEval {
        #[command(flatten)]
        theory: TheoryArgs,
        /// Laplaza collection: full, operadic or laplaza-semiring
        #[arg(long)]
        laplaza: String,
        /// JSON list of steps
        #[arg(long)]
        path: PathBuf,
        source: String,
    },
    /// Builds the strict algebra equivalent to a finite symmetric monoidal category
    Strictify {
        /// JSON category description
        #[arg(required_unless_present = "fixture")]
        file: Option<PathBuf>,
        /// Use a built-in category instead of a file
        #[arg(long, conflicts_with = "file")]
        fixture: Option<String>,
        /// Longest formal sum kept in the strict algebra
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        /// Order of the non-unit isomorphism classes, comma separated
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
    },
    /// Prints the normal form of a word of the cancellation 2-operad
    TwoNormalize {
        /// Number of base variables; inferred when omitted
        #[arg(long)]
        arity: Option<usize>,
        term: String,
    },
    /// Exits 0 when two words of the cancellation 2-operad are equal
    TwoEqual {
        /// Number of base variables; inferred when omitted
        #[arg(long)]
        arity: Option<usize>,
        /// Also run the bounded axiom-rewriting search to this depth
        #[arg(long)]
        oracle_depth: Option<usize>,
        left: String,
        right: String,
    },
    /// Glues inbound circles of a worldsheet to outbound circles with the same label
    Glue {
        /// JSON worldsheet {inbound, outbound, components: [{in, out, genus}]}
        file: PathBuf,
        /// Labels to glue, comma separated
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        labels: Vec<String>,
    },
    /// Certifies that the swap of a repeated summand is forced to be the identity
    Gould,
    /// Runs the acceptance checks
    Selftest {
        /// Smaller instances, finishing in seconds
        #[arg(long)]
        quick: bool,
    },
    /// Prints the JSON schema of a subcommand's output
    Schema {
        /// Subcommand name; all schemas when omitted
        command: Option<String>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Normalize { .. } => "normalize",
            Command::LaplazaCheck { .. } => "laplaza-check",
            Command::CoherenceExists { .. } => "coherence-exists",
            Command::CoherenceEqual { .. } => "coherence-equal",
            Command::ModelEval { .. } => "model-eval",
            Command::Strictify { .. } => "strictify",
            Command::TwoNormalize { .. } => "two-normalize",
            Command::TwoEqual { .. } => "two-equal",
            Command::Glue { .. } => "glue",
            Command::Gould => "gould",
            Command::Selftest { .. } => "selftest",
            Command::Schema { .. } => "schema",
        }
    }
}
