use clap::{ArgGroup, Args, Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "wave", version, about = "Code-based hash-and-sign signatures over F3")]
pub struct Cli {
    /// Print the report as a JSON object instead of key=value blocks.
    #[arg(long, global = true)]
    pub json: bool,

    /// Draw every random choice from a seeded stream. Keys and signatures
    /// become reproducible and therefore unsafe; for tests only.
    #[arg(long, global = true, requires = "seed")]
    pub insecure_deterministic: bool,

    /// Seed of the deterministic stream.
    #[arg(long, global = true, requires = "insecure_deterministic")]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derive a parameter set and print or write its canonical text form.
    Params(ParamsArgs),
    /// Build the rejection tables of a parameter set.
    Tables(TablesArgs),
    /// Generate a key pair.
    Keygen(KeygenArgs),
    /// Sign a message file.
    Sign(SignArgs),
    /// Verify a signature; exits with status 1 when it is invalid.
    Verify(VerifyArgs),
    /// Bias, key-attack and free-set reports for a parameter set.
    Estimate(EstimateArgs),
    /// Run the built-in small-length checks.
    Selftest(SelftestArgs),
}

/// Where a command reads its parameters from.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ParamsSource {
    /// Canonical parameter file.
    #[arg(long)]
    pub params: Option<PathBuf>,
    /// Named parameter set (`wave128`).
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["lambda", "n", "preset"])))]
pub struct ParamsArgs {
    /// Target security level in bits.
    #[arg(long)]
    pub lambda: Option<u32>,
    /// Block length; the other dimensions follow from the rate and alignment.
    #[arg(long)]
    pub n: Option<usize>,
    /// Named parameter set (`wave128`).
    #[arg(long)]
    pub preset: Option<String>,
    /// Code rate, with `--n`.
    #[arg(long, conflicts_with_all = ["lambda", "preset"])]
    pub rate: Option<f64>,
    /// Alignment fraction, with `--n`.
    #[arg(long, conflicts_with_all = ["lambda", "preset"])]
    pub alpha: Option<f64>,
    /// Free-set padding policy: `case-study` or `balanced`.
    #[arg(long, conflicts_with_all = ["d", "preset"])]
    pub d_policy: Option<String>,
    /// Explicit free-set padding, with `--n`.
    #[arg(long, conflicts_with_all = ["lambda", "preset"])]
    pub d: Option<usize>,
    /// Write the canonical text form here.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[command(flatten)]
    pub source: ParamsSource,
    /// Output blob.
    #[arg(long, short)]
    pub out: PathBuf,
    /// Also build the U rows of every weight `t` whose probability is within
    /// a factor 2^ROWS of the most likely one.
    #[arg(long, value_name = "ROWS")]
    pub rows: Option<f64>,
}

#[derive(Debug, Args)]
pub struct KeygenArgs {
    #[command(flatten)]
    pub source: ParamsSource,
    /// Writes PREFIX.pk, PREFIX.sk and, unless `--tables` is given, PREFIX.tables.
    #[arg(long, short)]
    pub out: PathBuf,
    /// Existing table blob for the same parameters.
    #[arg(long)]
    pub tables: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SignArgs {
    #[arg(long)]
    pub sk: PathBuf,
    /// Table blob; defaults to the secret key path with extension `tables`.
    #[arg(long)]
    pub tables: Option<PathBuf>,
    #[arg(long)]
    pub message: PathBuf,
    #[arg(long, short)]
    pub out: PathBuf,
    /// Report decoder counters.
    #[arg(long)]
    pub stats: bool,
    /// Number of signatures to produce, each with a fresh salt. The first is
    /// written to `--out`; the counters cover all of them.
    #[arg(long, default_value_t = 1)]
    pub count: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub pk: PathBuf,
    #[arg(long)]
    pub message: PathBuf,
    #[arg(long)]
    pub sig: PathBuf,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub source: ParamsSource,
    /// Number of type-I blocks; defaults to the parameter set's target.
    #[arg(long)]
    pub n_i: Option<usize>,
    /// Relative dimensions `K,KU` for the asymptotic exponent; defaults to
    /// those of the parameter set.
    #[arg(long, value_name = "K,KU", value_delimiter = ',')]
    pub asymptotic_at: Option<Vec<f64>>,
    /// Skip the finite-length attack grid.
    #[arg(long)]
    pub no_finite: bool,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Also check that this secret key matches `--tables`.
    #[arg(long, requires = "tables")]
    pub sk: Option<PathBuf>,
    #[arg(long, requires = "sk")]
    pub tables: Option<PathBuf>,
}
