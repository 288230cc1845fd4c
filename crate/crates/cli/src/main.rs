mod args;
mod commands;
mod report;
mod selftest;

use anyhow::{bail, Context, Result};
use args::{Cli, Command, ParamsSource};
use clap::Parser;
use rand::rngs::OsRng;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;
use report::Report;
use std::path::Path;
use std::process::ExitCode;
use wave_core::Params;

/// Outcome of a command that ran to completion.
pub enum Outcome {
    Ok(Report),
    /// The report is printed and the process exits with status 1.
    Rejected(Report),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    let mut rng = make_rng(&cli);
    let result = match &cli.command {
        Command::Params(a) => commands::params(a),
        Command::Tables(a) => commands::tables(a),
        Command::Keygen(a) => commands::keygen(a, rng.as_mut()),
        Command::Sign(a) => commands::sign(a, rng.as_mut()),
        Command::Verify(a) => commands::verify(a),
        Command::Estimate(a) => commands::estimate(a),
        Command::Selftest(a) => selftest::run(a, rng.as_mut()),
    };
    match result {
        Ok(Outcome::Ok(r)) => {
            print!("{}", r.render(cli.json));
            ExitCode::SUCCESS
        }
        Ok(Outcome::Rejected(r)) => {
            print!("{}", r.render(cli.json));
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

/// Sizes the global thread pool from `WAVE_THREADS` when it is set.
fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("WAVE_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .with_context(|| format!("WAVE_THREADS={v:?} is not a count"))?;
    if n == 0 {
        bail!("WAVE_THREADS must be positive");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn make_rng(cli: &Cli) -> Box<dyn RngCore> {
    match (cli.insecure_deterministic, cli.seed) {
        (true, Some(seed)) => {
            eprintln!("warning: deterministic randomness; keys and signatures are not secure");
            Box::new(ChaCha20Rng::seed_from_u64(seed))
        }
        _ => Box::new(OsRng),
    }
}

pub fn load_params(src: &ParamsSource) -> Result<Params> {
    if let Some(name) = &src.preset {
        return preset(name);
    }
    let path = src.params.as_ref().expect("clap requires one source");
    let text = read(path)?;
    let text = String::from_utf8(text).with_context(|| format!("{} is not UTF-8", path.display()))?;
    let p = Params::from_text(&text).with_context(|| format!("parsing {}", path.display()))?;
    p.validate()?;
    Ok(p)
}

pub fn preset(name: &str) -> Result<Params> {
    match name {
        "wave128" => Ok(Params::wave128()),
        _ => bail!("unknown preset {name:?} (known: wave128)"),
    }
}

pub fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("reading {}", path.display()))
}

pub fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Loads a secret key and its table blob, comparing the blob's hash with the
/// one recorded in the key before parsing it.
pub fn load_secret_key(sk: &Path, tables: &Path) -> Result<wave_core::SecretKey> {
    let sk_bytes = read(sk)?;
    let blob = read(tables)?;
    let recorded =
        wave_core::sig::secret_key_table_digest(&sk_bytes).with_context(|| format!("loading {}", sk.display()))?;
    let digest = wave_core::dist::digest_blob(&blob);
    if recorded != digest {
        bail!(
            "table hash mismatch: {} hashes to {}, the key expects {}",
            tables.display(),
            hex(&digest),
            hex(&recorded)
        );
    }
    let t = wave_core::dist::RejectionTables::import(&blob).with_context(|| format!("loading {}", tables.display()))?;
    let key = wave_core::sig::decode_secret_key(&sk_bytes, std::sync::Arc::new(t), &digest)
        .with_context(|| format!("loading {}", sk.display()))?;
    Ok(key)
}

pub fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
