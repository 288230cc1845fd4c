//! Fixtures shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use wave_core::dist::RejectionTables;
use wave_core::params::derive;
use wave_core::{keygen, PublicKey, SecretKey};

/// A seeded generator for reproducible inputs.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A key pair for the parameters derived from `lambda`.
pub fn key_pair(lambda: u32, seed: u64) -> (PublicKey, SecretKey) {
    let p = derive(lambda).expect("derivable security level");
    let tables = RejectionTables::build(p.table_header(), p.tables).expect("tables build");
    keygen(&p, Arc::new(tables), &mut rng(seed)).expect("key generation")
}
