//! Wave: a trapdoor preimage-sampleable function over F3 built from
//! generalized (U, U+V) codes, the hash-and-sign signature scheme on top of
//! it, and numerical tools for its rejection-sampling distributions and
//! security estimates.

pub mod dist;
pub mod error;
pub mod estimator;
pub mod f3;
pub mod params;
pub mod sig;
pub mod trapdoor;

pub use error::{Result, WaveError};
pub use f3::{Perm, Trit, TritMat, TritVec};
pub use params::{DPolicy, Params};
pub use sig::{hash_to_syndrome, sign, sign_with, verify, verify_bytes, Signature};
pub use trapdoor::{keygen, DecodeStats, DecoderOptions, PublicKey, SecretKey, UVMap};
