//! Normalized generalized (U, U+V) codes, key generation and the
//! rejection-sampled preimage sampler.
//!
//! The decoders draw the free set `J` exactly as described for `FreeSet` and
//! `FreeSetW`, but complete the information set from the pivots of a single
//! elimination of `[H_{¬J} | s']` instead of drawing `J'` by rejection. For a
//! good `J` the trits on `J'` are uniform and the solution is unique given
//! them, so the completed vector is uniform over the solutions with the
//! prescribed values on `J` whichever valid `J'` is used; the output law is
//! the same as with a uniformly drawn `J'`. [`free_set`] and [`free_set_w`]
//! keep the literal two-stage procedure.

mod decode;
mod keys;
mod prange;
mod uv;

pub use decode::{decode_u, decode_uv, decode_v, samp_pre, DecodeStats, DecoderOptions};
pub use keys::{keygen, keygen_with, PublicKey, SecretKey, KEYGEN_BUDGET};
pub use prange::{free_set, free_set_w, info_set, prange_one, prange_step, HalfCode};
pub use uv::{build_parity_check, m1, UVMap, UV_TUPLES};
