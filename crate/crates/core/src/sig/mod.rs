//! Hash-and-sign signatures: `s = H(m, r)`, `e = SampPre(s)`, and the
//! verification `e·H_pkᵀ = H(m, r)`, `|e| = w`.

mod wire;

pub use wire::{
    decode_public_key, decode_secret_key, decode_signature, encode_public_key, encode_secret_key, encode_signature,
    public_key_len, secret_key_table_digest, signature_len, PK_MAGIC, SIG_MAGIC, SK_MAGIC, WIRE_VERSION,
};

use crate::error::Result;
use crate::f3::{byte_to_trits, TritVec};
use crate::trapdoor::{samp_pre, DecodeStats, DecoderOptions, PublicKey, SecretKey};
use rand::Rng;
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

/// Domain separation tag of the message hash.
pub const DOMAIN_TAG: &[u8] = b"WAVE-SIG-v1";

/// A signature `(r, e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    /// `⌈λ₀/8⌉` bytes; bits above `λ₀` in the last byte are zero.
    pub salt: Vec<u8>,
    pub e: TritVec,
}

/// Number of salt bytes for `λ₀` bits.
pub fn salt_len(lambda0: u32) -> usize {
    (lambda0 as usize).div_ceil(8)
}

/// Zeroes the bits above `λ₀` in `salt`.
pub(crate) fn mask_salt(salt: &mut [u8], lambda0: u32) {
    let extra = salt.len() * 8 - lambda0 as usize;
    if extra > 0 {
        if let Some(last) = salt.last_mut() {
            *last &= 0xff >> extra;
        }
    }
}

/// Trits from an XOF byte stream: bytes above 242 are skipped, each other
/// byte gives its five base-3 digits, least significant first.
pub fn trits_from_bytes(bytes: impl IntoIterator<Item = u8>, outlen: usize) -> Option<TritVec> {
    let mut out = Vec::with_capacity(outlen + 5);
    for b in bytes {
        if out.len() >= outlen {
            break;
        }
        if let Some(t) = byte_to_trits(b) {
            out.extend_from_slice(&t);
        }
    }
    if out.len() < outlen {
        return None;
    }
    out.truncate(outlen);
    Some(TritVec::from_trits(&out))
}

/// `H(m, r) ∈ F3^outlen` from SHAKE256 over `tag ‖ len(m) ‖ m ‖ r`, with
/// `len(m)` as a little-endian `u64`.
pub fn hash_to_syndrome(message: &[u8], salt: &[u8], outlen: usize) -> TritVec {
    let mut h = Shake256::default();
    h.update(DOMAIN_TAG);
    h.update(&(message.len() as u64).to_le_bytes());
    h.update(message);
    h.update(salt);
    let mut reader = h.finalize_xof();
    let stream = std::iter::from_fn(move || {
        let mut b = [0u8; 1];
        reader.read(&mut b);
        Some(b[0])
    });
    trits_from_bytes(stream, outlen).expect("an unbounded stream always fills the output")
}

/// Signs `message` with a fresh salt.
pub fn sign<R: Rng + ?Sized>(sk: &SecretKey, message: &[u8], rng: &mut R) -> Result<Signature> {
    let mut stats = DecodeStats::default();
    sign_with(sk, message, &DecoderOptions::default(), &mut stats, rng)
}

/// [`sign`] with explicit decoder options, accumulating counters in `stats`.
pub fn sign_with<R: Rng + ?Sized>(
    sk: &SecretKey,
    message: &[u8],
    opts: &DecoderOptions,
    stats: &mut DecodeStats,
    rng: &mut R,
) -> Result<Signature> {
    let p = sk.params();
    let mut salt = vec![0u8; salt_len(p.lambda0)];
    rng.fill_bytes(&mut salt);
    mask_salt(&mut salt, p.lambda0);
    let s = hash_to_syndrome(message, &salt, p.r());
    let e = samp_pre(sk, &s, opts, stats, rng)?;
    Ok(Signature { salt, e })
}

/// Whether `sig` is a valid signature of `message` under `pk`.
pub fn verify(pk: &PublicKey, message: &[u8], sig: &Signature) -> bool {
    let p = pk.params();
    if sig.e.len() != p.n || sig.salt.len() != salt_len(p.lambda0) || sig.e.weight() != p.w {
        return false;
    }
    let mut masked = sig.salt.clone();
    mask_salt(&mut masked, p.lambda0);
    if masked != sig.salt {
        return false;
    }
    let s = hash_to_syndrome(message, &sig.salt, p.r());
    pk.h_pk().syndrome(&sig.e).map(|x| x == s).unwrap_or(false)
}

/// [`verify`] on an encoded signature; malformed encodings are rejected.
pub fn verify_bytes(pk: &PublicKey, message: &[u8], sig: &[u8]) -> bool {
    match decode_signature(sig) {
        Ok((lambda0, sig)) => lambda0 == pk.params().lambda0 && verify(pk, message, &sig),
        Err(_) => false,
    }
}
