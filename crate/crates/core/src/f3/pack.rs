use super::{Trit, TritVec};
use crate::error::{Result, WaveError};

/// Number of bytes used to pack `len` trits.
pub fn packed_len(len: usize) -> usize {
    len.div_ceil(5)
}

/// Packs 5 trits per byte as `Σ t_i·3^i`, least significant trit first. The
/// final byte is padded with zero trits.
pub fn pack_trits(v: &TritVec) -> Vec<u8> {
    let mut out = Vec::with_capacity(packed_len(v.len()));
    for chunk in (0..v.len()).step_by(5) {
        let mut b = 0u8;
        for i in (chunk..(chunk + 5).min(v.len())).rev() {
            b = b * 3 + v.get(i).value();
        }
        out.push(b);
    }
    out
}

/// Decodes one byte into its five trits, or `None` when the byte exceeds 242.
pub fn byte_to_trits(mut b: u8) -> Option<[Trit; 5]> {
    if b > 242 {
        return None;
    }
    let mut t = [Trit::ZERO; 5];
    for slot in &mut t {
        *slot = Trit::from_int((b % 3) as i64);
        b /= 3;
    }
    Some(t)
}

/// Inverse of [`pack_trits`]. Requires exactly `packed_len(len)` bytes, every
/// byte at most 242, and zero padding trits.
pub fn unpack_trits(bytes: &[u8], len: usize) -> Result<TritVec> {
    if bytes.len() != packed_len(len) {
        return Err(WaveError::Decode(format!(
            "expected {} packed bytes for {len} trits, found {}",
            packed_len(len),
            bytes.len()
        )));
    }
    let mut v = TritVec::zeros(len);
    for (k, &b) in bytes.iter().enumerate() {
        let trits = byte_to_trits(b).ok_or_else(|| WaveError::Decode(format!("byte {b} exceeds 242 in trit data")))?;
        for (i, t) in trits.iter().enumerate() {
            let pos = 5 * k + i;
            if pos < len {
                v.set(pos, *t);
            } else if !t.is_zero() {
                return Err(WaveError::Decode("nonzero padding trit".into()));
            }
        }
    }
    Ok(v)
}
