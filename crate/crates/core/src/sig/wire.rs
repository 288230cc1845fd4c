//! Bit-exact encodings. All integers are little-endian; trit sections are
//! packed five trits per byte, least significant trit first, and a matrix is
//! packed as the concatenation of its rows.

use super::{mask_salt, salt_len, Signature};
use crate::dist::RejectionTables;
use crate::error::{Result, WaveError};
use crate::f3::{byte_to_trits, pack_trits, packed_len, unpack_trits, Perm, TritMat, TritVec};
use crate::params::Params;
use crate::trapdoor::{PublicKey, SecretKey, UVMap};
use std::sync::Arc;

pub const SIG_MAGIC: &[u8; 8] = b"WAVESIG1";
pub const PK_MAGIC: &[u8; 8] = b"WAVEPUB1";
pub const SK_MAGIC: &[u8; 8] = b"WAVESEC1";
pub const WIRE_VERSION: u16 = 1;

fn err(m: impl Into<String>) -> WaveError {
    WaveError::Decode(m.into())
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| err("truncated input"))?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn header(&mut self, magic: &[u8; 8]) -> Result<()> {
        if self.take(8)? != magic {
            return Err(err("bad magic"));
        }
        let v = self.u16()?;
        if v != WIRE_VERSION {
            return Err(err(format!("unsupported version {v}")));
        }
        Ok(())
    }

    fn params(&mut self) -> Result<Params> {
        let len = self.u32()? as usize;
        let text = std::str::from_utf8(self.take(len)?).map_err(|_| err("parameter block is not UTF-8"))?;
        let p = Params::from_text(text).map_err(|e| err(format!("parameter block: {e}")))?;
        p.validate().map_err(|e| err(format!("parameter block: {e}")))?;
        Ok(p)
    }

    fn trits(&mut self, len: usize) -> Result<TritVec> {
        unpack_trits(self.take(packed_len(len))?, len)
    }

    fn matrix(&mut self, rows: usize, cols: usize) -> Result<TritMat> {
        let bytes = self.take(packed_len(rows * cols))?;
        unpack_matrix(bytes, rows, cols)
    }

    fn finish(self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(err("trailing bytes"));
        }
        Ok(())
    }
}

fn put_header(out: &mut Vec<u8>, magic: &[u8; 8]) {
    out.extend_from_slice(magic);
    out.extend_from_slice(&WIRE_VERSION.to_le_bytes());
}

fn put_params(out: &mut Vec<u8>, p: &Params) {
    let text = p.to_text();
    out.extend_from_slice(&(text.len() as u32).to_le_bytes());
    out.extend_from_slice(text.as_bytes());
}

/// Packs the entries of `mat` with columns `col_lo..` in row-major order.
fn pack_matrix(mat: &TritMat, col_lo: usize) -> Vec<u8> {
    let cols = mat.cols() - col_lo;
    let total = mat.rows() * cols;
    let mut out = Vec::with_capacity(packed_len(total));
    let (mut acc, mut pow, mut count) = (0u8, 1u8, 0usize);
    for i in 0..mat.rows() {
        let row = mat.row(i);
        for j in col_lo..mat.cols() {
            acc += row.get(j).value() * pow;
            count += 1;
            if count == 5 {
                out.push(acc);
                (acc, pow, count) = (0, 1, 0);
            } else {
                pow *= 3;
            }
        }
    }
    if count > 0 {
        out.push(acc);
    }
    out
}

fn unpack_matrix(bytes: &[u8], rows: usize, cols: usize) -> Result<TritMat> {
    let total = rows * cols;
    if bytes.len() != packed_len(total) {
        return Err(err("matrix section has the wrong length"));
    }
    let mut mat = TritMat::zeros(rows, cols);
    for (k, &b) in bytes.iter().enumerate() {
        let t = byte_to_trits(b).ok_or_else(|| err(format!("byte {b} exceeds 242 in trit data")))?;
        for (i, &v) in t.iter().enumerate() {
            let pos = 5 * k + i;
            if pos < total {
                if !v.is_zero() {
                    mat.set(pos / cols, pos % cols, v);
                }
            } else if !v.is_zero() {
                return Err(err("nonzero padding trit"));
            }
        }
    }
    Ok(mat)
}

/// Length of an encoded signature.
pub fn signature_len(n: usize, lambda0: u32) -> usize {
    8 + 2 + 4 + 4 + salt_len(lambda0) + packed_len(n)
}

/// `"WAVESIG1" ‖ u16 version ‖ u32 n ‖ u32 λ₀ ‖ salt ‖ packed e`.
pub fn encode_signature(sig: &Signature, lambda0: u32) -> Vec<u8> {
    let mut out = Vec::with_capacity(signature_len(sig.e.len(), lambda0));
    put_header(&mut out, SIG_MAGIC);
    out.extend_from_slice(&(sig.e.len() as u32).to_le_bytes());
    out.extend_from_slice(&lambda0.to_le_bytes());
    out.extend_from_slice(&sig.salt);
    out.extend_from_slice(&pack_trits(&sig.e));
    out
}

/// Decodes a signature, returning `λ₀` with it.
pub fn decode_signature(bytes: &[u8]) -> Result<(u32, Signature)> {
    let mut r = Reader::new(bytes);
    r.header(SIG_MAGIC)?;
    let n = r.u32()? as usize;
    let lambda0 = r.u32()?;
    if lambda0 == 0 || lambda0 > 1 << 16 || n > 1 << 24 {
        return Err(err("implausible signature header"));
    }
    let salt = r.take(salt_len(lambda0))?.to_vec();
    let mut masked = salt.clone();
    mask_salt(&mut masked, lambda0);
    if masked != salt {
        return Err(err("salt has bits beyond lambda0"));
    }
    let e = r.trits(n)?;
    r.finish()?;
    Ok((lambda0, Signature { salt, e }))
}

/// Length of an encoded public key.
pub fn public_key_len(p: &Params) -> usize {
    8 + 2 + 4 + p.to_text().len() + packed_len(p.r() * p.k())
}

/// `"WAVEPUB1" ‖ u16 version ‖ u32 len ‖ params ‖ packed R` where
/// `H_pk = [I | R]`.
pub fn encode_public_key(pk: &PublicKey) -> Vec<u8> {
    let mut out = Vec::new();
    put_header(&mut out, PK_MAGIC);
    put_params(&mut out, pk.params());
    out.extend_from_slice(&pack_matrix(pk.h_pk(), pk.params().r()));
    out
}

pub fn decode_public_key(bytes: &[u8]) -> Result<PublicKey> {
    let mut r = Reader::new(bytes);
    r.header(PK_MAGIC)?;
    let p = r.params()?;
    let (rows, k) = (p.r(), p.k());
    let red = r.matrix(rows, k)?;
    r.finish()?;
    let ident = TritMat::identity(rows);
    PublicKey::new(p, ident.hstack(&red)?)
}

/// `"WAVESEC1" ‖ u16 version ‖ u32 len ‖ params ‖ SHA3-256 of the table
/// blob ‖ a ‖ b ‖ c ‖ d ‖ H_U ‖ H_V ‖ S⁻¹ ‖ P as u32 images`.
pub fn encode_secret_key(sk: &SecretKey, table_digest: &[u8; 32]) -> Vec<u8> {
    let mut out = Vec::new();
    put_header(&mut out, SK_MAGIC);
    put_params(&mut out, sk.params());
    out.extend_from_slice(table_digest);
    let phi = sk.phi();
    for v in [phi.a(), phi.b(), phi.c(), phi.d()] {
        out.extend_from_slice(&pack_trits(v));
    }
    out.extend_from_slice(&pack_matrix(sk.h_u().h(), 0));
    out.extend_from_slice(&pack_matrix(sk.h_v().h(), 0));
    out.extend_from_slice(&pack_matrix(sk.s_inv(), 0));
    for &j in sk.perm().map() {
        out.extend_from_slice(&(j as u32).to_le_bytes());
    }
    out
}

/// The table digest recorded in an encoded secret key.
pub fn secret_key_table_digest(bytes: &[u8]) -> Result<[u8; 32]> {
    let mut r = Reader::new(bytes);
    r.header(SK_MAGIC)?;
    r.params()?;
    Ok(r.take(32)?.try_into().unwrap())
}

/// Decodes a secret key. `tables` must hash to the digest stored in the key
/// (compare with [`crate::dist::digest_blob`] of the blob it was read from).
pub fn decode_secret_key(bytes: &[u8], tables: Arc<RejectionTables>, table_digest: &[u8; 32]) -> Result<SecretKey> {
    let mut r = Reader::new(bytes);
    r.header(SK_MAGIC)?;
    let p = r.params()?;
    let stored: [u8; 32] = r.take(32)?.try_into().unwrap();
    if &stored != table_digest {
        return Err(WaveError::TableMismatch(
            "table blob hash differs from the one recorded in the key".into(),
        ));
    }
    let m = p.n / 2;
    let mut parts = Vec::with_capacity(4);
    for _ in 0..4 {
        parts.push(r.trits(m)?);
    }
    let d = parts.pop().unwrap();
    let c = parts.pop().unwrap();
    let b = parts.pop().unwrap();
    let a = parts.pop().unwrap();
    let phi = UVMap::new(a, b, c, d).map_err(|e| err(format!("UV map: {e}")))?;
    let h_u = r.matrix(m - p.k_u, m)?;
    let h_v = r.matrix(m - p.k_v, m)?;
    let s_inv = r.matrix(p.r(), p.r())?;
    let mut map = Vec::with_capacity(p.n);
    for _ in 0..p.n {
        map.push(r.u32()? as usize);
    }
    r.finish()?;
    let perm = Perm::from_map(map).map_err(|_| err("permutation section is not a bijection"))?;
    SecretKey::from_parts(p, phi, h_u, h_v, s_inv, perm, tables)
}
