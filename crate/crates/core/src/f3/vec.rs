use super::{axpy, dot, limbs_for, Limb, Trit};
use crate::error::{Result, WaveError};
use rand::Rng;
use std::fmt;

/// A vector over F3 of fixed length.
///
/// Unused high bits of the last limb are always zero, so limb-wise equality and
/// population counts are exact.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TritVec {
    len: usize,
    limbs: Vec<Limb>,
}

impl TritVec {
    pub fn zeros(len: usize) -> TritVec {
        TritVec {
            len,
            limbs: vec![Limb::ZERO; limbs_for(len)],
        }
    }

    /// Builds a vector from values in `{0, 1, 2}`.
    pub fn from_values(values: &[u8]) -> Result<TritVec> {
        let mut v = TritVec::zeros(values.len());
        for (i, &x) in values.iter().enumerate() {
            v.set(i, Trit::new(x)?);
        }
        Ok(v)
    }

    pub fn from_trits(trits: &[Trit]) -> TritVec {
        let mut v = TritVec::zeros(trits.len());
        for (i, &t) in trits.iter().enumerate() {
            v.set(i, t);
        }
        v
    }

    /// Uniformly random vector.
    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> TritVec {
        let mut v = TritVec::zeros(len);
        for i in 0..len {
            v.set(i, Trit::ALL[rng.gen_range(0..3)]);
        }
        v
    }

    /// The all-ones vector.
    pub fn ones(len: usize) -> TritVec {
        let mut v = TritVec::zeros(len);
        for i in 0..len {
            v.set(i, Trit::ONE);
        }
        v
    }

    pub(crate) fn from_limbs(len: usize, limbs: Vec<Limb>) -> TritVec {
        debug_assert_eq!(limbs.len(), limbs_for(len));
        let mut v = TritVec { len, limbs };
        v.clear_tail();
        v
    }

    pub(crate) fn limbs(&self) -> &[Limb] {
        &self.limbs
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> Trit {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.limbs[i / 64].get(i % 64)
    }

    #[inline]
    pub fn set(&mut self, i: usize, t: Trit) {
        assert!(i < self.len, "index {i} out of range {}", self.len);
        self.limbs[i / 64].set(i % 64, t);
    }

    /// Number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.limbs.iter().map(|l| l.nonzero().count_ones() as usize).sum()
    }

    /// Indices of the nonzero coordinates, in increasing order.
    pub fn support(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (w, l) in self.limbs.iter().enumerate() {
            let mut bits = l.nonzero();
            while bits != 0 {
                out.push(w * 64 + bits.trailing_zeros() as usize);
                bits &= bits - 1;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|l| l.nonzero() == 0)
    }

    pub fn to_values(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i).value()).collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = Trit> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    fn check_len(&self, other: &TritVec) -> Result<()> {
        if self.len == other.len {
            Ok(())
        } else {
            Err(WaveError::Dimension(format!(
                "vector lengths {} and {}",
                self.len, other.len
            )))
        }
    }

    pub fn add(&self, other: &TritVec) -> Result<TritVec> {
        self.check_len(other)?;
        let mut out = self.clone();
        axpy(&mut out.limbs, &other.limbs, Trit::ONE);
        Ok(out)
    }

    pub fn sub(&self, other: &TritVec) -> Result<TritVec> {
        self.check_len(other)?;
        let mut out = self.clone();
        axpy(&mut out.limbs, &other.limbs, Trit::TWO);
        Ok(out)
    }

    /// In-place `self += c·other`.
    pub fn axpy(&mut self, c: Trit, other: &TritVec) -> Result<()> {
        self.check_len(other)?;
        axpy(&mut self.limbs, &other.limbs, c);
        Ok(())
    }

    pub fn neg(&self) -> TritVec {
        self.scale(Trit::TWO)
    }

    pub fn scale(&self, c: Trit) -> TritVec {
        TritVec {
            len: self.len,
            limbs: self.limbs.iter().map(|l| l.scale(c)).collect(),
        }
    }

    /// Component-wise product.
    pub fn hadamard(&self, other: &TritVec) -> Result<TritVec> {
        self.check_len(other)?;
        Ok(TritVec {
            len: self.len,
            limbs: self.limbs.iter().zip(&other.limbs).map(|(a, b)| a.mul(*b)).collect(),
        })
    }

    pub fn dot(&self, other: &TritVec) -> Result<Trit> {
        self.check_len(other)?;
        Ok(dot(&self.limbs, &other.limbs))
    }

    /// Concatenation `(self, other)`.
    pub fn concat(&self, other: &TritVec) -> TritVec {
        let mut out = TritVec::zeros(self.len + other.len);
        for i in 0..self.len {
            out.set(i, self.get(i));
        }
        for i in 0..other.len {
            out.set(self.len + i, other.get(i));
        }
        out
    }

    /// Coordinates `start..end` as a new vector.
    pub fn slice(&self, start: usize, end: usize) -> TritVec {
        assert!(start <= end && end <= self.len);
        let mut out = TritVec::zeros(end - start);
        for i in start..end {
            out.set(i - start, self.get(i));
        }
        out
    }

    /// Splits into `(self[..mid], self[mid..])`.
    pub fn split(&self, mid: usize) -> (TritVec, TritVec) {
        (self.slice(0, mid), self.slice(mid, self.len))
    }

    /// Restriction to the listed coordinates, in the listed order.
    pub fn select(&self, idx: &[usize]) -> TritVec {
        let mut out = TritVec::zeros(idx.len());
        for (j, &i) in idx.iter().enumerate() {
            out.set(j, self.get(i));
        }
        out
    }

    pub(crate) fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.limbs.last_mut() {
                *last = last.masked((1u64 << rem) - 1);
            }
        }
    }
}

impl fmt::Debug for TritVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TritVec[")?;
        for t in self.iter() {
            write!(f, "{}", t.value())?;
        }
        write!(f, "]")
    }
}
