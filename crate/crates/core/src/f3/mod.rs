//! Arithmetic and dense linear algebra over the field with three elements.
//!
//! Vectors and matrices use a bitsliced two-plane layout: every 64 coordinates
//! are stored as a [`Limb`] holding one bit-plane for the value 1 and one for
//! the value 2. Addition, negation and the Hadamard product then act on 64
//! coordinates with a handful of word operations.

mod mat;
mod pack;
mod perm;
mod vec;

pub use mat::{Rref, TritMat};
pub use pack::{byte_to_trits, pack_trits, packed_len, unpack_trits};
pub use perm::Perm;
pub use vec::TritVec;

use crate::error::{Result, WaveError};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An element of F3, stored as its canonical representative in `{0, 1, 2}`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Trit(u8);

impl Trit {
    pub const ZERO: Trit = Trit(0);
    pub const ONE: Trit = Trit(1);
    pub const TWO: Trit = Trit(2);

    /// All field elements in increasing order.
    pub const ALL: [Trit; 3] = [Trit(0), Trit(1), Trit(2)];

    /// Builds a trit from a value in `{0, 1, 2}`.
    pub fn new(value: u8) -> Result<Trit> {
        if value < 3 {
            Ok(Trit(value))
        } else {
            Err(WaveError::InvalidTrit(value))
        }
    }

    /// Reduces an arbitrary integer modulo 3.
    pub fn from_int(value: i64) -> Trit {
        Trit(value.rem_euclid(3) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// The representative in `{-1, 0, 1}`.
    pub fn centered(self) -> i8 {
        match self.0 {
            0 => 0,
            1 => 1,
            _ => -1,
        }
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(self) -> Result<Trit> {
        // 1·1 = 1 and 2·2 = 4 = 1, so every unit is its own inverse.
        if self.0 == 0 {
            Err(WaveError::DivisionByZero)
        } else {
            Ok(self)
        }
    }
}

impl fmt::Debug for Trit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Trit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Trit {
    type Output = Trit;
    fn add(self, rhs: Trit) -> Trit {
        Trit((self.0 + rhs.0) % 3)
    }
}

impl Sub for Trit {
    type Output = Trit;
    fn sub(self, rhs: Trit) -> Trit {
        Trit((self.0 + 3 - rhs.0) % 3)
    }
}

impl Mul for Trit {
    type Output = Trit;
    fn mul(self, rhs: Trit) -> Trit {
        Trit((self.0 * rhs.0) % 3)
    }
}

impl Neg for Trit {
    type Output = Trit;
    fn neg(self) -> Trit {
        Trit((3 - self.0) % 3)
    }
}

/// 64 coordinates in two-plane form: bit `j` of `p` is set when coordinate `j`
/// equals 1, bit `j` of `m` when it equals 2. Both bits set never occurs.
#[derive(Copy, Clone, PartialEq, Eq, Debug, Default, Hash)]
pub(crate) struct Limb {
    pub p: u64,
    pub m: u64,
}

impl Limb {
    pub const ZERO: Limb = Limb { p: 0, m: 0 };

    #[inline(always)]
    pub fn add(self, b: Limb) -> Limb {
        let t = (self.p | b.m) ^ (self.m | b.p);
        Limb {
            p: (self.m | b.m) ^ t,
            m: (self.p | b.p) ^ t,
        }
    }

    #[inline(always)]
    pub fn neg(self) -> Limb {
        Limb { p: self.m, m: self.p }
    }

    #[inline(always)]
    pub fn sub(self, b: Limb) -> Limb {
        self.add(b.neg())
    }

    #[inline(always)]
    pub fn mul(self, b: Limb) -> Limb {
        Limb {
            p: (self.p & b.p) | (self.m & b.m),
            m: (self.p & b.m) | (self.m & b.p),
        }
    }

    #[inline(always)]
    pub fn scale(self, c: Trit) -> Limb {
        match c.0 {
            0 => Limb::ZERO,
            1 => self,
            _ => self.neg(),
        }
    }

    #[inline(always)]
    pub fn nonzero(self) -> u64 {
        self.p | self.m
    }

    #[inline(always)]
    pub fn get(self, bit: usize) -> Trit {
        Trit((((self.p >> bit) & 1) | (((self.m >> bit) & 1) << 1)) as u8)
    }

    #[inline(always)]
    pub fn set(&mut self, bit: usize, t: Trit) {
        let mask = 1u64 << bit;
        self.p &= !mask;
        self.m &= !mask;
        match t.0 {
            1 => self.p |= mask,
            2 => self.m |= mask,
            _ => {}
        }
    }

    #[inline(always)]
    pub fn masked(self, mask: u64) -> Limb {
        Limb {
            p: self.p & mask,
            m: self.m & mask,
        }
    }
}

/// In-place `dst += c·src` over limb slices of equal length.
#[inline]
pub(crate) fn axpy(dst: &mut [Limb], src: &[Limb], c: Trit) {
    match c.0 {
        0 => {}
        1 => dst.iter_mut().zip(src).for_each(|(d, s)| *d = d.add(*s)),
        _ => dst.iter_mut().zip(src).for_each(|(d, s)| *d = d.sub(*s)),
    }
}

/// Dot product of two limb slices of equal length.
#[inline]
pub(crate) fn dot(a: &[Limb], b: &[Limb]) -> Trit {
    let mut plus = 0u64;
    let mut minus = 0u64;
    for (x, y) in a.iter().zip(b) {
        let z = x.mul(*y);
        plus += z.p.count_ones() as u64;
        minus += z.m.count_ones() as u64;
    }
    Trit(((plus + 2 * minus) % 3) as u8)
}

/// Number of limbs needed for `len` coordinates.
#[inline]
pub(crate) fn limbs_for(len: usize) -> usize {
    len.div_ceil(64)
}
