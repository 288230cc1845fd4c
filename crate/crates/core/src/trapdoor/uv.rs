use crate::error::{Result, WaveError};
use crate::f3::{Trit, TritMat, TritVec};
use rand::Rng;

/// Every `(a, b, c, d) ∈ F3⁴` with `ad − bc = 1` and `ac ≠ 0`, as values.
pub const UV_TUPLES: [[u8; 4]; 12] = [
    [1, 0, 1, 1],
    [1, 0, 2, 1],
    [2, 0, 1, 2],
    [2, 0, 2, 2],
    [1, 1, 1, 2],
    [1, 2, 1, 0],
    [1, 1, 2, 0],
    [1, 2, 2, 2],
    [2, 1, 1, 1],
    [2, 1, 2, 0],
    [2, 2, 1, 0],
    [2, 2, 2, 1],
];

fn is_type_i(t: &[u8; 4]) -> bool {
    t[1] == 0 || t[3] == 0
}

/// The map `φ(x, y) = (a⊙x + b⊙y, c⊙x + d⊙y)` with `a_i d_i − b_i c_i = 1`
/// and `a_i c_i ≠ 0` for every `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UVMap {
    a: TritVec,
    b: TritVec,
    c: TritVec,
    d: TritVec,
}

impl UVMap {
    pub fn new(a: TritVec, b: TritVec, c: TritVec, d: TritVec) -> Result<UVMap> {
        let m = a.len();
        if b.len() != m || c.len() != m || d.len() != m {
            return Err(WaveError::Dimension("UV map vectors of different lengths".into()));
        }
        for i in 0..m {
            let (ai, bi, ci, di) = (a.get(i), b.get(i), c.get(i), d.get(i));
            if ai * di - bi * ci != Trit::ONE || (ai * ci).is_zero() {
                return Err(WaveError::InvalidParams(format!("UV map is not normalized at {i}")));
            }
        }
        Ok(UVMap { a, b, c, d })
    }

    /// `a = c = d = 1`, `b = 0`: the map `(x, y) ↦ (x, x + y)`.
    pub fn standard(half: usize) -> UVMap {
        UVMap {
            a: TritVec::ones(half),
            b: TritVec::zeros(half),
            c: TritVec::ones(half),
            d: TritVec::ones(half),
        }
    }

    /// Each block independently uniform over the 12 normalized tuples. A block
    /// is then of type I with probability 2/3.
    pub fn uniform<R: Rng + ?Sized>(half: usize, rng: &mut R) -> UVMap {
        Self::from_blocks((0..half).map(|_| UV_TUPLES[rng.gen_range(0..12)]))
    }

    /// Each block is of type I with probability `type_i_prob` and uniform
    /// over the tuples of its type.
    pub fn random<R: Rng + ?Sized>(half: usize, type_i_prob: f64, rng: &mut R) -> UVMap {
        let type_i: Vec<&[u8; 4]> = UV_TUPLES.iter().filter(|t| is_type_i(t)).collect();
        let type_ii: Vec<&[u8; 4]> = UV_TUPLES.iter().filter(|t| !is_type_i(t)).collect();
        Self::from_blocks((0..half).map(|_| {
            if rng.gen_bool(type_i_prob.clamp(0.0, 1.0)) {
                *type_i[rng.gen_range(0..type_i.len())]
            } else {
                *type_ii[rng.gen_range(0..type_ii.len())]
            }
        }))
    }

    fn from_blocks(blocks: impl Iterator<Item = [u8; 4]>) -> UVMap {
        let blocks: Vec<[u8; 4]> = blocks.collect();
        let col =
            |k: usize| TritVec::from_trits(&blocks.iter().map(|t| Trit::from_int(t[k] as i64)).collect::<Vec<_>>());
        UVMap {
            a: col(0),
            b: col(1),
            c: col(2),
            d: col(3),
        }
    }

    pub fn half_len(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &TritVec {
        &self.a
    }

    pub fn b(&self) -> &TritVec {
        &self.b
    }

    pub fn c(&self) -> &TritVec {
        &self.c
    }

    pub fn d(&self) -> &TritVec {
        &self.d
    }

    /// The tuple of block `i`.
    pub fn block(&self, i: usize) -> [Trit; 4] {
        [self.a.get(i), self.b.get(i), self.c.get(i), self.d.get(i)]
    }

    /// Number of blocks with `b_i d_i = 0`.
    pub fn n_i(&self) -> usize {
        let bd = self.b.hadamard(&self.d).expect("equal lengths");
        self.half_len() - bd.weight()
    }

    /// `φ(x, y)`.
    pub fn apply(&self, x: &TritVec, y: &TritVec) -> Result<TritVec> {
        let left = self.a.hadamard(x)?.add(&self.b.hadamard(y)?)?;
        let right = self.c.hadamard(x)?.add(&self.d.hadamard(y)?)?;
        Ok(left.concat(&right))
    }

    /// `φ⁻¹(e) = (d⊙x − b⊙y, −c⊙x + a⊙y)` for `e = (x, y)`.
    pub fn inverse(&self, e: &TritVec) -> Result<(TritVec, TritVec)> {
        if e.len() != 2 * self.half_len() {
            return Err(WaveError::Dimension(format!(
                "vector of length {} for a UV map of half length {}",
                e.len(),
                self.half_len()
            )));
        }
        let (x, y) = e.split(self.half_len());
        let u = self.d.hadamard(&x)?.sub(&self.b.hadamard(&y)?)?;
        let v = self.a.hadamard(&y)?.sub(&self.c.hadamard(&x)?)?;
        Ok((u, v))
    }
}

/// Number of `i < n/2` with exactly one of `e_i`, `e_{i+n/2}` nonzero.
pub fn m1(e: &TritVec) -> usize {
    let (x, y) = e.split(e.len() / 2);
    let both = x.hadamard(&y).expect("equal halves").weight();
    x.weight() + y.weight() - 2 * both
}

/// The parity-check matrix `[H_U·D | −H_U·B ; −H_V·C | H_V·A]` of `φ(U, V)`.
pub fn build_parity_check(phi: &UVMap, h_u: &TritMat, h_v: &TritMat) -> Result<TritMat> {
    let m = phi.half_len();
    if h_u.cols() != m || h_v.cols() != m {
        return Err(WaveError::Dimension(format!(
            "parity checks with {} and {} columns for half length {m}",
            h_u.cols(),
            h_v.cols()
        )));
    }
    let mut rows = Vec::with_capacity(h_u.rows() + h_v.rows());
    for i in 0..h_u.rows() {
        let r = h_u.row(i);
        rows.push(r.hadamard(phi.d())?.concat(&r.hadamard(phi.b())?.neg()));
    }
    for i in 0..h_v.rows() {
        let r = h_v.row(i);
        rows.push(r.hadamard(phi.c())?.neg().concat(&r.hadamard(phi.a())?));
    }
    TritMat::from_rows_with_cols(&rows, 2 * m)
}
