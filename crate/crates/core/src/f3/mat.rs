use super::{axpy, dot, limbs_for, Limb, Trit, TritVec};
use crate::error::{Result, WaveError};
use rand::Rng;
use rayon::prelude::*;
use std::fmt;

/// Work size (in limb operations) above which row operations run in parallel.
const PAR_LIMBS: usize = 1 << 16;

/// A dense row-major matrix over F3.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct TritMat {
    rows: usize,
    cols: usize,
    wpr: usize,
    data: Vec<Limb>,
}

/// Result of a reduction to row echelon form.
#[derive(Clone, Debug)]
pub struct Rref {
    /// The reduced matrix: every pivot is 1 and is the only nonzero entry of
    /// its column.
    pub mat: TritMat,
    pub rank: usize,
    /// Pivot column of each of the first `rank` rows, increasing.
    pub pivots: Vec<usize>,
}

impl TritMat {
    pub fn zeros(rows: usize, cols: usize) -> TritMat {
        let wpr = limbs_for(cols);
        TritMat {
            rows,
            cols,
            wpr,
            data: vec![Limb::ZERO; rows * wpr],
        }
    }

    pub fn identity(n: usize) -> TritMat {
        let mut m = TritMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Trit::ONE);
        }
        m
    }

    /// Diagonal matrix with the given entries.
    pub fn diag(v: &TritVec) -> TritMat {
        let mut m = TritMat::zeros(v.len(), v.len());
        for i in 0..v.len() {
            m.set(i, i, v.get(i));
        }
        m
    }

    /// Uniformly random matrix.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> TritMat {
        let mut m = TritMat::zeros(rows, cols);
        for i in 0..rows {
            let row = TritVec::random(cols, rng);
            m.row_limbs_mut(i).copy_from_slice(row.limbs());
        }
        m
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows(rows: &[TritVec]) -> Result<TritMat> {
        let cols = rows.first().map_or(0, |r| r.len());
        TritMat::from_rows_with_cols(rows, cols)
    }

    /// Like [`TritMat::from_rows`] but with an explicit column count, so that
    /// an empty row list still has a width.
    pub fn from_rows_with_cols(rows: &[TritVec], cols: usize) -> Result<TritMat> {
        let mut m = TritMat::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(WaveError::Dimension(format!(
                    "row {i} has length {} instead of {cols}",
                    r.len()
                )));
            }
            m.row_limbs_mut(i).copy_from_slice(r.limbs());
        }
        Ok(m)
    }

    /// Builds a matrix from row-major values in `{0, 1, 2}`.
    pub fn from_values(rows: usize, cols: usize, values: &[u8]) -> Result<TritMat> {
        if values.len() != rows * cols {
            return Err(WaveError::Dimension(format!(
                "{} values for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        let mut m = TritMat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, Trit::new(values[i * cols + j])?);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Trit {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.wpr + j / 64].get(j % 64)
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, t: Trit) {
        assert!(i < self.rows && j < self.cols);
        self.data[i * self.wpr + j / 64].set(j % 64, t);
    }

    pub(crate) fn row_limbs(&self, i: usize) -> &[Limb] {
        &self.data[i * self.wpr..(i + 1) * self.wpr]
    }

    pub(crate) fn row_limbs_mut(&mut self, i: usize) -> &mut [Limb] {
        &mut self.data[i * self.wpr..(i + 1) * self.wpr]
    }

    pub fn row(&self, i: usize) -> TritVec {
        TritVec::from_limbs(self.cols, self.row_limbs(i).to_vec())
    }

    pub fn set_row(&mut self, i: usize, v: &TritVec) -> Result<()> {
        if v.len() != self.cols {
            return Err(WaveError::Dimension(format!(
                "row of length {} into a matrix with {} columns",
                v.len(),
                self.cols
            )));
        }
        self.row_limbs_mut(i).copy_from_slice(v.limbs());
        Ok(())
    }

    pub fn column(&self, j: usize) -> TritVec {
        let mut v = TritVec::zeros(self.rows);
        for i in 0..self.rows {
            v.set(i, self.get(i, j));
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|l| l.nonzero() == 0)
    }

    /// `e·Mᵀ`, i.e. the syndrome of `e` when `self` is a parity-check matrix.
    pub fn syndrome(&self, e: &TritVec) -> Result<TritVec> {
        if e.len() != self.cols {
            return Err(WaveError::Dimension(format!(
                "vector of length {} against {} columns",
                e.len(),
                self.cols
            )));
        }
        let mut s = TritVec::zeros(self.rows);
        for i in 0..self.rows {
            s.set(i, dot(self.row_limbs(i), e.limbs()));
        }
        Ok(s)
    }

    /// `x·M` for a row vector `x` of length `rows`.
    pub fn left_mul(&self, x: &TritVec) -> Result<TritVec> {
        if x.len() != self.rows {
            return Err(WaveError::Dimension(format!(
                "vector of length {} against {} rows",
                x.len(),
                self.rows
            )));
        }
        let mut acc = vec![Limb::ZERO; self.wpr];
        for i in 0..self.rows {
            axpy(&mut acc, self.row_limbs(i), x.get(i));
        }
        Ok(TritVec::from_limbs(self.cols, acc))
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &TritMat) -> Result<TritMat> {
        if self.cols != other.rows {
            return Err(WaveError::Dimension(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = TritMat::zeros(self.rows, other.cols);
        let fill = |(i, acc): (usize, &mut [Limb])| {
            for j in 0..self.cols {
                axpy(acc, other.row_limbs(j), self.get(i, j));
            }
        };
        if other.wpr > 0 {
            if self.rows * self.cols * other.wpr >= PAR_LIMBS {
                out.data.par_chunks_mut(other.wpr).enumerate().for_each(fill);
            } else {
                out.data.chunks_mut(other.wpr).enumerate().for_each(fill);
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> TritMat {
        let mut t = TritMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if !v.is_zero() {
                    t.set(j, i, v);
                }
            }
        }
        t
    }

    /// The columns listed in `idx`, in that order.
    pub fn select_columns(&self, idx: &[usize]) -> TritMat {
        self.select_columns_into(idx, idx.len())
    }

    fn select_columns_into(&self, idx: &[usize], cols: usize) -> TritMat {
        let mut out = TritMat::zeros(self.rows, cols);
        for i in 0..self.rows {
            let src = self.row_limbs(i);
            let dst = &mut out.data[i * out.wpr..(i + 1) * out.wpr];
            for (k, &j) in idx.iter().enumerate() {
                let t = src[j / 64].get(j % 64);
                if !t.is_zero() {
                    dst[k / 64].set(k % 64, t);
                }
            }
        }
        out
    }

    /// `[M_idx | rhs]`: the columns listed in `idx` followed by `rhs` as an
    /// extra column.
    pub(crate) fn augmented_columns(&self, idx: &[usize], rhs: &TritVec) -> TritMat {
        let mut out = self.select_columns_into(idx, idx.len() + 1);
        let c = idx.len();
        for i in 0..self.rows {
            let t = rhs.get(i);
            if !t.is_zero() {
                out.data[i * out.wpr + c / 64].set(c % 64, t);
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &TritMat) -> Result<TritMat> {
        if self.rows != other.rows {
            return Err(WaveError::Dimension(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let mut out = TritMat::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            let row = self.row(i).concat(&other.row(i));
            out.row_limbs_mut(i).copy_from_slice(row.limbs());
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &TritMat) -> Result<TritMat> {
        if self.cols != other.cols {
            return Err(WaveError::Dimension(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(TritMat {
            rows: self.rows + other.rows,
            cols: self.cols,
            wpr: self.wpr,
            data,
        })
    }

    /// Reduced row echelon form. Pivots are searched column by column from the
    /// left; within a column the first row (from the current one down) with a
    /// nonzero entry is chosen.
    pub fn row_reduce(&self) -> Rref {
        let mut mat = self.clone();
        let pivots = mat.reduce_in_place(self.cols);
        Rref {
            rank: pivots.len(),
            pivots,
            mat,
        }
    }

    /// Reduces in place, pivoting only on the first `limit` columns. Returns
    /// the pivot columns.
    pub(crate) fn reduce_in_place(&mut self, limit: usize) -> Vec<usize> {
        let limit = limit.min(self.cols);
        let wpr = self.wpr;
        let mut pivots = Vec::new();
        let mut buf: Vec<Limb> = Vec::with_capacity(wpr);
        let mut r = 0;
        for col in 0..limit {
            if r == self.rows {
                break;
            }
            let (w, bit) = (col / 64, col % 64);
            let Some(p) = (r..self.rows).find(|&i| (self.data[i * wpr + w].nonzero() >> bit) & 1 == 1) else {
                continue;
            };
            if p != r {
                for k in 0..wpr {
                    self.data.swap(p * wpr + k, r * wpr + k);
                }
            }
            if self.data[r * wpr + w].get(bit) == Trit::TWO {
                for l in &mut self.data[r * wpr + w..(r + 1) * wpr] {
                    *l = l.neg();
                }
            }
            buf.clear();
            buf.extend_from_slice(&self.data[r * wpr + w..(r + 1) * wpr]);
            let eliminate = |(i, row): (usize, &mut [Limb])| {
                if i != r {
                    let c = row[w].get(bit);
                    if !c.is_zero() {
                        axpy(&mut row[w..], &buf, -c);
                    }
                }
            };
            if self.rows * (wpr - w) >= PAR_LIMBS {
                self.data.par_chunks_mut(wpr).enumerate().for_each(eliminate);
            } else {
                self.data.chunks_mut(wpr).enumerate().for_each(eliminate);
            }
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.row_reduce().rank
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<TritMat> {
        if self.rows != self.cols {
            return Err(WaveError::Dimension(format!(
                "inverse of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut aug = self.hstack(&TritMat::identity(n))?;
        let pivots = aug.reduce_in_place(n);
        if pivots.len() < n {
            return Err(WaveError::Singular);
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Ok(aug.select_columns(&idx))
    }

    /// Whether the columns outside `info` are linearly independent and span
    /// the column space, i.e. `info` is an information set of the code with
    /// this parity-check matrix. The set must have exactly `cols − rows`
    /// elements.
    pub fn is_information_set(&self, info: &[usize]) -> bool {
        if info.len() + self.rows != self.cols {
            return false;
        }
        let mut inside = vec![false; self.cols];
        for &i in info {
            if i >= self.cols || inside[i] {
                return false;
            }
            inside[i] = true;
        }
        let rest: Vec<usize> = (0..self.cols).filter(|&j| !inside[j]).collect();
        self.select_columns(&rest).rank() == self.rows
    }

    /// Solves `A·y = b` for square invertible `A = self`.
    pub fn solve(&self, b: &TritVec) -> Result<TritVec> {
        if self.rows != self.cols || b.len() != self.rows {
            return Err(WaveError::Dimension(format!(
                "solve with a {}x{} matrix and a vector of length {}",
                self.rows,
                self.cols,
                b.len()
            )));
        }
        let n = self.rows;
        let rhs =
            TritMat::from_rows_with_cols(&(0..n).map(|i| TritVec::from_trits(&[b.get(i)])).collect::<Vec<_>>(), 1)?;
        let mut aug = self.hstack(&rhs)?;
        let pivots = aug.reduce_in_place(n);
        if pivots.len() < n {
            return Err(WaveError::Singular);
        }
        Ok(aug.column(n))
    }
}

impl fmt::Debug for TritMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "TritMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(16) {
            write!(f, "  ")?;
            for j in 0..self.cols.min(64) {
                write!(f, "{}", self.get(i, j).value())?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
