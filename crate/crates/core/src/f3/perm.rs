use super::{TritMat, TritVec};
use crate::error::{Result, WaveError};
use rand::seq::SliceRandom;
use rand::Rng;

/// A permutation of `0..n`, identified with the permutation matrix `P` whose
/// entry `(i, map[i])` is 1. Right multiplication sends coordinate `i` to
/// position `map[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Perm {
    map: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm { map: (0..n).collect() }
    }

    /// Validates that `map` is a bijection on `0..map.len()`.
    pub fn from_map(map: Vec<usize>) -> Result<Perm> {
        let mut seen = vec![false; map.len()];
        for &j in &map {
            if j >= map.len() || seen[j] {
                return Err(WaveError::Dimension("map is not a permutation".into()));
            }
            seen[j] = true;
        }
        Ok(Perm { map })
    }

    /// Uniformly random permutation.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Perm {
        let mut map: Vec<usize> = (0..n).collect();
        map.shuffle(rng);
        Perm { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.map.len()];
        for (i, &j) in self.map.iter().enumerate() {
            inv[j] = i;
        }
        Perm { map: inv }
    }

    /// The permutation matrix of `self · other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm {
            map: self.map.iter().map(|&j| other.map[j]).collect(),
        }
    }

    /// Row vector times permutation matrix: `x·P`.
    pub fn apply_vec(&self, x: &TritVec) -> Result<TritVec> {
        if x.len() != self.map.len() {
            return Err(WaveError::Dimension(format!(
                "permutation of size {} applied to length {}",
                self.map.len(),
                x.len()
            )));
        }
        let mut y = TritVec::zeros(x.len());
        for (i, &j) in self.map.iter().enumerate() {
            y.set(j, x.get(i));
        }
        Ok(y)
    }

    /// Column permutation `H·P`.
    pub fn apply_cols(&self, h: &TritMat) -> Result<TritMat> {
        if h.cols() != self.map.len() {
            return Err(WaveError::Dimension(format!(
                "permutation of size {} applied to {} columns",
                self.map.len(),
                h.cols()
            )));
        }
        // Column j of H·P is column inv[j] of H.
        let inv = self.inverse();
        Ok(h.select_columns(&inv.map))
    }

    pub fn to_matrix(&self) -> TritMat {
        let n = self.map.len();
        let mut m = TritMat::zeros(n, n);
        for (i, &j) in self.map.iter().enumerate() {
            m.set(i, j, super::Trit::ONE);
        }
        m
    }
}
