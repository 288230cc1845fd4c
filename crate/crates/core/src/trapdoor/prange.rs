use crate::dist::{CdfSampler, WeightDist};
use crate::error::{Result, WaveError};
use crate::f3::{Trit, TritMat, TritVec};
use rand::seq::index::sample;
use rand::Rng;

/// Default bound on the number of set draws in the information-set loops.
pub(crate) const SET_BUDGET: usize = 10_000;

fn complement(n: usize, set: &[usize]) -> Result<Vec<usize>> {
    let mut inside = vec![false; n];
    for &i in set {
        if i >= n || inside[i] {
            return Err(WaveError::Dimension(format!("index set is not a subset of 0..{n}")));
        }
        inside[i] = true;
    }
    Ok((0..n).filter(|&j| !inside[j]).collect())
}

fn random_nonzero<R: Rng + ?Sized>(rng: &mut R) -> Trit {
    if rng.gen::<bool>() {
        Trit::ONE
    } else {
        Trit::TWO
    }
}

fn random_trit<R: Rng + ?Sized>(rng: &mut R) -> Trit {
    Trit::from_int(rng.gen_range(0..3))
}

/// `e` with `e·Hᵀ = s` and `e_I = x_I`, for an information set `I` of the
/// code with parity-check matrix `H`.
pub fn prange_step(h: &TritMat, s: &TritVec, info: &[usize], x: &TritVec) -> Result<TritVec> {
    let (r, n) = (h.rows(), h.cols());
    if s.len() != r || x.len() != n {
        return Err(WaveError::Dimension(format!(
            "prange step with a {r}x{n} matrix, syndrome {} and vector {}",
            s.len(),
            x.len()
        )));
    }
    if info.len() + r != n {
        return Err(WaveError::NotInformationSet);
    }
    let rest = complement(n, info)?;
    let mut xi = TritVec::zeros(n);
    for &i in info {
        xi.set(i, x.get(i));
    }
    let rhs = s.sub(&h.syndrome(&xi)?)?;
    let mut aug = h.augmented_columns(&rest, &rhs);
    let pivots = aug.reduce_in_place(r);
    if pivots.len() < r {
        return Err(WaveError::NotInformationSet);
    }
    for (row, &col) in rest.iter().enumerate() {
        xi.set(col, aug.get(row, r));
    }
    Ok(xi)
}

/// A uniformly random information set, by rejection.
pub fn info_set<R: Rng + ?Sized>(h: &TritMat, rng: &mut R) -> Result<Vec<usize>> {
    let (r, n) = (h.rows(), h.cols());
    for _ in 0..SET_BUDGET {
        let mut set = sample(rng, n, n - r).into_vec();
        set.sort_unstable();
        if h.is_information_set(&set) {
            return Ok(set);
        }
    }
    Err(WaveError::RetryBudget("no information set found".into()))
}

/// One iteration of the Prange decoder: the weight on a random information
/// set is drawn from `dist` (over `0 ..= k`) and the rest is completed.
pub fn prange_one<R: Rng + ?Sized>(h: &TritMat, s: &TritVec, dist: &WeightDist, rng: &mut R) -> Result<TritVec> {
    let k = h.cols() - h.rows();
    if dist.end() > k {
        return Err(WaveError::Distribution(format!(
            "weight law reaches {} beyond k = {k}",
            dist.end()
        )));
    }
    let probs: Vec<_> = (0..=dist.end()).map(|i| dist.prob(i)).collect();
    let t = CdfSampler::new(&probs).sample(rng.next_u64());
    let info = info_set(h, rng)?;
    let mut x = TritVec::zeros(h.cols());
    for pos in sample(rng, k, t).into_iter() {
        x.set(info[pos], random_nonzero(rng));
    }
    prange_step(h, s, &info, &x)
}

fn free_set_budget(d: usize) -> usize {
    (100usize.saturating_mul(3usize.pow(d.min(20) as u32))).min(SET_BUDGET)
}

fn complete_info_set<R: Rng + ?Sized>(
    h: &TritMat,
    j: Vec<usize>,
    d: usize,
    rng: &mut R,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let rest = complement(h.cols(), &j)?;
    for _ in 0..free_set_budget(d) {
        let mut info = j.clone();
        info.extend(sample(rng, rest.len(), d).into_iter().map(|p| rest[p]));
        info.sort_unstable();
        if h.is_information_set(&info) {
            return Ok((j, info));
        }
    }
    Err(WaveError::RetryBudget("no information set extends the free set".into()))
}

fn is_good(h: &TritMat, j: &[usize]) -> Result<bool> {
    let rest = complement(h.cols(), j)?;
    Ok(h.select_columns(&rest).rank() == h.rows())
}

/// `(J, I)`: `J` uniform among the sets of size `k − d` whose complement has
/// full rank, and `I ⊇ J` an information set obtained by adding `d`
/// positions.
pub fn free_set<R: Rng + ?Sized>(h: &TritMat, k: usize, d: usize, rng: &mut R) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = h.cols();
    if k + h.rows() != n || d > k {
        return Err(WaveError::Dimension(format!(
            "free set with k = {k}, d = {d} for a {}x{n} matrix",
            h.rows()
        )));
    }
    for _ in 0..free_set_budget(d) {
        let mut j = sample(rng, n, k - d).into_vec();
        j.sort_unstable();
        if is_good(h, &j)? {
            return complete_info_set(h, j, d, rng);
        }
    }
    Err(WaveError::RetryBudget("no good free set found".into()))
}

/// As [`free_set`], with exactly `k_neq0` positions of `J` in `supp(x)`.
pub fn free_set_w<R: Rng + ?Sized>(
    h: &TritMat,
    x: &TritVec,
    k_neq0: usize,
    k: usize,
    d: usize,
    rng: &mut R,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = h.cols();
    if k + h.rows() != n || d > k || x.len() != n {
        return Err(WaveError::Dimension(format!(
            "free set with k = {k}, d = {d} for a {}x{n} matrix",
            h.rows()
        )));
    }
    let supp = x.support();
    let outside = complement(n, &supp)?;
    if k_neq0 > supp.len().min(k - d) || k - d - k_neq0 > outside.len() {
        return Err(WaveError::Infeasible(format!(
            "cannot place {k_neq0} of {} free positions on a support of size {}",
            k - d,
            supp.len()
        )));
    }
    for _ in 0..free_set_budget(d) {
        let mut j: Vec<usize> = sample(rng, supp.len(), k_neq0).into_iter().map(|p| supp[p]).collect();
        j.extend(
            sample(rng, outside.len(), k - d - k_neq0)
                .into_iter()
                .map(|p| outside[p]),
        );
        j.sort_unstable();
        if is_good(h, &j)? {
            return complete_info_set(h, j, d, rng);
        }
    }
    Err(WaveError::RetryBudget("no good free set found".into()))
}

/// A parity-check matrix together with its transpose, for repeated
/// completions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfCode {
    h: TritMat,
    ht: TritMat,
}

impl HalfCode {
    pub fn new(h: TritMat) -> HalfCode {
        let ht = h.transpose();
        HalfCode { h, ht }
    }

    pub fn h(&self) -> &TritMat {
        &self.h
    }

    /// Length of the code.
    pub fn len(&self) -> usize {
        self.h.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.h.cols() == 0
    }

    /// Number of parity checks.
    pub fn checks(&self) -> usize {
        self.h.rows()
    }

    /// Solves `e·Hᵀ = s` with `e_j = v` for every `(j, v)` in `fixed`, the
    /// remaining coordinates uniform among the solutions. `in_j` marks the
    /// fixed positions. Returns `None` if the complement of the fixed set
    /// does not have full rank.
    pub(crate) fn complete<R: Rng + ?Sized>(
        &self,
        s: &TritVec,
        fixed: &[(usize, Trit)],
        in_j: &[bool],
        rng: &mut R,
    ) -> Option<TritVec> {
        let r = self.checks();
        let mut rhs = s.clone();
        for &(j, v) in fixed {
            if !v.is_zero() {
                rhs.axpy(-v, &self.ht.row(j)).expect("syndrome length");
            }
        }
        let rest: Vec<usize> = (0..self.len()).filter(|&j| !in_j[j]).collect();
        let free_cols = rest.len();
        let mut aug = self.h.augmented_columns(&rest, &rhs);
        let pivots = aug.reduce_in_place(free_cols);
        if pivots.len() < r {
            return None;
        }
        let mut e = TritVec::zeros(self.len());
        for &(j, v) in fixed {
            e.set(j, v);
        }
        let mut is_pivot = vec![false; free_cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<(usize, Trit)> = (0..free_cols)
            .filter(|&c| !is_pivot[c])
            .map(|c| (c, random_trit(rng)))
            .collect();
        for &(c, y) in &free {
            e.set(rest[c], y);
        }
        for (row, &p) in pivots.iter().enumerate() {
            let mut v = aug.get(row, free_cols);
            for &(c, y) in &free {
                if !y.is_zero() {
                    v = v - aug.get(row, c) * y;
                }
            }
            e.set(rest[p], v);
        }
        Some(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn step_on_systematic_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = TritMat::random(4, 5, &mut rng);
        let h = TritMat::identity(4).hstack(&b).unwrap();
        let s = TritVec::random(4, &mut rng);
        let x = TritVec::random(9, &mut rng);
        let info: Vec<usize> = (4..9).collect();
        let e = prange_step(&h, &s, &info, &x).unwrap();
        assert_eq!(h.syndrome(&e).unwrap(), s);
        let xi = x.slice(4, 9);
        let expect = s.sub(&b.syndrome(&xi).unwrap()).unwrap();
        assert_eq!(e.slice(0, 4), expect);
        assert_eq!(e.slice(4, 9), xi);
        assert!(prange_step(&TritMat::zeros(4, 9), &s, &info, &x).is_err());
        let zero = prange_step(&h, &TritVec::zeros(4), &info, &TritVec::zeros(9)).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn completion_respects_fixed_positions() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let code = HalfCode::new(TritMat::random(6, 14, &mut rng));
        let s = TritVec::random(6, &mut rng);
        let fixed = vec![(0, Trit::ONE), (3, Trit::TWO), (7, Trit::ZERO)];
        let mut in_j = vec![false; 14];
        for &(j, _) in &fixed {
            in_j[j] = true;
        }
        for _ in 0..20 {
            if let Some(e) = code.complete(&s, &fixed, &in_j, &mut rng) {
                assert_eq!(code.h().syndrome(&e).unwrap(), s);
                for &(j, v) in &fixed {
                    assert_eq!(e.get(j), v);
                }
            }
        }
    }

    #[test]
    fn free_sets_meet_their_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = TritMat::random(8, 20, &mut rng);
        assert_eq!(h.rank(), 8);
        let (j, i) = free_set(&h, 12, 0, &mut rng).unwrap();
        assert_eq!(j, i);
        let (j, i) = free_set(&h, 12, 3, &mut rng).unwrap();
        assert_eq!(j.len(), 9);
        assert!(j.iter().all(|x| i.contains(x)));
        assert!(h.is_information_set(&i));
        let x = TritVec::from_values(&[1, 0, 2, 0, 1, 1, 0, 0, 2, 0, 0, 0, 1, 0, 0, 0, 0, 2, 0, 0]).unwrap();
        let (j, i) = free_set_w(&h, &x, 4, 12, 3, &mut rng).unwrap();
        assert_eq!(j.iter().filter(|&&p| !x.get(p).is_zero()).count(), 4);
        assert!(h.is_information_set(&i));
        assert!(free_set_w(&h, &x, 8, 12, 3, &mut rng).is_err());
    }
}
