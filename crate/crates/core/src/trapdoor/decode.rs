use super::keys::SecretKey;
use super::prange::{HalfCode, SET_BUDGET};
use super::uv::{m1, UVMap};
use crate::dist::{RejectionTables, URow};
use crate::error::{Result, WaveError};
use crate::f3::{Trit, TritVec};
use rand::seq::index::sample;
use rand::Rng;

/// Retry bounds of the decoders.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecoderOptions {
    /// `(J, x_U)` attempts per draw of `k≠0` before it is redrawn.
    pub inner_attempts: usize,
    /// Draws of `k≠0` per call to the U decoder.
    pub k_draws: usize,
    /// Draws of a free set before giving up.
    pub free_set_budget: usize,
    /// Rounds of each rejection loop before giving up.
    pub rejection_rounds: usize,
}

impl Default for DecoderOptions {
    fn default() -> Self {
        DecoderOptions {
            inner_attempts: 1024,
            k_draws: 1000,
            free_set_budget: SET_BUDGET,
            rejection_rounds: 100_000,
        }
    }
}

/// Counters collected while decoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecodeStats {
    /// Outputs of the V decoder discarded by `r_V`.
    pub v_rejections: u64,
    /// Outputs of the U decoder discarded by `r_U`.
    pub u_rejections: u64,
    /// Free sets of the V decoder whose complement was rank deficient.
    pub v_bad_sets: u64,
    /// Free sets of the U decoder whose complement was rank deficient.
    pub u_bad_sets: u64,
    /// Completions of the U decoder that missed weight `w`.
    pub u_weight_misses: u64,
    /// Draws of `k≠0` abandoned after `inner_attempts` misses.
    pub k_redraws: u64,
}

impl DecodeStats {
    /// Rejections by either rejection vector.
    pub fn rejections(&self) -> u64 {
        self.v_rejections + self.u_rejections
    }

    pub fn merge(&mut self, o: &DecodeStats) {
        self.v_rejections += o.v_rejections;
        self.u_rejections += o.u_rejections;
        self.v_bad_sets += o.v_bad_sets;
        self.u_bad_sets += o.u_bad_sets;
        self.u_weight_misses += o.u_weight_misses;
        self.k_redraws += o.k_redraws;
    }
}

/// `e_V` with `e_V·H_Vᵀ = s^V`: the weight on a free set of size `k_V − d`
/// is drawn from `D_V`, the other trits of the information set are uniform.
pub fn decode_v<R: Rng + ?Sized>(
    h_v: &HalfCode,
    s_v: &TritVec,
    tables: &RejectionTables,
    opts: &DecoderOptions,
    stats: &mut DecodeStats,
    rng: &mut R,
) -> Result<TritVec> {
    let m = h_v.len();
    let kvp = tables.header().kvp();
    if s_v.len() != h_v.checks() || kvp + h_v.checks() > m {
        return Err(WaveError::Dimension("V decoder inputs do not match the tables".into()));
    }
    let ell = tables.sample_ell(rng.next_u64());
    let mut in_j = vec![false; m];
    for _ in 0..opts.free_set_budget {
        let j = sample(rng, m, kvp).into_vec();
        in_j.iter_mut().for_each(|b| *b = false);
        for &p in &j {
            in_j[p] = true;
        }
        let mut fixed: Vec<(usize, Trit)> = j.iter().map(|&p| (p, Trit::ZERO)).collect();
        for pos in sample(rng, kvp, ell).into_iter() {
            fixed[pos].1 = if rng.gen::<bool>() { Trit::ONE } else { Trit::TWO };
        }
        if let Some(e) = h_v.complete(s_v, &fixed, &in_j, rng) {
            return Ok(e);
        }
        stats.v_bad_sets += 1;
    }
    Err(WaveError::RetryBudget("V decoder found no good free set".into()))
}

/// `e_U` with `e_U·H_Uᵀ = s^U` and `|φ(e_U, e_V)| = w`, drawing `k≠0` from
/// `row` (the law `D_U^t` for `t = |e_V|`). Returns `e_U` and `φ(e_U, e_V)`.
#[allow(clippy::too_many_arguments)]
pub fn decode_u<R: Rng + ?Sized>(
    h_u: &HalfCode,
    phi: &UVMap,
    s_u: &TritVec,
    e_v: &TritVec,
    row: &URow,
    kup: usize,
    w: usize,
    opts: &DecoderOptions,
    stats: &mut DecodeStats,
    rng: &mut R,
) -> Result<(TritVec, TritVec)> {
    let m = h_u.len();
    if s_u.len() != h_u.checks() || e_v.len() != m || phi.half_len() != m || row.t != e_v.weight() {
        return Err(WaveError::Dimension("U decoder inputs are inconsistent".into()));
    }
    let supp = e_v.support();
    let mut outside = Vec::with_capacity(m - supp.len());
    {
        let mut it = supp.iter().peekable();
        for j in 0..m {
            if it.peek() == Some(&&j) {
                it.next();
            } else {
                outside.push(j);
            }
        }
    }
    // x_U on J: both trits of the block nonzero. For e_V(j) ≠ 0 the two
    // excluded values −(b/a)e_V(j), −(d/c)e_V(j) are distinct and their sum
    // negated is the remaining one; for e_V(j) = 0 both are 0.
    let forced = |j: usize| -> Option<Trit> {
        let v = e_v.get(j);
        if v.is_zero() {
            return None;
        }
        let [a, b, c, d] = phi.block(j);
        let f1 = -(b * a.inv().expect("a ≠ 0")) * v;
        let f2 = -(d * c.inv().expect("c ≠ 0")) * v;
        Some(-(f1 + f2))
    };
    let mut in_j = vec![false; m];
    for _ in 0..opts.k_draws {
        let k_neq0 = row.sample_k(rng.next_u64());
        if k_neq0 > supp.len() || k_neq0 > kup || kup - k_neq0 > outside.len() {
            return Err(WaveError::Distribution(format!(
                "k≠0 = {k_neq0} is outside its support"
            )));
        }
        let k0 = kup - k_neq0;
        let mut misses = 0;
        let mut bad = 0;
        while misses < opts.inner_attempts {
            let mut j: Vec<usize> = sample(rng, supp.len(), k_neq0).into_iter().map(|p| supp[p]).collect();
            j.extend(sample(rng, outside.len(), k0).into_iter().map(|p| outside[p]));
            in_j.iter_mut().for_each(|b| *b = false);
            let fixed: Vec<(usize, Trit)> = j
                .iter()
                .map(|&p| {
                    in_j[p] = true;
                    let x = forced(p).unwrap_or_else(|| if rng.gen::<bool>() { Trit::ONE } else { Trit::TWO });
                    (p, x)
                })
                .collect();
            let Some(e_u) = h_u.complete(s_u, &fixed, &in_j, rng) else {
                stats.u_bad_sets += 1;
                bad += 1;
                if bad >= opts.free_set_budget {
                    return Err(WaveError::RetryBudget("U decoder found no good free set".into()));
                }
                continue;
            };
            let e = phi.apply(&e_u, e_v)?;
            if e.weight() == w {
                return Ok((e_u, e));
            }
            stats.u_weight_misses += 1;
            misses += 1;
        }
        stats.k_redraws += 1;
    }
    Err(WaveError::RetryBudget(format!("U decoder did not reach weight {w}")))
}

/// Rejection-sampled decoder for `H_sk`: returns `e` with `e·H_skᵀ = s` and
/// `|e| = w`, distributed as a uniform word of weight `w` when `s` is uniform.
#[allow(clippy::too_many_arguments)]
pub fn decode_uv<R: Rng + ?Sized>(
    h_u: &HalfCode,
    h_v: &HalfCode,
    phi: &UVMap,
    s: &TritVec,
    tables: &RejectionTables,
    opts: &DecoderOptions,
    stats: &mut DecodeStats,
    rng: &mut R,
) -> Result<TritVec> {
    let ru = h_u.checks();
    if s.len() != ru + h_v.checks() {
        return Err(WaveError::Dimension(
            "syndrome length does not match the secret key".into(),
        ));
    }
    let s_u = s.slice(0, ru);
    let s_v = s.slice(ru, s.len());
    let header = tables.header();
    let mut e_v = None;
    for _ in 0..opts.rejection_rounds {
        let cand = decode_v(h_v, &s_v, tables, opts, stats, rng)?;
        if tables.accept_v(cand.weight(), rng.next_u64()) {
            e_v = Some(cand);
            break;
        }
        stats.v_rejections += 1;
    }
    let e_v = e_v.ok_or_else(|| WaveError::RetryBudget("V rejection loop did not terminate".into()))?;
    let row = tables.row(e_v.weight())?;
    for _ in 0..opts.rejection_rounds {
        let (_, e) = decode_u(h_u, phi, &s_u, &e_v, &row, header.kup(), header.w, opts, stats, rng)?;
        if row.accept(m1(&e), rng.next_u64()) {
            return Ok(e);
        }
        stats.u_rejections += 1;
    }
    Err(WaveError::RetryBudget("U rejection loop did not terminate".into()))
}

/// A preimage of weight `w` of the public syndrome `s`.
pub fn samp_pre<R: Rng + ?Sized>(
    sk: &SecretKey,
    s: &TritVec,
    opts: &DecoderOptions,
    stats: &mut DecodeStats,
    rng: &mut R,
) -> Result<TritVec> {
    let s_sk = sk.s_inv().syndrome(s)?;
    let e = decode_uv(sk.h_u(), sk.h_v(), sk.phi(), &s_sk, sk.tables(), opts, stats, rng)?;
    sk.perm().apply_vec(&e)
}
