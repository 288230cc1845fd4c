use super::asymptotic::{attack_exponent_asymptotic, AsymptoticPoint};
use super::CodeShape;
use crate::dist::real::{LnFactorials, Log2Sum};
use crate::error::{Result, WaveError};
use rayon::prelude::*;

const LOG2_3: f64 = 1.584_962_500_721_156_2;

/// Largest `p` in the finite grid search.
pub const P_MAX: usize = 10;
/// Largest `ℓ` in the finite grid search.
pub const L_MAX: usize = 40;

/// `f(x) = max(x(1 − x/2), 1 − 1/x)` clamped to `[0, 1]`: a lower bound on
/// the probability that a random code meets a set of `x·3^r` words.
pub fn f_lb(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return 0.0;
    }
    (x * (1.0 - x / 2.0)).max(1.0 - 1.0 / x).clamp(0.0, 1.0)
}

/// `log2 f(2^lx)`, accurate for arguments far below `2^-1074`.
fn log2_f(lx: f64) -> f64 {
    if lx == f64::NEG_INFINITY {
        f64::NEG_INFINITY
    } else if lx < -60.0 {
        // f(x) = x(1 − x/2) and x/2 is below 2^-61.
        lx
    } else if lx > 60.0 {
        0.0
    } else {
        f_lb(lx.exp2()).log2()
    }
}

/// `log2 C₁(p, k, ℓ)` with `C₁ = max(L, L²·3^{−ℓ})` and
/// `L = sqrt(binom(k+ℓ, p)·2^p)`.
pub fn c1_log2(lnf: &LnFactorials, p: usize, k: usize, l: usize) -> f64 {
    let log2_l = 0.5 * (lnf.log2_binom((k + l) as i64, p as i64) + p as f64);
    log2_l.max(2.0 * log2_l - l as f64 * LOG2_3)
}

fn log2_binom(lnf: &LnFactorials, a: i64, b: i64) -> f64 {
    lnf.log2_binom(a, b)
}

/// `log2` of the lower bound on the success probability of one round of the
/// `U'` codeword search, with the dominant `z`. `k` and `k_u` are passed
/// explicitly so that the dual code can reuse it.
fn psucc_u_parts(lnf: &LnFactorials, n: usize, k: usize, k_u: usize, p: usize, l: usize) -> (f64, usize) {
    let h = (n / 2) as i64;
    let kl = (k + l) as i64;
    let (pi, kui) = (p as i64, k_u as i64);
    let den = log2_binom(lnf, n as i64, kl);
    let mut acc = Log2Sum::default();
    let mut best = (f64::NEG_INFINITY, 0usize);
    for z in 0..=h {
        let rest = kl - 2 * z;
        if rest < 0 {
            break;
        }
        let g = log2_binom(lnf, h, z) + log2_binom(lnf, h - z, rest) + rest as f64 - den;
        if g == f64::NEG_INFINITY {
            continue;
        }
        let e = (kl - z - kui).max(0) as f64 * LOG2_3;
        let mut fmax = f64::NEG_INFINITY;
        for i in 0..=pi / 2 {
            let lx = log2_binom(lnf, rest, pi - 2 * i) + log2_binom(lnf, z, i) + (pi - i) as f64 - e;
            fmax = fmax.max(log2_f(lx));
        }
        let term = g + fmax;
        acc.add(term);
        if term > best.0 {
            best = (term, z as usize);
        }
    }
    (acc.value(), best.1)
}

fn check_grid(shape: &CodeShape, l: usize) -> Result<()> {
    if shape.k() + l > shape.n || shape.k_u > shape.n / 2 || shape.k_v > shape.n / 2 {
        return Err(WaveError::InvalidParams(format!("ℓ = {l} for shape {shape:?}")));
    }
    Ok(())
}

/// `log2` of the lower bound on the probability that one round of the `U'`
/// codeword search (`|I| = n − k − ℓ`, codewords of weight `p`) succeeds.
pub fn psucc_u(shape: CodeShape, p: usize, l: usize) -> Result<f64> {
    check_grid(&shape, l)?;
    let lnf = LnFactorials::new(shape.n);
    Ok(psucc_u_parts(&lnf, shape.n, shape.k(), shape.k_u, p, l).0)
}

/// `log2` of the lower bound on the success probability of one round of the
/// `V'` codeword search.
pub fn psucc_v(shape: CodeShape, n_i: usize, p: usize, l: usize) -> Result<f64> {
    check_grid(&shape, l)?;
    let table = VSuccessTable::new(shape, n_i, p, l)?;
    Ok(table.log2_psucc(p, l))
}

/// Partial sums of the `V'` success bound that do not depend on `ℓ`:
/// `Y_p(z) = log2 Σ_m binom(n/2−n_I, m) · S(z, m) · max_i f(…)` with
/// `S(z, m) = Σ_j binom(n/2−n_I−m, j) 2^j binom(n_I, z − n + 2n_I + 2m + j)`.
pub struct VSuccessTable {
    shape: CodeShape,
    n_i: usize,
    p_max: usize,
    l_max: usize,
    z_lo: usize,
    /// `y[z − z_lo][p]`.
    y: Vec<Vec<f64>>,
    lnf: LnFactorials,
}

impl VSuccessTable {
    pub fn new(shape: CodeShape, n_i: usize, p_max: usize, l_max: usize) -> Result<VSuccessTable> {
        let n = shape.n;
        if n_i > n / 2 {
            return Err(WaveError::InvalidParams(format!("n_I = {n_i} exceeds n/2")));
        }
        check_grid(&shape, 0)?;
        let lnf = LnFactorials::new(n);
        let r = n - shape.k();
        let z_lo = r.saturating_sub(l_max + n_i);
        let z_hi = r.min(n - n_i);
        let y = (z_lo..=z_hi)
            .into_par_iter()
            .map(|z| Self::row(&lnf, shape, n_i, p_max, z))
            .collect();
        Ok(VSuccessTable {
            shape,
            n_i,
            p_max,
            l_max,
            z_lo,
            y,
            lnf,
        })
    }

    fn row(lnf: &LnFactorials, shape: CodeShape, n_i: usize, p_max: usize, z: usize) -> Vec<f64> {
        let n = shape.n as i64;
        let (ni, zi) = (n_i as i64, z as i64);
        let a = n / 2 - ni;
        let nv = n - ni;
        let mut sums = vec![Log2Sum::default(); p_max + 1];
        for m in 0..=a {
            let s = log2_inner_sum(lnf, a - m, ni, zi - n + 2 * ni + 2 * m);
            if s == f64::NEG_INFINITY {
                continue;
            }
            let base = log2_binom(lnf, a, m) + s;
            let len = nv - zi - 2 * m;
            let e = (nv - zi - m - shape.k_v as i64).max(0) as f64 * LOG2_3;
            for (p, acc) in sums.iter_mut().enumerate() {
                let pi = p as i64;
                let mut fmax = f64::NEG_INFINITY;
                for i in 0..=pi / 2 {
                    let lx = log2_binom(lnf, len, pi - 2 * i) + log2_binom(lnf, m, i) + (pi - i) as f64 - e;
                    fmax = fmax.max(log2_f(lx));
                }
                acc.add(base + fmax);
            }
        }
        sums.iter().map(|s| s.value()).collect()
    }

    /// `log2` of the `V'` success bound at `(p, ℓ)`.
    pub fn log2_psucc(&self, p: usize, l: usize) -> f64 {
        assert!(p <= self.p_max && l <= self.l_max, "(p, ℓ) outside the table");
        let n = self.shape.n as i64;
        let ni = self.n_i as i64;
        let r = n - self.shape.k() as i64 - l as i64;
        let den = log2_binom(&self.lnf, n, r);
        let mut acc = Log2Sum::default();
        for (off, row) in self.y.iter().enumerate() {
            let z = (self.z_lo + off) as i64;
            if z > r {
                break;
            }
            acc.add(row[p] + log2_binom(&self.lnf, ni, r - z) - den);
        }
        acc.value()
    }
}

/// `log2 Σ_j binom(a, j) 2^j binom(b, c + j)`. The summand is log-concave in
/// `j`, so the sum is accumulated outward from its peak.
fn log2_inner_sum(lnf: &LnFactorials, a: i64, b: i64, c: i64) -> f64 {
    let lo = (-c).max(0);
    let hi = a.min(b - c);
    if lo > hi {
        return f64::NEG_INFINITY;
    }
    // term(j+1)/term(j)
    let ratio = |j: i64| 2.0 * (a - j) as f64 / (j + 1) as f64 * (b - c - j) as f64 / (c + j + 1) as f64;
    let (mut l, mut r) = (lo, hi);
    while l < r {
        let mid = l + (r - l) / 2;
        if ratio(mid) > 1.0 {
            l = mid + 1;
        } else {
            r = mid;
        }
    }
    let peak = l;
    let log_peak = log2_binom(lnf, a, peak) + peak as f64 + log2_binom(lnf, b, c + peak);
    let mut total = 1.0;
    let mut t = 1.0;
    let mut j = peak;
    while j < hi {
        t *= ratio(j);
        j += 1;
        total += t;
        if t < 1e-18 {
            break;
        }
    }
    let mut t = 1.0;
    let mut j = peak;
    while j > lo {
        t /= ratio(j - 1);
        j -= 1;
        total += t;
        if t < 1e-18 {
            break;
        }
    }
    log_peak + total.log2()
}

/// The cheapest parameters of one attack.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostPoint {
    pub log2_cost: f64,
    pub p: usize,
    pub l: usize,
    pub log2_psucc: f64,
    /// Dominant `z` of the success sum (U-type searches only).
    pub dominant_z: Option<usize>,
}

impl CostPoint {
    fn better_than(&self, other: &CostPoint) -> bool {
        self.log2_cost < other.log2_cost || (self.log2_cost == other.log2_cost && (self.p, self.l) < (other.p, other.l))
    }
}

/// Key-attack costs of a parameter set.
#[derive(Clone, Debug, PartialEq)]
pub struct AttackReport {
    /// Recovering `U'` in the public code.
    pub u: CostPoint,
    /// Recovering `V'` in the public code.
    pub v: CostPoint,
    /// Recovering `(V^⊥)'` in the dual code.
    pub dual_u: CostPoint,
    /// Asymptotic exponent of the `U'` search at the ratios of the shape.
    pub asymptotic: Option<AsymptoticPoint>,
    /// Same for the dual code.
    pub asymptotic_dual: Option<AsymptoticPoint>,
}

impl AttackReport {
    /// `log2 min(C_U, C_V)`.
    pub fn log2_min(&self) -> f64 {
        self.u.log2_cost.min(self.v.log2_cost)
    }
}

fn best_u(lnf: &LnFactorials, n: usize, k: usize, k_u: usize) -> CostPoint {
    let mut best: Option<CostPoint> = None;
    for p in 0..=P_MAX {
        for l in 0..=L_MAX.min(n - k) {
            let (ps, z) = psucc_u_parts(lnf, n, k, k_u, p, l);
            let pt = CostPoint {
                log2_cost: c1_log2(lnf, p, k, l) - ps,
                p,
                l,
                log2_psucc: ps,
                dominant_z: Some(z),
            };
            if best.map_or(true, |b| pt.better_than(&b)) {
                best = Some(pt);
            }
        }
    }
    best.expect("grid is never empty")
}

/// Grid search over `p ≤ 10` and `ℓ ≤ 40` of `C_U = C₁/P_succ^U` and
/// `C_V = C₁/P_succ^V`, plus the `U'` search in the dual code
/// (`k → n − k`, `k_U → n/2 − k_V`).
pub fn attack_cost_finite(shape: CodeShape, n_i: usize) -> Result<AttackReport> {
    check_grid(&shape, 0)?;
    let n = shape.n;
    let k = shape.k();
    let lnf = LnFactorials::new(n);
    let u = best_u(&lnf, n, k, shape.k_u);
    let dual_u = best_u(&lnf, n, n - k, n / 2 - shape.k_v);
    let l_max = L_MAX.min(n - k);
    let table = VSuccessTable::new(shape, n_i, P_MAX, l_max)?;
    let mut v: Option<CostPoint> = None;
    for p in 0..=P_MAX {
        for l in 0..=l_max {
            let ps = table.log2_psucc(p, l);
            let pt = CostPoint {
                log2_cost: c1_log2(&lnf, p, k, l) - ps,
                p,
                l,
                log2_psucc: ps,
                dominant_z: None,
            };
            if v.map_or(true, |b| pt.better_than(&b)) {
                v = Some(pt);
            }
        }
    }
    let nf = n as f64;
    let rel = |k: usize, ku: usize| attack_exponent_asymptotic(k as f64 / nf, ku as f64 / nf).ok();
    Ok(AttackReport {
        u,
        v: v.expect("grid is never empty"),
        dual_u,
        asymptotic: rel(k, shape.k_u),
        asymptotic_dual: rel(n - k, n / 2 - shape.k_v),
    })
}
