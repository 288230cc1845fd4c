use crate::dist::real::{log2_add, LnFactorials};
use crate::error::{Result, WaveError};

const LOG2_3: f64 = 1.584_962_500_721_156_2;

/// Upper bound on the probability that the law of free sets conditioned on
/// being good is farther than `3^{−d}` from the uniform law.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BadSetBound {
    pub log2_bound: f64,
    pub gamma: f64,
    /// The bound is at least 1 and says nothing.
    pub vacuous: bool,
}

/// `γ = min_{x>0} ((1−R+δ) log3((1+3x)/x) + (R−δ) log3(1+x)) − 1 + R`,
/// minimized by golden section over `ln x` (the objective is convex there).
pub fn gamma(rate: f64, delta: f64) -> f64 {
    let a = 1.0 - rate + delta;
    let b = rate - delta;
    let g = |t: f64| {
        let x = t.exp();
        (a * ((1.0 + 3.0 * x) / x).ln() + b * x.ln_1p()) / 3f64.ln()
    };
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (-60.0f64, 60.0f64);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    while hi - lo > 1e-10 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = g(x2);
        }
    }
    g(0.5 * (lo + hi)) - 1.0 + rate
}

/// `(2/binom(n/2, k−d))·(3^d + 2·3^{2d+γn/2})` with `R = k/(n/2)` and
/// `δ = d/(n/2)`.
pub fn bad_set_bound(n: usize, k: usize, d: usize) -> Result<BadSetBound> {
    let h = n / 2;
    if d > k || k > h || h == 0 {
        return Err(WaveError::InvalidParams(format!(
            "bad-set bound with n = {n}, k = {k}, d = {d}"
        )));
    }
    let hf = h as f64;
    let gamma = gamma(k as f64 / hf, d as f64 / hf);
    let lnf = LnFactorials::new(h);
    let df = d as f64;
    let inner = log2_add(df * LOG2_3, 1.0 + (2.0 * df + gamma * hf) * LOG2_3);
    let log2_bound = 1.0 - lnf.log2_binom(h as i64, (k - d) as i64) + inner;
    Ok(BadSetBound {
        log2_bound,
        gamma,
        vacuous: log2_bound >= 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_is_a_minimum() {
        let (r, d) = (0.44, 0.0357);
        let g = gamma(r, d);
        for x in [1e-3f64, 0.1, 0.3, 1.0, 2.0, 10.0] {
            let v: f64 = (1.0 - r + d) * ((1.0 + 3.0 * x) / x).log(3.0) + (r - d) * (1.0f64 + x).log(3.0) - 1.0 + r;
            assert!(g <= v + 1e-12);
        }
    }

    #[test]
    fn decreasing_in_length_and_vacuous_without_padding() {
        let mut last = f64::INFINITY;
        for n in (2000..=12000).step_by(1000) {
            let h = n / 2;
            let b = bad_set_bound(n, (0.44 * h as f64) as usize, (0.0357 * h as f64) as usize).unwrap();
            assert!(b.log2_bound < last, "n = {n}");
            last = b.log2_bound;
        }
        let b = bad_set_bound(9078, 1998, 0).unwrap();
        assert!(b.log2_bound.is_finite());
        assert!(bad_set_bound(10, 6, 1).is_err());
    }
}
