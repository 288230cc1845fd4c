use super::CodeShape;
use crate::dist::real::{log2_f64, pow2, pow3, zero, Binomials, Real};
use crate::dist::WeightDist;
use crate::error::{Result, WaveError};
use rug::Rational;

/// The bound `E(ρ(D_w^{H_pk}, U)) ≤ ½√ε` and its three summands.
#[derive(Clone, Debug, PartialEq)]
pub struct BiasReport {
    /// `log2` of `3^{n−k} / (2^w binom(n, w))`, of the `e_V` collision term
    /// and of the type-I term, in that order.
    pub log2_terms: [f64; 3],
    pub log2_eps: f64,
    pub log2_half_sqrt_eps: f64,
}

/// `ε = 3^{n−k}/(2^w binom(n,w)) + 3^{n/2−k_V} Σ_j q̂1(j)²/(2^j binom(n/2,j))
///    + 3^{n/2−k_U} Σ_{j≤n_I} binom(n_I,j) binom(n−n_I,w−j)² / (binom(n,w)² 2^j)`.
pub fn epsilon_bound(shape: CodeShape, n_i: usize, qhat1: &WeightDist) -> Result<BiasReport> {
    let CodeShape { n, k_u, k_v, w } = shape;
    let h = n / 2;
    if n_i > h || w > n || shape.k() > n || k_u > h || k_v > h {
        return Err(WaveError::InvalidParams(format!(
            "inconsistent shape {shape:?} with n_I = {n_i}"
        )));
    }
    let b = Binomials::new(n);
    let (ni, wi, hi) = (n_i as i64, w as i64, h as i64);
    let bnw = b.binom(n as i64, wi);

    let t1 = pow3((n - shape.k()) as u32) / (pow2(wi) * &bnw);

    let mut s2 = zero();
    for (j, q) in qhat1.iter() {
        if j > h || q.is_zero() {
            continue;
        }
        let den = pow2(j as i64) * b.binom(hi, j as i64);
        s2 += Real::with_val(q.prec(), q * q) / den;
    }
    let t2 = s2 * pow3((h - k_v) as u32);

    let mut s3 = zero();
    for j in 0..=ni {
        let c = b.binom(n as i64 - ni, wi - j);
        if c.is_zero() {
            continue;
        }
        let num = b.binom(ni, j) * Real::with_val(c.prec(), &c * &c);
        s3 += num / pow2(j);
    }
    let t3 = s3 / Real::with_val(bnw.prec(), &bnw * &bnw) * pow3((h - k_u) as u32);

    let eps = Real::with_val(t1.prec(), &t1 + &t2) + &t3;
    let log2_eps = log2_f64(&eps);
    Ok(BiasReport {
        log2_terms: [log2_f64(&t1), log2_f64(&t2), log2_f64(&t3)],
        log2_eps,
        log2_half_sqrt_eps: 0.5 * log2_eps - 1.0,
    })
}

/// The three summands of `ε` as exact rationals, with `q̂1` given exactly.
pub fn bias_terms_exact(shape: CodeShape, n_i: usize, qhat1: &[Rational]) -> [Rational; 3] {
    use rug::Integer;
    let CodeShape { n, k_u, k_v, w } = shape;
    let h = n / 2;
    let binom = |a: usize, b: usize| -> Integer {
        if b > a {
            Integer::new()
        } else {
            Integer::from(a).binomial(b as u32)
        }
    };
    let p3 = |e: usize| Integer::from(Integer::u_pow_u(3, e as u32));
    let p2 = |e: usize| Integer::from(Integer::u_pow_u(2, e as u32));
    let bnw = binom(n, w);
    let t1 = Rational::from((p3(n - shape.k()), p2(w) * &bnw));
    let mut t2 = Rational::new();
    for (j, q) in qhat1.iter().enumerate().take(h + 1) {
        t2 += Rational::from(q * q) / Rational::from(p2(j) * binom(h, j));
    }
    t2 *= p3(h - k_v);
    let mut t3 = Rational::new();
    for j in 0..=n_i.min(w) {
        let c = binom(n - n_i, w - j);
        t3 += Rational::from((binom(n_i, j) * &c * &c, p2(j)));
    }
    t3 = t3 / Rational::from(Integer::from(&bnw * &bnw)) * p3(h - k_u);
    [t1, t2, t3]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::exact::qhat1_exact;
    use crate::dist::qhat1;

    #[test]
    fn log_domain_matches_rationals() {
        for (n, k_u, k_v, w, n_i) in [(8, 3, 1, 6, 2), (12, 4, 2, 9, 3), (24, 9, 4, 20, 5)] {
            let shape = CodeShape { n, k_u, k_v, w };
            let rep = epsilon_bound(shape, n_i, &qhat1(n, w).unwrap()).unwrap();
            let exact = bias_terms_exact(shape, n_i, &qhat1_exact(n, w).unwrap());
            for (got, want) in rep.log2_terms.iter().zip(&exact) {
                let want = want.to_f64().log2();
                assert!((got - want).abs() <= 1e-9 * want.abs().max(1.0), "{got} vs {want}");
            }
            let worst = rep.log2_terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!(rep.log2_eps >= worst);
        }
    }
}
