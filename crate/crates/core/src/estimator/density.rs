use super::CodeShape;
use crate::dist::real::{pow2, pow3, zero, Binomials, Real};
use crate::dist::PREC;
use crate::error::{Result, WaveError};

/// Expected numbers of codewords of one weight `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightDensity {
    /// Codewords `(a⊙u, c⊙u)` with `u ∈ U`.
    pub u0: Real,
    /// Codewords `(b⊙v, d⊙v)` with `v ∈ V`.
    pub v0: Real,
    /// All codewords of the generalized `(U, U+V)` code.
    pub uv: Real,
    /// A random code of the same length and dimension.
    pub random: Real,
}

/// [`weight_density_with`] with a fresh binomial table.
pub fn weight_density(shape: CodeShape, n_i: usize, z: usize) -> Result<WeightDensity> {
    weight_density_with(&Binomials::new(shape.n), shape, n_i, z)
}

/// Expected weight-`z` codeword counts of a normalized generalized
/// `(U, U+V)` code with `n_I` type-I blocks and uniformly random parity-check
/// matrices for `U` and `V`, and of a uniformly random code.
pub fn weight_density_with(b: &Binomials, shape: CodeShape, n_i: usize, z: usize) -> Result<WeightDensity> {
    let CodeShape { n, k_u, k_v, .. } = shape;
    let h = n / 2;
    if z > n || n_i > h || k_u > h || k_v > h || b.max_n() < n {
        return Err(WaveError::InvalidParams(format!(
            "weight {z} for shape {shape:?} with n_I = {n_i}"
        )));
    }
    let (zi, hi, ni) = (z as i64, h as i64, n_i as i64);
    // Codewords (b⊙v, d⊙v): a type-I block contributes one nonzero entry
    // (j of them), a type-II block two.
    let mut v_words = zero();
    let mut j = (z % 2) as i64;
    while j <= zi.min(ni) {
        let t = b.binom(ni, j) * b.binom(hi - ni, (zi - j) / 2);
        v_words += Real::with_val(PREC, t) * pow2((zi + j) / 2);
        j += 2;
    }
    let u_words = if z % 2 == 0 {
        Real::with_val(PREC, b.binom(hi, zi / 2) * pow2(zi / 2))
    } else {
        zero()
    };
    let all = Real::with_val(PREC, b.binom(n as i64, zi) * pow2(zi));
    let u0 = Real::with_val(PREC, &u_words / pow3((h - k_u) as u32));
    let v0 = Real::with_val(PREC, &v_words / pow3((h - k_v) as u32));
    let r = pow3((n - shape.k()) as u32);
    let both = (Real::with_val(PREC, &all - &u_words) - &v_words) / &r;
    let uv = Real::with_val(PREC, &u0 + &v0) + both;
    Ok(WeightDensity {
        u0,
        v0,
        uv,
        random: all / r,
    })
}
