//! System parameters: derivation from a security level or a block size, and
//! the canonical `key=value` text form.

use crate::dist::real::LnFactorials;
use crate::dist::{TableConfig, TableHeader};
use crate::error::{Result, WaveError};
use std::fmt;
use std::str::FromStr;

/// Code rate minimizing the public key under equal message and key attack
/// exponents.
pub const RATE: f64 = 0.633;
/// Alignment fraction for [`RATE`].
pub const ALPHA: f64 = 0.590656;
/// Common attack exponent: `n = λ / SECURITY_EXPONENT`.
pub const SECURITY_EXPONENT: f64 = 0.0141;

/// How the free-set padding `d` is chosen from `λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DPolicy {
    /// `d = ⌈162·λ/128⌉`, which gives `d = 162` at `λ = 128`.
    #[default]
    CaseStudy,
    /// Smallest `d` with `3^d ≥ 2^λ`.
    Balanced,
}

impl DPolicy {
    pub fn d_for(self, lambda: u32) -> usize {
        match self {
            DPolicy::CaseStudy => (162 * lambda as usize).div_ceil(128),
            DPolicy::Balanced => (lambda as f64 / 3f64.log2()).ceil() as usize,
        }
    }
}

impl FromStr for DPolicy {
    type Err = WaveError;
    fn from_str(s: &str) -> Result<DPolicy> {
        match s {
            "case-study" => Ok(DPolicy::CaseStudy),
            "balanced" => Ok(DPolicy::Balanced),
            _ => Err(WaveError::InvalidParams(format!("unknown d policy {s:?}"))),
        }
    }
}

/// A full parameter set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    pub n: usize,
    pub k_u: usize,
    pub k_v: usize,
    pub w: usize,
    pub d: usize,
    pub lambda: u32,
    pub lambda0: u32,
    /// Centre of the accepted band for the number of type-I blocks.
    pub n_i_target: usize,
    /// Probability that a sampled block of `φ` is of type I.
    pub type_i_prob: f64,
    pub tables: TableConfig,
}

impl Params {
    /// The 128-bit set `n = 9078, w = 8444, k_U = 3749, k_V = 1998, d = 162`.
    pub fn wave128() -> Params {
        let n = 9078;
        Params {
            n,
            k_u: 3749,
            k_v: 1998,
            w: 8444,
            d: 162,
            lambda: 128,
            lambda0: lambda0(128, 1u128 << 64),
            n_i_target: default_n_i_target(n),
            type_i_prob: 1.0 / 3.0,
            tables: TableConfig::CASE_STUDY,
        }
    }

    pub fn k(&self) -> usize {
        self.k_u + self.k_v
    }

    /// `k_U − d`.
    pub fn kup(&self) -> usize {
        self.k_u - self.d
    }

    /// `k_V − d`.
    pub fn kvp(&self) -> usize {
        self.k_v - self.d
    }

    /// Number of parity checks `n − k`.
    pub fn r(&self) -> usize {
        self.n - self.k()
    }

    pub fn table_header(&self) -> TableHeader {
        TableHeader {
            n: self.n,
            w: self.w,
            k_u: self.k_u,
            k_v: self.k_v,
            d: self.d,
        }
    }

    /// Half-width of the accepted `n_I` band, `3·sqrt((n/2)·p·(1−p))`.
    pub fn n_i_band(&self) -> f64 {
        let p = self.type_i_prob;
        3.0 * ((self.n / 2) as f64 * p * (1.0 - p)).sqrt()
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(WaveError::InvalidParams(m));
        let h = self.n / 2;
        if self.n == 0 || self.n % 2 != 0 {
            return bad(format!("n = {} must be positive and even", self.n));
        }
        if self.k_u > h || self.k_v > h {
            return bad(format!(
                "k_U = {}, k_V = {} must not exceed n/2 = {h}",
                self.k_u, self.k_v
            ));
        }
        if self.d > self.k_u.min(self.k_v) {
            return bad(format!("d = {} exceeds min(k_U, k_V)", self.d));
        }
        if self.k_u == h || self.k_v == h || self.kvp() == 0 || self.kup() == 0 {
            return bad("dimensions leave no parity checks or no free positions".into());
        }
        let (_, w_plus, _, _) = easy_bounds(self.n, self.k());
        if (self.w as f64) <= w_plus || self.w > self.n {
            return bad(format!("w = {} must lie in (w+_easy = {w_plus:.1}, n]", self.w));
        }
        if !(self.type_i_prob > 0.0 && self.type_i_prob < 1.0) {
            return bad(format!("type-I probability {} must lie in (0, 1)", self.type_i_prob));
        }
        if self.n_i_target > h {
            return bad(format!("n_I target {} exceeds n/2", self.n_i_target));
        }
        let t = self.tables;
        if !(t.sigma_v > 0.0 && t.sigma_u > 0.0 && t.eps_align.is_finite()) {
            return bad("table shape parameters must be positive".into());
        }
        Ok(())
    }

    /// Canonical text form, one `key=value` per line.
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// Parses the canonical text form. Blank lines and `#` comments are
    /// ignored; every key must appear exactly once.
    pub fn from_text(text: &str) -> Result<Params> {
        text.parse()
    }

    /// `(key, value)` pairs of the text form, in canonical order.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        vec![
            ("n", self.n.to_string()),
            ("k_u", self.k_u.to_string()),
            ("k_v", self.k_v.to_string()),
            ("k", self.k().to_string()),
            ("w", self.w.to_string()),
            ("d", self.d.to_string()),
            ("lambda", self.lambda.to_string()),
            ("lambda0", self.lambda0.to_string()),
            ("n_i_target", self.n_i_target.to_string()),
            ("type_i_prob", self.type_i_prob.to_string()),
            ("sigma_v", self.tables.sigma_v.to_string()),
            ("sigma_u", self.tables.sigma_u.to_string()),
            ("eps_align", self.tables.eps_align.to_string()),
        ]
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.entries() {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

impl FromStr for Params {
    type Err = WaveError;

    fn from_str(text: &str) -> Result<Params> {
        let mut map = std::collections::BTreeMap::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| WaveError::InvalidParams(format!("malformed line {line:?}")))?;
            if map.insert(k.trim().to_string(), v.trim().to_string()).is_some() {
                return Err(WaveError::InvalidParams(format!("duplicate key {k:?}")));
            }
        }
        fn take<T: FromStr>(map: &mut std::collections::BTreeMap<String, String>, key: &str) -> Result<T> {
            let v = map
                .remove(key)
                .ok_or_else(|| WaveError::InvalidParams(format!("missing key {key:?}")))?;
            v.parse()
                .map_err(|_| WaveError::InvalidParams(format!("bad value {v:?} for {key:?}")))
        }
        let p = Params {
            n: take(&mut map, "n")?,
            k_u: take(&mut map, "k_u")?,
            k_v: take(&mut map, "k_v")?,
            w: take(&mut map, "w")?,
            d: take(&mut map, "d")?,
            lambda: take(&mut map, "lambda")?,
            lambda0: take(&mut map, "lambda0")?,
            n_i_target: take(&mut map, "n_i_target")?,
            type_i_prob: take(&mut map, "type_i_prob")?,
            tables: TableConfig {
                sigma_v: take(&mut map, "sigma_v")?,
                sigma_u: take(&mut map, "sigma_u")?,
                eps_align: take(&mut map, "eps_align")?,
            },
        };
        let k: usize = take(&mut map, "k")?;
        if k != p.k() {
            return Err(WaveError::InvalidParams(format!("k = {k} differs from k_U + k_V")));
        }
        if let Some(key) = map.keys().next() {
            return Err(WaveError::InvalidParams(format!("unknown key {key:?}")));
        }
        Ok(p)
    }
}

fn default_n_i_target(n: usize) -> usize {
    (n as f64 / 6.0).round() as usize
}

/// `λ + 2·⌈log₂ q_sign⌉`.
pub fn lambda0(lambda: u32, q_sign_budget: u128) -> u32 {
    let budget = q_sign_budget.max(1);
    let ceil_log2 = 128 - (budget - 1).leading_zeros();
    lambda + 2 * ceil_log2
}

/// Parameters for block size `n` from the rate `r`, the alignment fraction
/// `alpha` and the padding `d`.
///
/// The equations for `w`, `k_V'` and `k_U'` are coupled through
/// `k' = k_U' + k_V'`. They are iterated in real arithmetic from
/// `k' = r·n − 2d` to a fixed point, and the floors are taken once at the
/// end. The shape parameters of the internal laws are scaled by `sqrt(n/9078)`
/// from their 128-bit values.
pub fn derive_from_n(n: usize, r: f64, alpha: f64, d: usize) -> Result<Params> {
    let infeasible = |m: String| Err(WaveError::Infeasible(m));
    if n < 4 || n % 2 != 0 {
        return infeasible(format!("n = {n} must be even and at least 4"));
    }
    if 3.0 * alpha <= 1.0 {
        return infeasible(format!("alpha = {alpha} must exceed 1/3"));
    }
    let nf = n as f64;
    let mut kp = r * nf - 2.0 * d as f64;
    let mut state = None;
    for _ in 0..20 {
        let rad = (3.0 * alpha - 1.0) * (3.0 * alpha + 4.0 * kp / nf - 1.0);
        if rad.is_nan() || rad < 0.0 {
            return infeasible(format!("negative radicand at n = {n}"));
        }
        let w = nf * (1.0 - alpha + rad.sqrt() / 3.0);
        let om = w / nf;
        let kvp = nf / 2.0 * 3.0 / (3.0 * alpha - 1.0) * ((1.0 - om).powi(2) + 0.5 * om * om - 1.0 / 3.0);
        let kup = nf / 2.0 * (-2.0 + 3.0 * om);
        let next = kup + kvp;
        let done = (next - kp).abs() < 1e-9;
        kp = next;
        state = Some((w, kvp, kup));
        if done {
            break;
        }
    }
    let (w, kvp, kup) = state.expect("at least one iteration");
    if (kvp + kup - kp).abs() > 1e-6 {
        return infeasible(format!("parameter equations do not settle at n = {n}"));
    }
    if !(w.is_finite() && kvp >= 1.0 && kup >= 1.0) {
        return infeasible(format!("negative dimensions at n = {n}"));
    }
    let (w, kvp, kup) = (w.floor() as usize, kvp.floor() as usize, kup.floor() as usize);
    let lambda = (SECURITY_EXPONENT * nf).round() as u32;
    let scale = (nf / 9078.0).sqrt();
    let base = TableConfig::CASE_STUDY;
    let p = Params {
        n,
        k_u: kup + d,
        k_v: kvp + d,
        w: w.min(n),
        d,
        lambda,
        lambda0: lambda0(lambda, 1u128 << 64),
        n_i_target: default_n_i_target(n),
        type_i_prob: 1.0 / 3.0,
        tables: TableConfig {
            sigma_v: base.sigma_v * scale,
            sigma_u: base.sigma_u * scale,
            eps_align: base.eps_align,
        },
    };
    p.validate().map_err(|e| WaveError::Infeasible(e.to_string()))?;
    Ok(p)
}

/// Parameters for `λ` bits of security with the default padding policy.
pub fn derive(lambda: u32) -> Result<Params> {
    derive_with(lambda, DPolicy::default())
}

/// Parameters for `λ` bits of security: `n = λ/0.0141` rounded to an even
/// integer, then [`derive_from_n`] at the optimal rate and alignment.
pub fn derive_with(lambda: u32, policy: DPolicy) -> Result<Params> {
    if lambda < 16 {
        return Err(WaveError::InvalidParams(format!("lambda = {lambda} is below 16")));
    }
    let n = 2 * (lambda as f64 / SECURITY_EXPONENT / 2.0).round() as usize;
    let mut p = derive_from_n(n, RATE, ALPHA, policy.d_for(lambda))?;
    p.lambda = lambda;
    p.lambda0 = lambda0(lambda, 1u128 << 64);
    Ok(p)
}

/// `(w⁻_easy, w⁺_easy, w⁻_GV, w⁺_GV)` for ternary codes of length `n` and
/// dimension `k`. The first two delimit the weights Prange reaches in
/// polynomial time; the last two are the smallest and largest `w` with
/// `binom(n, w)·2^w ≥ 3^{n−k}`.
pub fn easy_bounds(n: usize, k: usize) -> (f64, f64, usize, usize) {
    let (nf, kf) = (n as f64, k.min(n) as f64);
    let w_minus = 2.0 / 3.0 * (nf - kf);
    let w_plus = kf + 2.0 / 3.0 * (nf - kf);
    let lf = LnFactorials::new(n);
    let target = (nf - kf) * 3f64.log2();
    let ok = |w: usize| lf.log2_binom(n as i64, w as i64) + w as f64 >= target - 1e-9;
    let lo = (0..=n).find(|&w| ok(w)).unwrap_or(n);
    let hi = (0..=n).rev().find(|&w| ok(w)).unwrap_or(0);
    (w_minus, w_plus, lo, hi)
}
