//! Relative exponents (`lim (1/n) log2`) of the `U'` codeword search.

use crate::error::{Result, WaveError};

const LOG2_3: f64 = 1.584_962_500_721_156_2;
const REL_TOL: f64 = 1e-12;

/// Binary entropy `h₂(x)` in bits.
pub fn h2(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        return 0.0;
    }
    -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
}

/// Ternary entropy `h₃(x) = x + h₂(x)` in bits.
pub fn h3(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    x + h2(x)
}

/// Inverse of `h₃` on `[0, 2/3]`.
pub fn h3_inv(y: f64) -> Result<f64> {
    if !(0.0..=LOG2_3).contains(&y) {
        return Err(WaveError::RootFinding(format!("h3 takes no value {y}")));
    }
    bisect(|x| h3(x) - y, 0.0, 2.0 / 3.0)
}

/// Root of a function that is negative at `lo` and nonnegative at `hi`.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo.is_nan() || fhi.is_nan() || flo > 0.0 || fhi < 0.0 {
        return Err(WaveError::RootFinding(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= REL_TOL * mid.abs().max(1e-300) {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `x·h(y/x)` with the convention `0·h(0/0) = 0`.
fn scaled(x: f64, y: f64, h: fn(f64) -> f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * h(y / x)
    }
}

/// The exponents of one point `(p, ℓ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AsymptoticPoint {
    pub p: f64,
    pub l: f64,
    /// Dominant `z` of the success probability.
    pub z: f64,
    /// `C_{p,ℓ}`.
    pub c: f64,
    /// `G_ℓ(z)`.
    pub g: f64,
    /// `F_{p,ℓ}(z)`.
    pub f: f64,
    /// `W_{p,ℓ} = C − G(z) − F(z)`.
    pub w: f64,
}

struct Point {
    ku: f64,
    p: f64,
    kl: f64,
}

impl Point {
    fn g(&self, z: f64) -> f64 {
        0.5 * h2(2.0 * z) + scaled(0.5 - z, self.kl - 2.0 * z, h3) - h2(self.kl)
    }

    /// `i₀(z)`: the root in `[0, min(p/2, z)]` of
    /// `Q(i) = 2i(k+ℓ−2z−p+2i)² − (p−2i)²(z−i)`.
    fn i0(&self, z: f64) -> f64 {
        let (p, kl) = (self.p, self.kl);
        if p <= 0.0 || z <= 0.0 {
            return 0.0;
        }
        let q = |i: f64| 2.0 * i * (kl - 2.0 * z - p + 2.0 * i).powi(2) - (p - 2.0 * i).powi(2) * (z - i);
        bisect(q, 0.0, (p / 2.0).min(z)).unwrap_or(0.0)
    }

    fn phi(&self, z: f64, i: f64) -> f64 {
        scaled(self.kl - 2.0 * z, self.p - 2.0 * i, h3) + scaled(z, i, h3)
    }

    fn f_tilde(&self, z: f64) -> f64 {
        self.phi(z, self.i0(z)) - (self.kl - z - self.ku) * LOG2_3
    }

    /// `d(G + F̃)/dz`.
    fn dp(&self, z: f64) -> f64 {
        let i = self.i0(z);
        let num = 3.0 * (self.kl - 2.0 * z - self.p + 2.0 * i).powi(2);
        let den = 2.0 * (z - i) * (1.0 - 2.0 * self.kl + 2.0 * z);
        (num / den).log2()
    }

    fn c(&self, l: f64) -> f64 {
        let lpl = scaled(self.kl, self.p, h3) / 2.0;
        lpl.max(2.0 * lpl - l * LOG2_3)
    }
}

/// `W_{p,ℓ} = C − G(z) − F(z)` with `z = max(z₀, min(z₁, z₂))`, `z₀ =
/// (k+ℓ)²/2`, `z₁` the root of `F̃` and `z₂` the root of `(G + F̃)'`; `W = C`
/// when `F̃(z₀) ≥ 0`.
pub fn asymptotic_point(k: f64, ku: f64, p: f64, l: f64) -> Result<AsymptoticPoint> {
    let kl = k + l;
    if !(0.0 < ku && ku < k && kl < 1.0 && l >= 0.0 && (0.0..=kl).contains(&p)) {
        return Err(WaveError::InvalidParams(format!(
            "(k, k_U, p, ℓ) = ({k}, {ku}, {p}, {l})"
        )));
    }
    let pt = Point { ku, p, kl };
    let c = pt.c(l);
    let z0 = kl * kl / 2.0;
    let zhi = kl / 2.0;
    let ft0 = pt.f_tilde(z0);
    if ft0 >= 0.0 {
        return Ok(AsymptoticPoint {
            p,
            l,
            z: z0,
            c,
            g: pt.g(z0),
            f: 0.0,
            w: c,
        });
    }
    // Both F̃ and −(G + F̃)' change sign on (z₀, (k+ℓ)/2).
    let top = zhi * (1.0 - 1e-15);
    let z1 = if pt.f_tilde(top) < 0.0 {
        top
    } else {
        bisect(|z| pt.f_tilde(z), z0, top)?
    };
    let z2 = bisect(|z| -pt.dp(z), z0, top)?;
    let z = z0.max(z1.min(z2));
    let g = pt.g(z);
    let f = pt.f_tilde(z).min(0.0);
    Ok(AsymptoticPoint {
        p,
        l,
        z,
        c,
        g,
        f,
        w: c - g - f,
    })
}

/// `p` balancing the two terms of `C_{p,ℓ}`:
/// `h₃(p/(k+ℓ)) = 2ℓ log2 3/(k+ℓ)`.
fn balanced_p(k: f64, l: f64) -> Result<f64> {
    Ok((k + l) * h3_inv(2.0 * l * LOG2_3 / (k + l))?)
}

/// The approximation `i₀(z) ≈ (p/2)·pz/(pz + (k+ℓ−2z)²)`.
pub fn i0_approx(k: f64, p: f64, l: f64, z: f64) -> f64 {
    let r = k + l - 2.0 * z;
    p / 2.0 * p * z / (p * z + r * r)
}

/// The exact `i₀(z)` at `(k, p, ℓ)`.
pub fn i0_exact(k: f64, p: f64, l: f64, z: f64) -> f64 {
    Point { ku: 0.0, p, kl: k + l }.i0(z)
}

/// `min_ℓ W_{p(ℓ),ℓ}` with `p(ℓ)` from [`balanced_p`], for relative
/// dimensions `0 < k_U < k < 1`.
pub fn attack_exponent_asymptotic(k: f64, ku: f64) -> Result<AsymptoticPoint> {
    if !(0.0 < ku && ku < k && k < 1.0) {
        return Err(WaveError::InvalidParams(format!(
            "relative dimensions k = {k}, k_U = {ku}"
        )));
    }
    let l_top = k.min(1.0 - k) * 0.999;
    let eval = |l: f64| -> Result<AsymptoticPoint> { asymptotic_point(k, ku, balanced_p(k, l)?, l) };
    // Coarse log-spaced scan, then golden-section refinement around the best.
    let steps = 600;
    let (lo_exp, hi_exp) = (-8.0f64, l_top.log10());
    let grid: Vec<f64> = (0..=steps)
        .map(|s| 10f64.powf(lo_exp + (hi_exp - lo_exp) * s as f64 / steps as f64))
        .collect();
    let mut best: Option<(usize, AsymptoticPoint)> = None;
    for (s, &l) in grid.iter().enumerate() {
        if let Ok(pt) = eval(l) {
            if pt.w.is_finite() && best.map_or(true, |(_, b)| pt.w < b.w) {
                best = Some((s, pt));
            }
        }
    }
    let (s, mut best_pt) = best.ok_or_else(|| WaveError::RootFinding("no feasible ℓ".into()))?;
    let mut a = grid[s.saturating_sub(1)];
    let mut b = grid[(s + 1).min(steps)];
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let wf = |l: f64| eval(l).map(|p| p.w).unwrap_or(f64::INFINITY);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (wf(x1), wf(x2));
    while b - a > REL_TOL * b {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = wf(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = wf(x2);
        }
    }
    if let Ok(pt) = eval(0.5 * (a + b)) {
        if pt.w <= best_pt.w {
            best_pt = pt;
        }
    }
    Ok(best_pt)
}
