use crate::dist::real::Real;
use crate::dist::PREC;
use crate::f3::TritVec;
use rayon::prelude::*;

/// The most extreme coordinate pair of a set of signatures under the
/// statistic `|{e_i = −e_j}| − |{e_i = e_j}|` (over signatures where both
/// entries are nonzero), standardized by its null deviation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairScan {
    pub pair: (usize, usize),
    pub z: f64,
    pub pairs: usize,
    pub samples: usize,
}

/// Two-sided normal quantile at level `alpha / pairs`.
pub fn bonferroni_z(alpha: f64, pairs: usize) -> f64 {
    let target = alpha / pairs.max(1) as f64;
    // P(|Z| > z) = erfc(z/√2) is decreasing in z.
    let tail = |z: f64| Real::with_val(PREC, z / std::f64::consts::SQRT_2).erfc().to_f64();
    let (mut lo, mut hi) = (0.0f64, 40.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if tail(mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Scans every coordinate pair of `samples` (all of one length).
pub fn pair_scan(samples: &[TritVec]) -> PairScan {
    let n = samples.first().map_or(0, |e| e.len());
    let words = samples.len().div_ceil(64);
    // plus[i], minus[i]: bitsets over the samples.
    let mut plus = vec![vec![0u64; words]; n];
    let mut minus = vec![vec![0u64; words]; n];
    for (s, e) in samples.iter().enumerate() {
        assert_eq!(e.len(), n, "samples of different lengths");
        for i in e.support() {
            let bit = 1u64 << (s % 64);
            if e.get(i).value() == 1 {
                plus[i][s / 64] |= bit;
            } else {
                minus[i][s / 64] |= bit;
            }
        }
    }
    let pop = |a: &[u64], b: &[u64]| a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as i64).sum::<i64>();
    let best = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = ((i, i), 0.0f64);
            for j in i + 1..n {
                let same = pop(&plus[i], &plus[j]) + pop(&minus[i], &minus[j]);
                let opp = pop(&plus[i], &minus[j]) + pop(&minus[i], &plus[j]);
                let c = same + opp;
                if c == 0 {
                    continue;
                }
                let z = (opp - same) as f64 / (c as f64).sqrt();
                if z.abs() > best.1.abs() {
                    best = ((i, j), z);
                }
            }
            best
        })
        .reduce(
            || ((0, 0), 0.0),
            |a, b| {
                if b.1.abs() > a.1.abs() || (b.1.abs() == a.1.abs() && b.0 < a.0) {
                    b
                } else {
                    a
                }
            },
        );
    PairScan {
        pair: best.0,
        z: best.1,
        pairs: n * n.saturating_sub(1) / 2,
        samples: samples.len(),
    }
}
