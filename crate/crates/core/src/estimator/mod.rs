//! Security and distribution analytics: the bias of the public syndrome
//! distribution, codeword weight densities of generalized `(U, U+V)` codes,
//! the cost of key-recovery attacks (finite length and asymptotic), the
//! bad free-set bound and a pairwise leakage scan of signatures.
//!
//! Log-domain quantities are base 2 throughout.

mod asymptotic;
mod attack;
mod badset;
mod bias;
mod density;
mod leakage;

pub use asymptotic::{
    asymptotic_point, attack_exponent_asymptotic, h2, h3, h3_inv, i0_approx, i0_exact, AsymptoticPoint,
};
pub use attack::{attack_cost_finite, c1_log2, f_lb, psucc_u, psucc_v, AttackReport, CostPoint, VSuccessTable};
pub use badset::{bad_set_bound, gamma, BadSetBound};
pub use bias::{bias_terms_exact, epsilon_bound, BiasReport};
pub use density::{weight_density, weight_density_with, WeightDensity};
pub use leakage::{bonferroni_z, pair_scan, PairScan};

use crate::params::Params;

/// The dimensions the estimates depend on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CodeShape {
    pub n: usize,
    pub k_u: usize,
    pub k_v: usize,
    pub w: usize,
}

impl CodeShape {
    pub fn k(&self) -> usize {
        self.k_u + self.k_v
    }

    pub fn half(&self) -> usize {
        self.n / 2
    }
}

impl From<&Params> for CodeShape {
    fn from(p: &Params) -> CodeShape {
        CodeShape {
            n: p.n,
            k_u: p.k_u,
            k_v: p.k_v,
            w: p.w,
        }
    }
}
