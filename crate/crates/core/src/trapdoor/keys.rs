use super::prange::HalfCode;
use super::uv::{build_parity_check, UVMap};
use crate::dist::RejectionTables;
use crate::error::{Result, WaveError};
use crate::f3::{Perm, TritMat};
use crate::params::Params;
use rand::Rng;
use std::sync::Arc;

/// Attempts per randomly drawn key component.
pub const KEYGEN_BUDGET: usize = 100;

/// The public parity-check matrix `H_pk = S·H_sk·P`, in systematic form
/// `[I_{n−k} | R]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PublicKey {
    params: Params,
    h_pk: TritMat,
}

impl PublicKey {
    /// Wraps a systematic `(n−k)×n` matrix.
    pub fn new(params: Params, h_pk: TritMat) -> Result<PublicKey> {
        let r = params.r();
        if h_pk.rows() != r || h_pk.cols() != params.n {
            return Err(WaveError::Dimension(format!(
                "public matrix is {}x{}, expected {r}x{}",
                h_pk.rows(),
                h_pk.cols(),
                params.n
            )));
        }
        Ok(PublicKey { params, h_pk })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn h_pk(&self) -> &TritMat {
        &self.h_pk
    }
}

/// `(φ, H_U, H_V, S, P)` with `S` kept as its inverse, and the rejection
/// tables for the key's parameters.
#[derive(Clone, Debug)]
pub struct SecretKey {
    params: Params,
    phi: UVMap,
    h_u: HalfCode,
    h_v: HalfCode,
    s_inv: TritMat,
    perm: Perm,
    tables: Arc<RejectionTables>,
}

impl SecretKey {
    /// Assembles a key from its parts, checking dimensions and that `S⁻¹` is
    /// the leading block of `H_sk·P`.
    pub fn from_parts(
        params: Params,
        phi: UVMap,
        h_u: TritMat,
        h_v: TritMat,
        s_inv: TritMat,
        perm: Perm,
        tables: Arc<RejectionTables>,
    ) -> Result<SecretKey> {
        let m = params.n / 2;
        let r = params.r();
        if phi.half_len() != m
            || h_u.rows() != m - params.k_u
            || h_v.rows() != m - params.k_v
            || h_u.cols() != m
            || h_v.cols() != m
            || s_inv.rows() != r
            || s_inv.cols() != r
            || perm.len() != params.n
        {
            return Err(WaveError::Dimension(
                "secret key parts do not match the parameters".into(),
            ));
        }
        if tables.header() != params.table_header() || tables.config() != params.tables {
            return Err(WaveError::TableMismatch(
                "tables were built for other parameters".into(),
            ));
        }
        let g = perm.apply_cols(&build_parity_check(&phi, &h_u, &h_v)?)?;
        let lead: Vec<usize> = (0..r).collect();
        if g.select_columns(&lead) != s_inv {
            return Err(WaveError::Decode("S⁻¹ does not match (φ, H_U, H_V, P)".into()));
        }
        Ok(SecretKey {
            params,
            phi,
            h_u: HalfCode::new(h_u),
            h_v: HalfCode::new(h_v),
            s_inv,
            perm,
            tables,
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn phi(&self) -> &UVMap {
        &self.phi
    }

    pub fn h_u(&self) -> &HalfCode {
        &self.h_u
    }

    pub fn h_v(&self) -> &HalfCode {
        &self.h_v
    }

    pub fn s_inv(&self) -> &TritMat {
        &self.s_inv
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    pub fn tables(&self) -> &RejectionTables {
        &self.tables
    }

    pub fn tables_arc(&self) -> Arc<RejectionTables> {
        self.tables.clone()
    }

    /// `H_sk = H(φ, H_U, H_V)`.
    pub fn h_sk(&self) -> TritMat {
        build_parity_check(&self.phi, self.h_u.h(), self.h_v.h()).expect("dimensions checked at construction")
    }

    /// Recomputes the public key.
    pub fn public_key(&self) -> Result<PublicKey> {
        let mut g = self.perm.apply_cols(&self.h_sk())?;
        let r = self.params.r();
        let pivots = g.reduce_in_place(r);
        if pivots.len() != r {
            return Err(WaveError::Singular);
        }
        PublicKey::new(self.params, g)
    }
}

fn full_rank_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, budget: usize, rng: &mut R) -> Result<TritMat> {
    for _ in 0..budget {
        let h = TritMat::random(rows, cols, rng);
        if h.rank() == rows {
            return Ok(h);
        }
    }
    Err(WaveError::RetryBudget(format!(
        "no full-rank {rows}x{cols} matrix drawn"
    )))
}

/// Key generation with the default resampling budget.
pub fn keygen<R: Rng + ?Sized>(
    params: &Params,
    tables: Arc<RejectionTables>,
    rng: &mut R,
) -> Result<(PublicKey, SecretKey)> {
    keygen_with(params, tables, KEYGEN_BUDGET, rng)
}

/// Draws `φ` with `n_I` in the accepted band, full-rank `H_U` and `H_V`,
/// and a uniform `P` for which the leading `n − k` columns of `H_sk·P` are
/// invertible; `S` is the inverse of that block, so that `H_pk` is
/// systematic.
pub fn keygen_with<R: Rng + ?Sized>(
    params: &Params,
    tables: Arc<RejectionTables>,
    budget: usize,
    rng: &mut R,
) -> Result<(PublicKey, SecretKey)> {
    params.validate()?;
    if tables.header() != params.table_header() || tables.config() != params.tables {
        return Err(WaveError::TableMismatch(
            "tables were built for other parameters".into(),
        ));
    }
    let m = params.n / 2;
    let band = params.n_i_band();
    let phi = (0..budget)
        .map(|_| UVMap::random(m, params.type_i_prob, rng))
        .find(|phi| (phi.n_i() as f64 - params.n_i_target as f64).abs() <= band)
        .ok_or_else(|| WaveError::RetryBudget("n_I never fell in the accepted band".into()))?;
    let h_u = full_rank_matrix(m - params.k_u, m, budget, rng)?;
    let h_v = full_rank_matrix(m - params.k_v, m, budget, rng)?;
    let h_sk = build_parity_check(&phi, &h_u, &h_v)?;
    let r = params.r();
    let lead: Vec<usize> = (0..r).collect();
    for _ in 0..budget {
        let perm = Perm::random(params.n, rng);
        let g = perm.apply_cols(&h_sk)?;
        let mut sys = g.clone();
        if sys.reduce_in_place(r).len() != r {
            continue;
        }
        let sk = SecretKey {
            params: *params,
            phi,
            h_u: HalfCode::new(h_u),
            h_v: HalfCode::new(h_v),
            s_inv: g.select_columns(&lead),
            perm,
            tables,
        };
        return Ok((PublicKey::new(*params, sys)?, sk));
    }
    Err(WaveError::RetryBudget(
        "no permutation gave an invertible leading block".into(),
    ))
}
