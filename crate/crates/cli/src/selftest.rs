//! Quick checks that exercise every layer at small lengths.

use crate::args::SelftestArgs;
use crate::report::Report;
use crate::{load_secret_key, Outcome};
use anyhow::{ensure, Result};
use rand::RngCore;
use rug::Rational;
use std::sync::Arc;
use std::time::Instant;
use wave_core::dist::exact::{qhat1_exact, qhat2_exact};
use wave_core::dist::{digest_blob, qhat1, RejectionTables};
use wave_core::estimator::attack_exponent_asymptotic;
use wave_core::params::derive;
use wave_core::sig::{
    decode_public_key, decode_secret_key, decode_signature, encode_public_key, encode_secret_key, encode_signature,
};
use wave_core::{keygen, sign, verify, verify_bytes, Params, PublicKey, SecretKey, WaveError};

type Suite = fn(&mut dyn RngCore) -> Result<String>;

pub fn run(a: &SelftestArgs, rng: &mut dyn RngCore) -> Result<Outcome> {
    let suites: [(&str, Suite); 4] = [
        ("weight_laws", weight_laws),
        ("sign_verify", sign_verify),
        ("encodings", encodings),
        ("estimator", estimator),
    ];
    let mut r = Report::default();
    let mut failed = 0;
    for (name, suite) in suites {
        failed += record(&mut r, name, || suite(rng));
    }
    if let (Some(sk), Some(tables)) = (&a.sk, &a.tables) {
        failed += record(&mut r, "key_tables", || {
            load_secret_key(sk, tables)?;
            Ok("secret key matches the table blob".into())
        });
    }
    r.section("summary").put("failed", failed).put("passed", failed == 0);
    Ok(if failed == 0 {
        Outcome::Ok(r)
    } else {
        Outcome::Rejected(r)
    })
}

fn record(r: &mut Report, name: &str, f: impl FnOnce() -> Result<String>) -> usize {
    let t0 = Instant::now();
    let res = f();
    let mut s = r.section(name);
    s.num("ms", t0.elapsed().as_secs_f64() * 1e3);
    match res {
        Ok(detail) => {
            s.put("passed", true).put("detail", detail);
            0
        }
        Err(e) => {
            s.put("passed", false).put("detail", format!("{e:#}"));
            1
        }
    }
}

/// Counts `(|y − x|, m₁)` over every `(x, y) ∈ F3^{n/2} × F3^{n/2}` of
/// weight `w`: the weight of `e_V` under the map `(u, v) ↦ (u, u + v)`.
fn enumerate(n: usize, w: usize) -> Vec<Vec<u64>> {
    let h = n / 2;
    let mut counts = vec![vec![0u64; h + 1]; h + 1];
    let mut e = vec![0u8; n];
    loop {
        if e.iter().filter(|&&v| v != 0).count() == w {
            let (x, y) = e.split_at(h);
            let t = x.iter().zip(y).filter(|(a, b)| a != b).count();
            let m1 = x.iter().zip(y).filter(|(a, b)| (**a == 0) != (**b == 0)).count();
            counts[t][m1] += 1;
        }
        let mut i = 0;
        while i < n && e[i] == 2 {
            e[i] = 0;
            i += 1;
        }
        if i == n {
            return counts;
        }
        e[i] += 1;
    }
}

fn weight_laws(_: &mut dyn RngCore) -> Result<String> {
    let mut checked = 0;
    for n in (2..=8).step_by(2) {
        for w in 0..=n {
            let counts = enumerate(n, w);
            let total: u64 = counts.iter().flatten().sum();
            let q1 = qhat1_exact(n, w)?;
            let q1f = qhat1(n, w)?;
            for (t, row) in counts.iter().enumerate() {
                let rt: u64 = row.iter().sum();
                let expect = Rational::from((rt, total));
                ensure!(q1[t] == expect, "q̂1({t}) at (n, w) = ({n}, {w})");
                ensure!(
                    (q1f.prob(t).to_f64() - expect.to_f64()).abs() < 1e-12,
                    "float q̂1({t}) at ({n}, {w})"
                );
                if rt == 0 {
                    continue;
                }
                let q2 = qhat2_exact(n, w, t)?;
                for (s, &c) in row.iter().enumerate().take(t + 1) {
                    ensure!(q2[s] == (c, rt), "q̂2({s} | {t}) at ({n}, {w})");
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} conditional laws match enumeration for n <= 8"))
}

fn small_key(rng: &mut dyn RngCore) -> Result<(Params, Vec<u8>, PublicKey, SecretKey)> {
    let p = derive(16)?;
    let tables = RejectionTables::build(p.table_header(), p.tables)?;
    let blob = tables.export();
    let (pk, sk) = keygen(&p, Arc::new(tables), rng)?;
    Ok((p, blob, pk, sk))
}

fn sign_verify(rng: &mut dyn RngCore) -> Result<String> {
    let (p, _, pk, sk) = small_key(rng)?;
    let count = 20;
    for i in 0..count {
        let msg = format!("selftest message {i}");
        let sig = sign(&sk, msg.as_bytes(), rng)?;
        ensure!(sig.e.weight() == p.w, "signature {i} has weight {}", sig.e.weight());
        ensure!(verify(&pk, msg.as_bytes(), &sig), "signature {i} does not verify");
        ensure!(
            !verify(&pk, b"another message", &sig),
            "signature {i} verifies a different message"
        );
        let mut forged = sig.clone();
        let j = forged.e.support()[0];
        forged.e.set(j, -forged.e.get(j));
        ensure!(!verify(&pk, msg.as_bytes(), &forged), "modified signature {i} verifies");
    }
    Ok(format!("{count} signatures at n = {}", p.n))
}

fn encodings(rng: &mut dyn RngCore) -> Result<String> {
    let (p, blob, pk, sk) = small_key(rng)?;
    let digest = digest_blob(&blob);
    let pk2 = decode_public_key(&encode_public_key(&pk))?;
    ensure!(pk2 == pk, "public key does not round-trip");
    let sk_bytes = encode_secret_key(&sk, &digest);
    let tables = Arc::new(RejectionTables::import(&blob)?);
    let sk2 = decode_secret_key(&sk_bytes, tables.clone(), &digest)?;
    ensure!(sk2.public_key()? == pk, "secret key does not round-trip");
    let sig = sign(&sk2, b"m", rng)?;
    let bytes = encode_signature(&sig, p.lambda0);
    ensure!(decode_signature(&bytes)?.1 == sig, "signature does not round-trip");
    ensure!(verify_bytes(&pk, b"m", &bytes), "encoded signature does not verify");
    let mut tampered = blob.clone();
    let last = tampered.len() - 2;
    tampered[last] ^= 1;
    match decode_secret_key(&sk_bytes, tables, &digest_blob(&tampered)) {
        Err(WaveError::TableMismatch(_)) => {}
        other => anyhow::bail!("tampered table blob was not detected: {other:?}"),
    }
    Ok(format!(
        "keys of {} + {} bytes",
        encode_public_key(&pk).len(),
        sk_bytes.len()
    ))
}

fn estimator(_: &mut dyn RngCore) -> Result<String> {
    let pt = attack_exponent_asymptotic(0.676, 0.42255)?;
    ensure!((pt.w - 0.01768).abs() < 5e-4, "exponent {} at (0.676, 0.42255)", pt.w);
    Ok(format!("asymptotic exponent {:.5}", pt.w))
}
