use crate::args::{EstimateArgs, KeygenArgs, ParamsArgs, SignArgs, TablesArgs, VerifyArgs};
use crate::report::{Report, Section};
use crate::{hex, load_params, load_secret_key, preset, read, write, Outcome};
use anyhow::{bail, Context, Result};
use rand::RngCore;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;
use wave_core::dist::{digest_blob, qhat1, RejectionTables};
use wave_core::estimator::{
    attack_cost_finite, attack_exponent_asymptotic, bad_set_bound, epsilon_bound, AsymptoticPoint, CodeShape, CostPoint,
};
use wave_core::params::{derive_from_n, derive_with, DPolicy, ALPHA, RATE, SECURITY_EXPONENT};
use wave_core::sig::{
    decode_public_key, encode_public_key, encode_secret_key, encode_signature, public_key_len, signature_len,
};
use wave_core::{sign_with, verify_bytes, DecodeStats, DecoderOptions, Params};

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

pub fn put_params(r: &mut Report, p: &Params) {
    let mut s = r.section("params");
    for (k, v) in p.entries() {
        match v.parse::<u64>() {
            Ok(i) => s.put(k, i),
            Err(_) => s.num(k, v.parse().expect("entries are numeric")),
        };
    }
}

pub fn params(a: &ParamsArgs) -> Result<Outcome> {
    let policy: DPolicy = a.d_policy.as_deref().map(str::parse).transpose()?.unwrap_or_default();
    let p = if let Some(name) = &a.preset {
        preset(name)?
    } else if let Some(lambda) = a.lambda {
        derive_with(lambda, policy)?
    } else {
        let n = a.n.expect("clap requires one source");
        let lambda = (SECURITY_EXPONENT * n as f64).round().max(1.0) as u32;
        let d = a.d.unwrap_or_else(|| policy.d_for(lambda));
        derive_from_n(n, a.rate.unwrap_or(RATE), a.alpha.unwrap_or(ALPHA), d)?
    };
    if let Some(out) = &a.out {
        write(out, p.to_text().as_bytes())?;
    }
    let mut r = Report::default();
    put_params(&mut r, &p);
    r.section("sizes")
        .put("r", p.r())
        .put("kup", p.kup())
        .put("kvp", p.kvp())
        .num("n_i_band", p.n_i_band())
        .put("public_key_bytes", public_key_len(&p))
        .put("signature_bytes", signature_len(p.n, p.lambda0));
    Ok(Outcome::Ok(r))
}

fn build_tables(p: &Params, r: &mut Report) -> Result<RejectionTables> {
    let t0 = Instant::now();
    let tables = RejectionTables::build(p.table_header(), p.tables)?;
    r.section("tables")
        .num("m_v", tables.m_v().to_f64())
        .num("build_ms", ms(t0));
    Ok(tables)
}

pub fn tables(a: &TablesArgs) -> Result<Outcome> {
    let p = load_params(&a.source)?;
    let mut r = Report::default();
    let tables = build_tables(&p, &mut r)?;
    if let Some(rows) = a.rows {
        let t0 = Instant::now();
        let (lo, hi) = tables
            .relevant_t_range(-rows.abs())
            .context("tables carry no distribution of |e_V|")?;
        tables.precompute(lo, hi)?;
        r.section("rows")
            .put("t_lo", lo)
            .put("t_hi", hi)
            .num("mean_m_u", tables.mean_m_u(lo, hi)?)
            .num("build_ms", ms(t0));
    }
    let blob = tables.export();
    write(&a.out, &blob)?;
    r.section("output")
        .put("path", a.out.display().to_string())
        .put("bytes", blob.len())
        .put("sha3_256", hex(&digest_blob(&blob)));
    Ok(Outcome::Ok(r))
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

pub fn keygen(a: &KeygenArgs, rng: &mut dyn RngCore) -> Result<Outcome> {
    let p = load_params(&a.source)?;
    let mut r = Report::default();
    put_params(&mut r, &p);
    let (tables, blob, tables_path) = match &a.tables {
        Some(path) => {
            let blob = read(path)?;
            let t = RejectionTables::import(&blob).with_context(|| format!("loading {}", path.display()))?;
            (t, blob, path.clone())
        }
        None => {
            let t = build_tables(&p, &mut r)?;
            let blob = t.export();
            let path = with_ext(&a.out, "tables");
            write(&path, &blob)?;
            (t, blob, path)
        }
    };
    let digest = digest_blob(&blob);
    let t0 = Instant::now();
    let (pk, sk) = wave_core::keygen(&p, Arc::new(tables), rng)?;
    let keygen_ms = ms(t0);
    let pk_bytes = encode_public_key(&pk);
    let sk_bytes = encode_secret_key(&sk, &digest);
    let (pk_path, sk_path) = (with_ext(&a.out, "pk"), with_ext(&a.out, "sk"));
    write(&pk_path, &pk_bytes)?;
    write(&sk_path, &sk_bytes)?;
    r.section("keygen")
        .num("keygen_ms", keygen_ms)
        .put("n_i", sk.phi().n_i())
        .put("public_key", pk_path.display().to_string())
        .put("public_key_bytes", pk_bytes.len())
        .put("secret_key", sk_path.display().to_string())
        .put("secret_key_bytes", sk_bytes.len())
        .put("tables", tables_path.display().to_string())
        .put("tables_sha3_256", hex(&digest));
    Ok(Outcome::Ok(r))
}

pub fn sign(a: &SignArgs, rng: &mut dyn RngCore) -> Result<Outcome> {
    if a.count == 0 {
        bail!("--count must be at least 1");
    }
    let tables_path = a.tables.clone().unwrap_or_else(|| a.sk.with_extension("tables"));
    let sk = load_secret_key(&a.sk, &tables_path)?;
    let message = read(&a.message)?;
    let opts = DecoderOptions::default();
    let mut stats = DecodeStats::default();
    let t0 = Instant::now();
    let mut first = None;
    for _ in 0..a.count {
        let sig = sign_with(&sk, &message, &opts, &mut stats, rng)?;
        first.get_or_insert(sig);
    }
    let elapsed = ms(t0);
    let bytes = encode_signature(&first.expect("count ≥ 1"), sk.params().lambda0);
    write(&a.out, &bytes)?;
    let mut r = Report::default();
    r.section("sign")
        .put("signatures", a.count)
        .put("signature_bytes", bytes.len())
        .num("total_ms", elapsed)
        .num("ms_per_signature", elapsed / a.count as f64)
        .put("output", a.out.display().to_string());
    if a.stats {
        r.section("stats")
            .put("v_rejections", stats.v_rejections)
            .put("u_rejections", stats.u_rejections)
            .num("rejections_per_signature", stats.rejections() as f64 / a.count as f64)
            .put("v_bad_sets", stats.v_bad_sets)
            .put("u_bad_sets", stats.u_bad_sets)
            .put("u_weight_misses", stats.u_weight_misses)
            .put("k_redraws", stats.k_redraws);
    }
    Ok(Outcome::Ok(r))
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let pk = decode_public_key(&read(&a.pk)?).with_context(|| format!("loading {}", a.pk.display()))?;
    let message = read(&a.message)?;
    let sig = read(&a.sig)?;
    let t0 = Instant::now();
    let ok = verify_bytes(&pk, &message, &sig);
    let mut r = Report::default();
    r.section("verify").put("valid", ok).num("verify_ms", ms(t0));
    Ok(if ok { Outcome::Ok(r) } else { Outcome::Rejected(r) })
}

fn put_asymptotic(s: &mut Section, prefix: &str, pt: &Result<AsymptoticPoint, String>) {
    match pt {
        Ok(pt) => {
            s.num(&format!("{prefix}_exponent"), pt.w)
                .num(&format!("{prefix}_p"), pt.p)
                .num(&format!("{prefix}_l"), pt.l)
                .num(&format!("{prefix}_z"), pt.z)
                .num(&format!("{prefix}_c"), pt.c)
                .num(&format!("{prefix}_g"), pt.g)
                .num(&format!("{prefix}_f"), pt.f);
        }
        Err(e) => {
            s.put(&format!("{prefix}_error"), e.clone());
        }
    }
}

fn put_cost(s: &mut Section, prefix: &str, c: &CostPoint, n: usize) {
    s.num(&format!("{prefix}_log2_cost"), c.log2_cost)
        .num(&format!("{prefix}_exponent"), c.log2_cost / n as f64)
        .put(&format!("{prefix}_p"), c.p)
        .put(&format!("{prefix}_l"), c.l)
        .num(&format!("{prefix}_log2_psucc"), c.log2_psucc);
    if let Some(z) = c.dominant_z {
        s.put(&format!("{prefix}_z"), z);
    }
}

pub fn estimate(a: &EstimateArgs) -> Result<Outcome> {
    let p = load_params(&a.source)?;
    let shape = CodeShape::from(&p);
    let n_i = a.n_i.unwrap_or(p.n_i_target);
    if n_i > p.n / 2 {
        bail!("n_I = {n_i} exceeds n/2 = {}", p.n / 2);
    }
    let mut r = Report::default();
    put_params(&mut r, &p);

    let t0 = Instant::now();
    let bias = epsilon_bound(shape, n_i, &qhat1(p.n, p.w)?)?;
    r.section("bias")
        .put("n_i", n_i)
        .num("log2_term_uniform", bias.log2_terms[0])
        .num("log2_term_v", bias.log2_terms[1])
        .num("log2_term_type_i", bias.log2_terms[2])
        .num("log2_eps", bias.log2_eps)
        .num("log2_half_sqrt_eps", bias.log2_half_sqrt_eps)
        .num("ms", ms(t0));

    let t0 = Instant::now();
    let nf = p.n as f64;
    let (k, ku) = match a.asymptotic_at.as_deref() {
        Some([k, ku]) => (*k, *ku),
        Some(_) => bail!("--asymptotic-at takes two values"),
        None => (p.k() as f64 / nf, p.k_u as f64 / nf),
    };
    // The dual of a (U, U+V) code of relative dimensions (k, k_U) has
    // dimensions (1 − k, 1/2 − k_V) with k_V = k − k_U.
    let (dk, dku) = (1.0 - k, 0.5 - (k - ku));
    let primal = attack_exponent_asymptotic(k, ku).map_err(|e| e.to_string());
    let dual = attack_exponent_asymptotic(dk, dku).map_err(|e| e.to_string());
    let mut s = r.section("asymptotic");
    s.num("k", k).num("k_u", ku);
    put_asymptotic(&mut s, "primal", &primal);
    s.num("dual_k", dk).num("dual_k_u", dku);
    put_asymptotic(&mut s, "dual", &dual);
    s.num("ms", ms(t0));

    if !a.no_finite {
        let t0 = Instant::now();
        let rep = attack_cost_finite(shape, n_i)?;
        let mut s = r.section("finite_attack");
        put_cost(&mut s, "u", &rep.u, p.n);
        put_cost(&mut s, "v", &rep.v, p.n);
        put_cost(&mut s, "dual_u", &rep.dual_u, p.n);
        s.num("log2_min", rep.log2_min()).num("ms", ms(t0));
    }

    let mut s = r.section("bad_set");
    for (name, dim) in [("v", p.k_v), ("u", p.k_u)] {
        match bad_set_bound(p.n, dim, p.d) {
            Ok(b) => {
                s.num(&format!("{name}_log2_bound"), b.log2_bound)
                    .num(&format!("{name}_gamma"), b.gamma)
                    .put(&format!("{name}_vacuous"), b.vacuous);
            }
            Err(e) => {
                s.put(&format!("{name}_error"), e.to_string());
            }
        }
    }
    Ok(Outcome::Ok(r))
}
