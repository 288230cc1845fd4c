use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn wave(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wave"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn text_entries(out: &Output) -> Vec<(String, String, String)> {
    let mut section = String::new();
    let mut v = Vec::new();
    for line in String::from_utf8_lossy(&out.stdout).lines() {
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            section = name.to_string();
        } else if let Some((k, val)) = line.split_once('=') {
            v.push((section.clone(), k.to_string(), val.to_string()));
        }
    }
    v
}

#[test]
fn params_reproduce_the_128_bit_set() {
    let dir = tempfile::tempdir().unwrap();
    let out = wave(dir.path(), &["--json", "params", "--lambda", "128", "-o", "p.txt"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let p = &v["params"];
    for (key, want) in [("n", 9078i64), ("w", 8444), ("k_u", 3749), ("k_v", 1998)] {
        let got = p[key].as_i64().unwrap();
        assert!((got - want).abs() <= 1, "{key} = {got}");
    }
    let pk = v["sizes"]["public_key_bytes"].as_f64().unwrap();
    assert!((pk / 3.8e6 - 1.0).abs() < 0.02, "public key of {pk} bytes");
    let text = std::fs::read_to_string(dir.path().join("p.txt")).unwrap();
    assert!(text.contains(&format!("n={}\n", p["n"])));
    assert!(text.contains(&format!("w={}\n", p["w"])));
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["params", "--lambda", "16", "--n", "500"][..],
        &["params", "--lambda", "16", "--preset", "wave128"],
        &["params"],
        &["params", "--lambda", "16", "--d", "3"],
        &["--seed", "3", "params", "--lambda", "16"],
        &["--insecure-deterministic", "params", "--lambda", "16"],
    ] {
        let out = wave(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = wave(dir.path(), &["params", "--lambda", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_carries_every_number_of_the_text_report() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["estimate", "--preset", "wave128", "--no-finite"];
    let text = wave(dir.path(), &args);
    let mut jargs = vec!["--json"];
    jargs.extend(args);
    let v = json(&wave(dir.path(), &jargs));
    assert!(text.status.success());
    let entries = text_entries(&text);
    assert!(entries.len() > 30);
    for (section, key, val) in entries {
        let j = &v[&section][&key];
        assert!(!j.is_null() || val == "none", "{section}.{key} missing from JSON");
        if key.ends_with("ms") {
            continue;
        }
        if let Ok(x) = val.parse::<f64>() {
            assert_eq!(j.as_f64().unwrap(), x, "{section}.{key}");
        }
    }
    let a = &v["asymptotic"];
    assert!(a["primal_exponent"].as_f64().unwrap() > 0.0);
    let b = v["bad_set"]["v_log2_bound"].as_f64().unwrap();
    assert!((b + 726.0).abs() < 10.0, "bad-set bound {b}");
}

#[test]
fn estimate_reports_the_reference_exponents() {
    let dir = tempfile::tempdir().unwrap();
    let out = wave(
        dir.path(),
        &[
            "--json",
            "estimate",
            "--preset",
            "wave128",
            "--no-finite",
            "--asymptotic-at",
            "0.676,0.42255",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let a = &json(&out)["asymptotic"];
    assert!((a["primal_exponent"].as_f64().unwrap() - 0.01768).abs() < 5e-4);
    assert!((a["dual_exponent"].as_f64().unwrap() - 0.01811).abs() < 5e-4);
}

#[test]
fn key_sign_verify_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let seeded = ["--insecure-deterministic", "--seed", "7"];
    assert!(wave(d, &["params", "--lambda", "16", "-o", "p.txt"]).status.success());
    let mut kg = seeded.to_vec();
    kg.extend(["keygen", "--params", "p.txt", "-o", "a"]);
    assert!(wave(d, &kg).status.success());
    let pk_a = std::fs::read(d.join("a.pk")).unwrap();
    let mut kg = seeded.to_vec();
    kg.extend(["keygen", "--params", "p.txt", "-o", "b"]);
    assert!(wave(d, &kg).status.success());
    assert_eq!(pk_a, std::fs::read(d.join("b.pk")).unwrap());
    assert_eq!(
        std::fs::read(d.join("a.sk")).unwrap(),
        std::fs::read(d.join("b.sk")).unwrap()
    );

    std::fs::write(d.join("msg"), b"attack at dawn").unwrap();
    let out = wave(
        d,
        &[
            "--json",
            "sign",
            "--sk",
            "a.sk",
            "--message",
            "msg",
            "-o",
            "sig",
            "--stats",
            "--count",
            "5",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["sign"]["signatures"], 5);
    assert!(v["stats"]["rejections_per_signature"].as_f64().is_some());
    let ok = wave(d, &["verify", "--pk", "a.pk", "--message", "msg", "--sig", "sig"]);
    assert_eq!(ok.status.code(), Some(0));

    let mut sig = std::fs::read(d.join("sig")).unwrap();
    let last = sig.len() - 1;
    sig[last] = if sig[last] == 0 { 1 } else { 0 };
    std::fs::write(d.join("bad"), &sig).unwrap();
    let bad = wave(d, &["verify", "--pk", "a.pk", "--message", "msg", "--sig", "bad"]);
    assert_eq!(bad.status.code(), Some(1));
    std::fs::write(d.join("other"), b"attack at dusk").unwrap();
    let bad = wave(d, &["verify", "--pk", "a.pk", "--message", "other", "--sig", "sig"]);
    assert_eq!(bad.status.code(), Some(1));
    let missing = wave(d, &["verify", "--pk", "nope.pk", "--message", "msg", "--sig", "sig"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn selftest_passes_and_detects_tampered_tables() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = wave(d, &["--json", "selftest"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    for suite in ["weight_laws", "sign_verify", "encodings", "estimator"] {
        assert_eq!(v[suite]["passed"], true, "{suite}");
        assert!(v[suite]["ms"].as_f64().unwrap() >= 0.0);
    }

    assert!(wave(d, &["params", "--lambda", "16", "-o", "p.txt"]).status.success());
    assert!(wave(d, &["keygen", "--params", "p.txt", "-o", "k"]).status.success());
    let ok = wave(d, &["selftest", "--sk", "k.sk", "--tables", "k.tables"]);
    assert!(ok.status.success());
    let mut blob = std::fs::read(d.join("k.tables")).unwrap();
    let mid = blob.len() / 2;
    blob[mid] ^= 0x01;
    std::fs::write(d.join("t.tables"), &blob).unwrap();
    let bad = wave(d, &["--json", "selftest", "--sk", "k.sk", "--tables", "t.tables"]);
    assert_eq!(bad.status.code(), Some(1));
    let v = json(&bad);
    assert_eq!(v["key_tables"]["passed"], false);
    assert!(v["key_tables"]["detail"].as_str().unwrap().contains("hash mismatch"));
}

#[test]
fn thread_count_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_wave"))
        .current_dir(dir.path())
        .env("WAVE_THREADS", "zero")
        .args(["params", "--lambda", "16"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_wave"))
        .current_dir(dir.path())
        .env("WAVE_THREADS", "2")
        .args(["params", "--lambda", "16"])
        .output()
        .unwrap();
    assert!(out.status.success());
}
