use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use wave_core::dist::{digest_blob, RejectionTables};
use wave_core::params::derive;
use wave_core::sig::{
    decode_public_key, decode_secret_key, decode_signature, encode_public_key, encode_secret_key, encode_signature,
    public_key_len, secret_key_table_digest, signature_len,
};
use wave_core::{keygen, sign, verify, verify_bytes, WaveError};

#[test]
fn keys_and_signatures_survive_encoding() {
    let p = derive(16).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tables = RejectionTables::build(p.table_header(), p.tables).unwrap();
    let blob = tables.export();
    let digest = digest_blob(&blob);
    let (pk, sk) = keygen(&p, Arc::new(tables), &mut rng).unwrap();

    let pk_bytes = encode_public_key(&pk);
    assert_eq!(pk_bytes.len(), public_key_len(&p));
    let pk2 = decode_public_key(&pk_bytes).unwrap();
    assert_eq!(pk2.h_pk(), pk.h_pk());

    let sk_bytes = encode_secret_key(&sk, &digest);
    assert_eq!(secret_key_table_digest(&sk_bytes).unwrap(), digest);
    let imported = Arc::new(RejectionTables::import(&blob).unwrap());
    let sk2 = decode_secret_key(&sk_bytes, imported.clone(), &digest).unwrap();
    assert_eq!(sk2.public_key().unwrap().h_pk(), pk.h_pk());
    let mut wrong = digest;
    wrong[0] ^= 1;
    assert!(matches!(
        decode_secret_key(&sk_bytes, imported, &wrong),
        Err(WaveError::TableMismatch(_))
    ));

    let msg = b"encoded message";
    let sig = sign(&sk2, msg, &mut rng).unwrap();
    assert!(verify(&pk2, msg, &sig));
    let bytes = encode_signature(&sig, p.lambda0);
    assert_eq!(bytes.len(), signature_len(p.n, p.lambda0));
    let (lambda0, back) = decode_signature(&bytes).unwrap();
    assert_eq!((lambda0, &back), (p.lambda0, &sig));
    assert!(verify_bytes(&pk, msg, &bytes));
    assert!(!verify_bytes(&pk, msg, &bytes[..bytes.len() - 1]));
    assert!(!verify_bytes(&pk, b"other message", &bytes));
}

#[test]
fn seeded_keygen_is_reproducible() {
    let p = derive(16).unwrap();
    let tables = Arc::new(RejectionTables::build(p.table_header(), p.tables).unwrap());
    let (a, _) = keygen(&p, tables.clone(), &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
    let (b, _) = keygen(&p, tables.clone(), &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
    let (c, _) = keygen(&p, tables, &mut ChaCha8Rng::seed_from_u64(6)).unwrap();
    assert_eq!(a.h_pk(), b.h_pk());
    assert_ne!(a.h_pk(), c.h_pk());
}
