use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wave_core::f3::{pack_trits, packed_len, unpack_trits};
use wave_core::{Perm, TritMat, TritVec, UVMap};

fn trits(max_len: usize) -> impl Strategy<Value = TritVec> {
    proptest::collection::vec(0u8..3, 0..max_len).prop_map(|v| TritVec::from_values(&v).unwrap())
}

proptest! {
    #[test]
    fn packing_round_trips(v in trits(300)) {
        let bytes = pack_trits(&v);
        prop_assert_eq!(bytes.len(), packed_len(v.len()));
        prop_assert!(bytes.iter().all(|&b| b <= 242));
        prop_assert_eq!(unpack_trits(&bytes, v.len()).unwrap(), v);
    }

    #[test]
    fn syndrome_is_linear(seed in any::<u64>(), rows in 1usize..40, cols in 1usize..90) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = TritMat::random(rows, cols, &mut rng);
        let (x, y) = (TritVec::random(cols, &mut rng), TritVec::random(cols, &mut rng));
        let lhs = h.syndrome(&x.add(&y).unwrap()).unwrap();
        let rhs = h.syndrome(&x).unwrap().add(&h.syndrome(&y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(h.syndrome(&x.neg()).unwrap(), h.syndrome(&x).unwrap().neg());
    }

    #[test]
    fn solve_inverts_square_systems(seed in any::<u64>(), rows in 1usize..40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = TritMat::random(rows, rows, &mut rng);
        prop_assume!(h.rank() == rows);
        let s = TritVec::random(rows, &mut rng);
        prop_assert_eq!(h.syndrome(&h.solve(&s).unwrap()).unwrap(), s);
    }

    #[test]
    fn permutations_invert(seed in any::<u64>(), n in 1usize..100) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = Perm::random(n, &mut rng);
        let x = TritVec::random(n, &mut rng);
        let back = p.inverse().apply_vec(&p.apply_vec(&x).unwrap()).unwrap();
        prop_assert_eq!(p.apply_vec(&x).unwrap().weight(), x.weight());
        prop_assert_eq!(back, x);
    }

    #[test]
    fn uv_map_inverts(seed in any::<u64>(), half in 1usize..60) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = UVMap::uniform(half, &mut rng);
        let (u, v) = (TritVec::random(half, &mut rng), TritVec::random(half, &mut rng));
        let e = phi.apply(&u, &v).unwrap();
        prop_assert_eq!(phi.inverse(&e).unwrap(), (u, v));
    }
}
