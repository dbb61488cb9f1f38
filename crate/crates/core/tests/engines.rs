use popov_interp::mib::{interpolant_check, iterative_mib, minimal_interpolation_basis};
use popov_interp::random::{random_instance, ShiftKind};
use popov_interp::{popov_mib, Modulus, NTT_PRIME};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn kind(k: u8) -> ShiftKind {
    [ShiftKind::Zero, ShiftKind::Hermite, ShiftKind::Uniform][k as usize % 3]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn popov_engine_is_canonical(
        seed in any::<u64>(),
        big in any::<bool>(),
        m in 1usize..=5,
        sigma in 0usize..=30,
        eig in 1usize..=4,
        shift in any::<u8>(),
    ) {
        let f = Modulus::new(if big { NTT_PRIME } else { 97 }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, f, m, sigma, eig, 6, kind(shift));
        let (p, d) = popov_mib(&inst).unwrap();
        prop_assert!(p.is_popov(inst.shift()));
        prop_assert!(interpolant_check(&p, &inst).unwrap());
        prop_assert!(d.sum() <= sigma);
        prop_assert_eq!((p.clone(), d.clone()), iterative_mib(&inst));
        let (w, dw) = minimal_interpolation_basis(&inst).unwrap();
        prop_assert!(w.is_weak_popov(inst.shift(), true));
        prop_assert_eq!(&dw, &d);
        prop_assert_eq!(w.weak_popov_to_popov(inst.shift()).unwrap(), p.clone());
        // translating the shift changes nothing
        let moved = inst.with_shift(inst.shift().translate(-7)).unwrap();
        prop_assert_eq!(popov_mib(&moved).unwrap(), (p, d));
    }
}

#[test]
fn large_blocks_and_single_eigenvalue() {
    let f = Modulus::new(NTT_PRIME).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for sigma in [60, 97, 130] {
        let inst = random_instance(&mut rng, f, 3, sigma, 1, sigma, ShiftKind::Hermite);
        let (p, d) = popov_mib(&inst).unwrap();
        assert_eq!((p, d), iterative_mib(&inst));
    }
}
