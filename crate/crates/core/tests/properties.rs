use num_complex::Complex64 as Z;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use corrwit::states::{random_fully_product, random_pure, random_vector};
use corrwit::tensor::{
    expectation, min_eigenvalue, schmidt_max_sq, CMatrix, HermitianOperator, PartyStructure, PureState,
};
use corrwit::Kron;

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix<f64> {
    let v: Vec<Z> = random_vector(n * n, rng);
    let a = CMatrix::from_fn(n, |i, j| v[i * n + j]);
    &a + &a.adjoint()
}

fn dims() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(2usize..=3, 2..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_expectation_factorizes(seed in any::<u64>(), da in 2usize..=4, db in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sa = PartyStructure::new(vec![da]).unwrap();
        let sb = PartyStructure::new(vec![db]).unwrap();
        let a = HermitianOperator::new(random_hermitian(da, &mut rng), sa.clone()).unwrap();
        let b = HermitianOperator::new(random_hermitian(db, &mut rng), sb.clone()).unwrap();
        let x = random_pure::<f64, _>(&sa, &mut rng);
        let y = random_pure::<f64, _>(&sb, &mut rng);
        let joint = expectation(&a.kron(&b), &x.kron(&y)).unwrap();
        let split = expectation(&a, &x).unwrap() * expectation(&b, &y).unwrap();
        prop_assert!((joint - split).abs() < 1e-12 * (1.0 + split.abs()));
    }

    #[test]
    fn min_eigenvalue_shifts(seed in any::<u64>(), n in 1usize..=12, s in -5.0f64..5.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st = PartyStructure::new(vec![n.max(2)]).unwrap();
        let h = HermitianOperator::new(random_hermitian(n.max(2), &mut rng), st).unwrap();
        let lo = min_eigenvalue(&h).unwrap();
        let shifted = min_eigenvalue(&h.shifted(s)).unwrap();
        prop_assert!((shifted - (lo + s)).abs() < 1e-11);
    }

    #[test]
    fn schmidt_bounds(seed in any::<u64>(), dims in dims()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let st = PartyStructure::new(dims.clone()).unwrap();
        let psi = random_pure::<f64, _>(&st, &mut rng);
        let prod = random_fully_product::<f64, _>(&st, &mut rng);
        for cut in st.all_bipartitions() {
            let lower = 1.0 / cut.dim_a().min(cut.dim_b()) as f64;
            let v = schmidt_max_sq(&psi, cut.side_a()).unwrap();
            prop_assert!(v >= lower - 1e-12 && v <= 1.0 + 1e-12);
            prop_assert!(v < 1.0 - 1e-9, "Haar state is entangled across every cut");
            let p = schmidt_max_sq(&prod, cut.side_a()).unwrap();
            prop_assert!((p - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn maximally_entangled_hits_lower_bound(d in 2usize..=6) {
        let psi = corrwit::states::max_entangled_qudit::<f64>(d).unwrap();
        prop_assert!((schmidt_max_sq(&psi, &[0]).unwrap() - 1.0 / d as f64).abs() < 1e-12);
    }

    #[test]
    fn inner_product_kron(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = PartyStructure::qubits(2);
        let (a, b, c, d): (PureState<f64>, PureState<f64>, PureState<f64>, PureState<f64>) = (
            random_pure(&s, &mut rng), random_pure(&s, &mut rng), random_pure(&s, &mut rng), random_pure(&s, &mut rng),
        );
        let lhs = a.kron(&b).inner(&c.kron(&d));
        let rhs = a.inner(&c) * b.inner(&d);
        prop_assert!((lhs - rhs).norm() < 1e-13);
    }
}
