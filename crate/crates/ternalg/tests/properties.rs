//! Property-based invariants for the algebra layer: trilinearity, the
//! equivalence of the contracted and vector-level associativity checks,
//! closure of the constructions, and file-format round trips.

use proptest::prelude::*;

use ternalg::{
    bilinear_algebra, binary_assoc_residual, cyclic_heap_table, direct_sum, heap_algebra,
    hom_residual, star_reduce, tensor_product, BilinearForm, FibreVector, LinearMap,
    StructureTensor, TernaryAlgebra, Tolerance,
};

fn tensor_strategy(dim: usize) -> impl Strategy<Value = TernaryAlgebra> {
    prop::collection::vec(-2.0f64..2.0, dim * dim * dim * dim).prop_map(move |entries| {
        TernaryAlgebra::new(StructureTensor::from_flat(dim, entries).unwrap(), None)
    })
}

fn symmetric_form_strategy(dim: usize) -> impl Strategy<Value = BilinearForm> {
    prop::collection::vec(-2.0f64..2.0, dim * (dim + 1) / 2).prop_map(move |upper| {
        let mut rows = vec![vec![0.0; dim]; dim];
        let mut it = upper.into_iter();
        for i in 0..dim {
            for j in i..dim {
                let v = it.next().unwrap();
                rows[i][j] = v;
                rows[j][i] = v;
            }
        }
        BilinearForm::from_rows(&rows)
    })
}

fn antisymmetric_form_strategy(dim: usize) -> impl Strategy<Value = BilinearForm> {
    prop::collection::vec(-2.0f64..2.0, dim * (dim - 1) / 2).prop_map(move |upper| {
        let mut rows = vec![vec![0.0; dim]; dim];
        let mut it = upper.into_iter();
        for i in 0..dim {
            for j in i + 1..dim {
                let v = it.next().unwrap();
                rows[i][j] = v;
                rows[j][i] = -v;
            }
        }
        BilinearForm::from_rows(&rows)
    })
}

fn vector_strategy(dim: usize) -> impl Strategy<Value = FibreVector> {
    prop::collection::vec(-3.0f64..3.0, dim).prop_map(FibreVector::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_trilinear(
        a in (2usize..=4).prop_flat_map(tensor_strategy),
        s in -2.0f64..2.0,
        t in -2.0f64..2.0,
    ) {
        let n = a.dim();
        let mk = |seed: u64| {
            let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15) | 1;
            FibreVector::new((0..n).map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
            }).collect())
        };
        let (u, u2, v, w) = (mk(1), mk(2), mk(3), mk(4));
        let combo = u.scaled(s).add(&u2.scaled(t));
        let scale = 1.0 + a.structure().max_abs();

        // slot 1
        let lhs = a.product(&combo, &v, &w).unwrap();
        let rhs = a.product(&u, &v, &w).unwrap().scaled(s)
            .add(&a.product(&u2, &v, &w).unwrap().scaled(t));
        prop_assert!(lhs.sub(&rhs).max_abs() <= 1e-12 * scale);
        // slot 2
        let lhs = a.product(&v, &combo, &w).unwrap();
        let rhs = a.product(&v, &u, &w).unwrap().scaled(s)
            .add(&a.product(&v, &u2, &w).unwrap().scaled(t));
        prop_assert!(lhs.sub(&rhs).max_abs() <= 1e-12 * scale);
        // slot 3
        let lhs = a.product(&v, &w, &combo).unwrap();
        let rhs = a.product(&v, &w, &u).unwrap().scaled(s)
            .add(&a.product(&v, &w, &u2).unwrap().scaled(t));
        prop_assert!(lhs.sub(&rhs).max_abs() <= 1e-12 * scale);
    }

    #[test]
    fn contracted_check_equals_basis_tuple_sweep(a in tensor_strategy(2)) {
        // is_para_associative iff the vector residuals vanish on all basis
        // 5-tuples; exhaustive for n = 2
        let n = a.dim();
        let basis: Vec<FibreVector> = (0..n).map(|i| FibreVector::basis(n, i)).collect();
        let mut worst = 0.0f64;
        for i1 in 0..n { for i2 in 0..n { for i3 in 0..n { for i4 in 0..n { for i5 in 0..n {
            let (r1, r2) = a.para_residual(&basis[i1], &basis[i2], &basis[i3], &basis[i4], &basis[i5]).unwrap();
            worst = worst.max(r1.max_abs()).max(r2.max_abs());
        }}}}}
        let contracted = a.para_assoc_max_residual();
        prop_assert!((worst - contracted).abs() <= 1e-10 * (1.0 + contracted));
        prop_assert_eq!(
            a.is_para_associative(Tolerance::default()),
            worst <= Tolerance::default().eps
        );
    }

    #[test]
    fn symmetric_forms_are_para_associative(
        form in (2usize..=4).prop_flat_map(symmetric_form_strategy),
    ) {
        prop_assert!(bilinear_algebra(&form).is_para_associative(Tolerance::new(1e-9)));
    }

    #[test]
    fn nonzero_antisymmetric_forms_are_not_para_associative(
        form in (2usize..=4).prop_flat_map(antisymmetric_form_strategy),
    ) {
        prop_assume!(form.max_abs() > 1e-3);
        prop_assert!(!bilinear_algebra(&form).is_para_associative(Tolerance::new(1e-9)));
    }

    #[test]
    fn opposite_is_involutive_and_preserves_para_associativity(
        form in (2usize..=4).prop_flat_map(symmetric_form_strategy),
    ) {
        let a = bilinear_algebra(&form);
        let op = a.opposite();
        let round_trip = op.opposite();
        prop_assert_eq!(round_trip.structure(), a.structure());
        prop_assert!(op.is_para_associative(Tolerance::new(1e-9)));
    }

    #[test]
    fn identity_is_always_a_homomorphism(a in (2usize..=3).prop_flat_map(tensor_strategy)) {
        let id = LinearMap::identity(a.dim());
        prop_assert_eq!(hom_residual(&a, &a, &id).unwrap(), 0.0);
    }

    #[test]
    fn commutator_flips_sign_under_a_swap(
        a in tensor_strategy(3),
        u in vector_strategy(3),
        v in vector_strategy(3),
        w in vector_strategy(3),
    ) {
        let k1 = a.commutator(&u, &v, &w).unwrap();
        let k2 = a.commutator(&v, &u, &w).unwrap();
        let scale = 1.0 + a.structure().max_abs() * (1.0 + u.max_abs()) * (1.0 + v.max_abs()) * (1.0 + w.max_abs());
        prop_assert!(k1.add(&k2).max_abs() <= 1e-10 * scale);
    }

    #[test]
    fn star_reductions_of_para_associative_algebras_are_associative(
        k in 1usize..=4,
        form in (2usize..=3).prop_flat_map(symmetric_form_strategy),
        e in prop::collection::vec(-2.0f64..2.0, 4),
    ) {
        // heap family, arbitrary middle element (biunit or not)
        let heap = heap_algebra(&cyclic_heap_table(k)).unwrap();
        let eh = FibreVector::new(e[..k].to_vec());
        let m = star_reduce(&heap, &eh).unwrap();
        prop_assert!(binary_assoc_residual(&m) <= 1e-9);

        // bilinear family
        let a = bilinear_algebra(&form);
        let eb = FibreVector::new(e[..form.dim()].to_vec());
        let m = star_reduce(&a, &eb).unwrap();
        prop_assert!(binary_assoc_residual(&m) <= 1e-9);
    }

    #[test]
    fn direct_sums_stay_para_associative(
        f1 in (2usize..=4).prop_flat_map(symmetric_form_strategy),
        f2 in (2usize..=4).prop_flat_map(symmetric_form_strategy),
        k in 1usize..=4,
    ) {
        let a = bilinear_algebra(&f1);
        let b = bilinear_algebra(&f2);
        let h = heap_algebra(&cyclic_heap_table(k)).unwrap();
        let tol = Tolerance::new(1e-9);
        prop_assert!(direct_sum(&a, &b).is_para_associative(tol));
        prop_assert!(direct_sum(&a, &h).is_para_associative(tol));
    }
}

proptest! {
    // the contracted check on a tensor product costs O((n1·n2·n3)^7); keep
    // the factor sizes small and the case count modest
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn tensor_products_stay_para_associative(
        f1 in symmetric_form_strategy(2),
        f2 in (2usize..=3).prop_flat_map(symmetric_form_strategy),
        k in 1usize..=2,
    ) {
        let a = bilinear_algebra(&f1);
        let b = bilinear_algebra(&f2);
        let h = heap_algebra(&cyclic_heap_table(k)).unwrap();
        prop_assert!(tensor_product(&a, &b, &h).is_para_associative(Tolerance::new(1e-9)));
    }

    #[test]
    fn algebra_files_round_trip_bit_exactly(a in (2usize..=3).prop_flat_map(tensor_strategy)) {
        let doc = ternalg::io::AlgebraDoc::from_algebra(&a);
        let json = serde_json::to_string(&doc).unwrap();
        let back: ternalg::io::AlgebraDoc = serde_json::from_str(&json).unwrap();
        let b = back.into_algebra().unwrap();
        prop_assert_eq!(a.structure().entries(), b.structure().entries());
    }

    #[test]
    fn chart_indexing_is_a_bijection(
        shape in prop::collection::vec(1usize..5, 1..=3),
    ) {
        let d = shape.len();
        let chart = ternalg::Chart::new(vec![0.0; d], vec![0.5; d], shape).unwrap();
        for p in 0..chart.num_points() {
            let multi = chart.multi_index(p);
            prop_assert_eq!(chart.flat_index(&multi).unwrap(), p);
        }
    }
}
