use kdescent::complex::{fiber_sequence_exactness, ZComplex};
use kdescent::cube::CubeIndex;
use kdescent::diagram::random::{random_complex, random_diagram, random_unimodular, DiagramBounds};
use kdescent::diagram::{augmentation_map, simple, CubicalDiagram};
use kdescent::kweight::{kd_groups_and_weights, Hyperresolution};
use kdescent::spectral::FilteredComplex;
use kdescent::zmod::{cokernel, kernel_basis, rank, snf, IntMatrix};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn matrix(max: usize) -> impl Strategy<Value = IntMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-9i64..=9, c), r)
            .prop_map(move |rows| IntMatrix::from_rows(&rows, c))
    })
}

fn diagram(seed: u64, n: usize) -> CubicalDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_diagram(&mut rng, CubeIndex::new(n, false).unwrap(), &DiagramBounds::default())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_rebuilds_the_matrix(m in matrix(8)) {
        let s = snf(&m);
        prop_assert_eq!(s.u_inv.mul(&s.d).mul(&s.v_inv), m.clone());
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        let d = s.diagonal();
        prop_assert!(d.windows(2).all(|w| (&w[1] % &w[0]) == 0.into()));
    }

    #[test]
    fn rank_plus_nullity(m in matrix(8)) {
        prop_assert_eq!(rank(&m) + kernel_basis(&m).cols(), m.cols());
    }

    #[test]
    fn cokernel_is_invariant_under_unimodular_change(m in matrix(6), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, _) = random_unimodular(&mut rng, m.rows());
        let (q, _) = random_unimodular(&mut rng, m.cols());
        prop_assert_eq!(cokernel(&p.mul(&m).mul(&q)), cokernel(&m));
    }

    #[test]
    fn fiber_sequences_of_edge_maps_are_exact(seed in any::<u64>()) {
        let x = diagram(seed, 2);
        for (a, c) in x.index().edges() {
            let f = x.edge(a, c.k);
            prop_assert!(fiber_sequence_exactness(f, -4, 4).iter().all(|n| n.exact));
        }
    }

    #[test]
    fn euler_characteristic_is_conserved(seed in any::<u64>(), n in 1usize..=2) {
        let x = diagram(seed, n);
        let f = FilteredComplex::from_diagram(&x).unwrap();
        let e1: i64 = f
            .page(1)
            .nonzero()
            .iter()
            .map(|e| {
                let sign = if (e.q - e.p).rem_euclid(2) == 0 { 1 } else { -1 };
                sign * e.group.rank as i64
            })
            .sum();
        prop_assert_eq!(e1, simple(&x).unwrap().euler_characteristic());
    }

    #[test]
    fn pages_stabilize_and_converge(seed in any::<u64>(), n in 1usize..=2) {
        let x = diagram(seed, n);
        let f = FilteredComplex::from_diagram(&x).unwrap();
        let stable = n as i64 + 2;
        let (pa, pb) = (f.page(stable), f.page(stable + 2));
        let (a, b) = (pa.nonzero(), pb.nonzero());
        prop_assert_eq!(a.len(), b.len());
        for (s, t) in a.iter().zip(&b) {
            prop_assert_eq!((s.p, s.q, &s.group), (t.p, t.q, &t.group));
        }
        let (lo, hi) = f.complex().homology_range();
        prop_assert!((lo..=hi).all(|m| f.convergence_certificate(m)));
    }

    #[test]
    fn weights_stay_within_the_cube(seed in any::<u64>(), n in 1usize..=2) {
        let h = Hyperresolution::from_diagram("random", n as i64, diagram(seed, n));
        let t = kd_groups_and_weights(&h, -4, 3).unwrap();
        prop_assert!(t.weight_bound && t.convergence);
        prop_assert!(t.rows.iter().all(|r| r.weights.iter().all(|w| w.p >= 0 && w.p <= n as i64)));
    }

    #[test]
    fn constant_augmented_diagrams_are_acyclic(seed in any::<u64>(), n in 0usize..=2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c: ZComplex = random_complex(&mut rng, &DiagramBounds::default());
        let x = CubicalDiagram::constant(CubeIndex::new(n, true).unwrap(), &c);
        prop_assert!(augmentation_map(&x).unwrap().is_quasi_iso());
    }
}
