//! Randomized structural checks on the cover complexes.

use proptest::prelude::*;

use linkgrowth::covers::{based_branch_equivalence, boundary_squares_to_zero, build_complex, expected_branch_columns};
use linkgrowth::lattices::Lattice;
use linkgrowth::linkio::{builtin_link, wirtinger, WirtingerPresentation};

fn builtin(name: &str) -> WirtingerPresentation {
    wirtinger(&builtin_link(name).unwrap()).unwrap()
}

fn lattice_2d() -> impl Strategy<Value = Lattice> {
    (1i64..5, -3i64..4, -3i64..4, 1i64..5)
        .prop_filter("nonsingular", |(a, b, c, d)| a * d - b * c != 0)
        .prop_map(|(a, b, c, d)| Lattice::from_columns(vec![vec![a, c], vec![b, d]]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn boundaries_compose_to_zero_for_links(lam in lattice_2d(), which in 0usize..4) {
        let name = ["hopf", "whitehead", "6_2^2", "6_2^3"][which];
        let q = build_complex(&builtin(name), &lam).unwrap();
        prop_assert!(boundary_squares_to_zero(&q));
        prop_assert_eq!(q.num_branch_cols as u64, expected_branch_columns(&q));
    }

    #[test]
    fn boundaries_compose_to_zero_for_knots(r in 1i64..40, which in 0usize..3) {
        let name = ["unknot", "trefoil", "figure8"][which];
        let q = build_complex(&builtin(name), &Lattice::cyclic(r).unwrap()).unwrap();
        prop_assert!(boundary_squares_to_zero(&q));
    }
}

#[test]
fn branch_columns_do_not_change_the_based_cokernel() {
    for name in ["trefoil", "figure8"] {
        let p = builtin(name);
        for r in 1..=12 {
            let eq = based_branch_equivalence(&p, &Lattice::cyclic(r).unwrap()).unwrap();
            assert!(eq.agree, "{name} r = {r}: {eq:?}");
        }
    }
}
