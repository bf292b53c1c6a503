use gbs_core::arith::big;
use gbs_core::center::{center_exponents, modulus_hom};
use gbs_core::gamma_omega::{gamma_omega_tree, Mode};
use gbs_core::np_omega::np_omega_tree;
use gbs_core::oracle::{annihilation_check, build_catalog};
use gbs_core::tree_model::{normalize_signs, path_relation, TreeBuilder};
use gbs_core::words::is_trivial;
use gbs_core::{parse_tree, GroupWord, LabeledTree};
use num_bigint::BigInt;
use proptest::prelude::*;

fn arb_tree(max_edges: usize) -> impl Strategy<Value = LabeledTree> {
    proptest::collection::vec((0usize..100, -12i64..=12, -12i64..=12), 1..=max_edges).prop_map(|edges| {
        let names: Vec<String> = (0..=edges.len()).map(|i| format!("t{i}")).collect();
        let mut b = TreeBuilder::new();
        for n in &names {
            b.vertex(n).unwrap();
        }
        for (i, &(p, m, l)) in edges.iter().enumerate() {
            let nz = |x: i64| if x == 0 { 1 } else { x };
            b.edge(&names[p % (i + 1)], &names[i + 1], nz(m), nz(l)).unwrap();
        }
        normalize_signs(&b.build().unwrap())
    })
}

fn modulus_image(t: &LabeledTree, w: &GroupWord) -> BigInt {
    let m = modulus_hom(t).unwrap();
    w.exponent_sums(t.vertex_count()).iter().zip(&m.images).map(|(s, i)| s * i).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gamma_elements_die_in_small_nilpotent_groups(t in arb_tree(2)) {
        let catalog = build_catalog(16, &[2, 3]).unwrap();
        let g = gamma_omega_tree(&t, Mode::CenterOrder, true).unwrap();
        for c in &g.elements {
            let w = c.to_word();
            prop_assert!(annihilation_check(&t, &w, &catalog).annihilated);
            prop_assert_eq!(modulus_image(&t, &w), big(0));
        }
    }

    #[test]
    fn np_elements_die_in_small_p_groups(t in arb_tree(2), p in prop::sample::select(vec![2u64, 3])) {
        let catalog = build_catalog(16, &[p]).unwrap();
        let n = np_omega_tree(&t, &BigInt::from(p), true).unwrap();
        for e in &n.elements {
            let w = e.to_word();
            prop_assert!(annihilation_check(&t, &w, &catalog).annihilated);
            prop_assert_eq!(modulus_image(&t, &w), big(0));
        }
    }

    #[test]
    fn dropped_elements_are_trivial(t in arb_tree(3)) {
        let g = gamma_omega_tree(&t, Mode::CenterOrder, true).unwrap();
        for c in &g.trivial {
            prop_assert!(is_trivial(&t, &c.to_word()).unwrap());
        }
        for c in &g.elements {
            prop_assert!(!is_trivial(&t, &c.to_word()).unwrap());
        }
    }

    #[test]
    fn path_relations_hold(t in arb_tree(4)) {
        for (u, v) in t.vertex_pairs() {
            let r = path_relation(&t, u, v).unwrap();
            prop_assert!(is_trivial(&t, &r.relator()).unwrap());
        }
    }

    #[test]
    fn center_powers_coincide(t in arb_tree(4)) {
        let c = center_exponents(&t).unwrap();
        let z0 = GroupWord::power_of(t.root(), c.exponents[t.root().0].clone());
        for v in t.vertices() {
            let zv = GroupWord::power_of(v, c.exponents[v.0].clone());
            prop_assert!(is_trivial(&t, &zv.concat(&z0.inverse())).unwrap());
        }
    }

    #[test]
    fn gbs_text_round_trips(t in arb_tree(4)) {
        prop_assert_eq!(parse_tree(&t.to_gbs()).unwrap(), t);
    }
}
