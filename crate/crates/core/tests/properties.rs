//! Property tests for the structural invariants: lift additivity, CRT
//! roundtrips, Fourier inversion, the derivative cocycle identity, and the
//! generator-degree sufficiency.

use proptest::prelude::*;

use gowers_lab::generators::random_table;
use gowers_lab::polycalc::degree_generator_sufficiency_check;
use gowers_lab::{ExactTable, GroupSpec, UnitRational};

fn group_strategy() -> impl Strategy<Value = GroupSpec> {
    prop::collection::vec(1u64..=9, 1..=3)
        .prop_map(|moduli| GroupSpec::new(moduli).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn residue_lift_additive_mod_moduli(g in group_strategy(), a in 0u64..10_000, b in 0u64..10_000) {
        let x = g.element_at((a % g.order()) as usize);
        let y = g.element_at((b % g.order()) as usize);
        let sum = g.add(&x, &y).unwrap();
        let lifted = g.residue_lift(&sum);
        for ((&l, (&lx, &ly)), &d) in lifted
            .iter()
            .zip(g.residue_lift(&x).iter().zip(g.residue_lift(&y).iter()))
            .zip(g.moduli())
        {
            prop_assert_eq!(l % d, (lx + ly) % d);
        }
    }

    #[test]
    fn crt_roundtrip_and_homomorphism(g in group_strategy(), a in 0u64..10_000, b in 0u64..10_000) {
        let d = g.sylow_decompose();
        let x = g.element_at((a % g.order()) as usize);
        let y = g.element_at((b % g.order()) as usize);
        prop_assert_eq!(d.backward(&d.forward(&x).unwrap()).unwrap(), x.clone());
        let fx = d.forward(&x).unwrap();
        let fy = d.forward(&y).unwrap();
        let fsum = d.forward(&g.add(&x, &y).unwrap()).unwrap();
        for (&p, part) in d.parts() {
            prop_assert_eq!(part.spec.add(&fx[&p], &fy[&p]).unwrap(), fsum[&p].clone());
        }
    }

    #[test]
    fn fourier_inversion(g in group_strategy(), seed in 0u64..1_000) {
        let f = random_table(&g, seed);
        let back = f.fourier_transform().inverse_fourier_transform();
        for i in 0..g.order() as usize {
            prop_assert!((back.value_at_index(i) - f.value_at_index(i)).norm() < 1e-10);
        }
    }

    #[test]
    fn derivative_cocycle_identity(g in group_strategy(), seed in 0u64..1_000, q in 2u64..=8) {
        let mut rng = gowers_lab::rng::SplitMix64::new(seed);
        let f = ExactTable::from_fn(&g, |_| UnitRational::new(rng.next_below(q), q));
        let h1 = g.element_at(rng.next_below(g.order()) as usize);
        let h2 = g.element_at(rng.next_below(g.order()) as usize);
        let lhs = f.derivative(&g.add(&h1, &h2).unwrap()).unwrap();
        let d1 = f.derivative(&h1).unwrap();
        let d2 = f.derivative(&h2).unwrap();
        let d12 = d1.derivative(&h2).unwrap();
        for i in 0..g.order() as usize {
            let rhs = &(d1.value_at_index(i) + d2.value_at_index(i)) + d12.value_at_index(i);
            prop_assert_eq!(lhs.value_at_index(i), &rhs);
        }
    }
}

#[test]
fn generator_degree_matches_all_shift_degree() {
    for s in ["2,2", "4", "2,4", "3,3", "6"] {
        let g = GroupSpec::parse(s).unwrap();
        let report = degree_generator_sufficiency_check(&g, 40, 99).unwrap();
        assert_eq!(report.disagreements, 0, "group {s}");
    }
}
