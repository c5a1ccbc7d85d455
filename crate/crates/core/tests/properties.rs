use std::sync::OnceLock;

use maxclass5_core::structure::{lower_central_series, maximal_subgroups, whole_group};
use maxclass5_core::transfer::Transfer;
use maxclass5_core::{Element, FamilyLabel, PcGroup, PresentationParams, Subgroup};
use proptest::prelude::*;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params_strategy(max_n: usize) -> impl Strategy<Value = PresentationParams> {
    (4..=max_n).prop_flat_map(|n| {
        let k_max = (n - 4).min(3);
        (
            Just(n),
            0i64..5,
            0i64..5,
            prop::collection::vec(0i64..5, 0..=k_max),
        )
            .prop_map(|(n, w, z, a)| PresentationParams::new(n as i64, w, z, &a).unwrap())
    })
}

fn group_and_elements(count: usize) -> impl Strategy<Value = (PcGroup, Vec<Element>)> {
    params_strategy(12).prop_flat_map(move |p| {
        let n = p.n();
        let g = PcGroup::build(&p).unwrap();
        let elem = prop::collection::vec(0i64..5, n).prop_map(|e| Element::from_exponents(&e));
        (Just(g), prop::collection::vec(elem, count))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn inverse_cancels((g, u) in group_and_elements(1)) {
        let inv = g.inverse(&u[0]);
        prop_assert!(g.multiply(&u[0], &inv).is_identity());
        prop_assert!(g.multiply(&inv, &u[0]).is_identity());
    }

    #[test]
    fn multiplication_is_associative((g, u) in group_and_elements(3)) {
        let left = g.multiply(&g.multiply(&u[0], &u[1]), &u[2]);
        let right = g.multiply(&u[0], &g.multiply(&u[1], &u[2]));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn exponent_divides_group_order((g, u) in group_and_elements(1)) {
        let n = g.n() as u32;
        prop_assert!(g.power(&u[0], 5i64.pow(n)).is_identity());
        let ord = g.element_order(&u[0]);
        prop_assert!(5u64.pow(n).is_multiple_of(ord));
        prop_assert!(g.power(&u[0], ord as i64).is_identity());
    }

    #[test]
    fn identity_is_neutral((g, u) in group_and_elements(1)) {
        prop_assert_eq!(g.multiply(&g.identity(), &u[0]), u[0]);
        prop_assert_eq!(g.multiply(&u[0], &g.identity()), u[0]);
    }

    #[test]
    fn parameters_canonical(p in params_strategy(12)) {
        let raw = p.to_raw();
        prop_assert_eq!(PresentationParams::from_raw(&raw).unwrap(), p.clone());
        let label = FamilyLabel::from_params(&p);
        let text = label.to_string();
        prop_assert_eq!(text.parse::<FamilyLabel>().unwrap(), label.clone());
        prop_assert_eq!(label.to_params(), p);
    }
}

struct Fixture {
    group: PcGroup,
    whole: Subgroup,
    gamma2: Subgroup,
    maximal: Vec<Subgroup>,
}

fn fixtures() -> &'static [Fixture] {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| {
        let tuples: [(i64, i64, i64, &[i64]); 6] = [
            (4, 0, 0, &[]),
            (5, 1, 0, &[3]),
            (5, 0, 2, &[]),
            (6, 0, 1, &[1]),
            (6, 3, 0, &[0, 2]),
            (6, 0, 0, &[]),
        ];
        tuples
            .iter()
            .map(|&(n, w, z, a)| {
                let group = PcGroup::build(&PresentationParams::new(n, w, z, a).unwrap()).unwrap();
                let series = lower_central_series(&group).unwrap();
                let gamma2 = series.term(2).clone();
                let maximal = maximal_subgroups(&group, &gamma2).unwrap();
                Fixture {
                    whole: whole_group(&group),
                    group,
                    gamma2,
                    maximal,
                }
            })
            .collect()
    })
}

fn random_member(rng: &mut ChaCha8Rng, h: &Subgroup) -> Element {
    h.elements()[rng.next_u32() as usize % h.order()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn transfer_is_a_homomorphism(f in 0usize..6, i in 0usize..6, seed in any::<u64>()) {
        let fx = &fixtures()[f];
        let g = &fx.group;
        let t = Transfer::new(g, &fx.whole, &fx.maximal[i]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_member(&mut rng, &fx.whole);
        let v = random_member(&mut rng, &fx.whole);
        let lhs = t.evaluate(&g.multiply(&u, &v));
        let rhs = t.reduce(&g.multiply(&t.evaluate(&u), &t.evaluate(&v)));
        prop_assert_eq!(lhs, rhs);
    }
}

#[test]
fn transfer_independent_of_representatives() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for fx in fixtures() {
        let g = &fx.group;
        let pairs = fx
            .maximal
            .iter()
            .map(|h| (&fx.whole, h))
            .chain(fx.maximal.iter().map(|h| (h, &fx.gamma2)));
        for (source, target) in pairs {
            let base = Transfer::new(g, source, target).unwrap();
            let expected = base.map(source.generators());
            for _ in 0..100 {
                let reps: Vec<Element> = base
                    .reps()
                    .iter()
                    .map(|r| g.multiply(r, &random_member(&mut rng, target)))
                    .collect();
                let t = Transfer::new(g, source, target)
                    .unwrap()
                    .with_reps(reps)
                    .unwrap();
                assert_eq!(t.map(source.generators()), expected, "{}", g.params());
            }
        }
    }
}
