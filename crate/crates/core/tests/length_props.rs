use blowup_core::{
    local_length, monomial_length_oracle, Field, Ideal, Monomial, Polynomial,
};
use proptest::prelude::*;

fn mono_ideal(n: usize, exps: &[Vec<u32>]) -> Ideal {
    let f = Field::Rationals;
    let gens = exps
        .iter()
        .map(|e| Polynomial::monomial(f, Monomial::new(e.clone()), f.one()))
        .collect();
    Ideal::new(n, f, gens).unwrap()
}

fn exps(n: usize, max_deg: u32, count: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<Vec<u32>>> {
    prop::collection::vec(prop::collection::vec(0..=max_deg, n), count).prop_map(move |v| {
        v.into_iter()
            .filter(|e| e.iter().sum::<u32>() <= max_deg)
            .collect()
    })
}

/// An m-primary monomial ideal: pure powers plus random monomials.
fn primary(n: usize, max_deg: u32) -> impl Strategy<Value = Vec<Vec<u32>>> {
    (prop::collection::vec(1..=max_deg, n), exps(n, max_deg, 0..=3)).prop_map(move |(powers, extra)| {
        let mut gens: Vec<Vec<u32>> = powers
            .iter()
            .enumerate()
            .map(|(i, &k)| (0..n).map(|j| if i == j { k } else { 0 }).collect())
            .collect();
        gens.extend(extra);
        gens
    })
}

fn times(a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<Vec<u32>> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x.iter().zip(y).map(|(p, q)| p + q).collect()))
        .collect()
}

/// `A ⊇ B ⊇ C` monomial, with `A/C` of finite length.
fn chain() -> impl Strategy<Value = (usize, Vec<Vec<u32>>, Vec<Vec<u32>>, Vec<Vec<u32>>)> {
    (1usize..=3).prop_flat_map(|n| {
        (Just(n), exps(n, 3, 1..=3), primary(n, 2), primary(n, 2))
            .prop_filter("nonempty A", |(_, a, _, _)| !a.is_empty())
            .prop_map(|(n, a, q1, q2)| {
                let b = times(&a, &q1);
                let c = times(&b, &q2);
                (n, a, b, c)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn local_length_matches_oracle((n, a, b, _) in chain()) {
        let (ia, ib) = (mono_ideal(n, &a), mono_ideal(n, &b));
        let res = local_length(&ia, &ib, 60).unwrap();
        prop_assert!(res.stabilized);
        prop_assert_eq!(res.value, monomial_length_oracle(&ia, &ib).unwrap());
    }

    #[test]
    fn length_is_additive_along_chains((n, a, b, c) in chain()) {
        let (ia, ib, ic) = (mono_ideal(n, &a), mono_ideal(n, &b), mono_ideal(n, &c));
        let ab = local_length(&ia, &ib, 60).unwrap().value;
        let bc = local_length(&ib, &ic, 60).unwrap().value;
        let ac = local_length(&ia, &ic, 60).unwrap().value;
        prop_assert_eq!(ab + bc, ac);
    }

    /// Multiplying the generators of B by the unit 1 + x_0 of the local ring
    /// changes the global ideal but not the length at the origin.
    #[test]
    fn unit_multiples_do_not_change_local_length((n, a, b, _) in chain()) {
        let (ia, ib) = (mono_ideal(n, &a), mono_ideal(n, &b));
        let f = Field::Rationals;
        let unit = &Polynomial::one(n, f) + &Polynomial::var(n, f, 0);
        let twisted = Ideal::new(n, f, ib.generators().iter().map(|g| g * &unit).collect()).unwrap();
        let expected = monomial_length_oracle(&ia, &ib).unwrap();
        let res = local_length(&ia, &twisted, 60).unwrap();
        prop_assert!(res.stabilized);
        prop_assert_eq!(res.value, expected);
    }
}
