use std::collections::BTreeSet;

use proptest::prelude::*;
use shg_core::constructions::{
    coset_space, double_coset_space, from_group, from_semigroup, orbit_space,
    three_element_hypergroup, three_element_table_unchecked,
};
use shg_core::group::{FiniteGroup, GroupAction};
use shg_core::{Elem, FiniteSemihypergroup, Homomorphism, Measure, Rational, ThreeElementParams};

fn groups() -> Vec<FiniteGroup> {
    let mut gs: Vec<FiniteGroup> = (1..=12).map(FiniteGroup::cyclic).collect();
    gs.push(FiniteGroup::symmetric(3));
    gs.push(FiniteGroup::dihedral(4));
    gs.push(FiniteGroup::dihedral(5));
    gs.push(FiniteGroup::dihedral(6));
    gs.push(FiniteGroup::alternating(4));
    gs
}

fn closure(g: &FiniteGroup, gens: &[Elem]) -> Vec<Elem> {
    let mut set: BTreeSet<Elem> = gens.iter().copied().collect();
    set.insert(g.identity());
    loop {
        let next: BTreeSet<Elem> = set
            .iter()
            .flat_map(|&x| set.iter().map(move |&y| g.mul(x, y)))
            .chain(set.iter().copied())
            .collect();
        if next.len() == set.len() {
            return set.into_iter().collect();
        }
        set = next;
    }
}

/// Subgroups generated by at most two elements.
fn small_subgroups(g: &FiniteGroup) -> BTreeSet<Vec<Elem>> {
    let n = g.order();
    (0..n)
        .flat_map(|a| (a..n).map(move |b| (a, b)))
        .map(|(a, b)| closure(g, &[a, b]))
        .collect()
}

fn block_containing(k: &FiniteSemihypergroup, g: &FiniteGroup, x: Elem) -> Elem {
    let name = g.element_name(x);
    (0..k.len())
        .find(|&i| {
            let label = k.element_name(i);
            label[1..label.len() - 1]
                .split(',')
                .any(|part| part == name)
        })
        .expect("every element lies in a block")
}

/// Recomputes each entry from every representative pair and compares.
fn check_all_representatives(k: &FiniteSemihypergroup, g: &FiniteGroup, h: &[Elem]) {
    let w = Rational::new(1, h.len() as i64);
    for x in 0..g.order() {
        for y in 0..g.order() {
            let expected = Measure::from_terms(
                h.iter()
                    .map(|&t| (block_containing(k, g, g.mul(g.mul(x, t), y)), w.clone())),
            );
            let (bx, by) = (block_containing(k, g, x), block_containing(k, g, y));
            assert_eq!(
                k.product(bx, by),
                &expected,
                "{} reps {} {}",
                g.name(),
                x,
                y
            );
        }
    }
}

#[test]
fn groups_as_structures_satisfy_axioms() {
    for g in groups() {
        let k = from_group(&g);
        assert!(k.verify_axioms().passed(), "{}", g.name());
        assert_eq!(k.identity(), Some(g.identity()));
        assert_eq!(k.is_pure(), g.order() == 1, "{}", g.name());
    }
}

#[test]
fn coset_spaces_of_small_groups() {
    for g in groups() {
        for h in small_subgroups(&g) {
            let k = coset_space(&g, &h).unwrap();
            assert_eq!(k.len(), g.order() / h.len());
            assert!(k.verify_axioms().passed(), "{} / {:?}", g.name(), h);
            check_all_representatives(&k, &g, &h);
            assert_eq!(
                k.right_identity(),
                Some(block_containing(&k, &g, g.identity()))
            );
        }
    }
}

#[test]
fn double_coset_spaces_of_small_groups() {
    for g in groups() {
        for h in small_subgroups(&g) {
            let k = double_coset_space(&g, &h).unwrap();
            assert!(k.verify_axioms().passed(), "{} // {:?}", g.name(), h);
            check_all_representatives(&k, &g, &h);
            assert_eq!(k.identity(), Some(block_containing(&k, &g, g.identity())));
        }
    }
}

#[test]
fn orbit_spaces_of_small_groups() {
    for n in 1..=12 {
        let k = orbit_space(&GroupAction::inversion(FiniteGroup::cyclic(n)).unwrap()).unwrap();
        assert_eq!(k.len(), n / 2 + 1);
        assert!(k.verify_axioms().passed());
        assert!(k.identity().is_some());
    }
    for g in groups() {
        let trivial = GroupAction::trivial(FiniteGroup::cyclic(3), g.clone());
        let k = orbit_space(&trivial).unwrap();
        assert_eq!(k.len(), g.order());
        assert!(k.verify_axioms().passed());
    }
}

#[test]
fn orbit_space_of_unit_group_action() {
    // units of Z_12 acting by multiplication
    let z12 = FiniteGroup::cyclic(12);
    let units = [1usize, 5, 7, 11];
    let actors = FiniteGroup::from_cayley(
        "U12",
        units.iter().map(|u| u.to_string()).collect(),
        units
            .iter()
            .map(|&a| {
                units
                    .iter()
                    .map(|&b| units.iter().position(|&u| u == a * b % 12).unwrap())
                    .collect()
            })
            .collect(),
    )
    .unwrap();
    let action = GroupAction::from_fn(actors, z12, |h, x| units[h] * x % 12).unwrap();
    let k = orbit_space(&action).unwrap();
    assert!(k.verify_axioms().passed());
    assert_eq!(k.len(), action.orbits().len());
}

fn monoid_mod(n: usize) -> FiniteSemihypergroup {
    from_semigroup(
        format!("mul{n}"),
        (0..n).map(|i| i.to_string()).collect(),
        (0..n)
            .map(|x| (0..n).map(|y| x * y % n).collect())
            .collect(),
    )
    .unwrap()
}

fn transformations(degree: usize) -> FiniteSemihypergroup {
    let maps: Vec<Vec<usize>> = (0..degree.pow(degree as u32))
        .map(|mut code| {
            (0..degree)
                .map(|_| {
                    let v = code % degree;
                    code /= degree;
                    v
                })
                .collect()
        })
        .collect();
    let index = |m: &Vec<usize>| maps.iter().position(|x| x == m).unwrap();
    let table = maps
        .iter()
        .map(|f| {
            maps.iter()
                .map(|g| index(&(0..degree).map(|i| f[g[i]]).collect()))
                .collect()
        })
        .collect();
    let names = maps.iter().map(|m| format!("{m:?}")).collect();
    from_semigroup(format!("T{degree}"), names, table).unwrap()
}

fn has_one_sided_inverse(k: &FiniteSemihypergroup) -> bool {
    let Some(e) = k.identity() else { return false };
    (0..k.len()).filter(|&x| x != e).any(|x| {
        (0..k.len())
            .filter(|&y| y != e)
            .any(|y| k.product(x, y).as_point_mass() == Some(&e))
    })
}

#[test]
fn semigroup_purity_matches_inverses() {
    let mut cases: Vec<FiniteSemihypergroup> = (1..=8).map(monoid_mod).collect();
    cases.push(transformations(2));
    cases.push(transformations(3));
    for n in 1..=4 {
        let elems: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let max = (0..n).map(|x| (0..n).map(|y| x.max(y)).collect()).collect();
        let left_zero = (0..n).map(|x| vec![x; n]).collect();
        cases.push(from_semigroup("max", elems.clone(), max).unwrap());
        cases.push(from_semigroup("left-zero", elems, left_zero).unwrap());
    }
    for k in &cases {
        assert!(k.verify_axioms().passed(), "{}", k.name());
        assert_eq!(k.is_pure(), !has_one_sided_inverse(k), "{}", k.name());
    }
    assert!(monoid_mod(2).is_pure());
    assert!(!monoid_mod(5).is_pure());
    assert!(!transformations(3).is_pure());
}

#[test]
fn rejects_non_associative_semigroup_table() {
    let elems = vec!["u".to_string(), "v".to_string()];
    // x*y = 1 - x
    let table = (0..2).map(|x| vec![1 - x; 2]).collect();
    assert!(from_semigroup("bad", elems, table).is_err());
}

fn cyclic_structure(n: usize) -> FiniteSemihypergroup {
    from_group(&FiniteGroup::cyclic(n))
}

fn measure_on(n: usize) -> impl Strategy<Value = Measure<Elem>> {
    prop::collection::vec((0..n, -4i64..=4, 1i64..=4), 0..5).prop_map(|terms| {
        Measure::from_terms(terms.into_iter().map(|(x, a, b)| (x, Rational::new(a, b))))
    })
}

fn three_element_params() -> impl Strategy<Value = ThreeElementParams> {
    // Small denominators over the full simplexes, feasible or not.
    let simplex3 = (0i64..=6, 0i64..=6).prop_filter("sum <= 6", |(a, b)| a + b <= 6);
    (simplex3.clone(), simplex3, 0i64..=6).prop_map(|((a1, a2), (b1, b2), c)| {
        let s = |k: i64| Rational::new(k, 6);
        ThreeElementParams::new(
            [s(a1), s(a2), s(6 - a1 - a2)],
            [s(b1), s(b2), s(6 - b1 - b2)],
            [s(c), s(6 - c)],
        )
    })
}

fn feasible_params() -> impl Strategy<Value = ThreeElementParams> {
    (1i64..=8, 0i64..=8, 0i64..=8).prop_filter_map("infeasible", |(x1, x3, z1)| {
        // x = (x1, x2, x3)/8, z = (z1, 8 - z1)/8, y1 and y2 forced by the two equations
        let r = |k: i64| Rational::new(k, 8);
        let (x1, x3, z1) = (r(x1), r(x3), r(z1));
        if x3.is_zero() || (x1.clone() + x3.clone()) > Rational::one() {
            return None;
        }
        let z2 = Rational::one() - z1.clone();
        let y1 = &z1 * &x1 / &x3;
        let y2 = &y1 * &z2 / &x1;
        let y3 = Rational::one() - y1.clone() - y2.clone();
        if y3.is_negative() {
            return None;
        }
        let x2 = Rational::one() - x1.clone() - x3.clone();
        Some(ThreeElementParams::new(
            [x1, x2, x3],
            [y1, y2, y3],
            [z1, z2],
        ))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn three_element_constraints_match_axioms(p in three_element_params()) {
        let built = three_element_table_unchecked(&p);
        prop_assert_eq!(p.validate().is_ok(), built.verify_axioms().passed());
    }

    #[test]
    fn feasible_three_element_members_pass(p in feasible_params()) {
        let k = three_element_hypergroup(&p).unwrap();
        prop_assert!(k.verify_axioms().passed());
        prop_assert_eq!(k.identity(), Some(0));
    }

    #[test]
    fn purity_and_axioms_survive_relabeling(seed in any::<u64>(), which in 0usize..4) {
        let k = match which {
            0 => coset_space(&FiniteGroup::symmetric(3), &[0, 1]).unwrap(),
            1 => {
                let d4 = FiniteGroup::dihedral(4);
                let h = closure(&d4, &[d4.order() - 1]);
                double_coset_space(&d4, &h).unwrap()
            }
            2 => monoid_mod(6),
            _ => cyclic_structure(4),
        };
        let mut perm: Vec<Elem> = (0..k.len()).collect();
        let mut s = seed;
        for i in (1..perm.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let p = k.permuted(&perm).unwrap();
        prop_assert_eq!(p.is_pure(), k.is_pure());
        prop_assert_eq!(p.verify_axioms().passed(), k.verify_axioms().passed());
        prop_assert_eq!(p.identity().map(|e| perm[e]), k.identity());
    }

    #[test]
    fn homomorphisms_compose(mu in measure_on(12), nu in measure_on(12)) {
        let (z12, z6, z3) = (cyclic_structure(12), cyclic_structure(6), cyclic_structure(3));
        let phi = Homomorphism::new(&z12, &z6, (0..12).map(|x| x % 6).collect()).unwrap();
        let psi = Homomorphism::new(&z6, &z3, (0..6).map(|x| 2 * x % 3).collect()).unwrap();
        prop_assert!(phi.check().passed() && psi.check().passed());
        let both = phi.then(&psi);
        prop_assert!(both.check().passed());

        let (gp, gs, gb) = (phi.gamma_lift().unwrap(), psi.gamma_lift().unwrap(), both.gamma_lift().unwrap());
        prop_assert_eq!(gb.apply(&mu).unwrap(), gs.apply(&gp.apply(&mu).unwrap()).unwrap());

        let lhs = gp.apply(&z12.convolve(&mu, &nu).unwrap()).unwrap();
        let rhs = z6.convolve(&gp.apply(&mu).unwrap(), &gp.apply(&nu).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
