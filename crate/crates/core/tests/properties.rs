//! Structural properties checked exhaustively on small ground sets and by random
//! sampling on larger ones.

use proptest::prelude::*;
use proptest::sample::Index;

use semilat::enumeration::{all_subsemilattices, brute_force_subsemilattices, inclusion_maximal};
use semilat::reduction::{restrict_away, valid_anchors};
use semilat::{
    enumerate_idempotents, enumerate_maximal_semilattices, find_anchor, is_in_it, lambda_embed,
    make_et, reduce, spectrum, star, EnumerationConfig, PointSet, Semilattice, Transformation,
};

fn transformation(n: usize) -> impl Strategy<Value = Transformation> {
    prop::collection::vec(0..n, n).prop_map(|images| Transformation::from_images(&images).unwrap())
}

/// A random idempotent: a nonempty image set, fixed pointwise, and a choice of
/// image point for every other point.
fn idempotent(n: usize) -> impl Strategy<Value = Transformation> {
    (1u32..1 << n, prop::collection::vec(any::<Index>(), n)).prop_map(move |(mask, picks)| {
        let image = PointSet::from_bits(mask);
        let reps: Vec<usize> = image.iter().collect();
        let table: Vec<usize> = (0..n)
            .map(|x| {
                if image.contains(x) {
                    x
                } else {
                    reps[picks[x].index(reps.len())]
                }
            })
            .collect();
        Transformation::from_images(&table).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn block_commuting_test_matches_products(
        (e, a) in (4usize..=6).prop_flat_map(|n| (idempotent(n), transformation(n)))
    ) {
        let d = e.decompose().unwrap();
        prop_assert_eq!(d.commutes_with(&a).unwrap(), e.commutes(&a).unwrap());
    }

    #[test]
    fn decomposition_round_trips(e in (1usize..=8).prop_flat_map(idempotent)) {
        let d = e.decompose().unwrap();
        prop_assert_eq!(d.to_transformation(), e.clone());
        let mut union = PointSet::EMPTY;
        for block in d.blocks() {
            prop_assert!(block.class.contains(block.rep));
            prop_assert!(union.intersection(block.class).is_empty());
            union = union.union(block.class);
        }
        prop_assert_eq!(union, PointSet::full(e.n()));
        prop_assert_eq!(d.image(), e.image());
    }

    #[test]
    fn commuting_idempotents_multiply_to_an_idempotent(
        (e, f) in (2usize..=6).prop_flat_map(|n| (idempotent(n), idempotent(n)))
    ) {
        if e.commutes(&f).unwrap() {
            let ef = e.then(&f);
            prop_assert!(ef.is_idempotent());
            prop_assert_eq!(ef, f.then(&e));
        }
    }

    /// If `x` is an image point of `e` and `y·f` lands in the `e`-class of `x`, then `f` fixes `x`.
    #[test]
    fn commuting_partner_fixes_image_points(
        (e, f) in (2usize..=6).prop_flat_map(|n| (idempotent(n), idempotent(n)))
    ) {
        prop_assume!(e.commutes(&f).unwrap());
        for x in e.image() {
            let class = e.preimage(x);
            for y in 0..e.n() {
                if class.contains(f.apply(y)) {
                    prop_assert_eq!(f.apply(x), x);
                }
            }
        }
    }

    /// A cycle `x_1 → x_2 → … → x_k → x_1` realized by idempotents `e_i` forces `e_1`
    /// to fail to commute with some later `e_j`.
    #[test]
    fn idempotent_cycles_do_not_commute(
        (n, perm, k, picks) in (2usize..=7).prop_flat_map(|n| (
            Just(n),
            Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            2..=n,
            prop::collection::vec((any::<u32>(), prop::collection::vec(any::<Index>(), n)), n),
        ))
    ) {
        let cycle = &perm[..k];
        let es: Vec<Transformation> = (0..k)
            .map(|i| {
                let from = cycle[i];
                let to = cycle[(i + 1) % k];
                let (mask, choice) = &picks[i];
                // image must contain `to` and avoid `from`
                let image = PointSet::from_bits(*mask & ((1 << n) - 1)).with(to).without(from);
                let reps: Vec<usize> = image.iter().collect();
                let table: Vec<usize> = (0..n)
                    .map(|x| {
                        if x == from {
                            to
                        } else if image.contains(x) {
                            x
                        } else {
                            reps[choice[x].index(reps.len())]
                        }
                    })
                    .collect();
                Transformation::from_images(&table).unwrap()
            })
            .collect();
        for (i, e) in es.iter().enumerate() {
            prop_assert!(e.is_idempotent());
            prop_assert_eq!(e.apply(cycle[i]), cycle[(i + 1) % k]);
        }
        prop_assert!(es[1..].iter().any(|ej| !es[0].commutes(ej).unwrap()));
    }
}

#[test]
fn commuting_partner_fixes_image_points_exhaustive() {
    for n in 1..=4 {
        let all = enumerate_idempotents(n).unwrap();
        for e in &all {
            for f in all.iter().filter(|f| e.commutes(f).unwrap()) {
                for x in e.image() {
                    let class = e.preimage(x);
                    if (0..n).any(|y| class.contains(f.apply(y))) {
                        assert_eq!(f.apply(x), x, "{e:?} {f:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn orders_are_partial_orders_with_composition_as_meet() {
    for n in 1..=4 {
        for s in all_subsemilattices(n).unwrap() {
            let order = s.natural_order();
            assert!(order.is_partial_order());
            for i in 0..s.len() {
                for j in 0..s.len() {
                    let meet = s.meet(&s.elements()[i], &s.elements()[j]).unwrap();
                    assert_eq!(order.glb(i, j), s.index_of(&meet), "{s:?}");
                }
            }
            assert!(s.transitivity_order().is_partial_order(), "{s:?}");
        }
    }
}

#[test]
fn maximality_agrees_with_the_definition() {
    for n in 1..=3 {
        let all = enumerate_idempotents(n).unwrap();
        let oracle = brute_force_subsemilattices(n).unwrap();
        for s in &oracle {
            let extendable = oracle
                .iter()
                .any(|big| big.len() > s.len() && s.iter().all(|e| big.contains(e)));
            assert_eq!(s.is_maximal(&all), !extendable, "{s:?}");
        }
    }
}

#[test]
fn oracle_maximal_elements_are_the_enumerated_ones() {
    let config = EnumerationConfig::default();
    for n in 1..=3 {
        let oracle = inclusion_maximal(&brute_force_subsemilattices(n).unwrap());
        assert_eq!(oracle, enumerate_maximal_semilattices(n, &config).unwrap());
    }
}

#[test]
fn all_subsemilattices_at_four_are_valid() {
    let all = all_subsemilattices(4).unwrap();
    for s in &all {
        assert_eq!(&Semilattice::verify(4, s.elements().to_vec()).unwrap(), s);
    }
    assert_eq!(inclusion_maximal(&all).len(), 76);
}

#[test]
fn every_maximal_semilattice_has_one_constant() {
    let config = EnumerationConfig::default();
    for n in 1..=5 {
        for s in enumerate_maximal_semilattices(n, &config).unwrap() {
            let constants: Vec<_> = s.constants().collect();
            assert_eq!(constants.len(), 1, "{s:?}");
            // the constant goes to a point fixed by every element
            let c = constants[0].apply(0);
            assert!(s.common_fixed_points().contains(c));
        }
    }
}

#[test]
fn et_is_the_idempotent_part_of_it() {
    for n in 1..=5 {
        let all = enumerate_idempotents(n).unwrap();
        for t in 0..n {
            let in_it: Vec<Transformation> =
                all.iter().filter(|a| is_in_it(t, a)).cloned().collect();
            assert_eq!(in_it, make_et(n, t).unwrap().elements());
        }
    }
}

fn reduction_sample() -> Vec<Semilattice> {
    let mut out: Vec<Semilattice> = (2..=4)
        .flat_map(|n| all_subsemilattices(n).unwrap())
        .collect();
    out.extend(enumerate_maximal_semilattices(5, &EnumerationConfig::default()).unwrap());
    out
}

#[test]
fn star_is_a_homomorphism() {
    for s in reduction_sample() {
        for anchor in valid_anchors(&s) {
            for g in &s {
                for h in &s {
                    assert_eq!(
                        star(&g.then(h), anchor),
                        star(g, anchor).then(&star(h, anchor))
                    );
                }
            }
        }
    }
}

#[test]
fn star_is_injective_on_u_hitting_elements() {
    for s in reduction_sample() {
        for anchor in valid_anchors(&s) {
            let hitting: Vec<&Transformation> =
                s.iter().filter(|g| g.image().contains(anchor.u)).collect();
            for (i, g) in hitting.iter().enumerate() {
                for h in &hitting[i + 1..] {
                    assert_ne!(star(g, anchor), star(h, anchor));
                }
            }
        }
    }
}

#[test]
fn reductions_satisfy_the_counting_chain() {
    for s in reduction_sample() {
        let r = reduce(&s).unwrap();
        assert!(r.counting_chain_holds(), "{s:?}");
        assert_eq!(r.restricted.n(), s.n() - 1);
        assert!(r.star_image.iter().all(|g| !g.image().contains(r.anchor.u)));
        // restriction is a bijection from S* onto S*_u
        let mut restricted: Vec<_> = r
            .star_image
            .iter()
            .map(|g| restrict_away(g, r.anchor.u))
            .collect();
        restricted.sort();
        assert_eq!(restricted, r.restricted.elements());
    }
}

#[test]
fn anchor_point_lies_in_every_image() {
    for s in reduction_sample() {
        let anchor = find_anchor(&s).unwrap();
        let common = s
            .iter()
            .fold(PointSet::full(s.n()), |acc, e| acc.intersection(e.image()));
        assert!(common.contains(anchor.t));
    }
}

#[test]
fn lambda_lands_in_et() {
    for s in reduction_sample() {
        for anchor in valid_anchors(&s) {
            if let Ok(emb) = lambda_embed(&s, anchor) {
                let et = make_et(s.n(), anchor.t).unwrap();
                assert!(emb.image().iter().all(|l| et.contains(l)));
                assert!(emb.is_injective());
            }
        }
    }
}

#[test]
fn spectrum_is_independent_of_worker_count() {
    let one = EnumerationConfig::new(5, 1).unwrap();
    let many = EnumerationConfig::new(5, 4).unwrap();
    for n in 3..=5 {
        assert_eq!(spectrum(n, &one).unwrap(), spectrum(n, &many).unwrap());
    }
}
