mod common;

use lesem::lattice::{ConceptLattice, Polarity};
use lesem::BitSet;
use proptest::prelude::*;

fn polarity(max: usize) -> impl Strategy<Value = Polarity> {
    (0..=max, 0..=max).prop_flat_map(|(na, nx)| {
        proptest::collection::vec(any::<bool>(), na * nx)
            .prop_map(move |bits| Polarity::from_fn(na, nx, |a, x| bits[a * nx + x]))
    })
}

fn subset(n: usize, mask: u64) -> BitSet {
    BitSet::from_indices(n, (0..n).filter(|i| mask >> i & 1 == 1))
}

/// Concepts as all pairs `(B, Y)` with `B↑ = Y` and `Y↓ = B`, found by scanning every pair of subsets.
fn concepts_by_pairs(p: &Polarity) -> Vec<(BitSet, BitSet)> {
    let (na, nx) = (p.num_objects(), p.num_attributes());
    let mut out = Vec::new();
    for bm in 0u64..1 << na {
        let b = subset(na, bm);
        for ym in 0u64..1 << nx {
            let y = subset(nx, ym);
            let up_ok = (0..nx).all(|x| y.contains(x) == b.iter().all(|a| p.incident(a, x)));
            let down_ok = (0..na).all(|a| b.contains(a) == y.iter().all(|x| p.incident(a, x)));
            if up_ok && down_ok {
                out.push((b.clone(), y));
            }
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn galois_connection(p in polarity(8), bm in any::<u64>(), ym in any::<u64>()) {
        let b = subset(p.num_objects(), bm);
        let y = subset(p.num_attributes(), ym);
        prop_assert_eq!(y.is_subset(&p.up(&b)), b.is_subset(&p.down(&y)));
    }

    #[test]
    fn antitone_and_closure(p in polarity(8), m1 in any::<u64>(), m2 in any::<u64>()) {
        let na = p.num_objects();
        let b1 = subset(na, m1 & m2);
        let b2 = subset(na, m1);
        prop_assert!(p.up(&b2).is_subset(&p.up(&b1)));
        prop_assert!(b2.is_subset(&p.close_extent(&b2)));
        prop_assert_eq!(p.up(&p.down(&p.up(&b2))), p.up(&b2));
        prop_assert_eq!(p.close_extent(&p.close_extent(&b2)), p.close_extent(&b2));
        let y = subset(p.num_attributes(), m2);
        prop_assert!(y.is_subset(&p.close_intent(&y)));
        prop_assert_eq!(p.down(&p.up(&p.down(&y))), p.down(&y));
    }

    #[test]
    fn join_and_meet_generators(p in polarity(8)) {
        let l = ConceptLattice::new(&p).unwrap();
        for c in 0..l.len() {
            let objs: Vec<usize> = l.extent(c).iter().map(|a| l.object_concept(a)).collect();
            let atts: Vec<usize> = l.intent(c).iter().map(|x| l.attribute_concept(x)).collect();
            prop_assert_eq!(l.join(&objs).unwrap(), c);
            prop_assert_eq!(l.meet(&atts).unwrap(), c);
        }
    }

    #[test]
    fn lattice_laws(p in polarity(6)) {
        let l = ConceptLattice::new(&p).unwrap();
        let n = l.len();
        prop_assert_eq!(l.meet(&[]).unwrap(), l.top());
        prop_assert_eq!(l.join(&[]).unwrap(), l.bottom());
        for a in 0..n {
            prop_assert_eq!(l.meet2(a, a), a);
            prop_assert_eq!(l.join2(a, a), a);
            for b in 0..n {
                prop_assert_eq!(l.meet2(a, b), l.meet2(b, a));
                prop_assert_eq!(l.join2(a, b), l.join2(b, a));
                prop_assert_eq!(l.meet2(a, l.join2(a, b)), a);
                prop_assert_eq!(l.join2(a, l.meet2(a, b)), a);
                let leq = l.leq(a, b).unwrap();
                prop_assert_eq!(leq, l.meet2(a, b) == a);
                prop_assert_eq!(leq, l.join2(a, b) == b);
                prop_assert_eq!(leq, l.extent(a).is_subset(l.extent(b)));
                for c in 0..n {
                    prop_assert_eq!(l.meet2(a, l.meet2(b, c)), l.meet2(l.meet2(a, b), c));
                    prop_assert_eq!(l.join2(a, l.join2(b, c)), l.join2(l.join2(a, b), c));
                }
            }
        }
    }

    #[test]
    fn enumeration_matches_pair_scan(p in polarity(4)) {
        let l = ConceptLattice::new(&p).unwrap();
        let mut oracle = concepts_by_pairs(&p);
        oracle.sort_by(|a, b| a.0.canonical_cmp(&b.0));
        let got: Vec<(BitSet, BitSet)> = l.concepts().iter().map(|c| (c.extent.clone(), c.intent.clone())).collect();
        prop_assert_eq!(got, oracle);
    }

    #[test]
    fn hasse_edges_are_the_transitive_reduction(p in polarity(5)) {
        let l = ConceptLattice::new(&p).unwrap();
        let n = l.len();
        let lt = |a: usize, b: usize| a != b && l.extent(a).is_subset(l.extent(b));
        let mut oracle = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if lt(a, b) && !(0..n).any(|m| lt(a, m) && lt(m, b)) {
                    oracle.push((a, b));
                }
            }
        }
        let mut got = l.hasse_edges();
        got.sort();
        prop_assert_eq!(got, oracle);
    }

    #[test]
    fn dual_swaps_the_order(p in polarity(6)) {
        let l = ConceptLattice::new(&p).unwrap();
        let d = ConceptLattice::new(&p.dual()).unwrap();
        prop_assert_eq!(l.len(), d.len());
        for c in 0..l.len() {
            prop_assert!(d.index_of_extent(l.intent(c)).is_some());
        }
    }
}

#[test]
fn distributivity_by_triples() {
    let mut rng = common::rng(5);
    for _ in 0..200 {
        let p = lesem::gen::random_polarity(&mut rng, 4, 4, 0.5);
        let l = ConceptLattice::new(&p).unwrap();
        let n = l.len();
        let oracle = (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| l.meet2(a, l.join2(b, c)) == l.join2(l.meet2(a, b), l.meet2(a, c))))
        });
        assert_eq!(l.is_distributive(), oracle);
    }
}

#[test]
fn caps_are_reported() {
    let p = Polarity::from_fn(23, 23, |a, x| a != x);
    let e = ConceptLattice::new(&p).unwrap_err();
    assert!(e.is_resource_limit());
    assert!(e.to_string().contains("22"));
}
