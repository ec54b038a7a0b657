mod common;

use lesem::algebra::{BoundedLattice, Valuation};
use lesem::correspondence::{
    approximation_space_check, bullet_e, graph_condition, polarity_condition, valid_on_frame, AnyFrame, GraphCondition,
    PolarityCondition,
};
use lesem::gen::{random_formula, random_graph, random_graph_frame, random_polarity, random_polarity_frame};
use lesem::relation::Relation;
use lesem::syntax::{axioms_of_base_logic, parse_sequent};
use lesem::{graph, PolarityFrame, ReflexiveGraph, Sequent, Signature};
use proptest::prelude::*;
use rand::Rng;

fn valid(fr: &AnyFrame, text: &str) -> bool {
    let s = parse_sequent(fr.signature(), text).unwrap();
    valid_on_frame(fr, &s, None).unwrap().valid
}

fn box_sig() -> Signature {
    Signature::with_builtins(&["box"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn polarity_factivity_and_omniscience(seed in any::<u64>(), factive in any::<bool>()) {
        let mut rng = common::rng(seed);
        let (na, nx) = (rng.random_range(1..=4), rng.random_range(1..=4));
        let p = random_polarity(&mut rng, na, nx, 0.5);
        let fr = random_polarity_frame(&mut rng, p, &box_sig(), 0.5, factive).unwrap();
        let cond_t = polarity_condition(&fr, PolarityCondition::Factivity).unwrap();
        let cond_o = polarity_condition(&fr, PolarityCondition::Omniscience).unwrap();
        let fr = AnyFrame::Polarity(fr);
        prop_assert_eq!(valid(&fr, "box p |- p"), cond_t);
        prop_assert_eq!(valid(&fr, "p |- box p"), cond_o);
    }

    #[test]
    fn graph_reflexivity_and_omniscience(seed in any::<u64>(), above in any::<bool>()) {
        let mut rng = common::rng(seed);
        let n = rng.random_range(1..=4);
        let g = random_graph(&mut rng, n, 0.4);
        let gf = random_graph_frame(&mut rng, g, &box_sig(), 0.5, above).unwrap();
        let cond_r = graph_condition(&gf, GraphCondition::EReflexivity).unwrap();
        let cond_o = graph_condition(&gf, GraphCondition::EOmniscience).unwrap();
        let fr = AnyFrame::Graph(gf);
        prop_assert_eq!(valid(&fr, "box p |- p"), cond_r);
        prop_assert_eq!(valid(&fr, "p |- box p"), cond_o);
    }

    #[test]
    fn graph_transitivity(seed in any::<u64>(), above in any::<bool>()) {
        let mut rng = common::rng(seed);
        let n = rng.random_range(1..=4);
        let g = random_graph(&mut rng, n, 0.4);
        let gf = random_graph_frame(&mut rng, g, &box_sig(), 0.5, above).unwrap();
        let cond = graph_condition(&gf, GraphCondition::ETransitivity).unwrap();
        let fr = AnyFrame::Graph(gf);
        prop_assert_eq!(valid(&fr, "box p |- box box p"), cond);
    }

    #[test]
    fn base_logic_is_sound(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let sig = Signature::dml();
        let p = random_polarity(&mut rng, 3, 3, 0.5);
        let pf = AnyFrame::Polarity(random_polarity_frame(&mut rng, p, &sig, 0.4, false).unwrap());
        let g = random_graph(&mut rng, 3, 0.4);
        let gf = AnyFrame::Graph(random_graph_frame(&mut rng, g, &sig, 0.4, false).unwrap());
        for fr in [pf, gf] {
            for ax in axioms_of_base_logic(&sig) {
                let rep = valid_on_frame(&fr, &ax, None).unwrap();
                prop_assert!(rep.valid, "{}", ax);
            }
        }
    }

    #[test]
    fn validity_is_invariant_under_renaming(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let sig = Signature::dml();
        let p = random_polarity(&mut rng, 3, 3, 0.5);
        let fr = AnyFrame::Polarity(random_polarity_frame(&mut rng, p, &sig, 0.4, false).unwrap());
        let s = Sequent::new(random_formula(&mut rng, &sig, &["p", "q"], 3), random_formula(&mut rng, &sig, &["p", "q"], 3));
        let swap = |v: &str| match v { "p" => "q".to_string(), "q" => "p".to_string(), o => o.to_string() };
        let renamed = Sequent::new(s.lhs.rename(&swap), s.rhs.rename(&swap));
        prop_assert_eq!(valid_on_frame(&fr, &s, None).unwrap().valid, valid_on_frame(&fr, &renamed, None).unwrap().valid);
    }

    #[test]
    fn discrete_graphs_give_kripke_semantics(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = rng.random_range(1..=4);
        let sig = Signature::with_builtins(&["box", "dia"]);
        let gf = random_graph_frame(&mut rng, ReflexiveGraph::discrete(n), &sig, 0.4, false).unwrap();
        let alg = gf.complex_algebra().unwrap();
        let (rb, rd) = (&gf.relations()[0], &gf.relations()[1]);
        let v = Valuation::from_pairs(&[("p", rng.random_range(0..alg.size())), ("q", rng.random_range(0..alg.size()))]);
        let phi = random_formula(&mut rng, &sig, &["p", "q"], 3);
        let holds = |z: usize, f: &lesem::Formula| graph::forces(&alg, &v, z, f).unwrap();
        for f in phi.subformulas() {
            for z in 0..n {
                prop_assert_eq!(graph::refutes(&alg, &v, z, f).unwrap(), !holds(z, f));
                if let lesem::Formula::App(name, args) = f {
                    let kripke = match name.as_str() {
                        "box" => (0..n).all(|w| !rb.contains(&[z, w]) || holds(w, &args[0])),
                        _ => (0..n).any(|w| rd.contains(&[z, w]) && holds(w, &args[0])),
                    };
                    prop_assert_eq!(holds(z, f), kripke);
                }
            }
        }
    }
}

#[test]
fn bullet_on_discrete_graphs_is_composition() {
    let mut rng = common::rng(3);
    for _ in 0..100 {
        let n = rng.random_range(1..=5);
        let r = Relation::from_fn(&[n, n], |_| rng.random_bool(0.4));
        let s = Relation::from_fn(&[n, n], |_| rng.random_bool(0.4));
        let comp = Relation::from_fn(&[n, n], |t| (0..n).any(|y| r.contains(&[t[0], y]) && s.contains(&[y, t[1]])));
        assert_eq!(bullet_e(&r, &s, &ReflexiveGraph::discrete(n)), comp);
    }
}

#[test]
fn incidence_approximation_space() {
    let mut rng = common::rng(4);
    for _ in 0..30 {
        let p = random_polarity(&mut rng, 4, 4, 0.5);
        let rb = Relation::from_fn(&[4, 4], |t| p.incident(t[0], t[1]));
        let rd = Relation::from_fn(&[4, 4], |t| p.incident(t[1], t[0]));
        let fr = PolarityFrame::new(p, Signature::with_builtins(&["box", "dia"]), vec![rb, rd]).unwrap();
        let rep = approximation_space_check(&fr).unwrap();
        assert!(rep.adjunction);
        assert!(rep.box_interior.all() && rep.dia_closure.all());
        assert!(rep.axioms.iter().filter(|a| a.property == "reflexivity").all(|a| a.valid));
    }
}

#[test]
fn full_box_and_empty_dia_are_not_serial() {
    let p = common::plays();
    let fr = PolarityFrame::new(
        p,
        Signature::with_builtins(&["box", "dia"]),
        vec![Relation::full(&[3, 3]), Relation::empty(&[3, 3])],
    )
    .unwrap();
    let rep = approximation_space_check(&fr).unwrap();
    let serial = rep.axioms.iter().find(|a| a.property == "seriality").unwrap();
    assert!(!serial.valid);
    assert!(serial.countermodel.is_some());
    assert!(!rep.adjunction);
}
