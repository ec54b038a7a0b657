use lesem::syntax::{axioms_of_base_logic, parse_formula, parse_sequent, Connective, Family, Formula, Sequent, Signature, Tone};
use proptest::prelude::*;

fn signature() -> Signature {
    let mut cs = Signature::dml().connectives().to_vec();
    cs.push(Connective::new("e", Family::F, &[]));
    cs.push(Connective::new("imp", Family::G, &[Tone::Antitone, Tone::Monotone]));
    cs.push(Connective::new("fuse", Family::F, &[Tone::Monotone, Tone::Monotone, Tone::Antitone]));
    Signature::new(cs).unwrap()
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => prop::sample::select(vec!["p", "q", "r", "p1", "long_name"]).prop_map(Formula::var),
        1 => Just(Formula::Top),
        1 => Just(Formula::Bot),
        1 => Just(Formula::app("e", vec![])),
    ];
    leaf.prop_recursive(5, 48, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (prop::sample::select(vec!["box", "dia", "lhd", "rhd"]), inner.clone())
                .prop_map(|(n, a)| Formula::unary(n, a)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::app("imp", vec![a, b])),
            (inner.clone(), inner.clone(), inner).prop_map(|(a, b, c)| Formula::app("fuse", vec![a, b, c])),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn parse_of_format_is_identity(f in formula()) {
        let sig = signature();
        let text = f.to_string();
        prop_assert_eq!(parse_formula(&sig, &text).unwrap(), f);
    }

    #[test]
    fn sequents_round_trip(a in formula(), b in formula()) {
        let sig = signature();
        let s = Sequent::new(a, b);
        prop_assert_eq!(parse_sequent(&sig, &s.to_string()).unwrap(), s);
    }

    #[test]
    fn subformulas_are_distinct_and_closed(f in formula()) {
        let subs = f.subformulas();
        prop_assert_eq!(*subs.last().unwrap(), &f);
        for (i, s) in subs.iter().enumerate() {
            prop_assert!(!subs[..i].contains(s));
        }
        prop_assert!(f.check(&signature()).is_ok());
    }
}

#[test]
fn precedence_and_errors() {
    let sig = signature();
    let f = parse_formula(&sig, "box p /\\ q \\/ r").unwrap();
    assert_eq!(f, Formula::or(Formula::and(Formula::unary("box", Formula::var("p")), Formula::var("q")), Formula::var("r")));
    assert_eq!(parse_formula(&sig, "e()").unwrap().to_string(), "e()");
    assert_eq!(parse_formula(&sig, "imp(p, q /\\ r)").unwrap().to_string(), "imp(p, q /\\ r)");
    for bad in ["", "p /\\", "box", "imp(p)", "(p", "p q", "wat(p)", "top(p)"] {
        assert!(parse_formula(&sig, bad).is_err(), "{bad}");
    }
    assert!(parse_sequent(&sig, "p |- q |- r").is_err());
    assert!(parse_sequent(&sig, "p").is_err());
}

#[test]
fn base_logic_axiom_counts() {
    assert_eq!(axioms_of_base_logic(&Signature::empty()).len(), 7);
    assert_eq!(axioms_of_base_logic(&Signature::with_builtins(&["box"])).len(), 9);
    assert_eq!(axioms_of_base_logic(&Signature::dml()).len(), 15);
}
