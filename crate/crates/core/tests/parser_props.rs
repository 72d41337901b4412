//! Printing and reparsing are mutually inverse on randomly generated syntax
//! trees, for both terms and sequents.

use proptest::prelude::*;

use sheafcalc_core::logic::{parse_sequent, parse_term, Equation, HornSequent, Term};

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        1 => Just(Term::Zero),
        1 => Just(Term::One),
        4 => prop_oneof![
            Just("p"),
            Just("q"),
            Just("r"),
            Just("x"),
            Just("y"),
            Just("long_name_0"),
        ]
        .prop_map(Term::var),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::or(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Term::imp(l, r)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn printed_terms_reparse(term in term_strategy()) {
        let text = term.to_string();
        let back = parse_term(&text).expect("printed term parses");
        prop_assert_eq!(back, term);
    }

    #[test]
    fn printed_sequents_reparse(
        premises in proptest::collection::vec((term_strategy(), term_strategy()), 0..3),
        lhs in term_strategy(),
        rhs in term_strategy(),
    ) {
        let sequent = HornSequent::new(
            premises
                .into_iter()
                .map(|(l, r)| Equation::new(l, r))
                .collect(),
            Equation::new(lhs, rhs),
        );
        let text = sequent.to_string();
        let back = parse_sequent(&text).expect("printed sequent parses");
        prop_assert_eq!(back, sequent);
    }
}
