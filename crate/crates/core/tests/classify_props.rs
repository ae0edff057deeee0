mod common;

use common::{closed_term, open_term};
use fracterm::classify::{classify, eq_pair, eq_val, simple_equivalent, Classification};
use fracterm::meadow::MeadowKind;
use fracterm::term::{eq_syn, Term};
use proptest::prelude::*;

fn meadows() -> Vec<MeadowKind> {
    vec![
        MeadowKind::Q0,
        MeadowKind::CommonQ,
        MeadowKind::gf(5).unwrap(),
    ]
}

fn consistent(c: &Classification) -> Result<(), TestCaseError> {
    prop_assert_eq!(c.is_composed, c.is_fraction && !c.is_flat);
    if c.is_fraction {
        prop_assert_eq!(c.is_uncommon, c.is_common.map(|b| !b));
    } else {
        prop_assert_eq!(c.is_uncommon, Some(false));
        prop_assert_eq!(c.is_common, Some(false));
    }
    prop_assert_eq!(c.numerator.is_some(), c.is_fraction);
    prop_assert_eq!(c.denominator.is_some(), c.is_fraction);
    if c.is_simple {
        prop_assert!(c.is_common == Some(true) && c.is_flat);
        prop_assert!(c.is_proper != c.is_improper);
    }
    prop_assert!(!(c.is_proper && c.is_improper));
    if c.is_proper || c.is_improper || c.is_scheinbruch || c.is_simplified {
        prop_assert!(c.is_simple);
    }
    if c.is_safe_fraction == Some(true) {
        prop_assert!(c.is_fraction && c.is_common == Some(true));
    }
    Ok(())
}

proptest! {
    #[test]
    fn classification_invariants(t in open_term()) {
        for m in meadows() {
            consistent(&classify(&t, &m))?;
        }
    }

    #[test]
    fn hierarchy_in_every_backend(a in closed_term(), b in closed_term(), copy in any::<bool>()) {
        let b = if copy { a.clone() } else { b };
        for m in meadows() {
            let pair = eq_pair(&a, &b, &m).unwrap();
            let val = eq_val(&a, &b, &m).unwrap();
            prop_assert!(!eq_syn(&a, &b) || pair);
            prop_assert!(!pair || val);
        }
    }

    #[test]
    fn quasi_cardinality_never_holds_syntactically(t in closed_term(), r in closed_term(), s in closed_term()) {
        let lhs = Term::add(Term::div(t.clone(), r.clone()), Term::div(s.clone(), r.clone()));
        let rhs = Term::div(Term::add(t, s), r);
        prop_assert!(!eq_syn(&lhs, &rhs));
    }

    #[test]
    fn simplified_simple_fractions(k in 0u64..60, l in 1u64..60) {
        let f = Term::div(Term::num(k), Term::num(l));
        let c = classify(&f, &MeadowKind::Q0);
        prop_assert!(c.is_simple);
        if c.is_simplified {
            prop_assert!(simple_equivalent(&f, &f, &MeadowKind::Q0).unwrap());
            prop_assert!(classify(&f.clone(), &MeadowKind::Q0).is_simplified);
        }
    }
}
