mod common;

use common::{closed_term, open_term};
use fracterm::meadow::{denote, MeadowKind};
use fracterm::syntax::{parse, print};
use fracterm::term::{eq_syn, expand_numeral, Position, Term};
use proptest::prelude::*;

fn backends() -> Vec<MeadowKind> {
    vec![
        MeadowKind::Q0,
        MeadowKind::CommonQ,
        MeadowKind::gf(2).unwrap(),
        MeadowKind::gf(7).unwrap(),
    ]
}

proptest! {
    #[test]
    fn eq_syn_is_an_equivalence(a in open_term(), b in open_term(), c in open_term()) {
        prop_assert!(eq_syn(&a, &a));
        prop_assert_eq!(eq_syn(&a, &b), eq_syn(&b, &a));
        if eq_syn(&a, &b) && eq_syn(&b, &c) {
            prop_assert!(eq_syn(&a, &c));
        }
    }

    #[test]
    fn eq_syn_respects_printing_and_values(a in closed_term()) {
        let b = parse(&print(&a)).unwrap();
        prop_assert!(eq_syn(&a, &b));
        prop_assert_eq!(print(&a), print(&b));
        for m in backends() {
            prop_assert_eq!(denote(&a, &m).unwrap(), denote(&b, &m).unwrap());
        }
    }

    #[test]
    fn expand_numeral_preserves_values(t in closed_term()) {
        let e = expand_numeral(&t);
        prop_assert!(eq_syn(&expand_numeral(&e), &e));
        prop_assert!(e.subterms().iter().all(|(_, s)| s.as_numeral().is_none_or(|k| *k <= 1u32.into())));
        for m in backends() {
            prop_assert_eq!(denote(&t, &m).unwrap(), denote(&e, &m).unwrap());
        }
    }

    #[test]
    fn subterms_enumerate_every_node(t in open_term()) {
        let subs = t.subterms();
        prop_assert_eq!(subs.len(), t.node_count());
        prop_assert!(eq_syn(t.subterm_at(&Position::root()).unwrap(), &t));
        for (pos, s) in &subs {
            prop_assert_eq!(t.subterm_at(pos).unwrap(), *s);
        }
        // Preorder is the lexicographic order of positions.
        prop_assert!(subs.windows(2).all(|w| w[0].0 < w[1].0));
    }
}

#[test]
fn numeral_examples() {
    assert_eq!(
        expand_numeral(&Term::num(3)),
        Term::add(Term::add(Term::one(), Term::one()), Term::one())
    );
    assert_eq!(expand_numeral(&Term::one()), Term::one());
    assert_eq!(
        expand_numeral(&Term::div(Term::num(2), Term::var("x"))),
        Term::div(Term::add(Term::one(), Term::one()), Term::var("x"))
    );
    assert!(!eq_syn(&Term::num(2), &Term::add(Term::one(), Term::one())));
}
