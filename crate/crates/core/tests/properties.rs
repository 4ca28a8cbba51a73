use proptest::prelude::*;

use quadform::cli::parse_form;
use quadform::fields::{FieldDesc, SquareClass};
use quadform::forms::QForm;
use quadform::localglobal as lg;
use quadform::pfister::{self, PfisterSpec};

fn cls(a: i64) -> SquareClass {
    let f = FieldDesc::Rationals;
    f.square_class(&f.int(a)).unwrap()
}

fn nonzero(h: i64) -> impl Strategy<Value = i64> {
    (-h..=h).prop_filter("nonzero", |x| *x != 0)
}

fn rational(dim: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = QForm> {
    prop::collection::vec(nonzero(40), dim).prop_map(|e| QForm::from_ints(&FieldDesc::Rationals, &e).unwrap())
}

fn spec(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PfisterSpec> {
    prop::collection::vec(nonzero(15), n).prop_map(|s| PfisterSpec::new(s.into_iter().map(cls).collect()))
}

fn laurent(dim: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = QForm> {
    prop::collection::vec((nonzero(20), any::<bool>()), dim).prop_map(|e| {
        let k = FieldDesc::Rationals.laurent("x").unwrap();
        let diag = e.into_iter().map(|(a, odd)| SquareClass::Laurent { base: Box::new(cls(a)), odd }).collect();
        QForm::from_classes(&k, diag).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_round_trip(q in rational(1..=6)) {
        prop_assert_eq!(parse_form(&q.to_string(), q.field()).unwrap(), q);
    }

    #[test]
    fn print_parse_round_trip_laurent(q in laurent(1..=5)) {
        prop_assert_eq!(parse_form(&q.to_string(), q.field()).unwrap(), q);
    }

    #[test]
    fn witt_decomposition_is_consistent(q in rational(1..=7)) {
        let w = lg::witt_decompose(&q).unwrap();
        let an_dim = w.anisotropic_part.as_ref().map_or(0, QForm::dim);
        prop_assert_eq!(an_dim + 2 * w.index, q.dim());
        if let Some(an) = &w.anisotropic_part {
            prop_assert!(!lg::is_isotropic(an).unwrap());
            prop_assert!(lg::is_subform(an, &q).unwrap());
        }
    }

    #[test]
    fn isometry_is_invariant_under_scaling_by_squares(q in rational(1..=5), c in nonzero(9)) {
        let scaled = q.scale_class(&cls(c * c)).unwrap();
        prop_assert!(lg::is_isometric(&q, &scaled).unwrap());
    }

    #[test]
    fn q_minus_q_is_hyperbolic(q in rational(1..=5)) {
        prop_assert!(lg::is_hyperbolic(&q.minus(&q).unwrap()).unwrap());
    }

    #[test]
    fn division_round_trip(pi in spec(1..=3), r in rational(1..=3)) {
        let f = FieldDesc::Rationals;
        let big = pi.expand(&f).unwrap();
        let q = big.tensor(&r).unwrap();
        let quot = pfister::divide_by_pfister(&q, &pi).unwrap().expect("pi-multiple not divisible");
        prop_assert!(lg::is_isometric(&big.tensor(&quot).unwrap(), &q).unwrap());
    }

    #[test]
    fn scaled_pfister_is_recognized(pi in spec(0..=3), c in nonzero(30)) {
        let f = FieldDesc::Rationals;
        let q = pi.expand(&f).unwrap().scale_class(&cls(c)).unwrap();
        let s = pfister::similar_to_pfister(&q).unwrap().expect("scaled Pfister form not recognized");
        prop_assert!(lg::is_isometric(&q.scale_class(&s.scalar).unwrap(), &s.spec.expand(&f).unwrap()).unwrap());
    }

    #[test]
    fn pfister_forms_lie_in_the_ideal(pi in spec(1..=3)) {
        let q = pi.expand(&FieldDesc::Rationals).unwrap();
        prop_assert!(pfister::in_in(&q, pi.fold()).unwrap());
    }

    #[test]
    fn springer_additivity(e in rational(1..=4), o in rational(1..=4)) {
        let k = FieldDesc::Rationals.laurent("x").unwrap();
        let diag = e.diag().iter().map(|c| SquareClass::Laurent { base: Box::new(c.clone()), odd: false })
            .chain(o.diag().iter().map(|c| SquareClass::Laurent { base: Box::new(c.clone()), odd: true }))
            .collect();
        let q = QForm::from_classes(&k, diag).unwrap();
        prop_assert_eq!(lg::witt_index(&q).unwrap(), lg::witt_index(&e).unwrap() + lg::witt_index(&o).unwrap());
    }
}
