mod common;

use common::*;
use proptest::prelude::*;
use shehu::expr::format;
use shehu::{canonicalize, differentiate, evaluate, parse, Bindings, Var};

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn format_parse_round_trip(text in messy_text()) {
        let e = expr(&text);
        let again = parse(&format(&e)).unwrap();
        prop_assert_eq!(canonicalize(&again).unwrap(), canonicalize(&e).unwrap());
    }

    #[test]
    fn canonicalize_is_idempotent(text in messy_text()) {
        let a = atoms(&text);
        prop_assert_eq!(canonicalize(&a.to_expr()).unwrap(), a.clone());
        // The printed canonical form also reads back to itself.
        prop_assert_eq!(canonicalize(&parse(&format(&a.to_expr())).unwrap()).unwrap(), a);
    }

    #[test]
    fn canonical_form_is_pointwise_faithful(text in messy_text()) {
        let e = expr(&text);
        let a = atoms(&text).to_expr();
        for i in 0..16 {
            let t = -1.0 + 3.0 * i as f64 / 15.0;
            let x = evaluate(&e, &Bindings::t(t)).unwrap();
            let y = evaluate(&a, &Bindings::t(t)).unwrap();
            // Unit floor: uncancelled terms leave ~1e-17 where the exact value is 0.
            prop_assert!(close(x, y, 1e-10), "{} at t={}: {} vs {}", text, t, x, y);
        }
    }

    #[test]
    fn derivative_matches_finite_differences(text in atom_sum_text(2, 2)) {
        let e = expr(&text);
        let d = differentiate(&e, Var::T).unwrap();
        let h = 1e-5;
        for t in [0.3, 0.9, 1.7] {
            let fd = (evaluate(&e, &Bindings::t(t + h)).unwrap() - evaluate(&e, &Bindings::t(t - h)).unwrap()) / (2.0 * h);
            let exact = evaluate(&d, &Bindings::t(t)).unwrap();
            prop_assert!(close(fd, exact, 1e-6), "{}: d/dt at {} = {} vs fd {}", text, t, exact, fd);
        }
    }
}
