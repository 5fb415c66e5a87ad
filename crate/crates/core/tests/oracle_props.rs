mod common;

use common::*;
use proptest::prelude::*;
use shehu::oracle::{numeric_invert_image, verify_image, CheckStatus};
use shehu::expr::{parse_with, ParseOptions};
use shehu::{transform, verify_pair};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn talbot_round_trip(text in atom_sum_text(2, 2)) {
        let a = atoms(&text);
        let img = transform(&a).unwrap();
        let exact: Vec<f64> = [0.5, 1.0, 2.0].iter().map(|&t| a.eval(t, 0.0).unwrap()).collect();
        let scale = exact.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for (t, x) in [0.5, 1.0, 2.0].into_iter().zip(exact) {
            let y = numeric_invert_image(&img, t).unwrap();
            prop_assert!((x - y).abs() <= 1e-6 * x.abs().max(scale), "{} at t={}: {} vs {}", text, t, x, y);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    /// Correct images pass at every `u` along a ray `s/u = r`; a wrong power
    /// of `u` would pass at `u = 1` only.
    #[test]
    fn verdicts_do_not_depend_on_u(text in atom_sum_text(1, 2), dr in 1u32..=3) {
        let img = transform(&atoms(&text)).unwrap();
        let r = img.roc.to_f64().max(0.0) + dr as f64;
        let grid: Vec<(f64, f64)> = [1.0, 2.0, 3.0].iter().map(|&u| (r * u, u)).collect();
        let statuses = verify_image(&expr(&text), &img, &grid).forward_statuses();
        prop_assert_eq!(statuses, vec![CheckStatus::Pass; 3]);

        // An extra factor of u is invisible where the image vanishes.
        prop_assume!(img.eval_r(r).abs() > 1e-6);
        let skewed = parse_with(&format!("u*({})", img.expanded()), &ParseOptions::image()).unwrap();
        let statuses = verify_pair(&expr(&text), &skewed, &grid).forward_statuses();
        prop_assert_eq!(statuses[0], CheckStatus::Pass);
        prop_assert_eq!(&statuses[1..], &[CheckStatus::Fail, CheckStatus::Fail]);
    }
}

#[test]
fn verification_is_deterministic() {
    let v = expr("t^2*exp(-t)*cos(3*t) + delta(t - 1/2)");
    let img = transform(&atoms("t^2*exp(-t)*cos(3*t) + delta(t - 1/2)")).unwrap();
    let grid = shehu::oracle::DEFAULT_GRID;
    let a = verify_image(&v, &img, &grid);
    let b = verify_image(&v, &img, &grid);
    assert_eq!(a, b);
    assert!(a.passed());
}
