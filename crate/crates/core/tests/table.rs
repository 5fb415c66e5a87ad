use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::OnceLock;

use serde_json::Value;
use shehu::oracle::{verify_image_with, CheckStatus, PairSpec, DEFAULT_GRID};
use shehu::table::{bundled_fixture, load_table, VerificationMode};
use shehu::{transform_expr, verify_table, Erratum, TableEntry, TableReport};

fn entries() -> &'static [TableEntry] {
    static E: OnceLock<Vec<TableEntry>> = OnceLock::new();
    E.get_or_init(|| load_table(None).unwrap())
}

fn run() -> &'static (TableReport, Vec<Erratum>) {
    static R: OnceLock<(TableReport, Vec<Erratum>)> = OnceLock::new();
    R.get_or_init(|| verify_table(entries(), &DEFAULT_GRID))
}

#[test]
fn fixture_matches_its_schema() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas/v1/table1.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let doc: Value = serde_json::from_str(bundled_fixture()).unwrap();
    let v = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = v.iter_errors(&doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:#?}");
    assert_eq!(entries().len(), 35);
}

/// Rule-derived images of the evaluatable rows hold to well past the pair tolerance.
#[test]
fn derived_images_are_quadrature_exact() {
    let spec = PairSpec { tol: 1e-8, ..PairSpec::default() };
    for e in entries().iter().filter(|e| e.row.verification_mode == VerificationMode::Numeric) {
        for inst in e.primary() {
            let img = transform_expr(&inst.time).unwrap();
            let rep = verify_image_with(&inst.time, &img, &DEFAULT_GRID, &spec);
            assert!(rep.passed(), "row {} ({}): {}", e.row_id(), inst.describe(&e.row), rep.summary());
        }
    }
}

#[test]
fn most_rows_verify_numerically() {
    let (report, _) = run();
    assert_eq!(report.rows.len(), 35);
    assert!(report.numeric_passes() >= 28, "{}", report.numeric_passes());
    assert!(report.rows.iter().all(|r| r.status != CheckStatus::Fail));
}

#[test]
fn consistent_rows_agree_across_columns() {
    let (report, errata) = run();
    assert!(errata.iter().all(|e| e.confirmed), "unconfirmed: {errata:#?}");
    let flagged: BTreeSet<String> = errata.iter().map(|e| e.location.clone()).collect();
    for r in &report.rows {
        let loc = format!("row {}", r.row_id);
        let consistent = r.cross_column.iter().all(|(_, ok)| *ok);
        if flagged.contains(&loc) {
            assert_eq!(r.status, CheckStatus::ErrataConfirmed, "{loc}");
        } else {
            assert!(consistent, "{loc}: {:?}", r.cross_column);
        }
        if !consistent {
            assert!(flagged.contains(&loc), "{loc} is inconsistent but has no erratum");
        }
    }
}

#[test]
fn errata_are_reproducible() {
    let (_, first) = run();
    let (_, again) = verify_table(entries(), &DEFAULT_GRID);
    assert_eq!(first, &again);
}
