//! The golden transform table: fixture loading, exact cross-column checks
//! and oracle adjudication of every printed form that disagrees with the
//! rule-derived image.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::expr::{evaluate, format, parse, parse_with, Bindings, Expr, ParseOptions, Var};
use crate::image::{ImageForm, Target};
use crate::oracle::{verify_image_with, verify_pair_with, CheckPoint, CheckStatus, PairSpec, VerificationReport};
use crate::solvers::{residual, solve_ivp, IVProblem, Problem};
use crate::transform::{change_of_scale, derivative_image, transform_expr, Abscissa, TransformImage};

/// Environment variable that overrides the bundled fixture.
pub const TABLE_PATH_ENV: &str = "SHEHU_TABLE_PATH";

const BUNDLED: &str = include_str!("../../fixtures/table1.json");

/// Printed columns in fixture order.
pub const COLUMNS: [Target; 4] = [Target::Shehu, Target::Natural, Target::Sumudu, Target::Laplace];

/// Parameter values used for counting, and the probe used to expose
/// parameter omissions that vanish at α = 1.
pub const PRIMARY: (i64, i64) = (1, 2);
pub const PROBE: (i64, i64) = (2, 3);
pub const N_VALUES: [u32; 4] = [0, 1, 2, 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerificationMode {
    Numeric,
    SymbolicOnly,
}

/// One fixture row as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRow {
    pub row_id: i64,
    pub time_expr: String,
    pub shehu: String,
    pub natural: String,
    pub sumudu: String,
    pub laplace: String,
    pub printed_form_suspect: bool,
    pub verification_mode: VerificationMode,
}

impl TableRow {
    pub fn column(&self, t: Target) -> &str {
        match t {
            Target::Shehu => &self.shehu,
            Target::Natural => &self.natural,
            Target::Sumudu => &self.sumudu,
            Target::Laplace => &self.laplace,
            Target::Yang => "",
        }
    }

    fn texts(&self) -> [&str; 5] {
        [&self.time_expr, &self.shehu, &self.natural, &self.sumudu, &self.laplace]
    }

    fn uses(&self, name: &str) -> bool {
        self.texts()
            .iter()
            .any(|s| s.split(|c: char| !c.is_ascii_alphanumeric()).any(|w| w == name))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Params {
    pub a: i64,
    pub b: i64,
    pub n: u32,
}

impl Params {
    fn apply(&self, opts: ParseOptions) -> ParseOptions {
        opts.with_param("a", Expr::int(self.a))
            .with_param("b", Expr::int(self.b))
            .with_param("n", Expr::int(self.n as i64))
    }
}

/// A row instantiated at concrete parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    pub params: Params,
    /// `false` for the parameters that count toward the numeric tally.
    pub probe: bool,
    pub time: Expr,
    /// Printed columns, in [`COLUMNS`] order.
    pub printed: Vec<(Target, Expr)>,
}

impl Instance {
    pub fn describe(&self, row: &TableRow) -> String {
        let mut parts = Vec::new();
        if row.uses("a") {
            parts.push(format!("a={}", self.params.a));
        }
        if row.uses("b") {
            parts.push(format!("b={}", self.params.b));
        }
        if row.uses("n") {
            parts.push(format!("n={}", self.params.n));
        }
        parts.join(", ")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableEntry {
    pub row: TableRow,
    pub instances: Vec<Instance>,
}

impl TableEntry {
    pub fn row_id(&self) -> i64 {
        self.row.row_id
    }

    pub fn primary(&self) -> impl Iterator<Item = &Instance> {
        self.instances.iter().filter(|i| !i.probe)
    }
}

fn schema(row: i64, msg: impl Into<String>) -> Error {
    Error::Schema { row, msg: msg.into() }
}

fn instantiate(row: &TableRow) -> Result<Vec<Instance>> {
    let uses_n = row.uses("n");
    let uses_ab = row.uses("a") || row.uses("b");
    let mut params: Vec<(Params, bool)> = if uses_n {
        N_VALUES.iter().map(|&n| (Params { a: PRIMARY.0, b: PRIMARY.1, n }, false)).collect()
    } else {
        vec![(Params { a: PRIMARY.0, b: PRIMARY.1, n: 0 }, false)]
    };
    if uses_ab {
        params.push((Params { a: PROBE.0, b: PROBE.1, n: 2 }, true));
    }
    params
        .into_iter()
        .map(|(p, probe)| {
            let bad = |what: &str, e: Error| schema(row.row_id, format!("{what} does not parse: {e}"));
            let time = parse_with(&row.time_expr, &p.apply(ParseOptions::time())).map_err(|e| bad("time_expr", e))?;
            let printed = COLUMNS
                .iter()
                .map(|&c| {
                    parse_with(row.column(c), &p.apply(ParseOptions::image()))
                        .map(|e| (c, e))
                        .map_err(|e| bad(c.name(), e))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Instance {
                params: p,
                probe,
                time,
                printed,
            })
        })
        .collect()
}

/// Parses and validates fixture JSON.
pub fn load_table_str(text: &str) -> Result<Vec<TableEntry>> {
    let raw: Value = serde_json::from_str(text).map_err(|e| schema(0, format!("invalid JSON: {e}")))?;
    let Value::Array(items) = raw else {
        return Err(schema(0, "fixture must be a JSON array"));
    };
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(items.len());
    for (idx, item) in items.into_iter().enumerate() {
        let id = item.get("row_id").and_then(Value::as_i64).unwrap_or(idx as i64 + 1);
        let row: TableRow = serde_json::from_value(item).map_err(|e| schema(id, e.to_string()))?;
        if !(1..=35).contains(&row.row_id) {
            return Err(schema(row.row_id, "row_id must lie in 1..=35"));
        }
        if !seen.insert(row.row_id) {
            return Err(schema(row.row_id, "duplicate row_id"));
        }
        let instances = instantiate(&row)?;
        let symbolic = instances[0].time.contains_special()
            && crate::expr::canonicalize(&instances[0].time)
                .map(|a| a.specials().any(|(sp, _)| sp.symbolic_only()))
                .unwrap_or(false);
        if symbolic != (row.verification_mode == VerificationMode::SymbolicOnly) {
            return Err(schema(
                row.row_id,
                "verification_mode must be symbolic-only exactly for Si/Ci/Ei rows",
            ));
        }
        out.push(TableEntry { row, instances });
    }
    out.sort_by_key(TableEntry::row_id);
    Ok(out)
}

/// Loads the fixture from `path`, else from `$SHEHU_TABLE_PATH`, else the
/// bundled copy.
pub fn load_table(path: Option<&Path>) -> Result<Vec<TableEntry>> {
    let from_env = std::env::var_os(TABLE_PATH_ENV).map(std::path::PathBuf::from);
    match path.map(Path::to_path_buf).or(from_env) {
        Some(p) => {
            let text = std::fs::read_to_string(&p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
            load_table_str(&text)
        }
        None => load_table_str(BUNDLED),
    }
}

/// The bundled fixture text.
pub fn bundled_fixture() -> &'static str {
    BUNDLED
}

/// A printed form that disagrees with the rule-derived one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Erratum {
    /// `row N` or a named property.
    pub location: String,
    pub column: Option<String>,
    /// Parameter values at which the conflict was observed.
    pub params: String,
    pub printed: String,
    pub derived: String,
    pub adjudication: String,
    pub confirmed: bool,
}

impl Erratum {
    pub fn key(&self) -> String {
        match &self.column {
            Some(c) => format!("{} {c}", self.location),
            None => self.location.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("erratum serializes")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RowReport {
    pub row_id: i64,
    pub status: CheckStatus,
    /// Rule-derived Shehu image at the first primary instance.
    pub derived: String,
    /// Oracle check of the rule-derived image, primary instances.
    pub numeric: VerificationReport,
    /// Oracle check of the printed Shehu column, primary instances.
    pub printed: VerificationReport,
    /// Whether each printed column agrees exactly with the printed Shehu one.
    pub cross_column: Vec<(Target, bool)>,
    pub details: String,
}

impl RowReport {
    pub fn to_json(&self) -> Value {
        let cross: serde_json::Map<String, Value> =
            self.cross_column.iter().map(|(t, ok)| (t.name().to_string(), json!(ok))).collect();
        json!({
            "row": self.row_id,
            "status": self.status.as_str(),
            "details": {
                "summary": self.details,
                "derived": self.derived,
                "derived_check": self.numeric.summary(),
                "printed_check": self.printed.summary(),
                "cross_column_consistent": cross,
            }
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TableReport {
    pub rows: Vec<RowReport>,
}

impl TableReport {
    /// Rows whose rule-derived image passes the oracle.
    pub fn numeric_passes(&self) -> usize {
        self.rows.iter().filter(|r| r.numeric.passed()).count()
    }

    pub fn to_json(&self, errata: &[Erratum]) -> Value {
        json!({
            "rows": self.rows.iter().map(RowReport::to_json).collect::<Vec<_>>(),
            "errata": errata.iter().map(Erratum::to_json).collect::<Vec<_>>(),
            "numeric_passes": self.numeric_passes(),
        })
    }
}

/// The image the printed column claims, rewritten as a Shehu image in `s, u`.
pub fn implied_shehu(target: Target, e: &Expr) -> Expr {
    let s = Expr::var(Var::S);
    let u = Expr::var(Var::U);
    match target {
        Target::Shehu => e.clone(),
        Target::Natural => Expr::product(vec![u, e.clone()]),
        Target::Laplace => e.substitute(Var::S, &Expr::product(vec![s, Expr::pow(u, -1)])),
        Target::Sumudu => {
            let ratio = Expr::product(vec![u, Expr::pow(s, -1)]);
            Expr::product(vec![ratio.clone(), e.substitute(Var::U, &ratio)])
        }
        Target::Yang => e.substitute(Var::W, &Expr::product(vec![u, Expr::pow(s, -1)])),
    }
}

/// `grid` plus points safely inside the region of convergence at
/// `u ∈ {1, 2, 3}`, so u-power typos surface.
fn adjudication_grid(grid: &[(f64, f64)], roc: &Abscissa) -> Vec<(f64, f64)> {
    let base = match roc {
        Abscissa::NegInfinity => 0.0,
        Abscissa::Finite(c) => c.to_f64().max(0.0),
    } + 2.0;
    let mut g = grid.to_vec();
    g.extend([1.0, 2.0, 3.0].map(|u| (base * u, u)));
    g
}

fn exact_match(printed: &Expr, target: Target, derived: &ImageForm) -> bool {
    match (ImageForm::from_expr(printed, target), derived.convert(target)) {
        (Ok(p), Ok(d)) => p == d,
        _ => false,
    }
}

fn first_failure(rep: &VerificationReport) -> String {
    rep.entries
        .iter()
        .find(|e| e.status == CheckStatus::Fail)
        .map(|e| {
            let at = match e.point {
                CheckPoint::Forward { s, u } => format!("(s,u)=({s},{u})"),
                CheckPoint::RoundTrip { t } => format!("Talbot t={t}"),
            };
            match (e.expected, e.actual, e.rel_err) {
                (Some(x), Some(y), Some(r)) => format!("fails at {at}: image {x:.9}, quadrature {y:.9}, rel err {r:.2e}"),
                _ => format!("fails at {at}: {}", e.note),
            }
        })
        .unwrap_or_else(|| "no failing point".into())
}

/// Numeric adjudication: the derived image must pass and the printed one fail.
fn adjudicate_numeric(
    time: &Expr,
    printed: &Expr,
    derived: &TransformImage,
    grid: &[(f64, f64)],
    spec: &PairSpec,
) -> (bool, String) {
    let d = verify_image_with(time, derived, grid, spec);
    let p = verify_pair_with(time, printed, grid, spec);
    let confirmed = d.passed() && p.verdict() == CheckStatus::Fail;
    let text = format!(
        "oracle: derived {} ({} points pass); printed {}",
        d.verdict(),
        d.count(CheckStatus::Pass),
        if p.verdict() == CheckStatus::Fail { first_failure(&p) } else { p.summary() }
    );
    (confirmed, text)
}

/// Symbolic-only rows: the printed form must be a real function of `s/u`
/// with the derived values wherever the derived image converges.
fn adjudicate_structural(printed: &Expr, derived: &TransformImage, grid: &[(f64, f64)]) -> (bool, String) {
    let at = |s: f64, u: f64| evaluate(printed, &Bindings::new().with(Var::S, s).with(Var::U, u));
    for &(s, u) in grid {
        if !derived.roc.admits(s / u) {
            continue;
        }
        let want = derived.eval(s, u);
        let got = match at(s, u) {
            Ok(x) if x.is_finite() => x,
            Ok(_) | Err(_) => {
                return (true, format!("structural: printed form is not real at (s,u)=({s},{u}) inside the ROC"));
            }
        };
        if let Ok(g2) = at(2.0 * s, 2.0 * u) {
            if (g2 - got).abs() > 1e-9 * got.abs().max(1e-300) {
                return (
                    true,
                    format!("structural: printed form is not a function of s/u (changes from {got:.9} to {g2:.9} under (s,u)->(2s,2u))"),
                );
            }
        }
        if (got - want).abs() > 1e-6 * want.abs() {
            return (
                true,
                format!("structural: printed value {got:.9} differs from derived {want:.9} at (s,u)=({s},{u})"),
            );
        }
    }
    (false, "structural: no defect found on the grid".into())
}

struct RowOutcome {
    report: RowReport,
    errata: Vec<Erratum>,
}

fn verify_row(entry: &TableEntry, grid: &[(f64, f64)], spec: &PairSpec) -> Result<RowOutcome> {
    let row = &entry.row;
    let symbolic = row.verification_mode == VerificationMode::SymbolicOnly;
    let derived: Vec<TransformImage> = entry
        .instances
        .iter()
        .map(|i| transform_expr(&i.time))
        .collect::<Result<_>>()?;

    let mut numeric = VerificationReport::default();
    let mut printed = VerificationReport::default();
    for (inst, img) in entry.instances.iter().zip(&derived).filter(|(i, _)| !i.probe) {
        numeric.entries.extend(verify_image_with(&inst.time, img, grid, spec).entries);
        printed.entries.extend(verify_pair_with(&inst.time, &inst.printed[0].1, grid, spec).entries);
    }

    let mut cross = Vec::new();
    for (ci, &col) in COLUMNS.iter().enumerate() {
        let ok = entry.instances.iter().all(|inst| match ImageForm::from_expr(&inst.printed[0].1, Target::Shehu) {
            Ok(p) => exact_match(&inst.printed[ci].1, col, &p),
            Err(_) => false,
        });
        cross.push((col, ok));
    }

    let mut errata = Vec::new();
    for (ci, &col) in COLUMNS.iter().enumerate() {
        let hit = entry
            .instances
            .iter()
            .zip(&derived)
            .find(|(inst, img)| !exact_match(&inst.printed[ci].1, col, &img.form()));
        let Some((inst, img)) = hit else { continue };
        let claimed = implied_shehu(col, &inst.printed[ci].1);
        let adj_grid = adjudication_grid(grid, &img.roc);
        let (confirmed, adjudication) = if symbolic {
            adjudicate_structural(&claimed, img, &adj_grid)
        } else {
            adjudicate_numeric(&inst.time, &claimed, img, &adj_grid, spec)
        };
        let derived_text = img.convert(col).map(|e| format(&e)).unwrap_or_else(|e| e.to_string());
        errata.push(Erratum {
            location: format!("row {}", row.row_id),
            column: Some(col.name().to_string()),
            params: inst.describe(row),
            printed: row.column(col).to_string(),
            derived: derived_text,
            adjudication,
            confirmed,
        });
    }

    let status = if !errata.is_empty() {
        if errata.iter().all(|e| e.confirmed) {
            CheckStatus::ErrataConfirmed
        } else {
            CheckStatus::Fail
        }
    } else if symbolic {
        CheckStatus::Skipped
    } else {
        numeric.verdict()
    };
    let details = if errata.is_empty() {
        format!("all columns match the derived image; derived {}", numeric.summary())
    } else {
        let cols: Vec<String> = errata.iter().filter_map(|e| e.column.clone()).collect();
        format!("printed {} disagree with the derived image; derived {}", cols.join(", "), numeric.summary())
    };
    Ok(RowOutcome {
        report: RowReport {
            row_id: row.row_id,
            status,
            derived: derived[0].expanded(),
            numeric,
            printed,
            cross_column: cross,
            details,
        },
        errata,
    })
}

/// Checks every row, then the property-level statements.
pub fn verify_table(entries: &[TableEntry], grid: &[(f64, f64)]) -> (TableReport, Vec<Erratum>) {
    verify_table_with(entries, grid, &PairSpec::default())
}

pub fn verify_table_with(entries: &[TableEntry], grid: &[(f64, f64)], spec: &PairSpec) -> (TableReport, Vec<Erratum>) {
    let outcomes: Vec<std::result::Result<RowOutcome, (i64, Error)>> = entries
        .par_iter()
        .map(|e| verify_row(e, grid, spec).map_err(|err| (e.row_id(), err)))
        .collect();
    let mut report = TableReport::default();
    let mut errata = Vec::new();
    for o in outcomes {
        match o {
            Ok(o) => {
                report.rows.push(o.report);
                errata.extend(o.errata);
            }
            Err((row_id, err)) => report.rows.push(RowReport {
                row_id,
                status: CheckStatus::Fail,
                derived: String::new(),
                numeric: VerificationReport::default(),
                printed: VerificationReport::default(),
                cross_column: Vec::new(),
                details: format!("engine error: {err}"),
            }),
        }
    }
    errata.extend(property_errata(grid, spec));
    (report, errata)
}

/// Errata of the bundled table that concern `v`: rows whose instantiated
/// time function canonicalizes to the same atoms.
pub fn errata_for(v: &Expr) -> Vec<Erratum> {
    static TABLE: std::sync::OnceLock<Vec<TableEntry>> = std::sync::OnceLock::new();
    let Ok(atoms) = crate::expr::canonicalize(v) else { return Vec::new() };
    let table = TABLE.get_or_init(|| load_table_str(BUNDLED).expect("bundled fixture is valid"));
    let mut out = Vec::new();
    for entry in table {
        let Some(inst) = entry
            .instances
            .iter()
            .find(|i| crate::expr::canonicalize(&i.time).is_ok_and(|a| a == atoms))
        else {
            continue;
        };
        let label = inst.describe(&entry.row);
        let single = TableEntry {
            row: entry.row.clone(),
            instances: vec![inst.clone()],
        };
        if let Ok(o) = verify_row(&single, &crate::oracle::DEFAULT_GRID, &PairSpec::default()) {
            out.extend(o.errata.into_iter().filter(|e| e.params == label));
        }
    }
    out
}

fn image(text: &str) -> Expr {
    parse_with(text, &ParseOptions::image()).expect("built-in image parses")
}

fn time(text: &str) -> Expr {
    parse(text).expect("built-in time function parses")
}

/// Property statements whose printed form conflicts with the derivation,
/// each instantiated at α = 1, β = 2 and adjudicated by the oracle.
pub fn property_errata(grid: &[(f64, f64)], spec: &PairSpec) -> Vec<Erratum> {
    let mut out = Vec::new();
    let mut pair = |location: &str, params: &str, printed: &str, v: &str, printed_image: &str, derived: TransformImage| {
        let v = time(v);
        let g = adjudication_grid(grid, &derived.roc);
        let (confirmed, adjudication) = adjudicate_numeric(&v, &image(printed_image), &derived, &g, spec);
        out.push(Erratum {
            location: location.into(),
            column: None,
            params: params.into(),
            printed: printed.into(),
            derived: derived.expanded(),
            adjudication,
            confirmed,
        });
    };

    // v(βt) with v = sin, β = 2.
    let sin = transform_expr(&time("sin(t)")).expect("sin transforms");
    let scaled = change_of_scale(&sin, &Coeff::from_int(2)).expect("positive scale");
    pair(
        "change-of-scale",
        "v=sin(t), beta=2",
        "S[v(beta*t)] = (u/beta)*V(s/beta, u)",
        "sin(2*t)",
        "(u/2)*u^2/((s/2)^2 + u^2)",
        scaled,
    );

    let ec = transform_expr(&time("exp(2*t)*cos(t)")).expect("atom transforms");
    pair(
        "exp-cos-shift",
        "a=1, b=2",
        "S[exp(b*t)*cos(a*t)] = u*(s - a*u)/((s - b*u)^2 + a^2*u^2)",
        "exp(2*t)*cos(t)",
        "u*(s - u)/((s - 2*u)^2 + u^2)",
        ec,
    );

    let ed = transform_expr(&time("exp(t)/(2 - 1)")).expect("atom transforms");
    pair(
        "exp-difference",
        "a=1, b=2",
        "S[exp(a*t)/(b - a)] = u^2/((s - a*u)*(s - b*u))",
        "exp(t)/(2 - 1)",
        "u^2/((s - u)*(s - 2*u))",
        ed,
    );

    // First-derivative term of the damped-oscillator example, on v = e^{-t}.
    let e = transform_expr(&time("exp(-t)")).expect("atom transforms");
    let dv = derivative_image(1, &e, &[Coeff::one()]).expect("first derivative");
    pair(
        "example-4-derivative-term",
        "v=exp(-t)",
        "S[v'(t)] = (s/u)*V(s,u) - (s/u)*v(0)",
        "-exp(-t)",
        "(s/u)*u/(s + u) - s/u",
        dv,
    );

    // Printed solution of the damped oscillator; judged by the residual.
    let p = IVProblem::parse("v'' + 2*v' + 5*v = exp(-t)*sin(t)", "v(0)=0, v'(0)=1").expect("built-in problem");
    let sol = solve_ivp(&p).expect("example solves");
    let printed = "(1/3)*exp(-t)*sin(t) + (2/3)*exp(-t)*sin(2*t)";
    let problem = Problem::Ivp(p);
    let r_printed = residual(&problem, &time(printed));
    let r_derived = residual(&problem, &sol.expr);
    out.push(Erratum {
        location: "example-4-coefficient".into(),
        column: None,
        params: "v'' + 2v' + 5v = exp(-t)sin(t), v(0)=0, v'(0)=1".into(),
        printed: printed.into(),
        derived: format(&sol.expr),
        adjudication: format!("residual oracle: derived {r_derived:.2e}, printed {r_printed:.6}"),
        confirmed: r_derived <= 1e-9 && r_printed >= 0.1,
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::DEFAULT_GRID;

    #[test]
    fn loads_the_bundled_fixture() {
        let t = load_table_str(bundled_fixture()).unwrap();
        assert_eq!(t.len(), 35);
        let r3 = &t[2].row;
        assert_eq!((r3.time_expr.as_str(), r3.shehu.as_str(), r3.laplace.as_str()), ("exp(a*t)", "u/(s - a*u)", "1/(s - a)"));
        assert_eq!(t[6].primary().count(), 4);
        assert!(t.iter().all(|e| (e.row.verification_mode == VerificationMode::SymbolicOnly) == (22..=24).contains(&e.row_id())));
    }

    #[test]
    fn malformed_rows_are_schema_errors() {
        let bad = r#"[{"row_id": 3, "time_expr": "exp(a*t)", "shehu": "u/(s - a*u"}]"#;
        assert!(matches!(load_table_str(bad), Err(Error::Schema { row: 3, .. })));
        let bad = r#"[{"row_id": 4, "time_expr": "exp(a*t)", "shehu": "u/(s - a*u", "natural": "1", "sumudu": "1", "laplace": "1", "printed_form_suspect": false, "verification_mode": "numeric"}]"#;
        assert!(matches!(load_table_str(bad), Err(Error::Schema { row: 4, .. })));
        assert!(matches!(load_table_str("{}"), Err(Error::Schema { .. })));
    }

    #[test]
    fn implied_images() {
        let e = image("1/(s - 1)");
        let v = evaluate(&implied_shehu(Target::Laplace, &e), &Bindings::new().with(Var::S, 3.0).with(Var::U, 1.0)).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
        let su = image("1/(1 - u)");
        let v = evaluate(&implied_shehu(Target::Sumudu, &su), &Bindings::new().with(Var::S, 6.0).with(Var::U, 2.0)).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn single_rows() {
        let t = load_table_str(bundled_fixture()).unwrap();
        let row = |id: usize| verify_row(&t[id - 1], &DEFAULT_GRID, &PairSpec::default()).unwrap();
        let r4 = row(4);
        assert_eq!(r4.report.status, CheckStatus::Pass);
        assert!(r4.errata.is_empty());
        assert!(r4.report.cross_column.iter().all(|(_, ok)| *ok));
        let r34 = row(34);
        assert_eq!(r34.report.status, CheckStatus::ErrataConfirmed);
        assert_eq!(r34.errata.len(), 1);
        assert_eq!(r34.errata[0].derived, "exp(-s/u)");
        assert!(r34.errata[0].confirmed, "{}", r34.errata[0].adjudication);
        let hits = errata_for(&time("delta(t - 1)"));
        assert_eq!(hits.iter().map(Erratum::key).collect::<Vec<_>>(), ["row 34 shehu"]);
        assert!(errata_for(&time("exp(3*t)")).is_empty());
    }
}
