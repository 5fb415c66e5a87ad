//! Independent numerical oracle: forward images by quadrature of the defining
//! integral, inverse images by fixed-Talbot contour sums, and pair checks.
//!
//! Nothing here consults the symbolic transform rules; the only shared piece
//! is the exponential order, which bounds the quadrature tail.

pub mod quadrature;
pub mod talbot;

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::coeff::q_to_f64;
use crate::error::{Error, Result};
use crate::expr::{canonicalize, evaluate, AtomSum, Bindings, Expr, SpecialAtom, Var};
use crate::inverse::normalize_image;
use crate::ratfunc::RatFunc;
use crate::transform::{exponential_order, Abscissa, TransformImage};

pub use talbot::{talbot, TalbotSpec};

/// Relative tolerance for forward and round-trip pair checks.
pub const PAIR_TOL: f64 = 1e-6;
/// Times at which rational images are inverted numerically.
pub const ROUND_TRIP_TIMES: [f64; 3] = [0.5, 1.0, 2.0];
/// The default `(s, u)` grid.
pub const DEFAULT_GRID: [(f64, f64); 4] = [(2.0, 1.0), (3.0, 2.0), (5.0, 1.0), (4.0, 3.0)];
/// Forward comparisons are relative to `max(|image|, FORWARD_FLOOR)`, so
/// at exact zeros of the image the tolerance becomes an absolute `1e-15`,
/// the quadrature's own noise level, instead of a division by zero.
pub const FORWARD_FLOOR: f64 = 1e-9;
/// Mollifier widths for the delta, finest last.
pub const DELTA_WIDTHS: [f64; 2] = [1e-2, 1e-3];

/// Everything a pair check is judged by.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairSpec {
    /// Relative tolerance of forward and round-trip comparisons.
    pub tol: f64,
    pub quadrature: QuadratureSpec,
    /// Node count and agreement of the round trip; the shift is set per image.
    pub talbot: TalbotSpec,
}

impl Default for PairSpec {
    fn default() -> Self {
        PairSpec {
            tol: PAIR_TOL,
            quadrature: QuadratureSpec::default(),
            talbot: TalbotSpec::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    /// Hard cap on the truncation point.
    pub max_t: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-10,
            max_t: 8192.0,
        }
    }
}

/// `∫₀^∞ e^{-rt} f(t) dt` for `|f(t)| ≤ N e^{(order+ε)t}`.
///
/// Integrates unit panels on `[0, T]`, doubling `T` until the tail bound
/// `N e^{-(δ/2)T}/(δ/2)`, `δ = r - order`, falls below `rel_tol·|I|`.
/// `N` is estimated by sampling `|f(t)| e^{-(order+δ/2)t}`.
pub fn laplace_quadrature(f: &dyn Fn(f64) -> f64, order: f64, r: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(r > order) {
        return Err(Error::RocViolation { r, order });
    }
    let half = 0.5 * (r - order).min(64.0);
    let probe = (64.0 / half).min(spec.max_t);
    let samples = 4096;
    let mut n_est: f64 = 0.0;
    for k in 0..=samples {
        let t = probe * k as f64 / samples as f64;
        n_est = n_est.max(f(t).abs() * (-(order + half) * t).exp());
    }
    if !n_est.is_finite() {
        return Err(Error::ConvergenceFailure("integrand is not finite on the probe interval".into()));
    }
    let n_est = 2.0 * n_est.max(f64::MIN_POSITIVE);
    let g = |t: f64| {
        let v = f(t);
        if v == 0.0 {
            0.0
        } else {
            v * (-r * t).exp()
        }
    };
    let abs_tol = 1e-17 * n_est;
    let (mut total, mut mass, mut a) = (0.0, 0.0, 0.0);
    let mut end = (16.0 / half).clamp(1.0, spec.max_t);
    loop {
        while a < end {
            let b = (a + 1.0).min(end);
            let (k, _) = quadrature::adaptive(&g, a, b, spec.rel_tol * 1e-2, abs_tol);
            mass += quadrature::gk15(&|t| g(t).abs(), a, b).0;
            total += k;
            a = b;
        }
        if !total.is_finite() {
            return Err(Error::ConvergenceFailure("quadrature overflowed".into()));
        }
        let bound = n_est * (-half * end).exp() / half;
        if bound <= spec.rel_tol * total.abs() || bound <= 1e-15 * mass {
            return Ok(total);
        }
        if end >= spec.max_t {
            return Err(Error::ConvergenceFailure(format!(
                "tail bound {bound:e} still above tolerance at T = {end}"
            )));
        }
        end = (2.0 * end).min(spec.max_t);
    }
}

/// `∫ e^{-rt} φ_w(t - a) dt` with a Gaussian `φ_w`; the kernel is integrated
/// over its whole support, which realises the `0⁻` convention at `a = 0`.
fn gaussian_moment(a: f64, w: f64, r: f64) -> f64 {
    let norm = 1.0 / (w * (2.0 * std::f64::consts::PI).sqrt());
    let g = |t: f64| {
        let z = (t - a) / w;
        norm * (-0.5 * z * z - r * t).exp()
    };
    let (lo, hi) = (a - 12.0 * w, a + 12.0 * w);
    let pieces = 24;
    let h = (hi - lo) / pieces as f64;
    (0..pieces)
        .map(|k| quadrature::adaptive(&g, lo + k as f64 * h, lo + (k + 1) as f64 * h, 1e-14, 0.0).0)
        .sum()
}

/// Mollified `∫ e^{-rt} δ(t - a) dt`: Gaussian widths `1e-2, 1e-3`, with
/// Richardson extrapolation of the `O(w²)` error.
pub fn mollified_delta(a: f64, r: f64) -> f64 {
    let [w1, w2] = DELTA_WIDTHS;
    let (i1, i2) = (gaussian_moment(a, w1, r), gaussian_moment(a, w2, r));
    let q = (w1 / w2).powi(2);
    (q * i2 - i1) / (q - 1.0)
}

/// Numeric `V(s, u) = ∫₀^∞ e^{-st/u} v(t) dt`.
pub fn numeric_forward(v: &AtomSum, s: f64, u: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::InvalidDomain(format!("u must be positive, got {u}")));
    }
    if v.depends_on_x() {
        return Err(Error::InvalidDomain("time function depends on x".into()));
    }
    let r = s / u;
    let order = exponential_order(v).order;
    if !order.admits(r) {
        return Err(Error::RocViolation { r, order: order.to_f64() });
    }
    let mut regular = AtomSum::zero();
    let mut deltas = 0.0;
    for (t, x, c) in v.terms() {
        regular.add_term(c.clone(), t.clone(), x.clone());
    }
    for (sp, c) in v.specials() {
        match sp {
            SpecialAtom::Delta(a) => deltas += c.to_f64() * mollified_delta(q_to_f64(a), r),
            other if other.symbolic_only() => return Err(Error::SymbolicOnly(other.name().into())),
            other => regular.add_special(c.clone(), other.clone()),
        }
    }
    if regular.is_zero() {
        return Ok(deltas);
    }
    let reg_order = exponential_order(&regular).order.to_f64();
    let f = |t: f64| regular.eval(t, 0.0).unwrap_or(f64::NAN);
    Ok(laplace_quadrature(&f, reg_order, r, spec)? + deltas)
}

/// [`numeric_forward`] for an expression in `t`.
pub fn numeric_forward_expr(v: &Expr, s: f64, u: f64, spec: &QuadratureSpec) -> Result<f64> {
    numeric_forward(&canonicalize(v)?, s, u, spec)
}

/// Inverse of an image `V(s, u)` given over complex `s`, at time `t`.
///
/// The Talbot sum runs on `F(r) = V(r·u, u)`.
pub fn numeric_invert(v: &dyn Fn(Complex64, f64) -> Complex64, t: f64, u: f64, spec: &TalbotSpec) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::InvalidDomain(format!("u must be positive, got {u}")));
    }
    talbot(&|r| v(r * u, u), t, spec)
}

/// Numeric inverse of a rational image in `r`.
pub fn numeric_invert_ratfunc(f: &RatFunc, abscissa: f64, t: f64) -> Result<f64> {
    talbot_ratfunc(f, abscissa, t, &TalbotSpec::default())
}

fn talbot_ratfunc(f: &RatFunc, abscissa: f64, t: f64, spec: &TalbotSpec) -> Result<f64> {
    let spec = TalbotSpec { shift: abscissa, ..*spec };
    talbot(&|r| f.eval_complex(r), t, &spec)
}

/// Numeric inverse of an engine image (rational and delta-free only).
pub fn numeric_invert_image(img: &TransformImage, t: f64) -> Result<f64> {
    if !img.is_rational() {
        return Err(Error::UnsupportedAtom("numeric inversion needs a rational image".into()));
    }
    let shift = match &img.roc {
        Abscissa::NegInfinity => 0.0,
        Abscissa::Finite(c) => c.to_f64(),
    };
    numeric_invert_ratfunc(&img.rational, shift, t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
    ErrataConfirmed,
}

impl CheckStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
            CheckStatus::ErrataConfirmed => "errata-confirmed",
        }
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CheckPoint {
    Forward { s: f64, u: f64 },
    RoundTrip { t: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckEntry {
    pub point: CheckPoint,
    pub status: CheckStatus,
    pub expected: Option<f64>,
    pub actual: Option<f64>,
    pub rel_err: Option<f64>,
    pub note: String,
}

impl CheckEntry {
    fn skipped(point: CheckPoint, note: impl Into<String>) -> CheckEntry {
        CheckEntry {
            point,
            status: CheckStatus::Skipped,
            expected: None,
            actual: None,
            rel_err: None,
            note: note.into(),
        }
    }

    fn failed(point: CheckPoint, note: impl Into<String>) -> CheckEntry {
        CheckEntry {
            status: CheckStatus::Fail,
            ..CheckEntry::skipped(point, note)
        }
    }

    fn compared(point: CheckPoint, expected: f64, actual: f64, scale: f64, tol: f64) -> CheckEntry {
        let err = (actual - expected).abs();
        let rel = if err == 0.0 { 0.0 } else { err / scale };
        let status = if rel <= tol { CheckStatus::Pass } else { CheckStatus::Fail };
        CheckEntry {
            point,
            status,
            expected: Some(expected),
            actual: Some(actual),
            rel_err: Some(rel),
            note: String::new(),
        }
    }

    pub fn to_json(&self) -> Value {
        let point = match self.point {
            CheckPoint::Forward { s, u } => json!({"check": "forward", "s": s, "u": u}),
            CheckPoint::RoundTrip { t } => json!({"check": "talbot", "t": t}),
        };
        json!({
            "point": point,
            "status": self.status.as_str(),
            "expected": self.expected,
            "actual": self.actual,
            "rel_err": self.rel_err,
            "note": self.note,
        })
    }
}

/// Per-point results of one pair check.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VerificationReport {
    pub entries: Vec<CheckEntry>,
}

impl VerificationReport {
    /// `fail` if any point fails, `pass` if any passes, else `skipped`.
    pub fn verdict(&self) -> CheckStatus {
        if self.entries.iter().any(|e| e.status == CheckStatus::Fail) {
            CheckStatus::Fail
        } else if self.entries.iter().any(|e| e.status == CheckStatus::Pass) {
            CheckStatus::Pass
        } else {
            CheckStatus::Skipped
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict() == CheckStatus::Pass
    }

    pub fn count(&self, status: CheckStatus) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    /// Statuses of the forward checks, in grid order.
    pub fn forward_statuses(&self) -> Vec<CheckStatus> {
        self.entries
            .iter()
            .filter(|e| matches!(e.point, CheckPoint::Forward { .. }))
            .map(|e| e.status)
            .collect()
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} pass, {} fail, {} skipped",
            self.verdict(),
            self.count(CheckStatus::Pass),
            self.count(CheckStatus::Fail),
            self.count(CheckStatus::Skipped)
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict().as_str(),
            "entries": self.entries.iter().map(CheckEntry::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Compares `v` against an image given as an expression in `s, u`.
pub fn verify_pair(v: &Expr, image: &Expr, grid: &[(f64, f64)]) -> VerificationReport {
    verify_pair_with(v, image, grid, &PairSpec::default())
}

pub fn verify_pair_with(v: &Expr, image: &Expr, grid: &[(f64, f64)], spec: &PairSpec) -> VerificationReport {
    let eval = |s: f64, u: f64| evaluate(image, &Bindings::new().with(Var::S, s).with(Var::U, u));
    let rational = normalize_image(image).ok().filter(|f| f.u_power == 0).map(|f| f.f);
    verify_with(v, &eval, rational.as_ref(), grid, spec)
}

/// Compares `v` against an engine image.
pub fn verify_image(v: &Expr, image: &TransformImage, grid: &[(f64, f64)]) -> VerificationReport {
    verify_image_with(v, image, grid, &PairSpec::default())
}

pub fn verify_image_with(v: &Expr, image: &TransformImage, grid: &[(f64, f64)], spec: &PairSpec) -> VerificationReport {
    let eval = |s: f64, u: f64| Ok(image.eval(s, u));
    let rational = image.is_rational().then(|| image.rational.clone());
    verify_with(v, &eval, rational.as_ref(), grid, spec)
}

fn verify_with(
    v: &Expr,
    image: &(dyn Fn(f64, f64) -> Result<f64> + Sync),
    rational: Option<&RatFunc>,
    grid: &[(f64, f64)],
    pair: &PairSpec,
) -> VerificationReport {
    let atoms = match canonicalize(v) {
        Ok(a) => a,
        Err(e) => {
            let entry = CheckEntry::failed(CheckPoint::Forward { s: f64::NAN, u: f64::NAN }, e.to_string());
            return VerificationReport { entries: vec![entry] };
        }
    };
    let order = exponential_order(&atoms).order;
    let symbolic_only = atoms.specials().any(|(sp, _)| sp.symbolic_only());
    // I0 tails are only tractable a unit past the abscissa.
    let i0_margin = atoms
        .specials()
        .filter_map(|(sp, _)| match sp {
            SpecialAtom::BesselI0(a) => Some(a.to_f64() + 1.0),
            _ => None,
        })
        .fold(f64::NEG_INFINITY, f64::max);
    let spec = pair.quadrature;
    let mut entries: Vec<CheckEntry> = grid
        .par_iter()
        .map(|&(s, u)| {
            let point = CheckPoint::Forward { s, u };
            let r = s / u;
            if symbolic_only {
                return CheckEntry::skipped(point, "symbolic-only atom");
            }
            if !order.admits(r) {
                return CheckEntry::skipped(point, format!("s/u = {r} outside the region of convergence"));
            }
            if r < i0_margin {
                return CheckEntry::skipped(point, "I0 tail needs s/u - alpha >= 1");
            }
            let expected = match image(s, u) {
                Ok(x) if x.is_finite() => x,
                Ok(x) => return CheckEntry::failed(point, format!("image evaluates to {x}")),
                Err(e) => return CheckEntry::failed(point, e.to_string()),
            };
            match numeric_forward(&atoms, s, u, &spec) {
                Ok(actual) => CheckEntry::compared(point, expected, actual, expected.abs().max(FORWARD_FLOOR), pair.tol),
                Err(e) => CheckEntry::skipped(point, e.to_string()),
            }
        })
        .collect();
    if let Some(f) = rational {
        entries.extend(round_trip(&atoms, f, &order, pair));
    }
    VerificationReport { entries }
}

fn round_trip(atoms: &AtomSum, f: &RatFunc, order: &Abscissa, pair: &PairSpec) -> Vec<CheckEntry> {
    let exact: Vec<Result<f64>> = ROUND_TRIP_TIMES.iter().map(|&t| atoms.eval(t, 0.0)).collect();
    // Relative to the largest sampled magnitude, so zeros of v are not
    // judged on roundoff alone.
    let scale = exact
        .iter()
        .filter_map(|x| x.as_ref().ok())
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let shift = match order {
        Abscissa::NegInfinity => 0.0,
        Abscissa::Finite(c) => c.to_f64(),
    };
    ROUND_TRIP_TIMES
        .iter()
        .zip(exact)
        .map(|(&t, x)| {
            let point = CheckPoint::RoundTrip { t };
            let x = match x {
                Ok(x) => x,
                Err(e) => return CheckEntry::skipped(point, e.to_string()),
            };
            match talbot_ratfunc(f, shift, t, &pair.talbot) {
                Ok(y) => CheckEntry::compared(point, x, y, x.abs().max(scale), pair.tol),
                Err(e) => CheckEntry::failed(point, e.to_string()),
            }
        })
        .collect()
}
