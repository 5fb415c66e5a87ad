//! Constant-coefficient initial-value problems and sine-mode heat/wave
//! problems, solved by transforming in `t`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::expr::{
    canonicalize, differentiate, evaluate, format, parse_inits, parse_with, AtomSum, Bindings, Expr, ParseOptions, Shape,
    SpecialAtom, Trig, Var,
};
use crate::inverse::{invert_ratfunc, partial_fractions};
use crate::poly::PolyR;
use crate::ratfunc::RatFunc;
use crate::transform::{transform, Abscissa, TransformImage};

/// Highest derivative order accepted in equation text.
const MAX_ORDER: u8 = 12;

/// `Σ a_k v^{(k)}(t) = g(t)` with `v^{(k)}(0)` given for `k < n`.
#[derive(Clone, Debug, PartialEq)]
pub struct IVProblem {
    /// `a_0, ..., a_n`, with `a_n ≠ 0`.
    pub coeffs: Vec<Coeff>,
    pub forcing: AtomSum,
    pub inits: Vec<Coeff>,
}

impl IVProblem {
    pub fn new(coeffs: Vec<Coeff>, forcing: AtomSum, inits: Vec<Coeff>) -> Result<IVProblem> {
        let n = coeffs.len().saturating_sub(1);
        if n == 0 || coeffs[n].is_zero() {
            return Err(Error::InvalidDomain("leading coefficient must be nonzero and order >= 1".into()));
        }
        if inits.len() != n {
            return Err(Error::Arity {
                expected: n,
                got: inits.len(),
            });
        }
        if forcing.specials().any(|(sp, _)| matches!(sp, SpecialAtom::Delta(_))) {
            return Err(Error::InvalidDomain("forcing must be delta-free".into()));
        }
        if forcing.depends_on_x() {
            return Err(Error::InvalidDomain("forcing depends on x".into()));
        }
        Ok(IVProblem { coeffs, forcing, inits })
    }

    /// Parses `"v'' - 3*v' + 2*v = exp(3*t)"` and `"v(0)=1, v'(0)=0"`.
    pub fn parse(equation: &str, inits: &str) -> Result<IVProblem> {
        let (lhs, rhs) = equation.split_once('=').ok_or_else(|| Error::Parse {
            offset: 0,
            msg: "equation lacks '='".into(),
        })?;
        let opts = ParseOptions::ode();
        let lhs = parse_with(lhs, &opts)?;
        let rhs = parse_with(rhs, &opts)?;
        let e = Expr::sum(vec![lhs, Expr::product(vec![Expr::int(-1), rhs])]);
        let mut coeffs = Vec::new();
        let mut rest = e.clone();
        for k in 0..=MAX_ORDER {
            let d = differentiate(&e, Var::Deriv(k))?;
            let c = d.const_value().ok_or_else(|| {
                Error::NonTransformable(format!("equation is not linear with constant coefficients in {}", Var::Deriv(k).name()))
            })?;
            coeffs.push(c);
            rest = rest.substitute(Var::Deriv(k), &Expr::zero());
        }
        while coeffs.len() > 1 && coeffs.last().is_some_and(Coeff::is_zero) {
            coeffs.pop();
        }
        let forcing = canonicalize(&Expr::product(vec![Expr::int(-1), rest]))?;
        let n = coeffs.len() - 1;
        let inits = parse_inits(inits, n)?;
        IVProblem::new(coeffs, forcing, inits)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn characteristic(&self) -> PolyR {
        PolyR::new(self.coeffs.clone())
    }

    /// Initial-value polynomial `Σ_k a_k Σ_{j<k} r^{k-1-j} v^{(j)}(0)`.
    fn init_poly(&self) -> PolyR {
        let mut p = PolyR::zero();
        for (k, a) in self.coeffs.iter().enumerate() {
            for (j, v) in self.inits.iter().enumerate().take(k) {
                p = p.add(&PolyR::monomial(a * v, k - 1 - j));
            }
        }
        p
    }

    /// `Σ a_k d^k/dt^k` of an expression in `t`.
    fn apply(&self, v: &Expr) -> Result<Expr> {
        let mut terms = Vec::new();
        let mut d = v.clone();
        for (k, a) in self.coeffs.iter().enumerate() {
            if k > 0 {
                d = differentiate(&d, Var::T)?;
            }
            terms.push(Expr::product(vec![Expr::from_coeff(a), d.clone()]));
        }
        Ok(Expr::sum(terms))
    }

    pub fn equation_text(&self) -> String {
        let mut lhs = Vec::new();
        for (k, a) in self.coeffs.iter().enumerate().rev() {
            if !a.is_zero() {
                lhs.push(Expr::product(vec![Expr::from_coeff(a), Expr::var(Var::Deriv(k as u8))]));
            }
        }
        format!("{} = {}", format(&Expr::sum(lhs)), format(&self.forcing.to_expr()))
    }
}

/// Sine series `Σ A_k sin(kπx/L)`, keyed by mode number.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SineSeries(pub BTreeMap<u32, Coeff>);

impl SineSeries {
    pub fn zero() -> SineSeries {
        SineSeries::default()
    }

    pub fn mode(k: u32, amp: Coeff) -> SineSeries {
        let mut m = BTreeMap::new();
        if !amp.is_zero() {
            m.insert(k, amp);
        }
        SineSeries(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, k: u32) -> Coeff {
        self.0.get(&k).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn add(&self, o: &SineSeries) -> SineSeries {
        let mut m = self.0.clone();
        for (k, c) in &o.0 {
            let v = m.get(k).cloned().unwrap_or_else(Coeff::zero) + c;
            if v.is_zero() {
                m.remove(k);
            } else {
                m.insert(*k, v);
            }
        }
        SineSeries(m)
    }

    /// Reads a finite sine series in `x` on `[0, L]`.
    pub fn from_expr(e: &Expr, length: &Coeff) -> Result<SineSeries> {
        let atoms = canonicalize(e)?;
        if atoms.has_specials() {
            return Err(Error::NonSineData("special atoms in spatial data".into()));
        }
        let mut m = BTreeMap::new();
        for (t, x, c) in atoms.terms() {
            let bad = || Error::NonSineData(format!("term {} is not c*sin(k*pi*x/L)", format(&x.to_expr(Var::X))));
            if !t.is_one() || x.power != 0 || !x.rate.is_zero() {
                return Err(bad());
            }
            let Trig::Sin(b) = &x.trig else { return Err(bad()) };
            let k = (b * length / Coeff::pi())
                .as_integer()
                .and_then(|k| u32::try_from(k).ok())
                .filter(|k| *k > 0)
                .ok_or_else(bad)?;
            m.insert(k, c.clone());
        }
        Ok(SineSeries(m))
    }

    pub fn parse(text: &str, length: &Coeff) -> Result<SineSeries> {
        SineSeries::from_expr(&parse_with(text, &ParseOptions::time())?, length)
    }

    pub fn to_atoms(&self, length: &Coeff) -> AtomSum {
        let mut out = AtomSum::zero();
        for (k, c) in &self.0 {
            out.add_term(c.clone(), Shape::one(), sine_shape(*k, length));
        }
        out
    }
}

fn wavenumber(k: u32, length: &Coeff) -> Coeff {
    Coeff::from_int(k as i64) * Coeff::pi() / length
}

fn sine_shape(k: u32, length: &Coeff) -> Shape {
    Shape::new(0, Coeff::zero(), Trig::Sin(wavenumber(k, length)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PdeKind {
    /// `v_t = κ v_xx + f(x)`.
    Heat { kappa: Coeff },
    /// `v_tt = c² v_xx + f(x)`.
    Wave { c: Coeff },
}

/// Zero Dirichlet data on `[0, L]`, sine-series initial data and
/// time-independent forcing.
#[derive(Clone, Debug, PartialEq)]
pub struct ModalPDEProblem {
    pub kind: PdeKind,
    pub length: Coeff,
    pub initial: SineSeries,
    /// Initial velocity, wave only.
    pub velocity: SineSeries,
    pub forcing: SineSeries,
}

impl ModalPDEProblem {
    fn validate(&self) -> Result<()> {
        if !self.length.is_positive() {
            return Err(Error::InvalidDomain(format!("length must be positive, got {}", self.length)));
        }
        match &self.kind {
            PdeKind::Heat { kappa } => {
                if !kappa.is_positive() {
                    return Err(Error::InvalidDomain(format!("kappa must be positive, got {kappa}")));
                }
                if !self.velocity.is_zero() {
                    return Err(Error::InvalidDomain("the heat equation takes no initial velocity".into()));
                }
            }
            PdeKind::Wave { c } => {
                if !c.is_positive() {
                    return Err(Error::InvalidDomain(format!("wave speed must be positive, got {c}")));
                }
            }
        }
        Ok(())
    }

    fn modes(&self) -> Vec<u32> {
        let mut ks: Vec<u32> = self.initial.0.keys().chain(self.velocity.0.keys()).chain(self.forcing.0.keys()).copied().collect();
        ks.sort_unstable();
        ks.dedup();
        ks
    }

    /// The modal ODE for `w_k(t)`.
    pub fn modal_problem(&self, k: u32) -> Result<IVProblem> {
        let lam = wavenumber(k, &self.length).square();
        let forcing = AtomSum::constant(self.forcing.get(k));
        match &self.kind {
            PdeKind::Heat { kappa } => IVProblem::new(vec![kappa * &lam, Coeff::one()], forcing, vec![self.initial.get(k)]),
            PdeKind::Wave { c } => IVProblem::new(
                vec![c.square() * lam, Coeff::zero(), Coeff::one()],
                forcing,
                vec![self.initial.get(k), self.velocity.get(k)],
            ),
        }
    }
}

/// A solved problem with the steps that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub expr: Expr,
    pub atoms: AtomSum,
    /// The solved image, for initial-value problems.
    pub image: Option<TransformImage>,
    pub derivation: Vec<String>,
}

impl Solution {
    pub fn to_json(&self, residual_max: f64) -> Value {
        json!({
            "solution": format(&self.expr),
            "residual_max": residual_max,
            "derivation": self.derivation,
        })
    }
}

/// `V = (G + I)/P` in `r = s/u`, inverted by partial fractions.
pub fn solve_ivp(p: &IVProblem) -> Result<Solution> {
    let g = transform(&p.forcing)?;
    if !g.is_rational() {
        return Err(Error::NonTransformable("forcing image is not rational in s/u".into()));
    }
    let chr = p.characteristic();
    let init = p.init_poly();
    let v = g.rational.add(&RatFunc::from_poly(init.clone())).div(&RatFunc::from_poly(chr.clone()));
    let atoms = invert_ratfunc(&v)?;
    let roc = crate::transform::exponential_order(&atoms).order;
    let image = TransformImage::from_rational(v.clone(), roc);
    let shown = |f: RatFunc| TransformImage::from_rational(f, Abscissa::NegInfinity).expanded();
    let mut derivation = vec![
        format!("equation: {}", p.equation_text()),
        format!("forcing image: G = {}", shown(g.rational.clone())),
        format!("characteristic polynomial: P(r) = {}", format(&poly_in_r(&chr))),
        format!("initial-value terms: I(r) = {}", format(&poly_in_r(&init))),
        format!("solved image: V = (G + I)/P = {}", image.expanded()),
        format!("homogenized: {}", image.homogenized()),
    ];
    for t in partial_fractions(&v)? {
        derivation.push(format!("partial fraction: {}", shown(t.to_ratfunc())));
    }
    let expr = atoms.to_expr();
    derivation.push(format!("inverse: v(t) = {}", format(&expr)));
    Ok(Solution {
        expr,
        atoms,
        image: Some(image),
        derivation,
    })
}

fn poly_in_r(p: &PolyR) -> Expr {
    let terms = p
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .map(|(k, c)| Expr::product(vec![Expr::from_coeff(c), Expr::pow(Expr::var(Var::R), k as i64)]))
        .collect();
    Expr::sum(terms)
}

/// Mode-by-mode solution `Σ w_k(t) sin(kπx/L)`.
pub fn solve_pde(p: &ModalPDEProblem) -> Result<Solution> {
    p.validate()?;
    let modes = p.modes();
    let solved: Vec<(u32, IVProblem, Solution)> = modes
        .par_iter()
        .map(|&k| {
            let ivp = p.modal_problem(k)?;
            let sol = solve_ivp(&ivp)?;
            Ok((k, ivp, sol))
        })
        .collect::<Result<_>>()?;
    let mut atoms = AtomSum::zero();
    let mut derivation = vec![format!(
        "{} equation on [0, {}] with zero Dirichlet data; {} active mode(s)",
        match p.kind {
            PdeKind::Heat { .. } => "heat",
            PdeKind::Wave { .. } => "wave",
        },
        p.length,
        modes.len()
    )];
    for (k, ivp, sol) in &solved {
        let x = AtomSum::term(Coeff::one(), Shape::one(), sine_shape(*k, &p.length));
        atoms = atoms.add(&sol.atoms.mul(&x)?);
        derivation.push(format!("mode {k}: {}", ivp.equation_text()));
        if let Some(img) = &sol.image {
            derivation.push(format!("mode {k}: W = {}", img.expanded()));
        }
        derivation.push(format!("mode {k}: w(t) = {}", format(&sol.expr)));
    }
    let expr = atoms.to_expr();
    derivation.push(format!("v(x, t) = {}", format(&expr)));
    Ok(Solution {
        expr,
        atoms,
        image: None,
        derivation,
    })
}

/// Either kind of problem, for [`residual`].
#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    Ivp(IVProblem),
    Pde(ModalPDEProblem),
}

/// Largest defect of `candidate`: equation residual on a sample grid in
/// `(0, 1]` (32 points in `t`, or 16×16 in `(x/L, t)`), together with the
/// initial and boundary mismatches.
pub fn residual(p: &Problem, candidate: &Expr) -> f64 {
    let r = match p {
        Problem::Ivp(q) => ivp_residual(q, candidate),
        Problem::Pde(q) => pde_residual(q, candidate),
    };
    r.unwrap_or(f64::INFINITY)
}

fn max_abs(e: &Expr, pts: impl Iterator<Item = Bindings>) -> Result<f64> {
    let mut m: f64 = 0.0;
    for b in pts {
        let v = evaluate(e, &b)?;
        if !v.is_finite() {
            return Ok(f64::INFINITY);
        }
        m = m.max(v.abs());
    }
    Ok(m)
}

/// `|value at t = 0 - want|`, exactly when possible.
fn initial_defect(e: &Expr, want: &AtomSum, xs: &[f64]) -> Result<f64> {
    let diff = canonicalize(e)?.sub(want);
    if let Ok(at0) = diff.substitute(Var::T, &Coeff::zero()) {
        if at0.is_zero() {
            return Ok(0.0);
        }
    }
    let d = Expr::sum(vec![e.clone(), Expr::product(vec![Expr::int(-1), want.to_expr()])]);
    max_abs(&d, xs.iter().map(|&x| Bindings::xt(x, 0.0)))
}

fn ivp_residual(p: &IVProblem, v: &Expr) -> Result<f64> {
    let lhs = p.apply(v)?;
    let defect = Expr::sum(vec![lhs, Expr::product(vec![Expr::int(-1), p.forcing.to_expr()])]);
    let mut worst = max_abs(&defect, (1..=32).map(|i| Bindings::t(i as f64 / 32.0)))?;
    let mut d = v.clone();
    for (k, want) in p.inits.iter().enumerate() {
        if k > 0 {
            d = differentiate(&d, Var::T)?;
        }
        worst = worst.max(initial_defect(&d, &AtomSum::constant(want.clone()), &[0.0])?);
    }
    Ok(worst)
}

fn pde_residual(p: &ModalPDEProblem, v: &Expr) -> Result<f64> {
    let l = p.length.to_f64();
    let vxx = differentiate(&differentiate(v, Var::X)?, Var::X)?;
    let (vt, speed2) = match &p.kind {
        PdeKind::Heat { kappa } => (differentiate(v, Var::T)?, kappa.clone()),
        PdeKind::Wave { c } => (differentiate(&differentiate(v, Var::T)?, Var::T)?, c.square()),
    };
    let defect = Expr::sum(vec![
        vt,
        Expr::product(vec![Expr::from_coeff(&-speed2), vxx]),
        Expr::product(vec![Expr::int(-1), p.forcing.to_atoms(&p.length).to_expr()]),
    ]);
    let grid = (1..=16).flat_map(|i| (1..=16).map(move |j| Bindings::xt(l * i as f64 / 16.0, j as f64 / 16.0)));
    let mut worst = max_abs(&defect, grid)?;
    let xs: Vec<f64> = (0..=16).map(|i| l * i as f64 / 16.0).collect();
    worst = worst.max(initial_defect(v, &p.initial.to_atoms(&p.length), &xs)?);
    if let PdeKind::Wave { .. } = p.kind {
        let vt = differentiate(v, Var::T)?;
        worst = worst.max(initial_defect(&vt, &p.velocity.to_atoms(&p.length), &xs)?);
    }
    let atoms = canonicalize(v)?;
    for (x, xf) in [(Coeff::zero(), 0.0), (p.length.clone(), l)] {
        let exact = atoms.substitute(Var::X, &x).map(|a| a.is_zero()).unwrap_or(false);
        if !exact {
            worst = worst.max(max_abs(v, (1..=16).map(|j| Bindings::xt(xf, j as f64 / 16.0)))?);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn same(a: &Expr, b: &str) {
        assert_eq!(canonicalize(a).unwrap(), canonicalize(&parse(b).unwrap()).unwrap(), "{}", format(a));
    }

    fn ivp(eq: &str, inits: &str) -> (IVProblem, Solution) {
        let p = IVProblem::parse(eq, inits).unwrap();
        let s = solve_ivp(&p).unwrap();
        (p, s)
    }

    #[test]
    fn ode_examples() {
        let (p, s) = ivp("v' + v = 0", "v(0)=1");
        same(&s.expr, "exp(-t)");
        assert_eq!(residual(&Problem::Ivp(p), &s.expr), 0.0);
        let (_, s) = ivp("v'' + v' = 1", "v(0)=0, v'(0)=0");
        same(&s.expr, "-1 + t + exp(-t)");
        let (_, s) = ivp("v'' - 3*v' + 2*v = exp(3*t)", "v(0)=1, v'(0)=0");
        same(&s.expr, "(5/2)*exp(t) - 2*exp(2*t) + (1/2)*exp(3*t)");
        let (p, s) = ivp("v'' + 2*v' + 5*v = exp(-t)*sin(t)", "v(0)=0, v'(0)=1");
        same(&s.expr, "(1/3)*exp(-t)*sin(t) + (1/3)*exp(-t)*sin(2*t)");
        let p = Problem::Ivp(p);
        assert!(residual(&p, &s.expr) <= 1e-12);
        let printed = parse("(1/3)*exp(-t)*sin(t) + (2/3)*exp(-t)*sin(2*t)").unwrap();
        assert!(residual(&p, &printed) >= 0.1);
    }

    #[test]
    fn image_closes_the_loop() {
        let (_, s) = ivp("v'' - 3*v' + 2*v = exp(3*t)", "v(0)=1, v'(0)=0");
        assert_eq!(transform(&s.atoms).unwrap().rational, s.image.unwrap().rational);
    }

    #[test]
    fn resonance_uses_multiplicity() {
        let (p, s) = ivp("v'' + v = sin(t)", "v(0)=0, v'(0)=0");
        same(&s.expr, "(sin(t) - t*cos(t))/2");
        assert!(residual(&Problem::Ivp(p), &s.expr) < 1e-12);
    }

    #[test]
    fn rejects_nonlinear_equations() {
        assert!(IVProblem::parse("v*v' = 1", "v(0)=1").is_err());
        assert!(IVProblem::parse("v' = t*v", "v(0)=1").is_err());
        assert!(matches!(IVProblem::parse("v'' = 1", "v(0)=1"), Err(Error::Arity { .. })));
    }

    fn one() -> Coeff {
        Coeff::one()
    }

    #[test]
    fn pde_examples() {
        let heat = ModalPDEProblem {
            kind: PdeKind::Heat { kappa: one() },
            length: one(),
            initial: SineSeries::parse("3*sin(2*pi*x)", &one()).unwrap(),
            velocity: SineSeries::zero(),
            forcing: SineSeries::zero(),
        };
        let s = solve_pde(&heat).unwrap();
        same(&s.expr, "3*exp(-4*pi^2*t)*sin(2*pi*x)");
        assert!(residual(&Problem::Pde(heat), &s.expr) < 1e-9);

        let wave = ModalPDEProblem {
            kind: PdeKind::Wave { c: one() },
            length: one(),
            initial: SineSeries::zero(),
            velocity: SineSeries::zero(),
            forcing: SineSeries::parse("sin(pi*x)", &one()).unwrap(),
        };
        let s = solve_pde(&wave).unwrap();
        same(&s.expr, "(1/pi^2)*(1 - cos(pi*t))*sin(pi*x)");
        assert!(residual(&Problem::Pde(wave), &s.expr) < 1e-9);

        let quiet = ModalPDEProblem {
            kind: PdeKind::Heat { kappa: Coeff::from_int(7) },
            length: Coeff::from_int(2),
            initial: SineSeries::zero(),
            velocity: SineSeries::zero(),
            forcing: SineSeries::zero(),
        };
        assert!(solve_pde(&quiet).unwrap().expr.is_zero());
    }

    #[test]
    fn sine_data_only() {
        assert!(matches!(SineSeries::parse("x*(1 - x)", &one()), Err(Error::NonSineData(_))));
        assert!(matches!(SineSeries::parse("sin(x)", &one()), Err(Error::NonSineData(_))));
        let half = SineSeries::parse("sin(pi*x/2)", &Coeff::from_int(2)).unwrap();
        assert_eq!(half.get(1), one());
    }

    #[test]
    fn boundary_defects_are_seen() {
        let heat = ModalPDEProblem {
            kind: PdeKind::Heat { kappa: one() },
            length: one(),
            initial: SineSeries::zero(),
            velocity: SineSeries::zero(),
            forcing: SineSeries::zero(),
        };
        // Solves the equation but not the boundary data.
        assert!(residual(&Problem::Pde(heat), &parse("x").unwrap()) >= 1.0);
    }
}
