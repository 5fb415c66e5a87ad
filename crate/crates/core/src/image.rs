//! Canonical algebra of closed-form images.
//!
//! An image in one of the five conventions is normalised into a finite sum of
//! terms `u^p · R(X) · T(X)`, where `X` is the convention's image variable
//! (`s/u` for Shehu and natural images, `s` for Laplace, `u` for Sumudu, `ω`
//! for Yang), `R` is a reduced rational function and `T` is one of
//! `1, exp(Q), sqrt(P), atan(Q), log(Q)`. Two images are equal iff their
//! normal forms are equal, which makes table cross-checks exact.
//!
//! Square roots assume the radicand's factors are positive on the image
//! domain (large positive `s/u`, small positive `u`).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::coeff::{Coeff, Rational};
use crate::error::{Error, Result};
use crate::expr::{Expr, Func, Var};
use crate::poly::PolyR;
use crate::ratfunc::RatFunc;

/// Image conventions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Shehu,
    Natural,
    Laplace,
    Sumudu,
    Yang,
}

impl Target {
    pub const ALL: [Target; 5] = [Target::Shehu, Target::Natural, Target::Laplace, Target::Sumudu, Target::Yang];

    pub fn name(&self) -> &'static str {
        match self {
            Target::Shehu => "shehu",
            Target::Natural => "natural",
            Target::Laplace => "laplace",
            Target::Sumudu => "sumudu",
            Target::Yang => "yang",
        }
    }

    pub fn from_name(s: &str) -> Option<Target> {
        Target::ALL.into_iter().find(|t| t.name() == s)
    }

    /// Variables an image in this convention may mention.
    pub fn vars(&self) -> Vec<Var> {
        match self {
            Target::Shehu | Target::Natural => vec![Var::S, Var::U],
            Target::Laplace => vec![Var::S],
            Target::Sumudu => vec![Var::U],
            Target::Yang => vec![Var::W],
        }
    }

    fn homogeneous(&self) -> bool {
        matches!(self, Target::Shehu | Target::Natural)
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Transcendental factor of a normal-form term.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Trans {
    One,
    Exp(RatFunc),
    /// Square root of a square-free polynomial radicand.
    Sqrt(PolyR),
    Atan(RatFunc),
    Log(RatFunc),
}

/// Normal form `Σ u^p · R · T`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ImageForm {
    terms: BTreeMap<(i32, Trans), RatFunc>,
}

impl ImageForm {
    pub fn zero() -> ImageForm {
        ImageForm::default()
    }

    pub fn term(p: i32, t: Trans, r: RatFunc) -> ImageForm {
        let mut f = ImageForm::zero();
        f.add_term(p, t, r);
        f
    }

    /// `R(X)` with no `u` factor.
    pub fn rational(r: RatFunc) -> ImageForm {
        ImageForm::term(0, Trans::One, r)
    }

    pub fn constant(c: Coeff) -> ImageForm {
        ImageForm::rational(RatFunc::constant(c))
    }

    pub fn add_term(&mut self, p: i32, t: Trans, r: RatFunc) {
        if r.is_zero() {
            return;
        }
        let key = (p, t);
        let sum = match self.terms.get(&key) {
            Some(old) => old.add(&r),
            None => r,
        };
        if sum.is_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Trans, &RatFunc)> {
        self.terms.iter().map(|((p, t), r)| (*p, t, r))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn single(&self) -> Option<(i32, &Trans, &RatFunc)> {
        (self.terms.len() == 1).then(|| self.terms().next().expect("one term"))
    }

    pub fn add(&self, o: &ImageForm) -> ImageForm {
        let mut out = self.clone();
        for (p, t, r) in o.terms() {
            out.add_term(p, t.clone(), r.clone());
        }
        out
    }

    pub fn neg(&self) -> ImageForm {
        ImageForm {
            terms: self.terms.iter().map(|(k, r)| (k.clone(), r.neg())).collect(),
        }
    }

    pub fn sub(&self, o: &ImageForm) -> ImageForm {
        self.add(&o.neg())
    }

    pub fn scale(&self, r: &RatFunc) -> ImageForm {
        let mut out = ImageForm::zero();
        for (p, t, q) in self.terms() {
            out.add_term(p, t.clone(), q.mul(r));
        }
        out
    }

    /// Multiplies every term by `u^k`.
    pub fn shift_u(&self, k: i32) -> ImageForm {
        ImageForm {
            terms: self.terms.iter().map(|((p, t), r)| ((p + k, t.clone()), r.clone())).collect(),
        }
    }

    pub fn mul(&self, o: &ImageForm) -> Result<ImageForm> {
        let mut out = ImageForm::zero();
        for (p1, t1, r1) in self.terms() {
            for (p2, t2, r2) in o.terms() {
                let (extra, t) = mul_trans(t1, t2)?;
                out.add_term(p1 + p2, t, r1.mul(r2).mul(&extra));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: i64) -> Result<ImageForm> {
        if n == 0 {
            return Ok(ImageForm::constant(Coeff::one()));
        }
        if let Some((p, t, r)) = self.single() {
            let n32 = i32::try_from(n).map_err(|_| Error::NonTransformable("exponent out of range".into()))?;
            let (extra, t) = pow_trans(t, n32)?;
            return Ok(ImageForm::term(p * n32, t, r.pow(n32).mul(&extra)));
        }
        if self.is_zero() {
            if n < 0 {
                return Err(Error::NonTransformable("division by a zero image".into()));
            }
            return Ok(ImageForm::zero());
        }
        if n < 0 {
            return Err(Error::NotHomogeneous(
                "denominator mixes unlike powers of u or transcendental factors".into(),
            ));
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Normal form of an image expression written in `target`'s variables.
    pub fn from_expr(e: &Expr, target: Target) -> Result<ImageForm> {
        Ok(match e {
            Expr::Const(q) => ImageForm::constant(Coeff::from(q.clone())),
            Expr::Pi => ImageForm::constant(Coeff::pi()),
            Expr::Var(v) => {
                let x = RatFunc::var();
                let one = RatFunc::constant(Coeff::one());
                match (target, v) {
                    (Target::Shehu | Target::Natural, Var::S) => ImageForm::term(1, Trans::One, x),
                    (Target::Shehu | Target::Natural, Var::U) => ImageForm::term(1, Trans::One, one),
                    (Target::Laplace, Var::S) | (Target::Sumudu, Var::U) | (Target::Yang, Var::W) => {
                        ImageForm::rational(x)
                    }
                    _ => {
                        return Err(Error::NotHomogeneous(format!(
                            "variable {} does not belong in a {} image",
                            v.name(),
                            target
                        )))
                    }
                }
            }
            Expr::Sum(ts) => {
                let mut acc = ImageForm::zero();
                for t in ts {
                    acc = acc.add(&ImageForm::from_expr(t, target)?);
                }
                acc
            }
            Expr::Product(fs) => {
                let mut acc = ImageForm::constant(Coeff::one());
                for f in fs {
                    acc = acc.mul(&ImageForm::from_expr(f, target)?)?;
                }
                acc
            }
            Expr::Pow(b, n) => ImageForm::from_expr(b, target)?.pow(*n)?,
            Expr::Func(f, a) => {
                let arg = ImageForm::from_expr(a, target)?;
                apply_func(*f, &arg)?
            }
            Expr::Special(sp) => {
                return Err(Error::UnsupportedAtom(format!("{} inside an image", sp.name())));
            }
        })
    }

    /// `f(R(X))` for `f` among exp, sqrt, atan, log.
    pub fn func_of(f: Func, r: &RatFunc) -> Result<ImageForm> {
        apply_func(f, &ImageForm::rational(r.clone()))
    }

    /// Re-expresses a Shehu normal form in another convention.
    pub fn convert(&self, to: Target) -> Result<ImageForm> {
        Ok(match to {
            Target::Shehu => self.clone(),
            Target::Natural => self.shift_u(-1),
            Target::Laplace => {
                let mut out = ImageForm::zero();
                for (_, t, r) in self.terms() {
                    out.add_term(0, t.clone(), r.clone());
                }
                out
            }
            Target::Sumudu | Target::Yang => {
                // s = 1 makes X = 1/u; the remaining u^p becomes X^p.
                let mut out = ImageForm::zero();
                for (p, t, r) in self.terms() {
                    let (extra, t) = reciprocal_trans(t)?;
                    let mut k = p;
                    if to == Target::Sumudu {
                        k -= 1;
                    }
                    let xp = RatFunc::var().pow(k);
                    out.add_term(0, t, r.reciprocal_arg().mul(&extra).mul(&xp));
                }
                out
            }
        })
    }

    /// Closed-form expression in `target`'s variables.
    pub fn to_expr(&self, target: Target) -> Expr {
        let terms = self.terms().map(|(p, t, r)| term_expr(p, t, r, Style::of(target))).collect();
        Expr::sum(terms)
    }

    /// The form written in the homogenized variable `r`.
    pub fn to_expr_r(&self) -> Expr {
        let terms = self.terms().map(|(p, t, r)| term_expr(p, t, r, Style::Plain(Var::R))).collect();
        Expr::sum(terms)
    }
}

fn apply_func(f: Func, arg: &ImageForm) -> Result<ImageForm> {
    let unsupported = || Error::NotHomogeneous(format!("{}(...) of a mixed image argument", f.name()));
    if arg.is_zero() {
        return match f {
            Func::Exp | Func::Cos | Func::Cosh => Ok(ImageForm::constant(Coeff::one())),
            Func::Log => Err(Error::NonTransformable("log(0)".into())),
            _ => Ok(ImageForm::zero()),
        };
    }
    let (p, t, r) = arg.single().ok_or_else(unsupported)?;
    if *t != Trans::One {
        return Err(unsupported());
    }
    match f {
        Func::Sqrt => {
            if p % 2 != 0 {
                return Err(Error::NotHomogeneous("square root of an odd power of u".into()));
            }
            let (coef, t) = sqrt_ratfunc(r);
            Ok(ImageForm::term(p / 2, t, coef))
        }
        Func::Exp | Func::Atan | Func::Log => {
            if p != 0 {
                return Err(Error::NotHomogeneous(format!("{} of an argument carrying u^{p}", f.name())));
            }
            Ok(match f {
                Func::Exp => ImageForm::term(0, Trans::Exp(r.clone()), RatFunc::constant(Coeff::one())),
                Func::Atan => {
                    // atan is odd: keep the numerator's leading coefficient positive.
                    if r.numer().lead().is_negative() {
                        ImageForm::term(0, Trans::Atan(r.neg()), RatFunc::constant(-Coeff::one()))
                    } else {
                        ImageForm::term(0, Trans::Atan(r.clone()), RatFunc::constant(Coeff::one()))
                    }
                }
                _ => {
                    if r.as_constant().is_some_and(|c| c.is_one()) {
                        ImageForm::zero()
                    } else {
                        ImageForm::term(0, Trans::Log(r.clone()), RatFunc::constant(Coeff::one()))
                    }
                }
            })
        }
        _ => Err(Error::UnsupportedAtom(format!("{} inside an image", f.name()))),
    }
}

fn mul_trans(a: &Trans, b: &Trans) -> Result<(RatFunc, Trans)> {
    let one = RatFunc::constant(Coeff::one());
    Ok(match (a, b) {
        (Trans::One, t) | (t, Trans::One) => (one, t.clone()),
        (Trans::Exp(x), Trans::Exp(y)) => {
            let z = x.add(y);
            if z.is_zero() {
                (one, Trans::One)
            } else {
                (one, Trans::Exp(z))
            }
        }
        (Trans::Sqrt(x), Trans::Sqrt(y)) => sqrt_ratfunc(&RatFunc::from_poly(x.mul(y))),
        _ => {
            return Err(Error::NonTransformable(
                "product of two transcendental image factors".into(),
            ))
        }
    })
}

fn pow_trans(t: &Trans, n: i32) -> Result<(RatFunc, Trans)> {
    let one = RatFunc::constant(Coeff::one());
    Ok(match t {
        Trans::One => (one, Trans::One),
        Trans::Exp(x) => (one, Trans::Exp(x.scale(&Coeff::from_int(n as i64)))),
        Trans::Sqrt(p) => {
            let p = RatFunc::from_poly(p.clone());
            if n % 2 == 0 {
                (p.pow(n / 2), Trans::One)
            } else {
                (p.pow(n.div_euclid(2)), t.clone())
            }
        }
        _ if n == 1 => (one, t.clone()),
        _ => {
            return Err(Error::NonTransformable(
                "power of an arctangent or logarithm in an image".into(),
            ))
        }
    })
}

/// `T(1/X) = extra · T'(X)`.
fn reciprocal_trans(t: &Trans) -> Result<(RatFunc, Trans)> {
    let one = RatFunc::constant(Coeff::one());
    Ok(match t {
        Trans::One => (one, Trans::One),
        Trans::Exp(q) => (one, Trans::Exp(q.reciprocal_arg())),
        Trans::Atan(q) => {
            let f = apply_func(Func::Atan, &ImageForm::rational(q.reciprocal_arg()))?;
            let (_, t, r) = f.single().expect("atan of a nonzero argument");
            (r.clone(), t.clone())
        }
        Trans::Log(q) => {
            let q = q.reciprocal_arg();
            (one, Trans::Log(q))
        }
        Trans::Sqrt(p) => sqrt_ratfunc(&RatFunc::from_poly(p.clone()).reciprocal_arg()),
    })
}

/// `sqrt(R) = coef · T` with a monic square-free radicand (up to a
/// square-free constant).
fn sqrt_ratfunc(r: &RatFunc) -> (RatFunc, Trans) {
    if r.is_zero() {
        return (RatFunc::zero(), Trans::One);
    }
    // sqrt(N/D) = sqrt(N·D)/D
    let q = r.numer().mul(r.denom());
    let mut coef = RatFunc::from_poly(r.denom().clone()).recip();
    let lead = q.lead();
    let mut radicand = PolyR::one();
    for (i, f) in q.squarefree() {
        coef = coef.mul(&RatFunc::from_poly(f.pow(i / 2)));
        if i % 2 == 1 {
            radicand = radicand.mul(&f);
        }
    }
    let (k, free) = split_square(&lead);
    coef = coef.scale(&k);
    let radicand = radicand.scale(&free);
    if radicand.is_one() {
        (coef, Trans::One)
    } else {
        (coef, Trans::Sqrt(radicand))
    }
}

/// `c = k²·f` with `k > 0` and `f` as small as exact arithmetic allows.
fn split_square(c: &Coeff) -> (Coeff, Coeff) {
    if let Some(k) = c.sqrt() {
        return (k, Coeff::one());
    }
    let sign = if c.is_negative() { -Coeff::one() } else { Coeff::one() };
    let a = c.abs();
    if let Some(k) = a.sqrt() {
        return (k, sign);
    }
    if let Some(q) = a.as_rational() {
        // q = n/d = n·d / d²
        let nd = q.numer() * q.denom();
        let (k, f) = integer_square_split(&nd);
        let k = Coeff::from(Rational::new(k, q.denom().clone()));
        return (k, sign * Coeff::from(Rational::from_integer(f)));
    }
    (Coeff::one(), c.clone())
}

/// `n = k²·f` by trial division; a large unfactored cofactor stays in `f`.
fn integer_square_split(n: &BigInt) -> (BigInt, BigInt) {
    let mut k = BigInt::one();
    let mut f = BigInt::one();
    let mut m = n.abs();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &p * &p <= m && p < limit {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            f *= &p;
        }
        p += if p == BigInt::from(2) { BigInt::one() } else { BigInt::from(2) };
    }
    if m.sqrt().pow(2) == m {
        k *= m.sqrt();
    } else {
        f *= m;
    }
    (k, f)
}

#[derive(Clone, Copy)]
enum Style {
    /// `X = s/u`, rendered homogeneously in `s, u`.
    Homogeneous,
    /// `X` is the given variable; `u^p` stays explicit.
    Plain(Var),
}

impl Style {
    fn of(t: Target) -> Style {
        match t {
            _ if t.homogeneous() => Style::Homogeneous,
            Target::Laplace => Style::Plain(Var::S),
            Target::Sumudu => Style::Plain(Var::U),
            _ => Style::Plain(Var::W),
        }
    }
}

/// `P(X)` as an expression plus the power of `u` it leaves behind.
fn poly_expr(p: &PolyR, style: Style) -> (Expr, i32) {
    let d = p.deg();
    let mut terms = Vec::new();
    match style {
        Style::Homogeneous => {
            for k in (0..=d).rev() {
                let c = p.coeff(k);
                if c.is_zero() {
                    continue;
                }
                terms.push(Expr::product(vec![
                    Expr::from_coeff(&c),
                    Expr::pow(Expr::var(Var::S), k as i64),
                    Expr::pow(Expr::var(Var::U), (d - k) as i64),
                ]));
            }
            (Expr::sum(terms), -(d as i32))
        }
        Style::Plain(v) => {
            // Sumudu and Yang images read naturally in ascending order.
            let ks: Vec<usize> = if v == Var::S || v == Var::R {
                (0..=d).rev().collect()
            } else {
                (0..=d).collect()
            };
            for k in ks {
                let c = p.coeff(k);
                if c.is_zero() {
                    continue;
                }
                terms.push(Expr::product(vec![Expr::from_coeff(&c), Expr::pow(Expr::var(v), k as i64)]));
            }
            (Expr::sum(terms), 0)
        }
    }
}

/// Pulls an exact leading coefficient out of `P` when the remaining
/// coefficients become integers, e.g. `(1/2)r - 1/2 = (1/2)(r - 1)`.
fn content_split(p: &PolyR) -> (Coeff, PolyR) {
    let lead = p.lead();
    if p.coeffs().len() < 2 || lead.is_one() {
        return (Coeff::one(), p.clone());
    }
    let q = p.scale(&lead.recip());
    if q.coeffs().iter().all(|c| c.as_integer().is_some()) {
        (lead, q)
    } else {
        (Coeff::one(), p.clone())
    }
}

fn ratfunc_expr(r: &RatFunc, style: Style) -> (Expr, i32) {
    let ascending = matches!(style, Style::Plain(v) if v != Var::S && v != Var::R);
    let mut num = r.numer().clone();
    let mut dens = Vec::new();
    for (f, m) in display_factors(r.denom()) {
        // Small-variable conventions read best as `1 - a*u` rather than `u - 1/a`.
        let f0 = f.coeff(0);
        if ascending && !f0.is_zero() && !f0.is_one() {
            num = num.scale(&f0.pow(-(m as i32)));
            dens.push((f.scale(&f0.recip()), m));
        } else {
            dens.push((f, m));
        }
    }
    let (c, n) = content_split(&num);
    let (ne, nu) = poly_expr(&n, style);
    let mut factors = vec![Expr::from_coeff(&c), ne];
    let mut upow = nu;
    for (f, m) in dens {
        let (fe, fu) = poly_expr(&f, style);
        factors.push(Expr::pow(fe, -(m as i64)));
        upow -= fu * m as i32;
    }
    (Expr::product(factors), upow)
}

/// Denominator factors for display: rational linear factors split out,
/// the rest square-free.
fn display_factors(d: &PolyR) -> Vec<(PolyR, u32)> {
    if d.deg() == 0 {
        return Vec::new();
    }
    match crate::inverse::factor_denominator(d) {
        Ok(fs) => fs.into_iter().map(|f| (f.poly(), f.multiplicity)).collect(),
        Err(_) => d.squarefree().into_iter().map(|(i, f)| (f, i)).collect(),
    }
}

fn u_factor(k: i32) -> Expr {
    Expr::pow(Expr::var(Var::U), k as i64)
}

fn term_expr(p: i32, t: &Trans, r: &RatFunc, style: Style) -> Expr {
    let mut upow = p;
    let mut r = r.clone();
    let trans = match t {
        Trans::One => None,
        Trans::Exp(q) | Trans::Atan(q) | Trans::Log(q) => {
            let (qe, qu) = ratfunc_expr(q, style);
            let arg = Expr::product(vec![qe, u_factor(qu)]);
            let f = match t {
                Trans::Exp(_) => Func::Exp,
                Trans::Atan(_) => Func::Atan,
                _ => Func::Log,
            };
            Some(Expr::func(f, arg))
        }
        Trans::Sqrt(rad) => {
            let (pe, pu) = poly_expr(rad, style);
            // sqrt(P(s/u)) = sqrt(P_h · u^{odd}) · u^{(pu - odd)/2}
            let odd = pu.rem_euclid(2);
            let radicand = Expr::product(vec![pe, u_factor(odd)]);
            let root = Expr::func(Func::Sqrt, radicand);
            // Prefer R·P/sqrt(P) when P cancels against R's denominator.
            let over = r.mul(&RatFunc::from_poly(rad.clone()));
            if over.denom().deg() < r.denom().deg() {
                r = over;
                upow -= (pu - odd) / 2;
                Some(Expr::pow(root, -1))
            } else {
                upow += (pu - odd) / 2;
                Some(root)
            }
        }
    };
    let (re, ru) = ratfunc_expr(&r, style);
    upow += ru;
    let mut factors = vec![u_factor(upow), re];
    factors.extend(trans);
    Expr::product(factors)
}

impl fmt::Display for ImageForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::expr::format(&self.to_expr(Target::Shehu)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{format, parse_with, ParseOptions};

    fn form(s: &str, t: Target) -> Result<ImageForm> {
        let mut o = ParseOptions::image().with_param("a", Expr::int(2));
        o.time_domain = false;
        ImageForm::from_expr(&parse_with(s, &o).unwrap(), t)
    }

    fn show(f: &ImageForm, t: Target) -> String {
        format(&f.to_expr(t))
    }

    #[test]
    fn homogeneous_images_normalise() {
        let a = form("u/(s - 3*u)", Target::Shehu).unwrap();
        let b = form("1/(s/u - 3)", Target::Shehu).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 1);
        assert_eq!(show(&a, Target::Shehu), "u/(s - 3*u)");
        assert_eq!(show(&a.convert(Target::Natural).unwrap(), Target::Natural), "1/(s - 3*u)");
        assert_eq!(show(&a.convert(Target::Laplace).unwrap(), Target::Laplace), "1/(s - 3)");
        assert_eq!(show(&a.convert(Target::Sumudu).unwrap(), Target::Sumudu), "1/(1 - 3*u)");
        let one = form("u/s", Target::Shehu).unwrap();
        assert_eq!(show(&one.convert(Target::Yang).unwrap(), Target::Yang), "w");
    }

    #[test]
    fn mixed_u_powers_are_rejected_in_denominators() {
        assert!(matches!(form("1/(s + 1)", Target::Shehu), Err(Error::NotHomogeneous(_))));
        assert!(matches!(form("u", Target::Laplace), Err(Error::NotHomogeneous(_))));
    }

    #[test]
    fn radicals_are_canonical() {
        // Shehu J0 image and its Sumudu conversion.
        let j = form("u/sqrt(s^2 + a^2*u^2)", Target::Shehu).unwrap();
        let j2 = form("1/sqrt((s/u)^2 + 4)", Target::Shehu).unwrap();
        assert_eq!(j, j2);
        assert_eq!(show(&j, Target::Shehu), "u/sqrt(s^2 + 4*u^2)");
        let sj = j.convert(Target::Sumudu).unwrap();
        assert_eq!(sj, form("1/sqrt(1 + 4*u^2)", Target::Sumudu).unwrap());
        assert_eq!(form("sqrt(4*s^2 + 4)", Target::Laplace).unwrap(), form("2*sqrt(s^2 + 1)", Target::Laplace).unwrap());
        assert_eq!(form("sqrt(8)", Target::Laplace).unwrap(), form("2*sqrt(2)", Target::Laplace).unwrap());
    }

    #[test]
    fn log_and_atan_forms() {
        let si = form("(u/s)*atan(a*u/s)", Target::Shehu).unwrap();
        let su = si.convert(Target::Sumudu).unwrap();
        assert_eq!(su, form("atan(u*sqrt(a^2))", Target::Sumudu).unwrap());
        assert_eq!(form("atan(-2/s)", Target::Laplace).unwrap(), form("-atan(2/s)", Target::Laplace).unwrap());
        let ci = form("-(u/(2*s))*log((s^2 + a^2*u^2)/(a^2*u^2))", Target::Shehu).unwrap();
        assert_eq!(ci.len(), 1);
        // A log whose argument is not homogeneous of degree 0.
        assert!(form("log((s^2 + a^2)/a^2)", Target::Shehu).is_err());
        assert!(form("log(1)", Target::Laplace).unwrap().is_zero());
    }

    #[test]
    fn exponentials() {
        let d = form("exp(-2*s/u)", Target::Shehu).unwrap();
        assert_eq!(show(&d, Target::Shehu), "exp(-2*s/u)");
        assert_eq!(show(&d.convert(Target::Sumudu).unwrap(), Target::Sumudu), "exp(-2/u)/u");
        assert_eq!(form("exp(s)*exp(-s)", Target::Laplace).unwrap(), ImageForm::constant(Coeff::one()));
    }

    #[test]
    fn square_splitting() {
        let (k, f) = integer_square_split(&BigInt::from(72));
        assert_eq!((k, f), (BigInt::from(6), BigInt::from(2)));
        let (k, f) = split_square(&Coeff::from_ratio(-9, 8));
        assert_eq!(k, Coeff::from_ratio(3, 4));
        assert_eq!(f, Coeff::from_int(-2));
    }
}
