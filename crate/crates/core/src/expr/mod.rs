//! Exact expression trees over `t` (and optionally `x`), plus the image
//! variables `s`, `u`, `w` used when parsing closed-form images.

mod atoms;
mod diff;
mod eval;
mod format;
mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::coeff::{int, Coeff, PiPoly, Rational};

pub use atoms::{canonicalize, Atom, AtomSum, Shape, Trig};
pub use diff::differentiate;
pub use eval::{equivalent, evaluate, Bindings};
pub use parse::{parse, parse_inits, parse_with, ParseOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T,
    X,
    S,
    U,
    /// The Yang transform variable (ω).
    W,
    /// The homogenized image variable `s/u`.
    R,
    /// `v^(k)` inside an ODE left-hand side.
    Deriv(u8),
}

impl Var {
    pub fn name(&self) -> String {
        match self {
            Var::T => "t".into(),
            Var::X => "x".into(),
            Var::S => "s".into(),
            Var::U => "u".into(),
            Var::W => "w".into(),
            Var::R => "r".into(),
            Var::Deriv(k) => format!("v{}", "'".repeat(*k as usize)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
    Atan,
    Log,
}

impl Func {
    pub fn name(&self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sqrt => "sqrt",
            Func::Atan => "atan",
            Func::Log => "log",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "exp" => Func::Exp,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "sqrt" => Func::Sqrt,
            "atan" | "arctan" => Func::Atan,
            "log" | "ln" => Func::Log,
            _ => return None,
        })
    }
}

/// Opaque special functions of `t`. Rates are strictly positive.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpecialAtom {
    /// `δ(t - a)` with `a >= 0`.
    Delta(Rational),
    BesselJ0(Coeff),
    BesselI0(Coeff),
    SinIntegral(Coeff),
    CosIntegral(Coeff),
    ExpIntegral(Coeff),
}

impl SpecialAtom {
    pub fn name(&self) -> &'static str {
        match self {
            SpecialAtom::Delta(_) => "delta",
            SpecialAtom::BesselJ0(_) => "J0",
            SpecialAtom::BesselI0(_) => "I0",
            SpecialAtom::SinIntegral(_) => "Si",
            SpecialAtom::CosIntegral(_) => "Ci",
            SpecialAtom::ExpIntegral(_) => "Ei",
        }
    }

    /// Rate α of `f(αt)`; `None` for the delta.
    pub fn rate(&self) -> Option<&Coeff> {
        match self {
            SpecialAtom::Delta(_) => None,
            SpecialAtom::BesselJ0(a)
            | SpecialAtom::BesselI0(a)
            | SpecialAtom::SinIntegral(a)
            | SpecialAtom::CosIntegral(a)
            | SpecialAtom::ExpIntegral(a) => Some(a),
        }
    }

    /// Same kind with the rate replaced (no-op for the delta).
    pub fn with_rate(&self, rate: Coeff) -> SpecialAtom {
        match self {
            SpecialAtom::Delta(a) => SpecialAtom::Delta(a.clone()),
            SpecialAtom::BesselJ0(_) => SpecialAtom::BesselJ0(rate),
            SpecialAtom::BesselI0(_) => SpecialAtom::BesselI0(rate),
            SpecialAtom::SinIntegral(_) => SpecialAtom::SinIntegral(rate),
            SpecialAtom::CosIntegral(_) => SpecialAtom::CosIntegral(rate),
            SpecialAtom::ExpIntegral(_) => SpecialAtom::ExpIntegral(rate),
        }
    }

    /// Si, Ci and Ei have no pointwise evaluator.
    pub fn symbolic_only(&self) -> bool {
        matches!(
            self,
            SpecialAtom::SinIntegral(_) | SpecialAtom::CosIntegral(_) | SpecialAtom::ExpIntegral(_)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Const(Rational),
    Pi,
    Var(Var),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Pow(Box<Expr>, i64),
    Func(Func, Box<Expr>),
    Special(SpecialAtom),
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::Const(Rational::zero())
    }

    pub fn one() -> Expr {
        Expr::Const(Rational::one())
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(int(n))
    }

    pub fn rational(q: Rational) -> Expr {
        Expr::Const(q)
    }

    pub fn var(v: Var) -> Expr {
        Expr::Var(v)
    }

    pub fn t() -> Expr {
        Expr::Var(Var::T)
    }

    pub fn x() -> Expr {
        Expr::Var(Var::X)
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self {
            Expr::Const(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(|q| q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.as_const().is_some_and(|q| q.is_one())
    }

    /// Flattening, constant-folding sum.
    pub fn sum(terms: Vec<Expr>) -> Expr {
        let mut out: Vec<Expr> = Vec::with_capacity(terms.len());
        let mut konst: Option<(usize, Rational)> = None;
        let mut push = |e: Expr, out: &mut Vec<Expr>| match e {
            Expr::Const(q) => match &mut konst {
                Some((_, acc)) => *acc += q,
                None => {
                    konst = Some((out.len(), q));
                    out.push(Expr::zero());
                }
            },
            other => out.push(other),
        };
        for t in terms {
            match t {
                Expr::Sum(inner) => {
                    for e in inner {
                        push(e, &mut out);
                    }
                }
                e => push(e, &mut out),
            }
        }
        if let Some((pos, q)) = konst {
            if q.is_zero() {
                out.remove(pos);
            } else {
                out[pos] = Expr::Const(q);
            }
        }
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => Expr::Sum(out),
        }
    }

    /// Flattening product: one leading constant, equal bases merged.
    pub fn product(factors: Vec<Expr>) -> Expr {
        let mut konst = Rational::one();
        let mut bases: Vec<(Expr, i64)> = Vec::new();
        fn collect(e: Expr, konst: &mut Rational, bases: &mut Vec<(Expr, i64)>) {
            match e {
                Expr::Const(q) => *konst *= q,
                Expr::Product(inner) => {
                    for f in inner {
                        collect(f, konst, bases);
                    }
                }
                other => {
                    let (b, n) = match other {
                        Expr::Pow(b, n) => (*b, n),
                        o => (o, 1),
                    };
                    if let Some(slot) = bases.iter_mut().find(|(x, _)| *x == b) {
                        slot.1 += n;
                    } else {
                        bases.push((b, n));
                    }
                }
            }
        }
        for f in factors {
            collect(f, &mut konst, &mut bases);
        }
        if konst.is_zero() {
            return Expr::zero();
        }
        let mut out = Vec::with_capacity(bases.len() + 1);
        if !konst.is_one() {
            out.push(Expr::Const(konst));
        }
        // Numerator factors first, then denominators, each in first-seen order.
        bases.sort_by_key(|(_, n)| *n < 0);
        for (b, n) in bases {
            match n {
                0 => {}
                1 => out.push(b),
                _ => out.push(Expr::Pow(Box::new(b), n)),
            }
        }
        match out.len() {
            0 => Expr::one(),
            1 => out.pop().unwrap(),
            _ => Expr::Product(out),
        }
    }

    /// Integer power. Panics on `0^n` with `n < 0`.
    pub fn pow(base: Expr, n: i64) -> Expr {
        if n == 0 {
            return Expr::one();
        }
        if n == 1 {
            return base;
        }
        match base {
            Expr::Const(q) => {
                assert!(!(q.is_zero() && n < 0), "zero to a negative power");
                let e = i32::try_from(n).expect("exponent fits in i32");
                Expr::Const(num_traits::Pow::pow(q, e))
            }
            Expr::Pow(b, m) => Expr::pow(*b, m * n),
            Expr::Product(fs) => Expr::product(fs.into_iter().map(|f| Expr::pow(f, n)).collect()),
            b => Expr::Pow(Box::new(b), n),
        }
    }

    pub fn func(f: Func, arg: Expr) -> Expr {
        Expr::Func(f, Box::new(arg))
    }

    pub fn exp(arg: Expr) -> Expr {
        Expr::func(Func::Exp, arg)
    }

    pub fn sin(arg: Expr) -> Expr {
        Expr::func(Func::Sin, arg)
    }

    pub fn cos(arg: Expr) -> Expr {
        Expr::func(Func::Cos, arg)
    }

    pub fn from_coeff(c: &Coeff) -> Expr {
        if let Some((q, k)) = c.as_monomial() {
            return Expr::product(vec![Expr::Const(q), Expr::pow(Expr::Pi, k as i64)]);
        }
        Expr::product(vec![pi_poly_expr(c.numer()), Expr::pow(pi_poly_expr(c.denom()), -1)])
    }

    /// Replaces every occurrence of `var` by `value`.
    pub fn substitute(&self, var: Var, value: &Expr) -> Expr {
        match self {
            Expr::Var(v) if *v == var => value.clone(),
            Expr::Const(_) | Expr::Pi | Expr::Var(_) | Expr::Special(_) => self.clone(),
            Expr::Sum(ts) => Expr::sum(ts.iter().map(|e| e.substitute(var, value)).collect()),
            Expr::Product(fs) => Expr::product(fs.iter().map(|e| e.substitute(var, value)).collect()),
            Expr::Pow(b, n) => {
                let b = b.substitute(var, value);
                if b.is_zero() && *n < 0 {
                    // Leave the singular power unsimplified rather than panic.
                    return Expr::Pow(Box::new(b), *n);
                }
                Expr::pow(b, *n)
            }
            Expr::Func(f, a) => Expr::func(*f, a.substitute(var, value)),
        }
    }

    /// Whether `var` occurs anywhere in the tree.
    pub fn contains(&self, var: Var) -> bool {
        match self {
            Expr::Var(v) => *v == var,
            Expr::Const(_) | Expr::Pi => false,
            Expr::Special(_) => var == Var::T,
            Expr::Sum(xs) | Expr::Product(xs) => xs.iter().any(|e| e.contains(var)),
            Expr::Pow(b, _) => b.contains(var),
            Expr::Func(_, a) => a.contains(var),
        }
    }

    pub fn contains_special(&self) -> bool {
        match self {
            Expr::Special(_) => true,
            Expr::Sum(xs) | Expr::Product(xs) => xs.iter().any(Expr::contains_special),
            Expr::Pow(b, _) => b.contains_special(),
            Expr::Func(_, a) => a.contains_special(),
            _ => false,
        }
    }

    /// Exact value of a variable-free expression in `Q(π)`, when it has one.
    pub fn const_value(&self) -> Option<Coeff> {
        let lf = linear_form(self)?;
        lf.terms.is_empty().then_some(lf.constant)
    }
}

fn pi_poly_expr(p: &PiPoly) -> Expr {
    let terms = p
        .coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| Expr::product(vec![Expr::Const(c.clone()), Expr::pow(Expr::Pi, k as i64)]))
        .collect();
    Expr::sum(terms)
}

impl Coeff {
    pub fn to_expr(&self) -> Expr {
        Expr::from_coeff(self)
    }
}

/// `Σ c_v·v + constant` with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub terms: BTreeMap<Var, Coeff>,
    pub constant: Coeff,
}

impl LinearForm {
    fn constant(c: Coeff) -> LinearForm {
        LinearForm {
            terms: BTreeMap::new(),
            constant: c,
        }
    }

    fn add(mut self, other: LinearForm) -> LinearForm {
        for (v, c) in other.terms {
            let slot = self.terms.entry(v).or_insert_with(Coeff::zero);
            *slot = &*slot + &c;
        }
        self.terms.retain(|_, c| !c.is_zero());
        self.constant = &self.constant + &other.constant;
        self
    }

    fn scale(mut self, k: &Coeff) -> LinearForm {
        for c in self.terms.values_mut() {
            *c = &*c * k;
        }
        self.terms.retain(|_, c| !c.is_zero());
        self.constant = &self.constant * k;
        self
    }

    pub fn coeff(&self, v: Var) -> Coeff {
        self.terms.get(&v).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Affine decomposition of `e`, or `None` if it is not affine in its
/// variables or involves a non-algebraic constant.
pub fn linear_form(e: &Expr) -> Option<LinearForm> {
    match e {
        Expr::Const(q) => Some(LinearForm::constant(Coeff::from(q.clone()))),
        Expr::Pi => Some(LinearForm::constant(Coeff::pi())),
        Expr::Var(v) => {
            let mut terms = BTreeMap::new();
            terms.insert(*v, Coeff::one());
            Some(LinearForm {
                terms,
                constant: Coeff::zero(),
            })
        }
        Expr::Sum(ts) => ts
            .iter()
            .try_fold(LinearForm::constant(Coeff::zero()), |acc, t| Some(acc.add(linear_form(t)?))),
        Expr::Product(fs) => {
            let mut acc = LinearForm::constant(Coeff::one());
            for f in fs {
                let lf = linear_form(f)?;
                acc = if lf.is_constant() {
                    acc.scale(&lf.constant)
                } else if acc.is_constant() {
                    lf.scale(&acc.constant)
                } else {
                    return None;
                };
            }
            Some(acc)
        }
        Expr::Pow(b, n) => {
            let lf = linear_form(b)?;
            if lf.is_constant() {
                if lf.constant.is_zero() && *n < 0 {
                    return None;
                }
                Some(LinearForm::constant(lf.constant.pow(i32::try_from(*n).ok()?)))
            } else if *n == 1 {
                Some(lf)
            } else {
                None
            }
        }
        Expr::Func(f, a) => {
            // Exact values only at a zero argument.
            let lf = linear_form(a)?;
            if !lf.is_constant() || !lf.constant.is_zero() {
                return None;
            }
            let v = match f {
                Func::Exp | Func::Cos | Func::Cosh => Coeff::one(),
                Func::Sin | Func::Sinh | Func::Sqrt | Func::Atan => Coeff::zero(),
                Func::Log => return None,
            };
            Some(LinearForm::constant(v))
        }
        Expr::Special(_) => None,
    }
}

/// `n!` for small non-negative integers.
pub fn factorial(n: u32) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * int(k as i64))
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::sum(vec![self, rhs])
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::sum(vec![self, -rhs])
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::product(vec![self, rhs])
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::product(vec![self, Expr::pow(rhs, -1)])
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::product(vec![Expr::int(-1), self])
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format::format(self))
    }
}

pub use format::format;

pub(crate) fn is_negative_term(e: &Expr) -> bool {
    match e {
        Expr::Const(q) => q.is_negative(),
        Expr::Product(fs) => fs.first().and_then(Expr::as_const).is_some_and(|q| q.is_negative()),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;

    #[test]
    fn sum_folds_constants_in_place() {
        let e = Expr::sum(vec![Expr::int(1), Expr::t(), Expr::int(-3)]);
        assert_eq!(e, Expr::Sum(vec![Expr::int(-2), Expr::t()]));
        assert_eq!(Expr::sum(vec![Expr::int(2), Expr::int(-2)]), Expr::zero());
    }

    #[test]
    fn product_merges_bases() {
        let e = Expr::product(vec![Expr::t(), Expr::int(2), Expr::pow(Expr::t(), 2), Expr::Pi]);
        assert_eq!(
            e,
            Expr::Product(vec![Expr::int(2), Expr::Pow(Box::new(Expr::t()), 3), Expr::Pi])
        );
        assert_eq!(Expr::product(vec![Expr::t(), Expr::pow(Expr::t(), -1)]), Expr::one());
    }

    #[test]
    fn pow_distributes_over_products() {
        let e = Expr::pow(Expr::product(vec![Expr::int(2), Expr::Pi]), -2);
        assert_eq!(
            e,
            Expr::Product(vec![Expr::Const(rat(1, 4)), Expr::Pow(Box::new(Expr::Pi), -2)])
        );
    }

    #[test]
    fn linear_forms() {
        let e = Expr::sum(vec![
            Expr::product(vec![Expr::int(2), Expr::Pi, Expr::x()]),
            Expr::product(vec![Expr::int(-3), Expr::t()]),
            Expr::Pi,
        ]);
        let lf = linear_form(&e).unwrap();
        assert_eq!(lf.coeff(Var::X), Coeff::monomial(int(2), 1));
        assert_eq!(lf.coeff(Var::T), Coeff::from_int(-3));
        assert_eq!(lf.constant, Coeff::pi());
        assert!(linear_form(&Expr::pow(Expr::t(), 2)).is_none());
        assert!(linear_form(&Expr::product(vec![Expr::t(), Expr::x()])).is_none());
    }

    #[test]
    fn coefficient_embedding() {
        let c = Coeff::one() / (Coeff::monomial(int(4), 2) - Coeff::one());
        let e = Expr::from_coeff(&c);
        assert_eq!(e.const_value(), Some(c));
    }
}
