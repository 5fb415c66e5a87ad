//! Recursive-descent parser for the expression grammar.
//!
//! ```text
//! expr  := term (('+'|'-') term)*
//! term  := unary (('*'|'/') unary)*
//! unary := '-' unary | power
//! power := postfix ('^' unary)?          exponent must be an integer constant
//! postfix := base '!'*
//! base  := number | ident | ident '(' expr ')' | '(' expr ')'
//! ```

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::{factorial, linear_form, Expr, Func, SpecialAtom, Var};
use crate::coeff::{Coeff, Rational};
use crate::error::{Error, Result};

/// What the parser accepts beyond the core grammar.
#[derive(Clone, Debug)]
pub struct ParseOptions {
    pub vars: Vec<Var>,
    /// Named constants substituted at parse time (table parameters).
    pub params: BTreeMap<String, Expr>,
    /// Enforce affine arguments for exp/trig/hyperbolic and special atoms.
    pub time_domain: bool,
}

impl ParseOptions {
    /// Time-domain functions of `t` and `x`.
    pub fn time() -> Self {
        ParseOptions {
            vars: vec![Var::T, Var::X],
            params: BTreeMap::new(),
            time_domain: true,
        }
    }

    /// Closed-form images in `s`, `u` (and `w` for Yang images).
    pub fn image() -> Self {
        ParseOptions {
            vars: vec![Var::S, Var::U, Var::W],
            params: BTreeMap::new(),
            time_domain: false,
        }
    }

    /// ODE sides: `t` plus `v`, `v'`, `v''`, ...
    pub fn ode() -> Self {
        ParseOptions {
            vars: vec![Var::T, Var::Deriv(0)],
            params: BTreeMap::new(),
            time_domain: true,
        }
    }

    pub fn with_param(mut self, name: &str, value: Expr) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }
}

/// Parses a time-domain expression in `t` and `x`.
pub fn parse(text: &str) -> Result<Expr> {
    parse_with(text, &ParseOptions::time())
}

pub fn parse_with(text: &str, opts: &ParseOptions) -> Result<Expr> {
    let tokens = lex(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        opts,
        len: text.len(),
    };
    let e = p.expr()?;
    if let Some(tok) = p.peek() {
        return Err(Error::Parse {
            offset: tok.offset,
            msg: format!("unexpected {}", tok.kind.describe()),
        });
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Num(Rational),
    Ident(String),
    Prime,
    Op(char),
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::Num(q) => format!("number {q}"),
            Kind::Ident(s) => format!("identifier '{s}'"),
            Kind::Prime => "'''".into(),
            Kind::Op(c) => format!("'{c}'"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Kind,
    offset: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || (c == '.' && bytes.get(i + 1).is_some_and(u8::is_ascii_digit)) {
            let start = i;
            let mut digits = String::new();
            let mut scale = 0usize;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                digits.push(bytes[i] as char);
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    digits.push(bytes[i] as char);
                    scale += 1;
                    i += 1;
                }
            }
            let n: BigInt = digits.parse().expect("ascii digits");
            let d = num_traits::pow(BigInt::from(10), scale);
            out.push(Token {
                kind: Kind::Num(Rational::new(n, d)),
                offset: start,
            });
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                kind: Kind::Ident(text[start..i].to_string()),
                offset: start,
            });
        } else if c == '\'' {
            out.push(Token { kind: Kind::Prime, offset: i });
            i += 1;
        } else if "+-*/^()!".contains(c) {
            out.push(Token { kind: Kind::Op(c), offset: i });
            i += 1;
        } else {
            let ch = text[i..].chars().next().unwrap();
            return Err(Error::Parse {
                offset: i,
                msg: format!("unexpected character '{ch}'"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    opts: &'a ParseOptions,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.len, |t| t.offset)
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek().is_some_and(|t| t.kind == Kind::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_op(&mut self, c: char) -> Result<()> {
        if self.eat_op(c) {
            Ok(())
        } else {
            let found = self.peek().map_or("end of input".to_string(), |t| t.kind.describe());
            Err(Error::Parse {
                offset: self.offset(),
                msg: format!("expected '{c}', found {found}"),
            })
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat_op('+') {
                terms.push(self.term()?);
            } else if self.eat_op('-') {
                terms.push(-self.term()?);
            } else {
                break;
            }
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.unary()?];
        loop {
            if self.eat_op('*') {
                factors.push(self.unary()?);
            } else if self.peek().is_some_and(|t| t.kind == Kind::Op('/')) {
                let at = self.offset();
                self.pos += 1;
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(Error::Parse {
                        offset: at,
                        msg: "division by zero".into(),
                    });
                }
                factors.push(Expr::pow(d, -1));
            } else {
                break;
            }
        }
        Ok(Expr::product(factors))
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_op('-') {
            return Ok(-self.unary()?);
        }
        if self.eat_op('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.postfix()?;
        if !self.eat_op('^') {
            return Ok(base);
        }
        let at = self.offset();
        let ex = self.unary()?;
        let n = ex
            .const_value()
            .and_then(|c| c.as_rational())
            .filter(|q| q.is_integer())
            .and_then(|q| q.to_integer().to_i64())
            .ok_or_else(|| Error::Parse {
                offset: at,
                msg: "exponent must be an integer constant".into(),
            })?;
        if base.is_zero() && n < 0 {
            return Err(Error::Parse {
                offset: at,
                msg: "zero to a negative power".into(),
            });
        }
        Ok(Expr::pow(base, n))
    }

    fn postfix(&mut self) -> Result<Expr> {
        let mut e = self.base()?;
        while self.peek().is_some_and(|t| t.kind == Kind::Op('!')) {
            let at = self.offset();
            self.pos += 1;
            e = Expr::Const(factorial(nonneg_int(&e).ok_or_else(|| Error::Parse {
                offset: at,
                msg: "factorial of a non-integer".into(),
            })?));
        }
        Ok(e)
    }

    fn base(&mut self) -> Result<Expr> {
        let tok = self.peek().cloned().ok_or_else(|| Error::Parse {
            offset: self.len,
            msg: "unexpected end of input".into(),
        })?;
        match tok.kind {
            Kind::Num(q) => {
                self.pos += 1;
                Ok(Expr::Const(q))
            }
            Kind::Op('(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_op(')')?;
                Ok(e)
            }
            Kind::Ident(name) => {
                self.pos += 1;
                self.identifier(&name, tok.offset)
            }
            other => Err(Error::Parse {
                offset: tok.offset,
                msg: format!("unexpected {}", other.describe()),
            }),
        }
    }

    fn identifier(&mut self, name: &str, offset: usize) -> Result<Expr> {
        if let Some(v) = self.opts.params.get(name) {
            return Ok(v.clone());
        }
        let var = match name {
            "pi" => return Ok(Expr::Pi),
            "t" => Some(Var::T),
            "x" => Some(Var::X),
            "s" => Some(Var::S),
            "u" => Some(Var::U),
            "w" | "omega" => Some(Var::W),
            "r" => Some(Var::R),
            "v" => {
                let mut k = 0u8;
                while self.peek().is_some_and(|t| t.kind == Kind::Prime) {
                    self.pos += 1;
                    k += 1;
                }
                Some(Var::Deriv(k))
            }
            _ => None,
        };
        if let Some(v) = var {
            let allowed = match v {
                Var::Deriv(_) => self.opts.vars.contains(&Var::Deriv(0)),
                other => self.opts.vars.contains(&other),
            };
            if !allowed {
                return Err(Error::UnknownIdentifier {
                    offset,
                    name: name.to_string(),
                });
            }
            return Ok(Expr::Var(v));
        }
        let is_special = matches!(name, "delta" | "J0" | "I0" | "Si" | "Ci" | "Ei");
        let func = Func::from_name(name);
        if func.is_none() && !is_special && name != "gamma" {
            return Err(Error::UnknownIdentifier {
                offset,
                name: name.to_string(),
            });
        }
        self.expect_op('(')?;
        let arg = self.expr()?;
        self.expect_op(')')?;
        if name == "gamma" {
            // Γ(n + 1) = n! on positive integers only.
            return nonneg_int(&arg)
                .filter(|&n| n >= 1)
                .map(|n| Expr::Const(factorial(n - 1)))
                .ok_or_else(|| Error::Parse {
                    offset,
                    msg: "gamma is only defined here on positive integers".into(),
                });
        }
        if let Some(f) = func {
            if self.opts.time_domain && matches!(f, Func::Exp | Func::Sin | Func::Cos | Func::Sinh | Func::Cosh) {
                check_affine(&arg, name)?;
            }
            return Ok(Expr::func(f, arg));
        }
        self.special(name, arg, offset)
    }

    fn special(&self, name: &str, arg: Expr, offset: usize) -> Result<Expr> {
        let lf = linear_form(&arg)
            .filter(|lf| lf.terms.keys().all(|v| *v == Var::T))
            .ok_or_else(|| Error::NonTransformable(format!("{name} needs an argument affine in t (at byte {offset})")))?;
        let a = lf.coeff(Var::T);
        if name == "delta" {
            let shift = (-lf.constant.clone()).as_rational();
            return match shift {
                Some(sh) if a.is_one() && !sh.is_negative() => Ok(Expr::Special(SpecialAtom::Delta(sh))),
                _ => Err(Error::Parse {
                    offset,
                    msg: "delta accepts only the form delta(t - a) with a >= 0".into(),
                }),
            };
        }
        if !lf.constant.is_zero() || a.is_zero() {
            return Err(Error::NonTransformable(format!(
                "{name} needs an argument of the form c*t with c != 0 (at byte {offset})"
            )));
        }
        let sp = match name {
            "J0" => SpecialAtom::BesselJ0(a.abs()),
            "I0" => SpecialAtom::BesselI0(a.abs()),
            "Si" => {
                // Si is odd.
                let e = Expr::Special(SpecialAtom::SinIntegral(a.abs()));
                return Ok(if a.is_negative() { -e } else { e });
            }
            _ if a.is_negative() => {
                return Err(Error::NonTransformable(format!("{name} of a negative argument is not real")));
            }
            "Ci" => SpecialAtom::CosIntegral(a),
            "Ei" => SpecialAtom::ExpIntegral(a),
            _ => unreachable!("special names are matched above"),
        };
        Ok(Expr::Special(sp))
    }
}

fn nonneg_int(e: &Expr) -> Option<u32> {
    e.const_value()?
        .as_rational()
        .filter(|q| q.is_integer() && !q.is_negative())
        .and_then(|q| q.to_integer().to_u32())
}

fn check_affine(arg: &Expr, name: &str) -> Result<()> {
    match linear_form(arg) {
        Some(_) => Ok(()),
        None => Err(Error::NonTransformable(format!(
            "non-affine argument in {name}({})",
            super::format(arg)
        ))),
    }
}

/// Parses `v(0)=1, v'(0)=0` style initial data into `[v(0), v'(0), ...]`.
pub fn parse_inits(text: &str, order: usize) -> Result<Vec<Coeff>> {
    let mut vals: Vec<Option<Coeff>> = vec![None; order];
    for (idx, part) in text.split(',').map(str::trim).filter(|p| !p.is_empty()).enumerate() {
        let (lhs, rhs) = part.split_once('=').ok_or_else(|| Error::Parse {
            offset: idx,
            msg: format!("initial condition '{part}' lacks '='"),
        })?;
        let lhs = lhs.trim();
        let k = lhs
            .strip_prefix('v')
            .and_then(|r| r.strip_suffix("(0)"))
            .filter(|p| p.chars().all(|c| c == '\''))
            .map(str::len)
            .ok_or_else(|| Error::Parse {
                offset: idx,
                msg: format!("expected v(0), v'(0), ... but found '{lhs}'"),
            })?;
        if k >= order {
            return Err(Error::Arity { expected: order, got: k + 1 });
        }
        let val = parse_with(rhs.trim(), &ParseOptions::time())?
            .const_value()
            .ok_or_else(|| Error::Parse {
                offset: idx,
                msg: format!("initial value '{}' is not an exact constant", rhs.trim()),
            })?;
        vals[k] = Some(val);
    }
    let got = vals.iter().filter(|v| v.is_some()).count();
    if got != order {
        return Err(Error::Arity { expected: order, got });
    }
    Ok(vals.into_iter().map(Option::unwrap).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{int, rat};

    #[test]
    fn spec_examples() {
        let e = parse("3*cos(t) + 5*sin(2*t)").unwrap();
        let expect = Expr::Sum(vec![
            Expr::Product(vec![Expr::int(3), Expr::cos(Expr::t())]),
            Expr::Product(vec![Expr::int(5), Expr::sin(Expr::Product(vec![Expr::int(2), Expr::t()]))]),
        ]);
        assert_eq!(e, expect);
        assert_eq!(parse("0").unwrap(), Expr::zero());
        assert_eq!(
            parse("sin(pi*x)").unwrap(),
            Expr::sin(Expr::Product(vec![Expr::Pi, Expr::x()]))
        );
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(
            parse("1 + * t"),
            Err(Error::Parse {
                offset: 4,
                msg: "unexpected '*'".into()
            })
        );
        assert!(matches!(parse("foo(t)"), Err(Error::UnknownIdentifier { offset: 0, .. })));
        assert!(matches!(parse("sin(t^2)"), Err(Error::NonTransformable(_))));
        assert!(matches!(parse("s + t"), Err(Error::UnknownIdentifier { offset: 0, .. })));
        assert!(matches!(parse("(t"), Err(Error::Parse { offset: 2, .. })));
        assert!(matches!(parse("1/0"), Err(Error::Parse { .. })));
    }

    #[test]
    fn decimals_factorials_and_params() {
        assert_eq!(parse("0.25").unwrap(), Expr::Const(rat(1, 4)));
        assert_eq!(parse("3!").unwrap(), Expr::int(6));
        assert_eq!(parse("gamma(4)").unwrap(), Expr::int(6));
        let opts = ParseOptions::time().with_param("n", Expr::int(2));
        assert_eq!(
            parse_with("t^n/n!", &opts).unwrap(),
            Expr::Product(vec![Expr::Const(rat(1, 2)), Expr::Pow(Box::new(Expr::t()), 2)])
        );
        let img = ParseOptions::image().with_param("n", Expr::int(2));
        assert_eq!(
            parse_with("(u/s)^(n+1)", &img).unwrap(),
            Expr::Product(vec![
                Expr::Pow(Box::new(Expr::var(Var::U)), 3),
                Expr::Pow(Box::new(Expr::var(Var::S)), -3)
            ])
        );
    }

    #[test]
    fn specials() {
        assert_eq!(parse("delta(t - 2)").unwrap(), Expr::Special(SpecialAtom::Delta(int(2))));
        assert_eq!(parse("delta(t)").unwrap(), Expr::Special(SpecialAtom::Delta(int(0))));
        assert!(parse("delta(2*t)").is_err());
        assert_eq!(
            parse("J0(2*t)").unwrap(),
            Expr::Special(SpecialAtom::BesselJ0(Coeff::from_int(2)))
        );
        assert_eq!(
            parse("Si(-t)").unwrap(),
            -Expr::Special(SpecialAtom::SinIntegral(Coeff::one()))
        );
    }

    #[test]
    fn ode_variables_and_inits() {
        let e = parse_with("v'' - 3*v' + 2*v", &ParseOptions::ode()).unwrap();
        assert!(e.contains(Var::Deriv(2)));
        let inits = parse_inits("v(0)=1, v'(0)=0", 2).unwrap();
        assert_eq!(inits, vec![Coeff::one(), Coeff::zero()]);
        assert!(matches!(parse_inits("v(0)=1", 2), Err(Error::Arity { .. })));
    }
}
