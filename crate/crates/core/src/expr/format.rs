use num_traits::{One, Signed};

use super::{is_negative_term, Expr, SpecialAtom};
use crate::coeff::Rational;

const P_SUM: u8 = 1;
const P_PROD: u8 = 2;
const P_POW: u8 = 3;
const P_ATOM: u8 = 4;

/// Renders an expression in the input grammar; the output always reparses.
pub fn format(e: &Expr) -> String {
    render(e, 0)
}

fn paren(s: String, own: u8, ctx: u8) -> String {
    if own < ctx {
        format!("({s})")
    } else {
        s
    }
}

fn rational(q: &Rational) -> (String, u8) {
    if q.is_integer() {
        let p = if q.is_negative() { P_PROD } else { P_ATOM };
        (q.numer().to_string(), p)
    } else {
        (format!("{}/{}", q.numer(), q.denom()), P_PROD)
    }
}

fn render(e: &Expr, ctx: u8) -> String {
    match e {
        Expr::Const(q) => {
            let (s, p) = rational(q);
            paren(s, p, ctx)
        }
        Expr::Pi => "pi".into(),
        Expr::Var(v) => v.name(),
        Expr::Sum(ts) => {
            let mut s = String::new();
            for (i, t) in ts.iter().enumerate() {
                if i == 0 {
                    s.push_str(&render(t, P_SUM));
                } else if is_negative_term(t) {
                    s.push_str(" - ");
                    s.push_str(&render(&-t.clone(), P_PROD));
                } else {
                    s.push_str(" + ");
                    s.push_str(&render(t, P_PROD));
                }
            }
            paren(s, P_SUM, ctx)
        }
        Expr::Product(fs) => paren(render_product(fs), P_PROD, ctx),
        Expr::Pow(b, n) if *n > 0 => paren(format!("{}^{}", render(b, P_ATOM), n), P_POW, ctx),
        Expr::Pow(b, n) => {
            let inner = Expr::pow((**b).clone(), -n);
            paren(format!("1/{}", render(&inner, P_POW)), P_PROD, ctx)
        }
        Expr::Func(f, a) => format!("{}({})", f.name(), render(a, 0)),
        Expr::Special(sp) => render_special(sp),
    }
}

fn render_special(sp: &SpecialAtom) -> String {
    match sp {
        SpecialAtom::Delta(a) if a.is_positive() => format!("delta(t - {})", rational(a).0),
        SpecialAtom::Delta(_) => "delta(t)".into(),
        other => {
            let rate = other.rate().expect("non-delta special has a rate");
            let arg = Expr::product(vec![Expr::from_coeff(rate), Expr::t()]);
            format!("{}({})", other.name(), render(&arg, 0))
        }
    }
}

fn render_product(fs: &[Expr]) -> String {
    let (coef, rest) = match fs.first() {
        Some(Expr::Const(q)) => (q.clone(), &fs[1..]),
        _ => (Rational::one(), fs),
    };
    let mut num: Vec<String> = Vec::new();
    let mut den: Vec<(String, u8)> = Vec::new();
    for f in rest {
        match f {
            Expr::Pow(b, n) if *n < 0 => {
                let inner = Expr::pow((**b).clone(), -n);
                let own = if -n == 1 { precedence(b) } else { P_POW };
                den.push((render(&inner, P_POW.min(own)), own));
            }
            other => num.push(render(other, P_POW)),
        }
    }
    let sign = if coef.is_negative() { "-" } else { "" };
    let a = coef.abs();
    if den.is_empty() {
        let lead = if a.is_one() {
            None
        } else if a.is_integer() {
            Some(a.numer().to_string())
        } else {
            Some(format!("({}/{})", a.numer(), a.denom()))
        };
        let parts: Vec<String> = lead.into_iter().chain(num).collect();
        return format!("{sign}{}", parts.join("*"));
    }
    let mut top: Vec<String> = Vec::new();
    if !a.numer().is_one() {
        top.push(a.numer().to_string());
    }
    top.extend(num);
    let top = if top.is_empty() { "1".to_string() } else { top.join("*") };
    if !a.denom().is_one() {
        den.insert(0, (a.denom().to_string(), P_ATOM));
    }
    let bottom = if den.len() == 1 && den[0].1 >= P_POW {
        den.pop().unwrap().0
    } else {
        let parts: Vec<String> = den
            .into_iter()
            .map(|(s, p)| if p < P_POW { format!("({s})") } else { s })
            .collect();
        if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            format!("({})", parts.join("*"))
        }
    };
    format!("{sign}{top}/{bottom}")
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Const(q) => rational(q).1,
        Expr::Pi | Expr::Var(_) | Expr::Func(..) | Expr::Special(_) => P_ATOM,
        Expr::Sum(_) => P_SUM,
        Expr::Product(_) => P_PROD,
        Expr::Pow(_, n) if *n > 0 => P_POW,
        Expr::Pow(..) => P_PROD,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rat;
    use crate::expr::{parse_with, ParseOptions, Var};

    fn roundtrip(s: &str) -> String {
        let mut opts = ParseOptions::image();
        opts.vars.push(Var::T);
        opts.time_domain = false;
        format(&parse_with(s, &opts).unwrap())
    }

    #[test]
    fn spec_shapes() {
        let e = Expr::product(vec![Expr::Const(rat(1, 2)), Expr::exp(Expr::product(vec![Expr::int(3), Expr::t()]))]);
        assert_eq!(format(&e), "(1/2)*exp(3*t)");
        assert_eq!(format(&Expr::zero()), "0");
        let e = Expr::product(vec![Expr::t(), Expr::exp(-Expr::t())]);
        assert_eq!(format(&e), "t*exp(-t)");
    }

    #[test]
    fn quotients() {
        let s = Expr::var(Var::S);
        let u = Expr::var(Var::U);
        let e = u.clone() / (s - Expr::int(3) * u);
        assert_eq!(format(&e), "u/(s - 3*u)");
        assert_eq!(roundtrip("1/(2*pi^2)"), "1/(2*pi^2)");
        assert_eq!(roundtrip("u^2/((s-u)*(s-2*u))"), "u^2/((s - u)*(s - 2*u))");
        assert_eq!(roundtrip("u/sqrt(s^2+u^2)"), "u/sqrt(s^2 + u^2)");
        assert_eq!(roundtrip("1/(s+u)^2"), "1/(s + u)^2");
    }

    #[test]
    fn signs_and_specials() {
        assert_eq!(roundtrip("-1 + t + exp(-t)"), "-1 + t + exp(-t)");
        assert_eq!(roundtrip("3*cos(t) - (5/2)*sin(2*t)"), "3*cos(t) - (5/2)*sin(2*t)");
        assert_eq!(roundtrip("delta(t - 2)"), "delta(t - 2)");
        assert_eq!(roundtrip("J0(2*t)"), "J0(2*t)");
        assert_eq!(roundtrip("(1+t)^3"), "(1 + t)^3");
    }
}
