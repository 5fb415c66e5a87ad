use super::{Expr, Func, Var};
use crate::error::{Error, Result};

/// Exact symbolic derivative with respect to `var`.
pub fn differentiate(e: &Expr, var: Var) -> Result<Expr> {
    Ok(match e {
        Expr::Const(_) | Expr::Pi => Expr::zero(),
        Expr::Var(v) => {
            if *v == var {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Expr::Sum(ts) => Expr::sum(ts.iter().map(|t| differentiate(t, var)).collect::<Result<_>>()?),
        Expr::Product(fs) => {
            let mut terms = Vec::new();
            for i in 0..fs.len() {
                let d = differentiate(&fs[i], var)?;
                if d.is_zero() {
                    continue;
                }
                let mut factors = fs.clone();
                factors[i] = d;
                terms.push(Expr::product(factors));
            }
            Expr::sum(terms)
        }
        Expr::Pow(b, n) => {
            let db = differentiate(b, var)?;
            Expr::product(vec![Expr::int(*n), Expr::pow((**b).clone(), n - 1), db])
        }
        Expr::Func(f, a) => {
            let da = differentiate(a, var)?;
            if da.is_zero() {
                return Ok(Expr::zero());
            }
            let a = (**a).clone();
            let outer = match f {
                Func::Exp => Expr::func(Func::Exp, a),
                Func::Sin => Expr::func(Func::Cos, a),
                Func::Cos => -Expr::func(Func::Sin, a),
                Func::Sinh => Expr::func(Func::Cosh, a),
                Func::Cosh => Expr::func(Func::Sinh, a),
                Func::Sqrt => Expr::product(vec![
                    Expr::rational(crate::coeff::rat(1, 2)),
                    Expr::pow(Expr::func(Func::Sqrt, a), -1),
                ]),
                Func::Atan => Expr::pow(Expr::sum(vec![Expr::one(), Expr::pow(a, 2)]), -1),
                Func::Log => Expr::pow(a, -1),
            };
            Expr::product(vec![outer, da])
        }
        Expr::Special(sp) => {
            if var != Var::T {
                return Ok(Expr::zero());
            }
            return Err(Error::UnsupportedAtom(format!(
                "cannot differentiate the special atom {}",
                sp.name()
            )));
        }
    })
}
