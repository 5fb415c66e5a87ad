use std::collections::BTreeMap;

use super::{Expr, Func, SpecialAtom, Var};
use crate::coeff::q_to_f64;
use crate::error::{Error, Result};
use crate::special_fn::{bessel_i0, bessel_j0};

/// Numeric values for free variables.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Bindings(BTreeMap<Var, f64>);

impl Bindings {
    pub fn new() -> Self {
        Bindings::default()
    }

    pub fn with(mut self, v: Var, value: f64) -> Self {
        self.0.insert(v, value);
        self
    }

    pub fn t(t: f64) -> Self {
        Bindings::new().with(Var::T, t)
    }

    pub fn xt(x: f64, t: f64) -> Self {
        Bindings::new().with(Var::X, x).with(Var::T, t)
    }

    pub fn get(&self, v: Var) -> Option<f64> {
        self.0.get(&v).copied()
    }
}

/// IEEE evaluation. Deltas have no pointwise value; Si/Ci/Ei are
/// symbolic-only.
pub fn evaluate(e: &Expr, b: &Bindings) -> Result<f64> {
    Ok(match e {
        Expr::Const(q) => q_to_f64(q),
        Expr::Pi => std::f64::consts::PI,
        Expr::Var(v) => b.get(*v).ok_or_else(|| Error::UnboundVariable(v.name()))?,
        Expr::Sum(ts) => {
            let mut acc = 0.0;
            for t in ts {
                acc += evaluate(t, b)?;
            }
            acc
        }
        Expr::Product(fs) => {
            let mut acc = 1.0;
            for f in fs {
                acc *= evaluate(f, b)?;
            }
            acc
        }
        Expr::Pow(base, n) => {
            let v = evaluate(base, b)?;
            match i32::try_from(*n) {
                Ok(k) => v.powi(k),
                Err(_) => v.powf(*n as f64),
            }
        }
        Expr::Func(f, a) => {
            let v = evaluate(a, b)?;
            match f {
                Func::Exp => v.exp(),
                Func::Sin => v.sin(),
                Func::Cos => v.cos(),
                Func::Sinh => v.sinh(),
                Func::Cosh => v.cosh(),
                Func::Sqrt => v.sqrt(),
                Func::Atan => v.atan(),
                Func::Log => v.ln(),
            }
        }
        Expr::Special(sp) => {
            let t = b.get(Var::T).ok_or_else(|| Error::UnboundVariable("t".into()))?;
            match sp {
                SpecialAtom::Delta(_) => return Err(Error::DeltaNotPointwise),
                SpecialAtom::BesselJ0(a) => bessel_j0(a.to_f64() * t),
                SpecialAtom::BesselI0(a) => bessel_i0(a.to_f64() * t),
                other => return Err(Error::SymbolicOnly(other.name().to_string())),
            }
        }
    })
}

/// Pointwise comparison at 32 fixed points, t ∈ (0, 4] and x ∈ (0, 1].
pub fn equivalent(e1: &Expr, e2: &Expr) -> bool {
    (0..32).all(|i| {
        let t = 4.0 * (i as f64 + 1.0) / 32.0;
        // A stride coprime to 32 decorrelates x from t.
        let x = ((i * 13) % 32) as f64 / 32.0 + 1.0 / 64.0;
        let b = Bindings::xt(x, t);
        match (evaluate(e1, &b), evaluate(e2, &b)) {
            (Ok(a), Ok(c)) => (a - c).abs() <= 1e-9 * (1.0 + a.abs()),
            _ => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    #[test]
    fn spec_examples() {
        assert_eq!(evaluate(&parse("1").unwrap(), &Bindings::t(7.0)).unwrap(), 1.0);
        let e = parse("3*exp(-4*pi^2*t)*sin(2*pi*x)").unwrap();
        let v = evaluate(&e, &Bindings::xt(0.25, 0.01)).unwrap();
        let pi = std::f64::consts::PI;
        assert!((v - 3.0 * (-0.04 * pi * pi).exp()).abs() < 1e-14);
        // 3·e^{-0.04π²} = 2.0214763537 (mpmath, 30 digits).
        assert!((v - 2.021_476_353_7).abs() < 1e-9, "{v}");
        assert_eq!(evaluate(&parse("J0(2*t)").unwrap(), &Bindings::t(0.0)).unwrap(), 1.0);
    }

    #[test]
    fn non_pointwise_atoms() {
        let b = Bindings::t(1.0);
        assert_eq!(evaluate(&parse("delta(t - 1)").unwrap(), &b), Err(Error::DeltaNotPointwise));
        assert!(matches!(evaluate(&parse("Si(t)").unwrap(), &b), Err(Error::SymbolicOnly(_))));
        assert!(matches!(evaluate(&parse("x").unwrap(), &b), Err(Error::UnboundVariable(_))));
    }

    #[test]
    fn equivalence() {
        assert!(equivalent(&parse("(exp(t) - exp(-t))/2").unwrap(), &parse("sinh(t)").unwrap()));
        assert!(!equivalent(&parse("exp(-t)").unwrap(), &parse("exp(-2*t)").unwrap()));
    }
}
