//! Inversion of rational images: normalisation, partial fractions and the
//! basis-image map back to the atom algebra.

mod factor;

use std::fmt;

use serde_json::{json, Value};

pub use factor::{factor_denominator, Factor, FactorKind};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::expr::{factorial, AtomSum, Expr, Shape, Trig};
use crate::image::{ImageForm, Target, Trans};
use crate::poly::PolyR;
use crate::ratfunc::RatFunc;

/// `u^{u_power} · N(r)/D(r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalR {
    pub f: RatFunc,
    pub u_power: i32,
}

impl RationalR {
    pub fn new(f: RatFunc) -> RationalR {
        RationalR { f, u_power: 0 }
    }

    pub fn numer(&self) -> &PolyR {
        self.f.numer()
    }

    pub fn denom(&self) -> &PolyR {
        self.f.denom()
    }

    pub fn is_proper(&self) -> bool {
        self.f.is_proper()
    }

    /// The image as an expression in `s, u`.
    pub fn to_expr(&self) -> Expr {
        ImageForm::term(self.u_power, Trans::One, self.f.clone()).to_expr(Target::Shehu)
    }
}

impl fmt::Display for RationalR {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::expr::format(&self.to_expr()))
    }
}

/// Writes an image in `s, u` as `u^k · N(r)/D(r)`.
pub fn normalize_image(e: &Expr) -> Result<RationalR> {
    let form = ImageForm::from_expr(e, Target::Shehu)?;
    let mut terms = form.terms();
    let Some((p, t, r)) = terms.next() else {
        return Ok(RationalR::new(RatFunc::zero()));
    };
    if terms.next().is_some() {
        return Err(Error::NotHomogeneous(
            "image is not a single power of u times a rational function of s/u".into(),
        ));
    }
    if *t != Trans::One {
        return Err(Error::NotHomogeneous("image is not rational in s/u".into()));
    }
    let out = RationalR { f: r.clone(), u_power: p };
    if !out.is_proper() {
        return Err(Error::ImproperImage {
            num: out.numer().deg(),
            den: out.denom().deg(),
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartialFractionTerm {
    /// `coeff / (r - root)^multiplicity`.
    LinearPole { root: Coeff, multiplicity: u32, coeff: Coeff },
    /// `(c·(r - center) + d) / ((r - center)² + freq²)^multiplicity`.
    QuadraticPole {
        center: Coeff,
        freq: Coeff,
        multiplicity: u32,
        c: Coeff,
        d: Coeff,
    },
}

impl PartialFractionTerm {
    pub fn to_ratfunc(&self) -> RatFunc {
        match self {
            PartialFractionTerm::LinearPole { root, multiplicity, coeff } => RatFunc::new(
                PolyR::constant(coeff.clone()),
                PolyR::linear(root).pow(*multiplicity),
            ),
            PartialFractionTerm::QuadraticPole {
                center,
                freq,
                multiplicity,
                c,
                d,
            } => {
                let q = FactorKind::Quadratic {
                    center: center.clone(),
                    freq: freq.clone(),
                }
                .poly();
                let num = PolyR::linear(center).scale(c).add(&PolyR::constant(d.clone()));
                RatFunc::new(num, q.pow(*multiplicity))
            }
        }
    }

    /// Time-domain preimage of this single term.
    pub fn invert(&self) -> AtomSum {
        match self {
            PartialFractionTerm::LinearPole { root, multiplicity, coeff } => {
                let n = multiplicity - 1;
                let c = coeff / Coeff::from(factorial(n));
                AtomSum::term(c, Shape::new(n, root.clone(), Trig::None), Shape::one())
            }
            PartialFractionTerm::QuadraticPole {
                center,
                freq,
                multiplicity,
                c,
                d,
            } => {
                let (g, h) = quadratic_basis(freq, *multiplicity);
                let body = h.scale(c).add(&g.scale(d));
                let shift = AtomSum::term(Coeff::one(), Shape::exp(center.clone()), Shape::one());
                body.mul(&shift).expect("atoms multiply")
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            PartialFractionTerm::LinearPole { root, multiplicity, coeff } => json!({
                "kind": "linear",
                "root": root.to_string(),
                "multiplicity": multiplicity,
                "coeff": coeff.to_string(),
            }),
            PartialFractionTerm::QuadraticPole {
                center,
                freq,
                multiplicity,
                c,
                d,
            } => json!({
                "kind": "quadratic",
                "center": center.to_string(),
                "freq": freq.to_string(),
                "multiplicity": multiplicity,
                "c": c.to_string(),
                "d": d.to_string(),
            }),
        }
    }
}

/// Preimages `(g_m, h_m)` of `1/(r²+α²)^m` and `r/(r²+α²)^m`.
///
/// `g_1 = sin(αt)/α`, `h_1 = cos(αt)`; multiplication by `t` is `-d/dr`,
/// which gives `h_{j+1} = t·g_j/(2j)` and
/// `g_{j+1} = ((2j-1)·g_j - t·h_j) / (2jα²)`.
fn quadratic_basis(alpha: &Coeff, m: u32) -> (AtomSum, AtomSum) {
    let sin = AtomSum::term(alpha.recip(), Shape::new(0, Coeff::zero(), Trig::Sin(alpha.clone())), Shape::one());
    let cos = AtomSum::term(Coeff::one(), Shape::new(0, Coeff::zero(), Trig::Cos(alpha.clone())), Shape::one());
    let t = AtomSum::term(Coeff::one(), Shape::power(1), Shape::one());
    let (mut g, mut h) = (sin, cos);
    let a2 = alpha.square();
    for j in 1..m {
        let jj = Coeff::from_int(j as i64);
        let tg = t.mul(&g).expect("atoms multiply");
        let th = t.mul(&h).expect("atoms multiply");
        let two_j = Coeff::from_int(2) * &jj;
        let g_next = g
            .scale(&(&two_j - Coeff::one()))
            .sub(&th)
            .scale(&(&two_j * &a2).recip());
        h = tg.scale(&two_j.recip());
        g = g_next;
    }
    (g, h)
}

/// Partial-fraction decomposition of a proper rational function.
pub fn partial_fractions(f: &RatFunc) -> Result<Vec<PartialFractionTerm>> {
    if f.is_zero() {
        return Ok(Vec::new());
    }
    if !f.is_proper() {
        return Err(Error::ImproperImage {
            num: f.numer().deg(),
            den: f.denom().deg(),
        });
    }
    let den = f.denom();
    let factors = factor_denominator(den)?;
    let n = den.deg();
    // One column per unknown: the polynomial it multiplies after clearing D.
    let mut columns: Vec<PolyR> = Vec::with_capacity(n);
    for fac in &factors {
        let base = fac.poly();
        for j in 1..=fac.multiplicity {
            let cof = den.div_exact(&base.pow(j)).expect("factor divides denominator");
            match &fac.kind {
                FactorKind::Linear { .. } => columns.push(cof),
                FactorKind::Quadratic { center, .. } => {
                    columns.push(cof.mul(&PolyR::linear(center)));
                    columns.push(cof);
                }
            }
        }
    }
    assert_eq!(columns.len(), n, "one unknown per degree of the denominator");
    let rows: Vec<Vec<Coeff>> = (0..n).map(|k| columns.iter().map(|c| c.coeff(k)).collect()).collect();
    let rhs: Vec<Coeff> = (0..n).map(|k| f.numer().coeff(k)).collect();
    let x = solve_linear(rows, rhs).expect("partial-fraction system is nonsingular");
    let mut out = Vec::new();
    let mut idx = 0;
    for fac in &factors {
        for j in 1..=fac.multiplicity {
            match &fac.kind {
                FactorKind::Linear { root } => {
                    if !x[idx].is_zero() {
                        out.push(PartialFractionTerm::LinearPole {
                            root: root.clone(),
                            multiplicity: j,
                            coeff: x[idx].clone(),
                        });
                    }
                    idx += 1;
                }
                FactorKind::Quadratic { center, freq } => {
                    let (c, d) = (x[idx].clone(), x[idx + 1].clone());
                    if !(c.is_zero() && d.is_zero()) {
                        out.push(PartialFractionTerm::QuadraticPole {
                            center: center.clone(),
                            freq: freq.clone(),
                            multiplicity: j,
                            c,
                            d,
                        });
                    }
                    idx += 2;
                }
            }
        }
    }
    Ok(out)
}

/// Gaussian elimination over `Q(π)`.
pub(crate) fn solve_linear(mut a: Vec<Vec<Coeff>>, mut b: Vec<Coeff>) -> Option<Vec<Coeff>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = a[col][col].recip();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let k = &a[r][col] * &inv;
            for c in col..n {
                if !a[col][c].is_zero() {
                    let v = &a[r][c] - &(&k * &a[col][c]);
                    a[r][c] = v;
                }
            }
            let v = &b[r] - &(&k * &b[col]);
            b[r] = v;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Inverse image of a proper rational function of `r`, as atoms.
pub fn invert_ratfunc(f: &RatFunc) -> Result<AtomSum> {
    Ok(invert_traced(f)?.0)
}

fn invert_traced(f: &RatFunc) -> Result<(AtomSum, Vec<PartialFractionTerm>)> {
    let terms = partial_fractions(f)?;
    let mut v = AtomSum::zero();
    for t in &terms {
        v = v.add(&t.invert());
    }
    Ok((v, terms))
}

/// Inverse Shehu transform of a rational image.
pub fn invert(f: &RationalR) -> Result<Expr> {
    Ok(invert_with_trace(f)?.0)
}

/// Inverse plus the partial-fraction terms it was assembled from.
pub fn invert_with_trace(f: &RationalR) -> Result<(Expr, Vec<PartialFractionTerm>)> {
    if f.u_power != 0 {
        return Err(Error::UPowerMismatch(f.u_power));
    }
    let (v, terms) = invert_traced(&f.f)?;
    Ok((v.to_expr(), terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{canonicalize, format, parse, parse_with, ParseOptions};

    fn image(s: &str) -> RationalR {
        normalize_image(&parse_with(s, &ParseOptions::image()).unwrap()).unwrap()
    }

    fn inv(s: &str) -> String {
        format(&invert(&image(s)).unwrap())
    }

    fn same(a: &str, b: &str) {
        let x = canonicalize(&parse(a).unwrap()).unwrap();
        let y = canonicalize(&parse(b).unwrap()).unwrap();
        assert_eq!(x, y, "{a} vs {b}");
    }

    #[test]
    fn normalisation() {
        let f = image("u/(s + u)");
        assert_eq!(f.u_power, 0);
        assert_eq!(f.to_string(), "u/(s + u)");
        let g = image("-u/s + u^2/s^2 + u/(s + u)");
        assert_eq!(g.denom(), &PolyR::new(vec![Coeff::zero(), Coeff::zero(), Coeff::one(), Coeff::one()]));
        assert!(matches!(
            normalize_image(&parse_with("s/(s + u)", &ParseOptions::image()).unwrap()),
            Err(Error::ImproperImage { .. })
        ));
        assert!(matches!(
            normalize_image(&parse_with("1/(s + 1)", &ParseOptions::image()).unwrap()),
            Err(Error::NotHomogeneous(_))
        ));
    }

    #[test]
    fn spec_inversions() {
        assert_eq!(inv("u/(s + u)"), "exp(-t)");
        same(&inv("-u/s + u^2/s^2 + u/(s + u)"), "-1 + t + exp(-t)");
        same(
            &inv("(1/3)*u^2/((s + u)^2 + u^2) + (2/3)*u^2/((s + u)^2 + 4*u^2)"),
            "(1/3)*exp(-t)*sin(t) + (1/3)*exp(-t)*sin(2*t)",
        );
        let r = image("u^2/s^2");
        assert!(matches!(invert(&RationalR { u_power: 1, ..r }), Err(Error::UPowerMismatch(1))));
    }

    #[test]
    fn partial_fraction_examples() {
        let f = image("u^3/((s - u)*(s - 2*u)*(s - 3*u))");
        let terms = partial_fractions(&f.f).unwrap();
        let coeffs: Vec<Coeff> = terms
            .iter()
            .map(|t| match t {
                PartialFractionTerm::LinearPole { coeff, .. } => coeff.clone(),
                _ => panic!("linear poles only"),
            })
            .collect();
        assert_eq!(coeffs, vec![Coeff::from_ratio(1, 2), Coeff::from_int(-1), Coeff::from_ratio(1, 2)]);
        let g = image("u^4/(((s + u)^2 + u^2)*((s + u)^2 + 4*u^2))");
        let terms = partial_fractions(&g.f).unwrap();
        assert_eq!(terms.len(), 2);
        let back = terms.iter().fold(RatFunc::zero(), |acc, t| acc.add(&t.to_ratfunc()));
        assert_eq!(back, g.f);
        let h = partial_fractions(&image("u^2/s^2").f).unwrap();
        assert_eq!(
            h,
            vec![PartialFractionTerm::LinearPole {
                root: Coeff::zero(),
                multiplicity: 2,
                coeff: Coeff::one()
            }]
        );
    }

    #[test]
    fn repeated_quadratics() {
        // 1/(r²+1)² ↔ (sin t - t cos t)/2 ; r/(r²+1)² ↔ t sin(t)/2
        same(&inv("u^4/(s^2 + u^2)^2"), "(sin(t) - t*cos(t))/2");
        same(&inv("s*u^3/(s^2 + u^2)^2"), "t*sin(t)/2");
        // sympy: inverse_laplace_transform(1/(r**2+4)**3)
        same(
            &inv("u^6/(s^2 + 4*u^2)^3"),
            "(3/256)*sin(2*t) - (3/128)*t*cos(2*t) - (1/64)*t^2*sin(2*t)",
        );
    }

    #[test]
    fn pi_modes() {
        same(&inv("3*u/(s + 4*pi^2*u)"), "3*exp(-4*pi^2*t)");
        let pi = std::f64::consts::PI;
        let v = invert(&image("pi^2*u^3/(s*(s^2 + pi^2*u^2))")).unwrap();
        // (1 - cos(πt))
        let x = crate::expr::evaluate(&v, &crate::expr::Bindings::t(0.3)).unwrap();
        assert!((x - (1.0 - (pi * 0.3).cos())).abs() < 1e-13);
    }
}
