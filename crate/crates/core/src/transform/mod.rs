//! Forward Shehu transform of the atom algebra.
//!
//! `V(s, u) = ∫₀^∞ e^{-st/u} v(t) dt = F(s/u)` where `F` is the Laplace image,
//! so every image is built in the homogenized variable `r = s/u`:
//! `tⁿ e^{at} (cos, sin)(bt) ↦ n!·(Re, Im) (r - a - ib)^{-(n+1)}`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::expr::{factorial, format, AtomSum, Expr, Func, Shape, SpecialAtom, Trig};
use crate::image::{ImageForm, Target};
use crate::inverse::RationalR;
use crate::poly::PolyR;
use crate::ratfunc::RatFunc;

/// Extended abscissa: `-∞` or an element of `Q(π)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Abscissa {
    NegInfinity,
    Finite(Coeff),
}

impl Abscissa {
    pub fn zero() -> Abscissa {
        Abscissa::Finite(Coeff::zero())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Abscissa::NegInfinity => f64::NEG_INFINITY,
            Abscissa::Finite(c) => c.to_f64(),
        }
    }

    pub fn max(self, o: Abscissa) -> Abscissa {
        if self >= o {
            self
        } else {
            o
        }
    }

    /// Strict validity predicate `r > abscissa`.
    pub fn admits(&self, r: f64) -> bool {
        r > self.to_f64()
    }
}

impl PartialOrd for Abscissa {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Abscissa {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Abscissa::NegInfinity, Abscissa::NegInfinity) => Ordering::Equal,
            (Abscissa::NegInfinity, _) => Ordering::Less,
            (_, Abscissa::NegInfinity) => Ordering::Greater,
            (Abscissa::Finite(a), Abscissa::Finite(b)) => {
                let d = a - b;
                d.signum().cmp(&0)
            }
        }
    }
}

impl fmt::Display for Abscissa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Abscissa::NegInfinity => write!(f, "-inf"),
            Abscissa::Finite(c) => write!(f, "{c}"),
        }
    }
}

/// `|v(t)| ≤ N e^{(order + ε) t}` for every `ε > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthBound {
    pub order: Abscissa,
    pub witness: String,
}

/// Closed-form image: a rational part in `r` plus special terms, valid for
/// `r > roc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformImage {
    pub rational: RatFunc,
    /// Special atom ↦ coefficient; each contributes the atom's closed form.
    pub specials: BTreeMap<SpecialAtom, Coeff>,
    pub roc: Abscissa,
}

impl TransformImage {
    pub fn zero() -> TransformImage {
        TransformImage {
            rational: RatFunc::zero(),
            specials: BTreeMap::new(),
            roc: Abscissa::NegInfinity,
        }
    }

    pub fn from_rational(f: RatFunc, roc: Abscissa) -> TransformImage {
        TransformImage {
            rational: f,
            specials: BTreeMap::new(),
            roc,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.specials.is_empty()
    }

    pub fn as_rational(&self) -> Option<RationalR> {
        self.is_rational().then(|| RationalR::new(self.rational.clone()))
    }

    pub fn add(&self, o: &TransformImage) -> TransformImage {
        let mut specials = self.specials.clone();
        for (sp, c) in &o.specials {
            let v = specials.get(sp).cloned().unwrap_or_default() + c;
            if v.is_zero() {
                specials.remove(sp);
            } else {
                specials.insert(sp.clone(), v);
            }
        }
        TransformImage {
            rational: self.rational.add(&o.rational),
            specials,
            roc: self.roc.clone().max(o.roc.clone()),
        }
    }

    pub fn scale(&self, c: &Coeff) -> TransformImage {
        if c.is_zero() {
            return TransformImage::zero();
        }
        TransformImage {
            rational: self.rational.scale(c),
            specials: self.specials.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
            roc: self.roc.clone(),
        }
    }

    /// Canonical image form in the Shehu convention.
    pub fn form(&self) -> ImageForm {
        let mut out = ImageForm::rational(self.rational.clone());
        for (sp, c) in &self.specials {
            out = out.add(&special_form(sp).scale(&RatFunc::constant(c.clone())));
        }
        out
    }

    /// The image in another convention as a closed-form expression.
    pub fn convert(&self, target: Target) -> Result<Expr> {
        Ok(self.form().convert(target)?.to_expr(target))
    }

    /// Expanded form, e.g. `u/(s + u)`.
    pub fn expanded(&self) -> String {
        format(&self.form().to_expr(Target::Shehu))
    }

    /// Homogenized form, e.g. `1/(r + 1), r = s/u`.
    pub fn homogenized(&self) -> String {
        format!("{}, r = s/u", format(&self.form().to_expr_r()))
    }

    /// `"valid for s/u > 3"`.
    pub fn roc_text(&self) -> String {
        match &self.roc {
            Abscissa::NegInfinity => "valid for all s/u".into(),
            Abscissa::Finite(c) => format!("valid for s/u > {c}"),
        }
    }

    /// Value at real `r = s/u` inside the region of convergence.
    pub fn eval_r(&self, r: f64) -> f64 {
        let mut acc = self.rational.eval_f64(r);
        for (sp, c) in &self.specials {
            acc += c.to_f64() * special_value(sp, r);
        }
        acc
    }

    pub fn eval(&self, s: f64, u: f64) -> f64 {
        self.eval_r(s / u)
    }

    /// Value at complex `r` for rational and delta images.
    pub fn eval_complex(&self, r: Complex64) -> Option<Complex64> {
        let mut acc = self.rational.eval_complex(r);
        for (sp, c) in &self.specials {
            match sp {
                SpecialAtom::Delta(a) => acc += c.to_f64() * (-crate::coeff::q_to_f64(a) * r).exp(),
                _ => return None,
            }
        }
        Some(acc)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "image": self.expanded(),
            "homogenized": self.homogenized(),
            "roc": self.roc.to_string(),
            "errata": [],
        })
    }
}

impl fmt::Display for TransformImage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, {}", self.expanded(), self.roc_text())
    }
}

fn special_form(sp: &SpecialAtom) -> ImageForm {
    let x = RatFunc::var();
    let build = || -> Result<ImageForm> {
        Ok(match sp {
            SpecialAtom::Delta(a) => ImageForm::func_of(Func::Exp, &x.scale(&-Coeff::from(a.clone())))?,
            SpecialAtom::BesselJ0(a) | SpecialAtom::BesselI0(a) => {
                let a2 = a.square();
                let a2 = if matches!(sp, SpecialAtom::BesselI0(_)) { -a2 } else { a2 };
                let rad = RatFunc::from_poly(PolyR::new(vec![a2, Coeff::zero(), Coeff::one()]));
                ImageForm::func_of(Func::Sqrt, &rad)?.pow(-1)?
            }
            SpecialAtom::SinIntegral(a) => {
                ImageForm::func_of(Func::Atan, &x.recip().scale(a))?.scale(&x.recip())
            }
            SpecialAtom::CosIntegral(a) => {
                let arg = RatFunc::from_poly(PolyR::new(vec![a.square(), Coeff::zero(), Coeff::one()]))
                    .scale(&a.square().recip());
                ImageForm::func_of(Func::Log, &arg)?.scale(&x.recip().scale(&Coeff::from_ratio(-1, 2)))
            }
            SpecialAtom::ExpIntegral(a) => {
                let arg = RatFunc::from_poly(PolyR::new(vec![-a.clone(), Coeff::one()])).scale(&a.recip());
                ImageForm::func_of(Func::Log, &arg)?.scale(&x.recip().neg())
            }
        })
    };
    build().expect("special images are well formed")
}

fn special_value(sp: &SpecialAtom, r: f64) -> f64 {
    let rate = sp.rate().map(|a| a.to_f64()).unwrap_or(0.0);
    match sp {
        SpecialAtom::Delta(a) => (-crate::coeff::q_to_f64(a) * r).exp(),
        SpecialAtom::BesselJ0(_) => 1.0 / (r * r + rate * rate).sqrt(),
        SpecialAtom::BesselI0(_) => 1.0 / (r * r - rate * rate).sqrt(),
        SpecialAtom::SinIntegral(_) => (rate / r).atan() / r,
        SpecialAtom::CosIntegral(_) => -((r * r + rate * rate) / (rate * rate)).ln() / (2.0 * r),
        SpecialAtom::ExpIntegral(_) => -((r - rate) / rate).ln() / r,
    }
}

/// Laplace image of one shape `tⁿ e^{at} trig(bt)` in `r`.
pub fn shape_image(sh: &Shape) -> RatFunc {
    let n = sh.power;
    let nf = Coeff::from(factorial(n));
    let a = &sh.rate;
    match &sh.trig {
        Trig::None => RatFunc::new(PolyR::constant(nf), PolyR::linear(a).pow(n + 1)),
        Trig::Sin(b) | Trig::Cos(b) => {
            // (y + ib)^{n+1} with y = r - a, split into real and imaginary parts.
            let m = n + 1;
            let mut re = vec![Coeff::zero(); m as usize + 1];
            let mut im = vec![Coeff::zero(); m as usize + 1];
            let mut binom = Coeff::one();
            let mut bk = Coeff::one();
            for k in 0..=m {
                let term = &binom * &bk;
                let deg = (m - k) as usize;
                match k % 4 {
                    0 => re[deg] = term,
                    1 => im[deg] = term,
                    2 => re[deg] = -term,
                    _ => im[deg] = -term,
                }
                binom = binom * Coeff::from_int((m - k) as i64) / Coeff::from_int(k as i64 + 1);
                bk = bk * b;
            }
            let num = if matches!(sh.trig, Trig::Cos(_)) { PolyR::new(re) } else { PolyR::new(im) };
            let den = PolyR::new(vec![b.square(), Coeff::zero(), Coeff::one()]).pow(m);
            let shift = -a;
            RatFunc::new(num.scale(&nf).shift_arg(&shift), den.shift_arg(&shift))
        }
    }
}

/// Forward transform of a function of `t` alone.
pub fn transform(v: &AtomSum) -> Result<TransformImage> {
    if v.depends_on_x() {
        return Err(Error::NonTransformable(
            "the function depends on x; transform it mode by mode".into(),
        ));
    }
    let mut out = TransformImage::zero();
    for (t, _, c) in v.terms() {
        let img = TransformImage::from_rational(shape_image(t).scale(c), Abscissa::Finite(t.rate.clone()));
        out = out.add(&img);
    }
    for (sp, c) in v.specials() {
        out = out.add(&transform_special(sp).scale(c));
    }
    out.roc = exponential_order(v).order;
    Ok(out)
}

/// Parses and transforms a time-domain expression.
pub fn transform_expr(e: &Expr) -> Result<TransformImage> {
    transform(&crate::expr::canonicalize(e)?)
}

/// Closed form of a single special atom.
pub fn transform_special(sp: &SpecialAtom) -> TransformImage {
    let roc = special_order(sp);
    match sp {
        SpecialAtom::Delta(a) if a.is_zero() => {
            TransformImage::from_rational(RatFunc::constant(Coeff::one()), Abscissa::NegInfinity)
        }
        _ => TransformImage {
            rational: RatFunc::zero(),
            specials: BTreeMap::from([(sp.clone(), Coeff::one())]),
            roc,
        },
    }
}

fn special_order(sp: &SpecialAtom) -> Abscissa {
    match sp {
        SpecialAtom::Delta(_) => Abscissa::NegInfinity,
        SpecialAtom::BesselI0(a) | SpecialAtom::ExpIntegral(a) => Abscissa::Finite(a.clone()),
        _ => Abscissa::zero(),
    }
}

/// Infimum exponential order; it is also the abscissa of convergence.
pub fn exponential_order(v: &AtomSum) -> GrowthBound {
    let mut order = Abscissa::NegInfinity;
    let mut witness = "zero function".to_string();
    for (t, x, c) in v.terms() {
        let a = Abscissa::Finite(t.rate.clone());
        if a > order {
            order = a;
            witness = format!("term {}", format(&crate::expr::Atom { coeff: c.clone(), t: t.clone(), x: x.clone() }.to_expr()));
        }
    }
    for (sp, _) in v.specials() {
        let a = special_order(sp);
        if a > order {
            order = a;
            witness = format!("special atom {}", sp.name());
        }
    }
    if let Abscissa::Finite(c) = &order {
        if c.is_zero() {
            witness = format!("{witness}: polynomial times bounded factors");
        }
    }
    GrowthBound { order, witness }
}

/// `rⁿ F(r) - Σ_k r^{n-1-k} v^{(k)}(0)`.
pub fn derivative_image(n: usize, v: &TransformImage, inits: &[Coeff]) -> Result<TransformImage> {
    if n == 0 || inits.len() != n {
        return Err(Error::Arity {
            expected: n.max(1),
            got: inits.len(),
        });
    }
    if !v.is_rational() {
        return Err(Error::UnsupportedAtom(
            "the derivative theorem is applied to rational images only".into(),
        ));
    }
    let rn = RatFunc::from_poly(PolyR::monomial(Coeff::one(), n));
    let mut poly = PolyR::zero();
    for (k, c) in inits.iter().enumerate() {
        poly = poly.add(&PolyR::monomial(c.clone(), n - 1 - k));
    }
    let f = v.rational.mul(&rn).sub(&RatFunc::from_poly(poly));
    Ok(TransformImage::from_rational(f, v.roc.clone()))
}

/// Image of `v(βt)`: `F(r/β)/β`.
pub fn change_of_scale(v: &TransformImage, beta: &Coeff) -> Result<TransformImage> {
    if !beta.is_positive() {
        return Err(Error::NonPositiveScale(beta.to_string()));
    }
    let rational = v.rational.scale_arg(&beta.recip()).scale(&beta.recip());
    let mut specials = BTreeMap::new();
    for (sp, c) in &v.specials {
        let (sp2, c2) = match sp {
            SpecialAtom::Delta(a) => {
                // δ(βt - a) = δ(t - a/β)/β
                let b = beta.as_rational().ok_or_else(|| {
                    Error::NonTransformable("delta shift scaled by an irrational factor".into())
                })?;
                (SpecialAtom::Delta(a / &b), c / beta)
            }
            other => {
                let rate = other.rate().expect("non-delta special has a rate");
                (other.with_rate(rate * beta), c.clone())
            }
        };
        specials.insert(sp2, c2);
    }
    let roc = match &v.roc {
        Abscissa::NegInfinity => Abscissa::NegInfinity,
        Abscissa::Finite(a) => Abscissa::Finite(a * beta),
    };
    Ok(TransformImage { rational, specials, roc })
}

/// `convert` as a free function.
pub fn convert(v: &TransformImage, target: Target) -> Result<Expr> {
    v.convert(target)
}
