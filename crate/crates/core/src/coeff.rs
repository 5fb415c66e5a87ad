//! Exact coefficients in `Q(π)`.
//!
//! π is treated as a transcendental generator: a coefficient is a reduced
//! ratio of polynomials in π with rational coefficients. The overwhelmingly
//! common case is a plain rational or a monomial `q·π^k`; general ratios
//! appear when modal PDE poles such as `-4π²` meet rational poles in one
//! partial-fraction system.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::{rational_to_f64, Poly};

pub type Rational = BigRational;

/// Polynomial in π with rational coefficients.
pub type PiPoly = Poly<Rational>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

fn pipoly_sqrt(p: &PiPoly) -> Option<PiPoly> {
    if p.is_zero() {
        return Some(PiPoly::zero());
    }
    let deg = p.deg();
    if deg % 2 == 1 {
        return None;
    }
    let n = deg / 2;
    let top = rational_sqrt(&p.lead())?;
    let mut q = vec![Rational::zero(); n + 1];
    q[n] = top.clone();
    let two_top = &top * int(2);
    for k in (0..n).rev() {
        let mut acc = p.coeff(n + k);
        for i in (k + 1)..n {
            let j = n + k - i;
            if j > k && j < n {
                acc -= &q[i] * &q[j];
            }
        }
        q[k] = acc / &two_top;
    }
    let q = Poly::new(q);
    (q.mul(&q) == *p).then_some(q)
}

/// Element of `Q(π)`: `num/den` with `den` monic and coprime to `num`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Coeff {
    num: PiPoly,
    den: PiPoly,
}

impl Coeff {
    pub fn new(num: PiPoly, den: PiPoly) -> Coeff {
        assert!(!den.is_zero(), "coefficient with zero denominator");
        if num.is_zero() {
            return Coeff::zero();
        }
        if den.is_constant() {
            let d = den.lead();
            if d.is_one() {
                return Coeff { num, den };
            }
            return Coeff {
                num: num.scale(&(Rational::one() / d)),
                den: PiPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd"), den.div_exact(&g).expect("gcd"))
        };
        let (lead, den) = den.monic();
        Coeff {
            num: num.scale(&(Rational::one() / lead)),
            den,
        }
    }

    pub fn zero() -> Coeff {
        Coeff {
            num: PiPoly::zero(),
            den: PiPoly::one(),
        }
    }

    pub fn one() -> Coeff {
        Coeff::from(int(1))
    }

    pub fn from_int(n: i64) -> Coeff {
        Coeff::from(int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Coeff {
        Coeff::from(rat(n, d))
    }

    pub fn pi() -> Coeff {
        Coeff::pi_power(1)
    }

    /// `π^k` for any integer `k`.
    pub fn pi_power(k: i32) -> Coeff {
        let mono = PiPoly::monomial(int(1), k.unsigned_abs() as usize);
        if k >= 0 {
            Coeff::new(mono, PiPoly::one())
        } else {
            Coeff::new(PiPoly::one(), mono)
        }
    }

    /// `q·π^k`.
    pub fn monomial(q: Rational, k: i32) -> Coeff {
        Coeff::from(q) * Coeff::pi_power(k)
    }

    pub fn numer(&self) -> &PiPoly {
        &self.num
    }

    pub fn denom(&self) -> &PiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.num.is_constant() && self.den.is_one()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.num.coeff(0))
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    /// Decomposes `q·π^k`; `None` for general elements of `Q(π)`.
    pub fn as_monomial(&self) -> Option<(Rational, i32)> {
        if self.is_zero() {
            return Some((Rational::zero(), 0));
        }
        let single = |p: &PiPoly| -> Option<(Rational, usize)> {
            let nz: Vec<usize> = (0..p.coeffs().len()).filter(|&k| !p.coeffs()[k].is_zero()).collect();
            (nz.len() == 1).then(|| (p.coeffs()[nz[0]].clone(), nz[0]))
        };
        let (qn, en) = single(&self.num)?;
        let (qd, ed) = single(&self.den)?;
        Some((qn / qd, en as i32 - ed as i32))
    }

    pub fn to_f64(&self) -> f64 {
        self.num.eval_f64(PI) / self.den.eval_f64(PI)
    }

    /// Sign of the real number this coefficient denotes.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if let Some((q, _)) = self.as_monomial() {
            return if q.is_positive() { 1 } else { -1 };
        }
        if self.to_f64() > 0.0 {
            1
        } else {
            -1
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Coeff {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Coeff {
        assert!(!self.is_zero(), "reciprocal of zero");
        Coeff::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, n: i32) -> Coeff {
        let base = if n < 0 { self.recip() } else { self.clone() };
        let e = n.unsigned_abs();
        Coeff::new(base.num.pow(e), base.den.pow(e))
    }

    /// Positive square root when it lies in `Q(π)`.
    pub fn sqrt(&self) -> Option<Coeff> {
        if self.is_negative() {
            return None;
        }
        if self.is_zero() {
            return Some(Coeff::zero());
        }
        let n = pipoly_sqrt(&self.num)?;
        let d = pipoly_sqrt(&self.den)?;
        let c = Coeff::new(n, d);
        if c.square() != *self {
            return None;
        }
        Some(c.abs())
    }

    pub fn square(&self) -> Coeff {
        self * self
    }

    /// Maximal power of π dividing the coefficient (negative for poles at π=0).
    pub fn pi_valuation(&self) -> i32 {
        self.num.valuation() as i32 - self.den.valuation() as i32
    }
}

impl From<Rational> for Coeff {
    fn from(q: Rational) -> Coeff {
        Coeff::new(PiPoly::constant(q), PiPoly::one())
    }
}

impl From<i64> for Coeff {
    fn from(n: i64) -> Coeff {
        Coeff::from_int(n)
    }
}

impl Default for Coeff {
    fn default() -> Self {
        Coeff::zero()
    }
}

impl PartialOrd for Coeff {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Rationals are ordered numerically and sort before genuinely π-dependent
/// values, which are ordered structurally. Used for deterministic keys, not
/// for numeric comparison in general.
impl Ord for Coeff {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => a.cmp(&b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => {
                let (a, b) = (self.to_f64(), other.to_f64());
                a.partial_cmp(&b)
                    .unwrap_or(Ordering::Equal)
                    .then_with(|| self.den.cmp(&other.den))
                    .then_with(|| self.num.cmp(&other.num))
            }
        }
    }
}

fn add_coeff(a: &Coeff, b: &Coeff) -> Coeff {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if a.den == b.den {
        return Coeff::new(a.num.add(&b.num), a.den.clone());
    }
    Coeff::new(a.num.mul(&b.den).add(&b.num.mul(&a.den)), a.den.mul(&b.den))
}

fn mul_coeff(a: &Coeff, b: &Coeff) -> Coeff {
    if a.is_zero() || b.is_zero() {
        return Coeff::zero();
    }
    if a.den.is_one() && b.den.is_one() {
        return Coeff {
            num: a.num.mul(&b.num),
            den: PiPoly::one(),
        };
    }
    Coeff::new(a.num.mul(&b.num), a.den.mul(&b.den))
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $f:expr) => {
        impl<'a> $tr<&'a Coeff> for &'a Coeff {
            type Output = Coeff;
            fn $m(self, rhs: &'a Coeff) -> Coeff {
                $f(self, rhs)
            }
        }
        impl $tr<Coeff> for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: Coeff) -> Coeff {
                $f(&self, &rhs)
            }
        }
        impl<'a> $tr<&'a Coeff> for Coeff {
            type Output = Coeff;
            fn $m(self, rhs: &'a Coeff) -> Coeff {
                $f(&self, rhs)
            }
        }
        impl<'a> $tr<Coeff> for &'a Coeff {
            type Output = Coeff;
            fn $m(self, rhs: Coeff) -> Coeff {
                $f(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_coeff);
forward_binop!(Sub, sub, |a: &Coeff, b: &Coeff| add_coeff(a, &-b));
forward_binop!(Mul, mul, mul_coeff);
forward_binop!(Div, div, |a: &Coeff, b: &Coeff| mul_coeff(a, &b.recip()));

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

impl std::iter::Sum for Coeff {
    fn sum<I: Iterator<Item = Coeff>>(iter: I) -> Coeff {
        iter.fold(Coeff::zero(), |a, b| a + b)
    }
}

impl crate::poly::Scalar for Coeff {
    fn zero() -> Self {
        Coeff::zero()
    }
    fn one() -> Self {
        Coeff::one()
    }
    fn is_zero(&self) -> bool {
        Coeff::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Coeff::is_one(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn over(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn from_i64(n: i64) -> Self {
        Coeff::from_int(n)
    }
    fn to_f64(&self) -> f64 {
        Coeff::to_f64(self)
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expr())
    }
}

/// Helper for the rational fast path of `to_f64`.
pub fn q_to_f64(q: &Rational) -> f64 {
    rational_to_f64(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomials_round_trip() {
        let c = Coeff::monomial(rat(3, 4), -2);
        assert_eq!(c.as_monomial(), Some((rat(3, 4), -2)));
        assert!((c.to_f64() - 0.75 / (PI * PI)).abs() < 1e-15);
        assert_eq!(c.pi_valuation(), -2);
    }

    #[test]
    fn field_arithmetic_reduces() {
        // 1/(4π² - 1) · (2π - 1) = 1/(2π + 1)
        let four_pi2 = Coeff::monomial(int(4), 2);
        let a = Coeff::one() / (&four_pi2 - Coeff::one());
        let b = Coeff::monomial(int(2), 1) - Coeff::one();
        let c = &a * &b;
        assert_eq!(c, Coeff::one() / (Coeff::monomial(int(2), 1) + Coeff::one()));
        assert_eq!(c.denom().deg(), 1);
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(Coeff::monomial(int(4), 2).sqrt(), Some(Coeff::monomial(int(2), 1)));
        assert_eq!(Coeff::from_ratio(9, 4).sqrt(), Some(Coeff::from_ratio(3, 2)));
        assert_eq!(Coeff::from_int(3).sqrt(), None);
        assert_eq!(Coeff::from_int(-4).sqrt(), None);
        let p = Coeff::pi() + Coeff::one();
        assert_eq!(p.square().sqrt(), Some(p));
        let m = Coeff::pi() - Coeff::from_int(5); // negative, |π - 5| is the root
        assert_eq!(m.square().sqrt(), Some(-m));
    }

    #[test]
    fn ordering_is_numeric_on_rationals() {
        assert!(Coeff::from_int(-3) < Coeff::from_ratio(1, 2));
        assert!(Coeff::from_int(100) < Coeff::pi());
    }
}
