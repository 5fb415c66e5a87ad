//! Reduced rational functions `N(r)/D(r)` over `Q(π)`.

use std::cmp::Ordering;
use std::fmt;

use num_complex::Complex64;

use crate::coeff::Coeff;
use crate::poly::PolyR;

/// `num/den` with `den` monic and `gcd(num, den) = 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: PolyR,
    den: PolyR,
}

impl RatFunc {
    pub fn new(num: PolyR, den: PolyR) -> RatFunc {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let (lead, den) = den.monic();
        RatFunc {
            num: num.scale(&lead.recip()),
            den,
        }
    }

    pub fn zero() -> RatFunc {
        RatFunc {
            num: PolyR::zero(),
            den: PolyR::one(),
        }
    }

    pub fn constant(c: Coeff) -> RatFunc {
        RatFunc::from_poly(PolyR::constant(c))
    }

    pub fn from_poly(p: PolyR) -> RatFunc {
        RatFunc { num: p, den: PolyR::one() }
    }

    /// `r`.
    pub fn var() -> RatFunc {
        RatFunc::from_poly(PolyR::x())
    }

    pub fn numer(&self) -> &PolyR {
        &self.num
    }

    pub fn denom(&self) -> &PolyR {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Coeff> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    /// Strictly proper: `deg num < deg den`.
    pub fn is_proper(&self) -> bool {
        self.num.is_zero() || self.num.deg() < self.den.deg()
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        let a = self.den.div_exact(&g).expect("gcd divides");
        let b = o.den.div_exact(&g).expect("gcd divides");
        RatFunc::new(self.num.mul(&b).add(&o.num.mul(&a)), a.mul(&o.den))
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scale(&self, c: &Coeff) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn recip(&self) -> RatFunc {
        assert!(!self.is_zero(), "reciprocal of the zero rational function");
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> RatFunc {
        self.mul(&o.recip())
    }

    pub fn pow(&self, n: i32) -> RatFunc {
        let base = if n < 0 { self.recip() } else { self.clone() };
        let e = n.unsigned_abs();
        RatFunc {
            num: base.num.pow(e),
            den: base.den.pow(e),
        }
    }

    /// `d/dr` by the quotient rule.
    pub fn derivative(&self) -> RatFunc {
        let n = self.num.derivative().mul(&self.den).sub(&self.num.mul(&self.den.derivative()));
        RatFunc::new(n, self.den.mul(&self.den))
    }

    /// `F(r + a)`.
    pub fn shift_arg(&self, a: &Coeff) -> RatFunc {
        RatFunc::new(self.num.shift_arg(a), self.den.shift_arg(a))
    }

    /// `F(k·r)`.
    pub fn scale_arg(&self, k: &Coeff) -> RatFunc {
        RatFunc::new(self.num.scale_arg(k), self.den.scale_arg(k))
    }

    /// `F(1/r)`.
    pub fn reciprocal_arg(&self) -> RatFunc {
        let (dn, dd) = (self.num.deg(), self.den.deg());
        let n = self.num.reversed();
        let d = self.den.reversed();
        // N(1/r)/D(1/r) = r^{dd - dn} rev(N)/rev(D)
        if dd >= dn {
            RatFunc::new(n.shift_up(dd - dn), d)
        } else {
            RatFunc::new(n, d.shift_up(dn - dd))
        }
    }

    pub fn eval(&self, r: &Coeff) -> Option<Coeff> {
        let d = self.den.eval(r);
        (!d.is_zero()).then(|| self.num.eval(r) / d)
    }

    pub fn eval_f64(&self, r: f64) -> f64 {
        self.num.eval_f64(r) / self.den.eval_f64(r)
    }

    pub fn eval_complex(&self, r: Complex64) -> Complex64 {
        self.num.eval_complex(r) / self.den.eval_complex(r)
    }
}

impl PartialOrd for RatFunc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RatFunc {
    fn cmp(&self, other: &Self) -> Ordering {
        self.den.cmp(&other.den).then_with(|| self.num.cmp(&other.num))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}
