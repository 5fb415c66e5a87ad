//! Exact factorisation of denominators over `Q(π)` into linear factors and
//! irreducible quadratics `(r - β)² + α²`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coeff::{Coeff, PiPoly, Rational};
use crate::error::{Error, Result};
use crate::poly::{Poly, PolyR};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FactorKind {
    /// `r - root`.
    Linear { root: Coeff },
    /// `(r - center)² + freq²` with `freq > 0`.
    Quadratic { center: Coeff, freq: Coeff },
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Factor {
    pub kind: FactorKind,
    pub multiplicity: u32,
}

impl FactorKind {
    /// The monic polynomial this factor stands for.
    pub fn poly(&self) -> PolyR {
        match self {
            FactorKind::Linear { root } => PolyR::linear(root),
            FactorKind::Quadratic { center, freq } => {
                let shifted = PolyR::linear(center);
                shifted.mul(&shifted).add(&PolyR::constant(freq.square()))
            }
        }
    }
}

impl Factor {
    pub fn poly(&self) -> PolyR {
        self.kind.poly()
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FactorKind::Linear { root } => write!(f, "(r - ({root}))")?,
            FactorKind::Quadratic { center, freq } => write!(f, "((r - ({center}))^2 + ({freq})^2)")?,
        }
        if self.multiplicity > 1 {
            write!(f, "^{}", self.multiplicity)?;
        }
        Ok(())
    }
}

/// Complete factorisation of `p` (leading coefficient dropped).
///
/// Rational linear factors come from an exhaustive rational-root search;
/// quadratic factors of higher-degree remainders are located numerically and
/// confirmed by exact division. Coefficients involving π are handled by
/// splitting off the π-free content and by the substitution `r = π^w·y`
/// for quasi-homogeneous remainders.
pub fn factor_denominator(p: &PolyR) -> Result<Vec<Factor>> {
    if p.is_zero() {
        return Err(Error::InvalidDomain("cannot factor the zero polynomial".into()));
    }
    let (_, mut m) = p.monic();
    let mut out = Vec::new();
    let v = m.valuation();
    if v > 0 {
        out.push(Factor {
            kind: FactorKind::Linear { root: Coeff::zero() },
            multiplicity: v as u32,
        });
        m = m.shift_down(v);
    }
    for (i, s) in m.squarefree() {
        for kind in factor_squarefree(&s)? {
            out.push(Factor { kind, multiplicity: i });
        }
    }
    out.sort();
    Ok(out)
}

fn factor_squarefree(s: &PolyR) -> Result<Vec<FactorKind>> {
    let (_, s) = s.monic();
    let d = s.deg();
    if d == 0 {
        return Ok(Vec::new());
    }
    if d == 1 {
        return Ok(vec![FactorKind::Linear { root: -s.coeff(0) }]);
    }
    if let Some(q) = rational_poly(&s) {
        return factor_over_q(&q).map(|fs| fs.into_iter().map(|f| f.lift(&Coeff::one())).collect());
    }
    // π-free content shared by all graded slices.
    let g = pi_free_content(&s);
    if g.deg() > 0 {
        let mut out = factor_squarefree(&g.map(|q| Coeff::from(q.clone())))?;
        let rest = s.div_exact(&g.map(|q| Coeff::from(q.clone()))).expect("content divides");
        out.extend(factor_squarefree(&rest)?);
        return Ok(out);
    }
    if let Some((w, q)) = quasi_homogeneous(&s) {
        let scale = Coeff::pi_power(w);
        return factor_over_q(&q).map(|fs| fs.into_iter().map(|f| f.lift(&scale)).collect());
    }
    if d == 2 {
        return quadratic(&s.coeff(1), &s.coeff(0), &s);
    }
    Err(Error::IrreducibleHighDegree(d))
}

/// Classifies monic `r² + b r + c` with no root yet known.
fn quadratic(b: &Coeff, c: &Coeff, p: &PolyR) -> Result<Vec<FactorKind>> {
    let center = -(b / Coeff::from_int(2));
    let disc = &center * &center - c;
    if disc.is_zero() {
        return Ok(vec![FactorKind::Linear { root: center.clone() }, FactorKind::Linear { root: center }]);
    }
    if disc.is_positive() {
        let root = disc.sqrt().ok_or_else(|| Error::IrrationalRoots(poly_text(p)))?;
        return Ok(vec![
            FactorKind::Linear { root: &center - &root },
            FactorKind::Linear { root: &center + &root },
        ]);
    }
    let freq = (-disc).sqrt().ok_or_else(|| Error::IrrationalFrequency(poly_text(p)))?;
    Ok(vec![FactorKind::Quadratic { center, freq }])
}

fn poly_text(p: &PolyR) -> String {
    let terms: Vec<String> = (0..=p.deg())
        .rev()
        .filter(|&k| !p.coeff(k).is_zero())
        .map(|k| match k {
            0 => format!("({})", p.coeff(0)),
            1 => format!("({})*r", p.coeff(1)),
            _ => format!("({})*r^{k}", p.coeff(k)),
        })
        .collect();
    terms.join(" + ")
}

fn rational_poly(p: &PolyR) -> Option<Poly<Rational>> {
    let cs: Option<Vec<Rational>> = p.coeffs().iter().map(|c| c.as_rational()).collect();
    cs.map(Poly::new)
}

/// `gcd` over `Q` of the slices `P_j` in `p = c · Σ_j π^j P_j(r)`.
fn pi_free_content(p: &PolyR) -> Poly<Rational> {
    // Clear π-denominators so that every coefficient is a polynomial in π.
    let mut l = PiPoly::one();
    for c in p.coeffs() {
        let g = l.gcd(c.denom());
        l = l.mul(&c.denom().div_exact(&g).expect("gcd divides"));
    }
    let lc = Coeff::new(l, PiPoly::one());
    let nums: Vec<PiPoly> = p.coeffs().iter().map(|c| (c * &lc).numer().clone()).collect();
    let top = nums.iter().map(|n| n.coeffs().len()).max().unwrap_or(0);
    let mut g: Option<Poly<Rational>> = None;
    for j in 0..top {
        let slice = Poly::new(nums.iter().map(|n| n.coeff(j)).collect());
        if slice.is_zero() {
            continue;
        }
        g = Some(match g {
            None => slice.monic().1,
            Some(acc) => acc.gcd(&slice),
        });
    }
    g.unwrap_or_else(Poly::one)
}

/// Monic `p(r) = π^{wd} q(r/π^w)` with `q` rational.
fn quasi_homogeneous(p: &PolyR) -> Option<(i32, Poly<Rational>)> {
    let d = p.deg() as i32;
    let mut w: Option<i32> = None;
    let mut qs = Vec::with_capacity(p.coeffs().len());
    for (k, c) in p.coeffs().iter().enumerate() {
        let (q, e) = c.as_monomial()?;
        if !q.is_zero() && (k as i32) < d {
            // e = w·(d - k)
            let span = d - k as i32;
            if e % span != 0 {
                return None;
            }
            match w {
                None => w = Some(e / span),
                Some(w0) if w0 != e / span => return None,
                _ => {}
            }
        }
        qs.push(q);
    }
    Some((w.unwrap_or(0), Poly::new(qs)))
}

/// Factor of a rational polynomial found over `Q`.
enum QFactor {
    Root(Rational),
    Quadratic(Rational, Rational),
}

impl QFactor {
    /// Maps a factor of `q(y)` to one of `p(r)` under `r = scale·y`.
    fn lift(self, scale: &Coeff) -> FactorKind {
        match self {
            QFactor::Root(a) => FactorKind::Linear { root: scale * Coeff::from(a) },
            QFactor::Quadratic(b, c) => {
                let center = Coeff::from(b);
                let freq = Coeff::from(c);
                FactorKind::Quadratic {
                    center: scale * center,
                    freq: scale * freq,
                }
            }
        }
    }
}

/// Factors a square-free rational polynomial into rational roots and
/// quadratics `(y - β)² + α²` with rational `β, α`.
fn factor_over_q(p: &Poly<Rational>) -> Result<Vec<QFactor>> {
    let (_, mut p) = p.monic();
    let mut out = Vec::new();
    let v = p.valuation();
    if v > 0 {
        out.push(QFactor::Root(Rational::zero()));
        p = p.shift_down(v);
    }
    for root in rational_roots(&p) {
        out.push(QFactor::Root(root.clone()));
        p = p.div_exact(&Poly::linear(&root)).expect("root divides");
    }
    let mut pending = vec![p];
    while let Some(p) = pending.pop() {
        match p.deg() {
            0 => {}
            1 => out.push(QFactor::Root(-p.coeff(0) / p.coeff(1))),
            2 => out.push(rational_quadratic(&p)?),
            d => {
                let (a, b) = split_quadratic(&p).ok_or(Error::IrreducibleHighDegree(d))?;
                pending.push(a);
                pending.push(b);
            }
        }
    }
    Ok(out)
}

fn rational_quadratic(p: &Poly<Rational>) -> Result<QFactor> {
    let (_, p) = p.monic();
    let center = -p.coeff(1) / Rational::from_integer(2.into());
    let disc = &center * &center - p.coeff(0);
    let lift = || p.map(|q| Coeff::from(q.clone()));
    if !disc.is_negative() {
        // Rational roots were already removed, so these are irrational.
        return Err(Error::IrrationalRoots(poly_text(&lift())));
    }
    let freq = crate::coeff::rational_sqrt(&-disc).ok_or_else(|| Error::IrrationalFrequency(poly_text(&lift())))?;
    Ok(QFactor::Quadratic(center, freq))
}

const MAX_CANDIDATES: usize = 20_000;

/// All rational roots (each once) by the rational-root theorem, with a
/// numeric fallback when the divisor lattice is too large.
fn rational_roots(p: &Poly<Rational>) -> Vec<Rational> {
    if p.deg() == 0 {
        return Vec::new();
    }
    let ints = p.primitive_integer();
    let a0 = ints[0].abs();
    let an = ints[ints.len() - 1].abs();
    let mut roots = Vec::new();
    let found = |r: Rational, roots: &mut Vec<Rational>| {
        if !roots.contains(&r) && p.eval(&r).is_zero() {
            roots.push(r);
        }
    };
    match (divisors(&a0), divisors(&an)) {
        (Some(ps), Some(qs)) if ps.len() * qs.len() * 2 <= MAX_CANDIDATES => {
            for q in &qs {
                for n in &ps {
                    if n.gcd(q).is_one() {
                        let r = Rational::new(n.clone(), q.clone());
                        found(r.clone(), &mut roots);
                        found(-r, &mut roots);
                    }
                }
            }
        }
        _ => {
            // A rational root n/q has q | a_n, so a_n·x is an integer.
            let lead = an.to_f64().unwrap_or(f64::MAX);
            for z in numeric_roots(p) {
                if z.im.abs() > 1e-6 * (1.0 + z.re.abs()) {
                    continue;
                }
                let k = (z.re * lead).round();
                if let Some(k) = BigInt::from_f64_checked(k) {
                    found(Rational::new(k, an.clone()), &mut roots);
                }
            }
        }
    }
    roots.sort();
    roots
}

trait FromF64Checked: Sized {
    fn from_f64_checked(x: f64) -> Option<Self>;
}

impl FromF64Checked for BigInt {
    fn from_f64_checked(x: f64) -> Option<BigInt> {
        num_traits::FromPrimitive::from_f64(x)
    }
}

/// Positive divisors, or `None` when trial division cannot finish cheaply.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    if n.is_zero() {
        return None;
    }
    let mut m = n.abs();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(100_000);
    while &p * &p <= m {
        if p > limit {
            return None;
        }
        let mut e = 0;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e > 0 {
            primes.push((p.clone(), e));
        }
        p += 1;
    }
    if !m.is_one() {
        primes.push((m, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut x = d.clone();
            for _ in 0..=e {
                next.push(x.clone());
                x *= &p;
            }
        }
        divs = next;
        if divs.len() > MAX_CANDIDATES {
            return None;
        }
    }
    Some(divs)
}

/// Splits a rational polynomial with no rational roots as `quadratic · rest`
/// by pairing numeric roots and confirming with exact division.
fn split_quadratic(p: &Poly<Rational>) -> Option<(Poly<Rational>, Poly<Rational>)> {
    let roots = numeric_roots(p);
    let ints = p.primitive_integer();
    let leads = divisors(&ints[ints.len() - 1].abs()).unwrap_or_else(|| vec![BigInt::one()]);
    for i in 0..roots.len() {
        for j in (i + 1)..roots.len() {
            let (a, b) = (roots[i], roots[j]);
            let sum = a + b;
            let prod = a * b;
            if sum.im.abs() > 1e-6 * (1.0 + sum.norm()) || prod.im.abs() > 1e-6 * (1.0 + prod.norm()) {
                continue;
            }
            // Gauss: an integer factor ℓy² + By + C has ℓ | a_n.
            for l in &leads {
                let lf = l.to_f64().unwrap_or(1.0);
                let bb = (-sum.re * lf).round();
                let cc = (prod.re * lf).round();
                let (Some(bb), Some(cc)) = (BigInt::from_f64_checked(bb), BigInt::from_f64_checked(cc)) else {
                    continue;
                };
                let cand = Poly::new(vec![
                    Rational::from_integer(cc),
                    Rational::from_integer(bb),
                    Rational::from_integer(l.clone()),
                ]);
                if let Some(rest) = p.div_exact(&cand) {
                    return Some((cand, rest));
                }
            }
        }
    }
    None
}

/// All complex roots by Aberth–Ehrlich iteration with Newton polishing.
fn numeric_roots(p: &Poly<Rational>) -> Vec<Complex64> {
    let n = p.deg();
    if n == 0 {
        return Vec::new();
    }
    let lead = p.lead().to_f64_lossy();
    let a: Vec<f64> = p.coeffs().iter().map(|c| c.to_f64_lossy() / lead).collect();
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for c in a.iter().rev() {
            dv = dv * z + v;
            v = v * z + c;
        }
        (v, dv)
    };
    let radius = a[..n].iter().map(|c| c.abs()).fold(0.0_f64, f64::max).powf(1.0 / n as f64).max(0.5);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();
    for _ in 0..1000 {
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let (v, dv) = eval(z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let rep: Complex64 = (0..n).filter(|&j| j != k).map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j])).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * rep);
            if w.is_finite() {
                z[k] -= w;
                worst = worst.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (v, dv) = eval(*zk);
            let step = v / dv;
            if step.is_finite() {
                *zk -= step;
            }
        }
    }
    z
}

trait LossyF64 {
    fn to_f64_lossy(&self) -> f64;
}

impl LossyF64 for Rational {
    fn to_f64_lossy(&self) -> f64 {
        crate::coeff::q_to_f64(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Coeff {
        Coeff::from_int(n)
    }

    fn p(v: &[i64]) -> PolyR {
        PolyR::new(v.iter().map(|&n| c(n)).collect())
    }

    fn product(fs: &[Factor]) -> PolyR {
        fs.iter().fold(PolyR::one(), |acc, f| acc.mul(&f.poly().pow(f.multiplicity)))
    }

    #[test]
    fn spec_examples() {
        let fs = factor_denominator(&p(&[2, 3, 1])).unwrap();
        assert_eq!(
            fs.iter().map(|f| f.kind.clone()).collect::<Vec<_>>(),
            vec![FactorKind::Linear { root: c(-2) }, FactorKind::Linear { root: c(-1) }]
        );
        let fs = factor_denominator(&p(&[5, 2, 1])).unwrap();
        assert_eq!(fs, vec![Factor { kind: FactorKind::Quadratic { center: c(-1), freq: c(2) }, multiplicity: 1 }]);
        let fs = factor_denominator(&p(&[-1, 3, -3, 1])).unwrap();
        assert_eq!(fs, vec![Factor { kind: FactorKind::Linear { root: c(1) }, multiplicity: 3 }]);
    }

    #[test]
    fn quartics_split_into_quadratics() {
        // (r² + 1)(r² + 4)(2r - 3)
        let q = p(&[1, 0, 1]).mul(&p(&[4, 0, 1])).mul(&p(&[-3, 2]));
        let fs = factor_denominator(&q).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(product(&fs), q.monic().1);
        // ((r+1)² + 1)²((r+1)² + 4)
        let a = p(&[2, 2, 1]);
        let b = p(&[5, 2, 1]);
        let q = a.mul(&a).mul(&b);
        let fs = factor_denominator(&q).unwrap();
        assert_eq!(product(&fs), q);
        assert!(fs.iter().any(|f| f.multiplicity == 2));
    }

    #[test]
    fn pi_poles() {
        let pi2 = Coeff::pi_power(2);
        // (r + 4π²)(r + 1)
        let q = PolyR::new(vec![Coeff::from_int(4) * &pi2, c(1)]).mul(&p(&[1, 1]));
        let fs = factor_denominator(&q).unwrap();
        assert_eq!(product(&fs), q);
        assert!(fs.contains(&Factor { kind: FactorKind::Linear { root: Coeff::from_int(-4) * &pi2 }, multiplicity: 1 }));
        // r(r² + π²)
        let q = PolyR::new(vec![c(0), pi2.clone(), c(0), c(1)]);
        let fs = factor_denominator(&q).unwrap();
        assert!(fs.contains(&Factor {
            kind: FactorKind::Quadratic { center: c(0), freq: Coeff::pi() },
            multiplicity: 1
        }));
        // (r + π)(r + π²) is neither π-free nor graded; the quadratic formula works.
        let q = PolyR::linear(&-Coeff::pi()).mul(&PolyR::linear(&-pi2.clone()));
        assert_eq!(product(&factor_denominator(&q).unwrap()), q);
    }

    #[test]
    fn irreducible_cases() {
        assert!(matches!(factor_denominator(&p(&[-2, 0, 1])), Err(Error::IrrationalRoots(_))));
        assert!(matches!(factor_denominator(&p(&[2, 0, 1])), Err(Error::IrrationalFrequency(_))));
        assert!(matches!(factor_denominator(&p(&[-2, 0, 0, 1])), Err(Error::IrreducibleHighDegree(3))));
    }

    #[test]
    fn large_roots_use_numeric_search() {
        // (r - 104729)(r + 1299709/7): prime-sized coefficients.
        let q = PolyR::linear(&c(104_729)).mul(&PolyR::linear(&Coeff::from_ratio(-1_299_709, 7)));
        let fs = factor_denominator(&q).unwrap();
        assert_eq!(product(&fs), q);
    }
}
