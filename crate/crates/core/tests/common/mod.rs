//! Random inputs shared by the property suites.
#![allow(dead_code)]

use proptest::prelude::*;
use shehu::coeff::Coeff;
use shehu::{canonicalize, parse, AtomSum, Expr, PolyR, RatFunc};

/// Nonzero `n/d` with small numerator and denominator.
pub fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    ((-6i64..=6).prop_filter("nonzero", |n| *n != 0), 1i64..=3)
}

/// `c·t^p·e^{a t}·{1, sin bt, cos bt}` as text, with `|a| ≤ max_rate`
/// stepping by 1/2.
pub fn atom_text(max_rate: i64) -> impl Strategy<Value = String> {
    (small_rational(), 0u32..=3, -2 * max_rate..=2 * max_rate, 0u8..3, 1i64..=3).prop_map(
        |((n, d), p, a2, trig, b)| {
            let trig = match trig {
                0 => String::new(),
                1 => format!("*sin({b}*t)"),
                _ => format!("*cos({b}*t)"),
            };
            format!("({n}/{d})*t^{p}*exp(({a2}/2)*t){trig}")
        },
    )
}

/// A sum of up to `k` atoms.
pub fn atom_sum_text(max_rate: i64, k: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(atom_text(max_rate), 1..=k).prop_map(|v| v.join(" + "))
}

/// Time-domain expressions that are not already canonical: products of
/// sums, powers, and hyperbolic functions.
pub fn messy_text() -> impl Strategy<Value = String> {
    let factor = prop_oneof![
        atom_text(2),
        (1i64..=3).prop_map(|k| format!("sinh({k}*t)")),
        (1i64..=3).prop_map(|k| format!("cosh({k}*t/2)")),
        (atom_text(1), atom_text(1)).prop_map(|(a, b)| format!("({a} - {b})")),
        atom_text(1).prop_map(|a| format!("({a})^2")),
    ];
    let product = prop::collection::vec(factor, 1..=2).prop_map(|v| v.join("*"));
    prop::collection::vec(product, 1..=3).prop_map(|v| v.join(" + "))
}

pub fn expr(text: &str) -> Expr {
    parse(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn atoms(text: &str) -> AtomSum {
    canonicalize(&expr(text)).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn c(n: i64, d: i64) -> Coeff {
    Coeff::from_ratio(n, d)
}

/// One denominator factor: `(r - p)^m` or `((r - a)² + b²)^m`.
#[derive(Clone, Debug)]
pub enum PoleFactor {
    Linear { p: (i64, i64), m: u32 },
    Quadratic { a: (i64, i64), b: i64, m: u32 },
}

impl PoleFactor {
    pub fn degree(&self) -> usize {
        match self {
            PoleFactor::Linear { m, .. } => *m as usize,
            PoleFactor::Quadratic { m, .. } => 2 * *m as usize,
        }
    }

    pub fn poly(&self) -> PolyR {
        match self {
            PoleFactor::Linear { p, m } => PolyR::new(vec![-c(p.0, p.1), Coeff::one()]).pow(*m),
            PoleFactor::Quadratic { a, b, m } => {
                let a = c(a.0, a.1);
                let q = PolyR::new(vec![&a * &a + Coeff::from_int(b * b), -(&a + &a), Coeff::one()]);
                q.pow(*m)
            }
        }
    }

    /// Largest real part among the poles.
    pub fn real_part(&self) -> f64 {
        match self {
            PoleFactor::Linear { p, .. } => p.0 as f64 / p.1 as f64,
            PoleFactor::Quadratic { a, .. } => a.0 as f64 / a.1 as f64,
        }
    }
}

pub fn pole_factor() -> impl Strategy<Value = PoleFactor> {
    prop_oneof![
        ((-4i64..=4, 1i64..=2), 1u32..=3).prop_map(|(p, m)| PoleFactor::Linear { p, m }),
        ((-4i64..=4, 1i64..=2), 1i64..=3, 1u32..=2).prop_map(|(a, b, m)| PoleFactor::Quadratic { a, b, m }),
    ]
}

/// A proper rational function of degree ≤ 6 with rational poles and
/// quadratic pairs, plus its pole factors.
pub fn proper_image() -> impl Strategy<Value = (RatFunc, Vec<PoleFactor>)> {
    prop::collection::vec(pole_factor(), 1..=3)
        .prop_map(|fs| {
            // Keep the degree within 6 and merge nothing: duplicates only raise multiplicity.
            let mut kept = Vec::new();
            let mut deg = 0;
            for f in fs {
                if deg + f.degree() <= 6 {
                    deg += f.degree();
                    kept.push(f);
                }
            }
            kept
        })
        .prop_filter("distinct factors", |fs| {
            let polys: Vec<PolyR> = fs.iter().map(|f| f.poly()).collect();
            (0..polys.len()).all(|i| (i + 1..polys.len()).all(|j| polys[i].gcd(&polys[j]).is_one()))
        })
        .prop_flat_map(|fs| {
            let deg: usize = fs.iter().map(PoleFactor::degree).sum();
            (Just(fs), prop::collection::vec(-5i64..=5, deg))
        })
        .prop_filter_map("nonzero numerator", |(fs, num)| {
            let num = PolyR::new(num.into_iter().map(Coeff::from_int).collect());
            if num.is_zero() {
                return None;
            }
            let den = fs.iter().fold(PolyR::one(), |acc, f| acc.mul(&f.poly()));
            Some((RatFunc::new(num, den), fs))
        })
}
