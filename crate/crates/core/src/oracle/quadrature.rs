//! Adaptive Gauss–Kronrod (7/15) quadrature.

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One GK15 panel: `(kronrod, |kronrod - gauss|)`.
pub fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive bisection until the Kronrod–Gauss difference drops below
/// `max(abs_tol, rel_tol·|I|)` on every subinterval.
pub fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> (f64, bool) {
    fn rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel: f64, abs: f64, depth: u32) -> (f64, bool) {
        let (k, err) = gk15(f, a, b);
        if err <= abs.max(rel * k.abs()) || err == 0.0 {
            return (k, true);
        }
        if depth == 0 {
            return (k, false);
        }
        let m = 0.5 * (a + b);
        let (l, ok1) = rec(f, a, m, rel, abs * 0.5, depth - 1);
        let (r, ok2) = rec(f, m, b, rel, abs * 0.5, depth - 1);
        (l + r, ok1 && ok2)
    }
    rec(f, a, b, rel_tol, abs_tol, 40)
}
