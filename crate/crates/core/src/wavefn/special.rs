//! Special functions used by the wavefunctions: Γ, Beta, Pochhammer symbols,
//! terminating ₂F₁ series and Jacobi polynomials.

use std::f64::consts::PI;

use crate::error::{Error, Result};

// Lanczos g = 7, n = 9 (the set popularised by Numerical Recipes / GSL).
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
/// Largest n with n! finite in f64.
const MAX_FACTORIAL: u32 = 170;

/// Double-double number (hi + lo, |lo| ≤ ulp(hi)/2), enough to keep the
/// alternating polynomial sums accurate to working precision.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    fn new(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }

    fn quick(s: f64, e: f64) -> Self {
        let hi = s + e;
        Dd { hi, lo: e - (hi - s) }
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        Dd {
            hi: s,
            lo: (a - (s - bb)) + (b - bb),
        }
    }

    fn add(self, o: Dd) -> Dd {
        let s = Dd::two_sum(self.hi, o.hi);
        Dd::quick(s.hi, s.lo + self.lo + o.lo)
    }

    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p) + (self.hi * o.lo + self.lo * o.hi);
        Dd::quick(p, e)
    }

    fn scale(self, x: f64) -> Dd {
        self.mul(Dd::new(x))
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::new(-q1)));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Dd::new(-q2)));
        let q3 = r.hi / o.hi;
        Dd::quick(q1, q2).add(Dd::new(q3))
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

fn lanczos_sum(x: f64) -> f64 {
    // x already shifted down by one
    LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS[0], |acc, (i, &c)| acc + c / (x + (i + 1) as f64))
}

pub fn factorial(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * f64::from(k))
}

/// Γ(x); exact products for small positive integers, Lanczos otherwise.
pub fn gamma(x: f64) -> Result<f64> {
    if is_nonpositive_integer(x) {
        return Err(Error::ParameterPole(x));
    }
    if x == x.floor() && x >= 1.0 && x <= f64::from(MAX_FACTORIAL) + 1.0 {
        return Ok(factorial(x as u32 - 1));
    }
    if x < 0.5 {
        let s = (PI * x).sin();
        return Ok(PI / (s * gamma(1.0 - x)?));
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    Ok((2.0 * PI).sqrt() * t.powf(xm + 0.5) * (-t).exp() * lanczos_sum(xm))
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::ParameterPole(x));
    }
    if x < 0.5 {
        // reflection keeps the Lanczos sum in its accurate range
        return Ok((PI / (PI * x).sin()).ln() - ln_gamma(1.0 - x)?);
    }
    let xm = x - 1.0;
    let t = xm + LANCZOS_G + 0.5;
    Ok(LN_SQRT_2PI + (xm + 0.5) * t.ln() - t + lanczos_sum(xm).ln())
}

/// ln B(x, y) for x, y > 0.
pub fn ln_beta(x: f64, y: f64) -> Result<f64> {
    Ok(ln_gamma(x)? + ln_gamma(y)? - ln_gamma(x + y)?)
}

pub fn beta(x: f64, y: f64) -> Result<f64> {
    ln_beta(x, y).map(f64::exp)
}

/// Rising factorial (y)_k = y(y+1)…(y+k−1).
pub fn pochhammer(y: f64, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (y + f64::from(j)))
}

fn hyp2f1_coefficients_dd(n: u32, b: f64, c: f64) -> Result<Vec<Dd>> {
    if is_nonpositive_integer(c) {
        return Err(Error::InvalidC(c));
    }
    let mut coeffs = Vec::with_capacity(n as usize + 1);
    let mut t = Dd::new(1.0);
    coeffs.push(t);
    for k in 0..n {
        let kf = f64::from(k);
        let num = Dd::two_sum(b, kf).scale(kf - f64::from(n));
        let den = Dd::two_sum(c, kf).scale(kf + 1.0);
        t = t.mul(num).div(den);
        coeffs.push(t);
    }
    Ok(coeffs)
}

/// Power-series coefficients of ₂F₁(−n, b; c; y), built from the term ratio.
pub fn hyp2f1_coefficients(n: u32, b: f64, c: f64) -> Result<Vec<f64>> {
    Ok(hyp2f1_coefficients_dd(n, b, c)?.into_iter().map(Dd::to_f64).collect())
}

/// Polynomial value and first two derivatives by Horner's scheme.
pub fn poly_eval_d2(coeffs: &[f64], y: f64) -> (f64, f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    let mut ddp = 0.0;
    for &c in coeffs.iter().rev() {
        ddp = ddp * y + 2.0 * dp;
        dp = dp * y + p;
        p = p * y + c;
    }
    (p, dp, ddp)
}

/// ₂F₁(−n, b; c; y) and its first two y-derivatives. Coefficients and Horner
/// steps run in double-double: the terms alternate in sign and can exceed
/// the sum by many orders of magnitude.
pub fn hyp2f1_truncated_d2(n: u32, b: f64, c: f64, y: f64) -> Result<(f64, f64, f64)> {
    let coeffs = hyp2f1_coefficients_dd(n, b, c)?;
    let yd = Dd::new(y);
    let (mut p, mut dp, mut ddp) = (Dd::ZERO, Dd::ZERO, Dd::ZERO);
    for &c in coeffs.iter().rev() {
        ddp = ddp.mul(yd).add(dp.scale(2.0));
        dp = dp.mul(yd).add(p);
        p = p.mul(yd).add(c);
    }
    Ok((p.to_f64(), dp.to_f64(), ddp.to_f64()))
}

/// ₂F₁(−n, b; c; y), a polynomial of degree n.
pub fn hyp2f1_truncated(n: u32, b: f64, c: f64, y: f64) -> Result<f64> {
    Ok(hyp2f1_truncated_d2(n, b, c, y)?.0)
}

/// Jacobi polynomial from the explicit two-factor sum
///
/// ```text
/// P_n^{(A,B)}(x) = Σ_p C(n+A, n−p) C(n+B, p) ((x−1)/2)^{n−p} ((x+1)/2)^p
/// ```
///
/// with the generalized binomials expanded as finite products, so no Γ poles
/// can occur.
pub fn jacobi_p(n: u32, a: f64, b: f64, x: f64) -> f64 {
    let lo = Dd::two_sum(x, -1.0).scale(0.5);
    let hi = Dd::two_sum(x, 1.0).scale(0.5);
    let powi = |base: Dd, k: u32| (0..k).fold(Dd::new(1.0), |acc, _| acc.mul(base));
    jacobi_weights_dd(n, a, b)
        .into_iter()
        .enumerate()
        .fold(Dd::ZERO, |acc, (p, w)| {
            let p = p as u32;
            acc.add(w.mul(powi(lo, n - p)).mul(powi(hi, p)))
        })
        .to_f64()
}

fn jacobi_weights_dd(n: u32, a: f64, b: f64) -> Vec<Dd> {
    let nf = f64::from(n);
    (0..=n)
        .map(|p| {
            // Γ(n+A+1)/Γ(n+A−p+1) = (n+A)(n+A−1)…(n+A−p+1)
            let upper_a = (0..p).fold(Dd::new(1.0), |acc, j| acc.mul(Dd::two_sum(a, nf - f64::from(j))));
            // Γ(n+B+1)/Γ(B+p+1) = (B+p+1)…(B+n)
            let upper_b = (p + 1..=n).fold(Dd::new(1.0), |acc, j| acc.mul(Dd::two_sum(b, f64::from(j))));
            upper_a.mul(upper_b).div(Dd::new(factorial(p) * factorial(n - p)))
        })
        .collect()
}

/// w_p = Γ(n+A+1)Γ(n+B+1) / (p! Γ(n+A−p+1) Γ(B+p+1) (n−p)!)
pub fn jacobi_weights(n: u32, a: f64, b: f64) -> Vec<f64> {
    jacobi_weights_dd(n, a, b).into_iter().map(Dd::to_f64).collect()
}
