//! Complex gamma arithmetic: log-gamma, Pochhammer symbols and gamma-ratio brackets.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexValue = Complex64;

/// ln(2π)/2
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

// Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficients).
const LANCZOS_G: f64 = 607.0 / 128.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    0.339_946_499_848_118_9e-4,
    0.465_236_289_270_485_76e-4,
    -0.983_744_753_048_795_6e-4,
    0.158_088_703_224_912_5e-3,
    -0.210_264_441_724_104_9e-3,
    0.217_439_618_115_212_6e-3,
    -0.164_318_106_536_763_9e-3,
    0.844_182_239_838_527_4e-4,
    -0.261_908_384_015_814_1e-4,
    0.368_991_826_595_316_2e-5,
];

pub fn c(re: f64, im: f64) -> ComplexValue {
    Complex64::new(re, im)
}

pub fn re(x: f64) -> ComplexValue {
    Complex64::new(x, 0.0)
}

/// sin(πx) with exact argument reduction.
pub fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r.abs() <= 0.25 {
        (PI * r).sin()
    } else if r > 0.75 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.75 {
        -(PI * (1.0 + r)).sin()
    } else if r > 0.0 {
        (PI * (0.5 - r)).cos()
    } else {
        -(PI * (0.5 + r)).cos()
    }
}

pub fn cos_pi(x: f64) -> f64 {
    sin_pi(x + 0.5)
}

pub fn sin_pi_complex(z: ComplexValue) -> ComplexValue {
    let y = PI * z.im;
    c(sin_pi(z.re) * y.cosh(), cos_pi(z.re) * y.sinh())
}

fn nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn is_pole(z: ComplexValue) -> bool {
    z.im == 0.0 && nonpositive_integer(z.re)
}

fn lanczos_sum(z: ComplexValue) -> ComplexValue {
    let mut x = re(LANCZOS[0]);
    for (i, &ci) in LANCZOS.iter().enumerate().skip(1) {
        x += ci / (z + i as f64);
    }
    x
}

// ln Γ(z) for Re z >= 1/2.
fn log_gamma_right(z: ComplexValue) -> ComplexValue {
    let zm = z - 1.0;
    let t = zm + LANCZOS_G + 0.5;
    (zm + 0.5) * t.ln() - t + lanczos_sum(zm).ln() + HALF_LN_2PI
}

/// Principal branch of ln Γ(z).
///
/// On the negative real axis the value is the limit from the upper half-plane,
/// so that `exp` still reproduces the sign of Γ.
pub fn log_gamma(z: ComplexValue) -> Result<ComplexValue> {
    if is_pole(z) {
        return Err(Error::Pole(z));
    }
    let z = if z.im == 0.0 { c(z.re, 0.0) } else { z };
    if z.re >= 0.5 {
        return Ok(log_gamma_right(z));
    }
    // ln Γ(z) = ln Γ(z+n) - Σ Log(z+j) keeps the principal branch.
    let n = (0.5 - z.re).ceil() as usize;
    let mut acc = log_gamma_right(z + n as f64);
    for j in 0..n {
        let w = z + j as f64;
        let w = if w.im == 0.0 { c(w.re, 0.0) } else { w };
        acc -= w.ln();
    }
    Ok(acc)
}

/// (ln|Γ(x)|, sign Γ(x)) for real x.
pub fn ln_gamma_real(x: f64) -> Result<(f64, f64)> {
    if nonpositive_integer(x) {
        return Err(Error::Pole(re(x)));
    }
    if x >= 0.5 {
        let zm = x - 1.0;
        let t = zm + LANCZOS_G + 0.5;
        let mut s = LANCZOS[0];
        for (i, &ci) in LANCZOS.iter().enumerate().skip(1) {
            s += ci / (zm + i as f64);
        }
        return Ok(((zm + 0.5) * t.ln() - t + s.ln() + HALF_LN_2PI, 1.0));
    }
    let sp = sin_pi(x);
    let (lg, _) = ln_gamma_real(1.0 - x)?;
    Ok((PI.ln() - sp.abs().ln() - lg, sp.signum()))
}

pub fn gamma_real(x: f64) -> Result<f64> {
    let (l, s) = ln_gamma_real(x)?;
    Ok(s * l.exp())
}

/// 1/Γ(x), zero at the poles.
pub fn rgamma_real(x: f64) -> f64 {
    match ln_gamma_real(x) {
        Ok((l, s)) => s * (-l).exp(),
        Err(_) => 0.0,
    }
}

pub fn gamma(z: ComplexValue) -> Result<ComplexValue> {
    Ok(log_gamma(z)?.exp())
}

/// (a)_k = a(a+1)…(a+k-1).
pub fn pochhammer(a: ComplexValue, k: usize) -> ComplexValue {
    if k <= 64 || is_pole(a) || is_pole(a + k as f64) {
        let mut p = re(1.0);
        for j in 0..k {
            p *= a + j as f64;
        }
        return p;
    }
    match (log_gamma(a + k as f64), log_gamma(a)) {
        (Ok(x), Ok(y)) => (x - y).exp(),
        _ => {
            let mut p = re(1.0);
            for j in 0..k {
                p *= a + j as f64;
            }
            p
        }
    }
}

pub fn pochhammer_real(a: f64, k: usize) -> f64 {
    (0..k).fold(1.0, |p, j| p * (a + j as f64))
}

/// The bracket Γ[numerators / denominators].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GammaRatioSpec {
    pub numerator_args: Vec<ComplexValue>,
    pub denominator_args: Vec<ComplexValue>,
}

impl GammaRatioSpec {
    pub fn new(num: &[ComplexValue], den: &[ComplexValue]) -> Self {
        GammaRatioSpec { numerator_args: num.to_vec(), denominator_args: den.to_vec() }
    }

    pub fn real(num: &[f64], den: &[f64]) -> Self {
        GammaRatioSpec {
            numerator_args: num.iter().map(|&x| re(x)).collect(),
            denominator_args: den.iter().map(|&x| re(x)).collect(),
        }
    }
}

const CANCEL_TOL: f64 = 1e-12;

pub fn gamma_ratio(spec: &GammaRatioSpec) -> Result<ComplexValue> {
    let mut num = spec.numerator_args.clone();
    let mut den = spec.denominator_args.clone();

    // symbolic cancellation of equal arguments
    let mut i = 0;
    while i < num.len() {
        let hit = den
            .iter()
            .position(|d| (num[i] - d).norm() <= CANCEL_TOL * (1.0 + d.norm()));
        if let Some(j) = hit {
            num.swap_remove(i);
            den.swap_remove(j);
        } else {
            i += 1;
        }
    }

    // Γ(-m)/Γ(-n) as the limit of Γ(-m+ε)/Γ(-n+ε) = (-1)^{m-n} n!/m!
    let mut factor = re(1.0);
    let num_poles: Vec<usize> = (0..num.len()).filter(|&i| is_pole(num[i])).collect();
    let den_poles: Vec<usize> = (0..den.len()).filter(|&i| is_pole(den[i])).collect();
    if num_poles.len() > den_poles.len() {
        return Err(Error::Pole(num[num_poles[den_poles.len()]]));
    }
    if den_poles.len() > num_poles.len() {
        return Ok(re(0.0));
    }
    for (&i, &j) in num_poles.iter().zip(den_poles.iter()) {
        let m = -num[i].re;
        let n = -den[j].re;
        let (lm, _) = ln_gamma_real(m + 1.0)?;
        let (ln_, _) = ln_gamma_real(n + 1.0)?;
        let sign = if ((m - n) as i64).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        factor *= sign * (ln_ - lm).exp();
    }
    let mut sum = re(0.0);
    for (k, z) in num.iter().enumerate() {
        if !num_poles.contains(&k) {
            sum += log_gamma(*z)?;
        }
    }
    for (k, z) in den.iter().enumerate() {
        if !den_poles.contains(&k) {
            sum -= log_gamma(*z)?;
        }
    }
    if sum.re > 709.0 || !sum.re.is_finite() {
        return Err(Error::Overflow(sum.re));
    }
    Ok(factor * sum.exp())
}

/// Real gamma ratio for real arguments, using the signed real log-gamma.
pub fn gamma_ratio_real(num: &[f64], den: &[f64]) -> Result<f64> {
    let v = gamma_ratio(&GammaRatioSpec::real(num, den))?;
    Ok(v.re)
}

/// ln |Γ(a+is)|²
pub fn ln_abs_sq_gamma(a: f64, s: f64) -> Result<f64> {
    Ok(2.0 * log_gamma(c(a, s))?.re)
}

/// |Γ(a+is)|²
pub fn abs_sq_gamma(a: f64, s: f64) -> Result<f64> {
    // evaluate at |s| so the result is exactly even
    Ok(ln_abs_sq_gamma(a, s.abs())?.exp())
}

/// 1/|Γ(2is)|² = 2 s sinh(2πs)/π
pub fn inv_abs_sq_gamma_2is(s: f64) -> f64 {
    2.0 * s * (2.0 * PI * s).sinh() / PI
}

/// ln(1/|Γ(2is)|²) for s ≠ 0, safe for large s.
pub fn ln_inv_abs_sq_gamma_2is(s: f64) -> f64 {
    let s = s.abs();
    let y = 2.0 * PI * s;
    let ln_sinh = if y > 20.0 {
        y - std::f64::consts::LN_2 + (-(-2.0 * y).exp()).ln_1p()
    } else {
        y.sinh().ln()
    };
    (2.0 * s).ln() + ln_sinh - PI.ln()
}
