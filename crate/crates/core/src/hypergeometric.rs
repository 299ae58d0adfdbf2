//! Generalized hypergeometric series, the Gauss value at 1, and ₂F₁ on the
//! negative real axis.

use statrs::function::gamma::digamma;

use crate::error::{Error, Result};
use crate::gamma::{c, gamma_ratio, re, ComplexValue, GammaRatioSpec};
use crate::quadrature::extrapolate_known_exponents;

#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSpec {
    pub numerator_params: Vec<ComplexValue>,
    pub denominator_params: Vec<ComplexValue>,
    pub argument: ComplexValue,
}

impl SeriesSpec {
    pub fn new(num: &[ComplexValue], den: &[ComplexValue], z: ComplexValue) -> Self {
        SeriesSpec { numerator_params: num.to_vec(), denominator_params: den.to_vec(), argument: z }
    }

    pub fn real(num: &[f64], den: &[f64], z: f64) -> Self {
        SeriesSpec {
            numerator_params: num.iter().map(|&x| re(x)).collect(),
            denominator_params: den.iter().map(|&x| re(x)).collect(),
            argument: re(z),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: ComplexValue,
    pub terms_used: usize,
    pub converged: bool,
    pub terminating: bool,
}

const TERMINATE_TOL: f64 = 1e-12;
const MAX_TERMS: usize = 2_000_000;

fn nonpositive_integer_near(z: ComplexValue, tol: f64) -> Option<usize> {
    let r = z.re.round();
    if r <= 0.0 && (z - re(r)).norm() <= tol {
        Some((-r) as usize)
    } else {
        None
    }
}

fn term_ratio(spec: &SeriesSpec, k: usize) -> ComplexValue {
    let kf = k as f64;
    let mut r = spec.argument / (kf + 1.0);
    for a in &spec.numerator_params {
        r *= a + kf;
    }
    for b in &spec.denominator_params {
        r /= b + kf;
    }
    r
}

/// pFq(a; b; z).
///
/// Terminating series are summed exactly; |z| < 1 by partial sums with a
/// ratio-test tail; z = 1 (p = q+1) by partial sums extrapolated along the
/// known algebraic tail k^{-e}, k^{-e-1}, … with e = Re(Σb − Σa).
pub fn pfq(spec: &SeriesSpec, tol: f64) -> Result<EvalResult> {
    let p = spec.numerator_params.len();
    let q = spec.denominator_params.len();
    let z = spec.argument;

    let terminate = spec
        .numerator_params
        .iter()
        .filter_map(|&a| nonpositive_integer_near(a, TERMINATE_TOL))
        .min();
    let den_pole = spec
        .denominator_params
        .iter()
        .filter_map(|&b| nonpositive_integer_near(b, 0.0).map(|m| (m, b)))
        .min_by_key(|x| x.0);
    if let Some((m, b)) = den_pole {
        if terminate.is_none_or(|n| m < n) {
            return Err(Error::Pole(b));
        }
    }
    if let Some(n) = terminate {
        let mut sum = re(1.0);
        let mut t = re(1.0);
        for k in 0..n {
            t *= term_ratio(spec, k);
            sum += t;
        }
        return Ok(EvalResult { value: sum, terms_used: n + 1, converged: true, terminating: true });
    }
    if z.norm() == 0.0 {
        return Ok(EvalResult { value: re(1.0), terms_used: 1, converged: true, terminating: false });
    }
    if p > q + 1 {
        return Err(Error::Divergent(format!("{p}F{q} has zero radius of convergence")));
    }
    if p == q + 1 && (z - 1.0).norm() < 1e-15 {
        return unit_argument(spec, tol);
    }
    if p == q + 1 && z.norm() >= 1.0 {
        return Err(Error::Divergent(format!("|z| = {} outside the unit disc", z.norm())));
    }
    plain_sum(spec, tol)
}

fn plain_sum(spec: &SeriesSpec, tol: f64) -> Result<EvalResult> {
    let zabs = spec.argument.norm();
    let mut sum = re(1.0);
    let mut t = re(1.0);
    let mut small_run = 0;
    for k in 0..MAX_TERMS {
        let r = term_ratio(spec, k);
        t *= r;
        sum += t;
        if t.norm() <= tol * sum.norm() {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 3 {
            let rho = r.norm().max(zabs);
            if rho < 1.0 && t.norm() * rho / (1.0 - rho) <= tol * sum.norm() {
                return Ok(EvalResult { value: sum, terms_used: k + 2, converged: true, terminating: false });
            }
        }
        if !sum.re.is_finite() || !sum.im.is_finite() {
            return Err(Error::Divergent("partial sums overflow".into()));
        }
    }
    Err(Error::NonConvergence(format!("series not converged after {MAX_TERMS} terms")))
}

fn unit_argument(spec: &SeriesSpec, tol: f64) -> Result<EvalResult> {
    let excess: ComplexValue = spec.denominator_params.iter().sum::<ComplexValue>()
        - spec.numerator_params.iter().sum::<ComplexValue>();
    let e = excess.re;
    if e <= 0.0 {
        return Err(Error::Divergent(format!("series at z = 1 needs Re(Σb − Σa) > 0, got {e}")));
    }
    // partial sums at geometric checkpoints
    let checkpoints: Vec<usize> = (0..12).map(|i| (64.0 * 1.5f64.powi(i)).round() as usize).collect();
    let mut sums: Vec<ComplexValue> = Vec::new();
    let mut sum = re(1.0);
    let mut t = re(1.0);
    let mut k = 0;
    for &n in &checkpoints {
        while k < n {
            t *= term_ratio(spec, k);
            sum += t;
            k += 1;
        }
        sums.push(sum);
        // fast decay: the plain tail bound suffices
        if (t.norm() * k as f64 / e) <= tol * sum.norm() {
            return Ok(EvalResult { value: sum, terms_used: k + 1, converged: true, terminating: false });
        }
    }
    if excess.im.abs() > 1e-14 {
        return Err(Error::NonConvergence("slowly convergent complex series at z = 1".into()));
    }
    let ns: Vec<f64> = checkpoints.iter().map(|&n| n as f64).collect();
    let ladder = |m: usize| (0..m).map(|j| -e - j as f64).collect::<Vec<f64>>();
    let re_parts: Vec<f64> = sums.iter().map(|s| s.re).collect();
    let im_parts: Vec<f64> = sums.iter().map(|s| s.im).collect();
    let v6 = c(
        extrapolate_known_exponents(&ns, &re_parts, &ladder(6))?,
        extrapolate_known_exponents(&ns, &im_parts, &ladder(6))?,
    );
    let v5 = c(
        extrapolate_known_exponents(&ns[..ns.len() - 1], &re_parts[..ns.len() - 1], &ladder(5))?,
        extrapolate_known_exponents(&ns[..ns.len() - 1], &im_parts[..ns.len() - 1], &ladder(5))?,
    );
    let converged = (v6 - v5).norm() <= tol.max(1e-13) * v6.norm();
    Ok(EvalResult { value: v6, terms_used: k + 1, converged, terminating: false })
}

/// Gauss: ₂F₁(a,b;c;1) = Γ(c)Γ(c−a−b)/(Γ(c−a)Γ(c−b)).
pub fn gauss_2f1_unit(a: ComplexValue, b: ComplexValue, cc: ComplexValue) -> Result<ComplexValue> {
    if (cc - a - b).re <= 0.0 {
        return Err(Error::OutOfDomain("Gauss sum needs Re(c − a − b) > 0".into()));
    }
    gamma_ratio(&GammaRatioSpec::new(&[cc, cc - a - b], &[cc - a, cc - b]))
}

fn series(num: &[ComplexValue], den: &[ComplexValue], z: f64) -> Result<ComplexValue> {
    Ok(pfq(&SeriesSpec::new(num, den, re(z)), 1e-16)?.value)
}

fn cpow(base: f64, e: ComplexValue) -> ComplexValue {
    (e * base.ln()).exp()
}

fn near_integer(z: ComplexValue, tol: f64) -> Option<i64> {
    let r = z.re.round();
    if (z - re(r)).norm() <= tol {
        Some(r as i64)
    } else {
        None
    }
}

/// ₂F₁(a,b;c;−x) for x ≥ 0.
///
/// Small x: the Bolza form (1+x)^{−a}·₂F₁(a, c−b; c; x/(1+x)), choosing the
/// variant with smaller parameters. Large x, or large imaginary parts where the
/// Bolza terms grow before they decay: the connection formula in 1/(1+x).
/// Equal a and b (the logarithmic case): the digamma expansion in 1/x.
pub fn f21_neg_axis(a: ComplexValue, b: ComplexValue, cc: ComplexValue, x: f64) -> Result<ComplexValue> {
    if x < 0.0 {
        return Err(Error::OutOfDomain(format!("x = {x} < 0")));
    }
    if let Some(m) = nonpositive_integer_near(cc, 0.0) {
        let terminates = [a, b].iter().any(|&p| nonpositive_integer_near(p, TERMINATE_TOL).is_some_and(|n| n <= m));
        if !terminates {
            return Err(Error::Pole(cc));
        }
    }
    if x == 0.0 {
        return Ok(re(1.0));
    }
    if [a, b].iter().any(|&p| nonpositive_integer_near(p, TERMINATE_TOL).is_some()) {
        return series(&[a, b], &[cc], -x);
    }
    let w = x / (1.0 + x);
    let growth = 2.0 * a.im.abs().max(b.im.abs()).max(cc.im.abs()) * w.sqrt();
    let diff = near_integer(a - b, 1e-6);
    if x <= 1.0 && (growth < 12.0 || diff.is_some()) {
        return bolza(a, b, cc, x);
    }
    match diff {
        None => connection(a, b, cc, x),
        Some(0) if x >= 2.0 && a.im.abs() < 1e-6 && cc.im == 0.0 => {
            let m = 0.5 * (a + b);
            log_case(m.re, cc.re, x).or_else(|_| bolza(a, b, cc, x))
        }
        _ => bolza(a, b, cc, x),
    }
}

fn bolza(a: ComplexValue, b: ComplexValue, cc: ComplexValue, x: f64) -> Result<ComplexValue> {
    let w = x / (1.0 + x);
    if (a.norm() * (cc - b).norm()) <= (b.norm() * (cc - a).norm()) {
        Ok(cpow(1.0 + x, -a) * series(&[a, cc - b], &[cc], w)?)
    } else {
        Ok(cpow(1.0 + x, -b) * series(&[b, cc - a], &[cc], w)?)
    }
}

fn connection(a: ComplexValue, b: ComplexValue, cc: ComplexValue, x: f64) -> Result<ComplexValue> {
    let w = 1.0 / (1.0 + x);
    let g1 = gamma_ratio(&GammaRatioSpec::new(&[cc, b - a], &[b, cc - a]))?;
    let g2 = gamma_ratio(&GammaRatioSpec::new(&[cc, a - b], &[a, cc - b]))?;
    let t1 = if g1.norm() == 0.0 { re(0.0) } else { g1 * cpow(1.0 + x, -a) * series(&[a, cc - b], &[a - b + 1.0], w)? };
    let t2 = if g2.norm() == 0.0 { re(0.0) } else { g2 * cpow(1.0 + x, -b) * series(&[b, cc - a], &[b - a + 1.0], w)? };
    Ok(t1 + t2)
}

// ₂F₁(a,a;c;−x), x > 1:
// Γ(c)/(Γ(a)Γ(c−a))·x^{−a}·Σ (a)_n(1−c+a)_n/(n!)²·(−1/x)^n·[ln x + 2ψ(n+1) − ψ(a+n) − ψ(c−a−n)]
fn log_case(a: f64, cc: f64, x: f64) -> Result<ComplexValue> {
    let m = cc - a;
    if (m - m.round()).abs() < 1e-3 {
        // integer c − a: the expansion has 0·∞ products; F is analytic in c,
        // so take symmetric offsets c ± kδ and extrapolate in δ² to δ = 0
        let d = 1e-3;
        let base = cc - (m - m.round());
        let mut acc = re(0.0);
        for (k, w) in [(1.0, 1.5), (2.0, -0.6), (3.0, 0.1)] {
            let lo = log_case_generic(a, base - k * d, x)?;
            let hi = log_case_generic(a, base + k * d, x)?;
            acc += (lo + hi) * (0.5 * w);
        }
        return Ok(acc);
    }
    log_case_generic(a, cc, x)
}

fn log_case_generic(a: f64, cc: f64, x: f64) -> Result<ComplexValue> {
    let pre = gamma_ratio(&GammaRatioSpec::real(&[cc], &[a, cc - a]))?.re;
    let lnx = x.ln();
    let mut coef = 1.0;
    let mut sum = 0.0;
    for n in 0..10_000usize {
        let nf = n as f64;
        if n > 0 {
            coef *= (a + nf - 1.0) * (1.0 - cc + a + nf - 1.0) / (nf * nf) * (-1.0 / x);
        }
        let bracket = lnx + 2.0 * digamma(nf + 1.0) - digamma(a + nf) - digamma(cc - a - nf);
        let t = coef * bracket;
        if !t.is_finite() {
            return Err(Error::NonConvergence("log-case expansion overflow".into()));
        }
        sum += t;
        if n > 2 && t.abs() <= 1e-17 * sum.abs() {
            return Ok(re(pre * x.powf(-a) * sum));
        }
    }
    Err(Error::NonConvergence("log-case expansion did not converge".into()))
}

/// ₂F₁(a,b;c;z) for real parameters and real z < 1.
///
/// z ≤ 0 goes through [`f21_neg_axis`]; 0 < z ≤ 1/2 is the plain series; above
/// 1/2 the connection formula in 1 − z keeps the series short.
pub fn f21_real(a: f64, b: f64, cc: f64, z: f64) -> Result<f64> {
    if z >= 1.0 {
        return Err(Error::OutOfDomain(format!("z = {z} ≥ 1")));
    }
    if z <= 0.0 {
        return Ok(f21_neg_axis(re(a), re(b), re(cc), -z)?.re);
    }
    f21_one_minus(a, b, cc, 1.0 - z)
}

/// ₂F₁(a,b;c;1−t) for real parameters and 0 < t ≤ 1, taking t itself so that
/// arguments close to 1 keep full precision.
pub fn f21_one_minus(a: f64, b: f64, cc: f64, t: f64) -> Result<f64> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::OutOfDomain(format!("t = {t} outside (0, 1]")));
    }
    let (ra, rb, rc) = (re(a), re(b), re(cc));
    let s = cc - a - b;
    let terminates = [a, b].iter().any(|&p| p <= 0.0 && p == p.round());
    if t >= 0.5 || terminates || (s - s.round()).abs() < 1e-6 {
        return Ok(series(&[ra, rb], &[rc], 1.0 - t)?.re);
    }
    let g1 = gamma_ratio(&GammaRatioSpec::real(&[cc, s], &[cc - a, cc - b]))?.re;
    let g2 = gamma_ratio(&GammaRatioSpec::real(&[cc, -s], &[a, b]))?.re;
    let t1 = if g1 == 0.0 { 0.0 } else { g1 * series(&[ra, rb], &[re(1.0 - s)], t)?.re };
    let t2 = if g2 == 0.0 { 0.0 } else { g2 * t.powf(s) * series(&[re(cc - a), re(cc - b)], &[re(s + 1.0)], t)?.re };
    Ok(t1 + t2)
}
