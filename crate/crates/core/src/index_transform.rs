//! The index hypergeometric (Jacobi / Olevsky) transform
//!
//! J f(s) = (1/Γ(a+b)) ∫_0^∞ f(x) ₂F₁(a+is, a−is; a+b; −x) x^{a+b−1}(1+x)^{a−b} dx
//!
//! with inverse and Plancherel pairing against the spectral weight
//! |Γ(a+is)Γ(b+is)/Γ(2is)|² ds/(2π) on [0, ∞).

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::catalog::{verify, IdentityId, VerificationReport};
use crate::error::{Error, Result};
use crate::gamma::{c, gamma_ratio_real, ln_abs_sq_gamma, ln_inv_abs_sq_gamma_2is, re};
use crate::hypergeometric::{f21_neg_axis, f21_real, pfq, SeriesSpec};
use crate::mellin_barnes::{eval_mb, MBSpec};
use crate::quadrature::{integrate_halfline, integrate_log_map, IntegrandHandle, QuadResult};

/// A real function usable inside the (parallel-safe) quadrature handles.
pub type RealFn<'a> = dyn Fn(f64) -> f64 + Send + Sync + 'a;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JParams {
    pub a: f64,
    pub b: f64,
}

impl JParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::OutOfDomain(format!("transform needs a, b > 0, got a = {a}, b = {b}")));
        }
        Ok(JParams { a, b })
    }
}

/// Re ₂F₁(κ+is, κ−is; r; w) for real w < 1; the value is real and the
/// imaginary part is checked against the kernel's natural size.
pub fn index_kernel(kappa: f64, s: f64, r: f64, w: f64) -> Result<f64> {
    let (p, q, rr) = (c(kappa, s), c(kappa, -s), re(r));
    let v = if w <= 0.0 {
        f21_neg_axis(p, q, rr, -w)?
    } else if w < 1.0 {
        pfq(&SeriesSpec::new(&[p, q], &[rr], re(w)), 1e-15)?.value
    } else {
        return Err(Error::OutOfDomain(format!("kernel argument {w} ≥ 1")));
    };
    let scale = v.re.abs() + (1.0 - w).powf(-kappa.abs());
    if v.im.abs() > 1e-10 * scale {
        return Err(Error::Evaluation(w));
    }
    Ok(v.re)
}

/// The transform kernel ₂F₁(a+is, a−is; a+b; −x).
pub fn kernel(jp: &JParams, s: f64, x: f64) -> Result<f64> {
    index_kernel(jp.a, s, jp.a + jp.b, -x)
}

/// |Γ(a+is)Γ(b+is)/Γ(2is)|².
pub fn spectral_weight(jp: &JParams, s: f64) -> f64 {
    weight(&[jp.a, jp.b], s)
}

/// Π|Γ(pⱼ+is)|² / |Γ(2is)|², zero at s = 0.
pub fn weight(params: &[f64], s: f64) -> f64 {
    if s == 0.0 {
        return 0.0;
    }
    let mut l = ln_inv_abs_sq_gamma_2is(s);
    for &p in params {
        match ln_abs_sq_gamma(p, s) {
            Ok(v) => l += v,
            Err(_) => return f64::NAN,
        }
    }
    l.exp()
}

fn nan_on_err(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::NAN)
}

/// J f(s) by quadrature over x.
pub fn j_forward(jp: &JParams, f: &RealFn<'_>, s: f64, tol: f64) -> Result<QuadResult> {
    let JParams { a, b } = *jp;
    let norm = crate::gamma::gamma_real(a + b)?;
    let mut r = integrate_log_map(
        |x| {
            let v = f(x);
            if v == 0.0 {
                return 0.0;
            }
            v * nan_on_err(kernel(jp, s, x)) * x.powf(a + b - 1.0) * (1.0 + x).powf(a - b)
        },
        tol,
    )?;
    r.value /= norm;
    r.abs_error_estimate /= norm;
    Ok(r)
}

/// J⁻¹g(x) = (1/(2πΓ(a+b))) ∫_0^∞ g(s) ₂F₁(a+is, a−is; a+b; −x) |Γ(a+is)Γ(b+is)/Γ(2is)|² ds.
///
/// g is expected to decay exponentially (as every catalog image does).
pub fn j_inverse(jp: &JParams, g: &RealFn<'_>, x: f64, tol: f64) -> Result<QuadResult> {
    let norm = 2.0 * PI * crate::gamma::gamma_real(jp.a + jp.b)?;
    let h = IntegrandHandle::new(|s| {
        let v = g(s);
        if v == 0.0 {
            return 0.0;
        }
        v * nan_on_err(kernel(jp, s, x)) * spectral_weight(jp, s)
    });
    let mut r = integrate_halfline(&h, tol)?;
    r.value /= norm;
    r.abs_error_estimate /= norm;
    Ok(r)
}

/// Both sides of the Plancherel identity
/// ∫ f₁f₂ x^{a+b−1}(1+x)^{a−b} dx = (1/2π) ∫_0^∞ g₁g₂ |Γ(a+is)Γ(b+is)/Γ(2is)|² ds,
/// with gᵢ the closed-form images of fᵢ.
pub fn plancherel_pair(
    jp: &JParams,
    f1: &RealFn<'_>,
    f2: &RealFn<'_>,
    g1: &RealFn<'_>,
    g2: &RealFn<'_>,
    tol: f64,
) -> Result<(f64, f64)> {
    let JParams { a, b } = *jp;
    let lhs = integrate_log_map(
        |x| {
            let v = f1(x) * f2(x);
            if v == 0.0 {
                0.0
            } else {
                v * x.powf(a + b - 1.0) * (1.0 + x).powf(a - b)
            }
        },
        tol,
    )?
    .value;
    let h = IntegrandHandle::new(|s| {
        let v = g1(s) * g2(s);
        if v == 0.0 {
            0.0
        } else {
            v * spectral_weight(jp, s)
        }
    });
    let rhs = integrate_halfline(&h, tol)?.value / (2.0 * PI);
    Ok((lhs, rhs))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ImageId {
    L11A,
    L11B,
    L11C,
    L12A,
    L12B,
    L12C,
}

impl ImageId {
    pub const ALL: [ImageId; 6] = [
        ImageId::L11A,
        ImageId::L11B,
        ImageId::L11C,
        ImageId::L12A,
        ImageId::L12B,
        ImageId::L12C,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ImageId::L11A => "L11A",
            ImageId::L11B => "L11B",
            ImageId::L11C => "L11C",
            ImageId::L12A => "L12A",
            ImageId::L12B => "L12B",
            ImageId::L12C => "L12C",
        }
    }
}

impl fmt::Display for ImageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ImageId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ImageId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::OutOfDomain(format!("unknown image id {s}")))
    }
}

/// Extra parameters of the image catalog; each pair reads the ones it needs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageParams {
    pub c: f64,
    pub d: f64,
    pub u: f64,
    pub p: f64,
    pub q: f64,
    pub y: f64,
    pub z: f64,
}

impl Default for ImageParams {
    fn default() -> Self {
        ImageParams { c: 0.6, d: 0.8, u: 0.5, p: 0.55, q: 0.75, y: 1.7, z: 2.5 }
    }
}

/// A source function and its closed-form image under J.
pub struct ImagePair {
    pub id: ImageId,
    pub source: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    pub image: Box<dyn Fn(f64) -> Result<f64> + Send + Sync>,
}

fn require(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfDomain(what.into()))
    }
}

fn abs_sq(p: f64, s: f64) -> Result<f64> {
    Ok(ln_abs_sq_gamma(p, s)?.exp())
}

fn real_2f1(a: f64, b: f64, cc: f64, x: f64) -> f64 {
    nan_on_err(f21_real(a, b, cc, x))
}

pub fn image_pair(id: ImageId, e: &ImageParams, jp: &JParams) -> Result<ImagePair> {
    let JParams { a, b } = *jp;
    let ImageParams { c: cc, d, u, p, q, y, z } = *e;
    let pair = |source: Box<dyn Fn(f64) -> f64 + Send + Sync>,
                image: Box<dyn Fn(f64) -> Result<f64> + Send + Sync>| ImagePair { id, source, image };
    Ok(match id {
        ImageId::L11A => {
            require(cc > 0.0, "L11A needs c > 0")?;
            let k = gamma_ratio_real(&[], &[cc + a, cc + b])?;
            pair(
                Box::new(move |x: f64| (1.0 + x).powf(-a - cc)),
                Box::new(move |s| Ok(k * abs_sq(cc, s)?)),
            )
        }
        ImageId::L11B => {
            require(cc > 0.0 && z > 0.0, "L11B needs c > 0, z > 0")?;
            let k = gamma_ratio_real(&[], &[cc + a, cc + b])?;
            pair(
                Box::new(move |x: f64| (1.0 + x).powf(b - a) * (x + z).powf(-cc - b)),
                Box::new(move |s| Ok(k * abs_sq(cc, s)? * index_kernel(cc, s, cc + a, 1.0 - z)?)),
            )
        }
        ImageId::L11C => {
            require(u > 0.0 && b > u, "L11C needs 0 < u < b")?;
            let k = gamma_ratio_real(&[b - u], &[a + u])?;
            pair(
                Box::new(move |x: f64| x.powf(-u - a)),
                Box::new(move |s| Ok(k * (ln_abs_sq_gamma(u, s)? - ln_abs_sq_gamma(b, s)?).exp())),
            )
        }
        ImageId::L12A | ImageId::L12B => {
            let y = if id == ImageId::L12B { 1.0 } else { y };
            require(p > 0.0 && q > 0.0 && y > 0.0, "L12A/B need p, q, y > 0")?;
            let k = y.powf(b + p) * gamma_ratio_real(&[a + b], &[p + q, p + b, q + b])?;
            pair(
                Box::new(move |x: f64| real_2f1(p + b, q + b, a + b, -x / y) * (1.0 + x).powf(b - a)),
                Box::new(move |s| {
                    let g = (ln_abs_sq_gamma(p, s)? + ln_abs_sq_gamma(q, s)? - ln_abs_sq_gamma(a, s)?).exp();
                    let f = if y == 1.0 { 1.0 } else { index_kernel(p, s, p + q, 1.0 - y)? };
                    Ok(k * g * f)
                }),
            )
        }
        ImageId::L12C => {
            require(cc > 0.0 && d > 0.0, "L12C needs c, d > 0")?;
            let sum = a + b + cc + d;
            let k = gamma_ratio_real(&[sum], &[a + cc, a + d, b + cc, b + d, cc + d])?;
            pair(
                Box::new(move |x: f64| real_2f1(a + cc, a + d, sum, -x)),
                Box::new(move |s| Ok(k * (ln_abs_sq_gamma(cc, s)? + ln_abs_sq_gamma(d, s)?).exp())),
            )
        }
    })
}

/// Worst relative residual between numeric J and the closed-form image over `s_grid`.
pub fn image_residual(id: ImageId, extra: &ImageParams, jp: &JParams, s_grid: &[f64], tol: f64) -> Result<f64> {
    let pair = image_pair(id, extra, jp)?;
    let mut worst: f64 = 0.0;
    for &s in s_grid {
        let numeric = j_forward(jp, &*pair.source, s, tol)?.value;
        let closed = (pair.image)(s)?;
        worst = worst.max((numeric - closed).abs() / closed.abs().max(1e-300));
    }
    Ok(worst)
}

/// Both sides of an index integral: the s-integral and its evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sides {
    pub lhs: QuadResult,
    pub rhs: f64,
}

/// (1/2π) ∫_0^∞ W(s)·k(s) ds with W the |Π Γ(pⱼ+is) / Γ(2is)|² weight.
fn spectral_integral(params: &[f64], k: impl Fn(f64) -> Result<f64> + Send + Sync, tol: f64) -> Result<QuadResult> {
    let h = IntegrandHandle::new(|s| {
        let w = weight(params, s);
        if w == 0.0 {
            0.0
        } else {
            w * nan_on_err(k(s))
        }
    });
    let mut r = integrate_halfline(&h, tol)?;
    r.value /= 2.0 * PI;
    r.abs_error_estimate /= 2.0 * PI;
    Ok(r)
}

fn positive(vals: &[f64]) -> Result<()> {
    require(vals.iter().all(|&v| v > 0.0), "parameters must be positive")
}

/// Inversion applied to (1+x)^{b−a}(x+y+1)^{−c−b}:
/// (1/2π)∫_0^∞ |Γ(a+is)Γ(b+is)Γ(c+is)/Γ(2is)|² F(c±is; a+c; −y) F(b±is; a+b; −x) ds
/// = Γ(a+b)Γ(a+c)Γ(b+c) / (1+x+y)^{b+c}.
pub fn inversion_index_integral(a: f64, b: f64, cc: f64, x: f64, y: f64, tol: f64) -> Result<Sides> {
    positive(&[a, b, cc])?;
    require(x >= 0.0 && y >= 0.0, "x, y ≥ 0")?;
    let lhs = spectral_integral(
        &[a, b, cc],
        |s| Ok(index_kernel(cc, s, a + cc, -y)? * index_kernel(b, s, a + b, -x)?),
        tol,
    )?;
    let rhs = gamma_ratio_real(&[a + b, a + cc, b + cc], &[])? * (1.0 + x + y).powf(-b - cc);
    Ok(Sides { lhs, rhs })
}

/// Plancherel for (1+x)^{b−a}(x+y+1)^{−c−b} and (1+x)^{−a−d}:
/// (1/2π)∫_0^∞ |Γ(a,b,c,d + is)/Γ(2is)|² F(c±is; a+c; −y) ds
/// = Π_{pairs}Γ / Γ(a+b+c+d) · ₂F₁(b+c, c+d; a+b+c+d; −y).
pub fn plancherel_index_integral(a: f64, b: f64, cc: f64, d: f64, y: f64, tol: f64) -> Result<Sides> {
    positive(&[a, b, cc, d])?;
    require(y >= 0.0, "y ≥ 0")?;
    let lhs = spectral_integral(&[a, b, cc, d], |s| index_kernel(cc, s, a + cc, -y), tol)?;
    let sum = a + b + cc + d;
    let g = gamma_ratio_real(&[a + b, a + cc, a + d, b + cc, b + d, cc + d], &[sum])?;
    let rhs = g * f21_real(b + cc, cc + d, sum, -y)?;
    Ok(Sides { lhs, rhs })
}

/// Plancherel for (1+x)^{b−a}(1+x+y)^{−b−c} and (1+x)^{b−a}(1+x+z)^{−b−d}:
/// (1/2π)∫_0^∞ |Γ(a,b,c,d + is)/Γ(2is)|² F(c±is; a+c; −y) F(d±is; a+d; −z) ds
/// = Γ(c+a)Γ(c+b)Γ(d+a)Γ(d+b) ∫_0^∞ x^{a+b−1}(1+x)^{b−a}(x+y+1)^{−b−c}(x+z+1)^{−b−d} dx.
pub fn appell_index_integral(a: f64, b: f64, cc: f64, d: f64, y: f64, z: f64, tol: f64) -> Result<Sides> {
    positive(&[a, b, cc, d])?;
    require(y >= 0.0 && z >= 0.0, "y, z ≥ 0")?;
    let lhs = spectral_integral(
        &[a, b, cc, d],
        |s| Ok(index_kernel(cc, s, a + cc, -y)? * index_kernel(d, s, a + d, -z)?),
        tol,
    )?;
    let integral = integrate_log_map(
        |x| x.powf(a + b - 1.0) * (1.0 + x).powf(b - a) * (x + y + 1.0).powf(-b - cc) * (x + z + 1.0).powf(-b - d),
        tol,
    )?
    .value;
    let rhs = gamma_ratio_real(&[cc + a, cc + b, d + a, d + b], &[])? * integral;
    Ok(Sides { lhs, rhs })
}

/// The z = y case: the x-integral collapses to
/// Π_{pairs}Γ / Γ(a+b+c+d) · ₂F₁(2b+c+d, c+d; a+b+c+d; −y).
pub fn appell_diagonal_index_integral(a: f64, b: f64, cc: f64, d: f64, y: f64, tol: f64) -> Result<Sides> {
    positive(&[a, b, cc, d])?;
    require(y >= 0.0, "y ≥ 0")?;
    let lhs = spectral_integral(
        &[a, b, cc, d],
        |s| Ok(index_kernel(cc, s, a + cc, -y)? * index_kernel(d, s, a + d, -y)?),
        tol,
    )?;
    let sum = a + b + cc + d;
    let g = gamma_ratio_real(&[a + b, a + cc, a + d, b + cc, b + d, cc + d], &[sum])?;
    let rhs = g * f21_real(2.0 * b + cc + d, cc + d, sum, -y)?;
    Ok(Sides { lhs, rhs })
}

/// Plancherel for (1+x)^{b−a}(1+x+y)^{−e−b} and ₂F₁(a+c, a+d; a+b+c+d; −x):
/// (1/2π)∫_0^∞ |Γ(a,b,c,d,e + is)/Γ(2is)|² F(e±is; a+e; −y) ds
/// = (1+y)^{a−e} Γ(a+e)Γ(b+c)Γ(b+d)Γ(c+d) · MB{a+b, a+c, a+d | e−a, 0 || | a+b+c+d} at 1/(1+y).
pub fn mb_index_integral(a: f64, b: f64, cc: f64, d: f64, e: f64, y: f64, tol: f64) -> Result<Sides> {
    positive(&[a, b, cc, d, e])?;
    require(y >= 0.0, "y ≥ 0")?;
    let lhs = spectral_integral(&[a, b, cc, d, e], |s| index_kernel(e, s, a + e, -y), tol)?;
    let mb = MBSpec::real(&[a + b, a + cc, a + d], &[e - a, 0.0], &[], &[a + b + cc + d], 1.0 / (1.0 + y));
    let g = gamma_ratio_real(&[a + e, b + cc, b + d, cc + d], &[])?;
    let rhs = (1.0 + y).powf(a - e) * g * eval_mb(&mb, tol)?.re;
    Ok(Sides { lhs, rhs })
}

/// Two-sided check of one of the index-integral identities, through the catalog.
pub fn section4_verify(id: IdentityId, params: &[f64], tol: f64) -> Result<VerificationReport> {
    use IdentityId::*;
    if !matches!(id, Eq4_1 | Eq4_2 | Eq4_3 | Eq4_3Diag | Eq4_4) {
        return Err(Error::OutOfDomain(format!("{id} is not an index-integral identity")));
    }
    Ok(verify(id, params, tol))
}
