//! Wilson polynomials and the finite orthogonal systems built from them
//!
//! Polynomials live in the monomial basis of t = s². Orthogonality is checked
//! two ways: by quadrature / lattice sums against the weight, and by pure gamma
//! arithmetic, expanding pₖpₗ in the basis hₖ = (x+is)ₖ(x−is)ₖ whose moments
//! are closed-form gamma ratios.
//!
//! All weights on [0, ∞) carry the measure ds/(2π) (the uniform convention of
//! the catalog); with it the classical G₀₀ at a=b=c=d=1/2 is 1.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gamma::{gamma_ratio_real, gamma_real, ln_abs_sq_gamma, ln_inv_abs_sq_gamma_2is, pochhammer_real, sin_pi};
use crate::index_transform::weight;
use crate::quadrature::{
    bilateral_sum, integrate_halfline, integrate_pv_lattice, integrate_unit_interval, IntegrandHandle,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilsonParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl WilsonParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        if ![a, b, c, d].iter().all(|x| x.is_finite()) {
            return Err(Error::OutOfDomain("Wilson parameters must be finite".into()));
        }
        Ok(WilsonParams { a, b, c, d })
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn sum(&self) -> f64 {
        self.a + self.b + self.c + self.d
    }

    /// The six pairwise sums.
    pub fn pair_sums(&self) -> [f64; 6] {
        let [a, b, c, d] = self.as_array();
        [a + b, a + c, a + d, b + c, b + d, c + d]
    }

    /// Parameters reordered as (x[perm[0]], …, x[perm[3]]).
    pub fn permuted(&self, perm: [usize; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &i in &perm {
            if i > 3 || seen[i] {
                return Err(Error::InvalidPermutation(format!("{perm:?}")));
            }
            seen[i] = true;
        }
        let x = self.as_array();
        Ok(WilsonParams { a: x[perm[0]], b: x[perm[1]], c: x[perm[2]], d: x[perm[3]] })
    }
}

/// c₀ + c₁t + … + c_N t^N with t = s².
#[derive(Debug, Clone, PartialEq)]
pub struct EvenPolynomial {
    pub coefficients: Vec<f64>,
}

impl EvenPolynomial {
    pub fn new(mut coefficients: Vec<f64>) -> Self {
        while coefficients.len() > 1 && coefficients.last() == Some(&0.0) {
            coefficients.pop();
        }
        if coefficients.is_empty() {
            coefficients.push(0.0);
        }
        EvenPolynomial { coefficients }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval_t(&self, t: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.eval_t(s * s)
    }

    pub fn mul(&self, other: &EvenPolynomial) -> EvenPolynomial {
        let mut out = vec![0.0; self.coefficients.len() + other.coefficients.len() - 1];
        for (i, &x) in self.coefficients.iter().enumerate() {
            for (j, &y) in other.coefficients.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        EvenPolynomial::new(out)
    }

    fn add_scaled(&mut self, other: &EvenPolynomial, factor: f64) {
        if self.coefficients.len() < other.coefficients.len() {
            self.coefficients.resize(other.coefficients.len(), 0.0);
        }
        for (x, &y) in self.coefficients.iter_mut().zip(&other.coefficients) {
            *x += factor * y;
        }
    }

    /// hₖ = (x+is)ₖ(x−is)ₖ = Π_{j<k} ((x+j)² + t), monic in t.
    pub fn h_basis(base: f64, k: usize) -> EvenPolynomial {
        (0..k).fold(EvenPolynomial::new(vec![1.0]), |p, j| {
            let r = base + j as f64;
            p.mul(&EvenPolynomial::new(vec![r * r, 1.0]))
        })
    }
}

/// Coefficients of `poly` in h₀, h₁, … with base point `base`.
pub fn h_basis_expand(poly: &EvenPolynomial, base: f64) -> Vec<f64> {
    let n = poly.degree();
    let mut rest = poly.clone();
    rest.coefficients.resize(n + 1, 0.0);
    let mut out = vec![0.0; n + 1];
    for k in (0..=n).rev() {
        let ck = rest.coefficients[k];
        out[k] = ck;
        if ck != 0.0 {
            rest.add_scaled(&EvenPolynomial::h_basis(base, k), -ck);
        }
    }
    out
}

/// Coefficients of pₙ in the h-basis at base point a.
///
/// The lower ₄F₃ parameters are cancelled against the prefactor,
/// (a+b)ₙ/(a+b)ₖ = (a+b+k)ₙ₋ₖ, so shifted quadruples such as (1−aⱼ) with
/// integer pair sums never hit a Pochhammer pole.
fn wilson_h_coefficients(wp: &WilsonParams, n: usize) -> Vec<f64> {
    let s = wp.sum();
    let (a, b, c, d) = (wp.a, wp.b, wp.c, wp.d);
    (0..=n)
        .map(|k| {
            let mut term = pochhammer_real(-(n as f64), k) * pochhammer_real(n as f64 + s - 1.0, k);
            term /= pochhammer_real(1.0, k);
            term * pochhammer_real(a + b + k as f64, n - k)
                * pochhammer_real(a + c + k as f64, n - k)
                * pochhammer_real(a + d + k as f64, n - k)
        })
        .collect()
}

/// pₙ(a,b,c,d; t) in the monomial basis.
pub fn wilson_poly(wp: &WilsonParams, n: usize) -> EvenPolynomial {
    let mut p = EvenPolynomial::new(vec![0.0]);
    for (k, ck) in wilson_h_coefficients(wp, n).into_iter().enumerate() {
        p.add_scaled(&EvenPolynomial::h_basis(wp.a, k), ck);
    }
    EvenPolynomial::new(p.coefficients)
}

/// pₙ(a,b,c,d; s²) = (a+b)ₙ(a+c)ₙ(a+d)ₙ ₄F₃[−n, n+a+b+c+d−1, a+is, a−is; a+b, a+c, a+d; 1].
pub fn wilson_eval(wp: &WilsonParams, n: usize, s: f64) -> f64 {
    let t = s * s;
    wilson_h_coefficients(wp, n)
        .into_iter()
        .enumerate()
        .map(|(k, ck)| ck * (0..k).map(|j| (wp.a + j as f64).powi(2) + t).product::<f64>())
        .sum()
}

/// max |pₙ(wp) − pₙ(permuted wp)| over the grid, relative to max |pₙ(wp)|.
pub fn symmetry_check(wp: &WilsonParams, n: usize, perm: [usize; 4], s_grid: &[f64]) -> Result<f64> {
    let other = wp.permuted(perm)?;
    let mut diff: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &s in s_grid {
        let x = wilson_eval(wp, n, s);
        diff = diff.max((x - wilson_eval(&other, n, s)).abs());
        scale = scale.max(x.abs());
    }
    Ok(if scale == 0.0 { diff } else { diff / scale })
}

/// All 24 permutations of four indices.
pub fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if (0..4).all(|i| p.contains(&i)) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn symmetric(n: usize, entry: impl Fn(usize, usize) -> Result<f64>) -> Result<DMatrix<f64>> {
    let mut g = DMatrix::zeros(n, n);
    for k in 0..n {
        for l in k..n {
            let v = entry(k, l)?;
            g[(k, l)] = v;
            g[(l, k)] = v;
        }
    }
    Ok(g)
}

/// Gₘₙ = (1/2π) ∫₀^∞ pₘpₙ |Γ(a+is)Γ(b+is)Γ(c+is)Γ(d+is)/Γ(2is)|² ds by quadrature.
pub fn classical_gram(wp: &WilsonParams, n_max: usize, tol: f64) -> Result<DMatrix<f64>> {
    if !wp.as_array().iter().all(|&x| x > 0.0) {
        return Err(Error::OutOfDomain("the classical weight needs a, b, c, d > 0".into()));
    }
    let polys: Vec<EvenPolynomial> = (0..=n_max).map(|n| wilson_poly(wp, n)).collect();
    let params = wp.as_array();
    symmetric(n_max + 1, |k, l| {
        let (pk, pl) = (&polys[k], &polys[l]);
        let h = IntegrandHandle::new(move |s| pk.eval(s) * pl.eval(s) * weight(&params, s));
        Ok(integrate_halfline(&h, tol)?.value / (2.0 * PI))
    })
}

/// The squared norm confirmed by quadrature:
/// n! Π Γ(pair+n) / (Γ(S+n−1)(S+2n−1)), S = a+b+c+d, measure ds/(2π).
pub fn classical_norm(wp: &WilsonParams, n: usize) -> Result<f64> {
    let nn = n as f64;
    let s = wp.sum();
    let num: Vec<f64> = std::iter::once(nn + 1.0).chain(wp.pair_sums().iter().map(|&x| x + nn)).collect();
    Ok(gamma_ratio_real(&num, &[s + nn - 1.0])? / (s + 2.0 * nn - 1.0))
}

/// The norm exactly as printed: Γ(S+n) in place of Γ(S+n−1), under the
/// printed weight (1/π)|…|², i.e. twice the measure used here.
pub fn printed_classical_norm(wp: &WilsonParams, n: usize) -> Result<f64> {
    let nn = n as f64;
    let s = wp.sum();
    let num: Vec<f64> = std::iter::once(nn + 1.0).chain(wp.pair_sums().iter().map(|&x| x + nn)).collect();
    Ok(gamma_ratio_real(&num, &[s + nn])? / (s + 2.0 * nn - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormVariant {
    Printed,
    Corrected,
    Neither,
}

impl fmt::Display for NormVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormVariant::Printed => "printed Γ(S+n)",
            NormVariant::Corrected => "corrected Γ(S+n−1)",
            NormVariant::Neither => "neither",
        })
    }
}

/// Quadrature diagonal against both norm formulas, all on the printed 1/π
/// weight so the printed variant gets a fair test.
#[derive(Debug, Clone, PartialEq)]
pub struct NormErratumReport {
    pub oracle: Vec<f64>,
    pub printed: Vec<f64>,
    pub corrected: Vec<f64>,
    pub confirmed: NormVariant,
}

pub fn classical_norm_erratum(wp: &WilsonParams, n_max: usize, tol: f64) -> Result<NormErratumReport> {
    let g = classical_gram(wp, n_max, tol)?;
    let oracle: Vec<f64> = (0..=n_max).map(|n| 2.0 * g[(n, n)]).collect();
    let printed = (0..=n_max).map(|n| printed_classical_norm(wp, n)).collect::<Result<Vec<_>>>()?;
    let corrected = (0..=n_max).map(|n| Ok(2.0 * classical_norm(wp, n)?)).collect::<Result<Vec<_>>>()?;
    let matches = |v: &[f64]| oracle.iter().zip(v).all(|(o, x)| (o - x).abs() <= 1e3 * tol * o.abs());
    let confirmed = if matches(&printed) {
        NormVariant::Printed
    } else if matches(&corrected) {
        NormVariant::Corrected
    } else {
        NormVariant::Neither
    };
    Ok(NormErratumReport { oracle, printed, corrected, confirmed })
}

#[derive(Debug, Clone, PartialEq)]
pub struct JacobiReport {
    /// max |B(Rₖ,Tₗ)| / √|B(Rₖ,Tₖ)B(Rₗ,Tₗ)| over k ≠ l
    pub residual: f64,
    pub norms: Vec<f64>,
}

fn jacobi_coefficients(mu: f64, nu: f64, n: usize) -> Vec<f64> {
    (0..=n)
        .map(|j| {
            pochhammer_real(-(n as f64), j) * pochhammer_real(n as f64 + mu + nu - 1.0, j)
                / (pochhammer_real(nu, j) * pochhammer_real(1.0, j))
        })
        .collect()
}

/// Biorthogonality of Rₙ, Tₙ under B(eₖ, fₗ) = Γ(ν+k+l)/Γ(μ+ν+k+l), sums from j = 0.
pub fn jacobi_biorthogonal(mu: f64, nu: f64, n: usize) -> Result<JacobiReport> {
    if !(mu > 0.0 && nu > 0.0) || n == 0 || n > 20 {
        return Err(Error::OutOfDomain(format!("need μ, ν > 0 and 1 ≤ N ≤ 20, got {mu}, {nu}, {n}")));
    }
    // Γ(ν+m)/Γ(μ+ν+m) by the ratio recurrence: one log-gamma rounding instead of 2N
    let mut diag = vec![gamma_ratio_real(&[nu], &[mu + nu])?];
    for m in 0..2 * n {
        let m = m as f64;
        let next = diag[diag.len() - 1] * (nu + m) / (mu + nu + m);
        diag.push(next);
    }
    let b = DMatrix::from_fn(n, n, |k, l| diag[k + l]);
    let vecs: Vec<Vec<f64>> = (0..n).map(|k| jacobi_coefficients(mu, nu, k)).collect();
    let pair = |k: usize, l: usize| -> f64 {
        let mut acc = 0.0;
        for (i, x) in vecs[k].iter().enumerate() {
            for (j, y) in vecs[l].iter().enumerate() {
                acc += x * y * b[(i, j)];
            }
        }
        acc
    };
    let norms: Vec<f64> = (0..n).map(|k| pair(k, k)).collect();
    let mut residual: f64 = 0.0;
    for k in 0..n {
        for l in 0..n {
            if k != l {
                residual = residual.max(pair(k, l).abs() / (norms[k] * norms[l]).abs().sqrt());
            }
        }
    }
    Ok(JacobiReport { residual, norms })
}

/// B(Rₙ, Tₙ) as confirmed by the Jacobi integral:
/// n! Γ(ν)² Γ(μ+n) / (Γ(μ) Γ(ν+n) Γ(n+μ+ν−1) (μ+ν+2n−1)).
pub fn jacobi_norm(mu: f64, nu: f64, n: usize) -> Result<f64> {
    Ok(printed_jacobi_norm(mu, nu, n)? * gamma_ratio_real(&[nu], &[mu])?)
}

/// The norm as printed, n! Γ(ν) Γ(μ+n) / (Γ(ν+n) Γ(n+μ+ν−1) (μ+ν+2n−1)).
pub fn printed_jacobi_norm(mu: f64, nu: f64, n: usize) -> Result<f64> {
    let nn = n as f64;
    let g = gamma_ratio_real(&[nn + 1.0, nu, mu + nn], &[nu + nn, nn + mu + nu - 1.0])?;
    Ok(g / (mu + nu + 2.0 * nn - 1.0))
}

/// (1/Γ(μ)) ∫₀¹ Rₙ(x)² x^{ν−1}(1−x)^{μ−1} dx with Rₙ = Σⱼ coef_j xʲ.
pub fn jacobi_integral_oracle(mu: f64, nu: f64, n: usize, tol: f64) -> Result<f64> {
    let coef = jacobi_coefficients(mu, nu, n);
    let r = |x: f64| coef.iter().rev().fold(0.0, |acc, &c| acc * x + c);
    let v = integrate_unit_interval(|t, omt| r(t).powi(2) * t.powf(nu - 1.0) * omt.powf(mu - 1.0), tol)?;
    Ok(v.value / gamma_real(mu)?)
}

/// The weights whose moments are known in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSpec {
    /// |Γ(a+is)Γ(b+is)Γ(c+is)Γ(d+is)/Γ(2is)|² on [0, ∞)
    Classical(WilsonParams),
    /// |Γ(p+is)Γ(u+is)Γ(v+is)/(Γ(2is)Γ(q+is))|² on [0, ∞)
    W1 { p: f64, u: f64, v: f64, q: f64 },
    /// the Dougall lattice weight: mass (α+n)/Πⱼ Γ(aⱼ+α+n)Γ(aⱼ−α−n) at is = α+n
    W2Dougall { a: [f64; 4], alpha: f64 },
    /// the Askey integrand Γ(1−2s)Γ(1+2s)/Πⱼ Γ(aⱼ+s)Γ(aⱼ−s) on ℝ (principal
    /// value; α only positions the lattice cut-off of the numeric check)
    W3Askey { a: [f64; 4], alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MomentKind {
    ClassicalW,
    W1,
    W2Dougall,
    W3Askey,
}

impl MomentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MomentKind::ClassicalW => "CLASSICAL_W",
            MomentKind::W1 => "W1",
            MomentKind::W2Dougall => "W2_DOUGALL",
            MomentKind::W3Askey => "W3_ASKEY",
        }
    }
}

impl fmt::Display for MomentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl WeightSpec {
    pub fn kind(&self) -> MomentKind {
        match self {
            WeightSpec::Classical(_) => MomentKind::ClassicalW,
            WeightSpec::W1 { .. } => MomentKind::W1,
            WeightSpec::W2Dougall { .. } => MomentKind::W2Dougall,
            WeightSpec::W3Askey { .. } => MomentKind::W3Askey,
        }
    }

    /// The quadruple whose Wilson polynomials are orthogonal for this weight.
    pub fn wilson_params(&self) -> WilsonParams {
        match *self {
            WeightSpec::Classical(wp) => wp,
            WeightSpec::W1 { p, u, v, q } => WilsonParams { a: p, b: u, c: v, d: 1.0 - q },
            WeightSpec::W2Dougall { a, .. } | WeightSpec::W3Askey { a, .. } => {
                WilsonParams { a: 1.0 - a[0], b: 1.0 - a[1], c: 1.0 - a[2], d: 1.0 - a[3] }
            }
        }
    }

    /// Moments h_k are finite for k below this budget.
    fn moment_budget(&self) -> f64 {
        match *self {
            WeightSpec::Classical(_) => f64::INFINITY,
            WeightSpec::W1 { p, u, v, q } => q - p - u - v,
            WeightSpec::W2Dougall { a, .. } | WeightSpec::W3Askey { a, .. } => a.iter().sum::<f64>() - 3.0,
        }
    }

    /// The degree bound 4n < budget of the finite system.
    fn degree_budget(&self) -> f64 {
        match *self {
            WeightSpec::Classical(_) => f64::INFINITY,
            WeightSpec::W1 { p, u, v, q } => q - p - u - v - 1.0,
            WeightSpec::W2Dougall { a, .. } | WeightSpec::W3Askey { a, .. } => a.iter().sum::<f64>() - 3.0,
        }
    }
}

/// A linear functional on even polynomials, known through ℓ(hₖ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentFunctional {
    pub weight: WeightSpec,
    pub base_point: f64,
}

impl MomentFunctional {
    pub fn new(weight: WeightSpec) -> Self {
        MomentFunctional { weight, base_point: weight.wilson_params().a }
    }

    pub fn kind(&self) -> MomentKind {
        self.weight.kind()
    }
}

// Γ(a₁+a₂+a₃+a₄−k−3) / [Π_{j≥2} Γ(a₁+aⱼ−k−1) · Π_{2≤j<l} Γ(aⱼ+aₗ−1)]
fn dougall_core(a: &[f64; 4], k: usize) -> Result<f64> {
    let kk = k as f64;
    let s: f64 = a.iter().sum();
    let den = [
        a[0] + a[1] - kk - 1.0,
        a[0] + a[2] - kk - 1.0,
        a[0] + a[3] - kk - 1.0,
        a[1] + a[2] - 1.0,
        a[1] + a[3] - 1.0,
        a[2] + a[3] - 1.0,
    ];
    gamma_ratio_real(&[s - kk - 3.0], &den)
}

/// ℓ(hₖ) in closed form.
pub fn moment(mf: &MomentFunctional, k: usize) -> Result<f64> {
    let kk = k as f64;
    if kk >= mf.weight.moment_budget() {
        return Err(Error::Divergent(format!(
            "{} moment of order {k} is infinite (budget {})",
            mf.kind(),
            mf.weight.moment_budget()
        )));
    }
    match mf.weight {
        WeightSpec::Classical(wp) => {
            let [a, b, c, d] = wp.as_array();
            gamma_ratio_real(&[a + b + kk, a + c + kk, a + d + kk, b + c, b + d, c + d], &[wp.sum() + kk])
        }
        WeightSpec::W1 { p, u, v, q } => gamma_ratio_real(
            &[p + v + kk, p + u + kk, u + v, q - u - v - p - kk],
            &[q - p - kk, q - u, q - v],
        ),
        WeightSpec::W2Dougall { a, alpha } => Ok(sin_pi(2.0 * alpha) / (2.0 * PI) * dougall_core(&a, k)?),
        WeightSpec::W3Askey { a, .. } => dougall_core(&a, k),
    }
}

/// ℓ(poly) through the h-basis expansion.
pub fn apply_functional(mf: &MomentFunctional, poly: &EvenPolynomial) -> Result<f64> {
    let coef = h_basis_expand(poly, mf.base_point);
    let mut acc = 0.0;
    for (k, &ck) in coef.iter().enumerate() {
        if ck != 0.0 {
            acc += ck * moment(mf, k)?;
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteSystem {
    pub functional: MomentFunctional,
    pub wilson_params: WilsonParams,
    pub n_max: usize,
}

impl FiniteSystem {
    /// The largest n with 4n below the weight's budget.
    pub fn new(weight: WeightSpec) -> Result<Self> {
        let budget = weight.degree_budget();
        if !budget.is_finite() {
            return Err(Error::OutOfDomain("the classical weight has no degree bound; use with_degree".into()));
        }
        if budget <= 0.0 {
            return Err(Error::OutOfDomain(format!("degree budget {budget} leaves no polynomials")));
        }
        let n_max = ((budget / 4.0).ceil() as usize).saturating_sub(1);
        Self::with_degree(weight, n_max)
    }

    pub fn with_degree(weight: WeightSpec, n_max: usize) -> Result<Self> {
        if 4.0 * n_max as f64 >= weight.degree_budget() {
            return Err(Error::OutOfDomain(format!(
                "degree {n_max} exceeds the bound 4n < {}",
                weight.degree_budget()
            )));
        }
        Ok(FiniteSystem {
            functional: MomentFunctional::new(weight),
            wilson_params: weight.wilson_params(),
            n_max,
        })
    }

    pub fn polynomials(&self) -> Vec<EvenPolynomial> {
        (0..=self.n_max).map(|n| wilson_poly(&self.wilson_params, n)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GramMode {
    Algebraic,
    Numeric,
}

// 1/(Γ(a+x)Γ(a−x)) = sin π(a−y)/π · Γ(1−a+y)/Γ(a+y), y = |x|; stays finite for large |x|
fn inv_gamma_pair(a: f64, x: f64) -> Result<f64> {
    let y = x.abs();
    let sp = sin_pi(a - y);
    if sp == 0.0 {
        return Ok(0.0);
    }
    Ok(sp / PI * gamma_ratio_real(&[1.0 - a + y], &[a + y])?)
}

/// The Askey integrand Γ(1−2s)Γ(1+2s)/Πⱼ Γ(aⱼ+s)Γ(aⱼ−s) = (2πs/sin 2πs)/Πⱼ Γ(aⱼ±s).
pub fn askey_weight(a: &[f64; 4], s: f64) -> f64 {
    let lead = if s == 0.0 { 1.0 } else { 2.0 * PI * s / sin_pi(2.0 * s) };
    let mut v = lead;
    for &aj in a {
        match inv_gamma_pair(aj, s) {
            Ok(x) => v *= x,
            Err(_) => return f64::NAN,
        }
    }
    v
}

/// The Dougall summand (α+n)/Πⱼ Γ(aⱼ+α+n)Γ(aⱼ−α−n).
pub fn dougall_term(a: &[f64; 4], alpha: f64, n: i64) -> f64 {
    let x = alpha + n as f64;
    let mut v = x;
    for &aj in a {
        match inv_gamma_pair(aj, x) {
            Ok(y) => v *= y,
            Err(_) => return f64::NAN,
        }
    }
    v
}

fn numeric_pairing(w: &WeightSpec, pk: &EvenPolynomial, pl: &EvenPolynomial, tol: f64) -> Result<f64> {
    let deg = (pk.degree() + pl.degree()) as f64;
    match *w {
        WeightSpec::Classical(wp) => {
            let params = wp.as_array();
            let h = IntegrandHandle::new(move |s| pk.eval(s) * pl.eval(s) * weight(&params, s));
            Ok(integrate_halfline(&h, tol)?.value / (2.0 * PI))
        }
        WeightSpec::W1 { p, u, v, q } => {
            let f = move |s: f64| {
                if s == 0.0 {
                    return 0.0;
                }
                // in log space: the numerator and denominator gammas under/overflow separately
                let mut l = ln_inv_abs_sq_gamma_2is(s);
                for (x, sign) in [(p, 1.0), (u, 1.0), (v, 1.0), (q, -1.0)] {
                    l += sign * ln_abs_sq_gamma(x, s).unwrap_or(f64::NAN);
                }
                pk.eval(s) * pl.eval(s) * l.exp()
            };
            let h = IntegrandHandle::new(f).decay(2.0 * (q - p - u - v) + 1.0 - 2.0 * deg);
            Ok(integrate_halfline(&h, tol)?.value / (2.0 * PI))
        }
        WeightSpec::W2Dougall { a, alpha } => {
            let term = |n: i64| {
                let x = alpha + n as f64;
                let t = -x * x;
                dougall_term(&a, alpha, n) * pk.eval_t(t) * pl.eval_t(t)
            };
            Ok(bilateral_sum(&term, tol)?.value)
        }
        WeightSpec::W3Askey { a, alpha } => {
            let sum: f64 = a.iter().sum();
            if sum - deg <= 3.0 {
                return Err(Error::NonConvergence(format!(
                    "Askey principal value needs Σa − deg > 3, got {}",
                    sum - deg
                )));
            }
            let f = move |s: f64| {
                let t = -s * s;
                askey_weight(&a, s) * pk.eval_t(t) * pl.eval_t(t)
            };
            let h = IntegrandHandle::new(f).decay(2.0 * sum - 5.0 - 2.0 * deg).even()?.poles(0.5, 0.0);
            Ok(integrate_pv_lattice(&h, alpha, tol)?.value)
        }
    }
}

/// Gₖₗ = ℓ(pₖpₗ) for k, l ≤ n_max.
///
/// Algebraic: expand pₖpₗ in the h-basis and apply the closed-form moments.
/// Numeric: quadrature (classical, W1), the Dougall lattice sum (W2) or the
/// lattice principal value (W3, only where it converges).
pub fn finite_gram(fs: &FiniteSystem, mode: GramMode, tol: f64) -> Result<DMatrix<f64>> {
    let polys = fs.polynomials();
    symmetric(fs.n_max + 1, |k, l| match mode {
        GramMode::Algebraic => apply_functional(&fs.functional, &polys[k].mul(&polys[l])),
        GramMode::Numeric => numeric_pairing(&fs.functional.weight, &polys[k], &polys[l], tol),
    })
}

/// max |Gₖₗ| / √|GₖₖGₗₗ| over k ≠ l.
pub fn off_diagonal_ratio(g: &DMatrix<f64>) -> f64 {
    let n = g.nrows();
    let mut worst: f64 = 0.0;
    for k in 0..n {
        for l in 0..n {
            if k != l {
                worst = worst.max(g[(k, l)].abs() / (g[(k, k)] * g[(l, l)]).abs().sqrt());
            }
        }
    }
    worst
}

/// max |Aₖₗ − Bₖₗ| relative to max |Bₖₗ|.
pub fn gram_distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    a.iter().zip(b.iter()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())) / scale
}

/// The constant c with A ≈ c·B, from entries where B is not negligible, and the
/// largest relative deviation of those entries from it.
pub fn proportionality(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<(f64, f64)> {
    let scale = b.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let ratios: Vec<f64> = a
        .iter()
        .zip(b.iter())
        .filter(|(_, y)| y.abs() > 1e-6 * scale)
        .map(|(x, y)| x / y)
        .collect();
    let Some(&c0) = ratios.first() else {
        return Err(Error::OutOfDomain("no significant entries to compare".into()));
    };
    let spread = ratios.iter().fold(0.0f64, |m, r| m.max((r / c0 - 1.0).abs()));
    Ok((c0, spread))
}

impl MomentKind {
    pub const ALL: [MomentKind; 4] = [MomentKind::ClassicalW, MomentKind::W1, MomentKind::W2Dougall, MomentKind::W3Askey];

    pub fn anchor(self) -> &'static str {
        match self {
            MomentKind::ClassicalW => "Wilson polynomials, classical weight",
            MomentKind::W1 => "finite system W1",
            MomentKind::W2Dougall => "finite system W2 (Dougall lattice)",
            MomentKind::W3Askey => "finite system W3 (Askey principal value)",
        }
    }

    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            MomentKind::ClassicalW => &["a", "b", "c", "d"],
            MomentKind::W1 => &["p", "u", "v", "q"],
            MomentKind::W2Dougall | MomentKind::W3Askey => &["a1", "a2", "a3", "a4", "alpha"],
        }
    }

    pub fn domain(self) -> &'static str {
        match self {
            MomentKind::ClassicalW => "a, b, c, d > 0; degrees 0..=3",
            MomentKind::W1 => "p, u, v > 0, q - p - u - v > 1",
            MomentKind::W2Dougall => "a_k > 0, a1+a2+a3+a4 > 3, 0 < alpha < 1, alpha != 1/2",
            MomentKind::W3Askey => "a_k > 0, a1+a2+a3+a4 > 3, 0 < alpha < 1, alpha != 1/2",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            MomentKind::ClassicalW => 1e-8,
            MomentKind::W2Dougall => 1e-7,
            MomentKind::W1 | MomentKind::W3Askey => 1e-6,
        }
    }

    pub fn weight_spec(self, p: &[f64]) -> Result<WeightSpec> {
        if p.len() != self.param_names().len() || !p.iter().all(|x| x.is_finite()) {
            return Err(Error::OutOfDomain(format!("{self} takes {} finite parameters", self.param_names().len())));
        }
        if !p.iter().take(4).all(|&x| x > 0.0) {
            return Err(Error::OutOfDomain(format!("{self} needs positive parameters")));
        }
        Ok(match self {
            MomentKind::ClassicalW => WeightSpec::Classical(WilsonParams::new(p[0], p[1], p[2], p[3])?),
            MomentKind::W1 => WeightSpec::W1 { p: p[0], u: p[1], v: p[2], q: p[3] },
            MomentKind::W2Dougall | MomentKind::W3Askey => {
                let (a, alpha) = ([p[0], p[1], p[2], p[3]], p[4]);
                if !(alpha > 0.0 && alpha < 1.0 && alpha != 0.5) {
                    return Err(Error::OutOfDomain(format!("alpha = {alpha} not in (0,1) minus 1/2")));
                }
                if self == MomentKind::W2Dougall {
                    WeightSpec::W2Dougall { a, alpha }
                } else {
                    WeightSpec::W3Askey { a, alpha }
                }
            }
        })
    }

    /// One in-domain point; every point has at least one nonconstant polynomial
    /// besides p₀ except for the classical family, which runs to degree 3.
    pub fn sample(self, rng: &mut impl Rng) -> Vec<f64> {
        let mut u = |lo: f64, hi: f64| rng.gen_range(lo..hi);
        match self {
            MomentKind::ClassicalW => (0..4).map(|_| u(0.3, 1.5)).collect(),
            MomentKind::W1 => {
                let (p, uu, v) = (u(0.3, 0.8), u(0.3, 0.8), u(0.3, 0.8));
                vec![p, uu, v, p + uu + v + 1.0 + u(4.5, 8.5)]
            }
            MomentKind::W2Dougall | MomentKind::W3Askey => {
                let mut a: Vec<f64> = (0..4).map(|_| u(1.6, 2.4)).collect();
                a.push(u(0.1, 0.4));
                a
            }
        }
    }

    pub fn sample_points(self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let stream = 100 + MomentKind::ALL.iter().position(|&x| x == self).unwrap_or(0) as u64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        (0..count).map(|_| self.sample(&mut rng)).collect()
    }
}

impl FromStr for MomentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MomentKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::OutOfDomain(format!("unknown finite system {s:?}")))
    }
}

/// Numeric against algebraic Gram matrix of one finite system.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemCheck {
    pub n_max: usize,
    /// top diagonal entry, by quadrature / lattice sum
    pub numeric: f64,
    /// the same entry from the moment functional
    pub algebraic: f64,
    /// max of the entrywise Gram distance and the algebraic off-diagonal ratio
    pub rel_error: f64,
}

/// Builds the system at `p`, computes both Gram matrices and compares them.
pub fn check_system(kind: MomentKind, p: &[f64], tol: f64) -> Result<SystemCheck> {
    let w = kind.weight_spec(p)?;
    let fs = match w {
        WeightSpec::Classical(_) => FiniteSystem::with_degree(w, 3)?,
        _ => FiniteSystem::new(w)?,
    };
    let quad_tol = (1e-4 * tol).clamp(1e-12, 1e-9);
    let alg = finite_gram(&fs, GramMode::Algebraic, quad_tol)?;
    let num = match w {
        WeightSpec::Classical(wp) => classical_gram(&wp, fs.n_max, quad_tol)?,
        _ => finite_gram(&fs, GramMode::Numeric, quad_tol)?,
    };
    let n = fs.n_max;
    Ok(SystemCheck {
        n_max: n,
        numeric: num[(n, n)],
        algebraic: alg[(n, n)],
        rel_error: gram_distance(&num, &alg).max(off_diagonal_ratio(&alg)),
    })
}
