//! Mellin–Barnes integrals
//!
//! (1/2πi) ∫ Π Γ(aᵢ+s) Π Γ(bᵣ−s) / (Π Γ(c_k−s) Π Γ(d_l+s)) · z^{−s} ds
//!
//! along a vertical line separating the left poles −aᵢ−j from the right
//! poles bᵣ+j, plus the residue expansion into pFq series.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::gamma::{gamma_ratio, log_gamma, re, ComplexValue, GammaRatioSpec};
use crate::hypergeometric::{f21_neg_axis, f21_one_minus, f21_real, pfq, SeriesSpec};
use crate::quadrature::{adaptive, integrate_log_map, integrate_unit_interval};

#[derive(Debug, Clone, PartialEq)]
pub struct MBSpec {
    /// Γ(a + s) in the numerator
    pub a_list: Vec<ComplexValue>,
    /// Γ(b − s) in the numerator
    pub b_list: Vec<ComplexValue>,
    /// Γ(c − s) in the denominator
    pub c_list: Vec<ComplexValue>,
    /// Γ(d + s) in the denominator
    pub d_list: Vec<ComplexValue>,
    pub z: ComplexValue,
}

impl MBSpec {
    pub fn real(a: &[f64], b: &[f64], cc: &[f64], d: &[f64], z: f64) -> Self {
        let v = |x: &[f64]| x.iter().map(|&t| re(t)).collect();
        MBSpec { a_list: v(a), b_list: v(b), c_list: v(cc), d_list: v(d), z: re(z) }
    }

    fn is_real(&self) -> bool {
        [&self.a_list, &self.b_list, &self.c_list, &self.d_list]
            .iter()
            .all(|l| l.iter().all(|x| x.im == 0.0))
            && self.z.im == 0.0
    }

    /// Exponential decay rate π(m+n−k−l)/2 of the integrand on a vertical line.
    pub fn decay_rate(&self) -> f64 {
        let excess = self.a_list.len() + self.b_list.len();
        let deficit = self.c_list.len() + self.d_list.len();
        PI * (excess as f64 - deficit as f64) / 2.0
    }

    /// Algebraic decay exponent on the line Re s = σ when the rate is zero.
    pub fn power_decay(&self, sigma: f64) -> f64 {
        let sum = |l: &[ComplexValue]| l.iter().map(|x| x.re).sum::<f64>();
        let (m, n, k, l) = (
            self.a_list.len() as f64,
            self.b_list.len() as f64,
            self.c_list.len() as f64,
            self.d_list.len() as f64,
        );
        let growth = sum(&self.a_list) + sum(&self.b_list) - sum(&self.c_list) - sum(&self.d_list)
            + sigma * (m - n + k - l)
            - (m + n - k - l) / 2.0;
        -growth
    }

    fn validate(&self) -> Result<()> {
        if self.a_list.len() + self.b_list.len() < self.c_list.len() + self.d_list.len() {
            return Err(Error::OutOfDomain("Mellin–Barnes integral needs m + n ≥ k + l".into()));
        }
        if self.z.im != 0.0 || self.z.re <= 0.0 {
            return Err(Error::OutOfDomain(format!("z = {} must be positive real", self.z)));
        }
        Ok(())
    }

    /// Φ(s), the integrand without the 1/2πi.
    pub fn integrand(&self, s: ComplexValue) -> Result<ComplexValue> {
        let mut acc = -s * self.z.re.ln();
        for a in &self.a_list {
            acc += log_gamma(a + s)?;
        }
        for b in &self.b_list {
            acc += log_gamma(b - s)?;
        }
        for cc in &self.c_list {
            acc -= log_gamma(cc - s)?;
        }
        for d in &self.d_list {
            acc -= log_gamma(d + s)?;
        }
        Ok(acc.exp())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourChoice {
    pub sigma: f64,
    pub margin: f64,
}

/// Vertical line at the midpoint of the gap between the two pole series.
pub fn find_contour(spec: &MBSpec) -> Result<ContourChoice> {
    let left = spec
        .a_list
        .iter()
        .map(|a| -a.re)
        .zip(spec.a_list.iter().copied())
        .max_by(|x, y| x.0.total_cmp(&y.0));
    let right = spec
        .b_list
        .iter()
        .map(|b| b.re)
        .zip(spec.b_list.iter().copied())
        .min_by(|x, y| x.0.total_cmp(&y.0));
    match (left, right) {
        (Some((l, a)), Some((r, b))) => {
            if l >= r {
                return Err(Error::Collision { left: -a.re, right: b.re });
            }
            Ok(ContourChoice { sigma: 0.5 * (l + r), margin: 0.5 * (r - l) })
        }
        (Some((l, _)), None) => Ok(ContourChoice { sigma: l + 0.5, margin: 0.5 }),
        (None, Some((r, _))) => Ok(ContourChoice { sigma: r - 0.5, margin: 0.5 }),
        (None, None) => Ok(ContourChoice { sigma: 0.0, margin: f64::INFINITY }),
    }
}

/// The integral along the line Re s = σ chosen by [`find_contour`].
pub fn eval_mb(spec: &MBSpec, tol: f64) -> Result<ComplexValue> {
    let contour = find_contour(spec)?;
    eval_mb_at(spec, contour.sigma, tol)
}

/// The integral along Re s = `sigma`; `sigma` must lie in the separating gap.
pub fn eval_mb_at(spec: &MBSpec, sigma: f64, tol: f64) -> Result<ComplexValue> {
    spec.validate()?;
    let contour = find_contour(spec)?;
    if (sigma - contour.sigma).abs() >= contour.margin {
        return Err(Error::OutOfDomain(format!("σ = {sigma} is outside the separating gap")));
    }
    let rate = spec.decay_rate();
    let power = spec.power_decay(sigma);
    if rate == 0.0 && power <= 1.0 {
        return Err(Error::NonConvergence(format!(
            "integrand decays like |t|^-{power} on the contour; not absolutely convergent"
        )));
    }
    let phi = |t: f64| spec.integrand(ComplexValue::new(sigma, t));
    // Φ(σ−it) = conj Φ(σ+it) for real data, so the half-line suffices
    let real = spec.is_real();
    let folded = |t: f64| -> Result<ComplexValue> {
        if real {
            Ok(re(2.0 * phi(t)?.re))
        } else {
            Ok(phi(t)? + phi(-t)?)
        }
    };

    let mut scale: f64 = 0.0;
    for k in 0..16 {
        scale = scale.max(folded(k as f64 * 0.25)?.norm());
    }
    if scale == 0.0 {
        return Ok(re(0.0));
    }
    // truncation from the envelope: exponential tails ~ |Φ|/rate, power tails ~ |Φ|·T/(p−1)
    let tail = |t: f64| -> Result<f64> {
        let v = folded(t)?.norm().max(folded(t * 1.1)?.norm());
        Ok(if rate > 0.0 { v / rate } else { v * t / (power - 1.0) })
    };
    let mut t_cut = 4.0;
    while tail(t_cut)? > 1e-3 * tol * scale {
        t_cut *= 1.25;
        if t_cut > 1e6 {
            return Err(Error::NonConvergence("contour integrand decays too slowly".into()));
        }
    }
    // panels no wider than half an oscillation of z^{−it}
    let lnz = spec.z.re.ln().abs();
    let width = if lnz > 0.0 { (PI / lnz).min(1.0) } else { 1.0 };
    let n = ((t_cut / width).ceil() as usize).max(4);
    let breaks: Vec<f64> = (0..=n).map(|k| t_cut * k as f64 / n as f64).collect();
    let abs_tol = 1e-2 * tol * scale;
    let re_part = adaptive(&|t| Ok(folded(t)?.re), &breaks, tol, abs_tol)?;
    let im_part = if real {
        0.0
    } else {
        adaptive(&|t| Ok(folded(t)?.im), &breaks, tol, abs_tol)?.value
    };
    // ds = i dt, so (1/2πi)∫ ds = (1/2π)∫ dt
    Ok(ComplexValue::new(re_part.value, im_part) / (2.0 * PI))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// One term of a residue expansion: prefactor · z^{power} · pFq(series).
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueTerm {
    pub prefactor: GammaRatioSpec,
    pub power: ComplexValue,
    pub series: SeriesSpec,
}

impl ResidueTerm {
    pub fn eval(&self, z: ComplexValue, tol: f64) -> Result<ComplexValue> {
        let g = gamma_ratio(&self.prefactor)?;
        if g == re(0.0) {
            return Ok(g);
        }
        Ok(g * (self.power * z.ln()).exp() * pfq(&self.series, tol)?.value)
    }
}

fn integer_gap(x: ComplexValue, y: ComplexValue) -> bool {
    let d = x - y;
    d.im.abs() < 1e-12 && (d.re - d.re.round()).abs() < 1e-12
}

/// Residue expansion: closing left sums the poles of Γ(aᵢ+s), closing right
/// those of Γ(bᵣ−s). One term per gamma on the chosen side; coincident poles
/// (two parameters on that side differing by an integer) are refused.
pub fn mb_residue_expand(spec: &MBSpec, side: Side) -> Result<Vec<ResidueTerm>> {
    spec.validate()?;
    find_contour(spec)?;
    let one = re(1.0);
    let (own, other) = match side {
        Side::Left => (&spec.a_list, &spec.b_list),
        Side::Right => (&spec.b_list, &spec.a_list),
    };
    for (i, x) in own.iter().enumerate() {
        for y in &own[i + 1..] {
            if integer_gap(*x, *y) {
                return Err(Error::CoincidentPoles(format!("{x} and {y} differ by an integer")));
            }
        }
    }
    // same-direction and opposite-direction denominators relative to `own`
    let (same_den, opp_den) = match side {
        Side::Left => (&spec.d_list, &spec.c_list),
        Side::Right => (&spec.c_list, &spec.d_list),
    };
    let sign_count = match side {
        Side::Left => spec.a_list.len() + spec.d_list.len(),
        Side::Right => spec.b_list.len() + spec.c_list.len(),
    };
    let sign = if sign_count % 2 == 0 { 1.0 } else { -1.0 };
    let arg = match side {
        Side::Left => spec.z * sign,
        Side::Right => sign / spec.z,
    };
    let mut terms = Vec::with_capacity(own.len());
    for (i, &p) in own.iter().enumerate() {
        let mut num = Vec::new();
        let mut den = Vec::new();
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        for (j, &q) in own.iter().enumerate() {
            if j != i {
                num.push(q - p);
                lower.push(one - q + p);
            }
        }
        for &q in other {
            num.push(q + p);
            upper.push(q + p);
        }
        for &q in same_den {
            den.push(q - p);
            upper.push(one - q + p);
        }
        for &q in opp_den {
            den.push(q + p);
            lower.push(q + p);
        }
        let power = match side {
            Side::Left => p,
            Side::Right => -p,
        };
        terms.push(ResidueTerm {
            prefactor: GammaRatioSpec::new(&num, &den),
            power,
            series: SeriesSpec::new(&upper, &lower, arg),
        });
    }
    Ok(terms)
}

/// Σ over the terms of a residue expansion.
pub fn eval_residue_expansion(spec: &MBSpec, side: Side, tol: f64) -> Result<ComplexValue> {
    mb_residue_expand(spec, side)?
        .iter()
        .try_fold(re(0.0), |acc, t| Ok(acc + t.eval(spec.z, tol)?))
}

/// Both sides of a convolution-type identity: a real-line integral evaluated
/// by quadrature and its Mellin–Barnes (or closed-form) counterpart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSided {
    pub lhs: f64,
    pub rhs: f64,
}

impl TwoSided {
    pub fn rel_error(&self) -> f64 {
        (self.lhs - self.rhs).abs() / self.rhs.abs().max(1e-300)
    }
}

fn g_ratio(num: &[f64], den: &[f64]) -> Result<f64> {
    Ok(gamma_ratio(&GammaRatioSpec::real(num, den))?.re)
}

fn kernel(a: f64, b: f64, cc: f64, x: f64) -> f64 {
    // NaN propagates into the quadrature as an evaluation error
    f21_neg_axis(re(a), re(b), re(cc), x).map_or(f64::NAN, |v| v.re)
}

/// ∫_0^∞ x^{α−1}(x+z)^{−ρ} ₂F₁(p,q;r;−x) dx against
/// z^{α−ρ} Γ[r / p,q,ρ] · MB{α,p,q | ρ−α, 0 || r} at argument 1/z.
pub fn power_kernel_integral(alpha: f64, rho: f64, p: f64, q: f64, r: f64, z: f64, tol: f64) -> Result<TwoSided> {
    if alpha <= 0.0 || rho <= 0.0 || alpha - rho >= p.min(q) {
        return Err(Error::OutOfDomain("needs α > 0, ρ > 0, α − ρ < min(p, q)".into()));
    }
    let lhs = integrate_log_map(|x| x.powf(alpha - 1.0) * (x + z).powf(-rho) * kernel(p, q, r, x), tol)?.value;
    let mb = MBSpec::real(&[alpha, p, q], &[rho - alpha, 0.0], &[], &[r], 1.0 / z);
    let rhs = z.powf(alpha - rho) * g_ratio(&[r], &[p, q, rho])? * eval_mb(&mb, tol)?.re;
    Ok(TwoSided { lhs, rhs })
}

/// Parameters of the product integral ∫_0^∞ x^{α−1} ₂F₁(p,q;r;−ωx) ₂F₁(u,v;w;−ω̃x) dx.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductParams {
    pub alpha: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub omega: f64,
    pub omega_t: f64,
}

fn product_lhs(pp: &ProductParams, tol: f64) -> Result<f64> {
    Ok(integrate_log_map(
        |x| {
            x.powf(pp.alpha - 1.0)
                * kernel(pp.p, pp.q, pp.r, pp.omega * x)
                * kernel(pp.u, pp.v, pp.w, pp.omega_t * x)
        },
        tol,
    )?
    .value)
}

/// The product integral against
/// ω^{−α} Γ[r,w / u,v,p,q] · MB{α,u,v | p−α, q−α, 0 || r−α | w} at ω/ω̃.
pub fn product_kernel_integral(pp: &ProductParams, tol: f64) -> Result<TwoSided> {
    let ProductParams { alpha, p, q, r, u, v, w, omega, omega_t } = *pp;
    if alpha <= 0.0 || alpha >= p.min(q) || u <= 0.0 || v <= 0.0 {
        return Err(Error::OutOfDomain("needs 0 < α < min(p, q) and u, v > 0".into()));
    }
    let lhs = product_lhs(pp, tol)?;
    let mb = MBSpec::real(&[alpha, u, v], &[p - alpha, q - alpha, 0.0], &[r - alpha], &[w], omega / omega_t);
    let rhs = omega.powf(-alpha) * g_ratio(&[r, w], &[u, v, p, q])? * eval_mb(&mb, tol)?.re;
    Ok(TwoSided { lhs, rhs })
}

/// The product integral with α = r = w against its closed form
/// ω^{u−r} ω̃^{−u} Γ[r, r, p−r+u, q−r+u, p−r+v, q−r+v / u, v, p, q, p+q+u+v−2r]
/// · ₂F₁(p−r+u, q−r+u; p+q+u+v−2r; 1 − ω/ω̃).
pub fn product_kernel_closed_form(pp: &ProductParams, tol: f64) -> Result<TwoSided> {
    let ProductParams { alpha: r, p, q, u, v, omega, omega_t, .. } = *pp;
    if r <= 0.0 || r >= p.min(q) + u.min(v) {
        return Err(Error::OutOfDomain("needs 0 < r < min(p, q) + min(u, v)".into()));
    }
    let pp = ProductParams { r, w: r, ..*pp };
    let lhs = product_lhs(&pp, tol)?;
    let e = p + q + u + v - 2.0 * r;
    let g = g_ratio(&[r, r, p - r + u, q - r + u, p - r + v, q - r + v], &[u, v, p, q, e])?;
    let f = f21_real(p - r + u, q - r + u, e, 1.0 - omega / omega_t)?;
    let rhs = omega.powf(u - r) * omega_t.powf(-u) * g * f;
    Ok(TwoSided { lhs, rhs })
}

/// Parameters of ∫_0^1 t^{μ−1}(1−t)^{ν−1} ₂F₁(α,β;ν;1−t) ₂F₁(φ,ψ;ξ;1−t) dt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitParams {
    pub mu: f64,
    pub nu: f64,
    pub alpha: f64,
    pub beta: f64,
    pub phi: f64,
    pub psi: f64,
    pub xi: f64,
}

/// The unit-interval integral against
/// Γ[ν, ξ / φ, ψ, ξ−φ, ξ−ψ] · MB{μ, μ+ν−α−β, φ, ψ | 0, ξ−φ−ψ || ν+μ−α, μ+ν−β} at 1.
pub fn unit_interval_integral(up: &UnitParams, tol: f64) -> Result<TwoSided> {
    let UnitParams { mu, nu, alpha, beta, phi, psi, xi } = *up;
    let e = mu + nu - alpha - beta;
    let mb = MBSpec::real(&[mu, e, phi, psi], &[0.0, xi - phi - psi], &[], &[nu + mu - alpha, mu + nu - beta], 1.0);
    // the pole gap is exactly the convergence condition at t → 0
    find_contour(&mb)?;
    if nu <= 0.0 {
        return Err(Error::OutOfDomain("needs ν > 0".into()));
    }
    let lhs = integrate_unit_interval(
        |t, w| {
            let f1 = f21_one_minus(alpha, beta, nu, t).unwrap_or(f64::NAN);
            let f2 = f21_one_minus(phi, psi, xi, t).unwrap_or(f64::NAN);
            t.powf(mu - 1.0) * w.powf(nu - 1.0) * f1 * f2
        },
        tol,
    )?
    .value;
    let rhs = g_ratio(&[nu, xi], &[phi, psi, xi - phi, xi - psi])? * eval_mb(&mb, tol)?.re;
    Ok(TwoSided { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn contour_examples() {
        let c = find_contour(&MBSpec::real(&[1.0], &[1.0], &[], &[], 1.0)).unwrap();
        assert_eq!((c.sigma, c.margin), (0.0, 1.0));
        let c = find_contour(&MBSpec::real(&[0.2], &[0.1], &[], &[], 1.0)).unwrap();
        assert_relative_eq!(c.sigma, -0.05, epsilon = 1e-15);
        match find_contour(&MBSpec::real(&[-0.5], &[0.3], &[], &[], 1.0)) {
            Err(Error::Collision { left, right }) => {
                assert_eq!((left, right), (0.5, 0.3));
            }
            other => panic!("expected collision, got {other:?}"),
        }
    }

    // Γ(c)/(Γ(a)Γ(b)) · MB{0 | a, b || c} = ₂F₁(a,b;c;−x)
    fn barnes_2f1(a: f64, b: f64, cc: f64, x: f64) -> MBSpec {
        MBSpec::real(&[0.0], &[a, b], &[cc], &[], x)
    }

    #[test]
    fn barnes_representation_gives_log2() {
        let v = eval_mb(&barnes_2f1(1.0, 1.0, 2.0, 1.0), 1e-12).unwrap();
        let g = g_ratio(&[2.0], &[1.0, 1.0]).unwrap();
        assert_relative_eq!(g * v.re, 2f64.ln(), max_relative = 1e-11);
        assert!(v.im == 0.0);
    }

    #[test]
    fn second_barnes_form_at_unit_argument() {
        // Γ(c)/(Γ(a)Γ(b)Γ(c−a)Γ(c−b)) ∫ Γ(s)Γ(s+c−a−b)Γ(a−s)Γ(b−s) x^{−s} = ₂F₁(a,b;c;1−x)
        let (a, b, cc) = (0.5, 0.5, 2.0);
        let mb = MBSpec::real(&[0.0, cc - a - b], &[a, b], &[], &[], 1.0);
        let v = eval_mb(&mb, 1e-12).unwrap().re * g_ratio(&[cc], &[a, b, cc - a, cc - b]).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-11);
    }

    #[test]
    fn one_sided_support_representation() {
        // Γ(c)·MB{0, c−a−b | || | c−a, c−b} = (1−x)^{c−1}₂F₁(a,b;c;1−x) for x < 1, 0 for x > 1
        let (a, b, cc) = (0.4, 0.7, 3.5);
        let mb = |x| MBSpec::real(&[0.0, cc - a - b], &[], &[], &[cc - a, cc - b], x);
        let g = crate::gamma::gamma_real(cc).unwrap();
        let above = g * eval_mb(&mb(2.0), 1e-9).unwrap().re;
        assert!(above.abs() < 1e-9, "{above}");
        let below = g * eval_mb(&mb(0.5), 1e-9).unwrap().re;
        let want = 0.5f64.powf(cc - 1.0) * f21_real(a, b, cc, 0.5).unwrap();
        assert_relative_eq!(below, want, max_relative = 1e-8);
    }

    #[test]
    fn contour_shift_invariance() {
        let mb = MBSpec::real(&[0.3, 0.8], &[0.6, 1.1], &[1.7], &[], 0.7);
        let ch = find_contour(&mb).unwrap();
        let vals: Vec<f64> = [-0.6, 0.0, 0.6]
            .iter()
            .map(|f| eval_mb_at(&mb, ch.sigma + f * ch.margin, 1e-12).unwrap().re)
            .collect();
        for v in &vals[1..] {
            assert_relative_eq!(*v, vals[0], max_relative = 1e-9);
        }
    }

    #[test]
    fn residue_expansions_of_the_2f1_shape() {
        let (a, b, cc) = (0.7, 1.2, 1.9);
        let g = g_ratio(&[cc], &[a, b]).unwrap();
        let left = mb_residue_expand(&barnes_2f1(a, b, cc, 0.4), Side::Left).unwrap();
        assert_eq!(left.len(), 1);
        assert_eq!(left[0].series.numerator_params.len(), 2);
        assert_eq!(left[0].series.argument, re(-0.4));
        for &x in &[0.4, 3.0] {
            let spec = barnes_2f1(a, b, cc, x);
            let side = if x < 1.0 { Side::Left } else { Side::Right };
            let r = eval_residue_expansion(&spec, side, 1e-15).unwrap().re * g;
            let q = eval_mb(&spec, 1e-12).unwrap().re * g;
            let want = f21_real(a, b, cc, -x).unwrap();
            assert_relative_eq!(r, want, max_relative = 1e-12);
            assert_relative_eq!(q, want, max_relative = 1e-10);
        }
    }

    #[test]
    fn coincident_poles_are_refused() {
        let spec = barnes_2f1(0.5, 1.5, 2.2, 3.0);
        assert!(matches!(mb_residue_expand(&spec, Side::Right), Err(Error::CoincidentPoles(_))));
        assert!(mb_residue_expand(&spec, Side::Left).is_ok());
    }

    #[test]
    fn complex_argument_refused() {
        let mut spec = barnes_2f1(0.5, 0.7, 2.2, 1.0);
        spec.z = ComplexValue::new(1.0, 0.5);
        assert!(matches!(eval_mb(&spec, 1e-8), Err(Error::OutOfDomain(_))));
    }
}
