//! Integration engines: adaptive Gauss–Kronrod on intervals and half-lines,
//! lattice principal values, and bilateral sums.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];
// Gauss weights for the odd-indexed Kronrod nodes
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

const MAX_PANELS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleLattice {
    pub spacing: f64,
    pub offset: f64,
}

/// A real integrand plus the structural facts the engines need.
pub struct IntegrandHandle<'a> {
    evaluator: Box<dyn Fn(f64) -> f64 + Send + Sync + 'a>,
    pub even: bool,
    /// f ~ |s|^{-decay_exponent}; `f64::INFINITY` for superpolynomial decay.
    pub decay_exponent: f64,
    pub pole_lattice: Option<PoleLattice>,
}

impl<'a> IntegrandHandle<'a> {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'a) -> Self {
        IntegrandHandle {
            evaluator: Box::new(f),
            even: false,
            decay_exponent: f64::INFINITY,
            pole_lattice: None,
        }
    }

    pub fn decay(mut self, exponent: f64) -> Self {
        self.decay_exponent = exponent;
        self
    }

    /// Marks the integrand even; spot-checked at a few abscissae.
    pub fn even(mut self) -> Result<Self> {
        for &s in &[0.37, 1.13, 2.71] {
            let (p, m) = (self.eval(s), self.eval(-s));
            if p.is_finite() && m.is_finite() && (p - m).abs() > 1e-10 * (p.abs() + m.abs()) {
                return Err(Error::OutOfDomain(format!("integrand is not even at s = {s}")));
            }
        }
        self.even = true;
        Ok(self)
    }

    pub fn poles(mut self, spacing: f64, offset: f64) -> Self {
        self.pole_lattice = Some(PoleLattice { spacing, offset });
        self
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.evaluator)(x)
    }

    fn checked(&self, x: f64) -> Result<f64> {
        let v = self.eval(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation(x))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub panels_used: usize,
    pub truncation_point: f64,
}

/// 21-point Kronrod rule with the embedded 10-point Gauss rule: (value, |K - G|).
pub fn gk21(f: &dyn Fn(f64) -> Result<f64>, a: f64, b: f64) -> Result<(f64, f64)> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut k = fc * WGK[10];
    let mut g = 0.0;
    for j in 0..10 {
        let dx = half * XGK[j];
        let s = f(center - dx)? + f(center + dx)?;
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    Ok((k * half, ((k - g) * half).abs()))
}

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Globally adaptive bisection over the given initial breakpoints.
///
/// Stops when the summed error is below `max(abs_tol, rel_tol·|I|)` or the panel
/// budget is exhausted; the returned error estimate is honest either way.
pub fn adaptive(
    f: &dyn Fn(f64) -> Result<f64>,
    breaks: &[f64],
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadResult> {
    let mut heap = BinaryHeap::new();
    let (mut total, mut err) = (0.0, 0.0);
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (v, e) = gk21(f, w[0], w[1])?;
        total += v;
        err += e;
        heap.push(Panel { a: w[0], b: w[1], value: v, err: e });
    }
    let mut panels = heap.len();
    let span = breaks.last().unwrap_or(&0.0) - breaks.first().unwrap_or(&0.0);
    let min_width = 1e-13 * span;
    let mut frozen: Vec<Panel> = Vec::new();
    while err > abs_tol.max(rel_tol * total.abs()) && panels < MAX_PANELS {
        let Some(p) = heap.pop() else { break };
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b || p.b - p.a < min_width {
            // interval exhausted at working resolution; keep its error as is
            frozen.push(p);
            continue;
        }
        let (v1, e1) = gk21(f, p.a, mid)?;
        let (v2, e2) = gk21(f, mid, p.b)?;
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.err;
        heap.push(Panel { a: p.a, b: mid, value: v1, err: e1 });
        heap.push(Panel { a: mid, b: p.b, value: v2, err: e2 });
        panels += 1;
    }
    // re-sum to shed accumulated cancellation in the running totals
    let mut value = 0.0;
    let mut e = 0.0;
    let mut list: Vec<Panel> = heap.into_vec();
    list.extend(frozen);
    list.sort_by(|x, y| x.a.total_cmp(&y.a));
    for p in &list {
        value += p.value;
        e += p.err;
    }
    Ok(QuadResult {
        value,
        abs_error_estimate: e,
        panels_used: panels,
        truncation_point: breaks.last().copied().unwrap_or(0.0),
    })
}

/// ∫_a^b f for a plain function.
pub fn integrate_interval(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<QuadResult> {
    let g = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation(x))
        }
    };
    let n = 4;
    let breaks: Vec<f64> = (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
    adaptive(&g, &breaks, tol, 1e-300)
}

fn magnitude_scan(f: &IntegrandHandle, upto: f64) -> Result<f64> {
    let mut m: f64 = 0.0;
    let mut x = 0.0;
    while x <= upto {
        m = m.max(f.checked(x)?.abs() * x.max(1.0));
        x += 0.25;
    }
    Ok(m)
}

/// ∫_0^∞ f.
///
/// Superpolynomial decay: [0, T] with T where |f|·T drops below tol·scale.
/// Power decay: [0, T] plus the tail on the map x = T·e^y, which turns the
/// power law into exponential decay in y.
pub fn integrate_halfline(f: &IntegrandHandle, tol: f64) -> Result<QuadResult> {
    if f.decay_exponent <= 1.0 {
        return Err(Error::NonConvergence(format!(
            "decay exponent {} ≤ 1: improper integral diverges",
            f.decay_exponent
        )));
    }
    let eval = |x: f64| f.checked(x);
    let scale = magnitude_scan(f, 4.0)?;
    let superpoly = f.decay_exponent.is_infinite();
    let cut = if superpoly { 1e-3 * tol } else { 1e-2 };
    let mut t: f64 = 4.0;
    loop {
        let small = |x: f64| -> Result<bool> { Ok(f.checked(x)?.abs() * x <= cut * scale) };
        if small(t)? && small(1.25 * t)? && small(1.6 * t)? {
            break;
        }
        if t > 1e6 {
            if superpoly {
                return Err(Error::NonConvergence("integrand does not decay".into()));
            }
            break;
        }
        t *= 1.5;
    }
    let n = (t.ceil() as usize).clamp(4, 64);
    let breaks: Vec<f64> = (0..=n).map(|k| t * k as f64 / n as f64).collect();
    let mut head = adaptive(&eval, &breaks, 0.1 * tol, 1e-300)?;
    head.truncation_point = t;
    if superpoly || scale == 0.0 {
        return Ok(head);
    }
    let tail = power_tail(f, t, f.decay_exponent, 0.1 * tol * head.value.abs().max(1e-300))?;
    Ok(QuadResult {
        value: head.value + tail.value,
        abs_error_estimate: head.abs_error_estimate + tail.abs_error_estimate,
        panels_used: head.panels_used + tail.panels_used,
        truncation_point: t,
    })
}

// ∫_T^∞ f with x = T e^y, truncated at Y where e^{-(p-1)Y} is negligible
fn power_tail(f: &IntegrandHandle, t: f64, p: f64, abs_tol: f64) -> Result<QuadResult> {
    let g = |y: f64| {
        let x = t * y.exp();
        Ok(f.checked(x)? * x)
    };
    let y_cap = 700.0 - t.ln();
    let ymax = (40.0 / (p - 1.0)).min(y_cap);
    let n = (ymax.ceil() as usize).clamp(4, 64);
    let breaks: Vec<f64> = (0..=n).map(|k| ymax * k as f64 / n as f64).collect();
    let mut r = adaptive(&g, &breaks, 1e-300, abs_tol)?;
    // remaining tail bound from the envelope at the cut
    r.abs_error_estimate += g(ymax)?.abs() / (p - 1.0);
    Ok(r)
}

/// ∫_0^∞ f on the map x = e^y.
///
/// Endpoint powers x^{α−1} at 0 and x^{−p} at ∞ both become exponential decay
/// in y, so integrable singularities at the origin cost nothing extra.
pub fn integrate_log_map(f: impl Fn(f64) -> f64, tol: f64) -> Result<QuadResult> {
    let g = |y: f64| {
        let x = y.exp();
        let v = f(x) * x;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation(x))
        }
    };
    let mut scale: f64 = 0.0;
    for k in -8..=8 {
        scale = scale.max(g(k as f64 * 0.5)?.abs());
    }
    if scale == 0.0 {
        return Ok(QuadResult { value: 0.0, abs_error_estimate: 0.0, panels_used: 0, truncation_point: 0.0 });
    }
    let edge = |dir: f64| -> Result<f64> {
        let mut y = 4.0;
        loop {
            let small = |y: f64| -> Result<bool> { Ok(g(dir * y)?.abs() <= 1e-3 * tol * scale) };
            if small(y)? && small(y + 1.0)? && small(y + 3.0)? {
                return Ok(dir * (y + 3.0));
            }
            if y > 690.0 {
                return Err(Error::NonConvergence("integrand does not decay on the log scale".into()));
            }
            y += 2.0;
        }
    };
    let (lo, hi) = (edge(-1.0)?, edge(1.0)?);
    let n = ((hi - lo).ceil() as usize).clamp(8, 400);
    let breaks: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
    let mut r = adaptive(&g, &breaks, tol, 1e-3 * tol * scale)?;
    r.truncation_point = hi.exp();
    Ok(r)
}

/// ∫_0^1 f via t = x/(1+x) and the log map; handles power singularities at
/// both ends. `f` receives (t, 1 − t), both computed without cancellation.
pub fn integrate_unit_interval(f: impl Fn(f64, f64) -> f64, tol: f64) -> Result<QuadResult> {
    integrate_log_map(
        |x| {
            let w = 1.0 / (1.0 + x);
            f(x * w, w) * w * w
        },
        tol,
    )
}

/// ∫_ℝ f; even integrands reduce to twice the half-line.
pub fn integrate_line(f: &IntegrandHandle, tol: f64) -> Result<QuadResult> {
    let right = integrate_halfline(f, tol)?;
    if f.even {
        return Ok(QuadResult {
            value: 2.0 * right.value,
            abs_error_estimate: 2.0 * right.abs_error_estimate,
            ..right
        });
    }
    let mirrored = IntegrandHandle {
        evaluator: Box::new(|x| f.eval(-x)),
        even: false,
        decay_exponent: f.decay_exponent,
        pole_lattice: None,
    };
    let left = integrate_halfline(&mirrored, tol)?;
    Ok(QuadResult {
        value: left.value + right.value,
        abs_error_estimate: left.abs_error_estimate + right.abs_error_estimate,
        panels_used: left.panels_used + right.panels_used,
        truncation_point: right.truncation_point.max(left.truncation_point),
    })
}

/// Principal value of ∫_lo^hi f across simple poles on the lattice.
///
/// Each pole p gets a symmetric cell [p-h, p+h] (h = spacing/2, clipped to the
/// interval) integrated as ∫_0^h (f(p+t) + f(p-t)) dt, where the singular parts
/// cancel exactly; the pieces between cells are ordinary integrals.
pub fn pv_interval(
    f: &dyn Fn(f64) -> f64,
    lattice: PoleLattice,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<QuadResult> {
    let PoleLattice { spacing, offset } = lattice;
    let h = 0.5 * spacing;
    let checked = |x: f64| {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation(x))
        }
    };
    let mut out = QuadResult { value: 0.0, abs_error_estimate: 0.0, panels_used: 0, truncation_point: hi };
    let mut add = |r: QuadResult| {
        out.value += r.value;
        out.abs_error_estimate += r.abs_error_estimate;
        out.panels_used += r.panels_used;
    };
    let first = ((lo - offset) / spacing).ceil() as i64;
    let last = ((hi - offset) / spacing).floor() as i64;
    let mut cursor = lo;
    for k in first..=last {
        let p = offset + k as f64 * spacing;
        let r = (p - cursor).min(hi - p).min(h);
        if r <= 0.0 {
            continue;
        }
        if p - r > cursor {
            add(adaptive(&checked, &[cursor, p - r], tol, 1e-300)?);
        }
        // the fold is bounded at t = 0; keep p ± t distinct from p in floating point
        let t_min = 1e-12 * p.abs().max(1.0);
        let fold = |t: f64| {
            let t = t.max(t_min);
            Ok(checked(p + t)? + checked(p - t)?)
        };
        // the fold may cancel to ~0, so a relative target alone never closes; below
        // ~1e-12 of the cell edge the fold is pure rounding noise from the two poles
        let edge = r * (checked(p + r)?.abs() + checked(p - r)?.abs());
        add(adaptive(&fold, &[0.0, r], tol, (1e-3 * tol).max(1e-12) * edge)?);
        cursor = p + r;
    }
    if hi > cursor {
        add(adaptive(&checked, &[cursor, hi], tol, 1e-300)?);
    }
    Ok(out)
}

/// Solve S(n) = S∞ + Σ_k c_k n^{e_k} exactly through the sample points and return S∞.
pub fn extrapolate_known_exponents(ns: &[f64], values: &[f64], exponents: &[f64]) -> Result<f64> {
    let m = exponents.len() + 1;
    if ns.len() < m || values.len() < m {
        return Err(Error::NonConvergence("too few samples for extrapolation".into()));
    }
    let ns = &ns[ns.len() - m..];
    let values = &values[values.len() - m..];
    let a = DMatrix::from_fn(m, m, |i, j| if j == 0 { 1.0 } else { ns[i].powf(exponents[j - 1]) });
    let b = DVector::from_row_slice(values);
    let sol = a
        .lu()
        .solve(&b)
        .ok_or_else(|| Error::NonConvergence("singular extrapolation system".into()))?;
    Ok(sol[0])
}

/// Lattice principal value ∫_{-M-α}^{M+α} f as M → ∞, for even f.
///
/// The truncated values behave like I∞ + Σ_k c_k(α) M^{1-p-k} (p the decay
/// exponent), so the limit is taken by extrapolation with that exponent ladder;
/// M is doubled until successive extrapolations settle.
pub fn integrate_pv_lattice(f: &IntegrandHandle, alpha: f64, tol: f64) -> Result<QuadResult> {
    let lattice = f
        .pole_lattice
        .ok_or_else(|| Error::OutOfDomain("principal value needs a pole lattice".into()))?;
    if !f.even {
        return Err(Error::OutOfDomain("principal value lattice engine needs an even integrand".into()));
    }
    if !(0.0..1.0).contains(&alpha) || alpha == 0.0 {
        return Err(Error::OutOfDomain(format!("alpha = {alpha} not in (0,1)")));
    }
    let p = f.decay_exponent;
    if p <= 1.0 {
        return Err(Error::NonConvergence(format!(
            "integrand decays like |s|^-{p:.3}: the symmetric lattice limit does not exist"
        )));
    }
    let eval = |x: f64| f.eval(x);
    let cell_tol = (1e-3 * tol).clamp(1e-13, 1e-10);
    // running half-line integral ∫_0^{M+α}, built cell by cell
    let mut ms: Vec<f64> = Vec::new();
    let mut vals: Vec<f64> = Vec::new();
    let mut prev_end = 0.0;
    let mut acc = 0.0;
    let mut err = 0.0;
    let mut panels = 0;
    // M+α never sits on the lattice, so each stretch ends between poles
    let samples = |m: f64, prev_end: &mut f64, acc: &mut f64| -> Result<(f64, f64, usize)> {
        let r = pv_interval(&eval, lattice, *prev_end, m + alpha, cell_tol)?;
        *acc += r.value;
        *prev_end = m + alpha;
        Ok((*acc, r.abs_error_estimate, r.panels_used))
    };
    let mut best = f64::NAN;
    let mut prev_best = f64::NAN;
    let nterms = 6;
    let exponents: Vec<f64> = (0..nterms).map(|k| 1.0 - p - k as f64).collect();
    let mut m = 4.0;
    while m <= 4096.0 {
        let (v, e, np) = samples(m, &mut prev_end, &mut acc)?;
        ms.push(m);
        vals.push(2.0 * v);
        err += 2.0 * e;
        panels += np;
        if ms.len() > nterms {
            prev_best = best;
            best = extrapolate_known_exponents(&ms, &vals, &exponents)?;
            if (best - prev_best).abs() < tol * best.abs() {
                return Ok(QuadResult {
                    value: best,
                    abs_error_estimate: (best - prev_best).abs() + err,
                    panels_used: panels,
                    truncation_point: m + alpha,
                });
            }
        }
        m *= 1.5f64;
        m = m.round();
    }
    Err(Error::NonConvergence(format!(
        "lattice principal value did not settle: last two extrapolations {prev_best} and {best}"
    )))
}

/// Σ_{n∈ℤ} term(n) by symmetric partial sums.
///
/// The decay power is fitted from the pair magnitudes at N and N/2 and the tail
/// is bounded by the integral comparison a(N)·N/(p-1).
pub fn bilateral_sum(term: &dyn Fn(i64) -> f64, tol: f64) -> Result<QuadResult> {
    let pair = |n: i64| term(n).abs() + term(-n).abs();
    let mut sum = term(0);
    let mut n_done: i64 = 0;
    let mut n: i64 = 16;
    loop {
        for k in n_done + 1..=n {
            sum += term(k) + term(-k);
        }
        n_done = n;
        if !sum.is_finite() {
            return Err(Error::Evaluation(n as f64));
        }
        let (an, ah) = (pair(n), pair(n / 2));
        let tail = if an == 0.0 {
            0.0
        } else if ah == 0.0 {
            f64::INFINITY
        } else {
            let p = (ah / an).ln() / std::f64::consts::LN_2;
            if p <= 1.0 {
                if n >= 1 << 16 {
                    return Err(Error::NonConvergence(format!(
                        "bilateral terms decay like |n|^-{p:.3}"
                    )));
                }
                f64::INFINITY
            } else {
                an * n as f64 / (p - 1.0)
            }
        };
        if tail <= tol * sum.abs().max(1e-300) || (tail == 0.0) {
            return Ok(QuadResult {
                value: sum,
                abs_error_estimate: tail,
                panels_used: (2 * n + 1) as usize,
                truncation_point: n as f64,
            });
        }
        if n >= 1 << 22 {
            return Err(Error::NonConvergence("bilateral sum did not reach tolerance".into()));
        }
        n *= 2;
    }
}
