//! One line per acceptance criterion; the process fails iff any criterion does.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use beta_integrals::catalog::{self, IdentityId, IdentityId::*};
use beta_integrals::index_transform::*;
use beta_integrals::mellin_barnes::*;
use beta_integrals::wilson::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Verifies every point; returns the worst relative error.
fn verify_all(id: IdentityId, points: &[Vec<f64>], tol: f64) -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for p in points {
        let r = catalog::verify(id, p, tol);
        if !r.passed {
            return Err(format!(
                "{id} at {p:?}: rel_error {:.3e}{}",
                r.rel_error,
                r.reason.map(|s| format!(" ({s})")).unwrap_or_default()
            ));
        }
        worst = worst.max(r.rel_error);
    }
    Ok(worst)
}

fn with_point(id: IdentityId, count: usize, extra: &[f64]) -> Vec<Vec<f64>> {
    let mut v = catalog::sample_points(id, count, 42);
    if !extra.is_empty() {
        v.push(extra.to_vec());
    }
    v
}

fn c1() -> Outcome {
    let start = Instant::now();
    let worst = verify_all(Eq0_2, &with_point(Eq0_2, 10, &[0.5; 4]), 1e-7)?;
    let sym = catalog::closed_form(Eq0_2, &[0.5; 4]).map_err(|e| e.to_string())?;
    ensure((sym - 1.0).abs() < 1e-13, format!("symmetric value {sym}"))?;
    let t = start.elapsed();
    ensure(t <= Duration::from_secs(30), format!("took {t:?}"))?;
    Ok(format!("11 points, worst {worst:.2e}, {:.2} s", t.as_secs_f64()))
}

fn c2() -> Outcome {
    let pts = catalog::sample_points(Eq0_1, 10, 42);
    for p in &pts {
        let gap = p[3] - p[..3].iter().sum::<f64>();
        ensure((1.5..=4.0).contains(&gap), format!("b - Σa = {gap}"))?;
    }
    let worst = verify_all(Eq0_1, &pts, 1e-7)?;
    let r = catalog::verify(Eq0_1, &[0.5, 0.5, 0.5, 3.0], 1e-7);
    ensure(r.passed, format!("{r:?}"))?;
    ensure((r.rhs_value - 32.0 / (27.0 * PI)).abs() < 1e-14, format!("rhs {}", r.rhs_value))?;
    Ok(format!("11 points, worst {:.2e}", worst.max(r.rel_error)))
}

fn c3() -> Outcome {
    let a = verify_all(Eq0_3, &catalog::sample_points(Eq0_3, 10, 42), 1e-7)?;
    let b = verify_all(Eq0_4, &catalog::sample_points(Eq0_4, 10, 42), 1e-7)?;
    Ok(format!("worst {a:.2e} / {b:.2e}"))
}

fn c4() -> Outcome {
    // Σaⱼ below 2.9, as the criterion asks
    let low = [
        [0.7, 0.7, 0.7, 0.7, 0.3],
        [0.6, 0.7, 0.65, 0.8, 0.2],
        [0.55, 0.75, 0.7, 0.85, 0.35],
        [0.5, 0.6, 0.7, 0.8, 0.15],
        [0.72, 0.68, 0.66, 0.71, 0.27],
    ];
    // the regime where the lattice limit exists, reported alongside
    let high = catalog::sample_points(Eq0_5, 5, 42);
    let mut supplementary = match verify_all(Eq0_5, &high, 1e-3) {
        Ok(w) => format!("Σ∈(3.2,3.9): 5/5 pass, worst {w:.2e}"),
        Err(e) => format!("Σ∈(3.2,3.9) also fails: {e}"),
    };
    for p in &high {
        let at = |alpha: f64| {
            let mut q = p.clone();
            q[4] = alpha;
            catalog::lhs_numeric(Eq0_5, &q, 1e-7).map(|r| r.value)
        };
        match (at(0.2), at(0.37)) {
            (Ok(x), Ok(y)) if (x - y).abs() <= 3e-3 * x.abs() => {}
            other => supplementary.push_str(&format!("; α-dependence at {p:?}: {other:?}")),
        }
    }
    let mut failures = Vec::new();
    for p in &low {
        let r = catalog::verify(Eq0_5, p, 1e-3);
        if !r.passed {
            failures.push(format!("Σ={:.2}: {}", p[..4].iter().sum::<f64>(), r.reason.unwrap_or_default()));
        }
    }
    if failures.is_empty() {
        Ok(format!("5/5 points with Σ<2.9; {supplementary}"))
    } else {
        Err(format!(
            "{}/5 points with Σ<2.9 refused; first: {} [{supplementary}]",
            failures.len(),
            failures[0]
        ))
    }
}

fn c5() -> Outcome {
    let pts = catalog::sample_points(Eq0_6, 5, 42);
    ensure(pts.iter().all(|p| p[..4].iter().all(|a| (1.5..=2.5).contains(a))), "sampler range")?;
    let worst = verify_all(Eq0_6, &with_point(Eq0_6, 5, &[2.0, 2.0, 2.0, 2.0, 0.25]), 1e-8)?;
    let r = catalog::verify(Eq0_6, &[2.0, 2.0, 2.0, 2.0, 0.25], 1e-8);
    ensure((r.lhs_value - 3.0 / (16.0 * PI)).abs() < 1e-12, format!("lhs {}", r.lhs_value))?;
    Ok(format!("6 points, worst {worst:.2e}; lattice sum at aⱼ=2, α=1/4 is 3/(16π)"))
}

fn c6() -> Outcome {
    let pts = catalog::sample_points(Eq2_2, 10, 42);
    let worst = verify_all(Eq2_2, &pts, 1e-7)?;
    let mut sym: f64 = 0.0;
    for p in pts.iter().take(3) {
        sym = sym.max(catalog::symmetry_probe(Eq2_2, &[0, 1, 2, 4, 3], p).map_err(|e| e.to_string())?);
    }
    ensure(sym <= 1e-9, format!("d↔e residual {sym:e}"))?;
    Ok(format!("10 points, worst {worst:.2e}; d↔e residual {sym:.1e}"))
}

fn c7() -> Outcome {
    let fixed = [
        vec![0.45, 0.7, 0.55, 0.8, 0.35, 0.6],
        vec![1.6, 0.5, 0.6, 0.7, 0.4, 0.8],
        vec![1.3, 0.3, 0.4, 0.45, 0.7],
    ];
    let mut out = Vec::new();
    for (id, generic) in [Eq2_3, Eq2_4, Eq2_5].into_iter().zip(fixed) {
        let pts = catalog::sample_points(id, 5, 42);
        let worst = verify_all(id, &pts, 1e-6)?;
        let (mut res, mut skipped): (f64, usize) = (0.0, 0);
        for p in pts.iter().chain([&generic]) {
            let x = catalog::closed_form(id, p).map_err(|e| e.to_string())?;
            // the residue series at unit argument converges only for positive parameter excess
            let y = match catalog::residue_form(id, p) {
                Ok(y) => y,
                Err(e) if e.to_string().contains("series diverges") && p != &generic => {
                    skipped += 1;
                    continue;
                }
                Err(e) => return Err(format!("{id} residues at {p:?}: {e}")),
            };
            res = res.max((x - y).abs() / x.abs());
        }
        ensure(res <= 1e-8, format!("{id}: residue expansion off by {res:e}"))?;
        out.push(format!("{id} {worst:.1e}/{res:.1e} ({} residue points)", 6 - skipped));
    }
    let (b, p, q, u, v) = (0.5, 0.6, 0.7, 0.4, 0.8);
    let x = catalog::closed_form(Eq2_4, &[b + u + v + p + q, b, p, q, u, v]).map_err(|e| e.to_string())?;
    let y = catalog::closed_form(Eq0_4, &[b, p, q, u, v]).map_err(|e| e.to_string())?;
    let deg = (x - y).abs() / y.abs();
    ensure(deg <= 1e-8, format!("degeneration off by {deg:e}"))?;
    Ok(format!("{}; degeneration {deg:.1e}", out.join(", ")))
}

fn c8() -> Outcome {
    let grid = [0.6f64, 1.3];
    let mut worst: f64 = 0.0;
    let mut n = 0;
    let mut note = |ts: TwoSided, what: String| -> Result<(), String> {
        ensure(ts.rel_error() <= 1e-7, format!("{what}: {ts:?}"))?;
        worst = worst.max(ts.rel_error());
        n += 1;
        Ok(())
    };
    for &alpha in &grid {
        for &rho in &grid {
            for &p in &grid {
                for &q in &grid {
                    for &r in &grid {
                        for &z in &[0.5, 1.0, 2.0] {
                            if alpha - rho >= p.min(q) {
                                continue;
                            }
                            let ts = power_kernel_integral(alpha, rho, p, q, r, z, 1e-11).map_err(|e| e.to_string())?;
                            note(ts, format!("power kernel at {:?}", (alpha, rho, p, q, r, z)))?;
                        }
                    }
                }
            }
        }
    }
    for &(p, q) in &[(0.9, 1.3), (1.3, 1.3)] {
        for &(u, v) in &[(0.6, 1.3), (0.7, 0.7)] {
            for &(omega, omega_t) in &[(1.0, 1.0), (0.6, 1.4), (2.0, 0.7)] {
                let pp = ProductParams { alpha: 0.6, p, q, r: 0.6, u, v, w: 1.3, omega, omega_t };
                note(product_kernel_integral(&pp, 1e-11).map_err(|e| e.to_string())?, format!("{pp:?}"))?;
                let cf = ProductParams { alpha: 0.9, r: 0.9, w: 0.9, ..pp };
                note(product_kernel_closed_form(&cf, 1e-11).map_err(|e| e.to_string())?, format!("closed {cf:?}"))?;
            }
        }
    }
    for up in [
        UnitParams { mu: 0.9, nu: 1.4, alpha: 0.5, beta: 0.6, phi: 0.7, psi: 0.4, xi: 1.6 },
        UnitParams { mu: 1.3, nu: 0.8, alpha: 0.3, beta: 0.2, phi: 0.6, psi: 0.9, xi: 1.2 },
        UnitParams { mu: 0.6, nu: 0.6, alpha: 0.3, beta: 0.45, phi: 1.3, psi: 0.6, xi: 2.1 },
    ] {
        note(unit_interval_integral(&up, 1e-11).map_err(|e| e.to_string())?, format!("{up:?}"))?;
    }
    Ok(format!("{n} two-sided checks, worst {worst:.2e}"))
}

fn c9() -> Outcome {
    let points = [
        (JParams { a: 0.7, b: 0.9 }, ImageParams::default()),
        (JParams { a: 1.1, b: 0.6 }, ImageParams { c: 0.9, d: 0.45, u: 0.35, p: 0.8, q: 0.5, y: 0.6, z: 0.7 }),
    ];
    let mut worst: f64 = 0.0;
    for (jp, extra) in &points {
        for id in ImageId::ALL {
            let r = image_residual(id, extra, jp, &[0.0, 0.5, 1.0, 2.0], 1e-11).map_err(|e| e.to_string())?;
            ensure(r <= 1e-6, format!("{id} at {jp:?}: {r:e}"))?;
            worst = worst.max(r);
        }
    }
    let mut trip: f64 = 0.0;
    for (a, b, c) in [(1.0, 1.0, 1.0), (0.7, 1.2, 0.9), (1.4, 0.5, 0.6)] {
        let jp = JParams::new(a, b).map_err(|e| e.to_string())?;
        let pair = image_pair(ImageId::L11A, &ImageParams { c, ..Default::default() }, &jp).map_err(|e| e.to_string())?;
        let g = |s: f64| (pair.image)(s).unwrap_or(f64::NAN);
        for x in [0.1, 1.0, 10.0] {
            let back = j_inverse(&jp, &g, x, 1e-10).map_err(|e| e.to_string())?.value;
            trip = trip.max((back / (pair.source)(x) - 1.0).abs());
        }
    }
    ensure(trip <= 1e-5, format!("round trip {trip:e}"))?;
    Ok(format!("12 image pairs, worst {worst:.2e}; round trip {trip:.1e}"))
}

fn c10() -> Outcome {
    let base = [(0.6, 0.8, 0.7, 0.9, 0.5), (1.1, 0.4, 0.9, 0.6, 0.8), (0.5, 0.5, 0.5, 0.5, 0.5)];
    let mut worst: f64 = 0.0;
    for (i, y) in [0.5, 1.0, 2.0].into_iter().enumerate() {
        let (a, b, c, d, e) = base[i];
        for (id, p) in [
            (Eq4_1, vec![a, b, c, 1.3, y]),
            (Eq4_2, vec![a, b, c, d, y]),
            (Eq4_3, vec![a, b, c, d, y, 2.0]),
            (Eq4_3Diag, vec![a, b, c, d, y]),
            (Eq4_4, vec![a, b, c, d, e, y]),
        ] {
            let r = section4_verify(id, &p, 1e-6).map_err(|e| e.to_string())?;
            ensure(r.passed, format!("{id} at {p:?}: {:.3e} {:?}", r.rel_error, r.reason))?;
            worst = worst.max(r.rel_error);
        }
    }
    Ok(format!("15 points, worst {worst:.2e}"))
}

fn c11() -> Outcome {
    let sets = [WilsonParams::new(0.5, 0.5, 0.5, 0.5).unwrap(), WilsonParams::new(0.3, 0.7, 1.1, 0.45).unwrap()];
    let mut sym: f64 = 0.0;
    for wp in &sets {
        for n in 0..=4 {
            for perm in permutations4() {
                sym = sym.max(symmetry_check(wp, n, perm, &[0.0, 0.3, 0.8, 1.5, 2.4]).map_err(|e| e.to_string())?);
            }
        }
    }
    ensure(sym <= 1e-10, format!("S₄ residual {sym:e}"))?;
    let mut off: f64 = 0.0;
    let mut diag: f64 = 0.0;
    for wp in &sets {
        let g = classical_gram(wp, 3, 1e-12).map_err(|e| e.to_string())?;
        off = off.max(off_diagonal_ratio(&g));
        for n in 0..=3 {
            diag = diag.max((g[(n, n)] / classical_norm(wp, n).map_err(|e| e.to_string())? - 1.0).abs());
        }
    }
    ensure(off <= 1e-8, format!("off-diagonal {off:e}"))?;
    ensure(diag <= 1e-8, format!("diagonal vs norm {diag:e}"))?;
    let rep = classical_norm_erratum(&sets[1], 1, 1e-12).map_err(|e| e.to_string())?;
    ensure(rep.confirmed != NormVariant::Neither, format!("no norm variant confirmed: {rep:?}"))?;
    Ok(format!(
        "S₄ {sym:.1e}, off-diagonal {off:.1e}, diagonal {diag:.1e}; norm erratum: quadrature confirms the {} formula",
        rep.confirmed
    ))
}

fn c12() -> Outcome {
    let alg = |w: WeightSpec| -> Result<_, String> {
        let fs = FiniteSystem::new(w).map_err(|e| e.to_string())?;
        let g = finite_gram(&fs, GramMode::Algebraic, 0.0).map_err(|e| e.to_string())?;
        Ok((fs, g))
    };
    let w1 = WeightSpec::W1 { p: 0.5, u: 0.5, v: 0.5, q: 12.0 };
    let (fs1, g1) = alg(w1)?;
    ensure(fs1.n_max == 2, format!("W1 n_max {}", fs1.n_max))?;
    let w2 = WeightSpec::W2Dougall { a: [2.0; 4], alpha: 0.25 };
    let (fs2, g2) = alg(w2)?;
    let w3 = WeightSpec::W3Askey { a: [2.0; 4], alpha: 0.25 };
    let (fs3, g3) = alg(w3)?;
    ensure(fs2.n_max == 1 && fs3.n_max == 1, "W2/W3 n_max")?;
    let off = off_diagonal_ratio(&g1).max(off_diagonal_ratio(&g2)).max(off_diagonal_ratio(&g3));
    ensure(off <= 1e-9, format!("algebraic off-diagonal {off:e}"))?;
    let n1 = finite_gram(&fs1, GramMode::Numeric, 1e-11).map_err(|e| e.to_string())?;
    let d1 = gram_distance(&n1, &g1);
    ensure(d1 <= 1e-6, format!("W1 numeric {d1:e}"))?;
    let n2 = finite_gram(&fs2, GramMode::Numeric, 1e-12).map_err(|e| e.to_string())?;
    let d2 = gram_distance(&n2, &g2);
    ensure(d2 <= 1e-7, format!("W2 numeric {d2:e}"))?;
    let (c, spread) = proportionality(&g3, &g2).map_err(|e| e.to_string())?;
    ensure(spread <= 1e-9, format!("W3/W2 spread {spread:e}"))?;
    Ok(format!("off-diagonal {off:.1e}; W1 {d1:.1e}; W2 {d2:.1e}; W3/W2 = {c:.12} (spread {spread:.1e})"))
}

fn c13() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut norm_err: f64 = 0.0;
    for (mu, nu) in [(1.0, 1.0), (1.3, 0.7)] {
        let rep = jacobi_biorthogonal(mu, nu, 6).map_err(|e| e.to_string())?;
        ensure(rep.residual <= 1e-10, format!("({mu},{nu}) residual {:e}", rep.residual))?;
        worst = worst.max(rep.residual);
        for n in 0..=3 {
            let oracle = jacobi_integral_oracle(mu, nu, n, 1e-13).map_err(|e| e.to_string())?;
            let want = jacobi_norm(mu, nu, n).map_err(|e| e.to_string())?;
            norm_err = norm_err.max((oracle / want - 1.0).abs());
        }
    }
    ensure(norm_err <= 1e-9, format!("confirmed norm vs oracle {norm_err:e}"))?;
    let printed = printed_jacobi_norm(1.3, 0.7, 0).map_err(|e| e.to_string())?;
    let oracle = jacobi_integral_oracle(1.3, 0.7, 0, 1e-13).map_err(|e| e.to_string())?;
    Ok(format!(
        "residual {worst:.1e}; corrected norm matches the oracle to {norm_err:.1e} (printed off by {:.4})",
        printed / oracle
    ))
}

fn c14() -> Outcome {
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/full_catalog.toml");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut bodies = Vec::new();
    let start = Instant::now();
    for run in 0..2 {
        let out = dir.path().join(format!("run{run}.csv"));
        let st = Command::new(env!("CARGO_BIN_EXE_beta-verify"))
            .args(["run", cfg.to_str().unwrap(), "--seed", "42", "-q", "-o", out.to_str().unwrap()])
            .status()
            .map_err(|e| e.to_string())?;
        ensure(st.success(), format!("run {run} exited with {st}"))?;
        let text = std::fs::read_to_string(&out).map_err(|e| e.to_string())?;
        let body: Vec<String> =
            text.lines().map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head).to_string()).collect();
        bodies.push(body);
    }
    let t = start.elapsed() / 2;
    ensure(bodies[0] == bodies[1], "report differs between runs")?;
    let rows = bodies[0].len() - 2;
    ensure(bodies[0][2..].iter().all(|r| r.ends_with(",true")), "a record failed")?;
    ensure(t <= Duration::from_secs(600), format!("took {t:?}"))?;
    Ok(format!("{rows} records, zero failures, deterministic, {:.1} s per run", t.as_secs_f64()))
}

fn main() {
    let criteria: [Criterion; 14] = [
        ("four-parameter beta integral", c1),
        ("three-parameter integral with b", c2),
        ("second Barnes lemma and five-parameter integral", c3),
        ("Askey principal value with Σa < 2.9", c4),
        ("Dougall bilateral sum", c5),
        ("Kummer-type integral and its d↔e symmetry", c6),
        ("Mellin-Barnes identities, residues, degeneration", c7),
        ("power, product and unit-interval kernel identities", c8),
        ("index transform images and round trip", c9),
        ("index-integral identities", c10),
        ("classical Wilson orthogonality and norm", c11),
        ("finite systems W1, W2, W3", c12),
        ("Jacobi biorthogonality and norm", c13),
        ("full catalog run, seed 42", c14),
    ];
    // keep panics from intermediate asserts on one line
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} [PRIMARY] PASS  {name}: {detail} ({secs:.2} s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} [PRIMARY] FAIL  {name}: {why} ({secs:.2} s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
