//! Batch verification: a TOML run description in, a CSV report out.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use beta_integrals::catalog::{self, IdentityId};
use beta_integrals::wilson::{check_system, MomentKind};
use rayon::prelude::*;
use serde::Deserialize;

/// A catalog identity or a finite orthogonal system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Identity(IdentityId),
    System(MomentKind),
}

impl Target {
    pub fn all() -> Vec<Target> {
        let mut v: Vec<Target> = IdentityId::ALL.iter().map(|&i| Target::Identity(i)).collect();
        v.extend(MomentKind::ALL.iter().map(|&k| Target::System(k)));
        v.sort_by_key(|t| t.name());
        v
    }

    pub fn name(&self) -> &'static str {
        match self {
            Target::Identity(i) => i.as_str(),
            Target::System(k) => k.as_str(),
        }
    }

    pub fn param_names(&self) -> &'static [&'static str] {
        match self {
            Target::Identity(i) => i.param_names(),
            Target::System(k) => k.param_names(),
        }
    }

    pub fn default_tolerance(&self) -> f64 {
        match self {
            Target::Identity(i) => i.default_tolerance(),
            Target::System(k) => k.default_tolerance(),
        }
    }

    fn sample_points(&self, count: usize, seed: u64) -> Vec<Vec<f64>> {
        match self {
            Target::Identity(i) => catalog::sample_points(*i, count, seed),
            Target::System(k) => k.sample_points(count, seed),
        }
    }

    fn check(&self, p: &[f64], tol: f64) -> Record {
        let start = Instant::now();
        let params = self.param_names().iter().map(|s| s.to_string()).zip(p.iter().copied()).collect();
        let (lhs, rhs, rel_error, passed, reason) = match self {
            Target::Identity(i) => {
                let r = catalog::verify(*i, p, tol);
                (r.lhs_value, r.rhs_value, r.rel_error, r.passed, r.reason)
            }
            Target::System(k) => match check_system(*k, p, tol) {
                Ok(c) => (c.numeric, c.algebraic, c.rel_error, c.rel_error <= tol, None),
                Err(e) => (f64::NAN, f64::NAN, f64::NAN, false, Some(e.to_string())),
            },
        };
        Record {
            target: self.name().to_string(),
            params,
            lhs,
            rhs,
            rel_error,
            tolerance: tol,
            passed,
            seconds: start.elapsed().as_secs_f64(),
            reason,
        }
    }
}

impl FromStr for Target {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        if let Ok(i) = s.parse::<IdentityId>() {
            return Ok(Target::Identity(i));
        }
        if let Ok(k) = s.parse::<MomentKind>() {
            return Ok(Target::System(k));
        }
        bail!("unknown target id {s:?} (see `beta-verify list-targets`)")
    }
}

/// Every target with its anchor, parameter names and domain; sorted by id.
pub fn list_targets() -> String {
    let mut out = String::new();
    for t in Target::all() {
        let (anchor, domain, note) = match t {
            Target::Identity(i) => (i.anchor(), i.domain(), i.note()),
            Target::System(k) => (k.anchor(), k.domain(), None),
        };
        let _ = writeln!(out, "{} — {}", t.name(), anchor);
        let _ = writeln!(out, "    params: {}", t.param_names().join(", "));
        let _ = writeln!(out, "    domain: {domain}");
        if let Some(n) = note {
            let _ = writeln!(out, "    note: {n}");
        }
    }
    out
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    seed: Option<u64>,
    output: Option<String>,
    threads: Option<usize>,
    tolerance: Option<f64>,
    #[serde(default)]
    targets: BTreeMap<String, RawTarget>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTarget {
    #[serde(default)]
    random: usize,
    #[serde(default)]
    points: Vec<Vec<f64>>,
    tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetConfig {
    pub target: Target,
    pub random: usize,
    pub points: Vec<Vec<f64>>,
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub output: Option<String>,
    pub threads: Option<usize>,
    /// overrides every per-target tolerance
    pub tolerance: Option<f64>,
    pub targets: Vec<TargetConfig>,
}

fn line_of(text: &str, needle: &str) -> Option<usize> {
    text.lines().position(|l| l.contains(needle)).map(|i| i + 1)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| anyhow!("config: {e}"))?;
        let at = |key: &str| line_of(text, key).map(|l| format!("line {l}: ")).unwrap_or_default();
        let mut targets = Vec::new();
        for (name, t) in raw.targets {
            let target: Target = name.parse().with_context(|| format!("config {}target [targets.{name}]", at(&name)))?;
            let want = target.param_names().len();
            for p in &t.points {
                if p.len() != want {
                    bail!(
                        "config {}{name}: point {p:?} has {} values, expected {want} ({})",
                        at(&name),
                        p.len(),
                        target.param_names().join(", ")
                    );
                }
            }
            if let Some(tol) = t.tolerance {
                if tol.is_nan() || tol <= 0.0 {
                    bail!("config {}{name}: tolerance must be positive", at(&name));
                }
            }
            targets.push(TargetConfig { target, random: t.random, points: t.points, tolerance: t.tolerance });
        }
        targets.sort_by_key(|t| t.target.name());
        if let Some(tol) = raw.tolerance {
            if tol.is_nan() || tol <= 0.0 {
                bail!("config {}tolerance must be positive", at("tolerance"));
            }
        }
        Ok(RunConfig { seed: raw.seed.unwrap_or(0), output: raw.output, threads: raw.threads, tolerance: raw.tolerance, targets })
    }

    /// The (target, point, tolerance) jobs in report order: explicit points
    /// first, then the random draws, targets sorted by id.
    pub fn jobs(&self) -> Vec<(Target, Vec<f64>, f64)> {
        let mut out = Vec::new();
        for t in &self.targets {
            let tol = self.tolerance.or(t.tolerance).unwrap_or_else(|| t.target.default_tolerance());
            for p in t.points.iter().cloned().chain(t.target.sample_points(t.random, self.seed)) {
                out.push((t.target, p, tol));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub target: String,
    pub params: Vec<(String, f64)>,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub seconds: f64,
    pub reason: Option<String>,
}

/// 17 significant digits: enough to round-trip any f64.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub const HEADER: [&str; 8] = ["id", "params", "lhs", "rhs", "rel_error", "tol", "passed", "seconds"];

/// The CSV report: a `# seed=…` line, the header, one row per record.
pub fn write_report(w: impl Write, seed: u64, records: &[Record]) -> Result<()> {
    let mut w = w;
    writeln!(w, "# seed={seed}")?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(HEADER)?;
    for r in records {
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={}", fmt_num(*v))).collect();
        csv.write_record([
            r.target.clone(),
            params.join(";"),
            fmt_num(r.lhs),
            fmt_num(r.rhs),
            fmt_num(r.rel_error),
            fmt_num(r.tolerance),
            r.passed.to_string(),
            format!("{:.6}", r.seconds),
        ])?;
    }
    csv.flush()?;
    Ok(())
}

/// Runs every job on the rayon pool; rows come back in job order.
pub fn run(cfg: &RunConfig) -> Result<Vec<Record>> {
    let jobs = cfg.jobs();
    let work = || jobs.par_iter().map(|(t, p, tol)| t.check(p, *tol)).collect::<Vec<_>>();
    match cfg.threads {
        Some(n) => Ok(rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(work)),
        None => Ok(work()),
    }
}

/// One line per target: passed/total and the worst relative error.
pub fn summary(records: &[Record]) -> String {
    let mut by: BTreeMap<&str, (usize, usize, f64)> = BTreeMap::new();
    for r in records {
        let e = by.entry(&r.target).or_insert((0, 0, 0.0));
        e.0 += r.passed as usize;
        e.1 += 1;
        e.2 = if r.rel_error.is_nan() { f64::NAN } else { e.2.max(r.rel_error) };
    }
    let mut out = String::new();
    for (t, (ok, n, worst)) in by {
        let _ = writeln!(out, "{t:<12} {ok}/{n} passed, worst rel_error {worst:.3e}");
    }
    let failed = records.iter().filter(|r| !r.passed).count();
    let _ = writeln!(out, "{} records, {failed} failed", records.len());
    out
}
