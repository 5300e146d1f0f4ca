//! The acceptance suite: eleven checks that tie the numerics to the known
//! closed forms, limits, exponents and the regime table.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analyze::{
    asymptotic_ratio_check, fit_exponent, log_correction_check, scan_increments, Ladder, ScanMethod,
};
use crate::error::Result;
use crate::moments::{
    g1, g2, incremental_variance, mandelbrot_constant, mandelbrot_constant_numeric, IncrementQuery,
};
use crate::numerics::{beta_fn, integrate_with, QuadConfig, DEFAULT_TOL};
use crate::processes::{make_process, Interval, ProcessKind, ProcessSpec};
use crate::simulate::{empirical_incremental_variance, empirical_variance, sample_paths, TimeGrid};
use crate::theory::{classify_regime, Regime};

/// Seed of the Monte Carlo criterion.
pub const MC_SEED: u64 = 1;

/// Titles indexed by criterion number minus one.
pub const CRITERIA: [&str; 11] = [
    "constant identity",
    "closed-form variance",
    "scaling identity",
    "g-limits",
    "exact asymptotics",
    "exponent recovery, exact regimes",
    "generalized regimes at the origin",
    "log-corrected borderline",
    "Monte Carlo consistency",
    "stationary increments and decomposition",
    "regime-table conformance",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: usize,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionOutcome {
    /// One-line summary, `PASS [n] title: detail`.
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {}: {} ({:.2}s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.seconds
        )
    }
}

/// Pass flag and a short detail string.
type Check = Result<(bool, String)>;

/// Runs criterion `id` (1-based); `None` for an unknown id.
pub fn run_criterion(id: usize) -> Option<CriterionOutcome> {
    let f: fn() -> Check = match id {
        1 => constant_identity,
        2 => closed_form_variance,
        3 => scaling_identity,
        4 => g_limits,
        5 => exact_asymptotics,
        6 => exponent_recovery,
        7 => generalized_at_origin,
        8 => log_corrected,
        9 => monte_carlo_consistency,
        10 => stationarity_and_decomposition,
        11 => regime_table_conformance,
        _ => return None,
    };
    let start = Instant::now();
    let (passed, detail) = match f() {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Some(CriterionOutcome {
        id,
        title: CRITERIA[id - 1].to_string(),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run_all() -> Vec<CriterionOutcome> {
    (1..=CRITERIA.len()).filter_map(run_criterion).collect()
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn spec(kind: ProcessKind, alpha: f64, gamma: f64, lambda: f64) -> Result<ProcessSpec> {
    make_process(kind, alpha, gamma, lambda)
}

fn constant_identity() -> Check {
    let mut worst = 0.0f64;
    for k in -9..=9 {
        let a = k as f64 * 0.05;
        let d = (mandelbrot_constant(a)? - mandelbrot_constant_numeric(a, 1e-10)?).abs();
        worst = worst.max(d);
    }
    Ok((worst <= 1e-8, format!("max |C - C_num| = {worst:.3e} over 19 alphas (limit 1e-8)")))
}

fn closed_form_variance() -> Check {
    let mut worst = 0.0f64;
    for a in [-0.4, -0.2, 0.25, 0.7, 1.5] {
        for g in [0.0, 0.3, 0.6, 0.8, 0.95] {
            for t in [0.5f64, 1.0, 3.0] {
                let exact = beta_fn(1.0 - g, 1.0 + 2.0 * a)? * t.powf(2.0 * a + 1.0 - g);
                // split at t/2 and reflect the upper half so each piece has a lower-end singularity only
                let cfg = QuadConfig::relative(1e-12);
                let lower = integrate_with(|u: f64| u.powf(-g) * (t - u).powf(2.0 * a), 0.0, t / 2.0, -g, 0.0, &[], &cfg)?;
                let upper = integrate_with(
                    |v: f64| (t - v).powf(-g) * v.powf(2.0 * a),
                    0.0,
                    t / 2.0,
                    (2.0 * a).min(0.0),
                    0.0,
                    &[],
                    &cfg,
                )?;
                let direct = lower.value + upper.value;
                let via_moments = incremental_variance(&IncrementQuery::new(spec(ProcessKind::U2, a, g, 0.0)?, 0.0, t)?, 1e-12)?.total;
                worst = worst.max(rel_err(direct, exact)).max(rel_err(via_moments, exact));
            }
        }
    }
    Ok((worst <= 1e-8, format!("max relative error {worst:.3e} on 75 (alpha, gamma, t) (limit 1e-8)")))
}

fn scaling_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let a = rng.random_range(-0.45..1.5);
        let g = rng.random_range(0.0..0.9);
        let s = rng.random_range(0.1..5.0);
        let h = rng.random_range(1e-3..2.0);
        let q = IncrementQuery::new(spec(ProcessKind::U2, a, g, 0.0)?, s, s + h)?;
        let h = q.t() - s;
        let direct = incremental_variance(&q, 1e-12)?.total;
        let r = s / h;
        let scaled = h.powf(2.0 * a + 1.0 - g) * (g1(r, a, g)? + g2(r, a, g)?);
        worst = worst.max(rel_err(direct, scaled));
    }
    Ok((worst <= 1e-8, format!("max relative error {worst:.3e} over 20 draws (limit 1e-8)")))
}

fn g_limits() -> Check {
    let r = 1e4f64;
    let (mut w1, mut w2) = (0.0f64, 0.0f64);
    for a in [-0.25, 0.25] {
        for g in [0.2, 0.6] {
            let inv = 1.0 / (2.0 * a + 1.0);
            let c = mandelbrot_constant(a)?;
            w2 = w2.max(rel_err(r.powf(g) * g2(r, a, g)?, inv));
            w1 = w1.max(rel_err(r.powf(g) * g1(r, a, g)?, c - inv));
        }
    }
    Ok((
        w2 <= 1e-3 && w1 <= 1e-2,
        format!("g2 rel {w2:.3e} (limit 1e-3), g1 rel {w1:.3e} (limit 1e-2) at r = 1e4"),
    ))
}

fn exact_asymptotics() -> Check {
    let h = 1e-4;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for (a, g) in [(0.25, 0.4), (-0.25, 0.2)] {
        let sp = spec(ProcessKind::U2, a, g, 0.0)?;
        for s in [1.0, 2.0] {
            let ladder = Ladder { lag_count: 4, lag_ratio: 0.1, h_max: h * 1e3 };
            let table = scan_increments(&sp, s, &ladder, ScanMethod::Quadrature { tol: 1e-12 })?;
            let ratio = *asymptotic_ratio_check(&sp, s, &table)?.last().unwrap();
            lo = lo.min(ratio);
            hi = hi.max(ratio);
        }
    }
    Ok((
        lo >= 0.98 && hi <= 1.02,
        format!("ratios at h = 1e-4 in [{lo:.6}, {hi:.6}] (limit [0.98, 1.02])"),
    ))
}

fn exponent_recovery() -> Check {
    use ProcessKind::*;
    let unit = Interval::new(0.0, 1.0)?;
    let away = Interval::new(1.0, 2.0)?;
    let mut cases: Vec<(ProcessSpec, Interval, f64)> = Vec::new();
    for a in [-0.3, 0.3] {
        cases.push((spec(U1, a, 0.0, 1.0)?, unit, 0.5));
    }
    for a in [-0.3, 0.3, 0.8] {
        cases.push((spec(U2, a, 0.4, 0.0)?, away, 1.5));
        cases.push((spec(U4, a, 0.0, 1.0)?, unit, 0.5));
        cases.push((spec(U5, a, 0.0, 1.0)?, unit, 0.5));
    }
    cases.push((spec(V, 0.3, 0.4, 0.0)?, away, 1.5));
    cases.push((spec(U3, 1.0, 0.0, 0.0)?, unit, 0.5));
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for (sp, iv, anchor) in &cases {
        let report = classify_regime(sp, iv);
        let (rho, _) = report.exponents().unwrap_or((f64::NAN, f64::NAN));
        let table = scan_increments(sp, *anchor, &Ladder::default_for(iv), ScanMethod::default())?;
        let dev = (fit_exponent(&table)?.rho_hat - rho).abs();
        if report.regime != Regime::ExactQuasihelix || !(dev <= 0.02) {
            failures.push(format!("{sp}: deviation {dev:.4}"));
        }
        worst = worst.max(dev);
    }
    let detail = format!("{} specs, max |rho_hat - rho| = {worst:.4e} (limit 0.02)", cases.len());
    if failures.is_empty() {
        Ok((true, detail))
    } else {
        Ok((false, format!("{detail}; failing: {}", failures.join(", "))))
    }
}

fn generalized_at_origin() -> Check {
    let unit = Interval::new(0.0, 1.0)?;
    let mut worst = 0.0f64;
    for (a, g) in [(0.25, 0.4), (0.7, 0.4), (1.2, 0.4)] {
        let sp = spec(ProcessKind::U2, a, g, 0.0)?;
        let table = scan_increments(&sp, 0.0, &Ladder::default_for(&unit), ScanMethod::default())?;
        let target = (2.0 * a + 1.0 - g) / 2.0;
        worst = worst.max((fit_exponent(&table)?.rho_hat - target).abs());
    }
    Ok((worst <= 0.01, format!("max |rho_hat - (2a+1-g)/2| = {worst:.3e} (limit 0.01)")))
}

fn log_corrected() -> Check {
    // nine lags from 1e-2 down to 1e-6
    let ladder = Ladder { lag_count: 9, lag_ratio: 0.1f64.sqrt(), h_max: 1e-2 };
    let mut parts = Vec::new();
    let mut ok = true;
    for sp in [spec(ProcessKind::U2, 0.5, 0.4, 0.0)?, spec(ProcessKind::U1, 0.5, 0.0, 1.0)?] {
        let table = scan_increments(&sp, 1.0, &ladder, ScanMethod::default())?;
        let (lo, hi) = log_correction_check(&table)?;
        ok &= hi / lo <= 4.0;
        parts.push(format!("{}: max/min = {:.4}", sp.kind(), hi / lo));
    }
    Ok((ok, format!("{} (limit 4)", parts.join(", "))))
}

fn monte_carlo_consistency() -> Check {
    let grid = TimeGrid::uniform(2.0, 8)?;
    let pts = grid.points().to_vec();
    let mut worst_z = 0.0f64;
    let mut checked = 0;
    let mut failures = 0;
    for sp in [
        ProcessSpec::wiener(),
        spec(ProcessKind::U2, 0.25, 0.4, 0.0)?,
        spec(ProcessKind::U4, 0.3, 0.0, 1.0)?,
    ] {
        let ens = sample_paths(&sp, &grid, 10_000, MC_SEED)?;
        for j in 0..pts.len() {
            let mut pairs = vec![(None, j)];
            pairs.extend((0..j).map(|i| (Some(i), j)));
            for (i, j) in pairs {
                let (s, (est, se)) = match i {
                    None => (0.0, empirical_variance(&ens, j)?),
                    Some(i) => (pts[i], empirical_incremental_variance(&ens, i, j)?),
                };
                let exact = incremental_variance(&IncrementQuery::new(sp, s, pts[j])?, DEFAULT_TOL)?.total;
                let z = (est - exact).abs() / se;
                worst_z = worst_z.max(z);
                checked += 1;
                if !(z <= 3.0) {
                    failures += 1;
                }
            }
        }
    }
    Ok((
        failures == 0,
        format!("{checked} increments, {failures} beyond 3 standard errors, max |z| = {worst_z:.3}"),
    ))
}

fn stationarity_and_decomposition() -> Check {
    use ProcessKind::*;
    let mut worst = 0.0f64;
    for kind in [U4, U5] {
        for a in [-0.3, 0.0, 0.3, 0.8] {
            for lam in [0.5, 2.0] {
                let sp = spec(kind, a, 0.0, lam)?;
                for h in [1e-3, 0.25, 3.0] {
                    let vals: Vec<f64> = [0.0, 0.5, 1.0, 5.0]
                        .iter()
                        .map(|&s| Ok(incremental_variance(&IncrementQuery::new(sp, s, s + h)?, DEFAULT_TOL)?.total))
                        .collect::<Result<_>>()?;
                    for v in &vals[1..] {
                        worst = worst.max(rel_err(*v, vals[0]));
                    }
                }
            }
        }
    }
    let mut exact = true;
    for (a, g) in [(-0.2, 0.4), (0.25, 0.4), (0.6, 0.5)] {
        for (s, t) in [(0.5, 0.7), (1.0, 2.0), (0.0, 1.5)] {
            let part = |k| -> Result<f64> {
                Ok(incremental_variance(&IncrementQuery::new(spec(k, a, g, 0.0)?, s, t)?, DEFAULT_TOL)?.total)
            };
            if part(U6)? != part(V)? + part(U2)? {
                exact = false;
            }
        }
    }
    Ok((
        worst <= 1e-8 && exact,
        format!(
            "anchor spread {worst:.3e} (limit 1e-8); U6 = V + U2 {}",
            if exact { "exactly" } else { "violated" }
        ),
    ))
}

/// The regime table written out a second time, independently of `classify_regime`.
fn expected_regime(kind: ProcessKind, a: f64, g: f64, t1_positive: bool) -> (Regime, Option<(f64, f64)>) {
    use ProcessKind::*;
    use Regime::*;
    let half = 0.5;
    let ex = |r: f64| (ExactQuasihelix, Some((r, r)));
    let gen = |r1: f64, r2: f64| (Generalized, Some((r1, r2)));
    let log = (LogCorrected, Some((1.0, 1.0)));
    let none = (Uncovered, None);
    let standard = |a: f64| {
        if a < half {
            ex(a + half)
        } else if a == half {
            log
        } else {
            ex(1.0)
        }
    };
    match (kind, t1_positive) {
        (Wiener, _) => ex(half),
        (U1, true) => standard(a),
        (U1, false) if a > half => gen(a + half, 1.0),
        (U1, false) => standard(a),
        (U3, _) if a < 1.0 => gen(1.0, a),
        (U3, _) if a == 1.0 => ex(half),
        (U3, _) if a < 2.0 => gen(a, 1.0),
        (U3, _) => gen(a / 2.0, half),
        (U2, true) | (U4, _) | (U5, _) => standard(a),
        (U2, false) if g > 0.0 && a <= -half + g / 2.0 => none,
        (U2, false) if a < half + g / 2.0 => gen(a + half, a + (1.0 - g) / 2.0),
        (U2, false) if a < 1.0 => gen(a + half, a),
        (U2, false) => gen(a + half, 1.0),
        (V, true) => ex(1.0),
        (V, false) | (U6, false) => none,
        (U6, true) if a >= half + g / 2.0 => none,
        (U6, true) => standard(a),
    }
}

fn sweep_points(kind: ProcessKind) -> Vec<(f64, f64)> {
    use ProcessKind::*;
    let gammas: &[f64] = match kind {
        U2 | U6 | V => &[0.0, 0.2, 0.4, 0.6, 0.8],
        _ => &[0.0],
    };
    let mut out = Vec::new();
    for &g in gammas {
        // boundary values first, then a regular sweep
        let mut alphas = vec![0.5, 0.5 + g / 2.0, -0.5 + g / 2.0, 1.0, 2.0, 0.0];
        let n = 400 / gammas.len();
        alphas.extend((0..n).map(|k| -0.49 + 2.98 * k as f64 / (n - 1) as f64));
        for a in alphas {
            if make_process(kind, a, g, 1.0).is_ok() && !out.contains(&(a, g)) {
                out.push((a, g));
            }
        }
    }
    out
}

fn regime_table_conformance() -> Check {
    let intervals = [Interval::new(0.0, 1.0)?, Interval::new(0.5, 2.0)?];
    let mut total = 0;
    let mut mismatches = Vec::new();
    for kind in ProcessKind::ALL {
        let mut count = 0;
        'outer: for (a, g) in sweep_points(kind) {
            for iv in &intervals {
                if count == 200 {
                    break 'outer;
                }
                let sp = make_process(kind, a, g, 1.0)?;
                let got = classify_regime(&sp, iv);
                let want = expected_regime(kind, sp.alpha(), sp.gamma(), iv.t1() > 0.0);
                if (got.regime, got.exponents()) != want {
                    mismatches.push(format!("{sp} on [{}, {}]", iv.t1(), iv.t2()));
                }
                count += 1;
            }
        }
        total += count;
    }
    let detail = format!("{total} parameter points, {} mismatches", mismatches.len());
    if mismatches.is_empty() {
        Ok((true, detail))
    } else {
        mismatches.truncate(5);
        Ok((false, format!("{detail}: {}", mismatches.join("; "))))
    }
}
