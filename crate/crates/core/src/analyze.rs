//! Empirical checks of the regime table: increment ladders, exponent fits,
//! two-sided bound constants, the log-corrected borderline and the small-lag
//! asymptotic ratio.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::{incremental_variance, IncrementQuery};
use crate::numerics::DEFAULT_TOL;
use crate::processes::{Interval, ProcessKind, ProcessSpec};
use crate::simulate::{empirical_incremental_variance, empirical_variance, sample_paths, TimeGrid};
use crate::theory::{asymptotic_increment, Regime, RegimeReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableMethod {
    Quadrature,
    MonteCarlo,
}

/// How the increment norms of a ladder are obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScanMethod {
    Quadrature { tol: f64 },
    MonteCarlo { n_paths: usize, seed: u64 },
}

impl Default for ScanMethod {
    fn default() -> Self {
        ScanMethod::Quadrature { tol: DEFAULT_TOL }
    }
}

/// `‖U(anchor + h) - U(anchor)‖_2` on a decreasing ladder of lags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncrementTable {
    pub spec: ProcessSpec,
    pub anchor: f64,
    pub lags: Vec<f64>,
    pub sigma: Vec<f64>,
    pub method: TableMethod,
    /// Standard error of each `sigma` entry (delta method); zero for quadrature.
    pub std_errors: Vec<f64>,
}

impl IncrementTable {
    /// Builds a table from given values, checking the ladder invariants.
    pub fn new(
        spec: ProcessSpec,
        anchor: f64,
        lags: Vec<f64>,
        sigma: Vec<f64>,
        method: TableMethod,
        std_errors: Vec<f64>,
    ) -> Result<Self> {
        if lags.len() != sigma.len() || lags.len() != std_errors.len() {
            return Err(Error::Validation("table columns differ in length".into()));
        }
        if lags.iter().any(|h| !(h.is_finite() && *h > 0.0)) || lags.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Validation("lags must be positive and strictly decreasing".into()));
        }
        if sigma.iter().chain(&std_errors).any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Validation("sigma and std_errors must be finite and >= 0".into()));
        }
        Ok(IncrementTable { spec, anchor, lags, sigma, method, std_errors })
    }

    pub fn len(&self) -> usize {
        self.lags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lags.is_empty()
    }
}

/// Lag ladder `h_k = h_max * lag_ratio^k`, `k = 0..lag_count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ladder {
    pub lag_count: usize,
    pub lag_ratio: f64,
    pub h_max: f64,
}

impl Ladder {
    /// Twelve halvings starting at a hundredth of the interval length.
    pub fn default_for(interval: &Interval) -> Self {
        Ladder { lag_count: 12, lag_ratio: 0.5, h_max: 1e-2 * interval.len() }
    }

    pub fn lags(&self) -> Result<Vec<f64>> {
        if self.lag_count < 4 {
            return Err(Error::Validation(format!("lag_count must be >= 4, got {}", self.lag_count)));
        }
        if !(self.lag_ratio > 0.0 && self.lag_ratio < 1.0) {
            return Err(Error::Validation(format!("lag_ratio must lie in (0, 1), got {}", self.lag_ratio)));
        }
        if !(self.h_max.is_finite() && self.h_max > 0.0) {
            return Err(Error::Validation(format!("h_max must be > 0, got {}", self.h_max)));
        }
        Ok((0..self.lag_count)
            .map(|k| self.h_max * self.lag_ratio.powi(k as i32))
            .collect())
    }
}

/// Default anchor: the midpoint of the interval.
pub fn default_anchor(interval: &Interval) -> f64 {
    interval.midpoint()
}

/// Tabulates increment norms at `anchor` over `ladder`.
pub fn scan_increments(spec: &ProcessSpec, anchor: f64, ladder: &Ladder, method: ScanMethod) -> Result<IncrementTable> {
    if !(anchor.is_finite() && anchor >= 0.0) {
        return Err(Error::Validation(format!("anchor must be finite and >= 0, got {anchor}")));
    }
    // the lag actually evaluated: anchor + h is rounded, its difference from anchor is exact
    let lags: Vec<f64> = ladder.lags()?.iter().map(|h| (anchor + h) - anchor).collect();
    let (sigma, std_errors, tag) = match method {
        ScanMethod::Quadrature { tol } => {
            let sigma = lags
                .par_iter()
                .map(|&h| {
                    let q = IncrementQuery::new(*spec, anchor, anchor + h)?;
                    Ok(incremental_variance(&q, tol)?.total.sqrt())
                })
                .collect::<Result<Vec<_>>>()?;
            let n = sigma.len();
            (sigma, vec![0.0; n], TableMethod::Quadrature)
        }
        ScanMethod::MonteCarlo { n_paths, seed } => {
            let (s, e) = monte_carlo_sigma(spec, anchor, &lags, n_paths, seed)?;
            (s, e, TableMethod::MonteCarlo)
        }
    };
    IncrementTable::new(*spec, anchor, lags, sigma, tag, std_errors)
}

fn monte_carlo_sigma(
    spec: &ProcessSpec,
    anchor: f64,
    lags: &[f64],
    n_paths: usize,
    seed: u64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let has_anchor = anchor > 0.0;
    let mut points: Vec<f64> = lags.iter().rev().map(|h| anchor + h).collect();
    if has_anchor {
        points.insert(0, anchor);
    }
    let grid = TimeGrid::new(points)?;
    let ens = sample_paths(spec, &grid, n_paths, seed)?;
    let n = lags.len();
    let mut sigma = Vec::with_capacity(n);
    let mut errs = Vec::with_capacity(n);
    for k in 0..n {
        // lag k sits at grid index n-1-k, shifted by one when the anchor is a grid point
        let j = n - 1 - k + usize::from(has_anchor);
        let (v, se) = if has_anchor {
            empirical_incremental_variance(&ens, 0, j)?
        } else {
            empirical_variance(&ens, j)?
        };
        let s = v.sqrt();
        sigma.push(s);
        errs.push(if s > 0.0 { se / (2.0 * s) } else { 0.0 });
    }
    Ok((sigma, errs))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Slope of `ln sigma` against `ln h`.
    pub rho_hat: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least-squares fit of `ln sigma = intercept + rho_hat ln h`.
pub fn fit_exponent(table: &IncrementTable) -> Result<FitResult> {
    if table.len() < 4 {
        return Err(Error::Validation(format!("fit needs at least 4 lags, got {}", table.len())));
    }
    if table.sigma.iter().any(|s| *s <= 0.0) {
        return Err(Error::Data("table contains a zero increment norm".into()));
    }
    let x: Vec<f64> = table.lags.iter().map(|h| h.ln()).collect();
    let y: Vec<f64> = table.sigma.iter().map(|s| s.ln()).collect();
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        let ss_res: f64 = x.iter().zip(&y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(FitResult { rho_hat: slope, intercept, r_squared })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundCheckResult {
    /// `min sigma / h^{rho_lower}` over the table.
    pub c1_hat: f64,
    /// `max sigma / h^{rho_upper}` over the table.
    pub c2_hat: f64,
    pub mesh_size: usize,
    pub h_min: f64,
    pub h_max: f64,
}

/// Empirical two-sided bound constants for an exact or generalized regime.
pub fn bound_check(table: &IncrementTable, report: &RegimeReport) -> Result<BoundCheckResult> {
    match report.regime {
        Regime::ExactQuasihelix | Regime::Generalized => {}
        Regime::LogCorrected => {
            return Err(Error::Regime("log-corrected regime: use log_correction_check".into()))
        }
        Regime::Uncovered => return Err(Error::Regime("no bounds are available in this regime".into())),
    }
    let (rho1, rho2) = report
        .exponents()
        .ok_or_else(|| Error::Regime("regime report carries no exponents".into()))?;
    if table.is_empty() {
        return Err(Error::Data("empty table".into()));
    }
    let mut c1 = f64::INFINITY;
    let mut c2 = 0.0f64;
    for (h, s) in table.lags.iter().zip(&table.sigma) {
        c1 = c1.min(s / h.powf(rho1));
        c2 = c2.max(s / h.powf(rho2));
    }
    Ok(BoundCheckResult {
        c1_hat: c1,
        c2_hat: c2,
        mesh_size: table.len(),
        h_min: *table.lags.last().unwrap(),
        h_max: table.lags[0],
    })
}

/// Extremes of `sigma^2 / (h^2 (1 + |ln h|))` over the ladder.
pub fn log_correction_check(table: &IncrementTable) -> Result<(f64, f64)> {
    let spec = &table.spec;
    let borderline = matches!(
        spec.kind(),
        ProcessKind::U1 | ProcessKind::U2 | ProcessKind::U4 | ProcessKind::U5 | ProcessKind::U6
    ) && spec.alpha() == 0.5;
    if !borderline {
        return Err(Error::Regime(format!("{spec} is not in the log-corrected regime")));
    }
    if table.is_empty() {
        return Err(Error::Data("empty table".into()));
    }
    let ratios = table
        .lags
        .iter()
        .zip(&table.sigma)
        .map(|(h, s)| s * s / (h * h * (1.0 + h.ln().abs())));
    Ok(ratios.fold((f64::INFINITY, 0.0f64), |(lo, hi), r| (lo.min(r), hi.max(r))))
}

/// Per-lag ratio of the increment variance to its leading asymptotic term.
pub fn asymptotic_ratio_check(spec: &ProcessSpec, anchor: f64, table: &IncrementTable) -> Result<Vec<f64>> {
    if table.spec != *spec || table.anchor != anchor {
        return Err(Error::Validation("table was built for a different spec or anchor".into()));
    }
    table
        .lags
        .iter()
        .zip(&table.sigma)
        .map(|(&h, s)| Ok(s * s / asymptotic_increment(spec, anchor, h)?.leading_variance(h)))
        .collect()
}
