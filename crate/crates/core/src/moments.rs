//! Second-moment structure: variances, covariances and incremental variances.
//!
//! For zero-started kinds the increment `U(t) - U(s)` splits into
//! `J1 = ∫_0^s [K(t,u) - K(s,u)]^2 du` and `J2 = ∫_s^t K(t,u)^2 du`.
//! The V component contributes `J4 = ∫_0^∞ u^{-γ} [(t+u)^α - (s+u)^α]^2 du`.
//! U4 and U5 have stationary increments and are evaluated in the lag only:
//! `∫_0^∞ [κ(h+v) - κ(v)]^2 dv` (reported as `j1`) and `∫_0^h κ(v)^2 dv` (`j2`).
//!
//! Every integrand is rewritten so that its singular points sit at a lower
//! endpoint, where the quadrature substitution applies; differences of
//! powers go through [`pow_diff`] so lags down to `1e-8` keep full relative accuracy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    beta_fn, gamma_fn, geometric_from_lower, integrate_semi_infinite_with, integrate_with,
    pow_diff, QuadConfig, QuadResult, TailOptions, DEFAULT_TOL,
};
use statrs::function::gamma::gamma_lr;

use crate::processes::{tempered_pow_integral, ProcessKind, ProcessSpec, U5_INNER_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IncrementQuery {
    spec: ProcessSpec,
    s: f64,
    t: f64,
}

impl IncrementQuery {
    /// `0 <= s <= t`; `s == t` is the degenerate zero increment.
    pub fn new(spec: ProcessSpec, s: f64, t: f64) -> Result<Self> {
        if !(s.is_finite() && t.is_finite() && s >= 0.0 && t >= s) {
            return Err(Error::Domain(format!("increment requires 0 <= s <= t, got s={s}, t={t}")));
        }
        Ok(IncrementQuery { spec, s, t })
    }

    pub fn spec(&self) -> &ProcessSpec {
        &self.spec
    }
    pub fn s(&self) -> f64 {
        self.s
    }
    pub fn t(&self) -> f64 {
        self.t
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    ClosedForm,
    Quadrature,
    SumOfComponents,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentBreakdown {
    pub j1: f64,
    pub j2: f64,
    pub j4: f64,
    pub total: f64,
    pub method: MomentMethod,
    /// Sum of the quadrature error estimates of the components.
    pub error_estimate: f64,
}

impl MomentBreakdown {
    fn closed(total: f64) -> Self {
        MomentBreakdown {
            j1: 0.0,
            j2: total,
            j4: 0.0,
            total,
            method: MomentMethod::ClosedForm,
            error_estimate: 0.0,
        }
    }
}

fn tagged(r: Result<QuadResult>, what: &str) -> Result<QuadResult> {
    r.map_err(|e| e.with_context(what))
}

/// `∫_0^b f` with endpoint exponent `lower_exp` at 0 and geometric breakpoints from `scale`.
fn from_zero<F: Fn(f64) -> f64>(f: F, b: f64, lower_exp: f64, scale: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    let breaks = if scale > 0.0 && scale < b {
        geometric_from_lower(0.0, b, scale)
    } else {
        Vec::new()
    };
    integrate_with(f, 0.0, b, lower_exp, 0.0, &breaks, cfg)
}

fn neg_part(x: f64) -> f64 {
    x.min(0.0)
}

/// `∫_0^s (s-z)^{-γ} [(h+z)^α - z^α]^2 dz`, split at `s/2` so each singular end is a lower endpoint.
fn power_weighted_j1(s: f64, h: f64, alpha: f64, gamma: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if s == 0.0 || alpha == 0.0 {
        return Ok(QuadResult { value: 0.0, error_estimate: 0.0, evaluations: 0 });
    }
    let half = 0.5 * s;
    let near = from_zero(
        |z: f64| (s - z).powf(-gamma) * pow_diff(z, h, alpha).powi(2),
        half,
        neg_part(2.0 * alpha),
        h,
        cfg,
    )?;
    let far = from_zero(
        |d: f64| d.powf(-gamma) * pow_diff(s - d, h, alpha).powi(2),
        half,
        -gamma,
        0.0,
        cfg,
    )?;
    Ok(QuadResult {
        value: near.value + far.value,
        error_estimate: near.error_estimate + far.error_estimate,
        evaluations: near.evaluations + far.evaluations,
    })
}

/// `∫_0^h (x+s)^{-γ} (h-x)^{2α} dx`.
fn power_weighted_j2(s: f64, h: f64, alpha: f64, gamma: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    let half = 0.5 * h;
    let near = if s > 0.0 && s < half {
        // x = s (e^y - 1) flattens the near-singularity at x = -s
        let ln_s = s.ln();
        integrate_with(
            |y: f64| ((1.0 - gamma) * (ln_s + y)).exp() * (h - s * y.exp_m1()).powf(2.0 * alpha),
            0.0,
            (half / s).ln_1p(),
            0.0,
            0.0,
            &[],
            cfg,
        )?
    } else {
        from_zero(
            |x: f64| (x + s).powf(-gamma) * (h - x).powf(2.0 * alpha),
            half,
            if s == 0.0 { -gamma } else { 0.0 },
            s,
            cfg,
        )?
    };
    let far = from_zero(
        |y: f64| (s + h - y).powf(-gamma) * y.powf(2.0 * alpha),
        half,
        neg_part(2.0 * alpha),
        0.0,
        cfg,
    )?;
    Ok(QuadResult {
        value: near.value + far.value,
        error_estimate: near.error_estimate + far.error_estimate,
        evaluations: near.evaluations + far.evaluations,
    })
}

/// `J4 = ∫_0^∞ u^{-γ} [(t+u)^α - (s+u)^α]^2 du`.
fn v_component(s: f64, t: f64, alpha: f64, gamma: f64, cfg: &QuadConfig) -> Result<QuadResult> {
    if alpha == 0.0 {
        return Ok(QuadResult { value: 0.0, error_estimate: 0.0, evaluations: 0 });
    }
    let h = t - s;
    let tail_exponent = 2.0 * alpha - 2.0 - gamma;
    if !(tail_exponent < -1.0) {
        return Err(Error::Domain(format!(
            "the V component diverges at infinity for alpha >= 1/2 + gamma/2 (alpha={alpha}, gamma={gamma})"
        )));
    }
    let lower_exp = if s > 0.0 { -gamma } else { -gamma + neg_part(2.0 * alpha) };
    if !(lower_exp > -1.0) {
        return Err(Error::Domain(format!(
            "V(t) has infinite variance for 2*alpha - gamma <= -1 (alpha={alpha}, gamma={gamma})"
        )));
    }
    let first_width = if s > 0.0 { s } else { h };
    integrate_semi_infinite_with(
        |u: f64| u.powf(-gamma) * pow_diff(s + u, h, alpha).powi(2),
        0.0,
        TailOptions::new(tail_exponent, lower_exp, first_width).extrapolated(),
        &[],
        cfg,
    )
}

/// `J1 + J2` for U1: `∫_0^s e^{-2λ(s-z)} [(z+h)^α - z^α]^2 dz` and `∫_0^h e^{-2λ(t-x)} x^{2α} dx`.
fn u1_parts(spec: &ProcessSpec, s: f64, t: f64, cfg: &QuadConfig) -> Result<(QuadResult, QuadResult)> {
    let (a, l) = (spec.alpha(), spec.lambda());
    let h = t - s;
    let j1 = if s > 0.0 && a != 0.0 {
        tagged(
            from_zero(
                |z: f64| (-2.0 * l * (s - z)).exp() * pow_diff(z, h, a).powi(2),
                s,
                neg_part(2.0 * a),
                h,
                cfg,
            ),
            "J1",
        )?
    } else {
        QuadResult { value: 0.0, error_estimate: 0.0, evaluations: 0 }
    };
    let j2 = tagged(
        from_zero(|x: f64| (-2.0 * l * (t - x)).exp() * x.powf(2.0 * a), h, neg_part(2.0 * a), 0.0, cfg),
        "J2",
    )?;
    Ok((j1, j2))
}

/// `J1 = s ∫_0^∞ e^{-x} [(x+L)^β - x^β]^2 dx`, `J2 = t ∫_0^L x^{α-1} e^{-x} dx`, `L = log(t/s)`.
fn u3_parts(spec: &ProcessSpec, s: f64, t: f64, cfg: &QuadConfig) -> Result<(QuadResult, QuadResult)> {
    let a = spec.alpha();
    let beta = 0.5 * (a - 1.0);
    let log_ratio = ((t - s) / s).ln_1p();
    let j1 = if beta == 0.0 {
        QuadResult { value: 0.0, error_estimate: 0.0, evaluations: 0 }
    } else {
        let r = tagged(
            integrate_semi_infinite_with(
                |x: f64| (-x).exp() * pow_diff(x, log_ratio, beta).powi(2),
                0.0,
                TailOptions::new(-2.0, neg_part(2.0 * beta), log_ratio),
                &[],
                cfg,
            ),
            "J1",
        )?;
        QuadResult {
            value: s * r.value,
            error_estimate: s * r.error_estimate,
            evaluations: r.evaluations,
        }
    };
    let r = tagged(
        from_zero(|x: f64| x.powf(a - 1.0) * (-x).exp(), log_ratio, neg_part(a - 1.0), 0.0, cfg),
        "J2",
    )?;
    let j2 = QuadResult {
        value: t * r.value,
        error_estimate: t * r.error_estimate,
        evaluations: r.evaluations,
    };
    Ok((j1, j2))
}

/// Truncation point for integrands decaying like `e^{-2λv}`.
fn exponential_cutoff(lambda: f64, tol: f64) -> f64 {
    (2.0 / lambda * (1.0 / tol).ln()).max(1.0)
}

/// Stationary-increment kinds: `∫_0^∞ [κ(h+v) - κ(v)]^2 dv` and `∫_0^h κ(v)^2 dv`.
fn tempered_parts(spec: &ProcessSpec, h: f64, tol: f64, cfg: &QuadConfig) -> Result<(QuadResult, QuadResult)> {
    let (a, l) = (spec.alpha(), spec.lambda());
    let second_kind = spec.kind() == ProcessKind::U5;
    let inner = |lo: f64, hi: f64| -> f64 {
        // failures surface as NaN and are reported by the outer quadrature
        tempered_pow_integral(lo, hi, a, l, U5_INNER_TOL).unwrap_or(f64::NAN)
    };
    let inner_rel = |lo: f64, hi: f64| -> f64 {
        let cfg = QuadConfig::relative(U5_INNER_TOL);
        integrate_with(|w: f64| (-l * w).exp() * w.powf(a), lo, hi, 0.0, 0.0, &[], &cfg)
            .map(|r| r.value)
            .unwrap_or_else(|_| inner(lo, hi))
    };
    // G(x) = ∫_0^x e^{-λw} w^α dw = λ^{-(α+1)} γ(α+1, λx)
    let g_scale = gamma_fn(a + 1.0)? * l.powf(-(a + 1.0));
    let from_origin = |x: f64| -> f64 { g_scale * gamma_lr(a + 1.0, l * x) };
    let kappa = |v: f64| -> f64 {
        let g = (-l * v).exp() * v.powf(a);
        if second_kind {
            g + l * from_origin(v)
        } else {
            g
        }
    };
    let diff = |v: f64| -> f64 {
        let d = (-l * v).exp() * v.powf(a) * (a * (h / v).ln_1p() - l * h).exp_m1();
        if !second_kind {
            return d;
        }
        let window = if v >= h {
            inner_rel(v, v + h)
        } else {
            from_origin(v + h) - from_origin(v)
        };
        d + l * window
    };
    let j2 = tagged(from_zero(|v: f64| kappa(v).powi(2), h, neg_part(2.0 * a), 0.0, cfg), "J2")?;
    // J1 vanishes identically for U5 at α = 0; bound its absolute error by a fraction of J2
    let j1_cfg = QuadConfig {
        abs_tol: 1e-3 * cfg.rel_tol * j2.value,
        ..*cfg
    };
    let cutoff = exponential_cutoff(l, tol) + h;
    let mut j1 = tagged(from_zero(|v: f64| diff(v).powi(2), cutoff, neg_part(2.0 * a), h, &j1_cfg), "J1")?;
    j1.error_estimate += diff(cutoff).powi(2) / l;
    Ok((j1, j2))
}

/// `E(U(t) - U(s))^2` with its decomposition.
pub fn incremental_variance(q: &IncrementQuery, tol: f64) -> Result<MomentBreakdown> {
    use ProcessKind::*;
    let (spec, s, t) = (q.spec, q.s, q.t);
    if t == s {
        return Ok(MomentBreakdown::closed(0.0));
    }
    let cfg = QuadConfig::relative(tol);
    let h = t - s;
    let (a, g) = (spec.alpha(), spec.gamma());
    let quad = |j1: QuadResult, j2: QuadResult, j4: QuadResult, method| MomentBreakdown {
        j1: j1.value,
        j2: j2.value,
        j4: j4.value,
        total: j1.value + j2.value + j4.value,
        method,
        error_estimate: j1.error_estimate + j2.error_estimate + j4.error_estimate,
    };
    let none = QuadResult::zero();
    match spec.kind() {
        Wiener => Ok(MomentBreakdown::closed(h)),
        U3 if s == 0.0 => Ok(MomentBreakdown::closed(gamma_fn(a)? * t)),
        U3 => {
            let (j1, j2) = u3_parts(&spec, s, t, &cfg)?;
            Ok(quad(j1, j2, none, MomentMethod::Quadrature))
        }
        U1 => {
            let (j1, j2) = u1_parts(&spec, s, t, &cfg)?;
            Ok(quad(j1, j2, none, MomentMethod::Quadrature))
        }
        U2 => {
            let j1 = tagged(power_weighted_j1(s, h, a, g, &cfg), "J1")?;
            let j2 = tagged(power_weighted_j2(s, h, a, g, &cfg), "J2")?;
            Ok(quad(j1, j2, none, MomentMethod::Quadrature))
        }
        V => {
            let j4 = tagged(v_component(s, t, a, g, &cfg), "J4")?;
            Ok(quad(none, none, j4, MomentMethod::Quadrature))
        }
        U6 => {
            let j4 = tagged(v_component(s, t, a, g, &cfg), "J4")?;
            let j1 = tagged(power_weighted_j1(s, h, a, g, &cfg), "J1")?;
            let j2 = tagged(power_weighted_j2(s, h, a, g, &cfg), "J2")?;
            Ok(quad(j1, j2, j4, MomentMethod::SumOfComponents))
        }
        U4 | U5 => {
            let (j1, j2) = tempered_parts(&spec, h, tol, &cfg)?;
            Ok(quad(j1, j2, none, MomentMethod::Quadrature))
        }
    }
}

/// `E U(t)^2` at the default tolerance.
pub fn variance(spec: &ProcessSpec, t: f64) -> Result<f64> {
    variance_with_tol(spec, t, DEFAULT_TOL)
}

pub fn variance_with_tol(spec: &ProcessSpec, t: f64, tol: f64) -> Result<f64> {
    use ProcessKind::*;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("variance requires t > 0, got {t}")));
    }
    let (a, g) = (spec.alpha(), spec.gamma());
    match spec.kind() {
        Wiener => Ok(t),
        U2 => Ok(beta_fn(1.0 - g, 1.0 + 2.0 * a)? * t.powf(2.0 * a + 1.0 - g)),
        U3 => Ok(gamma_fn(a)? * t),
        U1 => {
            let l = spec.lambda();
            let r = from_zero(
                |x: f64| (-2.0 * l * (t - x)).exp() * x.powf(2.0 * a),
                t,
                neg_part(2.0 * a),
                0.0,
                &QuadConfig::relative(tol),
            )?;
            Ok(r.value)
        }
        U4 | U5 | U6 | V => Ok(incremental_variance(&IncrementQuery::new(*spec, 0.0, t)?, tol)?.total),
    }
}

/// `E U(s) U(t)` by polarization of the variances and the incremental variance.
pub fn covariance(spec: &ProcessSpec, s: f64, t: f64) -> Result<f64> {
    covariance_with_tol(spec, s, t, DEFAULT_TOL)
}

pub fn covariance_with_tol(spec: &ProcessSpec, s: f64, t: f64, tol: f64) -> Result<f64> {
    if !(s > 0.0 && t > 0.0) {
        return Err(Error::Domain(format!("covariance requires s, t > 0, got ({s}, {t})")));
    }
    let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
    if lo == hi {
        return variance_with_tol(spec, lo, tol);
    }
    let vlo = variance_with_tol(spec, lo, tol)?;
    let vhi = variance_with_tol(spec, hi, tol)?;
    let inc = incremental_variance(&IncrementQuery::new(*spec, lo, hi)?, tol)?.total;
    Ok(0.5 * (vlo + vhi - inc))
}

fn check_power_params(alpha: f64, gamma: f64) -> Result<()> {
    if !(alpha > -0.5) || !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha > -1/2 required, got {alpha}")));
    }
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::Domain(format!("gamma in [0, 1) required, got {gamma}")));
    }
    Ok(())
}

/// `g1(r) = ∫_0^r (r-z)^{-γ} [(1+z)^α - z^α]^2 dz`.
pub fn g1(r: f64, alpha: f64, gamma: f64) -> Result<f64> {
    check_power_params(alpha, gamma)?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("g1 requires r > 0, got {r}")));
    }
    Ok(power_weighted_j1(r, 1.0, alpha, gamma, &QuadConfig::relative(DEFAULT_TOL))?.value)
}

/// `g2(r) = ∫_0^1 (z+r)^{-γ} (1-z)^{2α} dz`.
pub fn g2(r: f64, alpha: f64, gamma: f64) -> Result<f64> {
    check_power_params(alpha, gamma)?;
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("g2 requires r >= 0, got {r}")));
    }
    Ok(power_weighted_j2(r, 1.0, alpha, gamma, &QuadConfig::relative(DEFAULT_TOL))?.value)
}

fn check_mandelbrot_alpha(alpha: f64) -> Result<()> {
    if !(alpha.abs() < 0.5) {
        return Err(Error::Domain(format!("|alpha| < 1/2 required, got {alpha}")));
    }
    Ok(())
}

/// `C(α) = Γ(α+1)^2 / (Γ(2α+2) cos(πα))`.
pub fn mandelbrot_constant(alpha: f64) -> Result<f64> {
    check_mandelbrot_alpha(alpha)?;
    let ga = gamma_fn(alpha + 1.0)?;
    Ok(ga * ga / (gamma_fn(2.0 * alpha + 2.0)? * (std::f64::consts::PI * alpha).cos()))
}

/// `C(α) = ∫_0^∞ [(1+z)^α - z^α]^2 dz + 1/(2α+1)`, by quadrature.
pub fn mandelbrot_constant_numeric(alpha: f64, tol: f64) -> Result<f64> {
    check_mandelbrot_alpha(alpha)?;
    let tail = 1.0 / (2.0 * alpha + 1.0);
    if alpha == 0.0 {
        return Ok(tail);
    }
    let r = integrate_semi_infinite_with(
        |z: f64| pow_diff(z, 1.0, alpha).powi(2),
        0.0,
        TailOptions::new(2.0 * alpha - 2.0, neg_part(2.0 * alpha), 1.0).extrapolated(),
        &[],
        &QuadConfig::hybrid(tol),
    )?;
    Ok(r.value + tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::make_process;
    use ProcessKind::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn wiener_increment() {
        let q = IncrementQuery::new(ProcessSpec::wiener(), 1.0, 3.0).unwrap();
        let b = incremental_variance(&q, 1e-10).unwrap();
        assert_eq!(b.total, 2.0);
        assert_eq!(b.method, MomentMethod::ClosedForm);
    }

    #[test]
    fn degenerate_increment_is_zero() {
        let spec = make_process(U2, 0.25, 0.4, 0.0).unwrap();
        let b = incremental_variance(&IncrementQuery::new(spec, 1.0, 1.0).unwrap(), 1e-10).unwrap();
        assert_eq!(b.total, 0.0);
        assert_eq!(b.method, MomentMethod::ClosedForm);
    }

    #[test]
    fn invalid_query() {
        let spec = ProcessSpec::wiener();
        assert!(IncrementQuery::new(spec, 2.0, 1.0).is_err());
        assert!(IncrementQuery::new(spec, -1.0, 1.0).is_err());
    }

    #[test]
    fn variance_examples() {
        let u2 = make_process(U2, 0.25, 0.4, 0.0).unwrap();
        let expected = beta_fn(0.6, 1.5).unwrap() * 2f64.powf(1.1);
        assert!(rel(variance(&u2, 2.0).unwrap(), expected) < 1e-14);
        let u3 = make_process(U3, 1.0, 0.0, 0.0).unwrap();
        assert!(rel(variance(&u3, 5.0).unwrap(), 5.0) < 1e-14);
        let u1 = make_process(U1, 0.0, 0.0, 1.0).unwrap();
        assert!(rel(variance(&u1, 1.0).unwrap(), (1.0 - (-2.0f64).exp()) / 2.0) < 1e-12);
        assert!(variance(&u1, 0.0).is_err());
    }

    #[test]
    fn u3_quadrature_matches_wiener_at_alpha_one() {
        let u3 = make_process(U3, 1.0, 0.0, 0.0).unwrap();
        let b = incremental_variance(&IncrementQuery::new(u3, 1.0, 1.25).unwrap(), 1e-10).unwrap();
        assert!(rel(b.total, 0.25) < 1e-12);
        assert_eq!(b.j1, 0.0);
    }

    #[test]
    fn u3_increments_match_variance_polarization_check() {
        // the increment from s to t never exceeds the sum of the variances
        let u3 = make_process(U3, 0.6, 0.0, 0.0).unwrap();
        let b = incremental_variance(&IncrementQuery::new(u3, 1.0, 1.1).unwrap(), 1e-10).unwrap();
        let (v1, v2) = (variance(&u3, 1.0).unwrap(), variance(&u3, 1.1).unwrap());
        assert!(b.total > 0.0 && b.total < v1 + v2);
        assert!(b.j1 > 0.0 && b.j2 > 0.0);
    }

    #[test]
    fn u2_increment_from_zero_is_variance() {
        for &(a, g) in &[(0.25, 0.4), (-0.3, 0.2), (1.2, 0.7)] {
            let spec = make_process(U2, a, g, 0.0).unwrap();
            let b = incremental_variance(&IncrementQuery::new(spec, 0.0, 1.7).unwrap(), 1e-10).unwrap();
            assert!(rel(b.total, variance(&spec, 1.7).unwrap()) < 1e-9, "{a} {g}");
        }
    }

    #[test]
    fn u6_is_sum_of_components() {
        let (a, g) = (0.25, 0.4);
        let u6 = make_process(U6, a, g, 0.0).unwrap();
        let v = make_process(V, a, g, 0.0).unwrap();
        let u2 = make_process(U2, a, g, 0.0).unwrap();
        let q = |spec| IncrementQuery::new(spec, 1.0, 1.5).unwrap();
        let b6 = incremental_variance(&q(u6), 1e-10).unwrap();
        let bv = incremental_variance(&q(v), 1e-10).unwrap();
        let b2 = incremental_variance(&q(u2), 1e-10).unwrap();
        assert_eq!(b6.method, MomentMethod::SumOfComponents);
        assert_eq!(b6.total, bv.total + b2.total);
        assert_eq!(b6.j4, bv.j4);
    }

    #[test]
    fn u6_with_divergent_v_component() {
        let u6 = make_process(U6, 0.9, 0.4, 0.0).unwrap();
        let r = incremental_variance(&IncrementQuery::new(u6, 1.0, 1.5).unwrap(), 1e-10);
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn u5_alpha_zero_is_brownian() {
        let spec = make_process(U5, 0.0, 0.0, 1.5).unwrap();
        let b = incremental_variance(&IncrementQuery::new(spec, 0.3, 1.0).unwrap(), 1e-10).unwrap();
        assert!(rel(b.total, 0.7) < 1e-9, "{}", b.total);
    }

    #[test]
    fn u4_alpha_zero_closed_form() {
        // κ(v) = e^{-λv}: ∫_0^∞ (e^{-λh}-1)^2 e^{-2λv} dv + ∫_0^h e^{-2λv} dv = (1 - e^{-λh}) / λ
        let (l, h) = (0.8, 0.6);
        let spec = make_process(U4, 0.0, 0.0, l).unwrap();
        let b = incremental_variance(&IncrementQuery::new(spec, 2.0, 2.0 + h).unwrap(), 1e-10).unwrap();
        assert!(rel(b.total, (1.0 - (-l * h).exp()) / l) < 1e-9, "{}", b.total);
    }

    #[test]
    fn covariance_examples() {
        let w = ProcessSpec::wiener();
        assert!((covariance(&w, 1.0, 3.0).unwrap() - 1.0).abs() < 1e-14);
        let u2 = make_process(U2, 0.25, 0.0, 0.0).unwrap();
        assert_eq!(covariance(&u2, 2.0, 2.0).unwrap(), variance(&u2, 2.0).unwrap());
        assert!(covariance(&u2, 0.0, 2.0).is_err());
    }

    #[test]
    fn g_functions_trivial_values() {
        assert_eq!(g1(3.0, 0.0, 0.4).unwrap(), 0.0);
        assert!((g2(0.0, 0.0, 0.4).unwrap() - 1.0 / 0.6).abs() < 1e-10);
        for &(a, g) in &[(0.25, 0.4), (-0.3, 0.5), (0.9, 0.1)] {
            let b = beta_fn(1.0 - g, 2.0 * a + 1.0).unwrap();
            assert!(rel(g2(0.0, a, g).unwrap(), b) < 1e-9);
        }
        assert!(g1(0.0, 0.25, 0.4).is_err());
        assert!(g2(-1.0, 0.25, 0.4).is_err());
        assert!(g1(1.0, 0.25, 1.0).is_err());
    }

    #[test]
    fn mandelbrot_constant_values() {
        assert!((mandelbrot_constant(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(mandelbrot_constant_numeric(0.0, 1e-10).unwrap(), 1.0);
        assert!(mandelbrot_constant(0.5).is_err());
        assert!(mandelbrot_constant_numeric(-0.5, 1e-10).is_err());
        for &a in &[0.25, -0.25, -0.4, 0.45] {
            let c = mandelbrot_constant(a).unwrap();
            let n = mandelbrot_constant_numeric(a, 1e-10).unwrap();
            assert!((c - n).abs() < 1e-8, "alpha={a}: {c} vs {n}");
        }
    }
}
