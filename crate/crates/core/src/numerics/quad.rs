//! Adaptive Gauss-Legendre quadrature with endpoint singularity removal.
//!
//! Every panel is integrated with a 20-point Gauss-Legendre rule, once over
//! the whole panel and once over each half. The difference between the two
//! estimates is the panel error; the panel with the largest error is bisected
//! until the global error meets the tolerance or the evaluation budget runs out.
//!
//! An endpoint behaving like `(distance)^p` with `-1 < p < 0` is removed by
//! the substitution `distance = w^k`, `k = 1/(1+p)`, which turns the integrand
//! into a bounded function of `w`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default hybrid tolerance.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Integrand evaluations allowed per call.
pub const MAX_EVALUATIONS: usize = 1_000_000;

const GL_ORDER: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Absolute error estimate, always non-negative.
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl QuadResult {
    pub fn zero() -> Self {
        QuadResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        }
    }

    fn add(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            error_estimate: self.error_estimate + other.error_estimate,
            evaluations: self.evaluations + other.evaluations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityLocation {
    Lower,
    Upper,
    None,
}

/// Power-law behaviour `(distance to endpoint)^exponent` at one end of the range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointSingularity {
    location: SingularityLocation,
    exponent: f64,
}

impl EndpointSingularity {
    pub fn none() -> Self {
        EndpointSingularity {
            location: SingularityLocation::None,
            exponent: 0.0,
        }
    }

    pub fn lower(exponent: f64) -> Result<Self> {
        Self::new(SingularityLocation::Lower, exponent)
    }

    pub fn upper(exponent: f64) -> Result<Self> {
        Self::new(SingularityLocation::Upper, exponent)
    }

    pub fn new(location: SingularityLocation, exponent: f64) -> Result<Self> {
        if !(exponent > -1.0 && exponent <= 0.0) {
            return Err(Error::Domain(format!(
                "endpoint exponent must lie in (-1, 0], got {exponent}"
            )));
        }
        Ok(EndpointSingularity { location, exponent })
    }

    pub fn location(&self) -> SingularityLocation {
        self.location
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    fn split(&self) -> (f64, f64) {
        match self.location {
            SingularityLocation::Lower => (self.exponent, 0.0),
            SingularityLocation::Upper => (0.0, self.exponent),
            SingularityLocation::None => (0.0, 0.0),
        }
    }
}

/// Stopping rule: `error <= max(rel_tol * |value|, abs_tol)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_evals: usize,
}

impl QuadConfig {
    /// Absolute-relative hybrid with the same tolerance on both sides.
    pub fn hybrid(tol: f64) -> Self {
        QuadConfig {
            rel_tol: tol,
            abs_tol: tol,
            max_evals: MAX_EVALUATIONS,
        }
    }

    /// Purely relative; intended for integrands of one sign whose value may be tiny.
    pub fn relative(tol: f64) -> Self {
        QuadConfig {
            rel_tol: tol,
            abs_tol: 0.0,
            max_evals: MAX_EVALUATIONS,
        }
    }

    fn target(&self, value: f64) -> f64 {
        (self.rel_tol * value.abs()).max(self.abs_tol)
    }
}

fn gauss_legendre() -> &'static ([f64; GL_ORDER], [f64; GL_ORDER]) {
    static RULE: OnceLock<([f64; GL_ORDER], [f64; GL_ORDER])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut nodes = [0.0; GL_ORDER];
        let mut weights = [0.0; GL_ORDER];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        (nodes, weights)
    })
}

struct Panel {
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    err: f64,
}

impl Panel {
    fn value(&self) -> f64 {
        self.left + self.right
    }
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err.total_cmp(&other.err) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

struct Adaptive<'f, F: Fn(f64) -> f64> {
    f: &'f F,
    evals: usize,
}

impl<F: Fn(f64) -> f64> Adaptive<'_, F> {
    fn rule(&mut self, a: f64, b: f64) -> Result<f64> {
        let (nodes, weights) = gauss_legendre();
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(weights) {
            let t = mid + half * x;
            let y = (self.f)(t);
            if !y.is_finite() {
                return Err(Error::NonFinite { context: format!("value {y}"), at: t });
            }
            acc += w * y;
        }
        self.evals += GL_ORDER;
        Ok(acc * half)
    }

    fn panel(&mut self, a: f64, b: f64, whole: f64) -> Result<Panel> {
        let m = 0.5 * (a + b);
        let left = self.rule(a, m)?;
        let right = self.rule(m, b)?;
        Ok(Panel {
            a,
            b,
            left,
            right,
            err: (whole - left - right).abs(),
        })
    }
}

/// Global adaptive bisection over the given initial panel edges.
fn adaptive<F: Fn(f64) -> f64>(f: &F, edges: &[f64], cfg: &QuadConfig) -> Result<QuadResult> {
    let mut ctx = Adaptive { f, evals: 0 };
    let mut heap = BinaryHeap::new();
    let mut settled: Vec<Panel> = Vec::new();
    for w in edges.windows(2) {
        let whole = ctx.rule(w[0], w[1])?;
        heap.push(ctx.panel(w[0], w[1], whole)?);
    }
    let totals = |heap: &BinaryHeap<Panel>, settled: &[Panel]| {
        heap.iter().chain(settled.iter()).fold((0.0, 0.0), |(v, e), p| (v + p.value(), e + p.err))
    };
    let (mut value, mut err) = totals(&heap, &settled);
    loop {
        if err <= cfg.target(value) {
            // refresh the running sums before accepting
            let (v, e) = totals(&heap, &settled);
            value = v;
            err = e;
            if err <= cfg.target(value) {
                return Ok(QuadResult {
                    value,
                    error_estimate: err,
                    evaluations: ctx.evals,
                });
            }
        }
        let Some(worst) = heap.pop() else {
            break;
        };
        let m = 0.5 * (worst.a + worst.b);
        if !(m > worst.a && m < worst.b) || ctx.evals + 4 * GL_ORDER > cfg.max_evals {
            if ctx.evals + 4 * GL_ORDER > cfg.max_evals {
                heap.push(worst);
                break;
            }
            settled.push(worst);
            continue;
        }
        let l = ctx.panel(worst.a, m, worst.left)?;
        let r = ctx.panel(m, worst.b, worst.right)?;
        value += l.value() + r.value() - worst.value();
        err += l.err + r.err - worst.err;
        heap.push(l);
        heap.push(r);
    }
    let (value, err) = totals(&heap, &settled);
    if err <= cfg.target(value) {
        return Ok(QuadResult {
            value,
            error_estimate: err,
            evaluations: ctx.evals,
        });
    }
    Err(Error::Accuracy {
        context: "adaptive quadrature".into(),
        value,
        error_estimate: err,
        evaluations: ctx.evals,
    })
}

/// Smallest distance from a singular endpoint at which the integrand is evaluated.
///
/// With `d = w^k` and `k (1 + p) = 1` the Jacobian `k w^{k-1}` equals `k d^{-p}`.
/// The transformed integrand is evaluated as `k d'^{-p} f(a + d')` where `d'` is
/// the distance actually represented by the floating-point node `a + d`; it tends
/// to a finite limit, so clamping `d'` away from zero is harmless.
const DISTANCE_FLOOR: f64 = 1e-250;

fn substitution_power(exponent: f64) -> f64 {
    if exponent < 0.0 {
        1.0 / (1.0 + exponent)
    } else {
        1.0
    }
}

/// One-sided singular integral over `[a, b]` (at most one of the exponents is non-zero).
fn integrate_one_sided<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    lower_exp: f64,
    upper_exp: f64,
    breakpoints: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    let inner: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    let floor = DISTANCE_FLOOR.min(1e-3 * (b - a));
    if lower_exp < 0.0 {
        let k = substitution_power(lower_exp);
        let g = move |w: f64| {
            let mut x = a + w.powf(k).max(floor);
            if x <= a {
                x = a.next_up();
            }
            k * (x - a).powf(-lower_exp) * f(x)
        };
        let mut edges = vec![0.0];
        edges.extend(inner.iter().map(|&x| (x - a).powf(1.0 / k)));
        edges.push((b - a).powf(1.0 / k));
        dedup_edges(&mut edges);
        adaptive(&g, &edges, cfg)
    } else if upper_exp < 0.0 {
        let k = substitution_power(upper_exp);
        let g = move |w: f64| {
            let mut x = b - w.powf(k).max(floor);
            if x >= b {
                x = b.next_down();
            }
            k * (b - x).powf(-upper_exp) * f(x)
        };
        let mut edges = vec![0.0];
        edges.extend(inner.iter().rev().map(|&x| (b - x).powf(1.0 / k)));
        edges.push((b - a).powf(1.0 / k));
        dedup_edges(&mut edges);
        adaptive(&g, &edges, cfg)
    } else {
        let mut edges = vec![a];
        edges.extend(inner);
        edges.push(b);
        dedup_edges(&mut edges);
        adaptive(f, &edges, cfg)
    }
}

fn dedup_edges(edges: &mut Vec<f64>) {
    edges.sort_by(|x, y| x.total_cmp(y));
    edges.dedup_by(|x, y| *x <= *y);
}

/// Integral over `[a, b]` with optional power singularities at both ends and
/// interior breakpoints where the integrand changes scale.
///
/// When both ends are singular the range is split at its midpoint and each half
/// receives its own substitution.
pub fn integrate_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    lower_exp: f64,
    upper_exp: f64,
    breakpoints: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("integration range must satisfy a < b, got [{a}, {b}]")));
    }
    for e in [lower_exp, upper_exp] {
        if !(e > -1.0) {
            return Err(Error::Domain(format!("endpoint exponent {e} is not integrable")));
        }
    }
    let lower_exp = lower_exp.min(0.0);
    let upper_exp = upper_exp.min(0.0);
    if lower_exp < 0.0 && upper_exp < 0.0 {
        let m = 0.5 * (a + b);
        let half_cfg = QuadConfig {
            abs_tol: 0.5 * cfg.abs_tol,
            max_evals: cfg.max_evals / 2,
            ..*cfg
        };
        let lo = integrate_one_sided(&f, a, m, lower_exp, 0.0, breakpoints, &half_cfg)?;
        let hi = integrate_one_sided(&f, m, b, 0.0, upper_exp, breakpoints, &half_cfg)?;
        Ok(lo.add(hi))
    } else {
        integrate_one_sided(&f, a, b, lower_exp, upper_exp, breakpoints, cfg)
    }
}

/// Integral of `f` over the finite range `[a, b]` to the hybrid tolerance `tol`.
pub fn integrate_finite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    sing: EndpointSingularity,
    tol: f64,
) -> Result<QuadResult> {
    let (lo, hi) = sing.split();
    integrate_with(f, a, b, lo, hi, &[], &QuadConfig::hybrid(tol))
}

/// Options for [`integrate_semi_infinite_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailOptions {
    /// Power of `u` bounding `|f(u)|` for large `u`; must be below -1.
    pub tail_exponent: f64,
    /// Endpoint exponent at `a`.
    pub lower_exp: f64,
    /// Width of the first panel `[a, a + first_width]`.
    pub first_width: f64,
    /// `f(u) ~ C u^tail_exponent` holds as an asymptotic equivalence (not just a
    /// bound), so the remaining tail may be estimated and added.
    pub extrapolate: bool,
}

impl TailOptions {
    pub fn new(tail_exponent: f64, lower_exp: f64, first_width: f64) -> Self {
        TailOptions { tail_exponent, lower_exp, first_width, extrapolate: false }
    }

    pub fn extrapolated(self) -> Self {
        TailOptions { extrapolate: true, ..self }
    }
}

/// Geometric growth of successive tail panels.
const TAIL_GROWTH: f64 = 4.0;

/// Integral over `[a, ∞)`.
///
/// Integrates `[a, a + first_width]` and then geometrically growing panels.
/// With `C` estimated from `f(U) U^{-p}`, the tail beyond a panel end `U` is
/// `T(U) = C U^{p+1}/|p+1|`. Without extrapolation the loop stops once `|T|`
/// falls below half the tolerance at two consecutive panel ends and `|T|` is
/// added to the error. With extrapolation `T` is added to the sum and the loop
/// stops once the corrected sums agree to half the tolerance twice in a row;
/// their last difference is added to the error.
pub fn integrate_semi_infinite_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    opts: TailOptions,
    breakpoints: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    let p = opts.tail_exponent;
    if !(p < -1.0) {
        return Err(Error::Domain(format!(
            "tail exponent must be below -1 for a convergent integral, got {p}"
        )));
    }
    if !a.is_finite() || !(opts.first_width > 0.0) {
        return Err(Error::Domain("invalid semi-infinite range".into()));
    }
    let tail_estimate = |u: f64| f(u) * u.abs().max(u - a) / (p + 1.0).abs();
    let mut hi = a + opts.first_width;
    let mut acc = integrate_with(&f, a, hi, opts.lower_exp, 0.0, breakpoints, cfg)?;
    let mut prev_ok = false;
    let mut prev_corrected: Option<f64> = None;
    loop {
        let tail = tail_estimate(hi);
        acc.evaluations += 1;
        if !tail.is_finite() {
            return Err(Error::NonFinite { context: "tail estimate".into(), at: hi });
        }
        let (ok, slack) = if opts.extrapolate {
            let corrected = acc.value + tail;
            let diff = prev_corrected.map_or(f64::INFINITY, |c| (corrected - c).abs());
            prev_corrected = Some(corrected);
            (diff <= 0.5 * cfg.target(corrected), diff)
        } else {
            (tail.abs() <= 0.5 * cfg.target(acc.value), tail.abs())
        };
        if ok && prev_ok {
            if opts.extrapolate {
                acc.value += tail;
            }
            acc.error_estimate += slack;
            return Ok(acc);
        }
        prev_ok = ok;
        if acc.evaluations >= cfg.max_evals || hi > 1e300 {
            return Err(Error::Accuracy {
                context: "semi-infinite tail did not decay".into(),
                value: acc.value,
                error_estimate: acc.error_estimate + tail.abs(),
                evaluations: acc.evaluations,
            });
        }
        let next = a + (hi - a) * TAIL_GROWTH;
        let piece_cfg = QuadConfig {
            max_evals: cfg.max_evals.saturating_sub(acc.evaluations).max(4 * GL_ORDER),
            ..*cfg
        };
        let piece = integrate_with(&f, hi, next, 0.0, 0.0, breakpoints, &piece_cfg)?;
        acc = acc.add(piece);
        hi = next;
    }
}

/// Integral of `f` over `[a, ∞)` where `|f(u)| <= C u^tail_exponent` for large `u`.
pub fn integrate_semi_infinite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    tail_exponent: f64,
    tol: f64,
) -> Result<QuadResult> {
    integrate_semi_infinite_with(
        f,
        a,
        TailOptions::new(tail_exponent, 0.0, 1.0),
        &[],
        &QuadConfig::hybrid(tol),
    )
}

/// Breakpoints `a + w, a + 2w, a + 4w, ...` below `b`, resolving a feature of width `w` at `a`.
pub fn geometric_from_lower(a: f64, b: f64, width: f64) -> Vec<f64> {
    let mut out = Vec::new();
    if !(width > 0.0) {
        return out;
    }
    let mut x = width;
    while a + x < b && out.len() < 200 {
        out.push(a + x);
        x *= 2.0;
    }
    out
}

/// Breakpoints `b - w, b - 2w, ...` above `a`.
pub fn geometric_from_upper(a: f64, b: f64, width: f64) -> Vec<f64> {
    let mut out = Vec::new();
    if !(width > 0.0) {
        return out;
    }
    let mut x = width;
    while b - x > a && out.len() < 200 {
        out.push(b - x);
        x *= 2.0;
    }
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (nodes, weights) = gauss_legendre();
        let sum: f64 = weights.iter().sum();
        assert!((sum - 2.0).abs() < 1e-14);
        // x^38 integrates exactly with 20 nodes
        let q: f64 = nodes.iter().zip(weights).map(|(x, w)| w * x.powi(38)).sum();
        assert!((q - 2.0 / 39.0).abs() < 1e-14);
    }

    #[test]
    fn singular_upper_endpoint() {
        let r = integrate_finite(|z| (1.0 - z).powf(-0.5), 0.0, 1.0, EndpointSingularity::upper(-0.5).unwrap(), 1e-10).unwrap();
        assert!((r.value - 2.0).abs() < 1e-10, "{r:?}");
        assert!(r.error_estimate >= 0.0 && r.evaluations >= 1);
    }

    #[test]
    fn singular_lower_endpoint() {
        let g = 0.4;
        let r = integrate_finite(|z: f64| z.powf(-g), 0.0, 1.0, EndpointSingularity::lower(-g).unwrap(), 1e-10).unwrap();
        assert!((r.value - 1.0 / 0.6).abs() < 1e-10);
    }

    #[test]
    fn both_ends_singular() {
        // B(0.3, 0.6)
        let exact = crate::numerics::beta_fn(0.3, 0.6).unwrap();
        let r = integrate_with(
            |z: f64| z.powf(-0.7) * (1.0 - z).powf(-0.4),
            0.0,
            1.0,
            -0.7,
            -0.4,
            &[],
            &QuadConfig::relative(1e-12),
        )
        .unwrap();
        assert!(((r.value - exact) / exact).abs() < 1e-11, "{} vs {exact}", r.value);
    }

    #[test]
    fn smooth_integral() {
        let r = integrate_finite(f64::sin, 0.0, std::f64::consts::PI, EndpointSingularity::none(), 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn semi_infinite_examples() {
        let r = integrate_semi_infinite(|u: f64| u.powi(-2), 1.0, -2.0, 1e-10).unwrap();
        assert!((r.value - 1.0).abs() <= 1e-10, "{r:?}");
        let r = integrate_semi_infinite(|u: f64| (-u).exp(), 0.0, -3.0, 1e-10).unwrap();
        assert!((r.value - 1.0).abs() <= 1e-10, "{r:?}");
    }

    #[test]
    fn divergent_tail_rejected() {
        assert!(matches!(integrate_semi_infinite(|u: f64| 1.0 / u, 1.0, -1.0, 1e-10), Err(Error::Domain(_))));
    }

    #[test]
    fn endpoint_exponent_validated() {
        assert!(EndpointSingularity::lower(-1.0).is_err());
        assert!(EndpointSingularity::upper(0.2).is_err());
        assert!(EndpointSingularity::lower(0.0).is_ok());
    }

    #[test]
    fn budget_exhaustion_reports_best_estimate() {
        let cfg = QuadConfig {
            rel_tol: 1e-15,
            abs_tol: 0.0,
            max_evals: 400,
        };
        // non-smooth integrand that needs many bisections
        match integrate_with(|x: f64| (x - 0.3).abs().sqrt(), 0.0, 1.0, 0.0, 0.0, &[], &cfg) {
            Err(Error::Accuracy { value, evaluations, .. }) => {
                assert!((value - (2.0 / 3.0) * (0.3f64.powf(1.5) + 0.7f64.powf(1.5))).abs() < 1e-4);
                assert!(evaluations <= 400);
            }
            other => panic!("expected accuracy error, got {other:?}"),
        }
    }

    #[test]
    fn non_finite_integrands_are_reported() {
        assert!(matches!(
            integrate_finite(|x: f64| (x - 0.5).abs().powf(-1.5), 0.0, 1.0, EndpointSingularity::none(), 1e-8),
            Err(Error::NonFinite { .. }) | Err(Error::Accuracy { .. })
        ));
        assert!(matches!(
            integrate_finite(|x: f64| (x - 2.0).sqrt(), 0.0, 1.0, EndpointSingularity::none(), 1e-8),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn near_critical_endpoint_exponents() {
        // the substituted distance underflows for most of the range
        for p in [-0.99, -0.999] {
            let sing = EndpointSingularity::lower(p).unwrap();
            let r = integrate_finite(|x: f64| x.powf(p), 0.0, 1.0, sing, 1e-12).unwrap();
            assert!((r.value * (1.0 + p) - 1.0).abs() < 1e-12, "{p}: {}", r.value);
            let sing = EndpointSingularity::upper(p).unwrap();
            let r = integrate_finite(|x: f64| (1.0 - x).powf(p) * 2.0, 0.0, 1.0, sing, 1e-12).unwrap();
            assert!((r.value * (1.0 + p) - 2.0).abs() < 1e-11, "{p}: {}", r.value);
        }
    }

    #[test]
    fn extrapolated_slow_tail() {
        // ∫_1^∞ u^{-1.01} (1 + 1/u) du = 100 + 1/1.01
        let f = |u: f64| u.powf(-1.01) * (1.0 + 1.0 / u);
        let opts = TailOptions::new(-1.01, 0.0, 1.0);
        let cfg = QuadConfig::relative(1e-12);
        assert!(matches!(
            integrate_semi_infinite_with(f, 1.0, opts, &[], &cfg),
            Err(Error::Accuracy { .. })
        ));
        let r = integrate_semi_infinite_with(f, 1.0, opts.extrapolated(), &[], &cfg).unwrap();
        let exact = 100.0 + 1.0 / 1.01;
        assert!((r.value - exact).abs() <= 1e-10 * exact, "{}", r.value);
        assert!((r.value - exact).abs() <= 10.0 * r.error_estimate.max(1e-14 * exact));
    }

    #[test]
    fn breakpoints_helpers() {
        let b = geometric_from_lower(0.0, 1.0, 0.1);
        assert_eq!(b, vec![0.1, 0.2, 0.4, 0.8]);
        let b = geometric_from_upper(0.0, 1.0, 0.25);
        assert_eq!(b, vec![0.5, 0.75]);
    }
}
