//! Kernel catalogue and parameter domains.
//!
//! Zero-started processes `U(t) = ∫_0^t K(t,u) dW_u`:
//!
//! | kind   | kernel `K(t,u)`                       |
//! |--------|----------------------------------------|
//! | U1     | `e^{-λu} (t-u)^α`                      |
//! | U2     | `u^{-γ/2} (t-u)^α`                     |
//! | U3     | `(log(t/u))^{(α-1)/2}`                 |
//! | Wiener | `1`                                    |
//!
//! Processes started from `-∞`, with `g(x) = e^{-λx_+} (x)_+^α`:
//!
//! | kind | kernel `K(t,u)`                                           |
//! |------|-----------------------------------------------------------|
//! | U4   | `g(t-u) - g(-u)`                                          |
//! | U5   | `g(t-u) - g(-u) + λ ∫_0^t g(v-u) dv`                      |
//! | U6   | `|u|^{-γ/2} [(t-u)^α - (-u)_+^α]`                         |
//! | V    | `(-u)^{-γ/2} [(t-u)^α - (-u)^α]`, supported on `u < 0`    |
//!
//! U6 is the sum of the independent processes V and U2.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate_finite, EndpointSingularity};

/// Tolerance for the inner `v`-integral of the U5 kernel.
pub const U5_INNER_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProcessKind {
    U1,
    U2,
    U3,
    U4,
    U5,
    U6,
    V,
    Wiener,
}

impl ProcessKind {
    pub const ALL: [ProcessKind; 8] = [
        ProcessKind::U1,
        ProcessKind::U2,
        ProcessKind::U3,
        ProcessKind::U4,
        ProcessKind::U5,
        ProcessKind::U6,
        ProcessKind::V,
        ProcessKind::Wiener,
    ];

    /// Whether the stochastic integral starts at zero (as opposed to `-∞`).
    pub fn zero_started(self) -> bool {
        matches!(
            self,
            ProcessKind::U1 | ProcessKind::U2 | ProcessKind::U3 | ProcessKind::Wiener
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            ProcessKind::U1 => "u1",
            ProcessKind::U2 => "u2",
            ProcessKind::U3 => "u3",
            ProcessKind::U4 => "u4",
            ProcessKind::U5 => "u5",
            ProcessKind::U6 => "u6",
            ProcessKind::V => "v",
            ProcessKind::Wiener => "wiener",
        }
    }
}

impl fmt::Display for ProcessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProcessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        ProcessKind::ALL
            .into_iter()
            .find(|k| k.name() == lower)
            .ok_or_else(|| Error::Validation(format!("unknown process kind '{s}'")))
    }
}

#[derive(Serialize, Deserialize)]
struct RawSpec {
    kind: ProcessKind,
    alpha: f64,
    gamma: f64,
    lambda: f64,
}

/// A process kind with validated parameters. Parameters a kind does not use are 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpec", into = "RawSpec")]
pub struct ProcessSpec {
    kind: ProcessKind,
    alpha: f64,
    gamma: f64,
    lambda: f64,
}

impl TryFrom<RawSpec> for ProcessSpec {
    type Error = Error;

    fn try_from(raw: RawSpec) -> Result<Self> {
        make_process(raw.kind, raw.alpha, raw.gamma, raw.lambda)
    }
}

impl From<ProcessSpec> for RawSpec {
    fn from(s: ProcessSpec) -> Self {
        RawSpec {
            kind: s.kind,
            alpha: s.alpha,
            gamma: s.gamma,
            lambda: s.lambda,
        }
    }
}

impl ProcessSpec {
    pub fn kind(&self) -> ProcessKind {
        self.kind
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn wiener() -> Self {
        ProcessSpec {
            kind: ProcessKind::Wiener,
            alpha: 0.0,
            gamma: 0.0,
            lambda: 0.0,
        }
    }
}

impl fmt::Display for ProcessSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}(alpha={}, gamma={}, lambda={})",
            self.kind, self.alpha, self.gamma, self.lambda
        )
    }
}

fn require(cond: bool, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Validation(what.to_string()))
    }
}

/// Validates parameters for `kind` and builds the `ProcessSpec`.
pub fn make_process(kind: ProcessKind, alpha: f64, gamma: f64, lambda: f64) -> Result<ProcessSpec> {
    use ProcessKind::*;
    let uses_alpha = kind != Wiener;
    let uses_gamma = matches!(kind, U2 | U6 | V);
    let uses_lambda = matches!(kind, U1 | U4 | U5);
    for (used, name, val) in [
        (uses_alpha, "alpha", alpha),
        (uses_gamma, "gamma", gamma),
        (uses_lambda, "lambda", lambda),
    ] {
        require(!used || val.is_finite(), &format!("{name} must be finite"))?;
    }
    if uses_lambda {
        require(lambda > 0.0, "lambda > 0 required")?;
    }
    if uses_gamma {
        require((0.0..1.0).contains(&gamma), "gamma in [0, 1) required")?;
    }
    match kind {
        U1 | U2 | U4 | U5 | U6 => require(alpha > -0.5, "alpha > -1/2 required")?,
        U3 => require(alpha > 0.0, "alpha > 0 required")?,
        V => {
            require(alpha > -0.5, "alpha > -1/2 required")?;
            require(alpha < 0.5 + gamma / 2.0, "alpha < 1/2 + gamma/2 required")?;
            require(alpha != 0.0, "alpha != 0 required")?;
        }
        Wiener => {}
    }
    Ok(ProcessSpec {
        kind,
        alpha: if uses_alpha { alpha } else { 0.0 },
        gamma: if uses_gamma { gamma } else { 0.0 },
        lambda: if uses_lambda { lambda } else { 0.0 },
    })
}

/// `[t1, t2]` with `0 <= t1 < t2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    t1: f64,
    t2: f64,
}

impl Interval {
    pub fn new(t1: f64, t2: f64) -> Result<Self> {
        require(t1.is_finite() && t2.is_finite(), "interval endpoints must be finite")?;
        require(t1 >= 0.0 && t1 < t2, "interval requires 0 <= t1 < t2")?;
        Ok(Interval { t1, t2 })
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }
    pub fn t2(&self) -> f64 {
        self.t2
    }
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.t1 + self.t2)
    }
    pub fn len(&self) -> f64 {
        self.t2 - self.t1
    }
}

/// `(x)_+^p`, with a domain error at `x = 0` when `p < 0`.
pub(crate) fn truncated_pow(x: f64, p: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(x.powf(p))
    } else if x == 0.0 && p < 0.0 {
        Err(Error::Domain(format!("(0)_+^{p} is undefined")))
    } else {
        Ok(0.0)
    }
}

/// `e^{-λ x_+} (x)_+^α`.
pub(crate) fn tempered_pow(x: f64, alpha: f64, lambda: f64) -> Result<f64> {
    Ok(truncated_pow(x, alpha)? * (-lambda * x.max(0.0)).exp())
}

/// `∫_lo^hi e^{-λw} w^α dw` for `0 <= lo < hi`.
pub(crate) fn tempered_pow_integral(lo: f64, hi: f64, alpha: f64, lambda: f64, tol: f64) -> Result<f64> {
    let f = |w: f64| (-lambda * w).exp() * w.powf(alpha);
    let sing = if lo == 0.0 && alpha < 0.0 {
        EndpointSingularity::lower(alpha)?
    } else {
        EndpointSingularity::none()
    };
    Ok(integrate_finite(f, lo, hi, sing, tol)?.value)
}

/// Evaluates the kernel `K(t, u)` of `spec`.
pub fn kernel_eval(spec: &ProcessSpec, t: f64, u: f64) -> Result<f64> {
    use ProcessKind::*;
    if !(t > 0.0) || !u.is_finite() || !t.is_finite() {
        return Err(Error::Domain(format!("kernel requires t > 0 and finite u, got t={t}, u={u}")));
    }
    let (a, g, l) = (spec.alpha, spec.gamma, spec.lambda);
    let support_err = || Error::Domain(format!("u = {u} is outside the support of the {} kernel at t = {t}", spec.kind));
    match spec.kind {
        U1 | U2 | U3 | Wiener => {
            if !(u > 0.0 && u < t) {
                return Err(support_err());
            }
        }
        U4 | U5 | U6 => {
            if !(u < t) {
                return Err(support_err());
            }
        }
        V => {
            if !(u < 0.0) {
                return Err(support_err());
            }
        }
    }
    match spec.kind {
        U1 => Ok((-l * u).exp() * (t - u).powf(a)),
        U2 => Ok(u.powf(-g / 2.0) * (t - u).powf(a)),
        U3 => Ok((t / u).ln().powf((a - 1.0) / 2.0)),
        Wiener => Ok(1.0),
        U4 => Ok(tempered_pow(t - u, a, l)? - tempered_pow(-u, a, l)?),
        U5 => {
            let base = tempered_pow(t - u, a, l)? - tempered_pow(-u, a, l)?;
            // ∫_0^t g(v-u) dv = ∫_{max(-u,0)}^{t-u} g(w) dw
            let inner = tempered_pow_integral((-u).max(0.0), t - u, a, l, U5_INNER_TOL)?;
            Ok(base + l * inner)
        }
        U6 | V => {
            let weight = truncated_pow(u.abs(), -g / 2.0);
            let weight = if u == 0.0 && g == 0.0 { Ok(1.0) } else { weight };
            Ok(weight? * ((t - u).powf(a) - truncated_pow(-u, a)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ProcessKind::*;

    #[test]
    fn validation_examples() {
        assert!(make_process(U1, 0.3, 0.0, 1.0).is_ok());
        let err = make_process(V, 0.0, 0.5, 0.0).unwrap_err();
        assert!(err.to_string().contains("alpha != 0"), "{err}");
        let err = make_process(U2, -0.6, 0.2, 0.0).unwrap_err();
        assert!(err.to_string().contains("alpha > -1/2"), "{err}");
    }

    #[test]
    fn validation_boundaries() {
        assert!(make_process(U1, 0.3, 0.0, 0.0).is_err());
        assert!(make_process(U2, 0.3, 1.0, 0.0).is_err());
        assert!(make_process(U2, 0.3, 0.0, 0.0).is_ok());
        assert!(make_process(U3, 0.0, 0.0, 0.0).is_err());
        assert!(make_process(V, 0.7, 0.4, 0.0).is_err());
        assert!(make_process(V, 0.69, 0.4, 0.0).is_ok());
        assert!(make_process(U6, 2.0, 0.4, 0.0).is_ok());
        assert!(make_process(U4, f64::NAN, 0.0, 1.0).is_err());
        let s = make_process(U1, 0.3, 0.7, 1.0).unwrap();
        assert_eq!(s.gamma(), 0.0);
    }

    #[test]
    fn kind_parsing() {
        assert_eq!("U2".parse::<ProcessKind>().unwrap(), U2);
        assert_eq!("wiener".parse::<ProcessKind>().unwrap(), Wiener);
        assert!("u7".parse::<ProcessKind>().is_err());
    }

    #[test]
    fn interval_validation() {
        assert!(Interval::new(0.0, 1.0).is_ok());
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(-0.1, 1.0).is_err());
    }

    #[test]
    fn kernel_examples() {
        let u3 = make_process(U3, 1.0, 0.0, 0.0).unwrap();
        assert_eq!(kernel_eval(&u3, 2.0, 1.0).unwrap(), 1.0);
        let u1 = make_process(U1, 0.0, 0.0, 1.0).unwrap();
        assert!((kernel_eval(&u1, 3.0, 1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        let u4 = make_process(U4, 0.3, 0.0, 0.5).unwrap();
        let expected = (-1.0f64).exp() * 2f64.powf(0.3) - (-0.5f64).exp();
        assert!((kernel_eval(&u4, 1.0, -1.0).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn kernel_support() {
        let u2 = make_process(U2, 0.3, 0.4, 0.0).unwrap();
        assert!(kernel_eval(&u2, 1.0, 0.0).is_err());
        assert!(kernel_eval(&u2, 1.0, 1.5).is_err());
        assert!(kernel_eval(&u2, 0.0, 0.5).is_err());
        let v = make_process(V, 0.3, 0.4, 0.0).unwrap();
        assert!(kernel_eval(&v, 1.0, 0.5).is_err());
        assert!(kernel_eval(&v, 1.0, -0.5).is_ok());
        let u4 = make_process(U4, -0.3, 0.0, 1.0).unwrap();
        // (0)_+^{-0.3} is undefined
        assert!(kernel_eval(&u4, 1.0, 0.0).is_err());
        let u4 = make_process(U4, 0.3, 0.0, 1.0).unwrap();
        assert!(kernel_eval(&u4, 1.0, 0.0).is_ok());
    }

    #[test]
    fn u5_inner_integral_alpha_zero() {
        // α = 0 reduces U5 to Brownian motion: the kernel is 0 for u < 0 and 1 on (0, t)
        let s = make_process(U5, 0.0, 0.0, 2.0).unwrap();
        assert!(kernel_eval(&s, 1.5, -0.7).unwrap().abs() < 1e-12);
        assert!((kernel_eval(&s, 1.5, 0.4).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn u6_decomposes_into_v_and_u2() {
        let (a, g) = (0.3, 0.4);
        let u6 = make_process(U6, a, g, 0.0).unwrap();
        let v = make_process(V, a, g, 0.0).unwrap();
        let u2 = make_process(U2, a, g, 0.0).unwrap();
        for &t in &[0.5, 1.0, 3.0] {
            for &u in &[-5.0, -1.0, -0.01] {
                let d = kernel_eval(&u6, t, u).unwrap() - kernel_eval(&v, t, u).unwrap();
                assert!(d.abs() <= 1e-12);
            }
            for frac in [0.1, 0.5, 0.9] {
                let u = frac * t;
                let d = kernel_eval(&u6, t, u).unwrap() - kernel_eval(&u2, t, u).unwrap();
                assert!(d.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn u3_alpha_one_is_wiener() {
        let u3 = make_process(U3, 1.0, 0.0, 0.0).unwrap();
        let w = ProcessSpec::wiener();
        for &(t, u) in &[(1.0, 0.3), (5.0, 4.99), (0.1, 0.001)] {
            assert_eq!(kernel_eval(&u3, t, u).unwrap(), 1.0);
            assert_eq!(kernel_eval(&w, t, u).unwrap(), 1.0);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]
            #[test]
            fn tempered_kernel_differences_are_translation_invariant(
                alpha in -0.45f64..1.5,
                lambda in 0.1f64..3.0,
                s in 0.05f64..2.0,
                h in 0.05f64..2.0,
                back in 0.05f64..3.0,
                shift in 0.0f64..2.0,
                second_kind in proptest::bool::ANY,
            ) {
                let kind = if second_kind { U5 } else { U4 };
                let spec = make_process(kind, alpha, 0.0, lambda).unwrap();
                let t = s + h;
                let u = -back;
                let d0 = kernel_eval(&spec, t, u).unwrap() - kernel_eval(&spec, s, u).unwrap();
                let d1 = kernel_eval(&spec, t + shift, u + shift).unwrap()
                    - kernel_eval(&spec, s + shift, u + shift).unwrap();
                prop_assert!((d0 - d1).abs() <= 1e-12 * d0.abs().max(1.0), "{} vs {}", d0, d1);
            }
        }
    }
}
