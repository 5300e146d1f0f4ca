//! Regime oracle: the quasihelix exponents known for each process, and the
//! leading-order small-lag asymptotics of the power-weighted process.
//!
//! Exponents refer to `‖U(t) - U(s)‖_2`, bounded below by `C1 h^{rho_lower}`
//! and above by `C2 h^{rho_upper}` on the interval.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::mandelbrot_constant;
use crate::processes::{Interval, ProcessKind, ProcessSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// Two-sided bound with a single exponent.
    ExactQuasihelix,
    /// Two-sided bound with `rho_lower > rho_upper` (or an equal pair outside an exact statement).
    Generalized,
    /// Borderline case: `‖ΔU‖_2^2 ≍ h^2 (1 + |log h|)`.
    LogCorrected,
    /// No statement is available for these parameters.
    Uncovered,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::ExactQuasihelix => "exact_quasihelix",
            Regime::Generalized => "generalized",
            Regime::LogCorrected => "log_corrected",
            Regime::Uncovered => "uncovered",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub regime: Regime,
    /// Lower-bound exponent; `None` when the regime is uncovered.
    pub rho_lower: Option<f64>,
    pub rho_upper: Option<f64>,
    /// The entry only holds on intervals bounded away from the origin.
    pub requires_t1_positive: bool,
    pub source: String,
}

impl RegimeReport {
    /// `(rho_lower, rho_upper)` when the regime makes a claim.
    pub fn exponents(&self) -> Option<(f64, f64)> {
        Some((self.rho_lower?, self.rho_upper?))
    }

    fn exact(rho: f64, requires_t1_positive: bool, source: &str) -> Self {
        RegimeReport {
            regime: Regime::ExactQuasihelix,
            rho_lower: Some(rho),
            rho_upper: Some(rho),
            requires_t1_positive,
            source: source.to_string(),
        }
    }

    fn generalized(rho_lower: f64, rho_upper: f64, requires_t1_positive: bool, source: &str) -> Self {
        RegimeReport {
            regime: Regime::Generalized,
            rho_lower: Some(rho_lower),
            rho_upper: Some(rho_upper),
            requires_t1_positive,
            source: source.to_string(),
        }
    }

    fn log_corrected(requires_t1_positive: bool, source: &str) -> Self {
        RegimeReport {
            regime: Regime::LogCorrected,
            rho_lower: Some(1.0),
            rho_upper: Some(1.0),
            requires_t1_positive,
            source: source.to_string(),
        }
    }

    fn uncovered(requires_t1_positive: bool, source: &str) -> Self {
        RegimeReport {
            regime: Regime::Uncovered,
            rho_lower: None,
            rho_upper: None,
            requires_t1_positive,
            source: source.to_string(),
        }
    }
}

const SRC_U1: &str = "exponentially tempered Riemann-Liouville kernel on [0,T]";
const SRC_U1_AWAY: &str = "exponentially tempered Riemann-Liouville kernel, alpha > 1/2, interval away from the origin";
const SRC_U2_AWAY: &str = "power-weighted Riemann-Liouville kernel on [T1,T2] with T1 > 0";
const SRC_U2_ORIGIN: &str = "power-weighted Riemann-Liouville kernel on [0,T]";
const SRC_U2_GAP: &str = "power-weighted kernel on [0,T] for alpha <= -1/2 + gamma/2: no bounds available";
const SRC_U3: &str = "Hadamard fractional integral kernel on [0,T]";
const SRC_TEMPERED: &str = "tempered fractional Brownian motion (first or second kind) on [0,T]";
const SRC_V: &str = "component on (-inf,0] of the two-sided power-weighted process, T1 > 0";
const SRC_V_ORIGIN: &str = "component on (-inf,0]: no bounds on intervals touching the origin";
const SRC_U6: &str = "two-sided power-weighted process = V + U2, T1 > 0";
const SRC_U6_OUT: &str = "two-sided power-weighted process: outside the covered parameter range";
const SRC_WIENER: &str = "standard Wiener process";

/// Looks up the quasihelix statement for `spec` on `interval`.
pub fn classify_regime(spec: &ProcessSpec, interval: &Interval) -> RegimeReport {
    use ProcessKind::*;
    let (a, g) = (spec.alpha(), spec.gamma());
    let away = interval.t1() > 0.0;
    match spec.kind() {
        Wiener => RegimeReport::exact(0.5, false, SRC_WIENER),
        U1 => {
            if a < 0.5 {
                RegimeReport::exact(a + 0.5, false, SRC_U1)
            } else if a == 0.5 {
                RegimeReport::log_corrected(false, SRC_U1)
            } else if away {
                RegimeReport::exact(1.0, true, SRC_U1_AWAY)
            } else {
                RegimeReport::generalized(a + 0.5, 1.0, false, SRC_U1)
            }
        }
        U3 => {
            if a < 1.0 {
                RegimeReport::generalized(1.0, a, false, SRC_U3)
            } else if a == 1.0 {
                RegimeReport::exact(0.5, false, SRC_U3)
            } else if a < 2.0 {
                RegimeReport::generalized(a, 1.0, false, SRC_U3)
            } else {
                RegimeReport::generalized(a / 2.0, 0.5, false, SRC_U3)
            }
        }
        U2 if away => {
            if a < 0.5 {
                RegimeReport::exact(a + 0.5, true, SRC_U2_AWAY)
            } else if a == 0.5 {
                RegimeReport::log_corrected(true, SRC_U2_AWAY)
            } else {
                RegimeReport::exact(1.0, true, SRC_U2_AWAY)
            }
        }
        U2 => {
            if a <= -0.5 + g / 2.0 && g > 0.0 {
                RegimeReport::uncovered(false, SRC_U2_GAP)
            } else if a < 0.5 + g / 2.0 {
                RegimeReport::generalized(a + 0.5, a + (1.0 - g) / 2.0, false, SRC_U2_ORIGIN)
            } else if a < 1.0 {
                RegimeReport::generalized(a + 0.5, a, false, SRC_U2_ORIGIN)
            } else {
                RegimeReport::generalized(a + 0.5, 1.0, false, SRC_U2_ORIGIN)
            }
        }
        U4 | U5 => {
            if a < 0.5 {
                RegimeReport::exact(a + 0.5, false, SRC_TEMPERED)
            } else if a == 0.5 {
                RegimeReport::log_corrected(false, SRC_TEMPERED)
            } else {
                RegimeReport::exact(1.0, false, SRC_TEMPERED)
            }
        }
        V if away => RegimeReport::exact(1.0, true, SRC_V),
        V => RegimeReport::uncovered(true, SRC_V_ORIGIN),
        U6 if away => {
            if a >= 0.5 + g / 2.0 {
                // includes alpha = 1/2 at gamma = 0, where the V component has infinite variance
                RegimeReport::uncovered(true, SRC_U6_OUT)
            } else if a < 0.5 {
                RegimeReport::exact(a + 0.5, true, SRC_U6)
            } else if a == 0.5 {
                RegimeReport::log_corrected(true, SRC_U6)
            } else {
                RegimeReport::exact(1.0, true, SRC_U6)
            }
        }
        U6 => RegimeReport::uncovered(true, SRC_U6_OUT),
    }
}

/// Leading-order small-lag behaviour `E(U(s+h) - U(s))^2 ~ constant * anchor_factor * h^power`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub constant: f64,
    pub power: f64,
    pub anchor_factor: f64,
}

impl AsymptoticPrediction {
    pub fn leading_variance(&self, h: f64) -> f64 {
        self.constant * self.anchor_factor * h.powf(self.power)
    }
}

/// Small-lag asymptotics for U2 (and U6, where the V component is `O(h^2)`).
///
/// For U6 this is an extension of the U2 result: it rests on V being
/// `O(h^2) = o(h^{2α+1})` for `α < 1/2`, not on a stated constant.
pub fn asymptotic_increment(spec: &ProcessSpec, s: f64, h: f64) -> Result<AsymptoticPrediction> {
    let a = spec.alpha();
    match spec.kind() {
        ProcessKind::U2 => {}
        ProcessKind::U6 if a != 0.0 => {}
        ProcessKind::U6 => {
            return Err(Error::Regime("U6 asymptotics require alpha != 0".into()));
        }
        other => {
            return Err(Error::Regime(format!(
                "small-lag asymptotics are available for U2 and U6 only, not {other}"
            )))
        }
    }
    if !(a > -0.5 && a < 0.5) {
        return Err(Error::Regime(format!("asymptotics require alpha in (-1/2, 1/2), got {a}")));
    }
    if !(s > 0.0) || !(h > 0.0) {
        return Err(Error::Domain(format!("asymptotics require s > 0 and h > 0, got s={s}, h={h}")));
    }
    Ok(AsymptoticPrediction {
        constant: mandelbrot_constant(a)?,
        power: 2.0 * a + 1.0,
        anchor_factor: s.powf(-spec.gamma()),
    })
}

/// Source note attached to U6 predictions.
pub const U6_ASYMPTOTIC_SOURCE: &str =
    "extended from U2: V contributes O(h^2), negligible against h^(2 alpha + 1) for alpha < 1/2";

#[cfg(test)]
mod tests {
    use super::*;
    use crate::processes::make_process;
    use ProcessKind::*;

    fn iv(t1: f64, t2: f64) -> Interval {
        Interval::new(t1, t2).unwrap()
    }

    #[test]
    fn table_examples() {
        let r = classify_regime(&make_process(U1, 0.3, 0.0, 2.0).unwrap(), &iv(0.0, 1.0));
        assert_eq!(r.regime, Regime::ExactQuasihelix);
        assert!((r.rho_lower.unwrap() - 0.8).abs() < 1e-15);
        let r = classify_regime(&make_process(U3, 1.5, 0.0, 0.0).unwrap(), &iv(0.0, 1.0));
        assert_eq!((r.regime, r.exponents()), (Regime::Generalized, Some((1.5, 1.0))));
        let r = classify_regime(&make_process(U2, 0.25, 0.4, 0.0).unwrap(), &iv(0.0, 1.0));
        assert_eq!(r.regime, Regime::Generalized);
        let (lo, hi) = r.exponents().unwrap();
        assert!((lo - 0.75).abs() < 1e-15 && (hi - 0.55).abs() < 1e-15);
    }

    #[test]
    fn origin_dependence() {
        let v = make_process(V, 0.3, 0.4, 0.0).unwrap();
        let r = classify_regime(&v, &iv(0.0, 1.0));
        assert_eq!((r.regime, r.exponents()), (Regime::Uncovered, None));
        assert_eq!(classify_regime(&v, &iv(1.0, 2.0)).regime, Regime::ExactQuasihelix);
        let u1 = make_process(U1, 0.8, 0.0, 1.0).unwrap();
        let r = classify_regime(&u1, &iv(0.0, 1.0));
        assert_eq!((r.regime, r.exponents()), (Regime::Generalized, Some((1.3, 1.0))));
        let r = classify_regime(&u1, &iv(0.5, 1.0));
        assert_eq!((r.regime, r.rho_lower), (Regime::ExactQuasihelix, Some(1.0)));
        assert!(r.requires_t1_positive);
    }

    #[test]
    fn asymptotic_examples() {
        let p = asymptotic_increment(&make_process(U2, 0.0, 0.4, 0.0).unwrap(), 1.0, 0.1).unwrap();
        assert_eq!((p.constant, p.power, p.anchor_factor), (1.0, 1.0, 1.0));
        let spec = make_process(U2, 0.25, 0.4, 0.0).unwrap();
        let p = asymptotic_increment(&spec, 2.0, 1e-3).unwrap();
        assert_eq!(p.constant, mandelbrot_constant(0.25).unwrap());
        assert_eq!(p.power, 1.5);
        assert!((p.anchor_factor - 2f64.powf(-0.4)).abs() < 1e-15);
    }

    #[test]
    fn asymptotic_out_of_regime() {
        let u1 = make_process(U1, 0.25, 0.0, 1.0).unwrap();
        assert!(matches!(asymptotic_increment(&u1, 1.0, 0.1), Err(Error::Regime(_))));
        let u2 = make_process(U2, 0.5, 0.4, 0.0).unwrap();
        assert!(matches!(asymptotic_increment(&u2, 1.0, 0.1), Err(Error::Regime(_))));
        let u6 = make_process(U6, 0.0, 0.4, 0.0).unwrap();
        assert!(matches!(asymptotic_increment(&u6, 1.0, 0.1), Err(Error::Regime(_))));
        let u2 = make_process(U2, 0.25, 0.4, 0.0).unwrap();
        assert!(asymptotic_increment(&u2, 0.0, 0.1).is_err());
    }
}
