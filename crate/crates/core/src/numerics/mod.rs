//! Special functions and singularity-aware quadrature.

mod quad;
mod special;

pub use quad::{
    geometric_from_lower, geometric_from_upper, integrate_finite, integrate_semi_infinite,
    integrate_semi_infinite_with, integrate_with, EndpointSingularity, QuadConfig, QuadResult,
    SingularityLocation, TailOptions, DEFAULT_TOL, MAX_EVALUATIONS,
};
pub use special::{beta_fn, gamma_fn};

/// `(x + h)^p - x^p` without cancellation, for `x >= 0`, `h > 0`.
pub fn pow_diff(x: f64, h: f64, p: f64) -> f64 {
    if p == 0.0 {
        return 0.0;
    }
    if x == 0.0 {
        return if p > 0.0 { h.powf(p) } else { f64::NEG_INFINITY };
    }
    x.powf(p) * (p * (h / x).ln_1p()).exp_m1()
}
