//! Jacobi theta functions `theta_1..theta_4(v | it)` on the imaginary axis,
//! with rigorous truncation bounds, evaluation through the modular
//! transformation for small `t`, and certification of the two-term
//! expansions and Gaussian approximations `t^{1/2} theta_j -> e^{-pi x^2}`.

mod dd;
mod trig;

pub mod error;
pub mod frac;
pub mod gauss;
pub mod modular;
pub mod oracle;
pub mod scaled;
pub mod theta;

pub use error::{Error, Result};
pub use frac::{decompose, Decomposition};
pub use gauss::{
    certify, expansion_bound, expansion_check, gaussian_approx, gaussian_bound,
    gaussian_precondition, gaussian_remainder, leading_expansion, CertificationReport,
    ExpansionReport, MeasurementRoute,
};
pub use modular::{theta_auto, theta_transformed, transform_identity_residual};
pub use scaled::{Plain, Range, ScaledReal};
pub use theta::{
    q_pochhammer, theta_product, theta_series, EvalReport, Method, Nome, Pochhammer, ThetaKind,
};
