//! Numerical evaluation of the q-deformed Riemann zeta function
//!
//!   zeta_q(s, t) = sum_{m >= 1} q^{mt} / [m]_q^s,   [m]_q = (1-q^m)/(1-q),
//!
//! for 0 < q < 1, with analytic continuation past Re(t) = 0, pole-lattice
//! queries, and a harness that measures growth along vertical lines
//! s = sigma + iv against the known O(1) / O(|v|) / O(exp(c|v|)) regimes.
//!
//! The single-variable specialization zeta_q(s) = zeta_q(s, s-1) tends to
//! the Riemann zeta function as q -> 1; [`classical_zeta`] provides the
//! comparison target.
//!
//! Evaluations run in f64 and escalate transparently to double-double
//! arithmetic when the continuation identity cancels too many digits, so
//! results honour the requested tolerance or fail loudly — never silently
//! degrade.

mod dd;
mod engine;
mod scalar;

pub mod error;
pub mod growth;
pub mod kernel;
pub mod zeta;

pub use error::{QzetaError, Result};
pub use growth::{
    auto_regressor, check_bound, estimate_mu, estimate_mu_from_rows, scan_vertical, BoundReport,
    MuEstimate, Regime, Regressor, RowStatus, ScanRow, ScanSpec, TChoice,
};
pub use kernel::{complex_pow, general_binomial, log_gamma, normalize_arg, LogComplex};
pub use zeta::{
    adaptive_n, choose_n, classical_zeta, epsilon_margin, pole_points, zeta_q_continued,
    zeta_q_direct, zeta_q_single, EvalResult, LatticeKind, Method, QParameter, Tolerance, Window,
    POLE_MARGIN_FLOOR,
};

pub use num_complex::Complex64;
