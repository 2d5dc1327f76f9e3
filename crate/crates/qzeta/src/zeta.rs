//! Public evaluators for the q-deformed zeta function.
//!
//! zeta_q(s,t) = sum_{m>=1} q^{mt} / [m]_q^s with [m]_q = (1-q^m)/(1-q)
//! converges for Re(t) > 0 and continues meromorphically through the
//! identity (valid for every integer N >= 1)
//!
//!   (1-q)^{-s} zeta_q(s,t) = sum_{m=1}^{N-1} q^{mt}/(1-q^m)^s
//!       + sum_{r>=0} binom(r+s-1, r) q^{N(t+r)} / (1 - q^{t+r}).
//!
//! The single-variable function is zeta_q(s) = zeta_q(s, s-1); it recovers
//! the Riemann zeta function as q -> 1.

use crate::engine::{continued_pass, direct_pass, EngineFail};
use crate::error::{QzetaError, Result};
use crate::kernel::LogComplex;
use num_complex::Complex64;

/// Deformation parameter, validated to lie strictly inside (0, 1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParameter {
    q: f64,
    log_q: f64,
}

impl QParameter {
    pub fn new(q: f64) -> Result<Self> {
        if !q.is_finite() || q <= 0.0 || q >= 1.0 {
            return Err(QzetaError::InvalidParameter(format!(
                "q must satisfy 0 < q < 1, got {q}"
            )));
        }
        Ok(QParameter { q, log_q: q.ln() })
    }

    pub fn value(self) -> f64 {
        self.q
    }

    pub fn log_q(self) -> f64 {
        self.log_q
    }

    /// Vertical spacing 2*pi/|log q| of the pole lattices.
    pub fn pole_spacing(self) -> f64 {
        std::f64::consts::TAU / -self.log_q
    }

    /// q-integer [m]_q = (1 - q^m)/(1 - q).
    pub fn q_integer(self, m: u64) -> f64 {
        (-((m as f64) * self.log_q).exp()).ln_1p().exp() / (1.0 - self.q)
    }
}

/// Accuracy and work-budget knobs shared by every evaluator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel_tol: f64,
    pub max_terms: u64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel_tol: 1e-10, max_terms: 10_000_000 }
    }
}

impl Tolerance {
    pub fn validate(&self) -> Result<()> {
        if !self.rel_tol.is_finite() || self.rel_tol <= 0.0 || self.rel_tol >= 1.0 {
            return Err(QzetaError::InvalidParameter(format!(
                "rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        if self.max_terms == 0 {
            return Err(QzetaError::InvalidParameter("max_terms must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Direct,
    Continuation,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Direct => write!(f, "direct"),
            Method::Continuation => write!(f, "continuation"),
        }
    }
}

/// Outcome of one evaluation. `value` is None when the result magnitude
/// overflows f64; `log_value` is always populated.
#[derive(Debug, Clone, Copy)]
pub struct EvalResult {
    pub value: Option<Complex64>,
    pub log_value: LogComplex,
    pub terms_used: u64,
    /// rigorous bound on the truncation error, in absolute magnitude
    pub tail_bound: f64,
    /// distance from the relevant pole lattice at the evaluation point
    pub pole_margin: f64,
    pub method: Method,
}

/// Which pole lattice to enumerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    /// t-plane poles of zeta_q(s,t): t in Z_{<=0} + (2 pi i / log q) Z
    TwoVariable,
    /// s-plane poles of zeta_q(s): s = 1 + 2 pi i k/log q, and
    /// s in Z_{<=0} + 2 pi i k/log q with k != 0
    SingleVariable,
}

/// Closed rectangle in the complex plane.
#[derive(Debug, Clone, Copy)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Window {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let vals = [re_min, re_max, im_min, im_max];
        if vals.iter().any(|v| !v.is_finite()) || re_min > re_max || im_min > im_max {
            return Err(QzetaError::InvalidParameter(format!(
                "window [{re_min}, {re_max}] x [{im_min}, {im_max}] is not a valid rectangle"
            )));
        }
        Ok(Window { re_min, re_max, im_min, im_max })
    }

    fn contains_re(&self, x: f64) -> bool {
        x >= self.re_min && x <= self.re_max
    }
}

/// Hard floor on pole distance below which evaluation refuses to proceed.
pub const POLE_MARGIN_FLOOR: f64 = 1e-10;

/// inf_{r >= r_min} |1 - q^{t+r}|, exact to f64 grain.
///
/// Terms with q^{Re t + r} < 1e-14 pin the remaining infimum to within
/// 1e-14 of 1, so the scan stops there (or earlier, once the running
/// minimum already undercuts everything that can follow).
pub fn epsilon_margin(q: QParameter, t: Complex64, r_min: i64) -> f64 {
    let lnq = q.log_q();
    let mut best = f64::INFINITY;
    let mut r = r_min;
    loop {
        let w = (t + Complex64::new(r as f64, 0.0)) * lnq;
        let dist = (Complex64::new(1.0, 0.0) - w.exp()).norm();
        best = best.min(dist);
        let next_mod = ((t.re + (r + 1) as f64) * lnq).exp();
        if next_mod < 1e-14 {
            return best.min(1.0 - next_mod);
        }
        if best <= 1.0 - next_mod {
            return best;
        }
        r += 1;
    }
}

fn nearest_lattice_t(q: QParameter, t: Complex64) -> Complex64 {
    let p = q.pole_spacing();
    let a = t.re.round().min(0.0);
    let k = (t.im / p).round();
    Complex64::new(a, k * p)
}

fn nearest_lattice_s(q: QParameter, s: Complex64) -> Complex64 {
    let p = q.pole_spacing();
    let k = (s.im / p).round();
    let cand_one = Complex64::new(1.0, k * p);
    let a = s.re.round().min(0.0);
    let k_nz = if k != 0.0 {
        k
    } else if s.im >= 0.0 {
        1.0
    } else {
        -1.0
    };
    let cand_np = Complex64::new(a, k_nz * p);
    if (s - cand_one).norm() <= (s - cand_np).norm() {
        cand_one
    } else {
        cand_np
    }
}

/// The N suggested by the saddle-point analysis of the r-series,
///   N = floor( (1 + pi/2)/(max(Re t, 0) + 1) * |v| / (-log q) ),
/// clamped to at least 1.
pub fn choose_n(q: QParameter, re_t: f64, abs_v: f64) -> Result<u32> {
    if !re_t.is_finite() || !abs_v.is_finite() || abs_v < 0.0 {
        return Err(QzetaError::InvalidParameter(format!(
            "choose_n needs finite re_t and |v| >= 0, got re_t={re_t}, |v|={abs_v}"
        )));
    }
    let raw = (1.0 + std::f64::consts::FRAC_PI_2) / (re_t.max(0.0) + 1.0) * abs_v / -q.log_q();
    Ok((raw.floor().min(2_147_483_647.0) as u32).max(1))
}

/// Smallest N with q^N * max(|v|, 2) <= 0.7. This keeps every r-series
/// term below the final sum in magnitude, so the identity stays
/// well-conditioned at any height; see `zeta_q_single`.
pub fn adaptive_n(q: QParameter, abs_v: f64) -> u32 {
    let target = (abs_v.max(2.0) / 0.7).ln() / -q.log_q();
    (target.ceil().max(1.0).min(100_000.0)) as u32
}

fn check_margin(margin: f64, nearest: Complex64) -> Result<()> {
    if margin <= POLE_MARGIN_FLOOR {
        return Err(QzetaError::PoleProximity { nearest, margin });
    }
    Ok(())
}

fn validate_point(name: &str, z: Complex64) -> Result<()> {
    if !z.is_finite() {
        return Err(QzetaError::InvalidParameter(format!("{name} must be finite, got {z}")));
    }
    Ok(())
}

fn result_from_direct(
    out: crate::engine::DirectOut,
    pole_margin: f64,
) -> EvalResult {
    EvalResult {
        value: Some(out.value),
        log_value: LogComplex::from_complex(out.value),
        terms_used: out.terms,
        tail_bound: out.tail_abs,
        pole_margin,
        method: Method::Direct,
    }
}

fn map_engine_fail(f: EngineFail) -> QzetaError {
    match f {
        EngineFail::Budget { terms } => QzetaError::BudgetExceeded { terms },
        EngineFail::TotalCancellation => QzetaError::PrecisionLoss { lost_digits: f64::INFINITY },
    }
}

/// Direct series evaluation; requires Re(t) > 0.
pub fn zeta_q_direct(q: QParameter, s: Complex64, t: Complex64, tol: Tolerance) -> Result<EvalResult> {
    tol.validate()?;
    validate_point("s", s)?;
    validate_point("t", t)?;
    if t.re <= 0.0 {
        return Err(QzetaError::Domain(format!(
            "direct series needs Re(t) > 0, got Re(t) = {}",
            t.re
        )));
    }
    let out = direct_pass(q.value(), s, t, tol.rel_tol, tol.max_terms).map_err(map_engine_fail)?;
    let margin = epsilon_margin(q, t, 0);
    Ok(result_from_direct(out, margin))
}

/// Continuation-identity evaluation at explicit truncation level N.
/// Valid for any t off the pole lattice.
pub fn zeta_q_continued(
    q: QParameter,
    s: Complex64,
    t: Complex64,
    n: u32,
    tol: Tolerance,
) -> Result<EvalResult> {
    tol.validate()?;
    validate_point("s", s)?;
    validate_point("t", t)?;
    if n == 0 {
        return Err(QzetaError::InvalidParameter("N must be at least 1".into()));
    }
    let margin = epsilon_margin(q, t, 0);
    check_margin(margin, nearest_lattice_t(q, t))?;
    continued_with_margin(q, s, t, n, tol, margin)
}

fn continued_with_margin(
    q: QParameter,
    s: Complex64,
    t: Complex64,
    n: u32,
    tol: Tolerance,
    margin: f64,
) -> Result<EvalResult> {
    // |q^t| must stay representable for the engine's u = q^(t+r) seed
    if (t.re * q.log_q()).abs() > 690.0 {
        return Err(QzetaError::InvalidParameter(format!(
            "Re(t) = {} puts q^t out of floating-point range for q = {}",
            t.re,
            q.value()
        )));
    }

    let first = continued_pass::<f64>(
        q.value(), s, t, n, tol.rel_tol, tol.max_terms, margin,
    );
    let (out, eps) = match first {
        Ok(out) => {
            let steps = (out.terms.max(64)) as f64;
            let achieved = out.cancellation.exp() * steps * f64::EPSILON;
            if achieved <= 0.5 * tol.rel_tol {
                (out, f64::EPSILON)
            } else {
                // the f64 pass lost too many digits; decide whether
                // double-double can recover before paying for it
                let predicted = out.cancellation.exp() * steps * crate::dd::DD_EPS;
                if predicted > 0.5 * tol.rel_tol {
                    return Err(QzetaError::PrecisionLoss {
                        lost_digits: out.cancellation / std::f64::consts::LN_10,
                    });
                }
                let second = continued_pass::<crate::dd::Dd>(
                    q.value(), s, t, n, tol.rel_tol, tol.max_terms, margin,
                )
                .map_err(map_engine_fail)?;
                (second, crate::dd::DD_EPS)
            }
        }
        Err(EngineFail::Budget { terms }) => {
            return Err(QzetaError::BudgetExceeded { terms });
        }
        Err(EngineFail::TotalCancellation) => {
            // f64 cancelled to zero outright; dd is the only hope
            let second = continued_pass::<crate::dd::Dd>(
                q.value(), s, t, n, tol.rel_tol, tol.max_terms, margin,
            )
            .map_err(map_engine_fail)?;
            (second, crate::dd::DD_EPS)
        }
    };

    let achieved = out.cancellation.exp() * (out.terms.max(64)) as f64 * eps;
    if achieved > tol.rel_tol {
        return Err(QzetaError::PrecisionLoss {
            lost_digits: out.cancellation / std::f64::consts::LN_10,
        });
    }

    let log_value = LogComplex::new(out.log_abs, out.arg);
    let tail_bound = if out.tail_rel == 0.0 {
        0.0
    } else {
        (out.tail_rel.ln() + out.log_abs).exp().min(f64::MAX)
    };
    Ok(EvalResult {
        value: if log_value.representable() { Some(log_value.to_complex()) } else { None },
        log_value,
        terms_used: out.terms,
        tail_bound,
        pole_margin: margin,
        method: Method::Continuation,
    })
}

/// Single-variable q-zeta: zeta_q(s) = zeta_q(s, s-1).
///
/// Uses the direct series for Re(s) > 1 and the continuation identity
/// elsewhere. The continuation N follows `adaptive_n`, which bounds the
/// condition number of the identity uniformly in Im(s); any admissible N
/// gives the same value, so the choice only affects rounding behaviour.
pub fn zeta_q_single(q: QParameter, s: Complex64, tol: Tolerance) -> Result<EvalResult> {
    tol.validate()?;
    validate_point("s", s)?;
    let margin = epsilon_margin(q, s, -1);
    check_margin(margin, nearest_lattice_s(q, s))?;
    let t = s - Complex64::new(1.0, 0.0);
    let mut out = if s.re > 1.0 {
        let direct = direct_pass(q.value(), s, t, tol.rel_tol, tol.max_terms)
            .map_err(map_engine_fail)?;
        result_from_direct(direct, margin)
    } else {
        continued_with_margin(q, s, t, adaptive_n(q, s.im.abs()), tol, margin)?
    };
    out.pole_margin = margin;
    Ok(out)
}

/// All lattice poles inside a closed window, sorted by (re, im).
pub fn pole_points(q: QParameter, kind: LatticeKind, window: Window) -> Vec<Complex64> {
    let p = q.pole_spacing();
    let k_lo = (window.im_min / p).ceil() as i64;
    let k_hi = (window.im_max / p).floor() as i64;
    let a_lo = window.re_min.ceil() as i64;
    let a_hi = window.re_max.floor().min(0.0) as i64;
    let mut pts = Vec::new();
    match kind {
        LatticeKind::TwoVariable => {
            for a in a_lo..=a_hi.min(0) {
                if a > 0 {
                    continue;
                }
                for k in k_lo..=k_hi {
                    pts.push(Complex64::new(a as f64, k as f64 * p));
                }
            }
        }
        LatticeKind::SingleVariable => {
            for a in a_lo..=a_hi.min(0) {
                if a > 0 {
                    continue;
                }
                for k in k_lo..=k_hi {
                    if k == 0 {
                        continue;
                    }
                    pts.push(Complex64::new(a as f64, k as f64 * p));
                }
            }
            if window.contains_re(1.0) {
                for k in k_lo..=k_hi {
                    pts.push(Complex64::new(1.0, k as f64 * p));
                }
            }
        }
    }
    pts.sort_by(|a, b| {
        a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap())
    });
    pts
}

const EM_COEFF: [f64; 14] = [
    0.08333333333333333,
    -0.001388888888888889,
    3.306878306878307e-05,
    -8.267195767195768e-07,
    2.08767569878681e-08,
    -5.284190138687493e-10,
    1.3382536530684679e-11,
    -3.3896802963225827e-13,
    8.586062056277845e-15,
    -2.174868698558062e-16,
    5.5090028283602295e-18,
    -1.3954464685812522e-19,
    3.534707039629467e-21,
    -8.953517427037546e-23,
];

/// Riemann zeta by Euler-Maclaurin, for comparison targets as q -> 1.
/// Supported for Re(s) > -1, s != 1.
pub fn classical_zeta(s: Complex64) -> Result<Complex64> {
    validate_point("s", s)?;
    if (s - Complex64::new(1.0, 0.0)).norm() < 1e-10 {
        return Err(QzetaError::ZetaPole { s });
    }
    if s.re <= -1.0 {
        return Err(QzetaError::Domain(format!(
            "classical_zeta supports Re(s) > -1, got Re(s) = {}",
            s.re
        )));
    }
    let m = (1.3 * s.im.abs() + 10.0).ceil().max(16.0);
    let m_int = m as u64;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..m_int {
        acc += (-s * (n as f64).ln()).exp();
    }
    let lnm = m.ln();
    let m_pow_neg_s = (-s * lnm).exp();
    acc += m_pow_neg_s * m / (s - Complex64::new(1.0, 0.0));
    acc += m_pow_neg_s * 0.5;
    // correction terms: coeff_k * s(s+1)...(s+2k-2) * M^{-s-2k+1}
    let mut poch = s;
    let mut j = 1.0;
    for c in EM_COEFF {
        acc += poch * m_pow_neg_s * m.powf(-j) * c;
        poch *= (s + Complex64::new(j, 0.0)) * (s + Complex64::new(j + 1.0, 0.0));
        j += 2.0;
    }
    Ok(acc)
}
