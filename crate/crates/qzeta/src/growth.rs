//! Vertical-line growth harness.
//!
//! Samples |zeta_q| along s = sigma + iv, compares against the three
//! growth regimes
//!
//!   O(1)                         Re(t) > 0
//!   O(|v|)                       Re(t) = 0
//!   O(exp(-Re(t)(1+pi/2)|v|))    Re(t) < 0
//!
//! and fits the empirical exponent mu_q(sigma) by least squares. The
//! implicit constants are unknown, so bound checks calibrate on the
//! smaller-v half of a scan and verify the larger-v half with one decade
//! of slack.

use crate::error::{QzetaError, Result};
use crate::zeta::{
    adaptive_n, epsilon_margin, zeta_q_continued, zeta_q_direct, zeta_q_single, QParameter,
    Tolerance,
};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, LN_10};

/// Growth regime along a vertical line, keyed on sign(Re t).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Constant,
    Linear,
    Exponential,
}

impl Regime {
    pub fn from_re_t(re_t: f64) -> Regime {
        if re_t > 0.0 {
            Regime::Constant
        } else if re_t == 0.0 {
            Regime::Linear
        } else {
            Regime::Exponential
        }
    }

    /// log of the regime's bound at height v, up to the implicit constant.
    pub fn bound_log(self, re_t: f64, v: f64) -> f64 {
        match self {
            Regime::Constant => 0.0,
            Regime::Linear => v.abs().ln(),
            Regime::Exponential => -re_t * (1.0 + FRAC_PI_2) * v.abs(),
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::Constant => write!(f, "constant"),
            Regime::Linear => write!(f, "linear"),
            Regime::Exponential => write!(f, "exponential"),
        }
    }
}

/// Second argument of the scan: a fixed real t, or t = s - 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TChoice {
    Fixed(f64),
    SingleLine,
}

#[derive(Debug, Clone)]
pub struct ScanSpec {
    pub q: QParameter,
    pub sigma: f64,
    pub t_choice: TChoice,
    pub v_values: Vec<f64>,
    pub v_min: f64,
    pub epsilon: f64,
    pub tol: Tolerance,
}

impl ScanSpec {
    pub fn new(q: QParameter, sigma: f64, t_choice: TChoice, v_values: Vec<f64>) -> Self {
        ScanSpec { q, sigma, t_choice, v_values, v_min: 10.0, epsilon: 1e-3, tol: Tolerance::default() }
    }

    pub fn re_t(&self) -> f64 {
        match self.t_choice {
            TChoice::Fixed(x) => x,
            TChoice::SingleLine => self.sigma - 1.0,
        }
    }

    pub fn regime(&self) -> Regime {
        Regime::from_re_t(self.re_t())
    }

    pub fn validate(&self) -> Result<()> {
        self.tol.validate()?;
        if !self.sigma.is_finite() {
            return Err(QzetaError::InvalidParameter("sigma must be finite".into()));
        }
        if let TChoice::Fixed(x) = self.t_choice {
            if !x.is_finite() {
                return Err(QzetaError::InvalidParameter("re_t must be finite".into()));
            }
        }
        if !(self.epsilon > 0.0) || !self.epsilon.is_finite() {
            return Err(QzetaError::InvalidParameter(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if self.v_values.is_empty() {
            return Err(QzetaError::InvalidParameter("v_values must be non-empty".into()));
        }
        for w in self.v_values.windows(2) {
            if !(w[1] > w[0]) {
                return Err(QzetaError::InvalidParameter(
                    "v_values must be strictly increasing".into(),
                ));
            }
        }
        let lo = self.v_values[0];
        if !(lo > 0.0) || lo < self.v_min {
            return Err(QzetaError::InvalidParameter(format!(
                "v_values must start at or above v_min = {}, got {lo}",
                self.v_min
            )));
        }
        if !self.v_values.iter().all(|v| v.is_finite()) {
            return Err(QzetaError::InvalidParameter("v_values must be finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Evaluated,
    /// pole margin at or below spec.epsilon; never evaluated
    Skipped,
    /// evaluator error (budget, precision); excluded like a skip
    Failed,
}

#[derive(Debug, Clone, Copy)]
pub struct ScanRow {
    pub v: f64,
    pub log_abs: Option<f64>,
    pub arg: Option<f64>,
    pub pole_margin: f64,
    pub status: RowStatus,
    pub bound_log: f64,
    pub terms_used: u64,
}

impl ScanRow {
    pub fn usable(&self) -> bool {
        self.status == RowStatus::Evaluated
    }
}

/// One row per v, in v order. Rows too close to the pole lattice are
/// skipped; evaluator failures mark the row failed and the scan continues.
pub fn scan_vertical(spec: &ScanSpec) -> Result<Vec<ScanRow>> {
    spec.validate()?;
    let re_t = spec.re_t();
    let regime = spec.regime();
    Ok(spec
        .v_values
        .par_iter()
        .map(|&v| scan_one(spec, re_t, regime, v))
        .collect())
}

fn scan_one(spec: &ScanSpec, re_t: f64, regime: Regime, v: f64) -> ScanRow {
    let bound_log = regime.bound_log(re_t, v);
    let s = Complex64::new(spec.sigma, v);
    let (margin, outcome) = match spec.t_choice {
        TChoice::SingleLine => {
            let margin = epsilon_margin(spec.q, s, -1);
            if margin <= spec.epsilon {
                (margin, None)
            } else {
                (margin, Some(zeta_q_single(spec.q, s, spec.tol)))
            }
        }
        TChoice::Fixed(rt) => {
            let t = Complex64::new(rt, 0.0);
            let margin = epsilon_margin(spec.q, t, 0);
            if margin <= spec.epsilon {
                (margin, None)
            } else if rt > 0.1 {
                (margin, Some(zeta_q_direct(spec.q, s, t, spec.tol)))
            } else {
                let n = adaptive_n(spec.q, v.abs());
                (margin, Some(zeta_q_continued(spec.q, s, t, n, spec.tol)))
            }
        }
    };
    match outcome {
        None => ScanRow {
            v,
            log_abs: None,
            arg: None,
            pole_margin: margin,
            status: RowStatus::Skipped,
            bound_log,
            terms_used: 0,
        },
        Some(Ok(res)) => ScanRow {
            v,
            log_abs: Some(res.log_value.log_abs),
            arg: Some(res.log_value.arg),
            pole_margin: margin,
            status: RowStatus::Evaluated,
            bound_log,
            terms_used: res.terms_used,
        },
        Some(Err(e)) => {
            let terms = match e {
                QzetaError::BudgetExceeded { terms } => terms,
                _ => 0,
            };
            ScanRow {
                v,
                log_abs: None,
                arg: None,
                pole_margin: margin,
                status: RowStatus::Failed,
                bound_log,
                terms_used: terms,
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BoundReport {
    /// max over usable rows of log_abs - bound_log
    pub max_ratio_log: f64,
    /// verification rows exceeding bound_log + fitted_constant + ln 10
    pub violations: u64,
    /// max over the calibration (smaller-v) half of log_abs - bound_log
    pub fitted_constant: f64,
    pub calibration_rows: usize,
    pub verification_rows: usize,
}

fn regime_consistent(rows: &[&ScanRow], regime: Regime) -> bool {
    match regime {
        Regime::Constant => rows.iter().all(|r| r.bound_log == 0.0),
        Regime::Linear => rows
            .iter()
            .all(|r| (r.bound_log - r.v.abs().ln()).abs() <= 1e-9 * r.bound_log.abs().max(1.0)),
        Regime::Exponential => {
            let rate = rows[0].bound_log / rows[0].v.abs();
            rate > 0.0
                && rows.iter().all(|r| {
                    (r.bound_log - rate * r.v.abs()).abs() <= 1e-9 * r.bound_log.abs().max(1.0)
                })
        }
    }
}

/// Calibrate the unknown implicit constant on the smaller-v half, then
/// verify the larger-v half against it with one decade of slack.
pub fn check_bound(rows: &[ScanRow], regime: Regime) -> Result<BoundReport> {
    let mut usable: Vec<&ScanRow> = rows.iter().filter(|r| r.usable()).collect();
    if usable.len() < 8 {
        return Err(QzetaError::InsufficientData { needed: 8, got: usable.len() });
    }
    usable.sort_by(|a, b| a.v.partial_cmp(&b.v).unwrap());
    if !regime_consistent(&usable, regime) {
        return Err(QzetaError::InvalidParameter(format!(
            "row bound_log values do not match the {regime} regime"
        )));
    }
    let n_cal = usable.len().div_ceil(2);
    let ratio = |r: &ScanRow| r.log_abs.unwrap() - r.bound_log;
    let fitted = usable[..n_cal].iter().fold(f64::NEG_INFINITY, |m, r| m.max(ratio(r)));
    let mut violations = 0u64;
    let mut max_ratio = fitted;
    for r in &usable[n_cal..] {
        let x = ratio(r);
        max_ratio = max_ratio.max(x);
        if x > fitted + LN_10 {
            violations += 1;
        }
    }
    Ok(BoundReport {
        max_ratio_log: max_ratio,
        violations,
        fitted_constant: fitted,
        calibration_rows: n_cal,
        verification_rows: usable.len() - n_cal,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regressor {
    LogV,
    LinearV,
}

impl std::fmt::Display for Regressor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regressor::LogV => write!(f, "log_v"),
            Regressor::LinearV => write!(f, "linear_v"),
        }
    }
}

/// sigma >= 1 is the polynomial regime (fit against log v); sigma < 1 is
/// the exponential regime (fit against v).
pub fn auto_regressor(sigma: f64) -> Regressor {
    if sigma >= 1.0 {
        Regressor::LogV
    } else {
        Regressor::LinearV
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MuEstimate {
    pub sigma: f64,
    pub slope: f64,
    pub intercept: f64,
    pub regressor: Regressor,
    pub residual_rms: f64,
    pub n_points: usize,
}

/// Scan per `spec` and fit the empirical growth exponent. The slope is a
/// least-squares surrogate for the infimum defining mu_q(sigma), not the
/// infimum itself.
pub fn estimate_mu(spec: &ScanSpec) -> Result<MuEstimate> {
    let rows = scan_vertical(spec)?;
    estimate_mu_from_rows(&rows, spec.sigma, auto_regressor(spec.sigma))
}

pub fn estimate_mu_from_rows(
    rows: &[ScanRow],
    sigma: f64,
    regressor: Regressor,
) -> Result<MuEstimate> {
    let usable: Vec<&ScanRow> = rows.iter().filter(|r| r.usable()).collect();
    if usable.len() < 12 {
        return Err(QzetaError::InsufficientData { needed: 12, got: usable.len() });
    }
    let xs: Vec<f64> = usable
        .iter()
        .map(|r| match regressor {
            Regressor::LogV => r.v.abs().ln(),
            Regressor::LinearV => r.v.abs(),
        })
        .collect();
    let ys: Vec<f64> = usable.iter().map(|r| r.log_abs.unwrap()).collect();
    let n = xs.len() as f64;
    let xbar = xs.iter().sum::<f64>() / n;
    let ybar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    if sxx == 0.0 {
        return Err(QzetaError::InvalidParameter(
            "regression abscissae are all identical".into(),
        ));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xbar) * (y - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - (intercept + slope * x)).powi(2))
        .sum();
    Ok(MuEstimate {
        sigma,
        slope,
        intercept,
        regressor,
        residual_rms: (ss_res / xs.len() as f64).sqrt(),
        n_points: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qp(q: f64) -> QParameter {
        QParameter::new(q).unwrap()
    }

    fn synthetic_row(v: f64, log_abs: f64, bound_log: f64) -> ScanRow {
        ScanRow {
            v,
            log_abs: Some(log_abs),
            arg: Some(0.0),
            pole_margin: 1.0,
            status: RowStatus::Evaluated,
            bound_log,
            terms_used: 1,
        }
    }

    fn skipped_row(v: f64, bound_log: f64) -> ScanRow {
        ScanRow {
            v,
            log_abs: None,
            arg: None,
            pole_margin: 1e-4,
            status: RowStatus::Skipped,
            bound_log,
            terms_used: 0,
        }
    }

    #[test]
    fn regime_selection_and_bounds() {
        assert_eq!(Regime::from_re_t(0.5), Regime::Constant);
        assert_eq!(Regime::from_re_t(0.0), Regime::Linear);
        assert_eq!(Regime::from_re_t(-0.5), Regime::Exponential);
        assert_eq!(Regime::Constant.bound_log(0.5, 50.0), 0.0);
        assert!((Regime::Linear.bound_log(0.0, 50.0) - 50.0f64.ln()).abs() < 1e-15);
        let expect = 0.5 * (1.0 + FRAC_PI_2) * 50.0;
        assert!((Regime::Exponential.bound_log(-0.5, 50.0) - expect).abs() < 1e-12);
    }

    #[test]
    fn check_bound_identity_offset() {
        // log_abs = bound_log + 1 identically
        let rows: Vec<ScanRow> = (1..=10)
            .map(|i| {
                let v = 10.0 * i as f64;
                synthetic_row(v, v.ln() + 1.0, v.ln())
            })
            .collect();
        let rep = check_bound(&rows, Regime::Linear).unwrap();
        assert_eq!(rep.violations, 0);
        assert!((rep.fitted_constant - 1.0).abs() < 1e-12);
        assert!((rep.max_ratio_log - 1.0).abs() < 1e-12);
        assert_eq!(rep.calibration_rows, 5);
        assert_eq!(rep.verification_rows, 5);
    }

    #[test]
    fn check_bound_flags_decade_jump() {
        // verification half exceeds calibration by more than ln 10
        let rows: Vec<ScanRow> = (1..=10)
            .map(|i| {
                let v = 10.0 * i as f64;
                let extra = if i > 5 { LN_10 + 1.0 } else { 0.0 };
                synthetic_row(v, extra, 0.0)
            })
            .collect();
        let rep = check_bound(&rows, Regime::Constant).unwrap();
        assert_eq!(rep.violations, 5);
        assert!(rep.max_ratio_log > LN_10);
    }

    #[test]
    fn check_bound_requires_eight_usable() {
        let mut rows: Vec<ScanRow> = (1..=7)
            .map(|i| synthetic_row(10.0 * i as f64, 0.0, 0.0))
            .collect();
        rows.push(skipped_row(80.0, 0.0));
        rows.push(skipped_row(90.0, 0.0));
        match check_bound(&rows, Regime::Constant) {
            Err(QzetaError::InsufficientData { needed: 8, got: 7 }) => {}
            other => panic!("expected InsufficientData, got {other:?}"),
        }
    }

    #[test]
    fn check_bound_rejects_mismatched_regime() {
        let rows: Vec<ScanRow> = (1..=8)
            .map(|i| synthetic_row(10.0 * i as f64, 1.0, 0.0))
            .collect();
        assert!(check_bound(&rows, Regime::Linear).is_err());
        assert!(check_bound(&rows, Regime::Constant).is_ok());
    }

    #[test]
    fn skipped_rows_never_contribute() {
        let mut rows: Vec<ScanRow> = (1..=8)
            .map(|i| synthetic_row(10.0 * i as f64, 0.5, 0.0))
            .collect();
        // a wildly violating row that is skipped must change nothing
        let mut bad = skipped_row(85.0, 0.0);
        bad.log_abs = None;
        rows.push(bad);
        let rep = check_bound(&rows, Regime::Constant).unwrap();
        assert_eq!(rep.violations, 0);
        assert!((rep.fitted_constant - 0.5).abs() < 1e-12);
    }

    #[test]
    fn mu_constant_rows_give_zero_slope() {
        let rows: Vec<ScanRow> = (1..=12)
            .map(|i| synthetic_row(10.0 * i as f64, 2.5, 0.0))
            .collect();
        let est = estimate_mu_from_rows(&rows, 2.0, Regressor::LogV).unwrap();
        assert!(est.slope.abs() < 1e-13);
        assert!(est.residual_rms < 1e-13);
        assert!((est.intercept - 2.5).abs() < 1e-12);
        assert_eq!(est.n_points, 12);
    }

    #[test]
    fn mu_exact_linear_fit() {
        // y = 2 x + 3 against x = v: slope and intercept recovered exactly
        let rows: Vec<ScanRow> = (1..=12)
            .map(|i| {
                let v = 10.0 + i as f64;
                synthetic_row(v, 2.0 * v + 3.0, 0.0)
            })
            .collect();
        let est = estimate_mu_from_rows(&rows, 0.5, Regressor::LinearV).unwrap();
        assert!((est.slope - 2.0).abs() < 1e-11);
        assert!((est.intercept - 3.0).abs() < 1e-10);
        assert!(est.residual_rms < 1e-11);
    }

    #[test]
    fn mu_requires_twelve_usable() {
        let rows: Vec<ScanRow> = (1..=11)
            .map(|i| synthetic_row(10.0 * i as f64, 0.0, 0.0))
            .collect();
        assert!(matches!(
            estimate_mu_from_rows(&rows, 1.0, Regressor::LogV),
            Err(QzetaError::InsufficientData { needed: 12, got: 11 })
        ));
    }

    #[test]
    fn spec_validation_rules() {
        let q = qp(0.5);
        let ok = ScanSpec::new(q, 2.0, TChoice::SingleLine, vec![10.0, 20.0, 30.0]);
        assert!(ok.validate().is_ok());
        let empty = ScanSpec::new(q, 2.0, TChoice::SingleLine, vec![]);
        assert!(empty.validate().is_err());
        let shuffled = ScanSpec::new(q, 2.0, TChoice::SingleLine, vec![20.0, 10.0]);
        assert!(shuffled.validate().is_err());
        let low = ScanSpec::new(q, 2.0, TChoice::SingleLine, vec![5.0, 20.0]);
        assert!(low.validate().is_err());
        let mut bad_eps = ScanSpec::new(q, 2.0, TChoice::SingleLine, vec![10.0, 20.0]);
        bad_eps.epsilon = 0.0;
        assert!(bad_eps.validate().is_err());
    }

    #[test]
    fn scan_constant_regime_short() {
        // sigma = 2, t = s-1 so Re(t) = 1: direct evaluation, O(1) regime
        let q = qp(0.5);
        let vs: Vec<f64> = (0..8).map(|i| 10.0 + 3.0 * i as f64).collect();
        let spec = ScanSpec::new(q, 2.0, TChoice::SingleLine, vs);
        let rows = scan_vertical(&spec).unwrap();
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().all(|r| r.usable()));
        assert!(rows.iter().all(|r| r.bound_log == 0.0));
        assert!(rows.windows(2).all(|w| w[0].v < w[1].v));
        let rep = check_bound(&rows, Regime::Constant).unwrap();
        assert_eq!(rep.violations, 0);
    }

    #[test]
    fn scan_skips_near_pole_ordinates() {
        // sigma = 1 on the single line: poles at v = k * 2 pi / |log q|;
        // a grid point right on an ordinate must be skipped, midpoints kept
        let q = qp(0.5);
        let p = q.pole_spacing();
        let mut spec = ScanSpec::new(
            q,
            1.0,
            TChoice::SingleLine,
            vec![1.5 * p, 2.0 * p, 2.5 * p],
        );
        spec.epsilon = 1e-3;
        let rows = scan_vertical(&spec).unwrap();
        assert_eq!(rows[0].status, RowStatus::Evaluated);
        assert_eq!(rows[1].status, RowStatus::Skipped);
        assert!(rows[1].log_abs.is_none());
        assert_eq!(rows[2].status, RowStatus::Evaluated);
    }

    #[test]
    fn scan_marks_budget_failures_and_continues() {
        let q = qp(0.5);
        let mut spec = ScanSpec::new(
            q,
            2.0,
            TChoice::SingleLine,
            (0..8).map(|i| 10.0 + i as f64).collect(),
        );
        spec.tol = Tolerance { rel_tol: 1e-10, max_terms: 3 };
        let rows = scan_vertical(&spec).unwrap();
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().all(|r| r.status == RowStatus::Failed));
        assert!(matches!(
            check_bound(&rows, Regime::Constant),
            Err(QzetaError::InsufficientData { .. })
        ));
    }

    #[test]
    fn fixed_t_scan_positive_regime() {
        // fixed t = 2: direct summation, constant regime
        let q = qp(0.5);
        let vs: Vec<f64> = (0..8).map(|i| 10.0 + 5.0 * i as f64).collect();
        let spec = ScanSpec::new(q, 0.5, TChoice::Fixed(2.0), vs);
        assert_eq!(spec.regime(), Regime::Constant);
        let rows = scan_vertical(&spec).unwrap();
        assert!(rows.iter().all(|r| r.usable()));
        let rep = check_bound(&rows, Regime::Constant).unwrap();
        assert_eq!(rep.violations, 0);
    }
}
