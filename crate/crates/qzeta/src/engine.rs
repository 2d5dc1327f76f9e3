//! Series engines behind the public evaluators.
//!
//! Both halves of the continuation identity are generated in log form
//! (complex exponents) and folded into a scaled accumulator, so no
//! intermediate ever leaves f64 range no matter how large the terms get.
//! The whole loop is generic over the working real scalar: the first pass
//! runs in f64; if the recorded max-term/sum gap shows too many digits
//! cancelled, the caller reruns it in double-double.

use crate::scalar::{Cplx, Real};
use num_complex::Complex64;

/// value = exp(scale) * z, with z kept within a few hundred e-folds of 1.
struct ScaledAcc<R: Real> {
    scale: f64,
    z: Cplx<R>,
}

impl<R: Real> ScaledAcc<R> {
    fn new() -> Self {
        ScaledAcc { scale: f64::NEG_INFINITY, z: Cplx::new(R::from_f64(0.0), R::from_f64(0.0)) }
    }

    /// Add pre * exp(w). Returns the term's log-magnitude (f64, for
    /// diagnostics and truncation control).
    fn add_term(&mut self, pre: Cplx<R>, w: Cplx<R>) -> f64 {
        let pre_n2 = pre.norm_sqr_f64();
        if pre_n2 == 0.0 {
            return f64::NEG_INFINITY;
        }
        let lm = w.re.to_f64() + 0.5 * pre_n2.ln();
        if !lm.is_finite() && lm < 0.0 {
            return f64::NEG_INFINITY;
        }
        if self.scale == f64::NEG_INFINITY {
            self.scale = lm;
        } else if lm > self.scale + 1.0 {
            // raise the scale so the incoming term stays O(1)
            let shrink = R::from_f64(self.scale - lm).exp();
            self.z = self.z.mul_real(shrink);
            self.scale = lm;
        }
        let term = pre.mul(Cplx::new(w.re.sub(R::from_f64(self.scale)), w.im).exp());
        self.z = self.z.add(term);
        // keep the stored pair in range if the running sum drifts far from
        // the scale in either direction
        let n2 = self.z.norm_sqr_f64();
        if n2 > 1e240 || (n2 > 0.0 && n2 < 1e-240) {
            let l = 0.5 * n2.ln();
            self.scale += l;
            self.z = self.z.mul_real(R::from_f64(-l).exp());
        }
        lm
    }

    fn log_norm(&self) -> f64 {
        let n2 = self.z.norm_sqr_f64();
        if n2 == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.scale + 0.5 * n2.ln()
        }
    }

    fn arg(&self) -> f64 {
        self.z.im.to_f64().atan2(self.z.re.to_f64())
    }
}

pub(crate) struct EngineOut {
    /// ln |(1-q)^s (finite part + r-series)|
    pub log_abs: f64,
    /// argument of the same, not yet normalized
    pub arg: f64,
    pub terms: u64,
    /// rigorous truncation bound relative to the accumulated sum
    pub tail_rel: f64,
    /// largest term log-magnitude minus sum log-magnitude: e-folds cancelled
    pub cancellation: f64,
}

#[derive(Debug)]
pub(crate) enum EngineFail {
    Budget { terms: u64 },
    /// running sum cancelled to exactly zero at this precision
    TotalCancellation,
}

/// One pass of the continuation identity
///   (1-q)^{-s} zeta_q(s,t) = sum_{m<N} q^{mt}/(1-q^m)^s
///                          + sum_{r>=0} binom(r+s-1,r) q^{N(t+r)}/(1-q^{t+r})
/// at fixed N, in scalar precision R.
///
/// `margin` must be a verified lower bound on inf_{r>=0} |1 - q^{t+r}|.
pub(crate) fn continued_pass<R: Real>(
    q: f64,
    s: Complex64,
    t: Complex64,
    n: u32,
    rel_tol: f64,
    max_terms: u64,
    margin: f64,
) -> Result<EngineOut, EngineFail> {
    let lnq_f = q.ln();
    let lnq = R::from_f64(q).ln();
    let s_r = Cplx::<R>::from_c64(s);
    let t_r = Cplx::<R>::from_c64(t);
    let t_lnq = t_r.mul_real(lnq);
    let s_norm = s.norm();
    let one = Cplx::new(R::from_f64(1.0), R::from_f64(0.0));

    let mut acc = ScaledAcc::<R>::new();
    let mut max_lm = f64::NEG_INFINITY;
    let mut terms: u64 = 0;

    // finite part: m = 1 .. N-1
    let mut qm = R::from_f64(1.0);
    for m in 1..n as u64 {
        qm = qm.mul(R::from_f64(q));
        if m % 256 == 0 {
            qm = lnq.mul_f64(m as f64).exp();
        }
        let ln_one_minus_qm = R::from_f64(1.0).sub(qm).ln();
        let w = t_lnq.scale(m as f64).sub(s_r.mul_real(ln_one_minus_qm));
        let lm = acc.add_term(one, w);
        max_lm = max_lm.max(lm);
        terms += 1;
        if terms >= max_terms {
            return Err(EngineFail::Budget { terms });
        }
    }

    // r-series with the binomial Pascal recurrence carried as a
    // unit-magnitude complex times a separate log-magnitude.
    let n_f = n as f64;
    let qn_f = (n_f * lnq_f).exp();
    let mut b_unit = one;
    let mut b_log = R::from_f64(0.0);
    let mut u = t_lnq.exp(); // q^(t+r), advanced multiplicatively
    if !u.to_c64().is_finite() {
        return Err(EngineFail::TotalCancellation);
    }
    let ln_rel_tol = rel_tol.ln();
    let tail_rel;
    let mut r: u64 = 0;
    loop {
        let den = one.sub(u);
        let pre = b_unit.div(den);
        let wr = t_r.add(Cplx::new(R::from_f64(r as f64), R::from_f64(0.0)))
            .mul_real(lnq)
            .scale(n_f);
        let w = Cplx::new(wr.re.add(b_log), wr.im);
        let t_log = acc.add_term(pre, w);
        max_lm = max_lm.max(t_log);
        terms += 1;
        if terms >= max_terms {
            return Err(EngineFail::Budget { terms });
        }

        // truncation control: |term_{r+1}/term_r| <= q^N (r+|s|)/(r+1)
        //   * (1+q^{Re t + r}) / (1 - q^{Re t + r + 1}),
        // every factor non-increasing in r once q^{Re t + r + 1} <= 1/2, so
        // the current value majorizes the whole remaining ratio sequence and
        // the tail is below the geometric series it starts.
        let qmod_cur = ((t.re + r as f64) * lnq_f).exp();
        let qmod_next = qmod_cur * q;
        if r >= 2 && qmod_next <= 0.5 {
            let growth = ((r as f64 + s_norm) / (r as f64 + 1.0)).max(1.0);
            let rho = qn_f * growth * (1.0 + qmod_cur) / (1.0 - qmod_next).max(margin);
            if rho < 1.0 {
                let tail_log = t_log + (rho / (1.0 - rho)).ln();
                let acc_log = acc.log_norm();
                if acc_log > f64::NEG_INFINITY && tail_log <= ln_rel_tol + acc_log {
                    tail_rel = (tail_log - acc_log).exp();
                    break;
                }
            }
        }

        // advance binomial and q^(t+r); divide by the exact integer r+1 in
        // working precision (an f64 reciprocal would cap every later term at
        // f64 accuracy)
        let step = s_r.add(Cplx::new(R::from_f64(r as f64), R::from_f64(0.0)))
            .div_real(R::from_f64(r as f64 + 1.0));
        b_unit = b_unit.mul(step);
        let bn2 = b_unit.norm_sqr_f64();
        if bn2 == 0.0 {
            // integer s collapse: all remaining coefficients are exactly zero
            tail_rel = 0.0;
            break;
        }
        if !(1e-4..=1e4).contains(&bn2) {
            let l = 0.5 * bn2.ln();
            b_log = b_log.add(R::from_f64(l));
            b_unit = b_unit.mul_real(R::from_f64(-l).exp());
        }
        r += 1;
        u = if r % 256 == 0 {
            t_r.add(Cplx::new(R::from_f64(r as f64), R::from_f64(0.0))).mul_real(lnq).exp()
        } else {
            u.mul_real(R::from_f64(q))
        };
    }

    let sum_log = acc.log_norm();
    if sum_log == f64::NEG_INFINITY {
        return Err(EngineFail::TotalCancellation);
    }
    // prefactor (1-q)^s
    let pref = s_r.mul_real(R::from_f64(1.0 - q).ln());
    Ok(EngineOut {
        log_abs: sum_log + pref.re.to_f64(),
        arg: acc.arg() + pref.im.to_f64(),
        terms,
        tail_rel,
        cancellation: (max_lm - sum_log).max(0.0),
    })
}

pub(crate) struct DirectOut {
    pub value: Complex64,
    pub terms: u64,
    /// rigorous absolute bound on the dropped tail
    pub tail_abs: f64,
}

/// Direct summation of sum_{m>=1} q^{mt} / [m]_q^s, valid for Re(t) > 0.
///
/// The geometric tail bound
///   sum_{m>M} q^{m Re t} sup_{m'>M} [m']^{-sigma}
///     <= q^{(M+1) Re t}/(1-q^{Re t}) * max([M+1]^{-sigma}, (1-q)^{sigma})
/// covers both signs of sigma ([m] increases to 1/(1-q)).
pub(crate) fn direct_pass(
    q: f64,
    s: Complex64,
    t: Complex64,
    rel_tol: f64,
    max_terms: u64,
) -> Result<DirectOut, EngineFail> {
    let lnq = q.ln();
    let ln_one_minus_q = (1.0 - q).ln();
    let sigma = s.re;
    let ret = t.re;
    let q_ret = (ret * lnq).exp();

    let mut acc = Complex64::new(0.0, 0.0);
    let mut comp = Complex64::new(0.0, 0.0); // Kahan compensation
    let mut m: u64 = 0;
    loop {
        m += 1;
        if m > max_terms {
            return Err(EngineFail::Budget { terms: m - 1 });
        }
        let mf = m as f64;
        let qm = (mf * lnq).exp();
        let ln_qint = (-qm).ln_1p() - ln_one_minus_q;
        let term = (t * (mf * lnq) - s * ln_qint).exp();
        let y = term - comp;
        let tmp = acc + y;
        comp = (tmp - acc) - y;
        acc = tmp;

        // tail after m terms
        let ln_qint_next = (-((mf + 1.0) * lnq).exp()).ln_1p() - ln_one_minus_q;
        let sup = (-sigma * ln_qint_next).exp().max((sigma * ln_one_minus_q).exp());
        let tail = ((mf + 1.0) * ret * lnq).exp() / (1.0 - q_ret) * sup;
        if tail <= rel_tol * acc.norm() && m >= 2 {
            return Ok(DirectOut { value: acc, terms: m, tail_abs: tail });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dd::Dd;

    #[test]
    fn scaled_acc_handles_huge_terms() {
        let mut acc = ScaledAcc::<f64>::new();
        let one = Cplx::new(1.0, 0.0);
        // two terms of log-magnitude ~2000 and one tiny one
        acc.add_term(one, Cplx::new(2000.0, 0.5));
        acc.add_term(one, Cplx::new(2000.0, 0.5));
        acc.add_term(one, Cplx::new(-2000.0, 0.0));
        let expect = 2000.0 + 2.0f64.ln();
        assert!((acc.log_norm() - expect).abs() < 1e-12);
        assert!((acc.arg() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn scaled_acc_tracks_cancellation_to_zero() {
        let mut acc = ScaledAcc::<f64>::new();
        let one = Cplx::new(1.0, 0.0);
        acc.add_term(one, Cplx::new(100.0, 0.0));
        acc.add_term(one.scale(-1.0), Cplx::new(100.0, 0.0));
        assert_eq!(acc.log_norm(), f64::NEG_INFINITY);
    }

    #[test]
    fn passes_agree_between_f64_and_dd() {
        // benign parameters: both precisions must match to f64 accuracy
        let q = 0.5;
        let s = Complex64::new(2.0, 5.0);
        let t = Complex64::new(1.0, 0.0);
        let a = continued_pass::<f64>(q, s, t, 5, 1e-12, 1 << 20, 0.25).unwrap();
        let b = continued_pass::<Dd>(q, s, t, 5, 1e-12, 1 << 20, 0.25).unwrap();
        assert!((a.log_abs - b.log_abs).abs() < 1e-12);
        assert!((a.arg - b.arg).abs() < 1e-12);
    }
}
