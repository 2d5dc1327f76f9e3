//! Minimal double-double arithmetic (~31 decimal digits) used as the rescue
//! precision when the continuation series cancels too many digits for plain
//! f64. Only the operations the evaluator needs are provided: field
//! arithmetic plus `exp`, `ln`, and `sin_cos` with full double-double
//! accuracy (the crates.io options audit at f64-grade on exactly these).
//!
//! Algorithms are the standard error-free transformations (two_sum /
//! two_prod via FMA) with Taylor-series elementary functions on reduced
//! arguments.

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

/// Requires |a| >= |b| (or a == 0).
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

pub const DD_EPS: f64 = 4.93e-32; // 2^-104

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    // High/low splits of the reduction constants, accurate to ~1e-33.
    pub const LN2: Dd = Dd { hi: 0.693_147_180_559_945_3, lo: 2.319_046_813_846_299_6e-17 };
    pub const PI_2: Dd = Dd { hi: 1.570_796_326_794_896_6, lo: 6.123_233_995_736_766e-17 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, b: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        let (hi, lo) = quick_two_sum(s1, s2 + t2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn sub(self, b: Dd) -> Dd {
        self.add(b.neg())
    }

    #[inline]
    pub fn mul(self, b: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, b.hi);
        let p2 = p2 + (self.hi * b.lo + self.lo * b.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, b);
        let (hi, lo) = quick_two_sum(p1, p2 + self.lo * b);
        Dd { hi, lo }
    }

    /// Long division: three quotient corrections give a full dd quotient.
    #[inline]
    pub fn div(self, b: Dd) -> Dd {
        let q1 = self.hi / b.hi;
        let r = self.sub(b.mul_f64(q1));
        let q2 = r.hi / b.hi;
        let r = r.sub(b.mul_f64(q2));
        let q3 = r.hi / b.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e }.add(Dd::from_f64(q3))
    }

    #[inline]
    pub fn div_f64(self, b: f64) -> Dd {
        self.div(Dd::from_f64(b))
    }

    #[cfg(test)]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    /// exp(x) for |x| <~ 708; reduction x = k ln2 + r, Taylor on |r| <= ln2/2.
    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / Dd::LN2.hi).round();
        let r = self.sub(Dd::LN2.mul_f64(k));
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for n in 1..=26 {
            term = term.mul(r).div_f64(n as f64);
            sum = sum.add(term);
        }
        // 2^k is exact; split across two factors to stay in range near the
        // extremes of the exponent field.
        let k = k as i32;
        let (ka, kb) = (k / 2, k - k / 2);
        let (sa, sb) = (pow2(ka), pow2(kb));
        Dd { hi: sum.hi * sa * sb, lo: sum.lo * sa * sb }
    }

    /// Natural log for x in roughly (1e-290, 1e290): one Newton step on exp
    /// from the f64 seed recovers full dd accuracy.
    pub fn ln(self) -> Dd {
        debug_assert!(self.hi > 0.0);
        let y0 = self.hi.ln();
        // r = x * exp(-y0) - 1 is O(1e-16); ln(x) = y0 + ln(1+r).
        let r = self.mul(Dd::from_f64(-y0).exp()).sub(Dd::ONE);
        let corr = r.mul(Dd::ONE.sub(r.mul_f64(0.5)));
        Dd::from_f64(y0).add(corr)
    }

    /// Simultaneous sin and cos with dd reduction mod pi/2.
    /// Reduction keeps ~1e-29 absolute accuracy up to |x| ~ 1e4, which is all
    /// the evaluator's phases require.
    pub fn sin_cos(self) -> (Dd, Dd) {
        let k = (self.hi / Dd::PI_2.hi).round();
        let r = self.sub(Dd::PI_2.mul_f64(k));
        let r2 = r.mul(r);
        let mut s = r;
        let mut c = Dd::ONE;
        let mut term_s = r;
        let mut term_c = Dd::ONE;
        for n in 1..=14 {
            let n2 = 2.0 * n as f64;
            term_c = term_c.mul(r2).div_f64(-(n2 * (n2 - 1.0)));
            c = c.add(term_c);
            term_s = term_s.mul(r2).div_f64(-(n2 * (n2 + 1.0)));
            s = s.add(term_s);
        }
        match ((k as i64) % 4 + 4) % 4 {
            0 => (s, c),
            1 => (c, s.neg()),
            2 => (s.neg(), c.neg()),
            _ => (c.neg(), s),
        }
    }
}

#[inline]
fn pow2(k: i32) -> f64 {
    f64::exp2(k as f64)
}
