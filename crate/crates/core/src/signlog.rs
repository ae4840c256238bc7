//! Signed-log and log-polar scalar arithmetic.
//!
//! Products of characteristic polynomials and the contour integrands reach
//! magnitudes of order `e^{O(n)}`, far outside f64 range. Everything that
//! multiplies such factors works on (sign, ln|x|) pairs; sums are done by
//! rescaling to the running maximum exponent.

use serde::{Deserialize, Serialize};
use std::ops::{Div, Mul, MulAssign, Neg};

/// A real number stored as `sign * exp(log_mag)`.
///
/// `sign` is -1, 0 or +1; `log_mag` is meaningless when `sign == 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignLog {
    pub sign: i8,
    pub log_mag: f64,
}

impl SignLog {
    pub const ZERO: SignLog = SignLog {
        sign: 0,
        log_mag: f64::NEG_INFINITY,
    };
    pub const ONE: SignLog = SignLog {
        sign: 1,
        log_mag: 0.0,
    };

    pub fn new(sign: i8, log_mag: f64) -> Self {
        debug_assert!(sign == -1 || sign == 0 || sign == 1);
        if sign == 0 {
            Self::ZERO
        } else {
            Self { sign, log_mag }
        }
    }

    pub fn from_value(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self {
                sign: if x > 0.0 { 1 } else { -1 },
                log_mag: x.abs().ln(),
            }
        }
    }

    /// Materialize as f64; overflows to `±inf` for `log_mag > ~709`.
    pub fn value(&self) -> f64 {
        self.sign as f64 * self.log_mag.exp()
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Square root of a non-negative value.
    pub fn sqrt(&self) -> Option<SignLog> {
        match self.sign {
            0 => Some(Self::ZERO),
            1 => Some(Self::new(1, 0.5 * self.log_mag)),
            _ => None,
        }
    }

    pub fn recip(&self) -> SignLog {
        Self::new(self.sign, -self.log_mag)
    }

    /// `self / other` materialized as f64; meaningful when the two
    /// magnitudes are comparable.
    pub fn ratio(&self, other: &SignLog) -> f64 {
        (self.sign * other.sign) as f64 * (self.log_mag - other.log_mag).exp()
    }
}

impl Mul for SignLog {
    type Output = SignLog;
    fn mul(self, rhs: SignLog) -> SignLog {
        SignLog::new(self.sign * rhs.sign, self.log_mag + rhs.log_mag)
    }
}

impl MulAssign for SignLog {
    fn mul_assign(&mut self, rhs: SignLog) {
        *self = *self * rhs;
    }
}

impl Div for SignLog {
    type Output = SignLog;
    fn div(self, rhs: SignLog) -> SignLog {
        assert!(rhs.sign != 0, "division by SignLog zero");
        SignLog::new(self.sign * rhs.sign, self.log_mag - rhs.log_mag)
    }
}

impl Neg for SignLog {
    type Output = SignLog;
    fn neg(self) -> SignLog {
        SignLog::new(-self.sign, self.log_mag)
    }
}

/// Streaming mean/variance accumulator for `SignLog` values.
///
/// Keeps the running maximum log-magnitude `m` and sums of `sign*e^{l-m}`
/// and `e^{2(l-m)}`, rescaling whenever a larger magnitude arrives, so the
/// mean of values spread over hundreds of e-folds stays exact to roundoff.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignLogAccumulator {
    max_log: f64,
    sum: f64,
    sum_sq: f64,
    count: u64,
}

impl Default for SignLogAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl SignLogAccumulator {
    pub fn new() -> Self {
        Self {
            max_log: f64::NEG_INFINITY,
            sum: 0.0,
            sum_sq: 0.0,
            count: 0,
        }
    }

    pub fn push(&mut self, v: SignLog) {
        self.count += 1;
        if v.sign == 0 {
            return;
        }
        if v.log_mag > self.max_log {
            let r = (self.max_log - v.log_mag).exp(); // 0 when max_log = -inf
            self.sum *= r;
            self.sum_sq *= r * r;
            self.max_log = v.log_mag;
            self.sum += v.sign as f64;
            self.sum_sq += 1.0;
        } else {
            let d = (v.log_mag - self.max_log).exp();
            self.sum += v.sign as f64 * d;
            self.sum_sq += d * d;
        }
    }

    /// Combine two accumulators; associative and commutative up to roundoff.
    pub fn merge(&self, other: &SignLogAccumulator) -> SignLogAccumulator {
        if other.count == 0 {
            return *self;
        }
        if self.count == 0 {
            return *other;
        }
        let m = self.max_log.max(other.max_log);
        let (ra, rb) = ((self.max_log - m).exp(), (other.max_log - m).exp());
        SignLogAccumulator {
            max_log: m,
            sum: self.sum * ra + other.sum * rb,
            sum_sq: self.sum_sq * ra * ra + other.sum_sq * rb * rb,
            count: self.count + other.count,
        }
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Sum of the accumulated values.
    pub fn total(&self) -> SignLog {
        if self.count == 0 || self.sum == 0.0 {
            return SignLog::ZERO;
        }
        SignLog::new(
            if self.sum > 0.0 { 1 } else { -1 },
            self.max_log + self.sum.abs().ln(),
        )
    }

    /// Arithmetic mean of the accumulated values.
    pub fn mean(&self) -> SignLog {
        if self.count == 0 {
            return SignLog::ZERO;
        }
        self.total() * SignLog::from_value(1.0 / self.count as f64)
    }

    /// Standard error of the mean divided by |mean|, from the accumulated
    /// second moment. The common `e^{2 max_log}` scale cancels.
    pub fn rel_stderr(&self) -> f64 {
        if self.count < 2 || self.sum == 0.0 {
            return f64::INFINITY;
        }
        let n = self.count as f64;
        let mu = self.sum / n;
        let q = self.sum_sq / n;
        let var = ((q - mu * mu) * n / (n - 1.0)).max(0.0);
        (var / n).sqrt() / mu.abs()
    }
}

/// A complex number stored as `exp(log_mag + i*phase)`, phase in `(-pi, pi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_mag: f64,
    pub phase: f64,
}

impl LogComplex {
    pub fn new(log_mag: f64, phase: f64) -> Self {
        Self {
            log_mag,
            phase: wrap_phase(phase),
        }
    }

    pub fn from_complex(z: num_complex::Complex64) -> Self {
        Self {
            log_mag: z.norm().ln(),
            phase: z.arg(),
        }
    }

    pub fn value(&self) -> num_complex::Complex64 {
        num_complex::Complex64::from_polar(self.log_mag.exp(), self.phase)
    }

    pub fn mul(&self, other: &LogComplex) -> LogComplex {
        LogComplex::new(self.log_mag + other.log_mag, self.phase + other.phase)
    }

    /// `self / other` materialized as a complex f64 of moderate size.
    pub fn ratio(&self, other: &LogComplex) -> num_complex::Complex64 {
        num_complex::Complex64::from_polar(
            (self.log_mag - other.log_mag).exp(),
            self.phase - other.phase,
        )
    }

    /// Projection onto the real axis as a SignLog, together with the
    /// residual phase distance from the nearer of {0, pi}.
    pub fn to_signlog(&self) -> (SignLog, f64) {
        let c = self.phase.cos();
        let residual = if c >= 0.0 {
            self.phase.abs()
        } else {
            std::f64::consts::PI - self.phase.abs()
        };
        if self.log_mag == f64::NEG_INFINITY {
            return (SignLog::ZERO, residual);
        }
        let sl = SignLog::new(
            if c >= 0.0 { 1 } else { -1 },
            self.log_mag + c.abs().ln(),
        );
        (sl, residual)
    }
}

pub fn wrap_phase(mut p: f64) -> f64 {
    use std::f64::consts::PI;
    if p.is_finite() {
        while p > PI {
            p -= 2.0 * PI;
        }
        while p <= -PI {
            p += 2.0 * PI;
        }
    }
    p
}

/// Rescaled accumulator for sums of complex terms given as complex
/// logarithms (`re` = ln magnitude, `im` = phase). Backbone of the contour
/// quadrature sums.
#[derive(Clone, Copy, Debug)]
pub struct LogComplexAccumulator {
    max_log: f64,
    sum: num_complex::Complex64,
}

impl Default for LogComplexAccumulator {
    fn default() -> Self {
        Self::new()
    }
}

impl LogComplexAccumulator {
    pub fn new() -> Self {
        Self {
            max_log: f64::NEG_INFINITY,
            sum: num_complex::Complex64::new(0.0, 0.0),
        }
    }

    /// Add `coeff * exp(log)` where `log` is a complex logarithm.
    pub fn push(&mut self, log: num_complex::Complex64, coeff: num_complex::Complex64) {
        if coeff.re == 0.0 && coeff.im == 0.0 {
            return;
        }
        if log.re > self.max_log {
            self.sum *= (self.max_log - log.re).exp();
            self.max_log = log.re;
            self.sum += coeff * num_complex::Complex64::from_polar(1.0, log.im);
        } else {
            self.sum += coeff * num_complex::Complex64::from_polar((log.re - self.max_log).exp(), log.im);
        }
    }

    pub fn merge(&self, other: &LogComplexAccumulator) -> LogComplexAccumulator {
        if other.sum == num_complex::Complex64::new(0.0, 0.0) && other.max_log == f64::NEG_INFINITY {
            return *self;
        }
        if self.sum == num_complex::Complex64::new(0.0, 0.0) && self.max_log == f64::NEG_INFINITY {
            return *other;
        }
        let m = self.max_log.max(other.max_log);
        LogComplexAccumulator {
            max_log: m,
            sum: self.sum * (self.max_log - m).exp() + other.sum * (other.max_log - m).exp(),
        }
    }

    pub fn total(&self) -> LogComplex {
        if self.sum == num_complex::Complex64::new(0.0, 0.0) {
            return LogComplex::new(f64::NEG_INFINITY, 0.0);
        }
        LogComplex::new(self.max_log + self.sum.norm().ln(), self.sum.arg())
    }
}
