//! Adaptive Simpson quadrature for smooth 1-d integrands.

use num_complex::Complex64;

trait Integrand {
    type Value: Copy;
    fn zero() -> Self::Value;
    fn add(a: Self::Value, b: Self::Value) -> Self::Value;
    fn sub(a: Self::Value, b: Self::Value) -> Self::Value;
    fn scale(a: Self::Value, s: f64) -> Self::Value;
    fn norm(a: Self::Value) -> f64;
}

struct RealI;
impl Integrand for RealI {
    type Value = f64;
    fn zero() -> f64 {
        0.0
    }
    fn add(a: f64, b: f64) -> f64 {
        a + b
    }
    fn sub(a: f64, b: f64) -> f64 {
        a - b
    }
    fn scale(a: f64, s: f64) -> f64 {
        a * s
    }
    fn norm(a: f64) -> f64 {
        a.abs()
    }
}

struct ComplexI;
impl Integrand for ComplexI {
    type Value = Complex64;
    fn zero() -> Complex64 {
        Complex64::new(0.0, 0.0)
    }
    fn add(a: Complex64, b: Complex64) -> Complex64 {
        a + b
    }
    fn sub(a: Complex64, b: Complex64) -> Complex64 {
        a - b
    }
    fn scale(a: Complex64, s: f64) -> Complex64 {
        a * s
    }
    fn norm(a: Complex64) -> f64 {
        a.norm()
    }
}

fn simpson_step<I: Integrand>(
    f: &impl Fn(f64) -> I::Value,
    a: f64,
    fa: I::Value,
    b: f64,
    fb: I::Value,
    fm: I::Value,
    whole: I::Value,
    tol: f64,
    depth: u32,
) -> I::Value {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let h6 = (b - a) / 12.0;
    let left = I::scale(I::add(I::add(fa, I::scale(flm, 4.0)), fm), h6);
    let right = I::scale(I::add(I::add(fm, I::scale(frm, 4.0)), fb), h6);
    let both = I::add(left, right);
    let err = I::norm(I::sub(both, whole));
    if depth == 0 || err <= 15.0 * tol {
        // Richardson extrapolation of the two Simpson estimates
        I::add(both, I::scale(I::sub(both, whole), 1.0 / 15.0))
    } else {
        let l = simpson_step::<I>(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1);
        let r = simpson_step::<I>(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
        I::add(l, r)
    }
}

fn integrate<I: Integrand>(f: impl Fn(f64) -> I::Value, a: f64, b: f64, tol: f64) -> I::Value {
    if a == b {
        return I::zero();
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = I::scale(
        I::add(I::add(fa, I::scale(fm, 4.0)), fb),
        (b - a) / 6.0,
    );
    simpson_step::<I>(&f, a, fa, b, fb, fm, whole, tol, 48)
}

/// Integrate a smooth real function over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    integrate::<RealI>(f, a, b, tol)
}

/// Complex-valued variant used by the oscillatory Airy ray integral.
pub fn adaptive_simpson_c64(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    tol: f64,
) -> Complex64 {
    integrate::<ComplexI>(f, a, b, tol)
}
