//! Shared, implementation-independent oracles for the integration tests.
//!
//! Everything here evaluates defining integrals directly (composite Simpson
//! with refinement, power-series Bessel), deliberately sharing no code with
//! the library's own numerics.

#![allow(dead_code)]

/// Composite Simpson on `panels` (even) subintervals.
fn simpson_fixed<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Refines composite Simpson until two successive panel counts agree.
pub fn integrate_oracle<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    let mut panels = 64;
    let mut prev = simpson_fixed(&f, a, b, panels);
    loop {
        panels *= 2;
        let next = simpson_fixed(&f, a, b, panels);
        if (next - prev).abs() <= rel_tol * next.abs().max(1e-300) || panels >= 1 << 22 {
            return next;
        }
        prev = next;
    }
}

/// Exponentially scaled modified Bessel function I0(x) e^{-x} via the
/// all-positive power series of I0.
pub fn bessel_i0_scaled(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = 0u32;
    while term > sum * 1e-18 {
        k += 1;
        term *= q / (k as f64 * k as f64);
        sum += term;
    }
    sum * (-x).exp()
}

/// Marcum-Q from its defining integral:
/// Q1(a, b) = int_b^inf t e^{-(t^2+a^2)/2} I0(a t) dt,
/// evaluated in the overflow-safe form t i0e(a t) e^{-(t-a)^2/2}.
pub fn marcum_q1_oracle(a: f64, b: f64) -> f64 {
    let hi = (a + 45.0).max(b + 1.0);
    if b >= hi {
        return 0.0;
    }
    let val = integrate_oracle(
        |t| t * bessel_i0_scaled(a * t) * (-0.5 * (t - a) * (t - a)).exp(),
        b,
        hi,
        1e-13,
    );
    val.clamp(0.0, 1.0)
}

/// Lower incomplete gamma from its defining integral
/// int_0^z t^{s-1} e^{-t} dt.
pub fn lower_inc_gamma_oracle(s: f64, z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    integrate_oracle(|t| t.powf(s - 1.0) * (-t).exp(), 0.0, z, 1e-13)
}
