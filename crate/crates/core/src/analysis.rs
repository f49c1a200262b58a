//! Closed-form and approximate distributions: moment matching of the
//! legitimate SNR, conditional and aggregate eavesdropper CDFs, the I(x)
//! hemisphere integrals (adaptive quadrature and truncated series), and the
//! ergodic secrecy capacity.
//!
//! Conventions shared by every CDF here:
//!
//! * the legitimate SNR is moment-matched to a Gamma law,
//! * the best-eavesdropper CDF is the Poisson-process void functional
//!   exp(-2 pi rho_S I(x)) over the hemisphere,
//! * capacities are in bits per channel use.

use std::f64::consts::PI;
use std::fmt;

use crate::geometry::SystemParams;
use crate::quad::adaptive_simpson;
use crate::specfun::{
    binomial, gauss_chebyshev_nodes, lower_inc_gamma, marcum_q1, reg_lower_gamma, Truncation,
};

/// Relative tolerance of the adaptive quadratures in this module.
const QUAD_REL_TOL: f64 = 1e-8;

/// Below x = RHO_FLOOR * rho_lin the truncated series is bypassed in favor
/// of the quadrature path: the (x/rho)^(-3/alpha - l) factors blow up while
/// the incomplete gammas vanish, and the product loses all precision.
const SERIES_X_FLOOR: f64 = 1e-12;

/// Errors from analysis-level operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    /// Argument outside the operation's domain.
    #[error("argument outside operation domain")]
    Domain,
    /// Moment set implies non-positive variance; no Gamma fit exists.
    #[error("degenerate variance: second moment does not exceed squared mean")]
    DegenerateVariance,
}

/// First and second moments of the coherent channel-power sum, together
/// with the combinatorial constants of the closed-form expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSet {
    pub m1: f64,
    pub m2: f64,
    pub a1: f64,
    pub a2: f64,
    pub b1: f64,
    pub b2: f64,
    pub b3: f64,
    pub b4: f64,
}

/// Moment-matched Gamma fit: shape * scale = mean, shape * scale^2 = var.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaApprox {
    pub shape: f64,
    pub scale: f64,
}

/// A named, evaluable SNR distribution function.
///
/// Wraps analytical expressions and empirical CDFs behind one immutable,
/// thread-safe handle.
pub struct SnrCdf {
    label: String,
    eval: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl SnrCdf {
    pub fn new(label: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self { label: label.into(), eval: Box::new(eval) }
    }

    /// CDF value at `x`, clamped to [0, 1].
    pub fn eval(&self, x: f64) -> f64 {
        (self.eval)(x).clamp(0.0, 1.0)
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for SnrCdf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SnrCdf").field("label", &self.label).finish()
    }
}

/// Integration route for the single-antenna best-eavesdropper CDF.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EveSingleMethod {
    /// Truncated triple series of the hemisphere integral.
    Series,
    /// Adaptive quadrature of the exact Marcum-Q integrand.
    Quadrature,
}

/// Integration route for the multi-antenna best-eavesdropper CDF.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EveMultiMethod {
    /// Two-term incomplete-gamma closed form.
    Closed,
    /// Adaptive quadrature of the exponential integrand.
    Quadrature,
}

// ---------------------------------------------------------------------------
// Legitimate link, single antenna
// ---------------------------------------------------------------------------

/// Moments of Z = (sum_i |g_i||h_i|)^2 over N Rayleigh product pairs:
/// m1 = a1 N + a2 N(N-1),
/// m2 = b1 N(N-1)(N-2)(N-3) + b2 N(N-1)(2N-1) + b3 N^2 + b4 N.
pub fn z_moments(n_ris: usize) -> Result<MomentSet, AnalysisError> {
    if n_ris == 0 {
        return Err(AnalysisError::Domain);
    }
    let n = n_ris as f64;
    let (a1, a2) = (1.0, PI * PI / 16.0);
    let (b1, b2, b3, b4) = (PI.powi(4) / 256.0, 3.0 * PI * PI / 16.0, 3.0, 1.0);
    let m1 = a1 * n + a2 * n * (n - 1.0);
    let m2 = b1 * n * (n - 1.0) * (n - 2.0) * (n - 3.0)
        + b2 * n * (n - 1.0) * (2.0 * n - 1.0)
        + b3 * n * n
        + b4 * n;
    Ok(MomentSet { m1, m2, a1, a2, b1, b2, b3, b4 })
}

/// Gamma fit of a nonnegative variable from its first two moments.
pub fn gamma_approx(m: &MomentSet) -> Result<GammaApprox, AnalysisError> {
    let var = m.m2 - m.m1 * m.m1;
    let fittable = var > 0.0 && m.m1 > 0.0;
    if !fittable {
        return Err(AnalysisError::DegenerateVariance);
    }
    Ok(GammaApprox { shape: m.m1 * m.m1 / var, scale: var / m.m1 })
}

/// CDF of the legitimate SNR under optimal phases:
/// F(x) = P(k_hat, x / (rho (D d_B)^-alpha theta_hat)) (regularized).
pub fn cdf_bob_single(params: &SystemParams, ga: &GammaApprox) -> SnrCdf {
    let shape = ga.shape;
    let scale = params.rho_lin() * params.bob_pathloss() * ga.scale;
    SnrCdf::new("bob-single-gamma", move |x| {
        if x <= 0.0 {
            0.0
        } else {
            reg_lower_gamma(shape, x / scale).expect("valid gamma arguments")
        }
    })
}

// ---------------------------------------------------------------------------
// Eavesdropping link, single antenna
// ---------------------------------------------------------------------------

/// Marcum-Q arguments of the conditional eavesdropper CDF at radius r:
/// a = sqrt(2 mu)/sigma, b = sqrt(2x)/(sqrt(rho) sigma) with
/// mu = r^-alpha beta2/(beta2+1) and sigma^2 = N/D^{2 alpha} + r^-alpha/(beta2+1).
///
/// `a` is computed in the r^alpha-multiplied form, which stays finite as
/// r -> 0 where mu/sigma^2 is an inf/inf expression.
fn eve_cond_args(x: f64, r: f64, params: &SystemParams) -> (f64, f64) {
    let alpha = params.pathloss_exp;
    let beta2 = params.rician_bs_eve;
    let n = params.n_ris as f64;
    let d = params.dist_bs_ris;
    let a = (2.0 * beta2 / (beta2 + 1.0)).sqrt()
        / (n * (r / (d * d)).powf(alpha) + 1.0 / (beta2 + 1.0)).sqrt();
    let sigma_sq = n / d.powf(2.0 * alpha) + r.powf(-alpha) / (beta2 + 1.0);
    let b = (2.0 * x / (params.rho_lin() * sigma_sq)).sqrt();
    (a, b)
}

/// Conditional CDF of one eavesdropper's SNR at radius r (far-RIS
/// approximation): 1 - Q1(sqrt(2 mu)/sigma, sqrt(2x)/(sqrt(rho) sigma)).
pub fn cdf_eve_cond_single(x: f64, r: f64, params: &SystemParams) -> Result<f64, AnalysisError> {
    let in_domain = r > 0.0 && x >= 0.0;
    if !in_domain {
        return Err(AnalysisError::Domain);
    }
    let (a, b) = eve_cond_args(x, r, params);
    let q = marcum_q1(a, b, &Truncation::default()).map_err(|_| AnalysisError::Domain)?;
    Ok((1.0 - q).clamp(0.0, 1.0))
}

/// Hemisphere integral I(x) = ∫₀^R r² Q₁(a(r), b(r, x)) dr by adaptive
/// quadrature. I(0) = R³/3 since the integrand is identically one there.
pub fn i_single_quadrature(x: f64, params: &SystemParams) -> f64 {
    let radius = params.radius;
    if x <= 0.0 {
        return radius.powi(3) / 3.0;
    }
    let tr = Truncation::default();
    adaptive_simpson(
        |r| {
            let (a, b) = eve_cond_args(x, r, params);
            r * r * marcum_q1(a, b, &tr).expect("valid marcum arguments")
        },
        0.0,
        radius,
        QUAD_REL_TOL,
    )
}

/// Truncated series form of I(x): triple sum over (n <= n_bar, k <= n,
/// l <= k) of
/// e^{-beta2}/(alpha (beta2+1)^{3/alpha}) beta2^n/(n! k!) C(k,l)
/// (-N/D^{2 alpha})^l (x/rho)^{-3/alpha-l} gamma(k+l+3/alpha, (beta2+1)(x/rho)R^alpha).
///
/// Only the outer sum is truncated; the inner sums are complete. For
/// x below `SERIES_X_FLOOR * rho_lin` the quadrature path is used instead,
/// and the result is clamped to be nonnegative.
pub fn i_single_series(x: f64, params: &SystemParams, trunc: &Truncation) -> f64 {
    let rho = params.rho_lin();
    if x <= SERIES_X_FLOOR * rho {
        return i_single_quadrature(x, params);
    }
    let alpha = params.pathloss_exp;
    let beta2 = params.rician_bs_eve;
    let n_over = params.n_ris as f64 / params.dist_bs_ris.powf(2.0 * alpha);
    let xr = x / rho;
    let z = (beta2 + 1.0) * xr * params.radius.powf(alpha);
    let prefactor = (-beta2).exp() / (alpha * (beta2 + 1.0).powf(3.0 / alpha));

    // gamma(k + l + 3/alpha, z) depends only on k + l; precompute.
    let max_kl = 2 * trunc.n_bar;
    let gammas: Vec<f64> = (0..=max_kl)
        .map(|m| lower_inc_gamma(m as f64 + 3.0 / alpha, z).expect("valid gamma arguments"))
        .collect();

    let mut total = 0.0;
    let mut coef_n = 1.0; // beta2^n / n!
    for n in 0..=trunc.n_bar {
        if n > 0 {
            coef_n *= beta2 / n as f64;
        }
        let mut coef_nk = coef_n; // beta2^n / (n! k!)
        for k in 0..=n {
            if k > 0 {
                coef_nk /= k as f64;
            }
            let mut pow_l = 1.0; // (-N/D^{2 alpha})^l
            for l in 0..=k {
                total += coef_nk
                    * binomial(k, l)
                    * pow_l
                    * xr.powf(-3.0 / alpha - l as f64)
                    * gammas[k + l];
                pow_l *= -n_over;
            }
        }
    }
    (prefactor * total).max(0.0)
}

/// CDF of the strongest eavesdropper's SNR in single-antenna mode:
/// F(x) = exp(-2 pi rho_S I(x)).
pub fn cdf_eve_single(
    params: &SystemParams,
    trunc: &Truncation,
    method: EveSingleMethod,
) -> SnrCdf {
    let params = params.clone();
    let trunc = *trunc;
    let density = params.eve_density;
    let label = match method {
        EveSingleMethod::Series => "eve-single-series",
        EveSingleMethod::Quadrature => "eve-single-quadrature",
    };
    SnrCdf::new(label, move |x| {
        let x = x.max(0.0);
        let integral = match method {
            EveSingleMethod::Series => i_single_series(x, &params, &trunc),
            EveSingleMethod::Quadrature => i_single_quadrature(x, &params),
        };
        (-2.0 * PI * density * integral).exp()
    })
}

// ---------------------------------------------------------------------------
// Multi-antenna approximations
// ---------------------------------------------------------------------------

/// CDF of the legitimate SNR with K antennas, random phases and MRT:
/// F(x) = P(K, x / (N rho (D d_B)^-alpha)) (regularized).
pub fn cdf_bob_multi(params: &SystemParams) -> SnrCdf {
    let shape = params.n_ant as f64;
    let scale = params.n_ris as f64 * params.rho_lin() * params.bob_pathloss();
    SnrCdf::new("bob-multi-gamma", move |x| {
        if x <= 0.0 {
            0.0
        } else {
            reg_lower_gamma(shape, x / scale).expect("valid gamma arguments")
        }
    })
}

/// Closed two-term form of the multi-antenna hemisphere integral:
/// (1/alpha)(x/rho)^{-3/alpha} gamma(3/alpha, z*)
/// + (3/alpha)(3/alpha + 1)(N/D^{2 alpha})(x/rho)^{-3/alpha-1} gamma(3/alpha + 1, z*)
///   with z* = x / (rho (R^-alpha + N/D^{2 alpha})). I(0) = R³/3 by continuity.
pub fn i_multi_closed(x: f64, params: &SystemParams) -> f64 {
    let radius = params.radius;
    if x <= 0.0 {
        return radius.powi(3) / 3.0;
    }
    let rho = params.rho_lin();
    let alpha = params.pathloss_exp;
    let n_over = params.n_ris as f64 / params.dist_bs_ris.powf(2.0 * alpha);
    let xr = x / rho;
    let z = x / (rho * (radius.powf(-alpha) + n_over));
    let s = 3.0 / alpha;
    let first = (1.0 / alpha)
        * xr.powf(-s)
        * lower_inc_gamma(s, z).expect("valid gamma arguments");
    let second = s
        * (s + 1.0)
        * n_over
        * xr.powf(-s - 1.0)
        * lower_inc_gamma(s + 1.0, z).expect("valid gamma arguments");
    (first + second).max(0.0)
}

/// Adaptive quadrature of the multi-antenna hemisphere integrand
/// ∫₀^R r² exp(-x / (rho (N/D^{2 alpha} + r^-alpha))) dr.
pub fn i_multi_quadrature(x: f64, params: &SystemParams) -> f64 {
    let radius = params.radius;
    if x <= 0.0 {
        return radius.powi(3) / 3.0;
    }
    let rho = params.rho_lin();
    let alpha = params.pathloss_exp;
    let n_over = params.n_ris as f64 / params.dist_bs_ris.powf(2.0 * alpha);
    adaptive_simpson(
        |r| r * r * (-x / (rho * (n_over + r.powf(-alpha)))).exp(),
        0.0,
        radius,
        QUAD_REL_TOL,
    )
}

/// CDF of the strongest eavesdropper's SNR in multi-antenna mode:
/// F(x) = exp(-2 pi rho_S I(x)).
pub fn cdf_eve_multi(params: &SystemParams, method: EveMultiMethod) -> SnrCdf {
    let params = params.clone();
    let density = params.eve_density;
    let label = match method {
        EveMultiMethod::Closed => "eve-multi-closed",
        EveMultiMethod::Quadrature => "eve-multi-quadrature",
    };
    SnrCdf::new(label, move |x| {
        let x = x.max(0.0);
        let integral = match method {
            EveMultiMethod::Closed => i_multi_closed(x, &params),
            EveMultiMethod::Quadrature => i_multi_quadrature(x, &params),
        };
        (-2.0 * PI * density * integral).exp()
    })
}

// ---------------------------------------------------------------------------
// Ergodic secrecy capacity
// ---------------------------------------------------------------------------

/// Ergodic secrecy capacity in bits per channel use:
/// C_s = (1/ln 2) [ ∫₀^∞ Fbar_B/(1+x) dx - ∫₀^∞ Fbar_B Fbar_E/(1+x) dx ],
/// both integrals mapped onto [-1, 1] by x = tan(pi (t+1)/4) and evaluated
/// with the `trunc.w_nodes`-point Gauss-Chebyshev rule. The result is
/// clamped to be nonnegative.
pub fn ergodic_secrecy_capacity(bob: &SnrCdf, eve: &SnrCdf, trunc: &Truncation) -> f64 {
    let nodes = gauss_chebyshev_nodes(trunc.w_nodes).expect("w_nodes >= 1");
    let mut term1 = 0.0;
    let mut term2 = 0.0;
    for (t, sqrt_factor) in nodes {
        let angle = PI / 4.0 * (t + 1.0);
        let nu = angle.tan();
        let sec_sq = 1.0 / (angle.cos() * angle.cos());
        let weight = sqrt_factor * sec_sq / (1.0 + nu);
        let fbar_b = 1.0 - bob.eval(nu);
        let fbar_e = 1.0 - eve.eval(nu);
        term1 += weight * fbar_b;
        term2 += weight * fbar_b * fbar_e;
    }
    let scale = PI * PI / (4.0 * trunc.w_nodes as f64);
    ((term1 - term2) * scale / std::f64::consts::LN_2).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn defaults() -> SystemParams {
        SystemParams::default()
    }

    fn default_gamma() -> GammaApprox {
        gamma_approx(&z_moments(100).unwrap()).unwrap()
    }

    fn assert_monotone_cdf(cdf: &SnrCdf) {
        let mut prev = -1.0;
        assert!(cdf.eval(0.0) >= 0.0);
        for i in 0..200 {
            let x = 10f64.powf(-6.0 + 12.0 * i as f64 / 199.0);
            let f = cdf.eval(x);
            assert!((0.0..=1.0).contains(&f));
            assert!(f >= prev - 1e-12, "{} not monotone at {x}", cdf.label());
            prev = f;
        }
        assert!(cdf.eval(1e12) > 1.0 - 1e-6 || cdf.eval(1e12) >= prev);
    }

    #[test]
    fn z_moments_small_n() {
        let m = z_moments(1).unwrap();
        assert!((m.m1 - 1.0).abs() < 1e-15);
        assert!((m.m2 - 4.0).abs() < 1e-15);
        let m = z_moments(2).unwrap();
        assert!((m.m1 - (2.0 + PI * PI / 8.0)).abs() < 1e-12);
        assert!((m.m2 - (18.0 * PI * PI / 16.0 + 14.0)).abs() < 1e-12);
        assert_eq!(z_moments(0), Err(AnalysisError::Domain));
    }

    #[test]
    fn moment_constants_pinned() {
        let m = z_moments(4).unwrap();
        assert_eq!(m.a1, 1.0);
        assert_eq!(m.a2, PI * PI / 16.0);
        assert_eq!(m.b1, PI.powi(4) / 256.0);
        assert_eq!(m.b2, 3.0 * PI * PI / 16.0);
        assert_eq!(m.b3, 3.0);
        assert_eq!(m.b4, 1.0);
        assert!(m.m2 > m.m1 * m.m1);
    }

    #[test]
    fn gamma_approx_examples() {
        let ga = gamma_approx(&MomentSet {
            m1: 1.0, m2: 2.0, a1: 0.0, a2: 0.0, b1: 0.0, b2: 0.0, b3: 0.0, b4: 0.0,
        })
        .unwrap();
        assert!((ga.shape - 1.0).abs() < 1e-15 && (ga.scale - 1.0).abs() < 1e-15);

        let ga = gamma_approx(&MomentSet {
            m1: 4.0, m2: 24.0, a1: 0.0, a2: 0.0, b1: 0.0, b2: 0.0, b3: 0.0, b4: 0.0,
        })
        .unwrap();
        assert!((ga.shape - 2.0).abs() < 1e-15 && (ga.scale - 2.0).abs() < 1e-15);

        // Inverse consistency at N = 100.
        let m = z_moments(100).unwrap();
        let ga = gamma_approx(&m).unwrap();
        assert!((ga.shape * ga.scale - m.m1).abs() < 1e-12 * m.m1);
        let var = m.m2 - m.m1 * m.m1;
        assert!((ga.shape * ga.scale * ga.scale - var).abs() < 1e-12 * var);

        let degenerate = MomentSet {
            m1: 2.0, m2: 4.0, a1: 0.0, a2: 0.0, b1: 0.0, b2: 0.0, b3: 0.0, b4: 0.0,
        };
        assert_eq!(gamma_approx(&degenerate), Err(AnalysisError::DegenerateVariance));
    }

    #[test]
    fn bob_single_cdf_limits() {
        let p = defaults();
        let cdf = cdf_bob_single(&p, &default_gamma());
        assert_eq!(cdf.eval(0.0), 0.0);
        assert!(cdf.eval(1e12) >= 0.999999);
        assert_monotone_cdf(&cdf);
    }

    #[test]
    fn eve_cond_single_limits() {
        let p = defaults();
        assert_eq!(cdf_eve_cond_single(0.0, 10.0, &p).unwrap(), 0.0);
        assert!((cdf_eve_cond_single(1e12, 10.0, &p).unwrap() - 1.0).abs() < 1e-9);
        assert_eq!(cdf_eve_cond_single(1.0, 0.0, &p), Err(AnalysisError::Domain));
        assert_eq!(cdf_eve_cond_single(-1.0, 10.0, &p), Err(AnalysisError::Domain));
    }

    #[test]
    fn i_single_quadrature_limits() {
        let p = defaults();
        let third = p.radius.powi(3) / 3.0;
        assert_eq!(i_single_quadrature(0.0, &p), third);
        assert!(i_single_quadrature(1e12, &p) <= 1e-6 * third);
        let at_rho = i_single_quadrature(p.rho_lin(), &p);
        assert!(at_rho.is_finite() && at_rho > 0.0);
    }

    #[test]
    fn i_single_series_collapses_without_rician_power() {
        // beta2 = 0 and n_bar = 0 leave the single (0,0,0) term
        // (1/alpha) (x/rho)^(-3/alpha) gamma(3/alpha, (x/rho) R^alpha).
        let mut p = defaults();
        p.rician_bs_eve = 0.0;
        let tr = Truncation::new(0, 20).unwrap();
        let x = 3.7;
        let xr = x / p.rho_lin();
        let expect = (1.0 / p.pathloss_exp)
            * xr.powf(-1.5)
            * lower_inc_gamma(1.5, xr * p.radius.powi(2)).unwrap();
        let got = i_single_series(x, &p, &tr);
        assert!((got - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn i_single_series_vanishes_at_large_x() {
        let p = defaults();
        let tr = Truncation::default();
        let third = p.radius.powi(3) / 3.0;
        assert!(i_single_series(1e12, &p, &tr) <= 1e-9 * third);
    }

    #[test]
    fn eve_single_cdf_void_probability() {
        let p = defaults();
        let tr = Truncation::default();
        for method in [EveSingleMethod::Series, EveSingleMethod::Quadrature] {
            let cdf = cdf_eve_single(&p, &tr, method);
            let void = (-p.eve_density * p.hemisphere_volume()).exp();
            let got = cdf.eval(0.0);
            assert!(
                (got - void).abs() <= 1e-10 * void,
                "{method:?}: {got} vs {void}"
            );
        }
    }

    #[test]
    fn eve_single_cdf_no_eavesdroppers() {
        let mut p = defaults();
        p.eve_density = 0.0;
        let cdf = cdf_eve_single(&p, &Truncation::default(), EveSingleMethod::Series);
        for x in [0.0, 1e-3, 1.0, 1e6] {
            assert_eq!(cdf.eval(x), 1.0);
        }
    }

    #[test]
    fn eve_single_cdf_monotone_and_decreasing_in_density() {
        let tr = Truncation::default();
        let cdf = cdf_eve_single(&defaults(), &tr, EveSingleMethod::Series);
        assert_monotone_cdf(&cdf);

        let densities = [1e-6, 1e-5, 1e-4];
        let cdfs: Vec<SnrCdf> = densities
            .iter()
            .map(|d| {
                let mut p = defaults();
                p.eve_density = *d;
                cdf_eve_single(&p, &tr, EveSingleMethod::Series)
            })
            .collect();
        for i in 0..40 {
            let x = 10f64.powf(-3.0 + 4.0 * i as f64 / 39.0);
            let fs: Vec<f64> = cdfs.iter().map(|c| c.eval(x)).collect();
            assert!(fs[0] >= fs[1] && fs[1] >= fs[2], "not ordered at {x}: {fs:?}");
        }
    }

    #[test]
    fn bob_multi_cdf_shapes() {
        let p = defaults();
        let cdf = cdf_bob_multi(&p);
        assert_eq!(cdf.eval(0.0), 0.0);
        assert_monotone_cdf(&cdf);

        let p1 = SystemParams { n_ant: 1, ..defaults() };
        let cdf1 = cdf_bob_multi(&p1);
        let mean = p1.n_ris as f64 * p1.rho_lin() * p1.bob_pathloss();
        for x in [0.01, 0.1, 1.0, 5.0] {
            let exponential = 1.0 - (-x / mean).exp();
            assert!((cdf1.eval(x) - exponential).abs() < 1e-12);
        }
    }

    #[test]
    fn i_multi_closed_limits() {
        let p = defaults();
        let third = p.radius.powi(3) / 3.0;
        assert_eq!(i_multi_closed(0.0, &p), third);
        assert_eq!(i_multi_quadrature(0.0, &p), third);

        // With a negligible reflected floor the second term vanishes.
        let mut far = defaults();
        far.dist_bs_ris = 1e9;
        let x = 0.4;
        let xr = x / far.rho_lin();
        let z = x / (far.rho_lin() * far.radius.powf(-2.0));
        let first_only = 0.5 * xr.powf(-1.5) * lower_inc_gamma(1.5, z).unwrap();
        let got = i_multi_closed(x, &far);
        assert!((got - first_only).abs() < 1e-10 * first_only);
    }

    #[test]
    fn eve_multi_cdf_limits_and_monotonicity() {
        let p = defaults();
        for method in [EveMultiMethod::Closed, EveMultiMethod::Quadrature] {
            let cdf = cdf_eve_multi(&p, method);
            let void = (-p.eve_density * p.hemisphere_volume()).exp();
            assert!((cdf.eval(0.0) - void).abs() <= 1e-10 * void);
            assert_monotone_cdf(&cdf);
        }
    }

    #[test]
    fn secrecy_capacity_degenerate_eavesdropper_cases() {
        let p = defaults();
        let tr = Truncation::default();
        let bob = cdf_bob_single(&p, &default_gamma());

        // Eavesdropper sees everything: F_E == 0, so Fbar_E == 1 and the two
        // integrals cancel.
        let omniscient = SnrCdf::new("eve-omniscient", |_| 0.0);
        assert_eq!(ergodic_secrecy_capacity(&bob, &omniscient, &tr), 0.0);

        // No eavesdroppers: capacity equals Bob's ergodic capacity.
        let mut empty = p.clone();
        empty.eve_density = 0.0;
        let eve = cdf_eve_single(&empty, &tr, EveSingleMethod::Series);
        let ceiling = ergodic_secrecy_capacity(&bob, &eve, &tr);
        assert!(ceiling > 0.0);

        // The substituted Gauss-Chebyshev rule reproduces the integral it
        // replaces: check a converged node count against high-resolution
        // adaptive quadrature of the same integrand.
        let converged =
            ergodic_secrecy_capacity(&bob, &eve, &Truncation::new(10, 400).unwrap());
        let ga = default_gamma();
        let scale = p.rho_lin() * p.bob_pathloss() * ga.scale;
        let reference = adaptive_simpson(
            |x| {
                crate::specfun::reg_upper_gamma(ga.shape, x / scale).unwrap() / (1.0 + x)
            },
            0.0,
            200.0,
            1e-12,
        ) / std::f64::consts::LN_2;
        assert!(
            (converged - reference).abs() <= 1e-4 * reference,
            "quadrature {converged} vs adaptive {reference}"
        );
        // The default node count stays within a percent of the ceiling.
        assert!((ceiling - reference).abs() <= 1e-2 * reference);
    }

    #[test]
    fn secrecy_capacity_nonnegative_and_w_stable() {
        let p = defaults();
        let bob = cdf_bob_single(&p, &default_gamma());
        let eve = cdf_eve_single(&p, &Truncation::default(), EveSingleMethod::Series);
        let w20 = ergodic_secrecy_capacity(&bob, &eve, &Truncation::default());
        let w40 = ergodic_secrecy_capacity(&bob, &eve, &Truncation::new(10, 40).unwrap());
        assert!(w20 >= 0.0);
        assert!((w20 - w40).abs() < 1e-3, "W=20 {w20} vs W=40 {w40}");
    }
}
