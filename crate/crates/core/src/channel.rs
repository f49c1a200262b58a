//! Random channel realizations and per-trial SNR computation for the
//! legitimate user and every eavesdropper.
//!
//! BS-RIS and RIS-Bob links are Rayleigh; RIS-eavesdropper and
//! BS-eavesdropper links are Rician mixtures of a line-of-sight steering
//! vector and a scattered component. Two operating modes:
//!
//! * single antenna (K = 1): RIS phases matched to Bob's channel,
//! * multi antenna: i.i.d. uniform phases plus MRT beamforming at the BS.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::geometry::{self, SphericalPoint, SystemParams};

/// Errors from channel-level operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChannelError {
    /// Operation invoked in the wrong antenna mode (e.g. a single-antenna
    /// formula with K > 1).
    #[error("operation requires {expected} antenna mode (realization has K = {actual})")]
    Mode { expected: &'static str, actual: usize },
    /// Eavesdropper index out of range.
    #[error("eavesdropper index {index} out of range ({count} present)")]
    IndexOutOfRange { index: usize, count: usize },
    /// Effective channel is identically zero; the MRT direction is undefined.
    #[error("degenerate zero channel")]
    DegenerateChannel,
}

/// Fading seen by one eavesdropper.
#[derive(Debug, Clone)]
pub struct EveChannel {
    /// Position of the eavesdropper.
    pub point: SphericalPoint,
    /// RIS-eavesdropper fading, length N.
    pub v: Vec<Complex64>,
    /// BS-eavesdropper fading, length K (scalar direct link when K = 1).
    pub u: Vec<Complex64>,
}

/// One draw of every small-scale fading coefficient in the system.
///
/// `h` is the N x K BS-RIS matrix stored column-major (`h[j * N + i]` is
/// element (i, j)); for K = 1 it is simply the length-N vector. Phases are
/// zero after sampling and must be set by the caller for the intended mode.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    pub n_ris: usize,
    pub n_ant: usize,
    pub h: Vec<Complex64>,
    pub g: Vec<Complex64>,
    pub phases: Vec<f64>,
    pub eves: Vec<EveChannel>,
}

impl ChannelRealization {
    /// BS-RIS coefficient h_{i,j}.
    #[inline]
    pub fn h_at(&self, i: usize, j: usize) -> Complex64 {
        self.h[j * self.n_ris + i]
    }
}

fn sample_cn<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    // Standard circular complex Gaussian: unit total variance.
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn sample_cn_vec<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    (0..n).map(|_| sample_cn(rng)).collect()
}

/// Mixes a LoS steering vector with scattered fading at the given Rician
/// factor (linear).
fn rician_mix<R: Rng + ?Sized>(
    los: Vec<Complex64>,
    factor: f64,
    rng: &mut R,
) -> Vec<Complex64> {
    let c_los = (factor / (factor + 1.0)).sqrt();
    let c_nlos = (1.0 / (factor + 1.0)).sqrt();
    los.into_iter()
        .map(|l| c_los * l + c_nlos * sample_cn(rng))
        .collect()
}

/// Samples all fading for one trial given the eavesdropper positions.
///
/// Entries of `h` and `g` are i.i.d. CN(0, 1); each eavesdropper gets
/// Rician RIS-side fading (factor `rician_ris_eve`) and Rician BS-side
/// fading (factor `rician_bs_eve`). Phases are left at zero.
pub fn sample_realization<R: Rng + ?Sized>(
    params: &SystemParams,
    eves: &[SphericalPoint],
    rng: &mut R,
) -> ChannelRealization {
    let n = params.n_ris;
    let k = params.n_ant;
    let h = sample_cn_vec(n * k, rng);
    let g = sample_cn_vec(n, rng);
    let eves = eves
        .iter()
        .map(|p| EveChannel {
            point: *p,
            v: rician_mix(geometry::los_steering_ris(p, params), params.rician_ris_eve, rng),
            u: rician_mix(geometry::los_steering_bs(p, params), params.rician_bs_eve, rng),
        })
        .collect();
    ChannelRealization { n_ris: n, n_ant: k, h, g, phases: vec![0.0; n], eves }
}

/// Phase shifts maximizing Bob's SNR in single-antenna mode:
/// phi_i = -arg(g_i) - arg(h_i), taken mod 2 pi.
pub fn optimal_phase_shifts(real: &ChannelRealization) -> Result<Vec<f64>, ChannelError> {
    if real.n_ant != 1 {
        return Err(ChannelError::Mode { expected: "single", actual: real.n_ant });
    }
    Ok(real
        .g
        .iter()
        .zip(&real.h)
        .map(|(g, h)| (-(g.arg() + h.arg())).rem_euclid(2.0 * PI))
        .collect())
}

/// Draws i.i.d. uniform phases on [0, 2 pi) for the random-phase mode.
pub fn random_phase_shifts<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.random::<f64>() * 2.0 * PI).collect()
}

/// Bob's SNR under optimal phases, single-antenna mode:
/// rho (D d_B)^-alpha (sum_i |g_i| |h_i|)^2.
pub fn bob_snr_single(
    real: &ChannelRealization,
    params: &SystemParams,
) -> Result<f64, ChannelError> {
    if real.n_ant != 1 {
        return Err(ChannelError::Mode { expected: "single", actual: real.n_ant });
    }
    let coherent: f64 = real
        .g
        .iter()
        .zip(&real.h)
        .map(|(g, h)| g.norm() * h.norm())
        .sum();
    Ok(params.rho_lin() * params.bob_pathloss() * coherent * coherent)
}

/// Eavesdropper SNR in single-antenna mode with an explicit RIS-eavesdropper
/// distance on the reflected path.
///
/// rho | (D d)^{-alpha/2} sum_i v_i h_i e^{j phi_i} + r^{-alpha/2} v_0 |^2.
pub fn eve_snr_single_at(
    real: &ChannelRealization,
    k: usize,
    dist_ris_eve: f64,
    params: &SystemParams,
) -> Result<f64, ChannelError> {
    if real.n_ant != 1 {
        return Err(ChannelError::Mode { expected: "single", actual: real.n_ant });
    }
    let eve = real
        .eves
        .get(k)
        .ok_or(ChannelError::IndexOutOfRange { index: k, count: real.eves.len() })?;
    let half_alpha = params.pathloss_exp / 2.0;
    let reflected: Complex64 = eve
        .v
        .iter()
        .zip(&real.h)
        .zip(&real.phases)
        .map(|((v, h), phi)| v * h * Complex64::from_polar(1.0, *phi))
        .sum();
    let amp = (params.dist_bs_ris * dist_ris_eve).powf(-half_alpha) * reflected
        + eve.point.r.powf(-half_alpha) * eve.u[0];
    Ok(params.rho_lin() * amp.norm_sqr())
}

/// Eavesdropper SNR in single-antenna mode using the exact reflected-path
/// distance (no far-RIS approximation).
pub fn eve_snr_single(
    real: &ChannelRealization,
    k: usize,
    params: &SystemParams,
) -> Result<f64, ChannelError> {
    let eve = real
        .eves
        .get(k)
        .ok_or(ChannelError::IndexOutOfRange { index: k, count: real.eves.len() })?;
    let d = geometry::dist_ris_eve(&eve.point, params);
    eve_snr_single_at(real, k, d, params)
}

/// Effective row channel a_j = sum_i g_i h_{i,j} e^{j phi_i}, length K.
///
/// Uses the same (unconjugated) orientation of g as the single-antenna
/// expressions, so the matched phase shifts align both. All fading is
/// circularly symmetric, making the orientation choice distributionally
/// immaterial.
fn effective_bob_channel(real: &ChannelRealization) -> Vec<Complex64> {
    let n = real.n_ris;
    // Precompute g_i e^{j phi_i} once.
    let gp: Vec<Complex64> = real
        .g
        .iter()
        .zip(&real.phases)
        .map(|(g, phi)| g * Complex64::from_polar(1.0, *phi))
        .collect();
    (0..real.n_ant)
        .map(|j| {
            let col = &real.h[j * n..(j + 1) * n];
            gp.iter().zip(col).map(|(a, b)| a * b).sum()
        })
        .collect()
}

/// Maximum-ratio-transmission beamformer: the unit vector aligned with the
/// effective Bob channel, w = a^H / ||a||.
pub fn mrt_beamformer(real: &ChannelRealization) -> Result<Vec<Complex64>, ChannelError> {
    let a = effective_bob_channel(real);
    let norm = a.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(ChannelError::DegenerateChannel);
    }
    Ok(a.into_iter().map(|c| c.conj() / norm).collect())
}

/// Bob's SNR in the random-phase multi-antenna mode with MRT:
/// rho (D d_B)^-alpha sum_j |sum_i g_i h_{i,j} e^{j phi_i}|^2.
pub fn bob_snr_multi(real: &ChannelRealization, params: &SystemParams) -> f64 {
    let norm_sq: f64 = effective_bob_channel(real).iter().map(Complex64::norm_sqr).sum();
    params.rho_lin() * params.bob_pathloss() * norm_sq
}

/// Phi H w as a length-N vector, shared across eavesdroppers of a trial.
pub fn phi_h_w(real: &ChannelRealization, w: &[Complex64]) -> Vec<Complex64> {
    let n = real.n_ris;
    let mut t = vec![Complex64::ZERO; n];
    for (j, wj) in w.iter().enumerate() {
        let col = &real.h[j * n..(j + 1) * n];
        for (ti, hij) in t.iter_mut().zip(col) {
            *ti += hij * wj;
        }
    }
    for (ti, phi) in t.iter_mut().zip(&real.phases) {
        *ti *= Complex64::from_polar(1.0, *phi);
    }
    t
}

fn eve_snr_multi_with(
    real: &ChannelRealization,
    k: usize,
    w: &[Complex64],
    t: &[Complex64],
    params: &SystemParams,
) -> Result<f64, ChannelError> {
    let eve = real
        .eves
        .get(k)
        .ok_or(ChannelError::IndexOutOfRange { index: k, count: real.eves.len() })?;
    let reflected: Complex64 = eve.v.iter().zip(t).map(|(v, ti)| v * ti).sum();
    let direct: Complex64 = eve.u.iter().zip(w).map(|(u, wj)| u * wj).sum();
    let amp = params.dist_bs_ris.powf(-params.pathloss_exp) * reflected
        + eve.point.r.powf(-params.pathloss_exp / 2.0) * direct;
    Ok(params.rho_lin() * amp.norm_sqr())
}

/// Eavesdropper SNR in multi-antenna mode:
/// rho | D^-alpha sum_i v_i (Phi H w)_i + r^{-alpha/2} sum_j u_j w_j |^2
/// (far-RIS approximation on the reflected path, exact r on the direct one).
pub fn eve_snr_multi(
    real: &ChannelRealization,
    k: usize,
    w: &[Complex64],
    params: &SystemParams,
) -> Result<f64, ChannelError> {
    let t = phi_h_w(real, w);
    eve_snr_multi_with(real, k, w, &t, params)
}

/// SNRs of every eavesdropper in the realization, sharing the Phi H w
/// product across them.
pub fn eve_snrs_multi(
    real: &ChannelRealization,
    w: &[Complex64],
    params: &SystemParams,
) -> Vec<f64> {
    let t = phi_h_w(real, w);
    (0..real.eves.len())
        .map(|k| eve_snr_multi_with(real, k, w, &t, params).expect("index in range"))
        .collect()
}
