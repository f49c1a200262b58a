//! Spatial model: BS-centered hemisphere, Poisson sampling of eavesdropper
//! positions, distances and RIS/BS steering vectors.
//!
//! The base station sits at the origin, the RIS at (0, D, 0) facing the BS,
//! and the legitimate user at a fixed position d_B from the RIS.
//! Eavesdroppers form a homogeneous 3-D Poisson point process of density
//! `eve_density` over the hemisphere of radius `radius` above the ground
//! plane.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Poisson};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// All scalar system constants.
///
/// Rician factors are stored linear (not dB); `rho_db` is the normalized
/// transmit SNR in dB and is linearized on use.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    /// RIS element count N (= ris_rows * ris_cols).
    pub n_ris: usize,
    /// BS antenna count K (1 in single-antenna mode).
    pub n_ant: usize,
    /// BS-RIS distance D in meters.
    pub dist_bs_ris: f64,
    /// RIS-Bob distance d_B in meters.
    pub dist_ris_bob: f64,
    /// Hemisphere radius R in meters.
    pub radius: f64,
    /// Pathloss exponent alpha.
    pub pathloss_exp: f64,
    /// Normalized transmit SNR in dB.
    pub rho_db: f64,
    /// Eavesdropper density per cubic meter.
    pub eve_density: f64,
    /// Rician factor of the RIS-eavesdropper links, linear.
    pub rician_ris_eve: f64,
    /// Rician factor of the BS-eavesdropper links, linear.
    pub rician_bs_eve: f64,
    /// Carrier frequency in Hz.
    pub carrier_hz: f64,
    /// RIS element spacing along rows, meters.
    pub spacing_row: f64,
    /// RIS element spacing along columns, meters.
    pub spacing_col: f64,
    /// RIS grid rows.
    pub ris_rows: usize,
    /// RIS grid columns.
    pub ris_cols: usize,
}

impl Default for SystemParams {
    /// Reference parameter set: rho = 20 dB, N = 100 (10x10), K = 200,
    /// R = 50 m, D = 100 m, d_B = 10 m, alpha = 2, density 1e-4 /m^3,
    /// both Rician factors 3 dB, carrier 2.4 GHz, lambda/4 spacing.
    fn default() -> Self {
        let carrier_hz = 2.4e9;
        let quarter_lambda = SPEED_OF_LIGHT / carrier_hz / 4.0;
        Self {
            n_ris: 100,
            n_ant: 200,
            dist_bs_ris: 100.0,
            dist_ris_bob: 10.0,
            radius: 50.0,
            pathloss_exp: 2.0,
            rho_db: 20.0,
            eve_density: 1e-4,
            rician_ris_eve: 10f64.powf(0.3),
            rician_bs_eve: 10f64.powf(0.3),
            carrier_hz,
            spacing_row: quarter_lambda,
            spacing_col: quarter_lambda,
            ris_rows: 10,
            ris_cols: 10,
        }
    }
}

impl SystemParams {
    /// Linearized transmit SNR 10^(rho_db/10).
    pub fn rho_lin(&self) -> f64 {
        10f64.powf(self.rho_db / 10.0)
    }

    /// Carrier wavelength c/f in meters.
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    /// Hemisphere volume (2/3) pi R^3.
    pub fn hemisphere_volume(&self) -> f64 {
        2.0 / 3.0 * PI * self.radius.powi(3)
    }

    /// Expected eavesdropper count: density x hemisphere volume.
    pub fn mean_eve_count(&self) -> f64 {
        self.eve_density * self.hemisphere_volume()
    }

    /// Combined pathloss (D d_B)^-alpha of the BS-RIS-Bob cascade.
    pub fn bob_pathloss(&self) -> f64 {
        (self.dist_bs_ris * self.dist_ris_bob).powf(-self.pathloss_exp)
    }

    /// Collects every invariant violation, each tagged with the offending
    /// field. Empty means the parameter set is valid.
    pub fn violations(&self) -> Vec<String> {
        // NaN counts as a violation everywhere, hence the negated forms.
        let not_positive = |x: f64| !matches!(x.partial_cmp(&0.0), Some(std::cmp::Ordering::Greater));
        let mut v = Vec::new();
        if self.n_ris == 0 {
            v.push("n_ris: must be positive".into());
        }
        if self.n_ant == 0 {
            v.push("n_ant: must be positive".into());
        }
        if self.ris_rows == 0 || self.ris_cols == 0 {
            v.push("ris_rows/ris_cols: must be positive".into());
        }
        if self.ris_rows * self.ris_cols != self.n_ris {
            v.push(format!(
                "n_ris: must equal ris_rows * ris_cols ({} != {} * {})",
                self.n_ris, self.ris_rows, self.ris_cols
            ));
        }
        if not_positive(self.dist_bs_ris) {
            v.push("dist_bs_ris: must be positive".into());
        }
        if not_positive(self.dist_ris_bob) {
            v.push("dist_ris_bob: must be positive".into());
        }
        if not_positive(self.radius) {
            v.push("radius: must be positive".into());
        }
        if self.radius >= self.dist_bs_ris {
            v.push(format!(
                "radius: must be below dist_bs_ris (far-RIS regime requires R < D, got R={} D={})",
                self.radius, self.dist_bs_ris
            ));
        }
        if not_positive(self.pathloss_exp) {
            v.push("pathloss_exp: must be positive".into());
        }
        if !self.rho_db.is_finite() {
            v.push("rho_db: must be finite".into());
        }
        if self.eve_density.is_nan() || self.eve_density < 0.0 || !self.eve_density.is_finite() {
            v.push("eve_density: must be finite and nonnegative".into());
        }
        if self.rician_ris_eve.is_nan() || self.rician_ris_eve < 0.0 {
            v.push("rician_ris_eve: must be nonnegative".into());
        }
        if self.rician_bs_eve.is_nan() || self.rician_bs_eve < 0.0 {
            v.push("rician_bs_eve: must be nonnegative".into());
        }
        if not_positive(self.carrier_hz) {
            v.push("carrier_hz: must be positive".into());
        }
        if not_positive(self.spacing_row) || not_positive(self.spacing_col) {
            v.push("spacing_row/spacing_col: must be positive".into());
        }
        v
    }
}

/// Near-square factorization for the RIS grid: the largest divisor of `n`
/// not exceeding sqrt(n), paired with its cofactor. Perfect squares give a
/// square grid; primes degenerate to a single row.
pub fn square_ris_grid(n: usize) -> (usize, usize) {
    if n == 0 {
        return (0, 0);
    }
    let mut rows = (n as f64).sqrt().floor() as usize;
    while rows > 1 && !n.is_multiple_of(rows) {
        rows -= 1;
    }
    let rows = rows.max(1);
    (rows, n / rows)
}

/// Eavesdropper position in the BS-centered hemisphere: radius r, polar
/// angle in [0, pi/2] measured from the vertical, azimuth in [0, 2pi).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPoint {
    pub r: f64,
    pub polar: f64,
    pub azimuth: f64,
}

impl SphericalPoint {
    /// Cartesian coordinates (x, y, z) with z the vertical axis.
    pub fn cartesian(&self) -> [f64; 3] {
        let (sp, cp) = self.polar.sin_cos();
        let (sa, ca) = self.azimuth.sin_cos();
        [self.r * sp * ca, self.r * sp * sa, self.r * cp]
    }
}

/// Draws one realization of the eavesdropper point process.
///
/// The count is Poisson with mean `density x hemisphere volume`; given the
/// count, points are i.i.d. uniform in the hemisphere volume:
/// r = R U^(1/3), cos(polar) = U', azimuth = 2 pi U''.
pub fn sample_ppp_hemisphere<R: Rng + ?Sized>(
    params: &SystemParams,
    rng: &mut R,
) -> Vec<SphericalPoint> {
    let mean = params.mean_eve_count();
    if mean <= 0.0 {
        return Vec::new();
    }
    let count = Poisson::new(mean).expect("positive finite mean").sample(rng) as usize;
    (0..count)
        .map(|_| SphericalPoint {
            r: params.radius * rng.random::<f64>().cbrt(),
            polar: rng.random::<f64>().acos(),
            azimuth: rng.random::<f64>() * 2.0 * PI,
        })
        .collect()
}

/// Distance from a hemisphere point to the RIS at (0, D, 0):
/// sqrt(r^2 + D^2 - 2 r D sin(polar) sin(azimuth)).
pub fn dist_ris_eve(p: &SphericalPoint, params: &SystemParams) -> f64 {
    let d = params.dist_bs_ris;
    (p.r * p.r + d * d - 2.0 * p.r * d * p.polar.sin() * p.azimuth.sin()).sqrt()
}

/// Direction cosine along the array axis (x) of the unit vector from
/// `from` to the point, i.e. sin(xi) cos(psi) of the departure angles.
///
/// The RIS is taken to lie in the x-z plane at (0, D, 0), rows along x and
/// columns along z; the BS array lies along x at the origin. Any fixed
/// convention works here: the distributional results are phase-invariant,
/// only the Monte-Carlo oracle needs internal consistency.
fn axis_direction_cosine(p: &SphericalPoint, from: [f64; 3]) -> f64 {
    let c = p.cartesian();
    let d = [c[0] - from[0], c[1] - from[1], c[2] - from[2]];
    let norm = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    if norm == 0.0 {
        0.0
    } else {
        d[0] / norm
    }
}

/// Line-of-sight RIS steering vector toward a hemisphere point, length N.
///
/// e^{-j 2 pi d / lambda} · a_row ⊗ a_col with per-element phase
/// progression driven by the departure-angle factor sin(xi) cos(psi); every
/// entry has unit magnitude.
pub fn los_steering_ris(p: &SphericalPoint, params: &SystemParams) -> Vec<Complex64> {
    debug_assert_eq!(params.ris_rows * params.ris_cols, params.n_ris);
    let lambda = params.wavelength();
    let d = dist_ris_eve(p, params);
    let sincos = axis_direction_cosine(p, [0.0, params.dist_bs_ris, 0.0]);
    let lead = Complex64::from_polar(1.0, -2.0 * PI * d / lambda);
    let phase_row = -2.0 * PI * params.spacing_row * sincos / lambda;
    let phase_col = -2.0 * PI * params.spacing_col * sincos / lambda;
    let mut v = Vec::with_capacity(params.n_ris);
    for r in 0..params.ris_rows {
        let row = Complex64::from_polar(1.0, phase_row * r as f64);
        for c in 0..params.ris_cols {
            v.push(lead * row * Complex64::from_polar(1.0, phase_col * c as f64));
        }
    }
    v
}

/// Line-of-sight BS steering vector toward a hemisphere point, length K.
///
/// Uniform linear array along x with half-wavelength spacing; degenerates
/// to the single entry e^{-j 2 pi r / lambda} for K = 1.
pub fn los_steering_bs(p: &SphericalPoint, params: &SystemParams) -> Vec<Complex64> {
    let lambda = params.wavelength();
    let sincos = axis_direction_cosine(p, [0.0, 0.0, 0.0]);
    let lead = Complex64::from_polar(1.0, -2.0 * PI * p.r / lambda);
    (0..params.n_ant)
        .map(|j| lead * Complex64::from_polar(1.0, -PI * sincos * j as f64))
        .collect()
}
