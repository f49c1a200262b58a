//! End-to-end simulation oracle: repeated point-process and channel draws
//! producing per-trial SNR records, empirical CDFs and Monte-Carlo secrecy
//! capacity estimates.
//!
//! Trials are independent work items executed on the current rayon pool.
//! Each trial owns a ChaCha stream derived from the master seed and its
//! trial index, so results are identical for any worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{self, ChannelRealization};
use crate::geometry::{self, SystemParams};

/// Errors from the simulation harness.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum McError {
    /// Single-antenna mode requires a single-antenna parameter set.
    #[error("single mode requires n_ant = 1 (parameter set has n_ant = {0})")]
    ModeMismatch(usize),
    /// Operation needs at least one sample / trial.
    #[error("empty input")]
    Empty,
    /// Samples must be nonnegative finite reals.
    #[error("invalid sample value")]
    InvalidSample,
}

/// Antenna / phase-shift operating mode of a simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// K = 1, RIS phases matched to Bob's channel.
    Single,
    /// K >= 1, i.i.d. uniform phases and MRT beamforming.
    Multi,
}

/// One Monte-Carlo draw: Bob's SNR, the strongest eavesdropper's SNR
/// (zero if the realization is empty) and the eavesdropper count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub bob_snr: f64,
    pub eve_snr: f64,
    pub eve_count: usize,
}

/// Empirical CDF over a sorted sample set.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    samples: Vec<f64>,
}

impl EmpiricalCdf {
    /// Fraction of samples at or below `x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.samples.partition_point(|s| *s <= x) as f64 / self.samples.len() as f64
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    /// Sorted sample values.
    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Kolmogorov-Smirnov distance against a reference CDF.
    pub fn ks_distance<F: Fn(f64) -> f64>(&self, cdf: F) -> f64 {
        let n = self.samples.len() as f64;
        let mut ks = 0.0f64;
        for (i, x) in self.samples.iter().enumerate() {
            let f = cdf(*x);
            ks = ks.max((f - i as f64 / n).abs());
            ks = ks.max((f - (i + 1) as f64 / n).abs());
        }
        ks
    }
}

/// Builds the standard empirical CDF from a nonempty sample list.
pub fn empirical_cdf(samples: &[f64]) -> Result<EmpiricalCdf, McError> {
    if samples.is_empty() {
        return Err(McError::Empty);
    }
    if samples.iter().any(|s| !s.is_finite() || *s < 0.0) {
        return Err(McError::InvalidSample);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(EmpiricalCdf { samples: sorted })
}

fn single_trial(params: &SystemParams, mode: Mode, rng: &mut ChaCha8Rng) -> TrialRecord {
    let points = geometry::sample_ppp_hemisphere(params, rng);
    let mut real: ChannelRealization = channel::sample_realization(params, &points, rng);
    let (bob_snr, eve_snr) = match mode {
        Mode::Single => {
            real.phases = channel::optimal_phase_shifts(&real).expect("single mode");
            let bob = channel::bob_snr_single(&real, params).expect("single mode");
            let eve = (0..real.eves.len())
                .map(|k| channel::eve_snr_single(&real, k, params).expect("index in range"))
                .fold(0.0, f64::max);
            (bob, eve)
        }
        Mode::Multi => {
            real.phases = channel::random_phase_shifts(real.n_ris, rng);
            let bob = channel::bob_snr_multi(&real, params);
            let eve = if real.eves.is_empty() {
                0.0
            } else {
                let w = channel::mrt_beamformer(&real).expect("nondegenerate channel");
                channel::eve_snrs_multi(&real, &w, params)
                    .into_iter()
                    .fold(0.0, f64::max)
            };
            (bob, eve)
        }
    };
    TrialRecord { bob_snr, eve_snr, eve_count: real.eves.len() }
}

/// Runs `n_trials` independent system draws.
///
/// Per trial: sample the point process, sample all channels, set phases for
/// the mode, record Bob's SNR and the best eavesdropper SNR. Trial `i` draws
/// from ChaCha stream `i` of the master seed, so output is deterministic in
/// `(params, mode, n_trials, seed)` regardless of rayon worker count.
pub fn run_trials(
    params: &SystemParams,
    mode: Mode,
    n_trials: usize,
    seed: u64,
) -> Result<Vec<TrialRecord>, McError> {
    if n_trials == 0 {
        return Err(McError::Empty);
    }
    if mode == Mode::Single && params.n_ant != 1 {
        return Err(McError::ModeMismatch(params.n_ant));
    }
    Ok((0..n_trials)
        .into_par_iter()
        .with_min_len(8)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            single_trial(params, mode, &mut rng)
        })
        .collect())
}

/// Re-pairs each Bob sample with the next trial's eavesdropper sample.
///
/// Trials are i.i.d., so the rotation yields independent legitimate /
/// eavesdropper pairs, matching the independence the product-form capacity
/// expression assumes.
pub fn rotate_eve_pairing(records: &[TrialRecord]) -> Vec<TrialRecord> {
    let n = records.len();
    (0..n)
        .map(|i| {
            let next = &records[(i + 1) % n];
            TrialRecord {
                bob_snr: records[i].bob_snr,
                eve_snr: next.eve_snr,
                eve_count: next.eve_count,
            }
        })
        .collect()
}

/// Monte-Carlo secrecy capacity: mean and standard error of
/// max(log2(1 + bob) - log2(1 + eve), 0) over the records.
pub fn mc_secrecy_capacity(records: &[TrialRecord]) -> Result<(f64, f64), McError> {
    if records.is_empty() {
        return Err(McError::Empty);
    }
    let n = records.len() as f64;
    let gaps: Vec<f64> = records
        .iter()
        .map(|r| ((1.0 + r.bob_snr).log2() - (1.0 + r.eve_snr).log2()).max(0.0))
        .collect();
    let mean = gaps.iter().sum::<f64>() / n;
    if records.len() == 1 {
        return Ok((mean, 0.0));
    }
    let var = gaps.iter().map(|g| (g - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, (var / n).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_params() -> SystemParams {
        SystemParams { n_ant: 1, ..SystemParams::default() }
    }

    #[test]
    fn zero_density_yields_empty_records() {
        let mut p = single_params();
        p.eve_density = 0.0;
        let records = run_trials(&p, Mode::Single, 200, 42).unwrap();
        for r in &records {
            assert_eq!(r.eve_count, 0);
            assert_eq!(r.eve_snr, 0.0);
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let p = single_params();
        let a = run_trials(&p, Mode::Single, 100, 7).unwrap();
        let b = run_trials(&p, Mode::Single, 100, 7).unwrap();
        assert_eq!(a, b);
        let c = run_trials(&p, Mode::Single, 100, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn determinism_across_worker_counts() {
        let p = single_params();
        let pool1 = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let pool8 = rayon::ThreadPoolBuilder::new().num_threads(8).build().unwrap();
        let r1 = pool1.install(|| run_trials(&p, Mode::Single, 256, 3).unwrap());
        let r8 = pool8.install(|| run_trials(&p, Mode::Single, 256, 3).unwrap());
        assert_eq!(r1, r8);
    }

    #[test]
    fn mean_eve_count_matches_poisson_intensity() {
        let p = single_params();
        let records = run_trials(&p, Mode::Single, 10_000, 11).unwrap();
        let mean = records.iter().map(|r| r.eve_count as f64).sum::<f64>() / 10_000.0;
        let expected = p.mean_eve_count();
        let se = (expected / 10_000.0).sqrt();
        assert!((mean - expected).abs() < 3.0 * se, "{mean} vs {expected}");
    }

    #[test]
    fn single_mode_rejects_multi_params() {
        let p = SystemParams::default();
        assert_eq!(
            run_trials(&p, Mode::Single, 10, 1),
            Err(McError::ModeMismatch(p.n_ant))
        );
    }

    #[test]
    fn empirical_cdf_basics() {
        let one = empirical_cdf(&[5.0]).unwrap();
        assert_eq!(one.eval(4.0), 0.0);
        assert_eq!(one.eval(5.0), 1.0);

        let four = empirical_cdf(&[2.0, 1.0, 4.0, 3.0]).unwrap();
        assert_eq!(four.eval(2.5), 0.5);

        assert!(matches!(empirical_cdf(&[]), Err(McError::Empty)));
        assert!(matches!(empirical_cdf(&[1.0, f64::NAN]), Err(McError::InvalidSample)));
    }

    #[test]
    fn empirical_cdf_matches_exponential_law() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let samples: Vec<f64> = (0..100_000)
            .map(|_| -(1.0 - rng.random::<f64>()).ln())
            .collect();
        let cdf = empirical_cdf(&samples).unwrap();
        let ks = cdf.ks_distance(|x| 1.0 - (-x).exp());
        assert!(ks <= 0.01, "KS {ks}");
    }

    #[test]
    fn secrecy_estimator_clamps_and_averages() {
        let overheard = vec![
            TrialRecord { bob_snr: 1.0, eve_snr: 3.0, eve_count: 1 },
            TrialRecord { bob_snr: 0.5, eve_snr: 0.5, eve_count: 2 },
        ];
        let (mean, _) = mc_secrecy_capacity(&overheard).unwrap();
        assert_eq!(mean, 0.0);

        let leak_free = vec![
            TrialRecord { bob_snr: 1.0, eve_snr: 0.0, eve_count: 0 },
            TrialRecord { bob_snr: 3.0, eve_snr: 0.0, eve_count: 0 },
        ];
        let (mean, stderr) = mc_secrecy_capacity(&leak_free).unwrap();
        let want = (2.0f64.log2() + 4.0f64.log2()) / 2.0;
        assert!((mean - want).abs() < 1e-15);
        assert!(stderr > 0.0);

        assert_eq!(mc_secrecy_capacity(&[]), Err(McError::Empty));
    }

    #[test]
    fn rotation_preserves_marginals() {
        let records = vec![
            TrialRecord { bob_snr: 1.0, eve_snr: 10.0, eve_count: 1 },
            TrialRecord { bob_snr: 2.0, eve_snr: 20.0, eve_count: 2 },
            TrialRecord { bob_snr: 3.0, eve_snr: 30.0, eve_count: 3 },
        ];
        let rotated = rotate_eve_pairing(&records);
        assert_eq!(rotated[0].bob_snr, 1.0);
        assert_eq!(rotated[0].eve_snr, 20.0);
        assert_eq!(rotated[2].eve_snr, 10.0);
        let mut eves: Vec<f64> = rotated.iter().map(|r| r.eve_snr).collect();
        eves.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(eves, vec![10.0, 20.0, 30.0]);
    }
}
