use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use super::{ExperimentPlan, ShotRecord};
use crate::error::{Error, Result};
use crate::models::DensityMatrix;
use crate::pauli::{expectation, PauliString};
use crate::random::derive_seed;

fn sample_estimate<R: Rng + ?Sized>(mean: f64, shots: u64, rng: &mut R) -> Result<f64> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    let p_plus = (0.5 * (1.0 + mean)).clamp(0.0, 1.0);
    let dist = Binomial::new(shots, p_plus).map_err(|e| Error::Config(e.to_string()))?;
    let plus = dist.sample(rng);
    Ok(2.0 * plus as f64 / shots as f64 - 1.0)
}

/// One simulated record drawn from `rng`.
pub fn simulate_shots_with<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    pauli: &PauliString,
    shots: u64,
    rng: &mut R,
) -> Result<ShotRecord> {
    let mean = expectation(rho.matrix(), pauli)?;
    Ok(ShotRecord {
        pauli: pauli.clone(),
        shots,
        estimate: sample_estimate(mean, shots, rng)?,
    })
}

/// `N₊ ~ Binomial(N, (1 + ⟨P⟩)/2)` and estimate `2N₊/N − 1`.
pub fn simulate_shots(rho: &DensityMatrix, pauli: &PauliString, shots: u64, seed: u64) -> Result<ShotRecord> {
    simulate_shots_with(rho, pauli, shots, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Simulated records for `strings`, all with `shots` shots, from one stream.
pub fn simulate_plan(
    rho: &DensityMatrix,
    strings: &[PauliString],
    shots: u64,
    delta: f64,
    seed: u64,
) -> Result<ExperimentPlan> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let records = strings
        .iter()
        .map(|p| simulate_shots_with(rho, p, shots, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    ExperimentPlan::new(records, delta)
}

/// Fraction of `repetitions` simulated experiments in which some record
/// misses its true value by more than its Hoeffding half-width.
///
/// Repetition `m` draws from the stream seeded by `(seed, m)`, so the result
/// does not depend on scheduling.
pub fn coverage_rate(rho: &DensityMatrix, plan: &ExperimentPlan, repetitions: usize, seed: u64) -> Result<f64> {
    if repetitions == 0 {
        log::warn!("coverage requested with zero repetitions; reporting rate 0");
        return Ok(0.0);
    }
    let truths = plan
        .records()
        .iter()
        .map(|r| expectation(rho.matrix(), &r.pauli))
        .collect::<Result<Vec<_>>>()?;
    let eps = plan.epsilons()?;
    let failures = (0..repetitions)
        .into_par_iter()
        .map(|m| -> Result<bool> {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[m as u64]));
            for ((r, &truth), &e) in plan.records().iter().zip(&truths).zip(&eps) {
                let est = sample_estimate(truth, r.shots, &mut rng)?;
                if (est - truth).abs() > e {
                    return Ok(true);
                }
            }
            Ok(false)
        })
        .collect::<Result<Vec<bool>>>()?;
    Ok(failures.iter().filter(|&&f| f).count() as f64 / repetitions as f64)
}
