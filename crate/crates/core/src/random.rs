//! Seeded random matrix ensembles used by examples, sweeps and tests.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{c, hermitize, CMatrix, ZERO};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Complex Ginibre matrix with unit-variance entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        c(gaussian(rng), gaussian(rng)) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// GUE-like random Hermitian matrix.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    hermitize(&ginibre(d, d, rng))
}

/// Haar-distributed unitary via Gram-Schmidt on a Ginibre matrix.
///
/// Gram-Schmidt on Gaussian columns yields the QR factor with a positive
/// diagonal in `R`, which is exactly the Haar measure.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let mut q = ginibre(d, d, rng);
    for j in 0..d {
        for k in 0..j {
            let mut proj = ZERO;
            for i in 0..d {
                proj += q[(i, k)].conj() * q[(i, j)];
            }
            for i in 0..d {
                let qik = q[(i, k)];
                q[(i, j)] -= proj * qik;
            }
        }
        let norm = q.column(j).norm();
        q.column_mut(j).unscale_mut(norm);
    }
    q
}

/// Random full-rank mixed state `G G† / tr(G G†)` from the Hilbert-Schmidt ensemble.
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(d, d, rng);
    let m = &g * g.adjoint();
    let tr: f64 = m.diagonal().iter().map(|z| z.re).sum();
    hermitize(&m.unscale(tr))
}

/// Haar-random pure state as a density matrix.
pub fn random_pure_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(d, 1, rng);
    let v = g.unscale(g.norm());
    &v * v.adjoint()
}

/// Uniform point on the probability simplex.
pub fn random_probability<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..d).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Sorted ascending random energies drawn uniformly from `[-1, 1]`.
pub fn random_energies<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<f64> {
    let mut e: Vec<f64> = (0..d).map(|_| rng.random_range(-1.0..1.0)).collect();
    e.sort_by(|a, b| a.partial_cmp(b).unwrap());
    e
}

/// Deterministic sub-seed for stream `parts` under `base` (SplitMix64 finaliser
/// applied to each component in turn).
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    parts.iter().fold(mix(base), |acc, &p| mix(acc ^ mix(p)))
}
