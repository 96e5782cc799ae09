//! Exact ergotropy for fully known states, the optimal unitary, passive states
//! and the incoherent/coherent split.
//!
//! With `ρ = Σ r_j |r_j⟩⟨r_j|` (`r` non-increasing) and `H = Σ E_j |E_j⟩⟨E_j|`
//! (`E` non-decreasing) the optimal unitary is `U⋆ = Σ_j |E_j⟩⟨r_j|` and
//!
//! ```text
//! E(ρ, H) = Σ_{i,j} E_i r_j |⟨E_i|r_j⟩|² - Σ_i r_i E_i
//! ```

use crate::error::{Error, Result};
use crate::linalg::{ensure_dim, trace_product_re, unitarity_deviation, CMatrix};
use crate::models::{eigendecompose_hermitian, DensityMatrix, Eigen, HamiltonianData};

/// Maximum deviation of `U†U` from identity accepted for "unitary" inputs.
pub const UNITARY_TOL: f64 = 1e-8;

const DISTRIBUTION_TOL: f64 = 1e-9;
const MAJORIZATION_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct ErgotropyReport {
    pub value: f64,
    pub optimal_unitary: CMatrix,
    pub passive_state: DensityMatrix,
    /// State eigenvalues, non-increasing.
    pub state_spectrum: Vec<f64>,
    /// State eigenvectors as columns, aligned with `state_spectrum`.
    pub state_vectors: CMatrix,
}

/// Eigenpairs of a state sorted by non-increasing eigenvalue.
///
/// Ties keep the order produced by [`eigendecompose_hermitian`], which makes
/// the resulting unitary reproducible.
pub fn descending_spectrum(rho: &CMatrix) -> Result<Eigen> {
    let asc = eigendecompose_hermitian(rho)?;
    let d = asc.dim();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| asc.values[b].partial_cmp(&asc.values[a]).expect("finite"));
    let values = order.iter().map(|&k| asc.values[k]).collect();
    let vectors = CMatrix::from_fn(d, d, |i, j| asc.vectors[(i, order[j])]);
    Ok(Eigen { values, vectors })
}

/// `Σ_j |E_j⟩⟨r_j|` for a descending state spectrum.
pub fn optimal_unitary(state: &Eigen, h: &HamiltonianData) -> CMatrix {
    h.eigenvectors() * state.vectors.adjoint()
}

pub fn exact_ergotropy(rho: &DensityMatrix, h: &HamiltonianData) -> Result<ErgotropyReport> {
    ensure_dim(rho.matrix(), h.dim())?;
    let state = descending_spectrum(rho.matrix())?;
    let energies = h.energies();
    let overlaps = h.eigenvectors().adjoint() * &state.vectors;

    let mut mean = 0.0;
    for (i, e) in energies.iter().enumerate() {
        for (j, r) in state.values.iter().enumerate() {
            mean += e * r * overlaps[(i, j)].norm_sqr();
        }
    }
    let passive: f64 = state.values.iter().zip(energies).map(|(r, e)| r * e).sum();

    let optimal = optimal_unitary(&state, h);
    let passive_state = {
        let clipped: Vec<f64> = state.values.iter().map(|v| v.max(0.0)).collect();
        let total: f64 = clipped.iter().sum();
        let e = Eigen {
            values: clipped.iter().map(|v| v / total).collect(),
            vectors: h.eigenvectors().clone(),
        };
        DensityMatrix::new(crate::linalg::hermitize(&e.reconstruct()))?
    };
    Ok(ErgotropyReport {
        value: mean - passive,
        optimal_unitary: optimal,
        passive_state,
        state_spectrum: state.values,
        state_vectors: state.vectors,
    })
}

/// `tr(Hρ) - tr(H UρU†)`.
pub fn extraction_value(rho: &DensityMatrix, h: &HamiltonianData, u: &CMatrix) -> Result<f64> {
    ensure_dim(rho.matrix(), h.dim())?;
    ensure_dim(u, h.dim())?;
    let dev = unitarity_deviation(u);
    if dev > UNITARY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    let evolved = u * rho.matrix() * u.adjoint();
    Ok(trace_product_re(h.matrix(), rho.matrix()) - trace_product_re(h.matrix(), &evolved))
}

/// Energy-basis populations `⟨E_i|ρ|E_i⟩`.
pub fn energy_populations(rho: &DensityMatrix, h: &HamiltonianData) -> Result<Vec<f64>> {
    ensure_dim(rho.matrix(), h.dim())?;
    let v = h.eigenvectors();
    let rotated = v.adjoint() * rho.matrix() * v;
    Ok((0..h.dim()).map(|i| rotated[(i, i)].re).collect())
}

/// Dephases `ρ` in the energy eigenbasis and returns the dephased state with
/// its ergotropy (the incoherent part of the total).
pub fn dephase_incoherent(rho: &DensityMatrix, h: &HamiltonianData) -> Result<(DensityMatrix, f64)> {
    let pops = energy_populations(rho, h)?;
    let e = Eigen {
        values: pops,
        vectors: h.eigenvectors().clone(),
    };
    let dephased = DensityMatrix::new(crate::linalg::hermitize(&e.reconstruct()))?;
    let incoherent = exact_ergotropy(&dephased, h)?.value;
    Ok((dephased, incoherent))
}

pub(crate) fn validate_distribution(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::NotADistribution("empty vector".into()));
    }
    if let Some(x) = p.iter().find(|&&x| x < -DISTRIBUTION_TOL || !x.is_finite()) {
        return Err(Error::NotADistribution(format!("entry {x} is negative")));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > DISTRIBUTION_TOL {
        return Err(Error::NotADistribution(format!("entries sum to {total}")));
    }
    Ok(())
}

pub(crate) fn sorted_descending(p: &[f64]) -> Vec<f64> {
    let mut v = p.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    v
}

/// True iff every partial sum of `p↓` dominates the matching partial sum of `q↓`.
pub fn majorizes(p: &[f64], q: &[f64]) -> Result<bool> {
    validate_distribution(p)?;
    validate_distribution(q)?;
    if p.len() != q.len() {
        return Err(Error::LengthMismatch(p.len(), q.len()));
    }
    let (ps, qs) = (sorted_descending(p), sorted_descending(q));
    let (mut acc_p, mut acc_q) = (0.0, 0.0);
    for (a, b) in ps.iter().zip(&qs) {
        acc_p += a;
        acc_q += b;
        if acc_p < acc_q - MAJORIZATION_TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Energy of the passive state with spectrum `spectrum`: `Σ_j r↓_j E_j`.
pub fn passive_energy(spectrum: &[f64], energies: &[f64]) -> f64 {
    sorted_descending(spectrum)
        .iter()
        .zip(energies)
        .map(|(r, e)| r * e)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, diag_real, max_abs_diff, outer, ZERO};
    use crate::random::{haar_unitary, random_density, random_hermitian, random_probability};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sigma_z() -> HamiltonianData {
        HamiltonianData::from_matrix(diag_real(&[1.0, -1.0])).unwrap()
    }

    fn ket0() -> DensityMatrix {
        DensityMatrix::pure(&[c(1., 0.), ZERO]).unwrap()
    }

    fn random_pair(d: usize, rng: &mut ChaCha8Rng) -> (DensityMatrix, HamiltonianData) {
        let rho = DensityMatrix::new(random_density(d, rng)).unwrap();
        let h = HamiltonianData::from_matrix(random_hermitian(d, rng)).unwrap();
        (rho, h)
    }

    #[test]
    fn excited_qubit_releases_everything() {
        let report = exact_ergotropy(&ket0(), &sigma_z()).unwrap();
        assert!((report.value - 2.0).abs() < 1e-12);
        assert!((report.passive_state.matrix()[(1, 1)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_is_passive() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = HamiltonianData::from_matrix(random_hermitian(4, &mut rng)).unwrap();
        let report = exact_ergotropy(&DensityMatrix::maximally_mixed(4), &h).unwrap();
        assert!(report.value.abs() < 1e-12);
    }

    #[test]
    fn extraction_examples() {
        let h = sigma_z();
        let rho = ket0();
        assert_eq!(extraction_value(&rho, &h, &CMatrix::identity(2, 2)).unwrap(), 0.0);
        let x = CMatrix::from_row_slice(2, 2, &[ZERO, c(1., 0.), c(1., 0.), ZERO]);
        assert!((extraction_value(&rho, &h, &x).unwrap() - 2.0).abs() < 1e-12);
        let not_unitary = CMatrix::identity(2, 2).scale(1.1);
        assert!(matches!(
            extraction_value(&rho, &h, &not_unitary),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn optimal_unitary_attains_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for d in [2, 4, 8] {
            let (rho, h) = random_pair(d, &mut rng);
            let r = exact_ergotropy(&rho, &h).unwrap();
            let via_u = extraction_value(&rho, &h, &r.optimal_unitary).unwrap();
            assert!((via_u - r.value).abs() < 1e-9);
            let moved = &r.optimal_unitary * rho.matrix() * r.optimal_unitary.adjoint();
            assert!(max_abs_diff(&moved, r.passive_state.matrix()) < 1e-8);
            assert!(unitarity_deviation(&r.optimal_unitary) < 1e-9);
        }
    }

    #[test]
    fn invariants_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in 0..200 {
            let d = [2, 4, 8][k % 3];
            let (rho, h) = random_pair(d, &mut rng);
            let r = exact_ergotropy(&rho, &h).unwrap();
            assert!(r.value >= -1e-9);
            // passivity
            assert!(exact_ergotropy(&r.passive_state, &h).unwrap().value.abs() < 1e-8);
            // unitary invariance
            let u = haar_unitary(d, &mut rng);
            let rotated = DensityMatrix::new(crate::linalg::hermitize(&(&u * rho.matrix() * u.adjoint()))).unwrap();
            let pr = passive_energy(&r.state_spectrum, h.energies());
            let rr = exact_ergotropy(&rotated, &h).unwrap();
            let pr2 = passive_energy(&rr.state_spectrum, h.energies());
            assert!((pr - pr2).abs() < 1e-8);
            // decomposition
            let (_, inc) = dephase_incoherent(&rho, &h).unwrap();
            assert!(r.value >= inc - 1e-9);
        }
    }

    #[test]
    fn dephasing_examples() {
        let h = sigma_z();
        let plus = DensityMatrix::pure(&[c(1., 0.), c(1., 0.)]).unwrap();
        let (deph, inc) = dephase_incoherent(&plus, &h).unwrap();
        assert!(max_abs_diff(deph.matrix(), &CMatrix::identity(2, 2).unscale(2.0)) < 1e-12);
        assert!(inc.abs() < 1e-12);
        assert!((exact_ergotropy(&plus, &h).unwrap().value - 1.0).abs() < 1e-12);

        let diagonal = DensityMatrix::new(diag_real(&[0.3, 0.7])).unwrap();
        let h01 = HamiltonianData::diagonal(&[0.0, 1.0]).unwrap();
        let (deph, inc) = dephase_incoherent(&diagonal, &h01).unwrap();
        assert!(max_abs_diff(deph.matrix(), diagonal.matrix()) < 1e-12);
        // sorted-sum oracle: 0.3·0 + 0.7·1 − (0.7·0 + 0.3·1)
        assert!((inc - 0.4).abs() < 1e-12);
        assert!((exact_ergotropy(&diagonal, &h01).unwrap().value - inc).abs() < 1e-12);
    }

    #[test]
    fn majorization_examples() {
        assert!(majorizes(&[1.0, 0.0], &[0.5, 0.5]).unwrap());
        assert!(!majorizes(&[0.5, 0.5], &[1.0, 0.0]).unwrap());
        assert!(matches!(majorizes(&[0.5, 0.6], &[0.5, 0.5]), Err(Error::NotADistribution(_))));
        assert!(matches!(majorizes(&[1.0], &[0.5, 0.5]), Err(Error::LengthMismatch(1, 2))));
    }

    #[test]
    fn schur_concavity_of_passive_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut checked = 0;
        while checked < 50 {
            let d = 2 + checked % 5;
            let p = random_probability(d, &mut rng);
            // q = p mixed by a doubly stochastic (T-transform) step is majorized by p
            let lambda: f64 = rand::Rng::random(&mut rng);
            let (i, j) = (0, d - 1);
            let mut q = p.clone();
            q[i] = lambda * p[i] + (1.0 - lambda) * p[j];
            q[j] = lambda * p[j] + (1.0 - lambda) * p[i];
            assert!(majorizes(&p, &q).unwrap());
            let energies = crate::random::random_energies(d, &mut rng);
            let h = HamiltonianData::diagonal(&energies).unwrap();
            let rho_p = DensityMatrix::new(diag_real(&p)).unwrap();
            let rho_q = DensityMatrix::new(diag_real(&q)).unwrap();
            let pe = |rho: &DensityMatrix| {
                let r = exact_ergotropy(rho, &h).unwrap();
                h.mean_energy(rho) - r.value
            };
            assert!(pe(&rho_p) <= pe(&rho_q) + 1e-9);
            checked += 1;
        }
    }

    #[test]
    fn dimension_mismatch() {
        let h = sigma_z();
        let rho = DensityMatrix::maximally_mixed(4);
        assert!(matches!(exact_ergotropy(&rho, &h), Err(Error::DimensionMismatch { .. })));
        let _ = outer(&[c(1., 0.)]);
    }
}
