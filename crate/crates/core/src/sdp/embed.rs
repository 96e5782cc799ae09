//! Realification of Hermitian matrices.
//!
//! `M = R + iS` maps to the real symmetric `[[R, -S], [S, R]]`. The map is
//! linear and injective, preserves positive semidefiniteness, doubles every
//! eigenvalue's multiplicity and satisfies `⟨emb(A), emb(B)⟩ = 2 tr(AB)`.

use crate::error::Result;
use crate::linalg::{c, ensure_hermitian, CMatrix, RMatrix, HERMITIAN_TOL};

pub fn embed_complex(m: &CMatrix) -> Result<RMatrix> {
    ensure_hermitian(m, HERMITIAN_TOL)?;
    Ok(embed_unchecked(m))
}

pub(crate) fn embed_unchecked(m: &CMatrix) -> RMatrix {
    let d = m.nrows();
    let mut out = RMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            let z = m[(i, j)];
            out[(i, j)] = z.re;
            out[(i + d, j + d)] = z.re;
            out[(i + d, j)] = z.im;
            out[(i, j + d)] = -z.im;
        }
    }
    out
}

/// Inverse of [`embed_complex`] after projecting onto its image.
///
/// The input is first averaged with its conjugate under `J = [[0, -1], [1, 0]]`,
/// so any real symmetric matrix maps to the Hermitian matrix whose embedding
/// is closest to it. The trace halves.
pub fn recover_complex(r: &RMatrix) -> CMatrix {
    let d = r.nrows() / 2;
    CMatrix::from_fn(d, d, |i, j| {
        let re = 0.5 * (r[(i, j)] + r[(i + d, j + d)]);
        let im = 0.5 * (r[(i + d, j)] - r[(i, j + d)]);
        c(re, im)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::random::random_hermitian;
    use nalgebra::SymmetricEigen;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_embeds_to_identity() {
        assert_eq!(embed_complex(&CMatrix::identity(2, 2)).unwrap(), RMatrix::identity(4, 4));
    }

    #[test]
    fn sigma_y_block_layout() {
        let y = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]);
        let e = embed_complex(&y).unwrap();
        let expected = RMatrix::from_row_slice(
            4,
            4,
            &[0., 0., 0., 1., 0., 0., -1., 0., 0., -1., 0., 0., 1., 0., 0., 0.],
        );
        assert_eq!(e, expected);
        let mut spec: Vec<f64> = SymmetricEigen::new(e).eigenvalues.iter().copied().collect();
        spec.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in spec.iter().zip([-1.0, -1.0, 1.0, 1.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn spectrum_doubles() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let d = 1 + rand::Rng::random_range(&mut rng, 1..6usize);
            let m = random_hermitian(d, &mut rng);
            let mut small: Vec<f64> = crate::models::eigendecompose_hermitian(&m).unwrap().values;
            let mut doubled: Vec<f64> = small.iter().flat_map(|&v| [v, v]).collect();
            doubled.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut big: Vec<f64> = SymmetricEigen::new(embed_complex(&m).unwrap())
                .eigenvalues
                .iter()
                .copied()
                .collect();
            big.sort_by(|a, b| a.partial_cmp(b).unwrap());
            for (a, b) in big.iter().zip(&doubled) {
                assert!((a - b).abs() < 1e-10);
            }
            small.clear();
        }
    }

    #[test]
    fn roundtrip_and_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let m = random_hermitian(5, &mut rng);
        let e = embed_complex(&m).unwrap();
        assert!(max_abs_diff(&recover_complex(&e), &m) < 1e-12);
        let tr_m: f64 = m.diagonal().iter().map(|z| z.re).sum();
        assert!((e.trace() - 2.0 * tr_m).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        assert!(embed_complex(&m).is_err());
    }
}
