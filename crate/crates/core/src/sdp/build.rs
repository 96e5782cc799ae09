//! Translation of complex constraint data into embedded conic rows.

use num_complex::Complex64;

use super::conic::SparseSym;
use crate::linalg::{c, CMatrix};

/// Relative residual norm under which a constraint counts as dependent.
const DEPENDENCE_TOL: f64 = 1e-9;
/// Allowed right-hand-side mismatch of a dependent constraint.
const CONSISTENCY_TOL: f64 = 1e-8;

/// Real coordinates in which `tr(AB)` is the Euclidean inner product.
pub(crate) fn herm_coords(a: &CMatrix) -> Vec<f64> {
    let d = a.nrows();
    let mut v = Vec::with_capacity(d * d);
    let r2 = std::f64::consts::SQRT_2;
    for i in 0..d {
        v.push(a[(i, i)].re);
        for j in (i + 1)..d {
            v.push(r2 * a[(i, j)].re);
            v.push(r2 * a[(i, j)].im);
        }
    }
    v
}

pub(crate) fn from_coords(v: &[f64], d: usize) -> CMatrix {
    let mut a = CMatrix::zeros(d, d);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut k = 0;
    for i in 0..d {
        a[(i, i)] = c(v[k], 0.0);
        k += 1;
        for j in (i + 1)..d {
            let z = c(h * v[k], h * v[k + 1]);
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
            k += 2;
        }
    }
    a
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Orthonormalised, independent equality system.
#[derive(Debug, Clone)]
pub(crate) struct Presolved {
    pub rows: Vec<(CMatrix, f64)>,
    pub dropped: usize,
}

/// Modified Gram–Schmidt over equality rows. Returns `None` when a dependent
/// row contradicts the others.
pub(crate) fn presolve_equalities(rows: &[(CMatrix, f64)]) -> Option<Presolved> {
    let Some(d) = rows.first().map(|r| r.0.nrows()) else {
        return Some(Presolved {
            rows: Vec::new(),
            dropped: 0,
        });
    };
    let mut basis: Vec<(Vec<f64>, f64)> = Vec::new();
    let mut dropped = 0;
    for (a, b) in rows {
        let mut v = herm_coords(a);
        let mut rhs = *b;
        let norm0 = dot(&v, &v).sqrt();
        if norm0 == 0.0 {
            if rhs.abs() > CONSISTENCY_TOL {
                return None;
            }
            dropped += 1;
            continue;
        }
        // two passes keep the basis orthogonal to working precision
        for _ in 0..2 {
            for (q, qb) in &basis {
                let coef = dot(&v, q);
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= coef * qi;
                }
                rhs -= coef * qb;
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm <= DEPENDENCE_TOL * norm0.max(1.0) {
            if rhs.abs() > CONSISTENCY_TOL * norm0.max(1.0) {
                return None;
            }
            dropped += 1;
            continue;
        }
        for vi in &mut v {
            *vi /= norm;
        }
        basis.push((v, rhs / norm));
    }
    Some(Presolved {
        rows: basis
            .into_iter()
            .map(|(v, b)| (from_coords(&v, d), b))
            .collect(),
        dropped,
    })
}

/// Upper-triangle entries of `scale · emb(M)` for Hermitian `M` placed at
/// complex offset `offset` inside a complex block of size `big`.
pub(crate) fn embed_sparse(
    m: &CMatrix,
    offset: usize,
    big: usize,
    scale: f64,
) -> SparseSym {
    let d = m.nrows();
    let mut entries = Vec::new();
    for j in 0..d {
        for i in 0..=j {
            let z: Complex64 = m[(i, j)];
            push_embedded(&mut entries, i + offset, j + offset, big, z * scale);
        }
    }
    SparseSym {
        n: 2 * big,
        entries,
    }
}

/// Adds the embedded image of the Hermitian pair `(i, j) = z`, `(j, i) = z̄`
/// with `i <= j` in a complex block of size `big`.
pub(crate) fn push_embedded(
    entries: &mut Vec<(usize, usize, f64)>,
    i: usize,
    j: usize,
    big: usize,
    z: Complex64,
) {
    if z.re != 0.0 {
        entries.push((i, j, z.re));
        entries.push((i + big, j + big, z.re));
    }
    if i != j && z.im != 0.0 {
        entries.push((j, i + big, z.im));
        entries.push((i, j + big, -z.im));
    }
}
