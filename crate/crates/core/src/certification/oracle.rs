//! Brute-force minimum of the ergotropy over a qubit feasible set.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};

use super::FeasibleSetSpec;
use crate::error::{Error, Result};
use crate::linalg::{trace_product_re, trace_re, CMatrix};
use crate::models::HamiltonianData;
use crate::pauli::{parse_pauli, pauli_matrix};

/// Largest number of grid points evaluated.
pub const MAX_GRID_POINTS: u128 = 50_000_000;
const RANK_TOL: f64 = 1e-10;
const EQUALITY_TOL: f64 = 1e-9;
const MEMBERSHIP_TOL: f64 = 1e-12;

fn sigmas() -> [CMatrix; 3] {
    ["X", "Y", "Z"].map(|s| pauli_matrix(&parse_pauli(s).unwrap()).unwrap())
}

/// `(tr A, (tr Aσ_x, tr Aσ_y, tr Aσ_z))`, so `tr(Aρ) = (a_0 + a·r)/2`.
fn bloch_coefficients(a: &CMatrix, sig: &[CMatrix; 3]) -> (f64, Vector3<f64>) {
    (
        trace_re(a),
        Vector3::new(
            trace_product_re(a, &sig[0]),
            trace_product_re(a, &sig[1]),
            trace_product_re(a, &sig[2]),
        ),
    )
}

/// Ergotropy of `(I + r·σ)/2`; its eigenvalues are `(1 ± |r|)/2`.
pub(crate) fn bloch_ergotropy(r: &Vector3<f64>, h0: f64, hv: &Vector3<f64>, e: (f64, f64)) -> f64 {
    let len = r.norm();
    let mean = 0.5 * (h0 + hv.dot(r));
    let passive = 0.5 * (1.0 + len) * e.0 + 0.5 * (1.0 - len) * e.1;
    mean - passive
}

/// Minimum exact ergotropy over grid points of the feasible Bloch region.
///
/// Equality constraints cut the ball down to an affine slice; each free
/// direction of that slice is sampled at `resolution` evenly spaced points
/// spanning the slice's radius. Every evaluated point is feasible, so the
/// result approaches the true minimum from above.
pub fn qubit_minimax_oracle(spec: &FeasibleSetSpec, h: &HamiltonianData, resolution: usize) -> Result<f64> {
    if spec.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: spec.dim(),
        });
    }
    crate::linalg::ensure_dim(h.matrix(), 2)?;
    if resolution < 2 {
        return Err(Error::Config("grid resolution must be at least 2".into()));
    }
    let sig = sigmas();
    let (h0, hv) = bloch_coefficients(h.matrix(), &sig);
    let energies = (h.energies()[0], h.energies()[1]);

    let mut normal = Matrix3::zeros();
    let mut rhs = Vector3::zeros();
    let mut intervals = Vec::new();
    let mut equalities = Vec::new();
    for c in spec.constraints() {
        let (a0, a) = bloch_coefficients(&c.observable, &sig);
        // tr(Oρ) = (a0 + a·r)/2
        if c.epsilon == 0.0 {
            let b = 2.0 * c.target - a0;
            normal += a * a.transpose();
            rhs += a * b;
            equalities.push((a, b));
        } else {
            intervals.push((a, 2.0 * c.lower() - a0, 2.0 * c.upper() - a0));
        }
    }

    let eig = SymmetricEigen::new(normal);
    let scale = eig.eigenvalues.amax().max(1.0);
    let mut r0 = Vector3::zeros();
    let mut free = Vec::new();
    for k in 0..3 {
        let v = eig.eigenvectors.column(k).into_owned();
        let lambda = eig.eigenvalues[k];
        if lambda > RANK_TOL * scale {
            r0 += v * (v.dot(&rhs) / lambda);
        } else {
            free.push(v);
        }
    }
    if equalities.iter().any(|(a, b)| (a.dot(&r0) - b).abs() > EQUALITY_TOL) {
        return Err(Error::EmptyGrid);
    }
    let radius_sq = 1.0 - r0.norm_squared();
    if radius_sq < -MEMBERSHIP_TOL {
        return Err(Error::EmptyGrid);
    }
    let radius = radius_sq.max(0.0).sqrt();

    let axis_points = if radius == 0.0 { 1 } else { resolution };
    let total = (axis_points as u128).pow(free.len() as u32);
    if total > MAX_GRID_POINTS {
        return Err(Error::GridTooLarge(total));
    }
    let coordinate = |i: usize| -> f64 {
        if axis_points == 1 {
            0.0
        } else {
            -radius + 2.0 * radius * i as f64 / (axis_points - 1) as f64
        }
    };

    let mut best = f64::INFINITY;
    let mut index = vec![0usize; free.len()];
    for _ in 0..total {
        let mut r = r0;
        for (v, &i) in free.iter().zip(&index) {
            r += v * coordinate(i);
        }
        let len = r.norm();
        let inside = len <= 1.0 + MEMBERSHIP_TOL
            && intervals.iter().all(|(a, lo, hi)| {
                let v = a.dot(&r);
                v >= lo - MEMBERSHIP_TOL && v <= hi + MEMBERSHIP_TOL
            });
        if inside {
            if len > 1.0 {
                r /= len;
            }
            best = best.min(bloch_ergotropy(&r, h0, &hv, energies));
        }
        for slot in index.iter_mut() {
            *slot += 1;
            if *slot < axis_points {
                break;
            }
            *slot = 0;
        }
    }
    if best.is_finite() {
        Ok(best)
    } else {
        Err(Error::EmptyGrid)
    }
}
