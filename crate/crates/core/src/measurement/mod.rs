//! Finite-statistics layer: Hoeffding half-widths, simulated shot data,
//! coverage experiments and measurement-record files.

mod records;
mod shots;

pub use records::{load_records, parse_records_csv, parse_records_json, write_records_csv, ExperimentPlan, ShotRecord, LATTICE_TOL};
pub use shots::{coverage_rate, simulate_plan, simulate_shots, simulate_shots_with};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::models::eigendecompose_hermitian;

/// Order in which the four-qubit GHZ experiment measured its 60 Pauli
/// strings (repeats included).
pub const GHZ4_MEASUREMENT_ORDER: [&str; 60] = [
    "YYYY", "XXXX", "ZXXY", "YZYX", "XZYZ", "ZYZX", "ZYYZ", "YYYY", "ZXXY", "XXXX", "YZYX", "ZYZX",
    "XZYZ", "ZYZY", "ZXXY", "YXZZ", "XYXX", "ZZZZ", "XZXZ", "ZYZX", "XXYY", "YZXY", "ZZYX", "XYXX",
    "YZZZ", "ZZYY", "ZZZY", "YZXY", "XZZY", "ZYYX", "YXXX", "ZZYY", "XYZY", "XXZZ", "XZXY", "ZYYX",
    "YXXZ", "YYXZ", "XZXX", "XXZZ", "XXXY", "YZZY", "ZYYY", "YYXZ", "YYXX", "YZZY", "YZXZ", "YXYX",
    "YXYX", "YZYZ", "ZZXZ", "ZXXZ", "XYXZ", "ZXXZ", "ZXZZ", "YZZX", "XZZX", "YZZX", "XYYZ", "XYZZ",
];

/// Half-width `ε = √(2 ln(2K/δ) / N)` such that `K` intervals of ±1-valued
/// estimates from `N` shots each hold jointly with probability `≥ 1 − δ`.
pub fn hoeffding_epsilon(shots: u64, k: usize, delta: f64) -> Result<f64> {
    if shots == 0 {
        return Err(Error::ZeroShots);
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidDelta(delta));
    }
    if k == 0 {
        return Err(Error::Config("observable count K must be positive".into()));
    }
    Ok((2.0 * (2.0 * k as f64 / delta).ln() / shots as f64).sqrt())
}

/// Affine map `O ↦ (2O − (λ_max + λ_min)) / (λ_max − λ_min)` taking the
/// spectrum of `O` onto `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableRescaling {
    pub center: f64,
    pub half_range: f64,
}

impl ObservableRescaling {
    pub fn for_observable(o: &CMatrix) -> Result<Self> {
        let values = eigendecompose_hermitian(o)?.values;
        let (lo, hi) = (values[0], values[values.len() - 1]);
        if hi - lo <= 0.0 {
            return Err(Error::Config("observable is proportional to the identity".into()));
        }
        Ok(Self {
            center: 0.5 * (hi + lo),
            half_range: 0.5 * (hi - lo),
        })
    }

    pub fn observable(&self, o: &CMatrix) -> CMatrix {
        let d = o.nrows();
        (o - CMatrix::identity(d, d).scale(self.center)).unscale(self.half_range)
    }

    pub fn value(&self, v: f64) -> f64 {
        (v - self.center) / self.half_range
    }
}
