//! Semidefinite programs over complex density matrices.
//!
//! Problems are posed on Hermitian `d×d` matrices and solved on their real
//! `2d×2d` embedding by the interior-point method in [`conic`]. Interval
//! constraints `lo ≤ tr(BX) ≤ hi` become two equalities with nonnegative
//! slacks; equality rows are orthonormalised first so that redundant data
//! (for example energy projectors next to the trace condition) never makes
//! the Schur complement singular.

mod build;
mod conic;
mod embed;

pub use embed::{embed_complex, recover_complex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    c, ensure_dim, ensure_hermitian, hermitize, trace_product_re, trace_re, CMatrix, RMatrix,
    HERMITIAN_TOL,
};
use build::{embed_sparse, presolve_equalities, push_embedded};
use conic::{ConicOptions, ConicProblem, ConicStatus, Row, SparseSym, StartPoint};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    /// Absolute duality gap and complementarity target.
    pub tol_gap: f64,
    /// Relative primal and dual residual target.
    pub tol_feas: f64,
    /// Admissible negative eigenvalue of a returned matrix.
    pub tol_psd: f64,
    pub max_iterations: usize,
    /// Threshold on the normalised Farkas residual.
    pub infeasibility_tol: f64,
    /// Multiplier on the default interior starting point.
    pub init_scale: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol_gap: 1e-7,
            tol_feas: 1e-8,
            tol_psd: 1e-9,
            max_iterations: 200,
            infeasibility_tol: 1e-6,
            init_scale: 1.0,
        }
    }
}

impl SolverOptions {
    fn conic(&self, target_gap: f64) -> ConicOptions {
        ConicOptions {
            tol_gap: self.tol_gap,
            tol_feas: self.tol_feas,
            target_gap: target_gap.min(self.tol_gap),
            infeasibility_tol: self.infeasibility_tol,
            max_iterations: self.max_iterations,
            init_scale: self.init_scale,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    MaxIterations,
}

impl From<ConicStatus> for SdpStatus {
    fn from(s: ConicStatus) -> Self {
        match s {
            ConicStatus::Optimal => SdpStatus::Optimal,
            ConicStatus::Infeasible => SdpStatus::Infeasible,
            ConicStatus::MaxIterations => SdpStatus::MaxIterations,
        }
    }
}

/// `min tr(CX)` over Hermitian `X ⪰ 0` subject to linear data.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    pub dim: usize,
    pub objective: Option<CMatrix>,
    pub equalities: Vec<(CMatrix, f64)>,
    pub intervals: Vec<(CMatrix, f64, f64)>,
    pub unit_trace: bool,
}

impl SdpProblem {
    /// Problem over density matrices (`tr X = 1`) with no further data.
    pub fn states(dim: usize) -> Self {
        Self {
            dim,
            objective: None,
            equalities: Vec::new(),
            intervals: Vec::new(),
            unit_trace: true,
        }
    }

    pub fn with_objective(mut self, c: CMatrix) -> Self {
        self.objective = Some(c);
        self
    }

    pub fn equality(mut self, a: CMatrix, b: f64) -> Self {
        self.equalities.push((a, b));
        self
    }

    pub fn interval(mut self, a: CMatrix, lo: f64, hi: f64) -> Self {
        self.intervals.push((a, lo, hi));
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Config("SDP dimension must be positive".into()));
        }
        let check = |m: &CMatrix| -> Result<()> {
            ensure_dim(m, self.dim)?;
            ensure_hermitian(m, HERMITIAN_TOL)
        };
        if let Some(c) = &self.objective {
            check(c)?;
        }
        for (a, b) in &self.equalities {
            check(a)?;
            if !b.is_finite() {
                return Err(Error::Config("non-finite equality target".into()));
            }
        }
        for (a, lo, hi) in &self.intervals {
            check(a)?;
            if !(lo <= hi) {
                return Err(Error::Config(format!("interval [{lo}, {hi}] is empty")));
            }
        }
        Ok(())
    }

    /// Largest violation of the constraints at `x`.
    pub fn residual(&self, x: &CMatrix) -> f64 {
        let mut r: f64 = 0.0;
        if self.unit_trace {
            r = r.max((trace_re(x) - 1.0).abs());
        }
        for (a, b) in &self.equalities {
            r = r.max((trace_product_re(a, x) - b).abs());
        }
        for (a, lo, hi) in &self.intervals {
            let v = trace_product_re(a, x);
            r = r.max(lo - v).max(v - hi);
        }
        r
    }

    /// Equality rows, trace row first. Zero-width intervals are merged in
    /// when `merge` is set.
    fn equality_rows(&self, merge: bool) -> Vec<(CMatrix, f64)> {
        let mut rows = Vec::new();
        if self.unit_trace {
            rows.push((CMatrix::identity(self.dim, self.dim), 1.0));
        }
        rows.extend(self.equalities.iter().map(|(a, b)| (hermitize(a), *b)));
        if merge {
            for (a, lo, hi) in &self.intervals {
                if hi - lo <= 0.0 {
                    rows.push((hermitize(a), 0.5 * (lo + hi)));
                }
            }
        }
        rows
    }

    fn slack_intervals(&self, merge: bool) -> impl Iterator<Item = &(CMatrix, f64, f64)> {
        self.intervals
            .iter()
            .filter(move |(_, lo, hi)| !merge || hi - lo > 0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution {
    pub x: CMatrix,
    pub objective_value: f64,
    /// Dual bound on the embedded problem.
    pub dual_objective: f64,
    /// Largest constraint violation of the returned `x`.
    pub primal_residual: f64,
    /// Relative dual residual of the final iterate.
    pub dual_residual: f64,
    pub duality_gap: f64,
    pub min_eigenvalue: f64,
    pub status: SdpStatus,
    pub iterations: usize,
    /// Equality rows removed as linearly dependent.
    pub dropped_rows: usize,
}

impl SdpSolution {
    fn infeasible(dim: usize, dropped_rows: usize) -> Self {
        Self {
            x: CMatrix::identity(dim, dim).unscale(dim as f64),
            objective_value: f64::NAN,
            dual_objective: f64::NAN,
            primal_residual: f64::INFINITY,
            dual_residual: f64::NAN,
            duality_gap: f64::NAN,
            min_eigenvalue: f64::NAN,
            status: SdpStatus::Infeasible,
            iterations: 0,
            dropped_rows,
        }
    }
}

/// Assembled conic form plus bookkeeping for extraction.
struct Assembly {
    conic: ConicProblem,
    start: StartPoint,
    dropped: usize,
}

/// Adds the data rows acting on the `X` block (`block`), with LP slacks
/// starting at `lp_offset`. `inflation` names an LP column that widens every
/// interval symmetrically.
fn data_rows(
    problem: &SdpProblem,
    block: usize,
    lp_offset: usize,
    inflation: Option<usize>,
) -> Option<(Vec<Row>, usize, usize)> {
    let d = problem.dim;
    // widened intervals keep their slacks even at zero width
    let merge = inflation.is_none();
    let pre = presolve_equalities(&problem.equality_rows(merge))?;
    let mut rows = Vec::new();
    for (a, b) in &pre.rows {
        rows.push(Row {
            blocks: vec![(block, embed_sparse(a, 0, d, 0.5))],
            lp: Vec::new(),
            rhs: *b,
        });
    }
    let mut slack = lp_offset;
    for (a, lo, hi) in problem.slack_intervals(merge) {
        let coeffs = embed_sparse(&hermitize(a), 0, d, 0.5);
        let mut lower = vec![(slack, -1.0)];
        let mut upper = vec![(slack + 1, 1.0)];
        if let Some(t) = inflation {
            lower.push((t, 1.0));
            upper.push((t, -1.0));
        }
        rows.push(Row {
            blocks: vec![(block, coeffs.clone())],
            lp: lower,
            rhs: *lo,
        });
        rows.push(Row {
            blocks: vec![(block, coeffs)],
            lp: upper,
            rhs: *hi,
        });
        slack += 2;
    }
    Some((rows, slack - lp_offset, pre.dropped))
}

fn x_start(problem: &SdpProblem) -> f64 {
    if problem.unit_trace {
        1.0 / problem.dim as f64
    } else {
        1.0
    }
}

fn assemble_linear(problem: &SdpProblem) -> Option<Assembly> {
    let d = problem.dim;
    let (rows, n_lp, dropped) = data_rows(problem, 0, 0, None)?;
    let c_block = match &problem.objective {
        Some(cm) => embed_sparse(&hermitize(cm), 0, d, 0.5).to_dense(),
        None => RMatrix::zeros(2 * d, 2 * d),
    };
    let conic = ConicProblem {
        block_sizes: vec![2 * d],
        n_lp,
        c_blocks: vec![c_block],
        c_lp: vec![0.0; n_lp],
        rows,
    };
    let start = conic::default_start(&conic, vec![x_start(problem)]);
    Some(Assembly {
        conic,
        start,
        dropped,
    })
}

/// Block 0 is `X`; block 1 is `Z = [[Y, B], [B†, L]]` of complex size `2d`,
/// tied to `X` by `B = X` and `L = I`, so `Z ⪰ 0` iff `Y ⪰ X²`.
fn assemble_min_purity(problem: &SdpProblem) -> Option<Assembly> {
    let d = problem.dim;
    let big = 2 * d;
    let (mut rows, n_lp, dropped) = data_rows(problem, 0, 0, None)?;

    let r2 = std::f64::consts::FRAC_1_SQRT_2;
    for p in 0..d {
        for q in 0..d {
            // F = E_pq and F = iE_pq: Re tr(F† B) = Re tr(F† X)
            for f in [c(1.0, 0.0), c(0.0, 1.0)] {
                let mut z_entries = Vec::new();
                push_embedded(&mut z_entries, p, q + d, big, f * 0.25);
                let mut herm = CMatrix::zeros(d, d);
                herm[(p, q)] += f * 0.5;
                herm[(q, p)] += f.conj() * 0.5;
                let mut blocks = vec![(
                    1,
                    SparseSym {
                        n: 2 * big,
                        entries: z_entries,
                    },
                )];
                let x_part = embed_sparse(&herm, 0, d, -0.5);
                if !x_part.entries.is_empty() {
                    blocks.push((0, x_part));
                }
                rows.push(Row {
                    blocks,
                    lp: Vec::new(),
                    rhs: 0.0,
                });
            }
        }
    }
    // L = I over an orthonormal Hermitian basis
    for p in 0..d {
        for q in p..d {
            let variants: &[(f64, f64, f64)] = if p == q {
                &[(1.0, 0.0, 1.0)]
            } else {
                &[(r2, 0.0, 0.0), (0.0, r2, 0.0)]
            };
            for &(re, im, rhs) in variants {
                let mut entries = Vec::new();
                push_embedded(&mut entries, p + d, q + d, big, c(re, im) * 0.5);
                rows.push(Row {
                    blocks: vec![(
                        1,
                        SparseSym {
                            n: 2 * big,
                            entries,
                        },
                    )],
                    lp: Vec::new(),
                    rhs,
                });
            }
        }
    }
    let mut c_z = RMatrix::zeros(2 * big, 2 * big);
    for p in 0..d {
        c_z[(p, p)] = 0.5;
        c_z[(p + big, p + big)] = 0.5;
    }
    let conic = ConicProblem {
        block_sizes: vec![2 * d, 2 * big],
        n_lp,
        c_blocks: vec![RMatrix::zeros(2 * d, 2 * d), c_z],
        c_lp: vec![0.0; n_lp],
        rows,
    };
    let start = conic::default_start(&conic, vec![x_start(problem), 1.0]);
    Some(Assembly {
        conic,
        start,
        dropped,
    })
}

fn extract(problem: &SdpProblem, xr: &RMatrix) -> CMatrix {
    let mut x = hermitize(&recover_complex(xr));
    if problem.unit_trace {
        let tr = trace_re(&x);
        if tr > 0.0 {
            x.unscale_mut(tr);
        }
    }
    x
}

fn min_eigenvalue(x: &CMatrix) -> f64 {
    crate::models::eigendecompose_hermitian(x)
        .map(|e| e.values[0])
        .unwrap_or(f64::NAN)
}

fn run(problem: &SdpProblem, asm: Assembly, opts: &ConicOptions) -> SdpSolution {
    let sol = conic::solve(&asm.conic, &asm.start, opts);
    let x = extract(problem, &sol.x_blocks[0]);
    log::debug!(
        "sdp: status {:?} after {} iterations, gap {:.2e}, pinf {:.2e}, dinf {:.2e}",
        sol.status,
        sol.iterations,
        (sol.primal_objective - sol.dual_objective).abs(),
        sol.primal_infeasibility,
        sol.dual_infeasibility
    );
    SdpSolution {
        objective_value: problem
            .objective
            .as_ref()
            .map(|c| trace_product_re(c, &x))
            .unwrap_or(0.0),
        dual_objective: sol.dual_objective,
        primal_residual: problem.residual(&x),
        dual_residual: sol.dual_infeasibility,
        duality_gap: (sol.primal_objective - sol.dual_objective).abs(),
        min_eigenvalue: min_eigenvalue(&x),
        status: sol.status.into(),
        iterations: sol.iterations,
        dropped_rows: asm.dropped,
        x,
    }
}

/// Minimises `tr(CX)`; a missing objective is treated as zero.
pub fn solve_linear(problem: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    problem.validate()?;
    match assemble_linear(problem) {
        Some(asm) => Ok(run(problem, asm, &opts.conic(opts.tol_gap))),
        None => Ok(SdpSolution::infeasible(problem.dim, 0)),
    }
}

/// Purity is strongly convex, so a gap `g` only pins the minimiser to about
/// `√g`; purity solves keep refining past `tol_gap` towards this value.
const PURITY_TARGET_GAP: f64 = 1e-12;

/// Minimises `tr(X²)`; any objective on `problem` is ignored and the
/// reported `objective_value` is the purity of the returned matrix.
pub fn solve_min_purity(problem: &SdpProblem, opts: &SolverOptions) -> Result<SdpSolution> {
    problem.validate()?;
    let Some(asm) = assemble_min_purity(problem) else {
        return Ok(SdpSolution::infeasible(problem.dim, 0));
    };
    let unobjective = SdpProblem {
        objective: None,
        ..problem.clone()
    };
    let mut sol = run(&unobjective, asm, &opts.conic(PURITY_TARGET_GAP));
    if sol.status != SdpStatus::Infeasible {
        if let Some(x) = least_norm_state(problem, opts.tol_psd) {
            log::debug!("min purity: replaced the interior-point iterate by the least-norm solution");
            sol.primal_residual = problem.residual(&x);
            sol.min_eigenvalue = min_eigenvalue(&x);
            sol.status = SdpStatus::Optimal;
            sol.x = x;
        }
    }
    sol.objective_value = trace_product_re(&sol.x, &sol.x);
    Ok(sol)
}

/// With equality data only, the minimum-norm solution of the linear system is
/// the purity minimiser whenever it is positive semidefinite. Returns it in
/// that case; the interior-point iterate is only accurate to about `√gap`.
fn least_norm_state(problem: &SdpProblem, tol_psd: f64) -> Option<CMatrix> {
    if !problem.intervals.is_empty() {
        return None;
    }
    let d = problem.dim;
    let mut rows: Vec<(CMatrix, f64)> = problem.equalities.clone();
    if problem.unit_trace {
        rows.push((CMatrix::identity(d, d), 1.0));
    }
    if rows.is_empty() {
        return None;
    }
    let m = rows.len();
    let gram = RMatrix::from_fn(m, m, |i, j| trace_product_re(&rows[i].0, &rows[j].0));
    let rhs = nalgebra::DVector::from_iterator(m, rows.iter().map(|r| r.1));
    let scale = gram.diagonal().max().max(1.0);
    let lambda = gram.svd(true, true).solve(&rhs, 1e-12 * scale).ok()?;
    let mut x = CMatrix::zeros(d, d);
    for (l, (a, _)) in lambda.iter().zip(&rows) {
        x += a * c(*l, 0.0);
    }
    let x = hermitize(&x);
    (problem.residual(&x) <= 1e-9 && min_eigenvalue(&x) >= -tol_psd).then_some(x)
}

/// Smallest `t ≥ 0` such that widening every interval (zero-width ones
/// included) to `[lo − t, hi + t]` makes the problem feasible. `None` when
/// no widening helps, i.e. the equalities alone are inconsistent.
pub fn min_interval_inflation(problem: &SdpProblem, opts: &SolverOptions) -> Result<Option<f64>> {
    problem.validate()?;
    let d = problem.dim;
    let n_int = problem.intervals.len();
    let t = 2 * n_int;
    let Some((rows, n_slack, _)) = data_rows(problem, 0, 0, Some(t)) else {
        return Ok(None);
    };
    let n_lp = n_slack + 1;
    let mut c_lp = vec![0.0; n_lp];
    c_lp[t] = 1.0;
    let conic = ConicProblem {
        block_sizes: vec![2 * d],
        n_lp,
        c_blocks: vec![RMatrix::zeros(2 * d, 2 * d)],
        c_lp,
        rows,
    };
    let start = conic::default_start(&conic, vec![x_start(problem)]);
    let sol = conic::solve(&conic, &start, &opts.conic(opts.tol_gap));
    match sol.status {
        ConicStatus::Infeasible => Ok(None),
        _ => Ok(Some(sol.x_lp[t].max(0.0))),
    }
}
