//! Infeasible-start primal-dual path-following method for real conic programs
//!
//! ```text
//! min ⟨C, x⟩  s.t.  A x = b,  x ∈ S₊^{n_1} × … × S₊^{n_k} × ℝ₊^p
//! max bᵀy     s.t.  A*y + s = C,  s in the same cone
//! ```
//!
//! Search directions use Nesterov–Todd scaling. With `L_x`, `L_s` the Cholesky
//! factors of `X`, `S` and `L_sᵀ L_x = U D Vᵀ`, the scaling matrix is
//! `G = L_x V D^{-1/2}`; then `W = G Gᵀ` satisfies `W S W = X` and both
//! `G⁻¹ X G⁻ᵀ` and `Gᵀ S G` equal the diagonal `D`. Each iteration is a
//! Mehrotra predictor-corrector pair sharing one Schur-complement
//! factorisation.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen, LU};

use crate::linalg::RMatrix;

/// Upper-triangular sparse storage of a real symmetric matrix.
#[derive(Debug, Clone, Default)]
pub(crate) struct SparseSym {
    pub n: usize,
    /// `(i, j, v)` with `i <= j`.
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseSym {
    pub fn inner(&self, x: &RMatrix) -> f64 {
        self.entries
            .iter()
            .map(|&(i, j, v)| if i == j { v * x[(i, i)] } else { v * (x[(i, j)] + x[(j, i)]) })
            .sum()
    }

    pub fn add_to(&self, alpha: f64, out: &mut RMatrix) {
        for &(i, j, v) in &self.entries {
            out[(i, j)] += alpha * v;
            if i != j {
                out[(j, i)] += alpha * v;
            }
        }
    }

    pub fn to_dense(&self) -> RMatrix {
        let mut m = RMatrix::zeros(self.n, self.n);
        self.add_to(1.0, &mut m);
        m
    }

    /// `W A W` for symmetric `W`.
    fn congruence(&self, w: &RMatrix) -> RMatrix {
        let n = self.n;
        if self.entries.len() > n {
            let a = self.to_dense();
            return w * a * w;
        }
        let mut out = RMatrix::zeros(n, n);
        for &(i, j, v) in &self.entries {
            let wi = w.column(i);
            let wj = w.column(j);
            if i == j {
                out.ger(v, &wi, &wi, 1.0);
            } else {
                out.ger(v, &wi, &wj, 1.0);
                out.ger(v, &wj, &wi, 1.0);
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Row {
    /// `(block index, coefficient matrix)`; blocks not listed are zero.
    pub blocks: Vec<(usize, SparseSym)>,
    pub lp: Vec<(usize, f64)>,
    pub rhs: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct ConicProblem {
    pub block_sizes: Vec<usize>,
    pub n_lp: usize,
    pub c_blocks: Vec<RMatrix>,
    pub c_lp: Vec<f64>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ConicOptions {
    pub tol_gap: f64,
    pub tol_feas: f64,
    /// Once `tol_gap` is met, iterations continue towards this gap for as
    /// long as the iterate keeps meeting the acceptance tolerances.
    pub target_gap: f64,
    pub infeasibility_tol: f64,
    pub max_iterations: usize,
    /// Multiplier applied to the default starting point.
    pub init_scale: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ConicStatus {
    Optimal,
    Infeasible,
    MaxIterations,
}

#[derive(Debug, Clone)]
pub(crate) struct ConicSolution {
    pub x_blocks: Vec<RMatrix>,
    pub x_lp: Vec<f64>,
    pub status: ConicStatus,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub primal_infeasibility: f64,
    pub dual_infeasibility: f64,
    pub iterations: usize,
}

/// Per-block starting values: `X = x_scale I`, `S = s_scale I`.
#[derive(Debug, Clone)]
pub(crate) struct StartPoint {
    pub x_blocks: Vec<f64>,
    pub x_lp: Vec<f64>,
    pub s_scale: f64,
}

#[derive(Clone)]
struct Iterate {
    x: Vec<RMatrix>,
    xl: Vec<f64>,
    s: Vec<RMatrix>,
    sl: Vec<f64>,
    y: Vec<f64>,
}

struct BlockScaling {
    g: RMatrix,
    g_inv: RMatrix,
    w: RMatrix,
    lambda: Vec<f64>,
    lx_inv: RMatrix,
    ls_inv: RMatrix,
}

struct LpScaling {
    /// `x/s`, the scalar analogue of `W · W`.
    omega: Vec<f64>,
    /// `√(x s)`.
    lambda: Vec<f64>,
    /// `√(x/s)`.
    root: Vec<f64>,
}

struct Direction {
    dx: Vec<RMatrix>,
    dxl: Vec<f64>,
    ds: Vec<RMatrix>,
    dsl: Vec<f64>,
    dy: Vec<f64>,
}

enum SchurFactor {
    Chol(Cholesky<f64, nalgebra::Dyn>),
    Lu(LU<f64, nalgebra::Dyn, nalgebra::Dyn>),
}

impl SchurFactor {
    fn solve(&self, rhs: &[f64]) -> Option<Vec<f64>> {
        let b = nalgebra::DVector::from_column_slice(rhs);
        let x = match self {
            SchurFactor::Chol(c) => Some(c.solve(&b)),
            SchurFactor::Lu(lu) => lu.solve(&b),
        }?;
        Some(x.iter().copied().collect())
    }
}

fn dot(a: &RMatrix, b: &RMatrix) -> f64 {
    a.dot(b)
}

fn symmetrize(m: &mut RMatrix) {
    let n = m.nrows();
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

fn lower_inverse(l: &RMatrix) -> Option<RMatrix> {
    let n = l.nrows();
    l.solve_lower_triangular(&RMatrix::identity(n, n))
}

impl ConicProblem {
    fn apply_a(&self, x: &[RMatrix], xl: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| {
                let mut v: f64 = row.blocks.iter().map(|(k, a)| a.inner(&x[*k])).sum();
                v += row.lp.iter().map(|&(l, a)| a * xl[l]).sum::<f64>();
                v
            })
            .collect()
    }

    fn apply_at(&self, y: &[f64]) -> (Vec<RMatrix>, Vec<f64>) {
        let mut blocks: Vec<RMatrix> = self
            .block_sizes
            .iter()
            .map(|&n| RMatrix::zeros(n, n))
            .collect();
        let mut lp = vec![0.0; self.n_lp];
        for (row, &yi) in self.rows.iter().zip(y) {
            if yi == 0.0 {
                continue;
            }
            for (k, a) in &row.blocks {
                a.add_to(yi, &mut blocks[*k]);
            }
            for &(l, a) in &row.lp {
                lp[l] += yi * a;
            }
        }
        (blocks, lp)
    }

    fn objective(&self, x: &[RMatrix], xl: &[f64]) -> f64 {
        let mut v: f64 = self.c_blocks.iter().zip(x).map(|(c, x)| dot(c, x)).sum();
        v += self.c_lp.iter().zip(xl).map(|(c, x)| c * x).sum::<f64>();
        v
    }

    fn barrier_order(&self) -> f64 {
        (self.block_sizes.iter().sum::<usize>() + self.n_lp) as f64
    }

    fn c_norm(&self) -> f64 {
        let mut s: f64 = self.c_blocks.iter().map(|c| c.norm_squared()).sum();
        s += self.c_lp.iter().map(|c| c * c).sum::<f64>();
        s.sqrt()
    }
}

fn block_scaling(x: &RMatrix, s: &RMatrix) -> Option<BlockScaling> {
    let lx = Cholesky::new(x.clone())?.l();
    let ls = Cholesky::new(s.clone())?.l();
    let prod = ls.transpose() * &lx;
    let svd = prod.svd(true, true);
    let v = svd.v_t?.transpose();
    let d = svd.singular_values;
    if d.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return None;
    }
    let n = x.nrows();
    let mut g = &lx * &v;
    for j in 0..n {
        let f = 1.0 / d[j].sqrt();
        g.column_mut(j).scale_mut(f);
    }
    let lx_inv = lower_inverse(&lx)?;
    let ls_inv = lower_inverse(&ls)?;
    let mut g_inv = v.transpose() * &lx_inv;
    for i in 0..n {
        let f = d[i].sqrt();
        g_inv.row_mut(i).scale_mut(f);
    }
    let mut w = &g * g.transpose();
    symmetrize(&mut w);
    Some(BlockScaling {
        g,
        g_inv,
        w,
        lambda: d.iter().copied().collect(),
        lx_inv,
        ls_inv,
    })
}

/// Largest `α` with `L⁻¹ (M + α Δ) L⁻ᵀ ⪰ 0` where `M = L Lᵀ`.
fn psd_step(l_inv: &RMatrix, delta: &RMatrix) -> f64 {
    let mut t = l_inv * delta * l_inv.transpose();
    symmetrize(&mut t);
    let min = SymmetricEigen::new(t)
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if min < 0.0 {
        -1.0 / min
    } else {
        f64::INFINITY
    }
}

fn lp_step(x: &[f64], dx: &[f64]) -> f64 {
    x.iter()
        .zip(dx)
        .filter(|(_, &d)| d < 0.0)
        .map(|(&x, &d)| -x / d)
        .fold(f64::INFINITY, f64::min)
}

pub(crate) fn default_start(problem: &ConicProblem, x_blocks: Vec<f64>) -> StartPoint {
    let s_scale = problem.c_norm().max(1.0);
    StartPoint {
        x_blocks,
        x_lp: vec![1.0; problem.n_lp],
        s_scale,
    }
}

pub(crate) fn solve(problem: &ConicProblem, start: &StartPoint, opts: &ConicOptions) -> ConicSolution {
    let m = problem.rows.len();
    let b: Vec<f64> = problem.rows.iter().map(|r| r.rhs).collect();
    let b_norm = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    let c_norm = problem.c_norm();
    let nu = problem.barrier_order();

    let mut it = Iterate {
        x: problem
            .block_sizes
            .iter()
            .zip(&start.x_blocks)
            .map(|(&n, &xi)| RMatrix::identity(n, n) * (xi * opts.init_scale))
            .collect(),
        xl: start.x_lp.iter().map(|v| v * opts.init_scale).collect(),
        s: problem
            .block_sizes
            .iter()
            .map(|&n| RMatrix::identity(n, n) * (start.s_scale * opts.init_scale))
            .collect(),
        sl: vec![start.s_scale * opts.init_scale; problem.n_lp],
        y: vec![0.0; m],
    };

    let mut status = ConicStatus::MaxIterations;
    let mut iterations = 0;
    let mut stalls = 0;
    let mut report = Report::default();
    let mut accepted: Option<(Iterate, Report, usize)> = None;

    for iter in 0..=opts.max_iterations {
        iterations = iter;
        report = Report::measure(problem, &it, &b, b_norm, c_norm);
        log::trace!(
            "iteration {iter}: pinf {:.2e} dinf {:.2e} gap {:.2e} compl {:.2e} pobj {:.6e}",
            report.pinf,
            report.dinf,
            report.gap,
            report.compl,
            report.pobj
        );
        if report.pinf <= opts.tol_feas
            && report.dinf <= opts.tol_feas
            && report.gap <= opts.tol_gap
            && report.compl <= opts.tol_gap
        {
            let done = report.gap <= opts.target_gap && report.compl <= opts.target_gap;
            accepted = Some((it.clone(), report.clone(), iter));
            if done {
                break;
            }
        } else if accepted.is_some() {
            break;
        }
        if accepted.is_none() && report.dobj > 0.0 {
            let ray = report.ray_norm / report.dobj;
            if ray <= opts.infeasibility_tol {
                status = ConicStatus::Infeasible;
                break;
            }
        }
        if iter == opts.max_iterations {
            break;
        }

        let Some(scalings) = it
            .x
            .iter()
            .zip(&it.s)
            .map(|(x, s)| block_scaling(x, s))
            .collect::<Option<Vec<_>>>()
        else {
            log::debug!("iteration {iter}: scaling failed");
            break;
        };
        let lp = LpScaling {
            omega: it.xl.iter().zip(&it.sl).map(|(x, s)| x / s).collect(),
            lambda: it.xl.iter().zip(&it.sl).map(|(x, s)| (x * s).sqrt()).collect(),
            root: it.xl.iter().zip(&it.sl).map(|(x, s)| (x / s).sqrt()).collect(),
        };

        let Some(factor) = schur_factor(problem, &scalings, &lp) else {
            log::debug!("iteration {iter}: schur factor failed");
            break;
        };

        let mu = report.compl / nu;

        // predictor
        let v_blocks: Vec<RMatrix> = scalings
            .iter()
            .map(|sc| RMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
                sc.lambda.len(),
                sc.lambda.iter().map(|l| -l),
            )))
            .collect();
        let v_lp: Vec<f64> = lp.lambda.iter().map(|l| -l).collect();
        let Some(aff) = direction(problem, &it, &scalings, &lp, &factor, &report, &v_blocks, &v_lp)
        else {
            break;
        };
        let (ap, ad) = step_lengths(&it, &scalings, &aff, 1.0);
        let mut compl_aff = 0.0;
        for k in 0..it.x.len() {
            let xa = &it.x[k] + &aff.dx[k] * ap;
            let sa = &it.s[k] + &aff.ds[k] * ad;
            compl_aff += dot(&xa, &sa);
        }
        for l in 0..it.xl.len() {
            compl_aff += (it.xl[l] + ap * aff.dxl[l]) * (it.sl[l] + ad * aff.dsl[l]);
        }
        let mu_aff = compl_aff / nu;
        let sigma = if mu > 0.0 {
            (mu_aff / mu).clamp(0.0, 1.0).powi(3)
        } else {
            0.0
        };

        // corrector
        let target = sigma * mu;
        let v_blocks: Vec<RMatrix> = scalings
            .iter()
            .enumerate()
            .map(|(k, sc)| {
                let dxt = &sc.g_inv * &aff.dx[k] * sc.g_inv.transpose();
                let dst = sc.g.transpose() * &aff.ds[k] * &sc.g;
                let second = (&dxt * &dst + &dst * &dxt) * 0.5;
                let n = sc.lambda.len();
                RMatrix::from_fn(n, n, |i, j| {
                    let mut rc = -second[(i, j)];
                    if i == j {
                        rc += target - sc.lambda[i] * sc.lambda[i];
                    }
                    2.0 * rc / (sc.lambda[i] + sc.lambda[j])
                })
            })
            .collect();
        let v_lp: Vec<f64> = (0..it.xl.len())
            .map(|l| {
                let rc = target - lp.lambda[l] * lp.lambda[l] - aff.dxl[l] * aff.dsl[l];
                rc / lp.lambda[l]
            })
            .collect();
        let Some(dir) = direction(problem, &it, &scalings, &lp, &factor, &report, &v_blocks, &v_lp)
        else {
            log::debug!("iteration {iter}: corrector direction failed");
            break;
        };
        let tau = if iter < 3 { 0.9 } else { 0.98 };
        let (ap, ad) = step_lengths(&it, &scalings, &dir, tau);
        if ap < 1e-10 && ad < 1e-10 {
            stalls += 1;
            if stalls > 3 {
                log::debug!("iteration {iter}: stalled");
                break;
            }
        } else {
            stalls = 0;
        }
        for k in 0..it.x.len() {
            it.x[k] += &dir.dx[k] * ap;
            it.s[k] += &dir.ds[k] * ad;
            symmetrize(&mut it.x[k]);
            symmetrize(&mut it.s[k]);
        }
        for l in 0..it.xl.len() {
            it.xl[l] += ap * dir.dxl[l];
            it.sl[l] += ad * dir.dsl[l];
        }
        for i in 0..m {
            it.y[i] += ad * dir.dy[i];
        }
    }

    if let Some((saved, saved_report, k)) = accepted {
        it = saved;
        report = saved_report;
        iterations = k;
        status = ConicStatus::Optimal;
    } else if status != ConicStatus::Infeasible {
        report = Report::measure(problem, &it, &b, b_norm, c_norm);
    }
    ConicSolution {
        x_blocks: it.x,
        x_lp: it.xl,
        status,
        primal_objective: report.pobj,
        dual_objective: report.dobj,
        primal_infeasibility: report.pinf,
        dual_infeasibility: report.dinf,
        iterations,
    }
}

#[derive(Default, Clone)]
struct Report {
    rp: Vec<f64>,
    rd: Vec<RMatrix>,
    rdl: Vec<f64>,
    pinf: f64,
    dinf: f64,
    pobj: f64,
    dobj: f64,
    gap: f64,
    compl: f64,
    /// `‖A*y + S‖`, the residual of `(y, S)` read as an infeasibility ray.
    ray_norm: f64,
}

impl Report {
    fn measure(p: &ConicProblem, it: &Iterate, b: &[f64], b_norm: f64, c_norm: f64) -> Self {
        let ax = p.apply_a(&it.x, &it.xl);
        let rp: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let (aty, atyl) = p.apply_at(&it.y);
        let rd: Vec<RMatrix> = (0..it.x.len())
            .map(|k| &p.c_blocks[k] - &it.s[k] - &aty[k])
            .collect();
        let rdl: Vec<f64> = (0..it.xl.len())
            .map(|l| p.c_lp[l] - it.sl[l] - atyl[l])
            .collect();
        let mut ray_sq = 0.0;
        for k in 0..it.x.len() {
            ray_sq += (&aty[k] + &it.s[k]).norm_squared();
        }
        for l in 0..it.xl.len() {
            ray_sq += (atyl[l] + it.sl[l]).powi(2);
        }
        let rp_norm = rp.iter().map(|v| v * v).sum::<f64>().sqrt();
        let rd_norm = (rd.iter().map(|m| m.norm_squared()).sum::<f64>()
            + rdl.iter().map(|v| v * v).sum::<f64>())
        .sqrt();
        let pobj = p.objective(&it.x, &it.xl);
        let dobj: f64 = b.iter().zip(&it.y).map(|(b, y)| b * y).sum();
        let mut compl: f64 = it.x.iter().zip(&it.s).map(|(x, s)| dot(x, s)).sum();
        compl += it.xl.iter().zip(&it.sl).map(|(x, s)| x * s).sum::<f64>();
        Self {
            pinf: rp_norm / (1.0 + b_norm),
            dinf: rd_norm / (1.0 + c_norm),
            rp,
            rd,
            rdl,
            pobj,
            dobj,
            gap: (pobj - dobj).abs(),
            compl,
            ray_norm: ray_sq.sqrt(),
        }
    }
}

fn schur_factor(p: &ConicProblem, scalings: &[BlockScaling], lp: &LpScaling) -> Option<SchurFactor> {
    let m = p.rows.len();
    let mut schur = DMatrix::<f64>::zeros(m, m);
    for j in 0..m {
        let row_j = &p.rows[j];
        let mut wjw: Vec<Option<RMatrix>> = vec![None; scalings.len()];
        for (k, a) in &row_j.blocks {
            wjw[*k] = Some(a.congruence(&scalings[*k].w));
        }
        let mut lp_j = vec![0.0; p.n_lp];
        for &(l, a) in &row_j.lp {
            lp_j[l] = a * lp.omega[l];
        }
        for i in 0..=j {
            let row_i = &p.rows[i];
            let mut v = 0.0;
            for (k, a) in &row_i.blocks {
                if let Some(b) = &wjw[*k] {
                    v += a.inner(b);
                }
            }
            for &(l, a) in &row_i.lp {
                v += a * lp_j[l];
            }
            schur[(i, j)] = v;
            schur[(j, i)] = v;
        }
    }
    if let Some(c) = Cholesky::new(schur.clone()) {
        return Some(SchurFactor::Chol(c));
    }
    let max_diag = (0..m).map(|i| schur[(i, i)].abs()).fold(0.0, f64::max).max(1e-300);
    for shift in [1e-14, 1e-12, 1e-10] {
        let mut reg = schur.clone();
        for i in 0..m {
            reg[(i, i)] += shift * max_diag;
        }
        if let Some(c) = Cholesky::new(reg) {
            return Some(SchurFactor::Chol(c));
        }
    }
    Some(SchurFactor::Lu(schur.lu()))
}

#[allow(clippy::too_many_arguments)]
fn direction(
    p: &ConicProblem,
    it: &Iterate,
    scalings: &[BlockScaling],
    lp: &LpScaling,
    factor: &SchurFactor,
    report: &Report,
    v_blocks: &[RMatrix],
    v_lp: &[f64],
) -> Option<Direction> {
    // R = G V Gᵀ is the right-hand side of ΔX + W ΔS W = R.
    let r_blocks: Vec<RMatrix> = scalings
        .iter()
        .zip(v_blocks)
        .map(|(sc, v)| &sc.g * v * sc.g.transpose())
        .collect();
    let r_lp: Vec<f64> = v_lp.iter().zip(&lp.root).map(|(v, r)| v * r).collect();
    let wrw: Vec<RMatrix> = scalings
        .iter()
        .zip(&report.rd)
        .map(|(sc, rd)| &sc.w * rd * &sc.w)
        .collect();
    let wrw_lp: Vec<f64> = report.rdl.iter().zip(&lp.omega).map(|(r, o)| r * o).collect();
    let a_r = p.apply_a(&r_blocks, &r_lp);
    let a_wrw = p.apply_a(&wrw, &wrw_lp);
    let rhs: Vec<f64> = (0..p.rows.len())
        .map(|i| report.rp[i] - a_r[i] + a_wrw[i])
        .collect();
    let dy = factor.solve(&rhs)?;
    if dy.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let (aty, atyl) = p.apply_at(&dy);
    let ds: Vec<RMatrix> = report.rd.iter().zip(&aty).map(|(rd, a)| rd - a).collect();
    let dsl: Vec<f64> = report.rdl.iter().zip(&atyl).map(|(r, a)| r - a).collect();
    let dx: Vec<RMatrix> = scalings
        .iter()
        .enumerate()
        .map(|(k, sc)| {
            let mut d = &r_blocks[k] - &sc.w * &ds[k] * &sc.w;
            symmetrize(&mut d);
            d
        })
        .collect();
    let dxl: Vec<f64> = (0..it.xl.len())
        .map(|l| r_lp[l] - lp.omega[l] * dsl[l])
        .collect();
    Some(Direction {
        dx,
        dxl,
        ds,
        dsl,
        dy,
    })
}

fn step_lengths(it: &Iterate, scalings: &[BlockScaling], dir: &Direction, tau: f64) -> (f64, f64) {
    let mut ap = f64::INFINITY;
    let mut ad = f64::INFINITY;
    for (k, sc) in scalings.iter().enumerate() {
        ap = ap.min(psd_step(&sc.lx_inv, &dir.dx[k]));
        ad = ad.min(psd_step(&sc.ls_inv, &dir.ds[k]));
    }
    ap = ap.min(lp_step(&it.xl, &dir.dxl));
    ad = ad.min(lp_step(&it.sl, &dir.dsl));
    ((tau * ap).min(1.0), (tau * ad).min(1.0))
}
