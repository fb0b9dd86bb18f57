//! ADMM iteration, KKT assembly and the partial-update machinery.

use std::time::Instant;

use crate::qp::scaling::{ruiz_equilibrate, Equilibration};
use crate::qp::{
    dot, inf_norm, symmetric_mul_vec, QpError, QpProblem, QpSolution, SolveStatus, SolverSettings,
};
use crate::sparse::{CscMatrix, LdlFactorization};

/// Step-size boost applied to equality rows (lb = ub).
const RHO_EQ_FACTOR: f64 = 1e3;

/// Reusable solver state for one QP sparsity pattern.
///
/// Setup factorizes the quasi-definite KKT matrix
/// [[P + σI, Aᵀ], [A, −diag(ρ)⁻¹]] once. `update_vectors` swaps q and the
/// bounds without touching the factorization; `update_matrix_values`
/// rewrites the numeric values (same pattern) and refactorizes reusing the
/// symbolic analysis. A handle is single-threaded; the iteration loop does
/// not allocate.
pub struct SolverHandle {
    n: usize,
    m: usize,
    settings: SolverSettings,

    // original data (for unscaled residuals and reporting)
    p_orig: CscMatrix,
    a_orig: CscMatrix,
    q_orig: Vec<f64>,
    lb_orig: Vec<f64>,
    ub_orig: Vec<f64>,

    // scaled data
    scal: Equilibration,
    p_s: CscMatrix,
    a_s: CscMatrix,
    q_s: Vec<f64>,
    lb_s: Vec<f64>,
    ub_s: Vec<f64>,

    rho_vec: Vec<f64>,
    rho_inv: Vec<f64>,

    // KKT system
    kkt: CscMatrix,
    map_p: Vec<usize>,
    map_sigma: Vec<usize>,
    map_a: Vec<usize>,
    map_rho: Vec<usize>,
    ldl: LdlFactorization,

    // iterates (scaled space)
    x: Vec<f64>,
    z: Vec<f64>,
    y: Vec<f64>,

    // preallocated work vectors
    kkt_rhs: Vec<f64>,
    z_tilde: Vec<f64>,
    x_u: Vec<f64>,
    z_u: Vec<f64>,
    y_u: Vec<f64>,
    ax: Vec<f64>,
    px: Vec<f64>,
    aty: Vec<f64>,
    x_chk: Vec<f64>,
    y_chk: Vec<f64>,
    dx: Vec<f64>,
    dy: Vec<f64>,
}

impl SolverHandle {
    pub fn setup(problem: &QpProblem, settings: SolverSettings) -> Result<Self, QpError> {
        problem.validate()?;
        settings.validate()?;
        let n = problem.n_var();
        let m = problem.n_con();
        if n == 0 {
            return Err(QpError::Setup("problem has no variables".into()));
        }

        let mut p_s = problem.p_mat.clone();
        let mut a_s = problem.a_con.clone();
        let mut q_s = problem.q_vec.clone();
        let scal = ruiz_equilibrate(&mut p_s, &mut q_s, &mut a_s, settings.scaling_iters);
        let lb_s: Vec<f64> = problem
            .lb
            .iter()
            .zip(&scal.e)
            .map(|(&l, &e)| l * e)
            .collect();
        let ub_s: Vec<f64> = problem
            .ub
            .iter()
            .zip(&scal.e)
            .map(|(&u, &e)| u * e)
            .collect();

        let mut rho_vec = vec![settings.rho; m];
        for i in 0..m {
            if problem.lb[i] == problem.ub[i] {
                rho_vec[i] = settings.rho * RHO_EQ_FACTOR;
            }
        }
        let rho_inv: Vec<f64> = rho_vec.iter().map(|r| 1.0 / r).collect();

        let (kkt, map_p, map_sigma, map_a, map_rho) = build_kkt_pattern(&p_s, &a_s, n, m)?;
        let mut handle = Self {
            n,
            m,
            settings,
            p_orig: problem.p_mat.clone(),
            a_orig: problem.a_con.clone(),
            q_orig: problem.q_vec.clone(),
            lb_orig: problem.lb.clone(),
            ub_orig: problem.ub.clone(),
            scal,
            p_s,
            a_s,
            q_s,
            lb_s,
            ub_s,
            rho_vec,
            rho_inv,
            kkt,
            map_p,
            map_sigma,
            map_a,
            map_rho,
            // placeholder; replaced below after the KKT values are filled
            ldl: LdlFactorization::new(
                &CscMatrix::from_triplets(1, 1, &[(0, 0, 1.0)]).unwrap(),
            )
            .unwrap(),
            x: vec![0.0; n],
            z: vec![0.0; m],
            y: vec![0.0; m],
            kkt_rhs: vec![0.0; n + m],
            z_tilde: vec![0.0; m],
            x_u: vec![0.0; n],
            z_u: vec![0.0; m],
            y_u: vec![0.0; m],
            ax: vec![0.0; m],
            px: vec![0.0; n],
            aty: vec![0.0; n],
            x_chk: vec![0.0; n],
            y_chk: vec![0.0; m],
            dx: vec![0.0; n],
            dy: vec![0.0; m],
        };
        handle.fill_kkt_values();
        let ldl = LdlFactorization::new(&handle.kkt)
            .map_err(|e| QpError::Setup(format!("KKT factorization failed: {e}")))?;
        if ldl.n_positive_d != n {
            return Err(QpError::Setup(
                "cost matrix is not positive semidefinite".into(),
            ));
        }
        handle.ldl = ldl;
        Ok(handle)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    fn fill_kkt_values(&mut self) {
        self.kkt.values.fill(0.0);
        for (k, &pos) in self.map_p.iter().enumerate() {
            self.kkt.values[pos] += self.p_s.values[k];
        }
        for &pos in &self.map_sigma {
            self.kkt.values[pos] += self.settings.sigma;
        }
        for (k, &pos) in self.map_a.iter().enumerate() {
            self.kkt.values[pos] += self.a_s.values[k];
        }
        for (j, &pos) in self.map_rho.iter().enumerate() {
            self.kkt.values[pos] -= self.rho_inv[j];
        }
    }

    /// Swap q and/or the bounds. No refactorization happens.
    pub fn update_vectors(
        &mut self,
        q: Option<&[f64]>,
        lb: Option<&[f64]>,
        ub: Option<&[f64]>,
    ) -> Result<(), QpError> {
        if let Some(q) = q {
            if q.len() != self.n {
                return Err(QpError::Update("q length mismatch".into()));
            }
            self.q_orig.copy_from_slice(q);
            for i in 0..self.n {
                self.q_s[i] = q[i] * self.scal.c * self.scal.d[i];
            }
        }
        if let Some(lb) = lb {
            if lb.len() != self.m {
                return Err(QpError::Update("lb length mismatch".into()));
            }
            self.lb_orig.copy_from_slice(lb);
            for i in 0..self.m {
                self.lb_s[i] = lb[i] * self.scal.e[i];
            }
        }
        if let Some(ub) = ub {
            if ub.len() != self.m {
                return Err(QpError::Update("ub length mismatch".into()));
            }
            self.ub_orig.copy_from_slice(ub);
            for i in 0..self.m {
                self.ub_s[i] = ub[i] * self.scal.e[i];
            }
        }
        for i in 0..self.m {
            if !(self.lb_orig[i] <= self.ub_orig[i]) {
                return Err(QpError::Update(format!("lb > ub in row {i} after update")));
            }
        }
        Ok(())
    }

    /// Replace the nonzero values of A and/or P (identical sparsity) and
    /// refactorize the KKT matrix reusing the symbolic analysis.
    pub fn update_matrix_values(
        &mut self,
        p_values: Option<&[f64]>,
        a_values: Option<&[f64]>,
    ) -> Result<(), QpError> {
        if let Some(pv) = p_values {
            if pv.len() != self.p_orig.nnz() {
                return Err(QpError::Update(
                    "p_mat value count differs from the setup pattern".into(),
                ));
            }
            self.p_orig.values.copy_from_slice(pv);
            for (k, &v) in pv.iter().enumerate() {
                let r = self.p_orig.row_idx[k];
                let c = col_of_nz(&self.p_orig, k);
                self.p_s.values[k] = v * self.scal.c * self.scal.d[r] * self.scal.d[c];
            }
        }
        if let Some(av) = a_values {
            if av.len() != self.a_orig.nnz() {
                return Err(QpError::Update(
                    "a_con value count differs from the setup pattern".into(),
                ));
            }
            self.a_orig.values.copy_from_slice(av);
            for (k, &v) in av.iter().enumerate() {
                let r = self.a_orig.row_idx[k];
                let c = col_of_nz(&self.a_orig, k);
                self.a_s.values[k] = v * self.scal.e[r] * self.scal.d[c];
            }
        }
        self.fill_kkt_values();
        self.ldl
            .refactor(&self.kkt)
            .map_err(|e| QpError::Update(format!("refactorization failed: {e}")))?;
        if self.ldl.n_positive_d != self.n {
            return Err(QpError::Update(
                "updated cost matrix is not positive semidefinite".into(),
            ));
        }
        Ok(())
    }

    /// Run the ADMM iteration, optionally warm-started from an unscaled
    /// primal/dual pair (typically the previous solution).
    pub fn solve(&mut self, warm_start: Option<(&[f64], &[f64])>) -> QpSolution {
        let t0 = Instant::now();
        let relax = self.settings.relax;
        let sigma = self.settings.sigma;

        match warm_start {
            Some((x0, y0)) => {
                debug_assert_eq!(x0.len(), self.n);
                debug_assert_eq!(y0.len(), self.m);
                for i in 0..self.n {
                    self.x[i] = x0[i] / self.scal.d[i];
                }
                for j in 0..self.m {
                    self.y[j] = y0[j] * self.scal.c / self.scal.e[j];
                }
                // z from the projected constraint image
                self.a_s.mul_vec_into(&self.x, &mut self.z);
                for j in 0..self.m {
                    self.z[j] = self.z[j].clamp(self.lb_s[j], self.ub_s[j]);
                }
            }
            None => {
                self.x.fill(0.0);
                self.z.fill(0.0);
                self.y.fill(0.0);
            }
        }
        self.x_chk.copy_from_slice(&self.x);
        self.y_chk.copy_from_slice(&self.y);

        let mut status = SolveStatus::MaxIter;
        let mut iters = self.settings.max_iter;

        for k in 1..=self.settings.max_iter {
            // KKT solve for (x̃, ν)
            for i in 0..self.n {
                self.kkt_rhs[i] = sigma * self.x[i] - self.q_s[i];
            }
            for j in 0..self.m {
                self.kkt_rhs[self.n + j] = self.z[j] - self.rho_inv[j] * self.y[j];
            }
            self.ldl.solve_in_place(&mut self.kkt_rhs);

            // z̃ = z + ρ⁻¹(ν − y)
            for j in 0..self.m {
                self.z_tilde[j] =
                    self.z[j] + self.rho_inv[j] * (self.kkt_rhs[self.n + j] - self.y[j]);
            }
            // over-relaxed updates
            for i in 0..self.n {
                self.x[i] = relax * self.kkt_rhs[i] + (1.0 - relax) * self.x[i];
            }
            for j in 0..self.m {
                let z_relaxed = relax * self.z_tilde[j] + (1.0 - relax) * self.z[j];
                let z_new =
                    (z_relaxed + self.rho_inv[j] * self.y[j]).clamp(self.lb_s[j], self.ub_s[j]);
                self.y[j] += self.rho_vec[j] * (z_relaxed - z_new);
                self.z[j] = z_new;
            }

            if k % self.settings.check_interval == 0 || k == self.settings.max_iter {
                if self.residuals_converged() {
                    status = SolveStatus::Solved;
                    iters = k;
                    break;
                }
                for i in 0..self.n {
                    self.dx[i] = self.x[i] - self.x_chk[i];
                }
                for j in 0..self.m {
                    self.dy[j] = self.y[j] - self.y_chk[j];
                }
                if self.primal_infeasible() {
                    status = SolveStatus::PrimalInfeasible;
                    iters = k;
                    break;
                }
                if self.dual_infeasible() {
                    status = SolveStatus::DualInfeasible;
                    iters = k;
                    break;
                }
                self.x_chk.copy_from_slice(&self.x);
                self.y_chk.copy_from_slice(&self.y);
            }
        }

        self.unscale_iterates();
        QpSolution {
            x_opt: self.x_u.clone(),
            y_opt: self.y_u.clone(),
            status,
            iters,
            solve_time_ns: t0.elapsed().as_nanos() as u64,
        }
    }

    fn unscale_iterates(&mut self) {
        for i in 0..self.n {
            self.x_u[i] = self.x[i] * self.scal.d[i];
        }
        for j in 0..self.m {
            self.z_u[j] = self.z[j] / self.scal.e[j];
            self.y_u[j] = self.y[j] * self.scal.e[j] / self.scal.c;
        }
    }

    /// Residual check in unscaled quantities.
    fn residuals_converged(&mut self) -> bool {
        self.unscale_iterates();
        self.a_orig.mul_vec_into(&self.x_u, &mut self.ax);
        symmetric_mul_vec(&self.p_orig, &self.x_u, &mut self.px);
        self.a_orig.mul_transpose_vec_into(&self.y_u, &mut self.aty);

        let mut r_prim = 0.0f64;
        for j in 0..self.m {
            r_prim = r_prim.max((self.ax[j] - self.z_u[j]).abs());
        }
        let eps_prim = self.settings.eps_abs
            + self.settings.eps_rel * inf_norm(&self.ax).max(inf_norm(&self.z_u));

        let mut r_dual = 0.0f64;
        for i in 0..self.n {
            r_dual = r_dual.max((self.px[i] + self.q_orig[i] + self.aty[i]).abs());
        }
        let eps_dual = self.settings.eps_abs
            + self.settings.eps_rel
                * inf_norm(&self.px)
                    .max(inf_norm(&self.aty))
                    .max(inf_norm(&self.q_orig));

        r_prim <= eps_prim && r_dual <= eps_dual
    }

    /// Primal infeasibility certificate on the unscaled dual delta.
    fn primal_infeasible(&mut self) -> bool {
        if self.m == 0 {
            return false;
        }
        for j in 0..self.m {
            self.y_u[j] = self.dy[j] * self.scal.e[j] / self.scal.c;
        }
        let norm = inf_norm(&self.y_u);
        if norm <= 1e-14 {
            return false;
        }
        let eps = self.settings.eps_inf * norm;
        self.a_orig.mul_transpose_vec_into(&self.y_u, &mut self.aty);
        if inf_norm(&self.aty) > eps {
            return false;
        }
        let mut support = 0.0;
        for j in 0..self.m {
            let v = self.y_u[j];
            if v > eps {
                if self.ub_orig[j].is_infinite() {
                    return false;
                }
                support += self.ub_orig[j] * v;
            } else if v < -eps {
                if self.lb_orig[j].is_infinite() {
                    return false;
                }
                support += self.lb_orig[j] * v;
            }
        }
        support < -eps
    }

    /// Dual infeasibility certificate on the unscaled primal delta.
    fn dual_infeasible(&mut self) -> bool {
        for i in 0..self.n {
            self.x_u[i] = self.dx[i] * self.scal.d[i];
        }
        let norm = inf_norm(&self.x_u);
        if norm <= 1e-14 {
            return false;
        }
        let eps = self.settings.eps_inf * norm;
        symmetric_mul_vec(&self.p_orig, &self.x_u, &mut self.px);
        if inf_norm(&self.px) > eps {
            return false;
        }
        if dot(&self.q_orig, &self.x_u) >= -eps {
            return false;
        }
        self.a_orig.mul_vec_into(&self.x_u, &mut self.ax);
        for j in 0..self.m {
            let v = self.ax[j];
            let l_finite = self.lb_orig[j].is_finite();
            let u_finite = self.ub_orig[j].is_finite();
            let ok = match (l_finite, u_finite) {
                (true, true) => v.abs() <= eps,
                (true, false) => v >= -eps,
                (false, true) => v <= eps,
                (false, false) => true,
            };
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Column index of the k-th stored nonzero.
fn col_of_nz(m: &CscMatrix, k: usize) -> usize {
    // binary search over the column pointer array
    match m.col_ptr.binary_search(&k) {
        Ok(mut c) => {
            // k is the first entry of column c; skip empty columns
            while c + 1 < m.col_ptr.len() && m.col_ptr[c + 1] == k {
                c += 1;
            }
            c.min(m.ncols - 1)
        }
        Err(c) => c - 1,
    }
}

type KktPattern = (CscMatrix, Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>);

/// Assemble the upper-triangular KKT pattern and record where each P/A
/// nonzero, each σ diagonal and each −ρ⁻¹ diagonal lands in the value
/// array, so numeric updates can rebuild values in place.
fn build_kkt_pattern(p_s: &CscMatrix, a_s: &CscMatrix, n: usize, m: usize) -> Result<KktPattern, QpError> {
    #[derive(Clone, Copy)]
    enum Tag {
        P(usize),
        Sigma(usize),
        A(usize),
        Rho(usize),
    }
    let dim = n + m;
    let mut entries: Vec<(usize, usize, Tag)> = Vec::new();
    for c in 0..n {
        for k in p_s.col_ptr[c]..p_s.col_ptr[c + 1] {
            entries.push((p_s.row_idx[k], c, Tag::P(k)));
        }
    }
    for i in 0..n {
        entries.push((i, i, Tag::Sigma(i)));
    }
    for c in 0..n {
        for k in a_s.col_ptr[c]..a_s.col_ptr[c + 1] {
            // A(j, c) lands in the Aᵀ block at (c, n + j)
            entries.push((c, n + a_s.row_idx[k], Tag::A(k)));
        }
    }
    for j in 0..m {
        entries.push((n + j, n + j, Tag::Rho(j)));
    }

    entries.sort_by_key(|&(r, c, _)| (c, r));
    let mut col_ptr = vec![0usize; dim + 1];
    let mut row_idx = Vec::with_capacity(entries.len());
    let mut map_p = vec![0usize; p_s.nnz()];
    let mut map_sigma = vec![0usize; n];
    let mut map_a = vec![0usize; a_s.nnz()];
    let mut map_rho = vec![0usize; m];
    let mut last: Option<(usize, usize)> = None;
    for &(r, c, tag) in &entries {
        if last != Some((r, c)) {
            row_idx.push(r);
            col_ptr[c + 1] += 1;
            last = Some((r, c));
        }
        let pos = row_idx.len() - 1;
        match tag {
            Tag::P(k) => map_p[k] = pos,
            Tag::Sigma(i) => map_sigma[i] = pos,
            Tag::A(k) => map_a[k] = pos,
            Tag::Rho(j) => map_rho[j] = pos,
        }
    }
    for c in 0..dim {
        col_ptr[c + 1] += col_ptr[c];
    }
    let nnz = row_idx.len();
    let kkt = CscMatrix {
        nrows: dim,
        ncols: dim,
        col_ptr,
        row_idx,
        values: vec![0.0; nnz],
    };
    Ok((kkt, map_p, map_sigma, map_a, map_rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn solve_problem(problem: &QpProblem) -> QpSolution {
        let mut handle = SolverHandle::setup(problem, SolverSettings::default()).unwrap();
        handle.solve(None)
    }

    #[test]
    fn clipped_scalar_problem() {
        // min ½(x−3)² s.t. 0 ≤ x ≤ 2 → x = 2
        let problem = QpProblem {
            p_mat: CscMatrix::from_triplets(1, 1, &[(0, 0, 1.0)]).unwrap(),
            q_vec: vec![-3.0],
            a_con: CscMatrix::from_triplets(1, 1, &[(0, 0, 1.0)]).unwrap(),
            lb: vec![0.0],
            ub: vec![2.0],
        };
        let sol = solve_problem(&problem);
        assert_eq!(sol.status, SolveStatus::Solved);
        assert_abs_diff_eq!(sol.x_opt[0], 2.0, epsilon = 1e-5);
    }

    #[test]
    fn symmetric_equality_split() {
        // min ½xᵀx s.t. x₁ + x₂ = 1 → (0.5, 0.5)
        let problem = QpProblem {
            p_mat: CscMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 1, 1.0)]).unwrap(),
            q_vec: vec![0.0, 0.0],
            a_con: CscMatrix::from_triplets(1, 2, &[(0, 0, 1.0), (0, 1, 1.0)]).unwrap(),
            lb: vec![1.0],
            ub: vec![1.0],
        };
        let sol = solve_problem(&problem);
        assert_eq!(sol.status, SolveStatus::Solved);
        assert_abs_diff_eq!(sol.x_opt[0], 0.5, epsilon = 1e-5);
        assert_abs_diff_eq!(sol.x_opt[1], 0.5, epsilon = 1e-5);
    }

    #[test]
    fn rejects_crossed_bounds() {
        let problem = QpProblem {
            p_mat: CscMatrix::from_triplets(1, 1, &[(0, 0, 1.0)]).unwrap(),
            q_vec: vec![0.0],
            a_con: CscMatrix::from_triplets(1, 1, &[(0, 0, 1.0)]).unwrap(),
            lb: vec![1.0],
            ub: vec![0.0],
        };
        assert!(SolverHandle::setup(&problem, SolverSettings::default()).is_err());
    }

    #[test]
    fn rejects_indefinite_cost() {
        let problem = QpProblem {
            p_mat: CscMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 1, -1.0)]).unwrap(),
            q_vec: vec![0.0, 0.0],
            a_con: CscMatrix::from_triplets(1, 2, &[(0, 0, 1.0)]).unwrap(),
            lb: vec![0.0],
            ub: vec![1.0],
        };
        assert!(SolverHandle::setup(&problem, SolverSettings::default()).is_err());
    }

    #[test]
    fn detects_primal_infeasibility() {
        // x ≥ 1 and x ≤ 0 cannot hold
        let problem = QpProblem {
            p_mat: CscMatrix::from_triplets(1, 1, &[(0, 0, 1.0)]).unwrap(),
            q_vec: vec![0.0],
            a_con: CscMatrix::from_triplets(2, 1, &[(0, 0, 1.0), (1, 0, 1.0)]).unwrap(),
            lb: vec![1.0, f64::NEG_INFINITY],
            ub: vec![f64::INFINITY, 0.0],
        };
        let sol = solve_problem(&problem);
        assert_eq!(sol.status, SolveStatus::PrimalInfeasible);
    }

    #[test]
    fn detects_dual_infeasibility() {
        // min x (linear, unbounded below on x ≤ 0)
        let problem = QpProblem {
            p_mat: CscMatrix::from_triplets(1, 1, &[(0, 0, 0.0)]).unwrap(),
            q_vec: vec![1.0],
            a_con: CscMatrix::from_triplets(1, 1, &[(0, 0, 1.0)]).unwrap(),
            lb: vec![f64::NEG_INFINITY],
            ub: vec![0.0],
        };
        let sol = solve_problem(&problem);
        assert_eq!(sol.status, SolveStatus::DualInfeasible);
    }

    #[test]
    fn no_op_update_reproduces_solution() {
        let problem = QpProblem {
            p_mat: CscMatrix::from_triplets(2, 2, &[(0, 0, 2.0), (0, 1, 0.3), (1, 1, 1.5)])
                .unwrap(),
            q_vec: vec![-1.0, 0.7],
            a_con: CscMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 1, 1.0)]).unwrap(),
            lb: vec![-1.0, -1.0],
            ub: vec![1.0, 1.0],
        };
        let mut handle = SolverHandle::setup(&problem, SolverSettings::default()).unwrap();
        let sol1 = handle.solve(None);
        handle
            .update_vectors(Some(&problem.q_vec), Some(&problem.lb), Some(&problem.ub))
            .unwrap();
        let sol2 = handle.solve(None);
        assert_eq!(sol1.x_opt, sol2.x_opt);
        assert_eq!(sol1.iters, sol2.iters);
    }

    #[test]
    fn identical_matrix_update_is_bit_comparable() {
        let problem = QpProblem {
            p_mat: CscMatrix::from_triplets(2, 2, &[(0, 0, 2.0), (1, 1, 1.5)]).unwrap(),
            q_vec: vec![-1.0, 0.7],
            a_con: CscMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 1, 1.0)]).unwrap(),
            lb: vec![-1.0, -1.0],
            ub: vec![1.0, 1.0],
        };
        let mut handle = SolverHandle::setup(&problem, SolverSettings::default()).unwrap();
        let sol1 = handle.solve(None);
        handle
            .update_matrix_values(Some(&problem.p_mat.values), Some(&problem.a_con.values))
            .unwrap();
        let sol2 = handle.solve(None);
        assert_eq!(sol1.x_opt, sol2.x_opt);
    }

    #[test]
    fn pattern_changing_update_is_rejected() {
        let problem = QpProblem {
            p_mat: CscMatrix::from_triplets(2, 2, &[(0, 0, 2.0), (1, 1, 1.5)]).unwrap(),
            q_vec: vec![0.0, 0.0],
            a_con: CscMatrix::from_triplets(1, 2, &[(0, 0, 1.0)]).unwrap(),
            lb: vec![0.0],
            ub: vec![1.0],
        };
        let mut handle = SolverHandle::setup(&problem, SolverSettings::default()).unwrap();
        // wrong nonzero count means a different pattern
        assert!(handle.update_matrix_values(None, Some(&[1.0, 2.0])).is_err());
        assert!(handle
            .update_matrix_values(Some(&[1.0, 2.0, 3.0]), None)
            .is_err());
    }

    #[test]
    fn warm_start_from_solution_converges_immediately() {
        let problem = QpProblem {
            p_mat: CscMatrix::from_triplets(2, 2, &[(0, 0, 2.0), (0, 1, 0.3), (1, 1, 1.5)])
                .unwrap(),
            q_vec: vec![-1.0, 0.7],
            a_con: CscMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (1, 1, 1.0)]).unwrap(),
            lb: vec![-1.0, -1.0],
            ub: vec![1.0, 1.0],
        };
        let mut handle = SolverHandle::setup(&problem, SolverSettings::default()).unwrap();
        let cold = handle.solve(None);
        let warm = handle.solve(Some((&cold.x_opt, &cold.y_opt)));
        assert_eq!(warm.status, SolveStatus::Solved);
        assert!(warm.iters <= cold.iters);
    }
}
