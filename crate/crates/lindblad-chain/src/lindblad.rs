//! The Lindblad generator: matrix-free application, dense superoperator
//! assembly, steady states, and Runge–Kutta time evolution.
//!
//! Master equation (ħ = 1):
//!
//!   dρ/dt = i[ρ, H] + Σ_k (L_k ρ L_k† − ½{L_k†L_k, ρ})
//!
//! Vectorization is column-stacking: vec(X)_{i+j·d} = X_{ij}, so
//! vec(AXB) = (Bᵀ⊗A)·vec(X) and the generator becomes the 4^N×4^N matrix
//!
//!   M = i(Hᵀ⊗I − I⊗H) + Σ_k [conj(L_k)⊗L_k − ½I⊗(L_k†L_k) − ½(L_k†L_k)ᵀ⊗I].
//!
//! Steady states are extracted from the kernel of M. Two interchangeable
//! backends are provided:
//!
//! - an SVD nullspace solve, which also reports the numerical kernel
//!   dimension (the default for superoperators up to 1024×1024, i.e.
//!   N ≤ 5);
//! - a bordered LU solve for larger problems: because vec(I)†M = 0 makes
//!   the diagonal rows of M linearly dependent, replacing the first
//!   diagonal row with the trace functional yields a square system M′x = e₀
//!   whose unique solution is the trace-normalized steady state, and
//!   ker(M′) = ker(M) ∩ {tr = 0}, so a healthy reciprocal condition number
//!   of M′ certifies that the kernel of M is one-dimensional. This keeps
//!   the N = 6 sweeps a factor ~20 cheaper than a full SVD at 4096².

use ndarray::{Array1, Array2};
use ndarray_linalg::{
    EigValsh, Eigh, FactorizeInto, JobSvd, ReciprocalConditionNum, Solve, SVDDCInto, UPLO,
};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::drive::{min_nonzero_rate, JumpOperator};
use crate::error::{Error, Result};
use crate::pauli::{dagger, dim, frobenius, max_abs};

/// Dense superoperators are limited to this many sites (4096² at N = 6).
pub const DENSE_SITE_LIMIT: usize = 6;

/// Largest superoperator dimension the Auto strategy solves by SVD.
pub const SVD_DIM_CEILING: usize = 1024;

/// Eigenvalues of a steady state in [−PSD_CLIP, 0) are treated as roundoff
/// and clipped to zero; anything more negative is an error.
pub const PSD_CLIP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStrategy {
    /// SVD for superoperator dimension ≤ [`SVD_DIM_CEILING`], LU above.
    #[default]
    Auto,
    Svd,
    BorderedLu,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Nullspace,
    TimeEvolution,
}

#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    /// Singular values below `rank_tolerance · σ_max` count as kernel
    /// directions; the LU backend flags degeneracy when rcond falls below
    /// this value.
    pub rank_tolerance: f64,
    /// The solve fails unless ‖generator(ρ)‖_F ≤ `residual_tolerance ·
    /// max(1, ‖H‖_F)`.
    pub residual_tolerance: f64,
    pub strategy: SolveStrategy,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            rank_tolerance: 1e-10,
            residual_tolerance: 1e-10,
            strategy: SolveStrategy::Auto,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SteadyStateResult {
    pub state: Array2<C64>,
    /// ‖generator(state)‖_F at the returned state.
    pub residual: f64,
    /// Number of kernel directions found. The time-evolution path does not
    /// inspect the kernel and always reports 1.
    pub nullspace_dimension: usize,
    pub method: SolveMethod,
}

/// Pre-embedded generator for repeated application.
pub struct Generator {
    h: Array2<C64>,
    ls: Vec<Array2<C64>>,
    ls_dag: Vec<Array2<C64>>,
    ldl: Vec<Array2<C64>>,
}

impl Generator {
    pub fn new(h: &Array2<C64>, jumps: &[JumpOperator]) -> Result<Self> {
        let n = sites_of(h)?;
        let mut ls = Vec::new();
        let mut ls_dag = Vec::new();
        let mut ldl = Vec::new();
        for j in jumps {
            if j.spectral_norm() == 0.0 {
                continue; // zero channels contribute nothing
            }
            let l = j.embedded(n)?;
            let ld = dagger(&l);
            ldl.push(ld.dot(&l));
            ls.push(l);
            ls_dag.push(ld);
        }
        Ok(Generator { h: h.clone(), ls, ls_dag, ldl })
    }

    /// i[ρ, H] + Σ_k (L_k ρ L_k† − ½{L_k†L_k, ρ})
    pub fn apply(&self, rho: &Array2<C64>) -> Array2<C64> {
        let i = C64::new(0.0, 1.0);
        let half = C64::new(-0.5, 0.0);
        let mut out = (rho.dot(&self.h) - self.h.dot(rho)).mapv(|z| z * i);
        for k in 0..self.ls.len() {
            out += &self.ls[k].dot(rho).dot(&self.ls_dag[k]);
            out.scaled_add(half, &self.ldl[k].dot(rho));
            out.scaled_add(half, &rho.dot(&self.ldl[k]));
        }
        out
    }
}

fn sites_of(op: &Array2<C64>) -> Result<usize> {
    let d = op.nrows();
    if op.ncols() != d || d == 0 || !d.is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "expected a square 2^N-dimensional operator, got {}x{}",
            op.nrows(),
            op.ncols()
        )));
    }
    Ok(d.trailing_zeros() as usize)
}

/// One application of the Lindblad right-hand side.
pub fn apply_generator(
    h: &Array2<C64>,
    jumps: &[JumpOperator],
    rho: &Array2<C64>,
) -> Result<Array2<C64>> {
    if rho.shape() != h.shape() {
        return Err(Error::InvalidInput(format!(
            "state shape {:?} does not match Hamiltonian shape {:?}",
            rho.shape(),
            h.shape()
        )));
    }
    Ok(Generator::new(h, jumps)?.apply(rho))
}

/// Column-stacking vec: v[i + j·d] = ρ[i, j].
pub fn vectorize(rho: &Array2<C64>) -> Array1<C64> {
    let d = rho.nrows();
    let mut v = Array1::zeros(d * d);
    for j in 0..d {
        for i in 0..d {
            v[i + j * d] = rho[(i, j)];
        }
    }
    v
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &Array1<C64>, d: usize) -> Array2<C64> {
    let mut rho = Array2::zeros((d, d));
    for j in 0..d {
        for i in 0..d {
            rho[(i, j)] = v[i + j * d];
        }
    }
    rho
}

/// M += coeff · (A ⊗ B), skipping exact zeros of both factors.
fn kron_acc(m: &mut Array2<C64>, coeff: C64, a: &Array2<C64>, b: &Array2<C64>) {
    let zero = C64::new(0.0, 0.0);
    let (rb, cb) = (b.nrows(), b.ncols());
    for ia in 0..a.nrows() {
        for ja in 0..a.ncols() {
            let av = a[(ia, ja)];
            if av == zero {
                continue;
            }
            let f = coeff * av;
            for ib in 0..rb {
                for jb in 0..cb {
                    let bv = b[(ib, jb)];
                    if bv != zero {
                        m[(ia * rb + ib, ja * cb + jb)] += f * bv;
                    }
                }
            }
        }
    }
}

fn check_capacity(n: usize) -> Result<()> {
    if n > DENSE_SITE_LIMIT {
        return Err(Error::CapacityExceeded { n_sites: n, limit: DENSE_SITE_LIMIT });
    }
    Ok(())
}

/// Dissipator-only superoperator Σ_k [conj(L)⊗L − ½I⊗L†L − ½(L†L)ᵀ⊗I].
pub fn build_dissipator_superoperator(
    jumps: &[JumpOperator],
    n_sites: usize,
) -> Result<Array2<C64>> {
    check_capacity(n_sites)?;
    let d = dim(n_sites);
    let eye = Array2::<C64>::eye(d);
    let one = C64::new(1.0, 0.0);
    let mhalf = C64::new(-0.5, 0.0);
    let mut m = Array2::zeros((d * d, d * d));
    for j in jumps {
        let l = j.embedded(n_sites)?;
        let lc = l.mapv(|z| z.conj());
        let ldl = dagger(&l).dot(&l);
        kron_acc(&mut m, one, &lc, &l);
        kron_acc(&mut m, mhalf, &eye, &ldl);
        kron_acc(&mut m, mhalf, &ldl.t().to_owned(), &eye);
    }
    Ok(m)
}

/// Full generator as a dense 4^N×4^N matrix (column-stacking convention).
pub fn build_superoperator(
    h: &Array2<C64>,
    jumps: &[JumpOperator],
) -> Result<Array2<C64>> {
    let n = sites_of(h)?;
    check_capacity(n)?;
    let d = dim(n);
    let eye = Array2::<C64>::eye(d);
    let i = C64::new(0.0, 1.0);
    let mut m = build_dissipator_superoperator(jumps, n)?;
    kron_acc(&mut m, i, &h.t().to_owned(), &eye);
    kron_acc(&mut m, -i, &eye, h);
    Ok(m)
}

/// Normalize trace, re-Hermitize, and clip tiny negative eigenvalues.
fn polish_state(raw: &Array2<C64>) -> Result<Array2<C64>> {
    let tr: C64 = raw.diag().sum();
    if tr.norm() < 1e-12 * frobenius(raw).max(1e-300) {
        return Err(Error::DegenerateSteadyState(format!(
            "kernel vector has negligible trace ({:.3e}); no normalizable steady state",
            tr.norm()
        )));
    }
    let mut rho = raw.mapv(|z| z / tr);
    rho = (&rho + &dagger(&rho)).mapv(|z| z * C64::new(0.5, 0.0));
    let (vals, vecs) = rho.eigh(UPLO::Lower)?;
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -PSD_CLIP {
        return Err(Error::NumericalConsistency(format!(
            "steady state has eigenvalue {min:.3e} below the -{PSD_CLIP:.0e} positivity clip"
        )));
    }
    let clipped: Vec<f64> = vals.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = clipped.iter().sum();
    let d = rho.nrows();
    let mut out = Array2::zeros((d, d));
    for (k, lam) in clipped.iter().enumerate() {
        if *lam == 0.0 {
            continue;
        }
        // eigh on a row-major complex array hands LAPACK the transpose, so
        // column k holds conj(v_k); see eigh_column_convention below.
        let col = vecs.column(k);
        let w = C64::new(lam / total, 0.0);
        for i in 0..d {
            for j in 0..d {
                out[(i, j)] += w * col[i].conj() * col[j];
            }
        }
    }
    Ok(out)
}

fn nullspace_via_svd(
    m: Array2<C64>,
    d: usize,
    options: &SolverOptions,
) -> Result<(Array2<C64>, usize)> {
    let (_, sigma, vt) = m.svddc_into(JobSvd::Some)?;
    let vt = vt.expect("right singular vectors requested");
    let smax = sigma[0];
    if !(smax > 0.0) {
        return Err(Error::DegenerateSteadyState(
            "generator is identically zero; every state is steady".into(),
        ));
    }
    let cutoff = options.rank_tolerance * smax;
    let ns_dim = sigma.iter().filter(|&&s| s < cutoff).count();
    if ns_dim != 1 {
        let tail: Vec<String> = sigma.iter().rev().take(3).map(|s| format!("{s:.3e}")).collect();
        return Err(Error::DegenerateSteadyState(format!(
            "nullspace dimension {ns_dim} (smallest singular values {tail:?}, cutoff {cutoff:.3e})"
        )));
    }
    let v = vt.row(vt.nrows() - 1).mapv(|z| z.conj());
    Ok((unvectorize(&v, d), ns_dim))
}

fn steady_via_bordered_lu(
    mut m: Array2<C64>,
    d: usize,
    options: &SolverOptions,
) -> Result<(Array2<C64>, usize)> {
    // Row 0 is the equation for d/dt ρ_00; trace preservation makes it a
    // linear combination of the other diagonal rows, so it can be replaced
    // by the trace functional without losing information.
    let nn = d * d;
    for col in 0..nn {
        m[(0, col)] = C64::new(0.0, 0.0);
    }
    for k in 0..d {
        m[(0, k * (d + 1))] = C64::new(1.0, 0.0);
    }
    let lu = m.factorize_into()?;
    let rcond = lu.rcond()?;
    if rcond < options.rank_tolerance {
        return Err(Error::DegenerateSteadyState(format!(
            "bordered generator is numerically singular (rcond = {rcond:.3e}); \
             the kernel is not one-dimensional or the problem is ill-conditioned"
        )));
    }
    let mut b = Array1::zeros(nn);
    b[0] = C64::new(1.0, 0.0);
    let x = lu.solve_into(b)?;
    Ok((unvectorize(&x, d), 1))
}

/// Steady state via the kernel of the dense superoperator.
pub fn steady_state(
    h: &Array2<C64>,
    jumps: &[JumpOperator],
    options: &SolverOptions,
) -> Result<SteadyStateResult> {
    let n = sites_of(h)?;
    let d = dim(n);
    let m = build_superoperator(h, jumps)?;
    let use_svd = match options.strategy {
        SolveStrategy::Svd => true,
        SolveStrategy::BorderedLu => false,
        SolveStrategy::Auto => d * d <= SVD_DIM_CEILING,
    };
    let (raw, ns_dim) = if use_svd {
        nullspace_via_svd(m, d, options)?
    } else {
        steady_via_bordered_lu(m, d, options)?
    };
    let state = polish_state(&raw)?;
    let residual = frobenius(&apply_generator(h, jumps, &state)?);
    let tolerance = options.residual_tolerance * frobenius(h).max(1.0);
    if residual > tolerance {
        return Err(Error::ConvergenceFailure { residual, tolerance });
    }
    Ok(SteadyStateResult {
        state,
        residual,
        nullspace_dimension: ns_dim,
        method: SolveMethod::Nullspace,
    })
}

/// Default integrator step 0.01/‖H‖₂ (falls back to 0.01 for H = 0).
pub fn default_dt(h: &Array2<C64>) -> Result<f64> {
    let vals = h.eigvalsh(UPLO::Lower)?;
    let hnorm = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    Ok(if hnorm > 0.0 { 0.01 / hnorm } else { 0.01 })
}

/// Default integration horizon 200/γ_min.
pub fn default_t_final(jumps: &[JumpOperator]) -> Result<f64> {
    match min_nonzero_rate(jumps) {
        Some(r) => Ok(200.0 / r),
        None => Err(Error::InvalidInput(
            "no nonzero dissipative rate; the relaxation horizon is undefined".into(),
        )),
    }
}

/// Fixed-step RK4 integration of the master equation from ρ0.
///
/// Each step re-Hermitizes and renormalizes the state; a per-step trace
/// drift above 1e-8 (before renormalization) aborts with a step-size
/// error.
pub fn time_evolve(
    h: &Array2<C64>,
    jumps: &[JumpOperator],
    rho0: &Array2<C64>,
    t_final: f64,
    dt: f64,
) -> Result<Array2<C64>> {
    if !(dt > 0.0) {
        return Err(Error::InvalidInput(format!("dt = {dt} must be positive")));
    }
    if t_final < dt {
        return Err(Error::InvalidInput(format!(
            "t_final = {t_final} must be at least dt = {dt}"
        )));
    }
    if rho0.shape() != h.shape() {
        return Err(Error::InvalidInput(format!(
            "initial state shape {:?} does not match Hamiltonian shape {:?}",
            rho0.shape(),
            h.shape()
        )));
    }
    let gen = Generator::new(h, jumps)?;
    let mut rho = rho0.clone();
    let mut t = 0.0;
    while t < t_final - 1e-12 * t_final {
        let step = dt.min(t_final - t);
        rho = rk4_step(&gen, &rho, step)?;
        t += step;
    }
    Ok(rho)
}

fn rk4_step(gen: &Generator, rho: &Array2<C64>, h_step: f64) -> Result<Array2<C64>> {
    let trace_before = rho.diag().sum().re;
    let half = C64::new(0.5 * h_step, 0.0);
    let sixth = C64::new(h_step / 6.0, 0.0);
    let two = C64::new(2.0, 0.0);

    let k1 = gen.apply(rho);
    let mut stage = rho.clone();
    stage.scaled_add(half, &k1);
    let k2 = gen.apply(&stage);
    stage.assign(rho);
    stage.scaled_add(half, &k2);
    let k3 = gen.apply(&stage);
    stage.assign(rho);
    stage.scaled_add(C64::new(h_step, 0.0), &k3);
    let k4 = gen.apply(&stage);

    let mut sum = k1;
    sum.scaled_add(two, &k2);
    sum.scaled_add(two, &k3);
    sum += &k4;
    let mut next = rho.clone();
    next.scaled_add(sixth, &sum);

    let trace_after = next.diag().sum().re;
    let drift = (trace_after - trace_before).abs();
    if !drift.is_finite() || drift > 1e-8 {
        return Err(Error::StepSize { drift });
    }
    next = (&next + &dagger(&next)).mapv(|z| z * C64::new(0.5, 0.0));
    let tr = next.diag().sum().re;
    Ok(next.mapv(|z| z / C64::new(tr, 0.0)))
}

/// Steady state by damped time evolution from the maximally mixed state.
///
/// Integrates in windows, stopping as soon as the generator residual
/// drops below `residual_tolerance · max(1, ‖H‖_F)`, with the total time
/// capped at 200/γ_min. Unlike the nullspace path this never inspects the
/// kernel, so `nullspace_dimension` is reported as 1 by convention.
pub fn steady_state_via_time_evolution(
    h: &Array2<C64>,
    jumps: &[JumpOperator],
    options: &SolverOptions,
) -> Result<SteadyStateResult> {
    let n = sites_of(h)?;
    let d = dim(n);
    let gen = Generator::new(h, jumps)?;
    let dt = default_dt(h)?;
    let t_cap = default_t_final(jumps)?;
    let tolerance = options.residual_tolerance * frobenius(h).max(1.0);

    let mut rho = Array2::<C64>::eye(d).mapv(|z| z / C64::new(d as f64, 0.0));
    let window = 2.0f64;
    let mut t = 0.0;
    let mut residual = frobenius(&gen.apply(&rho));
    while residual > tolerance && t < t_cap {
        let horizon = window.min(t_cap - t).max(dt);
        let steps = (horizon / dt).ceil() as usize;
        for _ in 0..steps {
            rho = rk4_step(&gen, &rho, dt)?;
        }
        t += steps as f64 * dt;
        residual = frobenius(&gen.apply(&rho));
    }
    if residual > tolerance {
        return Err(Error::ConvergenceFailure { residual, tolerance });
    }
    let state = polish_state(&rho)?;
    let residual = frobenius(&gen.apply(&state));
    Ok(SteadyStateResult {
        state,
        residual,
        nullspace_dimension: 1,
        method: SolveMethod::TimeEvolution,
    })
}

/// Trace distance ½‖a − b‖₁ between Hermitian matrices.
pub fn trace_distance(a: &Array2<C64>, b: &Array2<C64>) -> Result<f64> {
    let diff = a - b;
    let herm = (&diff + &dagger(&diff)).mapv(|z| z * C64::new(0.5, 0.0));
    let vals = herm.eigvalsh(UPLO::Lower)?;
    Ok(0.5 * vals.iter().map(|v| v.abs()).sum::<f64>())
}

/// Hermiticity, unit trace, and positivity checks for a density matrix.
pub fn check_density_matrix(rho: &Array2<C64>) -> Result<()> {
    let herm_dev = max_abs(&(rho - &dagger(rho)));
    if herm_dev > 1e-12 {
        return Err(Error::NumericalConsistency(format!(
            "density matrix is not Hermitian: max |ρ − ρ†| = {herm_dev:.3e}"
        )));
    }
    let tr = rho.diag().sum();
    if (tr - C64::new(1.0, 0.0)).norm() > 1e-12 {
        return Err(Error::NumericalConsistency(format!(
            "density matrix trace {tr} is not 1"
        )));
    }
    let vals = rho.eigvalsh(UPLO::Lower)?;
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    if min < -PSD_CLIP {
        return Err(Error::NumericalConsistency(format!(
            "density matrix has eigenvalue {min:.3e} below -{PSD_CLIP:.0e}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drive::{build_jump_operators, DriveSpec};
    use crate::model::{build_hamiltonian, graded_profile, ChainModel};
    use crate::pauli::{identity, pauli, Pauli};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(d: usize, rng: &mut impl Rng) -> Array2<C64> {
        let mut a = Array2::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                a[(i, j)] = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
        }
        (&a + &dagger(&a)).mapv(|z| z * C64::new(0.5, 0.0))
    }

    fn sample_system() -> (Array2<C64>, Vec<JumpOperator>) {
        let model = ChainModel::xxz(3, 1.0, graded_profile(1.0, 0.05, 2), None).unwrap();
        let h = build_hamiltonian(&model).unwrap();
        let spec = DriveSpec::ZTarget { gamma: 1.0, f_left: 0.1, f_right: -0.1 };
        let jumps = build_jump_operators(&spec, 3).unwrap();
        (h, jumps)
    }

    // Pins the backend behaviour polish_state relies on: for a row-major
    // complex Hermitian input, eigh returns column k = conj(v_k). If a
    // dependency upgrade changes this, the reconstruction in polish_state
    // must be flipped along with this test.
    #[test]
    fn eigh_column_convention() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_hermitian(6, &mut rng);
        assert!(a.is_standard_layout());
        let (vals, vecs) = a.eigh(UPLO::Lower).unwrap();
        for k in 0..6 {
            let v = vecs.column(k).mapv(|z| z.conj());
            let r = a.dot(&v) - v.mapv(|z| z * vals[k]);
            let err: f64 = r.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(err < 1e-12, "eigenpair {k} fails with |Av - lambda v| = {err:.3e}");
        }
    }

    #[test]
    fn generator_preserves_trace_and_hermiticity() {
        let (h, jumps) = sample_system();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let rho = random_hermitian(8, &mut rng);
            let out = apply_generator(&h, &jumps, &rho).unwrap();
            let tr = out.diag().sum();
            assert!(tr.norm() <= 1e-12 * frobenius(&rho));
            assert!(max_abs(&(&out - &dagger(&out))) <= 1e-12);
        }
    }

    #[test]
    fn unitary_part_vanishes_on_commuting_state() {
        let model = ChainModel::xxz(2, 1.0, vec![0.7], None).unwrap();
        let h = build_hamiltonian(&model).unwrap();
        let (_, vecs) = h.eigh(UPLO::Lower).unwrap();
        // projector onto an eigenstate commutes with H
        let v = vecs.column(0);
        let mut proj = Array2::zeros((4, 4));
        for i in 0..4 {
            for j in 0..4 {
                proj[(i, j)] = v[i] * v[j].conj();
            }
        }
        let out = apply_generator(&h, &[], &proj).unwrap();
        assert!(max_abs(&out) < 1e-13);
    }

    #[test]
    fn superoperator_single_site_commutator() {
        let h = pauli(Pauli::Z);
        let m = build_superoperator(&h, &[]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rho = random_hermitian(2, &mut rng);
        let direct = apply_generator(&h, &[], &rho).unwrap();
        let via_m = unvectorize(&m.dot(&vectorize(&rho)), 2);
        assert!(max_abs(&(&direct - &via_m)) < 1e-14);
    }

    #[test]
    fn superoperator_matches_matrix_free_application() {
        let (h, jumps) = sample_system();
        let m = build_superoperator(&h, &jumps).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..4 {
            let rho = random_hermitian(8, &mut rng);
            let direct = apply_generator(&h, &jumps, &rho).unwrap();
            let via_m = unvectorize(&m.dot(&vectorize(&rho)), 8);
            assert!(max_abs(&(&direct - &via_m)) < 1e-12);
        }
    }

    #[test]
    fn trace_row_annihilates_superoperator() {
        let (h, jumps) = sample_system();
        let m = build_superoperator(&h, &jumps).unwrap();
        let d = 8;
        for col in 0..d * d {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..d {
                acc += m[(k * (d + 1), col)];
            }
            assert!(acc.norm() < 1e-12, "column {col}: trace row gives {acc}");
        }
    }

    #[test]
    fn unbiased_drive_has_maximally_mixed_steady_state() {
        let model = ChainModel::xxz(3, 1.0, vec![1.0, 1.0], Some(vec![0.3; 3])).unwrap();
        let h = build_hamiltonian(&model).unwrap();
        let spec = DriveSpec::ZTarget { gamma: 1.0, f_left: 0.0, f_right: 0.0 };
        let jumps = build_jump_operators(&spec, 3).unwrap();
        let result = steady_state(&h, &jumps, &SolverOptions::default()).unwrap();
        let mixed = identity(3).mapv(|z| z / C64::new(8.0, 0.0));
        assert!(max_abs(&(&result.state - &mixed)) < 1e-10);
        assert_eq!(result.nullspace_dimension, 1);
    }

    #[test]
    fn svd_and_lu_backends_agree() {
        let (h, jumps) = sample_system();
        let svd = steady_state(
            &h,
            &jumps,
            &SolverOptions { strategy: SolveStrategy::Svd, ..Default::default() },
        )
        .unwrap();
        let lu = steady_state(
            &h,
            &jumps,
            &SolverOptions { strategy: SolveStrategy::BorderedLu, ..Default::default() },
        )
        .unwrap();
        assert!(trace_distance(&svd.state, &lu.state).unwrap() < 1e-10);
        assert!(check_density_matrix(&svd.state).is_ok());
        assert!(check_density_matrix(&lu.state).is_ok());
    }

    #[test]
    fn stationary_eigenstate_is_unchanged_by_evolution() {
        let model = ChainModel::xxz(2, 1.0, vec![0.5], None).unwrap();
        let h = build_hamiltonian(&model).unwrap();
        let (_, vecs) = h.eigh(UPLO::Lower).unwrap();
        let v = vecs.column(1);
        let mut rho0 = Array2::zeros((4, 4));
        for i in 0..4 {
            for j in 0..4 {
                rho0[(i, j)] = v[i] * v[j].conj();
            }
        }
        let rho_t = time_evolve(&h, &[], &rho0, 5.0, 0.01).unwrap();
        assert!(max_abs(&(&rho_t - &rho0)) < 1e-10);
    }

    #[test]
    fn evolution_tail_is_contracting() {
        let (h, jumps) = sample_system();
        let d = 8;
        let rho0 = identity(3).mapv(|z| z / C64::new(d as f64, 0.0));
        let dt = default_dt(&h).unwrap();
        let r1 = time_evolve(&h, &jumps, &rho0, 10.0, dt).unwrap();
        let r2 = time_evolve(&h, &jumps, &rho0, 20.0, dt).unwrap();
        let r3 = time_evolve(&h, &jumps, &rho0, 40.0, dt).unwrap();
        let d12 = trace_distance(&r1, &r2).unwrap();
        let d23 = trace_distance(&r2, &r3).unwrap();
        assert!(d23 < d12);
    }

    #[test]
    fn time_evolution_reaches_nullspace_steady_state() {
        let (h, jumps) = sample_system();
        let ns = steady_state(&h, &jumps, &SolverOptions::default()).unwrap();
        let te = steady_state_via_time_evolution(&h, &jumps, &SolverOptions::default()).unwrap();
        assert_eq!(te.method, SolveMethod::TimeEvolution);
        assert!(trace_distance(&ns.state, &te.state).unwrap() < 1e-6);
    }

    #[test]
    fn absurd_step_size_is_rejected() {
        let (h, jumps) = sample_system();
        let rho0 = identity(3).mapv(|z| z / C64::new(8.0, 0.0));
        let result = time_evolve(&h, &jumps, &rho0, 1e9, 1e8);
        assert!(matches!(result, Err(Error::StepSize { .. })));
    }

    #[test]
    fn capacity_error_names_the_limit() {
        let h = identity(7);
        match build_superoperator(&h, &[]) {
            Err(Error::CapacityExceeded { n_sites, limit }) => {
                assert_eq!(n_sites, 7);
                assert_eq!(limit, DENSE_SITE_LIMIT);
            }
            other => panic!("expected capacity error, got {other:?}"),
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn random_matrix(d: usize, seed: u64) -> Array2<C64> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Array2::from_shape_fn((d, d), |_| {
                C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(32))]

            // tr L(X) = 0 for any X, not just density matrices: the
            // generator moves probability around but never creates it.
            #[test]
            fn generator_annihilates_trace(
                seed in 0u64..1_000_000,
                gamma in 0.1f64..2.0,
                f in -0.9f64..0.9,
                delta in -1.5f64..1.5,
            ) {
                let model = ChainModel::xxz(2, 1.0, vec![delta], None).unwrap();
                let h = build_hamiltonian(&model).unwrap();
                let spec = DriveSpec::ZTarget { gamma, f_left: f, f_right: -f };
                let jumps = build_jump_operators(&spec, 2).unwrap();
                let x = random_matrix(4, seed);
                let lx = apply_generator(&h, &jumps, &x).unwrap();
                let trace: C64 = lx.diag().sum();
                prop_assert!(trace.norm() <= 1e-12);
            }

            #[test]
            fn vectorize_roundtrips(seed in 0u64..1_000_000) {
                let x = random_matrix(8, seed);
                let back = unvectorize(&vectorize(&x), 8);
                prop_assert!(max_abs(&(&x - &back)) == 0.0);
            }

            // The superoperator is the matrix of apply_generator in the
            // column-stacking basis.
            #[test]
            fn superoperator_matches_direct_application(
                seed in 0u64..1_000_000,
                gamma in 0.1f64..2.0,
                f in -0.9f64..0.9,
            ) {
                let model = ChainModel::xxz(2, 1.0, vec![0.8], None).unwrap();
                let h = build_hamiltonian(&model).unwrap();
                let spec = DriveSpec::ZTarget { gamma, f_left: f, f_right: -f };
                let jumps = build_jump_operators(&spec, 2).unwrap();
                let m = build_superoperator(&h, &jumps).unwrap();
                let x = random_matrix(4, seed);
                let via_matrix = unvectorize(&m.dot(&vectorize(&x)), 4);
                let direct = apply_generator(&h, &jumps, &x).unwrap();
                prop_assert!(max_abs(&(&via_matrix - &direct)) <= 1e-12);
            }
        }
    }
}
