//! Spin- and energy-current operators and their steady-state expectations.
//!
//! The spin current J_j lives on bond (j, j+1); the energy current F_j
//! lives on the site triple (j−1, j, j+1), so it exists only for interior
//! sites 2 ≤ j ≤ N−1. In a steady state both are site-independent, which
//! `measure` reports as a deviation rather than asserting.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::ChainModel;
use crate::pauli::{pauli, product_chain, trace_of_product, Pauli};

/// Expectation with an imaginary part above this is reported as a
/// numerical-consistency error instead of being silently truncated.
pub const IMAG_TOLERANCE: f64 = 1e-8;

/// σ^a_j σ^b_{j+1} − σ^b_j σ^a_{j+1}, the antisymmetrized two-site product.
fn bond_commutator_like(a: Pauli, b: Pauli, j: usize, n: usize) -> Result<Array2<C64>> {
    let first = product_chain(&[(pauli(a), j), (pauli(b), j + 1)], n)?;
    let second = product_chain(&[(pauli(b), j), (pauli(a), j + 1)], n)?;
    Ok(first - second)
}

/// σ^a_{j−1} σ^b_j σ^c_{j+1} − σ^d_{j−1} σ^e_j σ^f_{j+1}.
fn triple_diff(
    (a, b, c): (Pauli, Pauli, Pauli),
    (d, e, f): (Pauli, Pauli, Pauli),
    j: usize,
    n: usize,
) -> Result<Array2<C64>> {
    let plus = product_chain(&[(pauli(a), j - 1), (pauli(b), j), (pauli(c), j + 1)], n)?;
    let minus = product_chain(&[(pauli(d), j - 1), (pauli(e), j), (pauli(f), j + 1)], n)?;
    Ok(plus - minus)
}

/// Spin-current operator on bond j: 2α(σ_j^x σ_{j+1}^y − σ_j^y σ_{j+1}^x),
/// with α the bond coupling (uniform for XXZ, α_j for XXX).
pub fn spin_current_operator(model: &ChainModel, j: usize) -> Result<Array2<C64>> {
    model.validate()?;
    let n = model.n_sites();
    if j < 1 || j >= n {
        return Err(Error::InvalidInput(format!(
            "spin current bond index j = {j} out of range 1..={}",
            n - 1
        )));
    }
    let coupling = match model {
        ChainModel::Xxz { alpha, .. } => *alpha,
        ChainModel::Xxx { alpha, .. } => alpha[j - 1],
    };
    let op = bond_commutator_like(Pauli::X, Pauli::Y, j, n)?;
    Ok(op.mapv(|z| z * C64::new(2.0 * coupling, 0.0)))
}

use Pauli::{X, Y, Z};

fn energy_current_xxz(
    alpha: f64,
    delta: &[f64],
    field: &[f64],
    j: usize,
    n: usize,
    include_field: bool,
) -> Result<Array2<C64>> {
    // bulk part: 2α[α(yzx − xzy) + Δ_{j−1,j}(zxy − zyx) + Δ_{j,j+1}(xyz − yxz)]
    let mut op = triple_diff((Y, Z, X), (X, Z, Y), j, n)?.mapv(|z| z * C64::new(alpha, 0.0));
    op.scaled_add(
        C64::new(delta[j - 2], 0.0),
        &triple_diff((Z, X, Y), (Z, Y, X), j, n)?,
    );
    op.scaled_add(
        C64::new(delta[j - 1], 0.0),
        &triple_diff((X, Y, Z), (Y, X, Z), j, n)?,
    );
    op.mapv_inplace(|z| z * C64::new(2.0 * alpha, 0.0));
    // field part: ½B_j(J_{j−1} + J_j) with J's 2α prefactor folded in
    let b = if include_field { field[j - 1] } else { 0.0 };
    if b != 0.0 {
        let mut sum = bond_commutator_like(X, Y, j - 1, n)?;
        sum += &bond_commutator_like(X, Y, j, n)?;
        op.scaled_add(C64::new(b * alpha, 0.0), &sum);
    }
    Ok(op)
}

fn energy_current_xxx(alpha: &[f64], j: usize, n: usize) -> Result<Array2<C64>> {
    let mut op = triple_diff((Y, Z, X), (X, Z, Y), j, n)?;
    op += &triple_diff((Z, X, Y), (Z, Y, X), j, n)?;
    op += &triple_diff((X, Y, Z), (Y, X, Z), j, n)?;
    let w = 2.0 * alpha[j - 2] * alpha[j - 1];
    Ok(op.mapv(|z| z * C64::new(w, 0.0)))
}

/// Energy-current operator at interior site j (2 ≤ j ≤ N−1), including
/// the magnetic-field contribution ½B_j(J_{j−1} + J_j) for XXZ.
pub fn energy_current_operator(model: &ChainModel, j: usize) -> Result<Array2<C64>> {
    energy_current_operator_impl(model, j, true)
}

/// Energy-current operator with the field term dropped. The bath-inversion
/// invariance statements are about this operator; it coincides with
/// `energy_current_operator` whenever B = 0.
pub fn energy_current_operator_field_free(model: &ChainModel, j: usize) -> Result<Array2<C64>> {
    energy_current_operator_impl(model, j, false)
}

fn energy_current_operator_impl(
    model: &ChainModel,
    j: usize,
    include_field: bool,
) -> Result<Array2<C64>> {
    model.validate()?;
    let n = model.n_sites();
    if j < 2 || j >= n {
        return Err(Error::InvalidInput(format!(
            "energy current site index j = {j} out of interior range 2..={}",
            n.saturating_sub(1)
        )));
    }
    match model {
        ChainModel::Xxz { alpha, delta, field, .. } => {
            energy_current_xxz(*alpha, delta, field, j, n, include_field)
        }
        ChainModel::Xxx { alpha, .. } => energy_current_xxx(alpha, j, n),
    }
}

/// Steady-state currents of one state: per-bond spin currents, per-site
/// energy currents, their mean, and the spread across sites.
#[derive(Debug, Clone, Serialize)]
pub struct CurrentReport {
    /// ⟨J_j⟩ for j = 1…N−1.
    pub spin_currents: Vec<f64>,
    /// ⟨F_j⟩ for j = 2…N−1 (empty for N = 2).
    pub energy_currents: Vec<f64>,
    pub mean_energy_current: f64,
    pub max_site_deviation_spin: f64,
    pub max_site_deviation_energy: f64,
}

impl CurrentReport {
    /// Mean spin current (the scalar ⟨J⟩ of a converged steady state).
    pub fn mean_spin_current(&self) -> f64 {
        mean(&self.spin_currents)
    }
}

fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        0.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    }
}

fn max_deviation(values: &[f64], center: f64) -> f64 {
    values.iter().fold(0.0f64, |acc, v| acc.max((v - center).abs()))
}

fn real_expectation(rho: &Array2<C64>, op: &Array2<C64>, what: &str) -> Result<f64> {
    let z = trace_of_product(rho, op);
    if z.im.abs() > IMAG_TOLERANCE {
        return Err(Error::NumericalConsistency(format!(
            "{what} expectation has imaginary part {:.3e} (tolerance {IMAG_TOLERANCE:.0e})",
            z.im
        )));
    }
    Ok(z.re)
}

/// Evaluate every current operator of `model` in the state ρ.
pub fn measure(rho: &Array2<C64>, model: &ChainModel) -> Result<CurrentReport> {
    model.validate()?;
    let n = model.n_sites();
    let d = crate::pauli::dim(n);
    if rho.dim() != (d, d) {
        return Err(Error::InvalidInput(format!(
            "state dimension {:?} does not match a {n}-site chain ({d}x{d})",
            rho.dim()
        )));
    }
    let mut spin_currents = Vec::with_capacity(n - 1);
    for j in 1..n {
        let op = spin_current_operator(model, j)?;
        spin_currents.push(real_expectation(rho, &op, &format!("spin current J_{j}"))?);
    }
    let mut energy_currents = Vec::new();
    for j in 2..n {
        let op = energy_current_operator(model, j)?;
        energy_currents.push(real_expectation(rho, &op, &format!("energy current F_{j}"))?);
    }
    let mean_energy_current = mean(&energy_currents);
    Ok(CurrentReport {
        max_site_deviation_spin: max_deviation(&spin_currents, mean(&spin_currents)),
        max_site_deviation_energy: max_deviation(&energy_currents, mean_energy_current),
        spin_currents,
        energy_currents,
        mean_energy_current,
    })
}
