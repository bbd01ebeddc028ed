//! Single-site Pauli/ladder operators and their embedding into the
//! 2^N-dimensional many-body space.
//!
//! Conventions, fixed crate-wide:
//! - basis: σ^z eigenbasis with |↑⟩ (eigenvalue +1) first;
//! - sites are 1-indexed, site 1 is the *leftmost* tensor factor;
//! - dense matrices only, `Array2<C64>`.

use ndarray::linalg::kron;
use ndarray::{array, Array2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Labels for the single-site operators known to [`pauli`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
    Plus,
    Minus,
    Identity,
}

/// The standard 2×2 matrix for `label` in the σ^z eigenbasis.
pub fn pauli(label: Pauli) -> Array2<C64> {
    let o = C64::new(0.0, 0.0);
    let l = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match label {
        Pauli::X => array![[o, l], [l, o]],
        Pauli::Y => array![[o, -i], [i, o]],
        Pauli::Z => array![[l, o], [o, -l]],
        Pauli::Plus => array![[o, l], [o, o]],
        Pauli::Minus => array![[o, o], [l, o]],
        Pauli::Identity => array![[l, o], [o, l]],
    }
}

/// Hilbert-space dimension 2^N.
pub fn dim(n_sites: usize) -> usize {
    1usize << n_sites
}

/// Identity on the full chain.
pub fn identity(n_sites: usize) -> Array2<C64> {
    Array2::eye(dim(n_sites))
}

/// I ⊗ … ⊗ op ⊗ … ⊗ I with `op` in the slot for `site` (1-indexed).
pub fn embed(op: &Array2<C64>, site: usize, n_sites: usize) -> Result<Array2<C64>> {
    if op.nrows() != 2 || op.ncols() != 2 {
        return Err(Error::InvalidInput(format!(
            "embed expects a 2x2 local operator, got {}x{}",
            op.nrows(),
            op.ncols()
        )));
    }
    if site < 1 || site > n_sites {
        return Err(Error::InvalidInput(format!(
            "site {site} out of range [1, {n_sites}]"
        )));
    }
    let left = Array2::<C64>::eye(dim(site - 1));
    let right = Array2::<C64>::eye(dim(n_sites - site));
    Ok(kron(&kron(&left, op), &right))
}

/// Product of embeddings of local operators at pairwise distinct sites.
///
/// Because the sites are distinct the result equals the direct tensor
/// placement and is independent of the list order.
pub fn product_chain(ops: &[(Array2<C64>, usize)], n_sites: usize) -> Result<Array2<C64>> {
    let mut seen = vec![false; n_sites + 1];
    for &(_, site) in ops {
        if site < 1 || site > n_sites {
            return Err(Error::InvalidInput(format!(
                "site {site} out of range [1, {n_sites}]"
            )));
        }
        if seen[site] {
            return Err(Error::InvalidInput(format!(
                "duplicate site {site} in product_chain"
            )));
        }
        seen[site] = true;
    }
    let mut out = identity(n_sites);
    for (op, site) in ops {
        out = out.dot(&embed(op, *site, n_sites)?);
    }
    Ok(out)
}

/// Frobenius norm ‖A‖_F.
pub fn frobenius(a: &Array2<C64>) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entrywise modulus max |A_ij|.
pub fn max_abs(a: &Array2<C64>) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// tr(A·B), evaluated as Σ_ij A_ij B_ji without forming the product.
pub fn trace_of_product(a: &Array2<C64>, b: &Array2<C64>) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (i, row) in a.outer_iter().enumerate() {
        for (j, aij) in row.iter().enumerate() {
            acc += aij * b[(j, i)];
        }
    }
    acc
}

/// A† (conjugate transpose).
pub fn dagger(a: &Array2<C64>) -> Array2<C64> {
    a.t().mapv(|z| z.conj())
}
