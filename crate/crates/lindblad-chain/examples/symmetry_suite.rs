//! Verify the symmetry mechanism behind the energy-current invariance.
//!
//! Each dissipator family has a matched single-site unitary u such that
//! U = u ⊗ ... ⊗ u (same u on every site) commutes with the Hamiltonian,
//! maps the dissipator onto its bath-swapped partner, and preserves every
//! local energy-current operator. The suite checks all three statements,
//! plus the end-to-end steady-state consequence, on random chains.
//!
//! Run with `cargo run --example symmetry_suite`. The grid here is cut
//! down to keep the run short; the library default covers n in {3, 4, 5},
//! eight twist angles, and ten random draws per cell.

use std::f64::consts::PI;

use lindblad_chain::experiments::{run_symmetry_suite, SuiteGrid};
use lindblad_chain::lindblad::SolverOptions;
use lindblad_chain::symmetry::{make_unitary, UnitaryFamily};

fn main() -> lindblad_chain::Result<()> {
    // First the algebra: every family's conjugation table holds exactly.
    println!("conjugation tables (max deviation from the closed form):");
    for (family, theta) in [
        (UnitaryFamily::U1, Some(0.3)),
        (UnitaryFamily::U2, None),
        (UnitaryFamily::U3, Some(2.0)),
        (UnitaryFamily::U4, None),
    ] {
        let u = make_unitary(family, theta)?;
        println!(
            "  {}: unitarity {:.2e}, table {:.2e}",
            family.name(),
            u.unitarity_defect(),
            u.table_defect()
        );
    }
    println!();

    let grid = SuiteGrid {
        n_sites: vec![3, 4],
        theta_grid: vec![0.0, PI / 4.0, PI / 2.0],
        draws: 3,
        seed: 42,
    };
    let rows = run_symmetry_suite(&grid, &SolverOptions::default())?;

    println!(
        "{:>3} {:>12} {:>2} {:>6} {:>10} {:>10} {:>10} {:>10}",
        "u", "drive", "n", "theta", "[U,H]", "dissipator", "currents", "end-to-end"
    );
    for row in &rows {
        let theta = row.theta.map(|t| format!("{t:.3}")).unwrap_or_else(|| "-".into());
        println!(
            "{:>3} {:>12} {:>2} {:>6} {:>10.2e} {:>10.2e} {:>10.2e} {:>10.2e}",
            row.unitary,
            row.drive,
            row.n_sites,
            theta,
            row.hamiltonian_deviation,
            row.dissipator_deviation,
            row.current_deviation,
            row.end_to_end_residual
        );
    }

    let passed = rows.iter().filter(|r| r.passed).count();
    println!("\n{passed}/{} checks passed", rows.len());
    Ok(())
}
