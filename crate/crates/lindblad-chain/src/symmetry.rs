//! The four local unitaries behind the bath-inversion argument, and the
//! machine checks of every identity that argument needs:
//!
//!   1. U H U† = H for the field-free chain Hamiltonian,
//!   2. conjugation by U maps the Liouvillian onto the bath-inverted one,
//!   3. U F_j U† = F_j for the field-free energy-current operators.
//!
//! Together these imply that if ρ is the unique steady state of (H, D)
//! then UρU† is the steady state of (H, D_inverted) and both carry the
//! same energy current, which is the one-way street statement.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::drive::{build_jump_operators, invert_baths, DriveSpec};
use crate::error::{Error, Result};
use crate::lindblad::build_superoperator;
use crate::model::{build_hamiltonian, ChainModel};
use crate::observables::energy_current_operator_field_free;
use crate::pauli::{dagger, frobenius, max_abs, pauli, Pauli};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitaryFamily {
    U1,
    U2,
    U3,
    U4,
}

impl UnitaryFamily {
    pub fn name(self) -> &'static str {
        match self {
            UnitaryFamily::U1 => "u1",
            UnitaryFamily::U2 => "u2",
            UnitaryFamily::U3 => "u3",
            UnitaryFamily::U4 => "u4",
        }
    }

    /// Whether this family takes a twist angle θ.
    pub fn twisted(self) -> bool {
        matches!(self, UnitaryFamily::U1 | UnitaryFamily::U3)
    }

    /// The drive family whose bath inversion this unitary implements.
    pub fn matched_drive(self) -> &'static str {
        match self {
            UnitaryFamily::U1 => "twisted_xy",
            UnitaryFamily::U2 => "six_op_xxz",
            UnitaryFamily::U3 => "twisted_zx",
            UnitaryFamily::U4 => "six_op_xxx",
        }
    }
}

/// A single-site unitary u; the global conjugation is u⊗…⊗u.
#[derive(Debug, Clone)]
pub struct LocalUnitary {
    pub matrix: Array2<C64>,
    pub family: UnitaryFamily,
    pub twist: Option<f64>,
}

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Construct u1(θ), u2, u3(θ), or u4. θ is required exactly for u1 and
/// u3. u3's entries √(1 ± cosθ) only realize its conjugation table for
/// sin θ ≥ 0, so u3 restricts θ to [0, π]; u1 accepts any finite θ.
pub fn make_unitary(family: UnitaryFamily, theta: Option<f64>) -> Result<LocalUnitary> {
    match (family.twisted(), theta) {
        (true, None) => {
            return Err(Error::InvalidInput(format!(
                "{} requires a twist angle theta",
                family.name()
            )))
        }
        (false, Some(_)) => {
            return Err(Error::InvalidInput(format!(
                "{} does not take a twist angle",
                family.name()
            )))
        }
        _ => {}
    }
    if let Some(t) = theta {
        if !t.is_finite() {
            return Err(Error::InvalidInput("theta must be finite".into()));
        }
        if family == UnitaryFamily::U3 && !(0.0..=std::f64::consts::PI).contains(&t) {
            return Err(Error::InvalidInput(format!(
                "u3 twist angle theta = {t} must lie in [0, pi]; outside that range the \
                 matrix entries sqrt(1 - cos theta) no longer represent the intended rotation"
            )));
        }
    }
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    let i = C64::new(0.0, 1.0);
    let one = C64::new(1.0, 0.0);
    let matrix = match family {
        UnitaryFamily::U1 => {
            let t = theta.unwrap();
            let phase = C64::new(0.0, t).exp();
            ndarray::array![
                [C64::new(0.0, 0.0), s * (one + i)],
                [-phase * s * (one - i), C64::new(0.0, 0.0)]
            ]
        }
        UnitaryFamily::U2 => ndarray::array![
            [C64::new(0.0, 0.0), s * (-one + i)],
            [s * (one + i), C64::new(0.0, 0.0)]
        ],
        UnitaryFamily::U3 => {
            let t = theta.unwrap();
            let a = (1.0 - t.cos()).sqrt();
            let b = (1.0 + t.cos()).sqrt();
            ndarray::array![
                [i * s * a, i * s * b],
                [i * s * b, -(i * s * a)]
            ]
        }
        UnitaryFamily::U4 => ndarray::array![[s * i, -(s * one)], [s * one, -(s * i)]],
    };
    let unitary = LocalUnitary { matrix, family, twist: theta };
    debug_assert!(unitary.unitarity_defect() < 1e-14);
    Ok(unitary)
}

impl LocalUnitary {
    /// max |u†u − 1| entrywise.
    pub fn unitarity_defect(&self) -> f64 {
        let g = dagger(&self.matrix).dot(&self.matrix);
        max_abs(&(&g - &Array2::<C64>::eye(2)))
    }

    /// u σ u† for a 2×2 operator σ.
    pub fn conjugate(&self, op: &Array2<C64>) -> Array2<C64> {
        self.matrix.dot(op).dot(&dagger(&self.matrix))
    }

    /// The spin conjugation table u σ^a u† as explicit 2×2 matrices, in
    /// the order (x, y, z).
    pub fn conjugation_table(&self) -> [Array2<C64>; 3] {
        [
            self.conjugate(&pauli(Pauli::X)),
            self.conjugate(&pauli(Pauli::Y)),
            self.conjugate(&pauli(Pauli::Z)),
        ]
    }

    /// Largest entrywise deviation of the conjugation table from its
    /// closed form: for u1, x ↦ −sinθ x + cosθ y, y ↦ cosθ x + sinθ y,
    /// z ↦ −z; for u2, x ↦ −y, y ↦ −x, z ↦ −z; for u3, x ↦ cosθ x +
    /// sinθ z, y ↦ −y, z ↦ sinθ x − cosθ z; for u4, x ↦ −x, y ↦ −z,
    /// z ↦ −y.
    pub fn table_defect(&self) -> f64 {
        let combo = |cx: f64, cy: f64, cz: f64| {
            let mut m = pauli(Pauli::X).mapv(|z| z * C64::new(cx, 0.0));
            m.scaled_add(C64::new(cy, 0.0), &pauli(Pauli::Y));
            m.scaled_add(C64::new(cz, 0.0), &pauli(Pauli::Z));
            m
        };
        let t = self.twist.unwrap_or(0.0);
        let expected: [Array2<C64>; 3] = match self.family {
            UnitaryFamily::U1 => [
                combo(-t.sin(), t.cos(), 0.0),
                combo(t.cos(), t.sin(), 0.0),
                combo(0.0, 0.0, -1.0),
            ],
            UnitaryFamily::U2 => {
                [combo(0.0, -1.0, 0.0), combo(-1.0, 0.0, 0.0), combo(0.0, 0.0, -1.0)]
            }
            UnitaryFamily::U3 => [
                combo(t.cos(), 0.0, t.sin()),
                combo(0.0, -1.0, 0.0),
                combo(t.sin(), 0.0, -t.cos()),
            ],
            UnitaryFamily::U4 => {
                [combo(-1.0, 0.0, 0.0), combo(0.0, 0.0, -1.0), combo(0.0, -1.0, 0.0)]
            }
        };
        self.conjugation_table()
            .iter()
            .zip(expected.iter())
            .map(|(got, want)| max_abs(&(got - want)))
            .fold(0.0, f64::max)
    }
}

/// u⊗u⊗…⊗u over N sites.
pub fn global_unitary(u: &LocalUnitary, n_sites: usize) -> Result<Array2<C64>> {
    if n_sites == 0 {
        return Err(Error::InvalidInput("n_sites = 0 has no state space".into()));
    }
    let mut big = u.matrix.clone();
    for _ in 1..n_sites {
        big = ndarray::linalg::kron(&big, &u.matrix);
    }
    Ok(big)
}

fn relative_conjugation_defect(u_big: &Array2<C64>, op: &Array2<C64>) -> f64 {
    let conj = u_big.dot(op).dot(&dagger(u_big));
    frobenius(&(&conj - op)) / frobenius(op).max(1e-300)
}

/// ‖U H U† − H‖_F / ‖H‖_F for the model's Hamiltonian as given (callers
/// wanting the field-free statement pass `model.without_field()`).
pub fn verify_hamiltonian_invariance(u: &LocalUnitary, model: &ChainModel) -> Result<f64> {
    let h = build_hamiltonian(model)?;
    let u_big = global_unitary(u, model.n_sites())?;
    Ok(relative_conjugation_defect(&u_big, &h))
}

/// Checks that the (u, drive) pair is one of the four the construction
/// supports, with matching twist angles where applicable.
fn check_pairing(u: &LocalUnitary, spec: &DriveSpec) -> Result<()> {
    let spec_family = spec.family();
    if spec_family != u.matched_drive_family() {
        return Err(Error::InvalidInput(format!(
            "{} implements bath inversion for {}, not for {}",
            u.family.name(),
            u.family.matched_drive(),
            spec_family
        )));
    }
    let drive_theta = match spec {
        DriveSpec::TwistedXy { theta, .. } | DriveSpec::TwistedZx { theta, .. } => Some(*theta),
        _ => None,
    };
    if let (Some(a), Some(b)) = (u.twist, drive_theta) {
        if (a - b).abs() > 1e-14 {
            return Err(Error::InvalidInput(format!(
                "twist angle mismatch: unitary has theta = {a}, drive has theta = {b}"
            )));
        }
    }
    Ok(())
}

impl LocalUnitary {
    fn matched_drive_family(&self) -> String {
        self.family.matched_drive().to_string()
    }
}

/// Superoperator-level check that conjugation by U maps the Liouvillian
/// of `spec` onto the Liouvillian of `invert_baths(spec)`:
/// returns ‖𝕃_inv − (Ū⊗U) 𝕃 (Ū⊗U)†‖_F / ‖𝕃‖_F.
///
/// In column-stacking convention, ρ ↦ UρU† acts on vec(ρ) as Ū⊗U.
pub fn verify_dissipator_swap(
    u: &LocalUnitary,
    spec: &DriveSpec,
    n_sites: usize,
) -> Result<f64> {
    check_pairing(u, spec)?;
    let h_zero = Array2::<C64>::zeros((crate::pauli::dim(n_sites), crate::pauli::dim(n_sites)));
    let fwd = build_superoperator(&h_zero, &build_jump_operators(spec, n_sites)?)?;
    let inv = build_superoperator(&h_zero, &build_jump_operators(&invert_baths(spec), n_sites)?)?;
    let u_big = global_unitary(u, n_sites)?;
    let w = ndarray::linalg::kron(&u_big.mapv(|z| z.conj()), &u_big);
    let mapped = w.dot(&fwd).dot(&dagger(&w));
    let denom = frobenius(&fwd).max(1e-300);
    Ok(frobenius(&(&inv - &mapped)) / denom)
}

/// max over interior j of ‖U F_j U† − F_j‖_F / ‖F_j‖_F with the
/// field-free energy-current operators of `model`.
pub fn verify_current_invariance(u: &LocalUnitary, model: &ChainModel) -> Result<f64> {
    let n = model.n_sites();
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "energy currents need an interior site; n_sites = {n} has none"
        )));
    }
    let u_big = global_unitary(u, n)?;
    let mut worst = 0.0f64;
    for j in 2..n {
        let f = energy_current_operator_field_free(model, j)?;
        worst = worst.max(relative_conjugation_defect(&u_big, &f));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::drive::SixAmplitudes;
    use crate::lindblad::{apply_generator, steady_state, SolverOptions};
    use crate::model::graded_profile;
    use crate::pauli::embed;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const THETAS: [f64; 5] = [0.0, 0.4, 1.1, 2.0, 3.0];

    fn all_unitaries() -> Vec<LocalUnitary> {
        let mut list = Vec::new();
        for t in THETAS {
            list.push(make_unitary(UnitaryFamily::U1, Some(t)).unwrap());
            list.push(make_unitary(UnitaryFamily::U3, Some(t)).unwrap());
        }
        list.push(make_unitary(UnitaryFamily::U2, None).unwrap());
        list.push(make_unitary(UnitaryFamily::U4, None).unwrap());
        list
    }

    #[test]
    fn all_unitaries_are_unitary() {
        for u in all_unitaries() {
            assert!(u.unitarity_defect() < 1e-14, "{} fails", u.family.name());
        }
    }

    #[test]
    fn conjugation_tables_hold_entrywise() {
        for u in all_unitaries() {
            let defect = u.table_defect();
            assert!(
                defect < 1e-14,
                "{} (theta {:?}) table defect {defect:.3e}",
                u.family.name(),
                u.twist
            );
        }
    }

    #[test]
    fn theta_is_required_exactly_for_twisted_families() {
        assert!(make_unitary(UnitaryFamily::U1, None).is_err());
        assert!(make_unitary(UnitaryFamily::U3, None).is_err());
        assert!(make_unitary(UnitaryFamily::U2, Some(0.1)).is_err());
        assert!(make_unitary(UnitaryFamily::U4, Some(0.1)).is_err());
        assert!(make_unitary(UnitaryFamily::U3, Some(4.0)).is_err());
        assert!(make_unitary(UnitaryFamily::U3, Some(-0.1)).is_err());
    }

    #[test]
    fn global_unitary_basics() {
        let u = make_unitary(UnitaryFamily::U2, None).unwrap();
        let u1 = global_unitary(&u, 1).unwrap();
        assert!(max_abs(&(&u1 - &u.matrix)) == 0.0);
        let u3 = global_unitary(&u, 3).unwrap();
        let g = dagger(&u3).dot(&u3);
        assert!(max_abs(&(&g - &Array2::<C64>::eye(8))) < 1e-12);
    }

    #[test]
    fn global_conjugation_acts_sitewise() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..4 {
            let t = rng.random_range(0.0..std::f64::consts::PI);
            let u = make_unitary(UnitaryFamily::U1, Some(t)).unwrap();
            let n = rng.random_range(2..=4);
            let site = rng.random_range(1..=n);
            let axis = [Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..3)];
            let u_big = global_unitary(&u, n).unwrap();
            let big = embed(&pauli(axis), site, n).unwrap();
            let lhs = u_big.dot(&big).dot(&dagger(&u_big));
            let rhs = embed(&u.conjugate(&pauli(axis)), site, n).unwrap();
            assert!(max_abs(&(&lhs - &rhs)) < 1e-12);
        }
    }

    fn graded_xxz(n: usize) -> ChainModel {
        ChainModel::xxz(n, 1.0, graded_profile(1.0, 0.1, n - 1), None).unwrap()
    }

    fn graded_xxx(n: usize) -> ChainModel {
        ChainModel::xxx(n, graded_profile(1.0, 0.1, n - 1), None).unwrap()
    }

    #[test]
    fn hamiltonian_invariance_for_matched_models() {
        for n in [3usize, 4] {
            for t in [0.3, 1.2] {
                let u1 = make_unitary(UnitaryFamily::U1, Some(t)).unwrap();
                let u3 = make_unitary(UnitaryFamily::U3, Some(t)).unwrap();
                assert!(verify_hamiltonian_invariance(&u1, &graded_xxz(n)).unwrap() < 1e-12);
                assert!(verify_hamiltonian_invariance(&u3, &graded_xxx(n)).unwrap() < 1e-12);
            }
            let u2 = make_unitary(UnitaryFamily::U2, None).unwrap();
            let u4 = make_unitary(UnitaryFamily::U4, None).unwrap();
            assert!(verify_hamiltonian_invariance(&u2, &graded_xxz(n)).unwrap() < 1e-12);
            assert!(verify_hamiltonian_invariance(&u4, &graded_xxx(n)).unwrap() < 1e-12);
        }
    }

    #[test]
    fn magnetic_field_breaks_u1_invariance() {
        let model = ChainModel::xxz(3, 1.0, vec![0.9, 1.1], Some(vec![0.5; 3])).unwrap();
        let u1 = make_unitary(UnitaryFamily::U1, Some(0.7)).unwrap();
        let dev = verify_hamiltonian_invariance(&u1, &model).unwrap();
        assert!(dev > 1e-3, "field term should break the symmetry, got {dev:.3e}");
        assert!(verify_hamiltonian_invariance(&u1, &model.without_field()).unwrap() < 1e-12);
    }

    fn sample_amps(rng: &mut ChaCha8Rng) -> SixAmplitudes {
        SixAmplitudes {
            alpha: rng.random_range(0.1..1.5),
            beta: rng.random_range(0.1..1.5),
            p: rng.random_range(0.1..1.5),
            q: rng.random_range(0.1..1.5),
            u: rng.random_range(0.1..1.5),
            v: rng.random_range(0.1..1.5),
        }
    }

    #[test]
    fn dissipator_swap_holds_for_all_four_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [2usize, 3] {
            for t in [0.0, 0.9, 2.2] {
                let u1 = make_unitary(UnitaryFamily::U1, Some(t)).unwrap();
                let xy = DriveSpec::TwistedXy { gamma: 1.3, f: 0.4, theta: t };
                assert!(verify_dissipator_swap(&u1, &xy, n).unwrap() < 1e-12);
                let u3 = make_unitary(UnitaryFamily::U3, Some(t)).unwrap();
                let zx = DriveSpec::TwistedZx { gamma: 0.8, f: -0.3, theta: t };
                assert!(verify_dissipator_swap(&u3, &zx, n).unwrap() < 1e-12);
            }
            let u2 = make_unitary(UnitaryFamily::U2, None).unwrap();
            let u4 = make_unitary(UnitaryFamily::U4, None).unwrap();
            for _ in 0..3 {
                let xxz = DriveSpec::SixOpXxz(sample_amps(&mut rng));
                let xxx = DriveSpec::SixOpXxx(sample_amps(&mut rng));
                assert!(verify_dissipator_swap(&u2, &xxz, n).unwrap() < 1e-12);
                assert!(verify_dissipator_swap(&u4, &xxx, n).unwrap() < 1e-12);
            }
        }
    }

    #[test]
    fn mismatched_pair_is_rejected() {
        let u1 = make_unitary(UnitaryFamily::U1, Some(0.4)).unwrap();
        let spec = DriveSpec::SixOpXxz(SixAmplitudes {
            alpha: 0.5,
            beta: 0.5,
            p: 0.5,
            q: 0.5,
            u: 0.5,
            v: 0.5,
        });
        assert!(matches!(
            verify_dissipator_swap(&u1, &spec, 3),
            Err(Error::InvalidInput(_))
        ));
        let u1a = make_unitary(UnitaryFamily::U1, Some(0.4)).unwrap();
        let xy = DriveSpec::TwistedXy { gamma: 1.0, f: 0.2, theta: 0.9 };
        assert!(matches!(
            verify_dissipator_swap(&u1a, &xy, 3),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn current_invariance_for_matched_models() {
        let u1 = make_unitary(UnitaryFamily::U1, Some(1.4)).unwrap();
        let u2 = make_unitary(UnitaryFamily::U2, None).unwrap();
        let u3 = make_unitary(UnitaryFamily::U3, Some(0.6)).unwrap();
        let u4 = make_unitary(UnitaryFamily::U4, None).unwrap();
        for n in [3usize, 4] {
            assert!(verify_current_invariance(&u1, &graded_xxz(n)).unwrap() < 1e-12);
            assert!(verify_current_invariance(&u2, &graded_xxz(n)).unwrap() < 1e-12);
            assert!(verify_current_invariance(&u3, &graded_xxx(n)).unwrap() < 1e-12);
            assert!(verify_current_invariance(&u4, &graded_xxx(n)).unwrap() < 1e-12);
        }
    }

    // End-to-end: the conjugated steady state satisfies the inverted
    // equation without re-solving.
    #[test]
    fn conjugated_steady_state_solves_inverted_problem() {
        let n = 3;
        let model = graded_xxz(n);
        let h = crate::model::build_hamiltonian(&model).unwrap();
        let theta = 0.8;
        let spec = DriveSpec::TwistedXy { gamma: 1.0, f: 0.5, theta };
        let jumps = build_jump_operators(&spec, n).unwrap();
        let rho = steady_state(&h, &jumps, &SolverOptions::default()).unwrap().state;
        let u = make_unitary(UnitaryFamily::U1, Some(theta)).unwrap();
        let u_big = global_unitary(&u, n).unwrap();
        let mapped = u_big.dot(&rho).dot(&dagger(&u_big));
        let inv_jumps = build_jump_operators(&invert_baths(&spec), n).unwrap();
        let residual = frobenius(&apply_generator(&h, &inv_jumps, &mapped).unwrap());
        assert!(residual < 1e-9, "end-to-end residual {residual:.3e}");
    }
}
