//! Boundary dissipator families and the bath-inversion map.
//!
//! Every family attaches jump operators only to the first and last sites.
//! Rates are absorbed into the operator matrices, so a channel enters the
//! Lindblad dissipator as L ρ L† − ½{L†L, ρ} with no extra prefactor.
//!
//! Families:
//! - `ZTarget`: σ^± channels targeting ⟨σ^z⟩ = f_L, f_R (prefactor γ/2);
//! - `TwistedXy`: YZ-polarized left bath, right bath twisted by θ in the
//!   XY plane (prefactor γ);
//! - `SixOpXxz`: twelve operators (six amplitudes α, β, p, q, u, v) with
//!   targets along all three axes, amplitude pairing chosen for the XXZ
//!   chain;
//! - `TwistedZx`: XY-polarized left bath, right bath twisted by θ in the
//!   ZX plane;
//! - `SixOpXxx`: twelve operators with the amplitude pairing for the XXX
//!   chain.
//!
//! Bath inversion swaps the operator *content* between sites 1 and N; it
//! is an involution. For the twisted families the swapped drive is not
//! expressible by any parameter change alone, so it is represented by the
//! explicit [`DriveSpec::Inverted`] wrapper.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelKind;
use crate::pauli::{dagger, embed, pauli, Pauli};

/// One Lindblad channel: a 2×2 matrix (rate absorbed) at a boundary site.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpOperator {
    pub site: usize,
    pub matrix: Array2<C64>,
}

impl JumpOperator {
    /// The operator embedded in the full 2^N-dimensional space.
    pub fn embedded(&self, n_sites: usize) -> Result<Array2<C64>> {
        embed(&self.matrix, self.site, n_sites)
    }

    /// Spectral norm of the 2×2 matrix; ‖L‖₂² is the channel's rate scale.
    pub fn spectral_norm(&self) -> f64 {
        // largest eigenvalue of the 2x2 Hermitian L†L, closed form
        let g = dagger(&self.matrix).dot(&self.matrix);
        let (a, c) = (g[(0, 0)].re, g[(1, 1)].re);
        let b2 = g[(0, 1)].norm_sqr();
        let mid = 0.5 * (a + c);
        let rad = (0.25 * (a - c) * (a - c) + b2).sqrt();
        (mid + rad).max(0.0).sqrt()
    }
}

/// The six amplitudes of a twelve-operator drive. They are drive
/// parameters, unrelated to the Hamiltonian couplings of the same names.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SixAmplitudes {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub q: f64,
    pub u: f64,
    pub v: f64,
}

impl SixAmplitudes {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("p", self.p),
            ("q", self.q),
            ("u", self.u),
            ("v", self.v),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "drive amplitude {name} = {value} must be finite and >= 0"
                )));
            }
        }
        Ok(())
    }
}

/// A parameterized boundary dissipator family.
#[derive(Debug, Clone, PartialEq)]
pub enum DriveSpec {
    ZTarget { gamma: f64, f_left: f64, f_right: f64 },
    TwistedXy { gamma: f64, f: f64, theta: f64 },
    SixOpXxz(SixAmplitudes),
    TwistedZx { gamma: f64, f: f64, theta: f64 },
    SixOpXxx(SixAmplitudes),
    /// `inner` with all operator content swapped between sites 1 and N.
    Inverted(Box<DriveSpec>),
}

impl DriveSpec {
    pub fn validate(&self) -> Result<()> {
        fn check_gamma(gamma: f64) -> Result<()> {
            if !gamma.is_finite() || gamma <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "gamma = {gamma} must be finite and > 0"
                )));
            }
            Ok(())
        }
        fn check_f(name: &str, f: f64) -> Result<()> {
            if !f.is_finite() || f.abs() > 1.0 {
                return Err(Error::InvalidInput(format!(
                    "{name} = {f} must lie in [-1, 1]"
                )));
            }
            Ok(())
        }
        fn check_theta(theta: f64) -> Result<()> {
            if !theta.is_finite() {
                return Err(Error::InvalidInput("theta must be finite".into()));
            }
            Ok(())
        }
        match self {
            DriveSpec::ZTarget { gamma, f_left, f_right } => {
                check_gamma(*gamma)?;
                check_f("f_left", *f_left)?;
                check_f("f_right", *f_right)
            }
            DriveSpec::TwistedXy { gamma, f, theta } | DriveSpec::TwistedZx { gamma, f, theta } => {
                check_gamma(*gamma)?;
                check_f("f", *f)?;
                check_theta(*theta)
            }
            DriveSpec::SixOpXxz(a) | DriveSpec::SixOpXxx(a) => a.validate(),
            DriveSpec::Inverted(inner) => inner.validate(),
        }
    }

    /// Snake-case family name (matches the config schema).
    pub fn family(&self) -> String {
        match self {
            DriveSpec::ZTarget { .. } => "z_target".into(),
            DriveSpec::TwistedXy { .. } => "twisted_xy".into(),
            DriveSpec::SixOpXxz(_) => "six_op_xxz".into(),
            DriveSpec::TwistedZx { .. } => "twisted_zx".into(),
            DriveSpec::SixOpXxx(_) => "six_op_xxx".into(),
            DriveSpec::Inverted(inner) => format!("{} (baths swapped)", inner.family()),
        }
    }

    /// Model kinds this family is meant to drive.
    pub fn compatible_with(&self, kind: ModelKind) -> bool {
        match self {
            DriveSpec::ZTarget { .. } => true,
            DriveSpec::TwistedXy { .. } | DriveSpec::SixOpXxz(_) => kind == ModelKind::Xxz,
            DriveSpec::TwistedZx { .. } | DriveSpec::SixOpXxx(_) => kind == ModelKind::Xxx,
            DriveSpec::Inverted(inner) => inner.compatible_with(kind),
        }
    }
}

fn local(coeff: C64, a: Pauli, icoeff: C64, b: Pauli) -> Array2<C64> {
    let mut m = pauli(a).mapv(|z| z * coeff);
    m.scaled_add(icoeff, &pauli(b));
    m
}

/// a·(σ^first + i·sign·σ^second), the recurring two-Pauli combination.
fn twisted(amplitude: f64, first: Pauli, second: Pauli, sign: f64) -> Array2<C64> {
    local(
        C64::new(amplitude, 0.0),
        first,
        C64::new(0.0, amplitude * sign),
        second,
    )
}

/// The full jump-operator list for `spec` on an N-site chain.
///
/// Channels whose rate vanishes (e.g. ZTarget with f = 1) are kept in the
/// list as zero matrices so the list layout is family-stable.
pub fn build_jump_operators(spec: &DriveSpec, n_sites: usize) -> Result<Vec<JumpOperator>> {
    spec.validate()?;
    if n_sites < 2 {
        return Err(Error::InvalidInput(format!(
            "n_sites = {n_sites} but boundary driving needs at least 2 sites"
        )));
    }
    let n = n_sites;
    let jump = |site: usize, matrix: Array2<C64>| JumpOperator { site, matrix };
    let ops = match spec {
        DriveSpec::ZTarget { gamma, f_left, f_right } => {
            let amp = |f: f64, sign: f64| (gamma / 2.0 * (1.0 + sign * f)).sqrt();
            vec![
                jump(1, pauli(Pauli::Plus).mapv(|z| z * amp(*f_left, 1.0))),
                jump(1, pauli(Pauli::Minus).mapv(|z| z * amp(*f_left, -1.0))),
                jump(n, pauli(Pauli::Plus).mapv(|z| z * amp(*f_right, 1.0))),
                jump(n, pauli(Pauli::Minus).mapv(|z| z * amp(*f_right, -1.0))),
            ]
        }
        DriveSpec::TwistedXy { gamma, f, theta } => {
            let amp = |sign: f64| (gamma * (1.0 + sign * f)).sqrt() / 2.0;
            let (c, s) = (theta.cos(), theta.sin());
            let right = |sign: f64| {
                let a = amp(-sign);
                let mut m = pauli(Pauli::X).mapv(|z| z * C64::new(a * c, 0.0));
                m.scaled_add(C64::new(a * s, 0.0), &pauli(Pauli::Y));
                m.scaled_add(C64::new(0.0, a * sign), &pauli(Pauli::Z));
                m
            };
            vec![
                jump(1, twisted(amp(1.0), Pauli::Y, Pauli::Z, 1.0)),
                jump(1, twisted(amp(-1.0), Pauli::Y, Pauli::Z, -1.0)),
                jump(n, right(1.0)),
                jump(n, right(-1.0)),
            ]
        }
        DriveSpec::TwistedZx { gamma, f, theta } => {
            let amp = |sign: f64| (gamma * (1.0 + sign * f)).sqrt() / 2.0;
            let (c, s) = (theta.cos(), theta.sin());
            let right = |sign: f64| {
                let a = amp(-sign);
                let mut m = pauli(Pauli::X).mapv(|z| z * C64::new(a * c, 0.0));
                m.scaled_add(C64::new(a * s, 0.0), &pauli(Pauli::Z));
                m.scaled_add(C64::new(0.0, a * sign), &pauli(Pauli::Y));
                m
            };
            vec![
                jump(1, twisted(amp(1.0), Pauli::X, Pauli::Y, 1.0)),
                jump(1, twisted(amp(-1.0), Pauli::X, Pauli::Y, -1.0)),
                jump(n, right(1.0)),
                jump(n, right(-1.0)),
            ]
        }
        DriveSpec::SixOpXxz(a) => vec![
            jump(1, twisted(a.alpha, Pauli::X, Pauli::Y, 1.0)),
            jump(1, twisted(a.beta, Pauli::X, Pauli::Y, -1.0)),
            jump(1, twisted(a.p, Pauli::Y, Pauli::Z, 1.0)),
            jump(1, twisted(a.q, Pauli::Y, Pauli::Z, -1.0)),
            jump(1, twisted(a.u, Pauli::Z, Pauli::X, 1.0)),
            jump(1, twisted(a.v, Pauli::Z, Pauli::X, -1.0)),
            jump(n, twisted(a.beta, Pauli::X, Pauli::Y, 1.0)),
            jump(n, twisted(a.alpha, Pauli::X, Pauli::Y, -1.0)),
            jump(n, twisted(a.v, Pauli::Y, Pauli::Z, 1.0)),
            jump(n, twisted(a.u, Pauli::Y, Pauli::Z, -1.0)),
            jump(n, twisted(a.q, Pauli::Z, Pauli::X, 1.0)),
            jump(n, twisted(a.p, Pauli::Z, Pauli::X, -1.0)),
        ],
        DriveSpec::SixOpXxx(a) => vec![
            jump(1, twisted(a.alpha, Pauli::X, Pauli::Y, 1.0)),
            jump(1, twisted(a.beta, Pauli::X, Pauli::Y, -1.0)),
            jump(1, twisted(a.p, Pauli::Y, Pauli::Z, 1.0)),
            jump(1, twisted(a.q, Pauli::Y, Pauli::Z, -1.0)),
            jump(1, twisted(a.u, Pauli::Z, Pauli::X, 1.0)),
            jump(1, twisted(a.v, Pauli::Z, Pauli::X, -1.0)),
            jump(n, twisted(a.v, Pauli::X, Pauli::Y, 1.0)),
            jump(n, twisted(a.u, Pauli::X, Pauli::Y, -1.0)),
            jump(n, twisted(a.q, Pauli::Y, Pauli::Z, 1.0)),
            jump(n, twisted(a.p, Pauli::Y, Pauli::Z, -1.0)),
            jump(n, twisted(a.beta, Pauli::Z, Pauli::X, 1.0)),
            jump(n, twisted(a.alpha, Pauli::Z, Pauli::X, -1.0)),
        ],
        DriveSpec::Inverted(inner) => {
            let mut ops = build_jump_operators(inner, n_sites)?;
            for op in &mut ops {
                op.site = if op.site == 1 { n } else { 1 };
            }
            ops
        }
    };
    Ok(ops)
}

/// The drive with the bath content of sites 1 and N exchanged.
pub fn invert_baths(spec: &DriveSpec) -> DriveSpec {
    match spec {
        DriveSpec::ZTarget { gamma, f_left, f_right } => DriveSpec::ZTarget {
            gamma: *gamma,
            f_left: *f_right,
            f_right: *f_left,
        },
        DriveSpec::SixOpXxz(a) => DriveSpec::SixOpXxz(SixAmplitudes {
            alpha: a.beta,
            beta: a.alpha,
            p: a.v,
            q: a.u,
            u: a.q,
            v: a.p,
        }),
        DriveSpec::SixOpXxx(a) => DriveSpec::SixOpXxx(SixAmplitudes {
            alpha: a.v,
            beta: a.u,
            p: a.q,
            q: a.p,
            u: a.beta,
            v: a.alpha,
        }),
        DriveSpec::TwistedXy { .. } | DriveSpec::TwistedZx { .. } => {
            DriveSpec::Inverted(Box::new(spec.clone()))
        }
        DriveSpec::Inverted(inner) => (**inner).clone(),
    }
}

/// Smallest nonzero dissipative rate min_k ‖L_k‖₂², or None if every
/// channel vanishes.
pub fn min_nonzero_rate(jumps: &[JumpOperator]) -> Option<f64> {
    jumps
        .iter()
        .map(|j| {
            let s = j.spectral_norm();
            s * s
        })
        .filter(|r| *r > 1e-28)
        .fold(None, |acc, r| Some(acc.map_or(r, |a: f64| a.min(r))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::max_abs;

    fn sample_specs() -> Vec<DriveSpec> {
        let amps = SixAmplitudes { alpha: 0.3, beta: 1.1, p: 0.7, q: 0.2, u: 0.9, v: 1.4 };
        vec![
            DriveSpec::ZTarget { gamma: 1.0, f_left: 0.3, f_right: -0.3 },
            DriveSpec::TwistedXy { gamma: 1.0, f: 0.4, theta: 0.9 },
            DriveSpec::SixOpXxz(amps),
            DriveSpec::TwistedZx { gamma: 0.8, f: -0.2, theta: 2.4 },
            DriveSpec::SixOpXxx(amps),
        ]
    }

    #[test]
    fn ztarget_full_bias_kills_one_channel() {
        let spec = DriveSpec::ZTarget { gamma: 1.0, f_left: 1.0, f_right: 0.0 };
        let ops = build_jump_operators(&spec, 2).unwrap();
        assert_eq!(ops.len(), 4);
        let expect = pauli(Pauli::Plus); // sqrt(gamma/2 * 2) = 1
        assert!(max_abs(&(&ops[0].matrix - &expect)) < 1e-15);
        assert!(max_abs(&ops[1].matrix) == 0.0);
    }

    #[test]
    fn twisted_xy_at_half_pi_matches_left_form() {
        // cos(pi/2) = 0 so K^R_± ∝ (σ^y ± iσ^z)/2 with the f sign flipped
        let spec = DriveSpec::TwistedXy { gamma: 1.3, f: 0.5, theta: std::f64::consts::FRAC_PI_2 };
        let ops = build_jump_operators(&spec, 3).unwrap();
        let amp_minus = (1.3_f64 * 0.5).sqrt() / 2.0; // sqrt(gamma(1-f))/2
        let expect = twisted(amp_minus, Pauli::Y, Pauli::Z, 1.0);
        assert!(max_abs(&(&ops[2].matrix - &expect)) < 1e-15);
        assert_eq!(ops[2].site, 3);
    }

    // The inversion permutation on XXZ amplitudes is (a, b, p, q, u, v) ->
    // (b, a, v, u, q, p), so its fixed points pair a = b, p = v, q = u.
    #[test]
    fn sixop_with_paired_amplitudes_is_inversion_invariant() {
        let amps = SixAmplitudes { alpha: 0.5, beta: 0.5, p: 0.8, q: 1.2, u: 1.2, v: 0.8 };
        let spec = DriveSpec::SixOpXxz(amps);
        let fwd = build_jump_operators(&spec, 4).unwrap();
        let inv = build_jump_operators(&invert_baths(&spec), 4).unwrap();
        // compare as unordered sets of (site, matrix)
        for a in &fwd {
            assert!(
                inv.iter().any(|b| b.site == a.site && max_abs(&(&a.matrix - &b.matrix)) < 1e-15),
                "missing counterpart at site {}",
                a.site
            );
        }
    }

    #[test]
    fn invert_baths_is_involution() {
        for spec in sample_specs() {
            let twice = invert_baths(&invert_baths(&spec));
            assert_eq!(twice, spec);
        }
    }

    #[test]
    fn inverted_list_is_site_swapped_original() {
        for spec in sample_specs() {
            let n = 4;
            let fwd = build_jump_operators(&spec, n).unwrap();
            let inv = build_jump_operators(&invert_baths(&spec), n).unwrap();
            assert_eq!(fwd.len(), inv.len());
            for a in &fwd {
                let swapped_site = if a.site == 1 { n } else { 1 };
                assert!(
                    inv.iter()
                        .any(|b| b.site == swapped_site && max_abs(&(&a.matrix - &b.matrix)) < 1e-15),
                    "family {}: no counterpart for a site-{} operator",
                    spec.family(),
                    a.site
                );
            }
        }
    }

    #[test]
    fn sixop_xxz_inverted_left_list_matches_transcription() {
        let a = SixAmplitudes { alpha: 0.3, beta: 1.1, p: 0.7, q: 0.2, u: 0.9, v: 1.4 };
        let inv = invert_baths(&DriveSpec::SixOpXxz(a));
        let ops = build_jump_operators(&inv, 3).unwrap();
        let left: Vec<_> = ops.iter().filter(|o| o.site == 1).collect();
        let expect = [
            twisted(a.beta, Pauli::X, Pauli::Y, 1.0),
            twisted(a.alpha, Pauli::X, Pauli::Y, -1.0),
            twisted(a.v, Pauli::Y, Pauli::Z, 1.0),
            twisted(a.u, Pauli::Y, Pauli::Z, -1.0),
            twisted(a.q, Pauli::Z, Pauli::X, 1.0),
            twisted(a.p, Pauli::Z, Pauli::X, -1.0),
        ];
        assert_eq!(left.len(), expect.len());
        for (got, want) in left.iter().zip(expect.iter()) {
            assert!(max_abs(&(&got.matrix - want)) < 1e-15);
        }
    }

    #[test]
    fn operator_norm_bounds() {
        for spec in sample_specs() {
            let ops = build_jump_operators(&spec, 3).unwrap();
            let bound = match spec {
                DriveSpec::ZTarget { gamma, .. }
                | DriveSpec::TwistedXy { gamma, .. }
                | DriveSpec::TwistedZx { gamma, .. } => (2.0 * gamma).sqrt(),
                DriveSpec::SixOpXxz(a) | DriveSpec::SixOpXxx(a) => {
                    2.0 * [a.alpha, a.beta, a.p, a.q, a.u, a.v]
                        .into_iter()
                        .fold(0.0, f64::max)
                }
                DriveSpec::Inverted(_) => unreachable!(),
            };
            for op in ops {
                assert!(op.spectral_norm() <= bound + 1e-12);
            }
        }
    }

    #[test]
    fn validation_rejects_out_of_range() {
        assert!(DriveSpec::ZTarget { gamma: 0.0, f_left: 0.0, f_right: 0.0 }
            .validate()
            .is_err());
        assert!(DriveSpec::ZTarget { gamma: 1.0, f_left: 1.5, f_right: 0.0 }
            .validate()
            .is_err());
        assert!(DriveSpec::TwistedXy { gamma: 1.0, f: 0.2, theta: f64::NAN }
            .validate()
            .is_err());
        let bad = SixAmplitudes { alpha: -0.1, beta: 0.0, p: 0.0, q: 0.0, u: 0.0, v: 0.0 };
        assert!(DriveSpec::SixOpXxz(bad).validate().is_err());
    }

    #[test]
    fn min_rate_of_ztarget() {
        let spec = DriveSpec::ZTarget { gamma: 1.0, f_left: 0.1, f_right: -0.1 };
        let ops = build_jump_operators(&spec, 3).unwrap();
        let r = min_nonzero_rate(&ops).unwrap();
        assert!((r - 0.45).abs() < 1e-12); // gamma/2 (1 - 0.1)
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn amplitudes() -> impl Strategy<Value = SixAmplitudes> {
            (
                0.0f64..1.5,
                0.0f64..1.5,
                0.0f64..1.5,
                0.0f64..1.5,
                0.0f64..1.5,
                0.0f64..1.5,
            )
                .prop_map(|(alpha, beta, p, q, u, v)| SixAmplitudes {
                    alpha,
                    beta,
                    p,
                    q,
                    u,
                    v,
                })
        }

        fn spec() -> impl Strategy<Value = DriveSpec> {
            prop_oneof![
                (0.1f64..2.0, -0.9f64..0.9).prop_map(|(gamma, f)| DriveSpec::ZTarget {
                    gamma,
                    f_left: f,
                    f_right: -f,
                }),
                (0.1f64..2.0, -0.9f64..0.9, 0.0f64..std::f64::consts::PI)
                    .prop_map(|(gamma, f, theta)| DriveSpec::TwistedXy { gamma, f, theta }),
                (0.1f64..2.0, -0.9f64..0.9, 0.0f64..std::f64::consts::PI)
                    .prop_map(|(gamma, f, theta)| DriveSpec::TwistedZx { gamma, f, theta }),
                amplitudes().prop_map(DriveSpec::SixOpXxz),
                amplitudes().prop_map(DriveSpec::SixOpXxx),
            ]
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn double_inversion_restores_jump_operators(spec in spec(), n in 2usize..=4) {
                let twice = invert_baths(&invert_baths(&spec));
                let a = build_jump_operators(&spec, n).unwrap();
                let b = build_jump_operators(&twice, n).unwrap();
                prop_assert_eq!(a.len(), b.len());
                for (x, y) in a.iter().zip(&b) {
                    prop_assert_eq!(x.site, y.site);
                    prop_assert!(max_abs(&(&x.matrix - &y.matrix)) == 0.0);
                }
            }

            #[test]
            fn jump_operators_touch_only_the_boundary(spec in spec(), n in 2usize..=5) {
                for op in build_jump_operators(&spec, n).unwrap() {
                    prop_assert!(op.site == 1 || op.site == n);
                }
            }
        }
    }
}
