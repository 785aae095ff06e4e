use gaussent::cosmology::{
    bogoliubov, bogoliubov_moduli_via_gamma, frequencies, out_state, squeeze_transform, BogoliubovData,
    ExpansionModel, InitialState, MODE_A, MODE_ABAR, MODE_B, MODE_BBAR,
};
use gaussent::entanglement::{
    entanglement_ab_closed, entanglement_a_abar_closed, one_to_three_entanglement, residual_closed,
};
use gaussent::phasespace::{
    apply, direct_sum, partial_trace, renyi2_entropy, CovarianceMatrix, ModePartition, SymplecticTransform,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn local(n_modes: usize, mode: usize, phi: f64, z: f64) -> SymplecticTransform {
    let (s, c) = phi.sin_cos();
    let mut m = DMatrix::identity(2 * n_modes, 2 * n_modes);
    let (e1, e2) = ((-z).exp(), z.exp());
    let block = [[c * e1, s * e2], [-s * e1, c * e2]];
    for (i, row) in block.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m[(2 * mode + i, 2 * mode + j)] = *v;
        }
    }
    SymplecticTransform::new(m).unwrap()
}

/// Product of thermal states with occupation `nus`.
fn thermal_product(nus: &[f64]) -> CovarianceMatrix {
    nus.iter()
        .map(|&nu| CovarianceMatrix::thermal(nu).unwrap())
        .reduce(|a, b| direct_sum(&a, &b))
        .unwrap()
}

fn random_gaussian(nus: &[f64; 3], angles: &[f64; 3], squeezes: &[f64; 3], theta: f64) -> CovarianceMatrix {
    let mut cm = thermal_product(nus);
    for m in 0..3 {
        cm = apply(&local(3, m, angles[m], squeezes[m]), &cm).unwrap();
    }
    let pair = squeeze_transform(theta).unwrap().direct_sum(&SymplecticTransform::identity(1).unwrap());
    let swap = SymplecticTransform::mode_permutation(&[2, 0, 1]).unwrap();
    apply(&pair.compose(&swap).unwrap(), &cm).unwrap()
}

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.ln()..hi.ln()).prop_map(f64::exp)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn symplectic_maps_preserve_spectrum(
        nus in prop::array::uniform3(1.0f64..4.0),
        angles in prop::array::uniform3(0.0f64..6.3),
        squeezes in prop::array::uniform3(-1.0f64..1.0),
        theta in 0.0f64..0.8,
        phi in 0.0f64..6.3,
        z in -0.8f64..0.8,
    ) {
        let cm = random_gaussian(&nus, &angles, &squeezes, theta);
        let mut before = cm.symplectic_eigenvalues().unwrap();
        let moved = apply(&local(3, 1, phi, z), &cm).unwrap();
        let mut after = moved.symplectic_eigenvalues().unwrap();
        before.sort_by(f64::total_cmp);
        after.sort_by(f64::total_cmp);
        let mut want = nus.to_vec();
        want.sort_by(f64::total_cmp);
        for ((a, b), w) in before.iter().zip(&after).zip(&want) {
            prop_assert!((a - b).abs() < 1e-8 * w, "{a} vs {b}");
            prop_assert!((a - w).abs() < 1e-8 * w, "{a} vs {w}");
        }
        let det_rel = (moved.det() / cm.det() - 1.0).abs();
        prop_assert!(det_rel < 1e-9);
        let entropy = renyi2_entropy(&cm).unwrap();
        prop_assert!((renyi2_entropy(&moved).unwrap() - entropy).abs() < 1e-9 * entropy.abs().max(1.0));
    }

    #[test]
    fn partial_traces_compose(
        nus in prop::array::uniform3(1.0f64..4.0),
        angles in prop::array::uniform3(0.0f64..6.3),
        squeezes in prop::array::uniform3(-1.0f64..1.0),
        theta in 0.0f64..0.8,
    ) {
        let cm = random_gaussian(&nus, &angles, &squeezes, theta);
        let direct = partial_trace(&cm, &[2, 0]).unwrap();
        let staged = partial_trace(&partial_trace(&cm, &[0, 2]).unwrap(), &[1, 0]).unwrap();
        prop_assert_eq!(direct.data(), staged.data());
        for nu in direct.symplectic_eigenvalues().unwrap() {
            prop_assert!(nu >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn bogoliubov_identities(
        k in log_uniform(1e-2, 1e2),
        m in log_uniform(1e-2, 1e2),
        eps in log_uniform(1e-2, 1e1),
        sigma in log_uniform(1e-2, 1e1),
    ) {
        let model = ExpansionModel::new(eps, sigma, m).unwrap();
        let mode = frequencies(k, &model).unwrap();
        let bog = bogoliubov(&mode, &model).unwrap();
        prop_assert!(bog.theta < 1.0);
        prop_assert!((bog.alpha_mod.powi(2) - bog.beta_mod.powi(2) - 1.0).abs() < 1e-12);
        prop_assert!((bog.r.cosh() - bog.alpha_mod).abs() < 1e-12 * bog.alpha_mod);
        let (a2, b2) = bogoliubov_moduli_via_gamma(&mode, &model);
        prop_assert!((a2 / bog.alpha_mod.powi(2) - 1.0).abs() < 1e-10);
        if b2.is_normal() && bog.mean_particles.is_normal() {
            prop_assert!((b2 / bog.mean_particles - 1.0).abs() < 1e-10);
        }

        // more volume never lowers theta; higher momentum never raises it
        let bigger = ExpansionModel::new(eps * 1.5, sigma, m).unwrap();
        let up = bogoliubov(&frequencies(k, &bigger).unwrap(), &bigger).unwrap();
        prop_assert!(up.ln_theta >= bog.ln_theta - 1e-14 * bog.ln_theta.abs());
        let faster = bogoliubov(&frequencies(k * 1.5, &model).unwrap(), &model).unwrap();
        prop_assert!(faster.ln_theta <= bog.ln_theta + 1e-14 * bog.ln_theta.abs());
    }

    #[test]
    fn out_state_is_pure_and_monogamous(s in 0.0f64..2.0, theta_sq in 0.0f64..0.6) {
        let theta = theta_sq.sqrt();
        let init = InitialState::new(s).unwrap();
        let bog = BogoliubovData::from_theta(theta).unwrap();
        let out = out_state(&init, &bog);
        prop_assert!((out.det() - 1.0).abs() < 1e-9);
        prop_assert!(out.is_pure(1e-9));

        let e_ab = entanglement_ab_closed(s, theta).unwrap();
        let e_aa = entanglement_a_abar_closed(theta).unwrap();
        let initial = (2.0 * s).cosh().ln();
        prop_assert!((0.0..=initial + 1e-15).contains(&e_ab));

        // the three other pairs around A are separable; the 1-vs-3 value bounds the rest
        let a_rest = one_to_three_entanglement(&out, &ModePartition::single(4, MODE_A).unwrap()).unwrap();
        prop_assert!(a_rest - e_ab - e_aa >= -1e-9, "{a_rest} {e_ab} {e_aa}");
        let abar_rest = one_to_three_entanglement(&out, &ModePartition::single(4, MODE_ABAR).unwrap()).unwrap();
        let residual = residual_closed(s, theta).unwrap();
        prop_assert!(residual >= 0.0);
        prop_assert!((abar_rest - e_aa - residual).abs() < 1e-10 * (1.0 + abar_rest));

        // the B side mirrors the A side
        let b_rest = one_to_three_entanglement(&out, &ModePartition::single(4, MODE_B).unwrap()).unwrap();
        let bbar_rest = one_to_three_entanglement(&out, &ModePartition::single(4, MODE_BBAR).unwrap()).unwrap();
        prop_assert!((b_rest - a_rest).abs() < 1e-10 * (1.0 + a_rest));
        prop_assert!((bbar_rest - abar_rest).abs() < 1e-10 * (1.0 + abar_rest));
    }

    #[test]
    fn alice_bob_entanglement_falls_with_theta(s in 0.0f64..2.0, t1 in 0.0f64..0.7, t2 in 0.0f64..0.7) {
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(entanglement_ab_closed(s, hi).unwrap() <= entanglement_ab_closed(s, lo).unwrap() + 1e-14);
        prop_assert!(entanglement_a_abar_closed(hi).unwrap() >= entanglement_a_abar_closed(lo).unwrap());
    }
}
