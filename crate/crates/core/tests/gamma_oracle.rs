//! Bogoliubov moduli from the raw gamma-function products, evaluated with an
//! independent complex log-gamma.

use std::f64::consts::PI;

use gaussent::cosmology::{bogoliubov, bogoliubov_moduli_via_gamma, frequencies, ExpansionModel};
use gaussent::special::{ln_abs_gamma_imag_sq, ln_abs_gamma_one_plus_imag_sq};
use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal-branch-agnostic `ln Gamma(z)`; only the real part is used.
fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        let s = (Complex64::from(PI) * z).sin();
        return Complex64::from(PI.ln()) - s.ln() - ln_gamma(Complex64::from(1.0) - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::from(LANCZOS[0]);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Complex64::from(0.5 * (2.0 * PI).ln()) + (z + 0.5) * t.ln() - t + x.ln()
}

fn ln_abs_sq(z: Complex64) -> f64 {
    2.0 * ln_gamma(z).re
}

#[test]
fn lanczos_reproduces_real_factorials() {
    for n in 1..15u32 {
        let fact: f64 = (1..n).map(f64::from).product();
        let got = ln_gamma(Complex64::new(n as f64, 0.0)).re;
        assert!((got - fact.ln()).abs() < 1e-12, "n={n}");
    }
    let half = ln_gamma(Complex64::new(0.5, 0.0)).re;
    assert!((half - 0.5 * PI.ln()).abs() < 1e-13);
}

#[test]
fn reflection_identities_on_imaginary_axis() {
    for &x in &[1e-3, 0.1, 0.5, 1.0, 2.5, 7.0, 20.0, 60.0] {
        let a = ln_abs_sq(Complex64::new(0.0, x));
        let b = ln_abs_sq(Complex64::new(1.0, x));
        let tol = 1e-12 * a.abs().max(1.0);
        assert!((ln_abs_gamma_imag_sq(x) - a).abs() < tol, "x={x}: {} vs {a}", ln_abs_gamma_imag_sq(x));
        assert!((ln_abs_gamma_one_plus_imag_sq(x) - b).abs() < tol, "x={x}");
        // conjugation symmetry
        assert!((ln_abs_sq(Complex64::new(0.0, -x)) - a).abs() < tol);
    }
}

/// `(|alpha|^2, |beta|^2)` straight from the gamma quotients.
fn raw_moduli(k: f64, m: f64, eps: f64, sigma: f64) -> (f64, f64) {
    let w_in = (k * k + m * m).sqrt();
    let w_out = (k * k + m * m * (1.0 + 2.0 * eps)).sqrt();
    let (wp, wm) = (0.5 * (w_out + w_in), 0.5 * (w_out - w_in));
    let i = Complex64::i();
    let pre = (w_out / w_in).ln();
    let num = ln_abs_sq(1.0 - i * w_in / sigma);
    let ln_a = pre + num + ln_abs_sq(-i * w_out / sigma)
        - ln_abs_sq(1.0 - i * wp / sigma)
        - ln_abs_sq(-i * wp / sigma);
    let ln_b = pre + num + ln_abs_sq(i * w_out / sigma)
        - ln_abs_sq(1.0 + i * wm / sigma)
        - ln_abs_sq(i * wm / sigma);
    (ln_a.exp(), ln_b.exp())
}

#[test]
fn moduli_match_raw_gamma_products() {
    let ks = [0.05, 0.3, 1.0, 3.0];
    let ms = [0.1, 1.0, 4.0];
    let epss = [0.05, 1.0, 5.0];
    let sigmas = [0.5, 1.0, 3.0, 10.0];
    for &k in &ks {
        for &m in &ms {
            for &eps in &epss {
                for &sigma in &sigmas {
                    let (ra, rb) = raw_moduli(k, m, eps, sigma);
                    let model = ExpansionModel::new(eps, sigma, m).unwrap();
                    let mode = frequencies(k, &model).unwrap();
                    let (ga, gb) = bogoliubov_moduli_via_gamma(&mode, &model);
                    let bog = bogoliubov(&mode, &model).unwrap();
                    let at = (k, m, eps, sigma);
                    assert!((ga - ra).abs() < 1e-10 * ra, "{at:?}: {ga} vs {ra}");
                    assert!((gb - rb).abs() < 1e-10 * rb, "{at:?}: {gb} vs {rb}");
                    assert!((bog.alpha_mod.powi(2) - ra).abs() < 1e-10 * ra, "{at:?}");
                    assert!((bog.beta_mod.powi(2) - rb).abs() < 1e-10 * rb, "{at:?}");
                    assert!((ra - rb - 1.0).abs() < 1e-9 * ra, "{at:?}");
                }
            }
        }
    }
}

#[test]
fn unit_point_against_frozen_reference() {
    // high-precision reference: |beta|^2 at k = m = epsilon = sigma = 1
    let (_, rb) = raw_moduli(1.0, 1.0, 1.0, 1.0);
    assert!((rb / 9.791576576478957e-5 - 1.0).abs() < 1e-9, "{rb}");
}
