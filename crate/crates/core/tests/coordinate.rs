use std::f64::consts::{PI, SQRT_2};

use modn_core::{
    default_grid_range, kaleidoscope_state, modn_exp_series, modn_gaussian_exp,
    modn_hermite_generating_sum, probability_grid, quartet_closed_form, wavefunction, Complex64,
    FockDim, ModulusContext, SeriesConfig,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Normalized Hermite functions φ_0 … φ_{M−1} at x.
fn hermite_functions(count: usize, x: f64) -> Vec<f64> {
    let mut phi = Vec::with_capacity(count);
    phi.push((-0.5 * x * x).exp() / PI.powf(0.25));
    if count > 1 {
        phi.push(SQRT_2 * x * phi[0]);
    }
    for m in 1..count.saturating_sub(1) {
        let mf = m as f64;
        let next = (2.0 / (mf + 1.0)).sqrt() * x * phi[m] - (mf / (mf + 1.0)).sqrt() * phi[m - 1];
        phi.push(next);
    }
    phi
}

#[test]
fn closed_form_matches_fock_expansion() {
    let xs: Vec<f64> = (0..=120).map(|i| -6.0 + 0.1 * i as f64).collect();
    for n in 1..=6 {
        let ctx = ModulusContext::new(n).unwrap();
        for alpha in [c(1.2, 0.0), c(1.0, 1.0), c(-0.3, 1.9), c(0.7, -0.2)] {
            let dim = FockDim::auto(alpha);
            for k in 0..n {
                let state = kaleidoscope_state(&ctx, k, alpha, dim).unwrap();
                let mut worst: f64 = 0.0;
                for &x in &xs {
                    let phi = hermite_functions(dim.get(), x);
                    let oracle: Complex64 = state.amps().iter().zip(&phi).map(|(a, p)| a * p).sum();
                    let closed = wavefunction(&ctx, k, alpha, x).unwrap();
                    worst = worst.max((closed - oracle).norm());
                }
                assert!(worst <= 1e-8, "n={n} k={k} α={alpha}: {worst}");
            }
        }
    }
}

#[test]
fn printed_mod2_generating_identities() {
    let ctx = ModulusContext::new(2).unwrap();
    let cfg = SeriesConfig::default();
    for i in 0..=8 {
        let z = -2.0 + 0.5 * i as f64;
        for j in 0..=8 {
            let x = -4.0 + 1.0 * j as f64;
            let even = (-z * z).exp() * (2.0 * z * x).cosh();
            let odd = (-z * z).exp() * (2.0 * z * x).sinh();
            for (k, printed) in [(0, even), (1, odd)] {
                let scale = printed.abs().max(1.0);
                let series = modn_hermite_generating_sum(&ctx, k, c(z, 0.0), x, &cfg).unwrap();
                let composite = modn_gaussian_exp(&ctx, k, c(z, 0.0), x).unwrap();
                assert!(
                    (series.re - printed).abs() <= 1e-10 * scale,
                    "k={k} z={z} x={x}"
                );
                assert!(
                    (composite - printed).norm() <= 1e-10 * scale,
                    "k={k} z={z} x={x}"
                );
            }
        }
    }
}

#[test]
fn printed_mod3_generating_identities() {
    let ctx = ModulusContext::new(3).unwrap();
    let cfg = SeriesConfig::default();
    let shifts = [0.0, -2.0 * PI / 3.0, 2.0 * PI / 3.0];
    for i in 0..=8 {
        let z = -2.0 + 0.5 * i as f64;
        for j in 0..=8 {
            let x = -4.0 + 1.0 * j as f64;
            let phase = 3f64.sqrt() / 2.0 * (z * z + 2.0 * z * x);
            for (k, shift) in shifts.iter().enumerate() {
                let printed = ((-z * z + 2.0 * z * x).exp()
                    + 2.0 * (0.5 * z * z - z * x).exp() * (phase + shift).cos())
                    / 3.0;
                let scale = printed.abs().max(1.0);
                let series = modn_hermite_generating_sum(&ctx, k, c(z, 0.0), x, &cfg).unwrap();
                let composite = modn_gaussian_exp(&ctx, k, c(z, 0.0), x).unwrap();
                assert!(
                    (series.re - printed).abs() <= 1e-10 * scale,
                    "k={k} z={z} x={x}"
                );
                assert!(
                    (composite - printed).norm() <= 1e-10 * scale,
                    "k={k} z={z} x={x}"
                );
            }
        }
    }
}

#[test]
fn quartet_formulas_agree_with_general_construction() {
    let ctx = ModulusContext::new(4).unwrap();
    for alpha in [c(1.0, 1.0), c(0.01, 0.0), c(1.7, -0.4)] {
        for k in 0..4 {
            for i in 0..=240 {
                let x = -6.0 + 0.05 * i as f64;
                let general = wavefunction(&ctx, k, alpha, x).unwrap();
                let quartet = quartet_closed_form(k, alpha, x).unwrap();
                assert!((general - quartet).norm() <= 1e-10, "k={k} α={alpha} x={x}");
            }
        }
    }
}

#[test]
fn origin_behaviour_of_quartet_states() {
    let ctx = ModulusContext::new(4).unwrap();
    let alpha = c(1.0, 1.0);
    for k in 0..4 {
        let p = wavefunction(&ctx, k, alpha, 0.0).unwrap().norm_sqr();
        if k % 2 == 1 {
            assert!(p <= 1e-24, "k={k}: {p}");
        } else {
            assert!(p > 1e-3, "k={k}: {p}");
        }
    }
}

#[test]
fn default_grids_are_certified_and_normalized() {
    for n in 1..=6 {
        let ctx = ModulusContext::new(n).unwrap();
        for alpha in [c(1.0, 1.0), c(2.0, 0.0), c(-0.5, 1.2)] {
            let (lo, hi) = default_grid_range(alpha);
            for k in 0..n {
                let grid = probability_grid(&ctx, k, alpha, lo, hi, 1201).unwrap();
                assert!(grid.meta.certified);
                assert!((grid.meta.integral - 1.0).abs() <= 1e-6, "n={n} k={k}");
                assert!(grid.prob.iter().all(|p| *p >= 0.0));
                assert!(grid.x_samples.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}

#[test]
fn narrow_grid_is_flagged() {
    let ctx = ModulusContext::new(4).unwrap();
    let grid = probability_grid(&ctx, 0, c(1.0, 1.0), -0.5, 0.5, 101).unwrap();
    assert!(!grid.meta.certified);
}

#[test]
fn derivative_steps_down_one_component() {
    let h = 1e-5;
    let cfg = SeriesConfig::default();
    for n in 1..=6 {
        let ctx = ModulusContext::new(n).unwrap();
        for z in [c(0.7, 0.0), c(-1.2, 0.9), c(2.0, -1.5)] {
            for s in 0..n {
                let at = |w: Complex64| modn_exp_series(&ctx, s, w, &cfg).unwrap();
                let diff = (at(z + h) - at(z - h)) / (2.0 * h);
                let expected = modn_exp_series(&ctx, ctx.derivative_index(s), z, &cfg).unwrap();
                assert!((diff - expected).norm() <= 1e-8, "n={n} s={s} z={z}");
            }
        }
    }
}
