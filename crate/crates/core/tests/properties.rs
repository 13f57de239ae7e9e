use modn_core::{
    hermite_values, kaleidoscope_state, modn_exp_all, modn_exp_dft, modn_exp_series,
    modn_gaussian_exp, modn_hermite_generating_sum, wavefunction, Complex64, FockDim,
    ModulusContext, SeriesConfig,
};
use proptest::prelude::*;

fn complex_in_disc(radius: f64) -> impl Strategy<Value = Complex64> {
    (0.0..=radius, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

/// Sum of |z|^m/m! over m ≡ s: bounds the size of every partial sum.
fn abs_scale(ctx: &ModulusContext, s: usize, z: Complex64) -> f64 {
    modn_exp_series(
        ctx,
        s,
        Complex64::new(z.norm(), 0.0),
        &SeriesConfig::default(),
    )
    .unwrap()
    .re
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn components_sum_to_exp(n in 1usize..=8, z in complex_in_disc(5.0)) {
        let ctx = ModulusContext::new(n).unwrap();
        let parts = modn_exp_all(&ctx, z, &SeriesConfig::default()).unwrap();
        let total: Complex64 = parts.iter().sum();
        prop_assert!((total - z.exp()).norm() <= 1e-12 * z.norm().exp());
    }

    #[test]
    fn series_and_dft_agree(n in 1usize..=8, s in 0usize..8, z in complex_in_disc(10.0)) {
        let s = s % n;
        let ctx = ModulusContext::new(n).unwrap();
        let series = modn_exp_series(&ctx, s, z, &SeriesConfig::default()).unwrap();
        let dft = modn_exp_dft(&ctx, s, z).unwrap();
        // The DFT route carries roundoff of order eps·e^{|z|} whatever the component size.
        prop_assert!((series - dft).norm() <= 1e-11 * z.norm().exp());
    }

    #[test]
    fn rotating_the_argument_multiplies_by_a_root(
        n in 1usize..=8,
        s in 0usize..8,
        z in complex_in_disc(5.0),
    ) {
        let s = s % n;
        let ctx = ModulusContext::new(n).unwrap();
        let cfg = SeriesConfig::default();
        let rotated = modn_exp_series(&ctx, s, ctx.root(1) * z, &cfg).unwrap();
        let expected = ctx.root(s) * modn_exp_series(&ctx, s, z, &cfg).unwrap();
        prop_assert!((rotated - expected).norm() <= 1e-12 * abs_scale(&ctx, s, z));
    }

    #[test]
    fn kaleidoscope_support_follows_residue(
        n in 1usize..=6,
        k in 0usize..6,
        alpha in complex_in_disc(2.0).prop_filter("nonzero", |a| a.norm() > 1e-3),
    ) {
        let k = k % n;
        let ctx = ModulusContext::new(n).unwrap();
        let state = kaleidoscope_state(&ctx, k, alpha, FockDim::auto(alpha)).unwrap();
        for (m, amp) in state.amps().iter().enumerate() {
            if m % n != k {
                prop_assert_eq!(*amp, Complex64::new(0.0, 0.0));
            }
        }
        prop_assert!((state.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn hermite_sequences_satisfy_derivative_relation(x in -6.0f64..6.0, order in 2usize..60) {
        // H_m' = 2m H_{m-1} and H_{m+1} = 2x H_m − H_m'.
        let h = hermite_values(order, x).unwrap().values;
        for m in 1..order {
            let lhs = h[m + 1];
            let rhs = 2.0 * x * h[m] - 2.0 * m as f64 * h[m - 1];
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (lhs.abs() + rhs.abs()).max(1.0));
        }
    }

    #[test]
    fn generating_sum_matches_gaussian_superposition(
        n in 1usize..=6,
        k in 0usize..6,
        z in complex_in_disc(2.0),
        x in -4.0f64..4.0,
    ) {
        let k = k % n;
        let ctx = ModulusContext::new(n).unwrap();
        let series = modn_hermite_generating_sum(&ctx, k, z, x, &SeriesConfig::default()).unwrap();
        let closed = modn_gaussian_exp(&ctx, k, z, x).unwrap();
        let scale = 1.0f64.max(closed.norm());
        prop_assert!((series - closed).norm() <= 1e-10 * scale, "{} vs {}", series, closed);
    }

    #[test]
    fn odd_states_vanish_at_origin_for_even_moduli(
        half in 1usize..=3,
        k in 0usize..6,
        alpha in complex_in_disc(2.0).prop_filter("away from zero", |a| a.norm() > 0.5),
    ) {
        let n = 2 * half;
        let k = (2 * (k % half)) + 1;
        let ctx = ModulusContext::new(n).unwrap();
        prop_assert!(wavefunction(&ctx, k, alpha, 0.0).unwrap().norm() <= 1e-12);
    }
}
