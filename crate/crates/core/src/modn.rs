//! Roots of unity, mod-n Fourier components and mod-n exponentials.
//!
//! For a polygon order `n` the primitive root is `q² = exp(2πi/n)`. The k-th
//! mod-n component of a function is
//!
//! ```text
//! f_k(x) = (1/n) Σ_{s=0}^{n-1} q̄^{2sk} f(q^{2s} x),    f = Σ_k f_k
//! ```
//!
//! and for `f = exp` the components are the generalized hyperbolic functions
//!
//! ```text
//! ₛe^z = Σ_{k≥0} z^{nk+s} / (nk+s)!
//! ```
//!
//! which reduce to `cosh`/`sinh` at `n = 2`.

use std::f64::consts::TAU;

use crate::{Complex64, Error, Result};

/// Polygon order `n` together with the powers `q^{2s} = exp(2πis/n)` and
/// their conjugates.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusContext {
    n: usize,
    q2_powers: Vec<Complex64>,
    q2bar_powers: Vec<Complex64>,
}

/// `exp(2πi j/n)`, exact on the real and imaginary axes and conjugate
/// symmetric (`root(n - j) == conj(root(j))` bit for bit).
fn unit_root(j: usize, n: usize) -> Complex64 {
    let j = j % n;
    if j == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if (4 * j).is_multiple_of(n) {
        return match 4 * j / n {
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    if 2 * j > n {
        return unit_root(n - j, n).conj();
    }
    let theta = TAU * j as f64 / n as f64;
    Complex64::new(theta.cos(), theta.sin())
}

impl ModulusContext {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModulus(n));
        }
        let q2_powers: Vec<_> = (0..n).map(|s| unit_root(s, n)).collect();
        let q2bar_powers = q2_powers.iter().map(|q| q.conj()).collect();
        Ok(Self {
            n,
            q2_powers,
            q2bar_powers,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q2_powers(&self) -> &[Complex64] {
        &self.q2_powers
    }

    pub fn q2bar_powers(&self) -> &[Complex64] {
        &self.q2bar_powers
    }

    /// `q^{2j}` for any integer power `j` (reduced mod n).
    pub fn root(&self, j: usize) -> Complex64 {
        self.q2_powers[j % self.n]
    }

    /// `q̄^{2j}`.
    pub fn root_conj(&self, j: usize) -> Complex64 {
        self.q2bar_powers[j % self.n]
    }

    pub fn check_index(&self, k: usize) -> Result<()> {
        if k < self.n {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: k,
                n: self.n,
            })
        }
    }

    /// Index of the component that `d/dz` maps `ₛe^z` onto: `s - 1`, with
    /// `0` wrapping to `n - 1`.
    pub fn derivative_index(&self, s: usize) -> usize {
        (s % self.n + self.n - 1) % self.n
    }

    /// Index `k - 1 (mod n)`; the component paired with `k` in photon-number
    /// ratios and in the action of the annihilation operator.
    pub fn previous(&self, k: usize) -> usize {
        self.derivative_index(k)
    }
}

/// Truncation control for the scalar power series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-15,
            abs_tol: 1e-300,
            max_terms: 10_000,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "rel_tol must be positive and finite, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "abs_tol must be non-negative and finite, got {}",
                self.abs_tol
            )));
        }
        if self.max_terms < n.max(1) {
            return Err(Error::InvalidConfig(format!(
                "max_terms = {} is smaller than n = {n}",
                self.max_terms
            )));
        }
        Ok(())
    }

    fn negligible(&self, term: f64, sum: f64) -> bool {
        term <= self.abs_tol + self.rel_tol * sum
    }
}

/// The k-th mod-n component `(1/n) Σ_s q̄^{2sk} f(q^{2s} x)`.
pub fn modn_component<F>(f: F, ctx: &ModulusContext, k: usize, x: Complex64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    ctx.check_index(k)?;
    let n = ctx.n();
    let mut acc = Complex64::new(0.0, 0.0);
    for s in 0..n {
        let value = f(ctx.root(s) * x);
        if !value.is_finite() {
            return Err(Error::NonFinite("mod-n component"));
        }
        acc += ctx.root_conj(s * k) * value;
    }
    Ok(acc / n as f64)
}

/// `ₛe^z` by direct summation of `Σ z^{nk+s}/(nk+s)!`.
///
/// Consecutive terms are related by `zⁿ / ((m+1)(m+2)…(m+n))`; factorials are
/// never formed. Summation stops once the index has passed `|z|` (the terms
/// are still growing before that) and the newest term is below
/// `abs_tol + rel_tol·|sum|`.
pub fn modn_exp_series(
    ctx: &ModulusContext,
    s: usize,
    z: Complex64,
    cfg: &SeriesConfig,
) -> Result<Complex64> {
    ctx.check_index(s)?;
    let n = ctx.n();
    cfg.validate(n)?;

    let mut term = Complex64::new(1.0, 0.0);
    for j in 1..=s {
        term = term * z / j as f64;
    }
    let zn = z.powu(n as u32);
    let radius = z.norm();

    let mut sum = term;
    let mut power = s;
    let mut terms = 1;
    loop {
        let denom: f64 = (1..=n).map(|j| (power + j) as f64).product();
        let next = term * zn / denom;
        power += n;
        terms += 1;
        sum += next;
        if !sum.is_finite() {
            return Err(Error::NonFinite("mod-n exponential series"));
        }
        let magnitude = next.norm();
        if power as f64 > radius && cfg.negligible(magnitude, sum.norm()) {
            return Ok(sum);
        }
        if terms >= cfg.max_terms {
            return Err(Error::NonConvergence {
                terms,
                last_term: magnitude,
            });
        }
        term = next;
    }
}

/// `ₛe^z` as the root-of-unity superposition `(1/n) Σ_k q̄^{2sk} e^{q^{2k} z}`.
pub fn modn_exp_dft(ctx: &ModulusContext, s: usize, z: Complex64) -> Result<Complex64> {
    modn_component(|w| w.exp(), ctx, s, z)
}

/// All `n` components `[₀e^z, …, ₙ₋₁e^z]` from one pass over `z^m/m!`.
pub fn modn_exp_all(
    ctx: &ModulusContext,
    z: Complex64,
    cfg: &SeriesConfig,
) -> Result<Vec<Complex64>> {
    let n = ctx.n();
    cfg.validate(n)?;
    let radius = z.norm();
    let limit = cfg.max_terms.saturating_mul(n);

    let mut sums = vec![Complex64::new(0.0, 0.0); n];
    let mut term = Complex64::new(1.0, 0.0);
    let mut quiet = 0;
    for m in 0..limit {
        if m > 0 {
            term = term * z / m as f64;
        }
        let slot = &mut sums[m % n];
        *slot += term;
        if !slot.is_finite() {
            return Err(Error::NonFinite("mod-n exponential series"));
        }
        if m as f64 > radius && cfg.negligible(term.norm(), slot.norm()) {
            quiet += 1;
            if quiet >= n {
                return Ok(sums);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        terms: limit / n,
        last_term: term.norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_zero_modulus() {
        assert_eq!(ModulusContext::new(0), Err(Error::InvalidModulus(0)));
    }

    #[test]
    fn small_root_tables() {
        assert_eq!(ModulusContext::new(1).unwrap().q2_powers(), &[c(1.0, 0.0)]);
        assert_eq!(
            ModulusContext::new(4).unwrap().q2_powers(),
            &[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]
        );
        let third = ModulusContext::new(3).unwrap();
        let h = 3f64.sqrt() / 2.0;
        assert!((third.root(1) - c(-0.5, h)).norm() < 1e-15);
        assert!((third.root(2) - c(-0.5, -h)).norm() < 1e-15);
    }

    #[test]
    fn roots_are_unimodular_and_cyclic() {
        for n in 1..=12 {
            let ctx = ModulusContext::new(n).unwrap();
            let q2 = ctx.root(1);
            assert!((q2.powu(n as u32) - 1.0).norm() < 1e-14);
            for (s, q) in ctx.q2_powers().iter().enumerate() {
                assert!((q.norm() - 1.0).abs() < 1e-15);
                assert_eq!(ctx.root_conj(s), q.conj());
            }
            for k in 0..n {
                let sum: Complex64 = (0..n).map(|s| ctx.root(s * k)).sum();
                let expected = if k == 0 { n as f64 } else { 0.0 };
                assert!((sum - expected).norm() < 1e-13, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn index_errors() {
        let ctx = ModulusContext::new(3).unwrap();
        let cfg = SeriesConfig::default();
        let err = Error::IndexOutOfRange { index: 3, n: 3 };
        assert_eq!(
            modn_exp_series(&ctx, 3, c(1.0, 0.0), &cfg),
            Err(err.clone())
        );
        assert_eq!(modn_exp_dft(&ctx, 3, c(1.0, 0.0)), Err(err.clone()));
        assert_eq!(modn_component(|w| w, &ctx, 3, c(1.0, 0.0)), Err(err));
    }

    #[test]
    fn non_finite_component_is_an_error() {
        let ctx = ModulusContext::new(2).unwrap();
        let r = modn_component(|w| 1.0 / (w - 1.0), &ctx, 0, c(1.0, 0.0));
        assert_eq!(r, Err(Error::NonFinite("mod-n component")));
    }

    #[test]
    fn initial_conditions() {
        let ctx = ModulusContext::new(2).unwrap();
        let cfg = SeriesConfig::default();
        assert_eq!(
            modn_exp_series(&ctx, 0, c(0.0, 0.0), &cfg).unwrap(),
            c(1.0, 0.0)
        );
        assert_eq!(
            modn_exp_series(&ctx, 1, c(0.0, 0.0), &cfg).unwrap(),
            c(0.0, 0.0)
        );
        let ctx3 = ModulusContext::new(3).unwrap();
        let all = modn_exp_all(&ctx3, c(0.0, 0.0), &cfg).unwrap();
        assert_eq!(all, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn mod2_is_cosh_sinh() {
        let ctx = ModulusContext::new(2).unwrap();
        let cfg = SeriesConfig::default();
        let z = c(2.0, 0.0);
        let cosh = modn_exp_series(&ctx, 0, z, &cfg).unwrap();
        assert!((cosh.re - 2f64.cosh()).abs() <= 1e-15 * 2f64.cosh());
        let all = modn_exp_all(&ctx, c(1.0, 0.0), &cfg).unwrap();
        assert!((all[0].re - 1f64.cosh()).abs() < 1e-15);
        assert!((all[1].re - 1f64.sinh()).abs() < 1e-15);
        let x = c(0.7, 0.0);
        assert!((modn_exp_dft(&ctx, 1, x).unwrap() - x.sinh()).norm() < 1e-15);
    }

    #[test]
    fn mod4_zeroth_component_expands_to_cosh_plus_cos() {
        let ctx = ModulusContext::new(4).unwrap();
        for x in [0.3f64, 1.0, 2.5, -3.0] {
            let expected = (x.cosh() + x.cos()) / 2.0;
            let got = modn_exp_dft(&ctx, 0, c(x, 0.0)).unwrap();
            assert!((got - expected).norm() < 1e-14 * x.cosh(), "x={x}");
        }
    }

    #[test]
    fn n_equal_one_is_the_exponential() {
        let ctx = ModulusContext::new(1).unwrap();
        let z = c(1.3, -0.4);
        let cfg = SeriesConfig::default();
        assert!((modn_exp_series(&ctx, 0, z, &cfg).unwrap() - z.exp()).norm() < 1e-14);
        assert!((modn_component(|w| w.exp(), &ctx, 0, z).unwrap() - z.exp()).norm() < 1e-15);
    }

    #[test]
    fn series_matches_batch() {
        let cfg = SeriesConfig::default();
        for n in 1..=8 {
            let ctx = ModulusContext::new(n).unwrap();
            let z = c(2.0, 1.0);
            let all = modn_exp_all(&ctx, z, &cfg).unwrap();
            let total: Complex64 = all.iter().sum();
            assert!((total - z.exp()).norm() < 1e-13 * z.norm().exp());
            for (s, value) in all.iter().enumerate() {
                let single = modn_exp_series(&ctx, s, z, &cfg).unwrap();
                assert!(
                    (single - value).norm() < 1e-14 * z.norm().exp(),
                    "n={n} s={s}"
                );
            }
        }
    }

    #[test]
    fn non_convergence_reports_last_term() {
        let ctx = ModulusContext::new(2).unwrap();
        let cfg = SeriesConfig {
            max_terms: 3,
            ..SeriesConfig::default()
        };
        match modn_exp_series(&ctx, 0, c(20.0, 0.0), &cfg) {
            Err(Error::NonConvergence { terms, last_term }) => {
                assert_eq!(terms, 3);
                assert!(last_term > 1.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let bad = SeriesConfig {
            rel_tol: 0.0,
            ..SeriesConfig::default()
        };
        assert!(matches!(bad.validate(2), Err(Error::InvalidConfig(_))));
        let short = SeriesConfig {
            max_terms: 2,
            ..SeriesConfig::default()
        };
        assert!(short.validate(3).is_err());
        assert!(short.validate(2).is_ok());
    }

    #[test]
    fn derivative_orbit_is_a_single_cycle() {
        for n in 1..=8 {
            let ctx = ModulusContext::new(n).unwrap();
            for start in 0..n {
                let mut seen = vec![false; n];
                let mut s = start;
                for _ in 0..n {
                    assert!(!seen[s]);
                    seen[s] = true;
                    s = ctx.derivative_index(s);
                }
                assert_eq!(s, start);
                assert!(seen.iter().all(|&v| v));
            }
        }
    }
}
