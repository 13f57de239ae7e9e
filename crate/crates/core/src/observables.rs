//! Photon numbers and quadrature uncertainty products of kaleidoscope states.
//!
//! Units are ħ = 1 with quadratures `q = (a + a†)/√2`, `p = (a − a†)/(i√2)`,
//! so the vacuum product is 1/2.

use crate::fock::{kaleidoscope_state, ladder_operators, FockDim, StateVector, TAIL_TOLERANCE};
use crate::modn::{modn_exp_series, ModulusContext, SeriesConfig};
use crate::{Complex64, Error, Result};

/// Below this value of `ₖe^{|α|²}` the ratio of consecutive mod-n exponentials
/// is replaced by its leading-term limit.
const SMALL_NORMALIZATION: f64 = 1e-280;

const NORMALIZATION_CHECK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uncertainty {
    pub delta_q: f64,
    pub delta_p: f64,
    pub product: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservableReport {
    pub n: usize,
    pub k: usize,
    pub alpha: Complex64,
    pub dim: FockDim,
    pub mean_photons_formula: f64,
    pub mean_photons_fock: f64,
    pub delta_q: f64,
    pub delta_p: f64,
    pub product: f64,
    /// Closed-form product, available for `n ≥ 3` only.
    pub product_formula: Option<f64>,
}

/// Cat-state (n = 2) uncertainty from the Fock basis next to the printed
/// closed expression `½√((1 + 2⟨N̂⟩) − (α² + ᾱ²)²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CatUncertainty {
    pub k: usize,
    pub alpha: Complex64,
    pub mean_photons: f64,
    pub product_fock: f64,
    /// `None` when the radicand is negative.
    pub paper_expression_value: Option<f64>,
}

/// `⟨N̂⟩ = |α|² · ₖ₋₁e^{|α|²} / ₖe^{|α|²}` with `k − 1` taken mod n.
pub fn photon_number_formula(ctx: &ModulusContext, k: usize, alpha: Complex64) -> Result<f64> {
    ctx.check_index(k)?;
    let x = alpha.norm_sqr();
    if x == 0.0 {
        return if k == 0 {
            Ok(0.0)
        } else {
            Err(Error::DegenerateNormalization { k })
        };
    }
    let cfg = SeriesConfig::default();
    let arg = Complex64::new(x, 0.0);
    let denominator = modn_exp_series(ctx, k, arg, &cfg)?.re;
    if denominator < SMALL_NORMALIZATION {
        // only reachable for k >= 1 (₀e^x >= 1): x^{k-1}/(k-1)! over x^k/k!
        return Ok(k as f64);
    }
    let numerator = modn_exp_series(ctx, ctx.previous(k), arg, &cfg)?.re;
    Ok(x * numerator / denominator)
}

fn check_normalized(state: &StateVector) -> Result<f64> {
    let norm_sqr = state.norm_sqr();
    if !((norm_sqr - 1.0).abs() <= NORMALIZATION_CHECK) {
        return Err(Error::Unnormalized { norm_sqr });
    }
    Ok(norm_sqr)
}

/// `Σ m |ampₘ|²` of a normalized state.
pub fn photon_number_fock(state: &StateVector) -> Result<f64> {
    let norm_sqr = check_normalized(state)?;
    let weighted: f64 = state
        .amps()
        .iter()
        .enumerate()
        .map(|(m, a)| m as f64 * a.norm_sqr())
        .sum();
    Ok(weighted / norm_sqr)
}

/// `Δq`, `Δp` and their product from the truncated quadrature matrices.
pub fn uncertainty_product(state: &StateVector) -> Result<Uncertainty> {
    let norm_sqr = check_normalized(state)?;
    let tail = state.top_tail_mass();
    let dim = state.dim();
    if tail > TAIL_TOLERANCE {
        return Err(Error::Truncation {
            tail,
            dim: dim.get(),
            suggested: 2 * dim.get(),
        });
    }
    let (a, a_dagger) = ladder_operators(dim);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let q = (&a + &a_dagger).scale(Complex64::new(inv_sqrt2, 0.0));
    let p = (&a - &a_dagger).scale(Complex64::new(0.0, -inv_sqrt2));

    let spread = |op: &crate::fock::OperatorMatrix| -> Result<f64> {
        let image = op.apply(state)?;
        let mean = state.inner(&image)?.re / norm_sqr;
        let second = state.inner(&op.apply(&image)?)?.re / norm_sqr;
        Ok((second - mean * mean).max(0.0).sqrt())
    };
    let delta_q = spread(&q)?;
    let delta_p = spread(&p)?;
    Ok(Uncertainty {
        delta_q,
        delta_p,
        product: delta_q * delta_p,
    })
}

/// Closed-form product `½(1 + 2|α|² ₖ₋₁e^{|α|²}/ₖe^{|α|²})`, valid for `n ≥ 3`
/// where `⟨a⟩ = ⟨a²⟩ = 0`. Cat states are `a²` eigenstates and are excluded.
pub fn uncertainty_formula(ctx: &ModulusContext, k: usize, alpha: Complex64) -> Result<f64> {
    if ctx.n() < 3 {
        return Err(Error::UnsupportedFormula(ctx.n()));
    }
    Ok(0.5 * (1.0 + 2.0 * photon_number_formula(ctx, k, alpha)?))
}

pub fn cat_uncertainty_check(alpha: Complex64, k: usize) -> Result<CatUncertainty> {
    let ctx = ModulusContext::new(2)?;
    let state = kaleidoscope_state(&ctx, k, alpha, FockDim::auto(alpha))?;
    let product_fock = uncertainty_product(&state)?.product;
    let mean_photons = photon_number_formula(&ctx, k, alpha)?;
    let squares = 2.0 * (alpha * alpha).re;
    let radicand = (1.0 + 2.0 * mean_photons) - squares * squares;
    Ok(CatUncertainty {
        k,
        alpha,
        mean_photons,
        product_fock,
        paper_expression_value: (radicand >= 0.0).then(|| 0.5 * radicand.sqrt()),
    })
}

/// Builds `|k⟩_α` (at `dim`, or the automatic dimension) and evaluates every
/// observable on it.
pub fn observable_report(
    ctx: &ModulusContext,
    k: usize,
    alpha: Complex64,
    dim: Option<FockDim>,
) -> Result<ObservableReport> {
    let dim = dim.unwrap_or_else(|| FockDim::auto(alpha));
    let state = kaleidoscope_state(ctx, k, alpha, dim)?;
    let unc = uncertainty_product(&state)?;
    let product_formula = if ctx.n() >= 3 {
        Some(uncertainty_formula(ctx, k, alpha)?)
    } else {
        None
    };
    Ok(ObservableReport {
        n: ctx.n(),
        k,
        alpha,
        dim,
        mean_photons_formula: photon_number_formula(ctx, k, alpha)?,
        mean_photons_fock: photon_number_fock(&state)?,
        delta_q: unc.delta_q,
        delta_p: unc.delta_p,
        product: unc.product,
        product_formula,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::coherent_state;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cat_photon_numbers() {
        let ctx = ModulusContext::new(2).unwrap();
        for alpha in [c(0.3, 0.0), c(1.0, 1.0), c(2.0, -0.5)] {
            let x = alpha.norm_sqr();
            let even = photon_number_formula(&ctx, 0, alpha).unwrap();
            let odd = photon_number_formula(&ctx, 1, alpha).unwrap();
            assert!((even - x * x.tanh()).abs() < 1e-14 * (1.0 + even));
            assert!((odd - x / x.tanh()).abs() < 1e-14 * (1.0 + odd));
        }
    }

    #[test]
    fn trinity_kitten_limit() {
        let ctx = ModulusContext::new(3).unwrap();
        let n = photon_number_formula(&ctx, 2, c(1e-3, 0.0)).unwrap();
        assert!((n - 2.0).abs() < 1e-5);
    }

    #[test]
    fn degenerate_and_tiny_normalizations() {
        let ctx = ModulusContext::new(3).unwrap();
        assert_eq!(
            photon_number_formula(&ctx, 1, c(0.0, 0.0)),
            Err(Error::DegenerateNormalization { k: 1 })
        );
        assert_eq!(photon_number_formula(&ctx, 0, c(0.0, 0.0)), Ok(0.0));
        // ₂e^{1e-150} ≈ 5e-301 takes the leading-term path
        let n = photon_number_formula(&ctx, 2, c(1e-75, 0.0)).unwrap();
        assert_eq!(n, 2.0);
        // just above the crossover both paths agree
        let n = photon_number_formula(&ctx, 2, c(1e-60, 0.0)).unwrap();
        assert!((n - 2.0).abs() < 1e-10);
    }

    #[test]
    fn fock_photon_numbers() {
        let d = FockDim::new(16).unwrap();
        assert_eq!(photon_number_fock(&StateVector::vacuum(d)).unwrap(), 0.0);
        assert_eq!(
            photon_number_fock(&StateVector::fock(3, d).unwrap()).unwrap(),
            3.0
        );
        let coh = coherent_state(c(1.0, 1.0), FockDim::new(48).unwrap()).unwrap();
        assert!((photon_number_fock(&coh).unwrap() - 2.0).abs() < 1e-10);
        let doubled = StateVector::vacuum(d).scaled(c(2.0, 0.0));
        assert!(matches!(
            photon_number_fock(&doubled),
            Err(Error::Unnormalized { .. })
        ));
    }

    #[test]
    fn minimum_uncertainty_states() {
        let vac = uncertainty_product(&StateVector::vacuum(FockDim::new(16).unwrap())).unwrap();
        assert!((vac.delta_q - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((vac.delta_p - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((vac.product - 0.5).abs() < 1e-15);
        let coh = coherent_state(c(1.0, 0.0), FockDim::new(40).unwrap()).unwrap();
        assert!((uncertainty_product(&coh).unwrap().product - 0.5).abs() < 1e-10);
    }

    #[test]
    fn truncated_input_is_rejected() {
        let d = FockDim::new(4).unwrap();
        let top = StateVector::fock(3, d).unwrap();
        assert!(matches!(
            uncertainty_product(&top),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn formula_limits() {
        let three = ModulusContext::new(3).unwrap();
        let five = ModulusContext::new(5).unwrap();
        let tiny = c(1e-3, 0.0);
        assert!((uncertainty_formula(&three, 0, tiny).unwrap() - 0.5).abs() < 1e-5);
        assert!((uncertainty_formula(&five, 4, tiny).unwrap() - 4.5).abs() < 1e-5);
        let two = ModulusContext::new(2).unwrap();
        assert_eq!(
            uncertainty_formula(&two, 0, tiny),
            Err(Error::UnsupportedFormula(2))
        );
    }

    #[test]
    fn kaleidoscope_product_matches_formula() {
        let ctx = ModulusContext::new(3).unwrap();
        let report = observable_report(&ctx, 1, c(1.1, 0.0), None).unwrap();
        let formula = report.product_formula.unwrap();
        assert!((report.product - formula).abs() < 1e-9);
        assert!((report.delta_q - report.delta_p).abs() < 1e-9);
    }

    #[test]
    fn cat_uncertainty_is_reported_side_by_side() {
        let imaginary = cat_uncertainty_check(c(0.0, 0.5), 0).unwrap();
        // α² + ᾱ² = −2|α|² = −0.5; radicand (1 + 2N) − 0.25 > 0
        assert!(imaginary.paper_expression_value.is_some());
        for k in 0..2 {
            let check = cat_uncertainty_check(c(0.5, 0.0), k).unwrap();
            let s = 0.5;
            let lhs = 4.0 * check.product_fock * check.product_fock;
            let rhs = (1.0 + 2.0 * check.mean_photons).powi(2) - s * s;
            assert!((lhs - rhs).abs() < 1e-8, "k={k}: {lhs} vs {rhs}");
        }
        assert!(cat_uncertainty_check(c(0.0, 0.0), 1).is_err());
    }
}
