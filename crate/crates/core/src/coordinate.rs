//! Coordinate representation: Hermite generating functions, wave functions
//! `⟨x|k⟩_α` and sampled probability densities.
//!
//! Hermite polynomials use the physicists' convention, generated by
//! `e^{−z² + 2zx} = Σ_m z^m H_m(x)/m!`. The mod-n components of that
//! generating function pick out the orders `m ≡ k (mod n)`:
//!
//! ```text
//! Σ_s z^{ns+k} H_{ns+k}(x)/(ns+k)! = ₖe^{−z² + 2zx}
//! ```
//!
//! and with `z = α/√2` they give the kaleidoscope wave functions
//!
//! ```text
//! ⟨x|k⟩_α = e^{−x²/2} ₖe^{−α²/2 + √2αx} / (π^{1/4} √(ₖe^{|α|²}))
//! ```

use std::f64::consts::{PI, SQRT_2};

use crate::fock::FockDim;
use crate::modn::{modn_component, modn_exp_series, ModulusContext, SeriesConfig};
use crate::{Complex64, Error, Result};

/// Samples used when the caller does not choose.
pub const DEFAULT_SAMPLES: usize = 1201;

/// A grid is certified when its Simpson integral is within this of 1.
pub const CERTIFY_TOLERANCE: f64 = 1e-4;

const MAX_GENERATING_ARG: f64 = 5.0;

/// `H_0(x) … H_M(x)` at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteSequence {
    pub x: f64,
    pub values: Vec<f64>,
}

/// Three-term recurrence `H_{m+1} = 2x H_m − 2m H_{m−1}`.
pub fn hermite_values(max_order: usize, x: f64) -> Result<HermiteSequence> {
    if !x.is_finite() {
        return Err(Error::NonFinite("Hermite argument"));
    }
    let mut values = Vec::with_capacity(max_order + 1);
    values.push(1.0);
    if max_order >= 1 {
        values.push(2.0 * x);
    }
    for m in 1..max_order {
        let next = 2.0 * x * values[m] - 2.0 * m as f64 * values[m - 1];
        if !next.is_finite() {
            return Err(Error::HermiteOverflow { order: m + 1, x });
        }
        values.push(next);
    }
    Ok(HermiteSequence { x, values })
}

/// `ₖe^{−z² + 2zx} = (1/n) Σ_s q̄^{2ks} e^{−(q^{2s}z)² + 2(q^{2s}z)x}`.
pub fn modn_gaussian_exp(
    ctx: &ModulusContext,
    k: usize,
    z: Complex64,
    x: f64,
) -> Result<Complex64> {
    modn_component(|w| (-w * w + 2.0 * w * x).exp(), ctx, k, z)
}

/// `Σ_s z^{ns+k} H_{ns+k}(x) / (ns+k)!` summed directly.
///
/// The terms `u_m = z^m H_m(x)/m!` obey the Hermite recurrence scaled by the
/// running power/factorial, `u_{m+1} = 2z(x u_m − z u_{m−1})/(m+1)`, so no
/// Hermite value or factorial is ever formed on its own. Termination uses
/// the bound `|H_m(x)| ≤ 1.0865 e^{x²/2} √(2^m m!)`, which is decreasing in
/// `m` once `m + 1 > 2|z|²`.
pub fn modn_hermite_generating_sum(
    ctx: &ModulusContext,
    k: usize,
    z: Complex64,
    x: f64,
    cfg: &SeriesConfig,
) -> Result<Complex64> {
    ctx.check_index(k)?;
    let n = ctx.n();
    cfg.validate(n)?;
    if !(z.norm() <= MAX_GENERATING_ARG) || !x.is_finite() {
        return Err(Error::UnsafeParameters(format!(
            "generating sum needs |z| <= {MAX_GENERATING_ARG} and finite x (got |z| = {}, x = {x})",
            z.norm()
        )));
    }
    let radius = z.norm();
    let growth_ends = 2.0 * radius * radius;

    let mut prev = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut bound = 1.0865 * (0.5 * x * x).exp();
    let mut sum = Complex64::new(0.0, 0.0);
    for m in 0..cfg.max_terms.saturating_mul(n) {
        if m > 0 {
            let next = 2.0 * z * (x * term - z * prev) / m as f64;
            prev = term;
            term = next;
            bound *= radius * (2.0 / m as f64).sqrt();
        }
        if m % n == k {
            sum += term;
            if !sum.is_finite() {
                return Err(Error::NonFinite("Hermite generating sum"));
            }
        }
        if (m + 1) as f64 > growth_ends && bound <= cfg.abs_tol + cfg.rel_tol * sum.norm() {
            return Ok(sum);
        }
    }
    Err(Error::NonConvergence {
        terms: cfg.max_terms,
        last_term: term.norm(),
    })
}

fn normalization(ctx: &ModulusContext, k: usize, alpha: Complex64) -> Result<f64> {
    if alpha == Complex64::new(0.0, 0.0) && k > 0 {
        return Err(Error::DegenerateNormalization { k });
    }
    let value = modn_exp_series(
        ctx,
        k,
        Complex64::new(alpha.norm_sqr(), 0.0),
        &SeriesConfig::default(),
    )?
    .re;
    if !(value > 0.0 && value.is_finite()) {
        return Err(Error::DegenerateNormalization { k });
    }
    Ok(value)
}

/// `⟨x|k⟩_α` from the mod-n superposition of displaced Gaussians.
pub fn wavefunction(ctx: &ModulusContext, k: usize, alpha: Complex64, x: f64) -> Result<Complex64> {
    ctx.check_index(k)?;
    let norm = normalization(ctx, k, alpha)?;
    // e^{−x²/2} is folded into each exponent so large |x| cannot overflow.
    let component = modn_component(
        |w| (-0.5 * x * x - 0.5 * w * w + SQRT_2 * w * x).exp(),
        ctx,
        k,
        alpha,
    )?;
    Ok(component / (PI.powf(0.25) * norm.sqrt()))
}

/// Normalization radicand of the four quartet states. Below `|α|² = 1` the
/// differences `cosh − cos` and `sinh − sin` come from their Taylor series
/// `2 Σ y^{4j+r}/(4j+r)!`, which has no cancellation.
fn quartet_norm(k: usize, y: f64) -> f64 {
    let small = y < QUARTET_SERIES_BELOW;
    match k {
        0 => y.cosh() + y.cos(),
        1 => y.sinh() + y.sin(),
        2 if small => quartet_difference_series(2, y),
        2 => y.cosh() - y.cos(),
        3 if small => quartet_difference_series(3, y),
        _ => y.sinh() - y.sin(),
    }
}

const QUARTET_SERIES_BELOW: f64 = 1.0;

fn quartet_difference_series(r: usize, y: f64) -> f64 {
    let mut term = y.powi(r as i32) / if r == 2 { 2.0 } else { 6.0 };
    let mut sum = term;
    let mut m = r;
    while term > 1e-18 * sum {
        term *= y.powi(4) / ((m + 1) * (m + 2) * (m + 3) * (m + 4)) as f64;
        sum += term;
        m += 4;
    }
    2.0 * sum
}

/// The four explicit mod-4 wave functions, written with `cosh ± cos` and
/// `sinh ± sin` of `√2αx`.
pub fn quartet_closed_form(k: usize, alpha: Complex64, x: f64) -> Result<Complex64> {
    if k > 3 {
        return Err(Error::IndexOutOfRange { index: k, n: 4 });
    }
    if alpha == Complex64::new(0.0, 0.0) && k > 0 {
        return Err(Error::DegenerateNormalization { k });
    }
    let norm = quartet_norm(k, alpha.norm_sqr());
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::DegenerateNormalization { k });
    }
    let half_square = 0.5 * alpha * alpha;
    let t = SQRT_2 * alpha * x;
    let damped = (-half_square).exp();
    let grown = half_square.exp();
    let numerator = match k {
        0 => damped * t.cosh() + grown * t.cos(),
        1 => damped * t.sinh() + grown * t.sin(),
        2 => damped * t.cosh() - grown * t.cos(),
        _ => damped * t.sinh() - grown * t.sin(),
    };
    let prefactor = (-0.5 * x * x).exp() / (SQRT_2 * PI.powf(0.25));
    Ok(numerator * prefactor / norm.sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridMeta {
    pub n: usize,
    pub k: usize,
    pub alpha: Complex64,
    /// Fock dimension that would certify the same state in the number basis.
    pub dim: FockDim,
    /// Simpson integral of the sampled probability.
    pub integral: f64,
    pub certified: bool,
}

/// Sampled `ψ(x)` and `|ψ(x)|²` on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunctionGrid {
    pub x_samples: Vec<f64>,
    pub psi: Vec<Complex64>,
    pub prob: Vec<f64>,
    pub meta: GridMeta,
}

/// `±max(8, √2|α| + 8)`: the displacement of the wave packet plus eight
/// vacuum widths.
pub fn default_grid_range(alpha: Complex64) -> (f64, f64) {
    let half = (SQRT_2 * alpha.norm() + 8.0).max(8.0);
    (-half, half)
}

/// Composite Simpson rule on uniformly spaced samples (odd count).
pub fn simpson(values: &[f64], step: f64) -> f64 {
    let last = values.len() - 1;
    let interior: f64 = values[1..last]
        .iter()
        .enumerate()
        .map(|(i, v)| if i % 2 == 0 { 4.0 * v } else { 2.0 * v })
        .sum();
    step / 3.0 * (values[0] + interior + values[last])
}

pub fn probability_grid(
    ctx: &ModulusContext,
    k: usize,
    alpha: Complex64,
    x_min: f64,
    x_max: f64,
    samples: usize,
) -> Result<WaveFunctionGrid> {
    if samples < 3 || samples.is_multiple_of(2) {
        return Err(Error::InvalidGrid(format!(
            "Simpson quadrature needs an odd sample count >= 3, got {samples}"
        )));
    }
    if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
        return Err(Error::InvalidGrid(format!(
            "need finite x_min < x_max, got [{x_min}, {x_max}]"
        )));
    }
    ctx.check_index(k)?;
    let span = x_max - x_min;
    let last = (samples - 1) as f64;
    let x_samples: Vec<f64> = (0..samples)
        .map(|i| x_min + span * (i as f64 / last))
        .collect();
    let psi = x_samples
        .iter()
        .map(|&x| wavefunction(ctx, k, alpha, x))
        .collect::<Result<Vec<_>>>()?;
    let prob: Vec<f64> = psi.iter().map(|p| p.norm_sqr()).collect();
    let integral = simpson(&prob, span / last);
    Ok(WaveFunctionGrid {
        x_samples,
        psi,
        prob,
        meta: GridMeta {
            n: ctx.n(),
            k,
            alpha,
            dim: FockDim::auto(alpha),
            integral,
            certified: (integral - 1.0).abs() <= CERTIFY_TOLERANCE,
        },
    })
}
