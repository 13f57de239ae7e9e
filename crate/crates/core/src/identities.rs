//! Operator-valued mod-n exponentials and numerical certification of the
//! mod-2 operator identities.
//!
//! The identities hold for c-commutative `A`, `B` (both commute with
//! `[A, B]`). They are realized here as `A = α a†`, `B = β a`, for which
//! `[A, B] = −αβ` away from the truncation boundary. Truncation pollutes the
//! highest rows, so residuals are measured on the leading block spanned by
//! `|0⟩ … |dim/4⟩`.

use crate::fock::{ladder_operators, FockDim, OperatorMatrix};
use crate::modn::ModulusContext;
use crate::{Complex64, Error, Result};

/// Default residual tolerance for every identity.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

const SERIES_REL_TOL: f64 = 1e-16;
const MAX_SERIES_TERMS: usize = 4096;

const MAX_PARAM: f64 = 2.0;
const MIN_DIM: usize = 32;
const MAX_DIM: usize = 256;

/// Outcome of one identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub identity_name: String,
    /// Frobenius norm of `LHS − RHS` on the certified block.
    pub residual_norm: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub dim: FockDim,
    pub params: IdentityParams,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityParams {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl IdentityReport {
    fn new(name: &str, residual_norm: f64, realization: &Realization) -> Self {
        Self {
            identity_name: name.to_owned(),
            residual_norm,
            tolerance: DEFAULT_TOLERANCE,
            passed: residual_norm <= DEFAULT_TOLERANCE,
            dim: realization.dim,
            params: IdentityParams {
                alpha: realization.alpha,
                beta: realization.beta,
            },
        }
    }

    /// Re-judges the residual against another tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.passed = self.residual_norm <= tolerance;
        self
    }
}

/// Number of leading basis levels on which residuals are measured.
pub fn certified_block(dim: FockDim) -> usize {
    dim.get() / 4 + 1
}

/// All `n` operator components `ₛe^M = Σ_k M^{nk+s}/(nk+s)!`, `s = 0..n`, from
/// one pass over `M^j/j!`.
///
/// Summation ends after `n` consecutive terms each fall below `1e-16` of
/// their component's norm, or as soon as a power of `M` vanishes.
pub fn operator_modn_exp_all(
    m: &OperatorMatrix,
    ctx: &ModulusContext,
) -> Result<Vec<OperatorMatrix>> {
    let n = ctx.n();
    let dim = m.dim();
    if !m.is_finite() {
        return Err(Error::NonFinite("operator argument"));
    }
    let radius = m.frobenius_norm();
    let mut sums = vec![OperatorMatrix::zeros(dim); n];
    let mut term = OperatorMatrix::identity(dim);
    let mut quiet = 0;
    for j in 0..MAX_SERIES_TERMS {
        if j > 0 {
            term = m.matmul(&term).scale(Complex64::new(1.0 / j as f64, 0.0));
            if term.is_zero() {
                return Ok(sums);
            }
        }
        let slot = &mut sums[j % n];
        *slot = &*slot + &term;
        if !slot.is_finite() {
            return Err(Error::NonFinite("operator series"));
        }
        if j as f64 > radius && term.frobenius_norm() <= SERIES_REL_TOL * slot.frobenius_norm() {
            quiet += 1;
            if quiet >= n {
                return Ok(sums);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        terms: MAX_SERIES_TERMS,
        last_term: term.frobenius_norm(),
    })
}

/// `ₛe^M` for an operator argument.
pub fn operator_modn_exp(
    m: &OperatorMatrix,
    ctx: &ModulusContext,
    s: usize,
) -> Result<OperatorMatrix> {
    ctx.check_index(s)?;
    Ok(operator_modn_exp_all(m, ctx)?.swap_remove(s))
}

fn one_norm(m: &OperatorMatrix) -> f64 {
    m.entries()
        .columns()
        .into_iter()
        .map(|col| col.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// General dense matrix exponential by scaling and squaring.
///
/// `M` is scaled by `2^-j` until its 1-norm is at most 1/2, the Taylor
/// series is truncated once the remainder bound (amplified by the `j`
/// squarings) falls below 1e-16, and the result is squared `j` times.
pub fn expm(m: &OperatorMatrix) -> Result<OperatorMatrix> {
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix exponential argument"));
    }
    let dim = m.dim();
    let norm = one_norm(m);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = m.scale(Complex64::new(2f64.powi(-squarings), 0.0));
    let theta = norm * 2f64.powi(-squarings);
    let amplification = 2f64.powi(squarings);

    let mut sum = OperatorMatrix::identity(dim);
    let mut term = OperatorMatrix::identity(dim);
    let mut bound = theta.exp();
    for j in 1..=64 {
        term = scaled
            .matmul(&term)
            .scale(Complex64::new(1.0 / j as f64, 0.0));
        sum = &sum + &term;
        bound *= theta / (j + 1) as f64;
        if bound * amplification <= 1e-16 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum);
    }
    if !sum.is_finite() {
        return Err(Error::NonFinite("matrix exponential"));
    }
    Ok(sum)
}

/// `A = α a†`, `B = β a` and their commutator on one truncated space.
struct Realization {
    alpha: Complex64,
    beta: Complex64,
    dim: FockDim,
    block: usize,
    a: OperatorMatrix,
    b: OperatorMatrix,
    comm: OperatorMatrix,
}

impl Realization {
    fn new(alpha: Complex64, beta: Complex64, dim: FockDim) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::UnsafeParameters(
                "alpha and beta must be finite".into(),
            ));
        }
        if alpha.norm() > MAX_PARAM || beta.norm() > MAX_PARAM {
            return Err(Error::UnsafeParameters(format!(
                "|alpha| = {:.3}, |beta| = {:.3}; both must be <= {MAX_PARAM} for the operator series to be faithful on the truncated space",
                alpha.norm(),
                beta.norm()
            )));
        }
        if !(MIN_DIM..=MAX_DIM).contains(&dim.get()) {
            return Err(Error::UnsafeParameters(format!(
                "dim = {} must lie in [{MIN_DIM}, {MAX_DIM}] so the certified block stays clear of the truncation boundary",
                dim.get()
            )));
        }
        let (lower, raise) = ladder_operators(dim);
        let a = raise.scale(alpha);
        let b = lower.scale(beta);
        let comm = a.commutator(&b);
        Ok(Self {
            alpha,
            beta,
            dim,
            block: certified_block(dim),
            a,
            b,
            comm,
        })
    }

    fn hyperbolic(m: &OperatorMatrix) -> Result<(OperatorMatrix, OperatorMatrix)> {
        let ctx = ModulusContext::new(2)?;
        let mut parts = operator_modn_exp_all(m, &ctx)?;
        let sinh = parts.pop().expect("two components");
        let cosh = parts.pop().expect("two components");
        Ok((cosh, sinh))
    }

    /// `e^{t[A,B]}`.
    fn comm_exp(&self, t: f64) -> Result<OperatorMatrix> {
        expm(&self.comm.scale(Complex64::new(t, 0.0)))
    }

    fn report(&self, name: &str, lhs: &OperatorMatrix, rhs: &OperatorMatrix) -> IdentityReport {
        let residual = (lhs - rhs).block_norm(self.block);
        IdentityReport::new(name, residual, self)
    }
}

/// `₀e^{A+B} = (₀e^A ₀e^B + ₁e^A ₁e^B) e^{−[A,B]/2}` and
/// `₁e^{A+B} = (₀e^A ₁e^B + ₁e^A ₀e^B) e^{−[A,B]/2}`.
pub fn verify_mod2_factorization(
    alpha: Complex64,
    beta: Complex64,
    dim: FockDim,
) -> Result<[IdentityReport; 2]> {
    verify_mod2_factorization_on(&Realization::new(alpha, beta, dim)?)
}

fn verify_mod2_factorization_on(r: &Realization) -> Result<[IdentityReport; 2]> {
    let (cosh_sum, sinh_sum) = Realization::hyperbolic(&(&r.a + &r.b))?;
    let (cosh_a, sinh_a) = Realization::hyperbolic(&r.a)?;
    let (cosh_b, sinh_b) = Realization::hyperbolic(&r.b)?;
    let half = r.comm_exp(-0.5)?;

    let even = &(&(&cosh_a * &cosh_b) + &(&sinh_a * &sinh_b)) * &half;
    let odd = &(&(&cosh_a * &sinh_b) + &(&sinh_a * &cosh_b)) * &half;
    Ok([
        r.report("mod2_factorization_0", &cosh_sum, &even),
        r.report("mod2_factorization_1", &sinh_sum, &odd),
    ])
}

/// `e^A e^B = e^{[A,B]} e^B e^A`.
pub fn verify_q_commutation(
    alpha: Complex64,
    beta: Complex64,
    dim: FockDim,
) -> Result<IdentityReport> {
    verify_q_commutation_on(&Realization::new(alpha, beta, dim)?)
}

fn verify_q_commutation_on(r: &Realization) -> Result<IdentityReport> {
    let exp_a = expm(&r.a)?;
    let exp_b = expm(&r.b)?;
    let lhs = &exp_a * &exp_b;
    let rhs = &(&r.comm_exp(1.0)? * &exp_b) * &exp_a;
    Ok(r.report("q_commutation", &lhs, &rhs))
}

/// The four exchange rules moving `ₛe^B` past `ₜe^A`, with the c-number
/// factors `cosh[A,B]` and `sinh[A,B]`.
pub fn verify_exchange_identities(
    alpha: Complex64,
    beta: Complex64,
    dim: FockDim,
) -> Result<[IdentityReport; 4]> {
    verify_exchange_identities_on(&Realization::new(alpha, beta, dim)?)
}

fn verify_exchange_identities_on(r: &Realization) -> Result<[IdentityReport; 4]> {
    let (ca, sa) = Realization::hyperbolic(&r.a)?;
    let (cb, sb) = Realization::hyperbolic(&r.b)?;
    let (cc, sc) = Realization::hyperbolic(&r.comm)?;

    let rule = |left: &OperatorMatrix,
                right: &OperatorMatrix,
                direct: (&OperatorMatrix, &OperatorMatrix),
                swapped: (&OperatorMatrix, &OperatorMatrix)| {
        let lhs = left * right;
        let rhs = &(&(direct.0 * direct.1) * &cc) + &(&(swapped.0 * swapped.1) * &sc);
        (lhs, rhs)
    };

    let (l1, r1) = rule(&ca, &cb, (&cb, &ca), (&sb, &sa));
    let (l2, r2) = rule(&sa, &sb, (&sb, &sa), (&cb, &ca));
    let (l3, r3) = rule(&ca, &sb, (&sb, &ca), (&cb, &sa));
    let (l4, r4) = rule(&sa, &cb, (&cb, &sa), (&sb, &ca));
    Ok([
        r.report("exchange_cosh_cosh", &l1, &r1),
        r.report("exchange_sinh_sinh", &l2, &r2),
        r.report("exchange_cosh_sinh", &l3, &r3),
        r.report("exchange_sinh_cosh", &l4, &r4),
    ])
}

/// `cosh(A ± B)` and `sinh(A ± B)` in terms of `cosh`/`sinh` of `A` and `B`
/// with the factor `e^{∓[A,B]/2}`.
///
/// In the sinh formulas the cosh/sinh pair keeps `A`-functions to the left
/// (`sinh A cosh B ± cosh A sinh B`), the order that follows from the
/// mod-2 factorization.
pub fn verify_addition_formulas(
    alpha: Complex64,
    beta: Complex64,
    dim: FockDim,
) -> Result<[IdentityReport; 4]> {
    verify_addition_formulas_on(&Realization::new(alpha, beta, dim)?)
}

fn verify_addition_formulas_on(r: &Realization) -> Result<[IdentityReport; 4]> {
    let (cosh_plus, sinh_plus) = Realization::hyperbolic(&(&r.a + &r.b))?;
    let (cosh_minus, sinh_minus) = Realization::hyperbolic(&(&r.a - &r.b))?;
    let (ca, sa) = Realization::hyperbolic(&r.a)?;
    let (cb, sb) = Realization::hyperbolic(&r.b)?;
    let down = r.comm_exp(-0.5)?;
    let up = r.comm_exp(0.5)?;

    let cc = &ca * &cb;
    let ss = &sa * &sb;
    let sc = &sa * &cb;
    let cs = &ca * &sb;
    Ok([
        r.report("addition_cosh_plus", &cosh_plus, &(&(&cc + &ss) * &down)),
        r.report("addition_cosh_minus", &cosh_minus, &(&(&cc - &ss) * &up)),
        r.report("addition_sinh_plus", &sinh_plus, &(&(&sc + &cs) * &down)),
        r.report("addition_sinh_minus", &sinh_minus, &(&(&sc - &cs) * &up)),
    ])
}

/// Every identity above for one parameter point, in a fixed order.
pub fn verify_all(alpha: Complex64, beta: Complex64, dim: FockDim) -> Result<Vec<IdentityReport>> {
    all_on(&Realization::new(alpha, beta, dim)?)
}

/// [`verify_all`] with residuals taken on the leading `block` levels, which
/// may not exceed [`certified_block`]. Comparing dimensions on one common
/// block isolates the truncation error.
pub fn verify_all_on_block(
    alpha: Complex64,
    beta: Complex64,
    dim: FockDim,
    block: usize,
) -> Result<Vec<IdentityReport>> {
    let mut r = Realization::new(alpha, beta, dim)?;
    if block == 0 || block > r.block {
        return Err(Error::UnsafeParameters(format!(
            "block {block} must lie in [1, {}] at dim {}",
            r.block,
            dim.get()
        )));
    }
    r.block = block;
    all_on(&r)
}

fn all_on(r: &Realization) -> Result<Vec<IdentityReport>> {
    let mut reports = Vec::with_capacity(11);
    reports.extend(verify_mod2_factorization_on(r)?);
    reports.push(verify_q_commutation_on(r)?);
    reports.extend(verify_exchange_identities_on(r)?);
    reports.extend(verify_addition_formulas_on(r)?);
    Ok(reports)
}
