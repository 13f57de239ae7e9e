//! Dense linear algebra on the truncated Fock space `span{|0⟩, …, |N⟩}`.

use std::ops::{Add, Mul, Sub};

use ndarray::{Array1, Array2};

use crate::modn::{modn_exp_series, ModulusContext, SeriesConfig};
use crate::{Complex64, Error, Result};

/// Largest probability allowed outside the truncated basis before a state is
/// rejected.
pub const TAIL_TOLERANCE: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Size `N + 1` of the truncated basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockDim(usize);

impl FockDim {
    pub const AUTO_MIN: usize = 16;
    pub const AUTO_MAX: usize = 512;

    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDim(dim));
        }
        Ok(Self(dim))
    }

    /// `⌈|α|² + 8|α| + 16⌉` clamped to `[16, 512]`: the Poisson tail of a
    /// coherent state beyond mean + 8σ is below 1e-12.
    pub fn auto(alpha: Complex64) -> Self {
        Self::auto_capped(alpha, Self::AUTO_MAX)
    }

    pub fn auto_capped(alpha: Complex64, cap: usize) -> Self {
        let r = alpha.norm();
        let wanted = (r * r + 8.0 * r + 16.0).ceil();
        let wanted = if wanted.is_finite() {
            wanted.min(Self::AUTO_MAX as f64) as usize
        } else {
            Self::AUTO_MAX
        };
        Self(wanted.max(Self::AUTO_MIN).min(cap.max(2)))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

/// Amplitudes over the truncated Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Array1<Complex64>,
}

impl StateVector {
    pub fn from_amps(amps: Vec<Complex64>) -> Result<Self> {
        FockDim::new(amps.len())?;
        Ok(Self {
            amps: Array1::from(amps),
        })
    }

    pub fn vacuum(dim: FockDim) -> Self {
        Self::fock(0, dim).expect("level 0 always exists")
    }

    /// Number state `|m⟩`.
    pub fn fock(m: usize, dim: FockDim) -> Result<Self> {
        if m >= dim.get() {
            return Err(Error::IndexOutOfRange {
                index: m,
                n: dim.get(),
            });
        }
        let mut amps = Array1::from_elem(dim.get(), ZERO);
        amps[m] = ONE;
        Ok(Self { amps })
    }

    pub fn dim(&self) -> FockDim {
        FockDim(self.amps.len())
    }

    pub fn amps(&self) -> &[Complex64] {
        self.amps.as_slice().expect("state storage is contiguous")
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Unnormalized {
                norm_sqr: norm * norm,
            });
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            amps: self.amps.mapv(|a| a * factor),
        }
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::DimMismatch {
                left: self.amps.len(),
                right: other.amps.len(),
            });
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        self.check_dim(other)?;
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Probability carried by the two highest basis levels.
    pub fn top_tail_mass(&self) -> f64 {
        self.amps.iter().rev().take(2).map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|op|self⟩` (no normalization applied).
    pub fn expectation(&self, op: &OperatorMatrix) -> Result<Complex64> {
        self.inner(&op.apply(self)?)
    }

    /// Rejects states whose truncation is not faithful. `missing` is the
    /// analytically known probability outside the basis (if any).
    fn certified(self, missing: f64, suggested: FockDim) -> Result<Self> {
        let tail = self.top_tail_mass().max(missing);
        if tail > TAIL_TOLERANCE {
            let dim = self.amps.len();
            let suggested = if suggested.get() > dim {
                suggested.get()
            } else {
                2 * dim
            };
            return Err(Error::Truncation {
                tail,
                dim,
                suggested,
            });
        }
        Ok(self)
    }
}

/// Dense complex `dim × dim` operator on the truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    entries: Array2<Complex64>,
}

impl OperatorMatrix {
    pub fn from_array(entries: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = entries.dim();
        if rows != cols {
            return Err(Error::DimMismatch {
                left: rows,
                right: cols,
            });
        }
        FockDim::new(rows)?;
        Ok(Self { entries })
    }

    pub fn identity(dim: FockDim) -> Self {
        Self {
            entries: Array2::from_diag_elem(dim.get(), ONE),
        }
    }

    pub fn zeros(dim: FockDim) -> Self {
        Self {
            entries: Array2::from_elem((dim.get(), dim.get()), ZERO),
        }
    }

    pub fn dim(&self) -> FockDim {
        FockDim(self.entries.nrows())
    }

    pub fn entries(&self) -> &Array2<Complex64> {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[[row, col]]
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|v| v.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|v| *v == ZERO)
    }

    /// Matrix product. Zero entries of `self` are skipped, so products with
    /// the banded ladder operators and their powers cost O(bandwidth·dim²).
    pub fn matmul(&self, rhs: &Self) -> Self {
        let n = self.entries.nrows();
        assert_eq!(n, rhs.entries.nrows(), "operator dimensions differ");
        let mut out = Array2::from_elem((n, n), ZERO);
        for (i, lhs_row) in self.entries.rows().into_iter().enumerate() {
            let mut out_row = out.row_mut(i);
            for (k, &a) in lhs_row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                out_row.zip_mut_with(&rhs.entries.row(k), |o, &b| *o += a * b);
            }
        }
        Self { entries: out }
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        let n = self.entries.nrows();
        if n != state.amps.len() {
            return Err(Error::DimMismatch {
                left: n,
                right: state.amps.len(),
            });
        }
        let amps = self
            .entries
            .rows()
            .into_iter()
            .map(|row| row.iter().zip(state.amps.iter()).map(|(a, b)| a * b).sum())
            .collect::<Array1<Complex64>>();
        Ok(StateVector { amps })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            entries: self.entries.mapv(|a| a * factor),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.t().mapv(|a| a.conj()),
        }
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Frobenius norm of the leading `size × size` block.
    pub fn block_norm(&self, size: usize) -> f64 {
        let size = size.min(self.entries.nrows());
        self.entries
            .slice(ndarray::s![..size, ..size])
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            entries: &self.entries + &rhs.entries,
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix {
            entries: &self.entries - &rhs.entries,
        }
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        self.matmul(rhs)
    }
}

impl Mul<Complex64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Complex64) -> OperatorMatrix {
        self.scale(rhs)
    }
}

/// Annihilation and creation operators: `a|m⟩ = √m|m−1⟩`, `a†|m⟩ = √(m+1)|m+1⟩`,
/// with `a†|N⟩` truncated to zero.
pub fn ladder_operators(dim: FockDim) -> (OperatorMatrix, OperatorMatrix) {
    let n = dim.get();
    let mut a = Array2::from_elem((n, n), ZERO);
    for m in 1..n {
        a[[m - 1, m]] = Complex64::new((m as f64).sqrt(), 0.0);
    }
    let a = OperatorMatrix { entries: a };
    let a_dagger = a.adjoint();
    (a, a_dagger)
}

/// `|α⟩` with amplitudes `e^{−|α|²/2} αᵐ/√(m!)`.
pub fn coherent_state(alpha: Complex64, dim: FockDim) -> Result<StateVector> {
    if !alpha.is_finite() {
        return Err(Error::NonFinite("coherent amplitude"));
    }
    let n = dim.get();
    let mut amps = Array1::from_elem(n, ZERO);
    let mut amp = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    for m in 0..n {
        if m > 0 {
            amp = amp * alpha / (m as f64).sqrt();
        }
        amps[m] = amp;
    }
    let state = StateVector { amps };
    let missing = 1.0 - state.norm_sqr();
    state.certified(missing, FockDim::auto(alpha))
}

/// `exp(M)` for nilpotent `M`; the series has at most `dim` terms.
fn nilpotent_exp(m: &OperatorMatrix) -> OperatorMatrix {
    let dim = m.dim();
    let mut sum = OperatorMatrix::identity(dim);
    let mut term = OperatorMatrix::identity(dim);
    for j in 1..dim.get() {
        term = m.matmul(&term).scale(Complex64::new(1.0 / j as f64, 0.0));
        if term.is_zero() {
            break;
        }
        sum = &sum + &term;
    }
    sum
}

/// `D(α) = e^{−|α|²/2} exp(α a†) exp(−ᾱ a)` on the truncated space.
///
/// Truncation makes the result slightly non-unitary near the top levels; the
/// defect is left in place for callers to measure.
pub fn displacement_operator(alpha: Complex64, dim: FockDim) -> OperatorMatrix {
    let (a, a_dagger) = ladder_operators(dim);
    let raise = nilpotent_exp(&a_dagger.scale(alpha));
    let lower = nilpotent_exp(&a.scale(-alpha.conj()));
    raise
        .matmul(&lower)
        .scale(Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0))
}

/// `ₖD(α) = (1/n) Σ_j q̄^{2jk} D(q^{2j} α)`.
pub fn modn_displacement(
    ctx: &ModulusContext,
    k: usize,
    alpha: Complex64,
    dim: FockDim,
) -> Result<OperatorMatrix> {
    ctx.check_index(k)?;
    let n = ctx.n();
    let mut acc = OperatorMatrix::zeros(dim);
    for j in 0..n {
        let d = displacement_operator(ctx.root(j) * alpha, dim);
        acc = &acc + &d.scale(ctx.root_conj(j * k));
    }
    Ok(acc.scale(Complex64::new(1.0 / n as f64, 0.0)))
}

/// `|k⟩_α = ₖe^{α a†} |0⟩ / √(ₖe^{|α|²})`: amplitudes `αᵐ/√(m!)` on the levels
/// `m ≡ k (mod n)`, normalized by the scalar mod-n exponential.
pub fn kaleidoscope_state(
    ctx: &ModulusContext,
    k: usize,
    alpha: Complex64,
    dim: FockDim,
) -> Result<StateVector> {
    ctx.check_index(k)?;
    if !alpha.is_finite() {
        return Err(Error::NonFinite("kaleidoscope amplitude"));
    }
    if alpha == ZERO {
        return if k == 0 {
            Ok(StateVector::vacuum(dim))
        } else {
            Err(Error::DegenerateNormalization { k })
        };
    }
    let n = ctx.n();
    let norm_const = modn_exp_series(
        ctx,
        k,
        Complex64::new(alpha.norm_sqr(), 0.0),
        &SeriesConfig::default(),
    )?
    .re;
    let mut amp = Complex64::new(1.0 / norm_const.sqrt(), 0.0);
    if !(norm_const > 0.0 && amp.is_finite()) {
        return Err(Error::DegenerateNormalization { k });
    }
    let mut amps = Array1::from_elem(dim.get(), ZERO);
    for m in 0..dim.get() {
        if m > 0 {
            amp = amp * alpha / (m as f64).sqrt();
        }
        if m % n == k {
            amps[m] = amp;
        }
    }
    let state = StateVector { amps };
    let missing = 1.0 - state.norm_sqr();
    state.certified(missing, FockDim::auto(alpha))
}
