//! Root-of-unity ("mod n") function calculus and its application to
//! kaleidoscope superpositions of coherent states.
//!
//! The crate is organised bottom-up:
//!
//! - [`modn`]: primitive roots of unity, the mod-n Fourier components of a
//!   function, and the scalar mod-n exponentials `ₛe^z`, each evaluable by a
//!   power series and by a root-of-unity superposition.
//! - [`fock`]: dense linear algebra on the truncated Fock space (ladder
//!   operators, coherent states, displacement operators and their mod-n
//!   averages, kaleidoscope states).
//! - [`identities`]: operator-valued mod-n exponentials and numerical
//!   certification of the mod-2 factorization, q-commutation, exchange and
//!   addition identities.
//! - [`observables`]: photon numbers and quadrature uncertainty products,
//!   each from its closed form and from the Fock-basis state.
//! - [`coordinate`]: Hermite generating functions, coordinate-space wave
//!   functions and probability grids.
//!
//! All arithmetic is binary64. Every value is immutable once built and every
//! operation is a pure function of its arguments.

pub mod coordinate;
pub mod error;
pub mod fock;
pub mod identities;
pub mod modn;
pub mod observables;

pub use num_complex::Complex64;

pub use coordinate::{
    default_grid_range, hermite_values, modn_gaussian_exp, modn_hermite_generating_sum,
    probability_grid, quartet_closed_form, wavefunction, GridMeta, HermiteSequence,
    WaveFunctionGrid,
};
pub use error::{Error, Result};
pub use fock::{
    coherent_state, displacement_operator, kaleidoscope_state, ladder_operators, modn_displacement,
    FockDim, OperatorMatrix, StateVector,
};
pub use identities::{
    certified_block, expm, operator_modn_exp, operator_modn_exp_all, verify_addition_formulas,
    verify_all, verify_all_on_block, verify_exchange_identities, verify_mod2_factorization,
    verify_q_commutation, IdentityParams, IdentityReport,
};
pub use modn::{
    modn_component, modn_exp_all, modn_exp_dft, modn_exp_series, ModulusContext, SeriesConfig,
};
pub use observables::{
    cat_uncertainty_check, observable_report, photon_number_fock, photon_number_formula,
    uncertainty_formula, uncertainty_product, CatUncertainty, ObservableReport, Uncertainty,
};

/// Complex scalar used for arguments, amplitudes and function values.
pub type ComplexValue = Complex64;
