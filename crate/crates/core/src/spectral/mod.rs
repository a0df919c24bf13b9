//! Laplacian spectra of truncations and the spectral consequences of the
//! degree-growth condition: the gap bound `λ₀ >= d (1 - γ(r))`, Weyl and
//! eigenvalue ratio windows, the Cheeger form inequality and the bottom of
//! the normalized Laplacian.

mod eigen;
mod form;
mod gamma;
pub mod lanczos;
mod normalized;
mod operator;
mod weyl;

pub use eigen::{eigenvalues, eigenvalues_seeded, Solver, SpectrumResult, DENSE_LIMIT, DENSE_TOLERANCE, ITERATIVE_TOLERANCE};
pub use form::{form_inequality_check, random_connected_support, DEFAULT_MAX_SUPPORT};
pub use gamma::{gamma, GammaValue};
pub use normalized::{normalized_bottom, NormalizedReport};
pub use operator::{BoundaryCondition, LaplacianOperator, LinearOperator, TwinClass};
pub use weyl::{
    breakpoint_grid, counting_and_weyl, eigen_ratios, reliable_index_window, reliable_window, summarize, RatioSummary,
    WeylPoint, DEFAULT_WINDOW_FACTOR,
};

/// Eigenvalues within this distance above `λ` count towards `N(λ)`.
pub const TIE_TOLERANCE: f64 = 1e-8;
