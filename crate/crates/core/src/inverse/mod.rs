//! Reconstruction of `ψ̃` from reciprocal samples: kernel tables, the reduced
//! second-kind system, the regularized first-kind equation for `ψ̃₃₃`, and
//! gridding back to voxels.

pub mod gridding;
pub mod kernel;
pub mod pipeline;
pub mod reduced;
pub mod sampling;
pub mod solve;
pub mod span;

pub use gridding::{band_limited, grid_and_invert, GriddedField, GriddingConfig, ReciprocalGrid};
pub use kernel::{sample_transform, Interpolator, KernelTable, DEFAULT_RCOND};
pub use pipeline::{reconstruct, BlockReport, InversionConfig, Reconstruction, SolveMode};
pub use reduced::{
    apply_p_rows, b_tilde, i_tilde, i_tilde_det, m3_matrix, n_block, p_block, project, projected_response,
    psi33_rhs, rhs_from_m, standard_polarizations, ReducedSystem,
};
pub use sampling::{Admissibility, SamplePoint, SampleSet};
pub use solve::{
    second_kind_operator, solve_psi33, solve_second_kind, Regularization, SecondKindSolution, Tikhonov,
    TikhonovSolution, DEFAULT_RESIDUAL_TOL,
};
pub use span::{combine_polarizations, m_tilde_direct, polarization_span_check};
