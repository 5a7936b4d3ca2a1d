//! Volume-integral quadrature and Born far fields over a voxelized sample.

pub mod born;
pub mod grid;
pub mod operator;
pub mod susceptibility;

pub use born::{born_far_field, born_far_fields, far_field_op, ls_apply, BornOrder, BornSource, FarFieldRecord};
pub use grid::{EquivalentSphere, GridSpec, SelfCellRule, VoxelGrid};
pub use operator::GreenOperator;
pub use susceptibility::{background_pattern, orthotropic, OrthotropicSusceptibility};
