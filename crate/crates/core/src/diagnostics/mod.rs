//! Discrete stability diagnostics: subspace decompositions, the associated
//! T-operators, inf-sup constants, compatibility defects and spectral probes.

mod commuting;
mod compat;
mod decomposition;
mod infsup;
mod probe;
mod toperator;

pub use commuting::{commuting_diagram_defect, trace_commutation_defect, CommutingDefect};
pub use compat::{compatibility_defect, nested_prolongation, NestedHierarchy};
pub use decomposition::{build_decomposition, DecompositionKind, OrthoProjector, SubspaceDecomposition};
pub use infsup::{aux_gram, inf_sup_constant};
pub use probe::{essential_spectrum_probe, ProbeLevel};
pub use toperator::{build_t, TOperator, TVariant};
