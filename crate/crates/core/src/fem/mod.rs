//! Lowest-order Nédélec and Lagrange assembly on tetrahedral meshes.

pub(crate) mod assembly;
mod dofs;
pub mod fields;
pub mod interpolate;
mod material;
pub mod quadrature;

pub use assembly::{assemble_forms, curl_matrix, gradient_matrix, Forms};
pub use dofs::Dofs;
pub use interpolate::{canonical_interpolants, Interpolants, InterpolationRule};
pub use material::{scalar_tensor, validate_materials, Material, MaterialSpec, Tensor, TensorField};
