//! Eigenbasis grids, transforms, diagonal operators of `Δ`, graph norms and rough data.

mod field;
mod grid;
mod operator;
mod rough;
pub mod snapshot;
pub(crate) mod transform;

pub use field::{dealias, forward_transform, inverse_transform, sobolev_norm, SpectralField};
pub use grid::{Boundary, Grid, Wavevector};
pub use operator::{apply_operator, phi1, phi1_imag, OperatorSpec};
pub use rough::{rough_data, ROUGHNESS_MARGIN};
pub use snapshot::{load_snapshot, read_snapshot, save_snapshot, write_snapshot};
