//! Dense linear algebra for the certificate solvers.

mod eigen;
mod matrix;
mod projection;
mod simplex;

pub use eigen::{symmetric_eigen, SymmetricEigen};
pub use matrix::Matrix;
pub use projection::{project_psd, project_simplex};
pub use simplex::{LinearProgram, LpOptions, LpOutcome, Relation};
