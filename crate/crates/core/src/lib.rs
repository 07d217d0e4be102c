//! Two-variable Bernstein–Szegő orthogonal polynomials.

pub mod error;
pub mod examples;
pub mod lex;
pub mod oracle;
pub mod poly;
pub mod recurrence;
pub mod roots;
pub mod szego;
pub mod system;
pub mod total;
pub mod weights;

pub use error::{Error, Result};
pub use poly::{Basis1, Basis2, BivariatePoly, LaurentPoly, Ordering2, UnivariatePoly};
pub use weights::{GenericH, ProductOmega, StabilityReport, WeightSpec};
pub use system::{OrthoEntry, OrthoSystem, Source, Window};
pub use oracle::{MomentKind, MomentOracle, MomentTable, DEFAULT_TOL};
pub use recurrence::{BlockRecurrence, LexBlocks, StructureReport, TotalBlocks};
pub use examples::{run_regression, verify_weight, ExampleId, Report};
