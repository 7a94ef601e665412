//! Abelian Chern–Simons expectation values of Wilson lines on framed,
//! coloured links in S³ and in 3-manifolds obtained from S³ by integer
//! surgery.
//!
//! All values are exact elements of a cyclotomic field `Q(ζ_n)`.

pub mod cyclotomic;
pub mod diagram;
pub mod error;
pub mod invariants;
pub mod io;
pub mod link;
pub mod manifolds;
pub mod random;
pub mod suites;
pub mod surgery;

pub use cyclotomic::{cyclotomic_polynomial, CycNum, IntPoly};
pub use diagram::{parse_crossings, parse_pd, Diagram, Framing};
pub use error::{Error, Result};
pub use invariants::{s3_expectation, CouplingLevel, Invariant, PhaseExponent};
pub use link::{FramedLink, Role, RoleFilter, Warning};
pub use manifolds::{s1xs2_expectation, s1xsigma_expectation, HomologyData};
pub use surgery::{surgery_expectation, KirbyMove, SurgeryPresentation};
