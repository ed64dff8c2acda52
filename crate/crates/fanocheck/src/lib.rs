//! Exact verification toolkit for Fano 3-fold weighted hypersurfaces.
//!
//! The crate re-establishes, by exact symbolic computation over prime
//! fields, the combinatorial backbone of the classification of the 130
//! families of quasi-smooth Fano 3-fold weighted hypersurfaces:
//!
//! * weighted projective space combinatorics ([`wps`]),
//! * sparse polynomial arithmetic over `F_p` with exact determinants
//!   of small polynomial matrices ([`poly`]),
//! * the Jacobian-minor certificate conditions and their searches and
//!   shortcut rules ([`conditions`]),
//! * purely arithmetic genericity checks, the Fano index and the
//!   rationality criterion ([`genericity`]),
//! * the vendored database of all 130 families with their embedded
//!   witness certificates ([`db`]),
//! * family-level verification drivers producing machine-readable
//!   reports ([`verify`]), and a pointwise rank oracle over small
//!   extension fields ([`oracle`]).
//!
//! All operations are pure functions on immutable values and safe to
//! call concurrently.

pub mod conditions;
pub mod db;
pub mod genericity;
pub mod oracle;
pub mod poly;
pub mod verify;
pub mod wps;

pub use conditions::{CertKind, ConditionVerdict, WitnessCertificate};

pub use poly::{PolyMatrix, SparsePoly};

pub use wps::{Monomial, Stratum, WeightSystem};
