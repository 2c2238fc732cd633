//! Exact computational algebra for relatively minimal subgroups: the
//! Cayley-Dickson tower over ℚ, Euclidean and p-adic absolute values,
//! generalized Heisenberg groups, unitriangular matrix groups, and the
//! witness constructions used in minimality arguments.

pub mod absolute;
pub mod cayley_dickson;
pub mod error;
pub mod heisenberg;
pub mod par;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod unitriangular;
pub mod verify;
pub mod witness;

pub use cayley_dickson::CdElement;
pub use error::{Error, Result};
pub use heisenberg::{HeisenbergElement, HeisenbergGroup, InnerProduct, Pairing};
pub use par::Strategy;
pub use scalar::Rational;
pub use unitriangular::UniTriMatrix;
pub use verify::{run_verify, Report, Suite, VerifyConfig};
