//! Exact computations with elementary generators of linear, symplectic and
//! orthogonal groups over commutative rings: word evaluation, commutator
//! calculus, dilation of localized factorizations, local-global patching and
//! diagonal reduction over local rings.

pub mod cli;
pub mod commcalc;
pub mod error;
pub mod lgp;
pub mod matform;
pub mod rings;
pub mod transvect;

pub use error::{Error, Result};
pub use matform::{FormKind, Mat, Word};
pub use rings::{Elem, MultSet, Ring, RingSpec};
