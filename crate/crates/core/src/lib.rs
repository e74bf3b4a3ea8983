//! Classification of orientation-preserving actions of `G = (Z/p^k)^m` on
//! closed oriented surfaces.
//!
//! Actions are modelled by their monodromy on the first homology of the
//! quotient surface together with branch data. From that the crate
//! computes the induced alternating form, its q-tuple and the
//! characteristic function, decides strong and weak equivalence, realizes
//! admissible invariants, and cross-checks everything against brute-force
//! orbit computations at small parameters.

pub mod action;
pub mod classify;
pub mod cli;
pub mod error;
pub mod matmod;
pub mod oracle;
pub mod residue;
pub mod symform;

pub use action::{ActionDescriptor, CharFunction, GFree, StrongInvariant, WeakInvariant};
pub use classify::{EquivalenceVerdict, Mismatch, Mode, WeakSearch};
pub use error::{Error, Result};
pub use matmod::{MatZ, SmithDecomposition};
pub use residue::{Modulus, Residue};
pub use symform::{AlternatingForm, NormalForm, QTuple};
