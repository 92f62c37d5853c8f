//! Exact computations in the Prüfer 2-group Z(2^∞).
//!
//! * [`element`]: reduced fractions `a/p^n mod 1`, orders, torsion levels.
//! * [`canonical`]: the `{-1, 0, 1, 2}` canonical form and the order lower
//!   bounds derived from it.
//! * [`tsequence`]: truncated Zelenyuk–Protasov sets `A(l, m)` and torsion
//!   intersection checks.
//! * [`construction`]: the sequences `b_k` and `d_k` for a target `x`, and
//!   the window certificate bundle.
//! * [`duality`]: characters, convergence classification and the von Neumann
//!   radical on finite levels.
//! * [`verify`]: the acceptance checks, shared by the test suite and the CLI.

pub mod canonical;
pub mod construction;
pub mod duality;
pub mod element;
pub mod error;
pub mod tsequence;
pub mod verify;

pub use canonical::{canonicalize, canonicalize_combination, CanonicalForm, SupportReport};
pub use construction::{RadicalTarget, SequenceKind, SequenceSpec};
pub use duality::{Character, CircleValue, Dyadic, RadicalReport};
pub use element::{eval_combination, torsion_level, Combination, Element, OrderValue, Sequence, Term};
pub use error::{Error, Result};
pub use tsequence::{IntersectionReport, WindowParams};
