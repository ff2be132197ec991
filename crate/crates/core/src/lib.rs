//! The non-symmetric operad `L` of Lie bracket words.
//!
//! `L(n)` is the set of bracket words on `x1..xn` whose every bracket has its
//! smallest index on the left and its largest on the right. It spans the Lie
//! operad as a basis, it is a free operad on its prime words, and the prime
//! counts satisfy exact generating-series identities. This crate builds all of
//! these objects and checks the identities with exact arithmetic.

pub mod chord;
pub mod density;
pub mod enumerate;
pub mod error;
pub mod expr;
pub mod free;
pub mod golden;
pub mod lie;
pub mod par;
pub mod random;
pub mod series;
pub mod sif;
pub mod verify;

pub use error::{Error, Result};
pub use expr::{compose, is_connected, is_in_l, is_prime, parse, Expr, IndexSpan};
pub use par::Exec;
