//! Exact computations in finite classical groups for deciding and certifying
//! whether conjugacy classes, viewed as racks, are of type C, D or F.
//!
//! The layers build on each other: [`gfq`] (finite fields), [`matq`]
//! (matrices and polynomials), [`grp`] (classical groups and their classes),
//! [`rack`] (finite racks), [`detect`] (searches and certificates),
//! [`certify`] (explicit constructions), plus the independent [`weyl`] and
//! [`numtheory`] modules and the [`cli`] front end.

pub mod certify;
pub mod cli;
pub mod error;
pub mod detect;
pub mod gfq;
pub mod grp;
pub mod matq;
pub mod numtheory;
pub mod rack;
pub mod weyl;

pub use error::{Error, Result};
