//! Finite categories and the (lax epimorphism, discrete splitting
//! bifibration) factorization, with engines for preorders, groups and
//! frame-enriched categories.

pub mod caps;
pub mod concrete;
pub mod corpus;
pub mod dot;
pub mod error;
pub mod factorize;
pub mod fincat;
pub mod format;
pub mod grp2;
pub mod hunt;
pub mod laxepi;
pub mod orders;
pub mod random;
pub mod selftest;
pub mod splitfib;
pub mod vquant;

pub use caps::Caps;
pub use error::{Error, Result};
pub use fincat::{FinCat, FinFunctor, MorId, NatTrans, ObjId};
