//! Gröbner–Shirshov bases for free Lie superalgebras and HNN-extensions of
//! Lie superalgebras.

pub mod cli;
pub mod error;
pub mod gsb;
pub mod liepoly;
pub mod lyndon;
pub mod superalg;
pub mod words;

pub use error::{Error, Result};
