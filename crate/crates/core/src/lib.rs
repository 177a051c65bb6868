//! Exact commutative algebra for coordinate rings of line arrangements in
//! projective space: Gröbner bases, Hilbert functions and series, graded
//! Betti numbers, and checks of the Koszul property.

pub mod arrangements;
pub mod betti;
pub mod error;
pub mod exactnum;
pub mod hilbert;
pub mod ideal_ops;
pub mod koszul;
pub mod multipoly;

pub use error::{Error, Result};
