//! Exact computer algebra for the combinatorial knot DGA of braid closures.

pub mod abelian;
pub mod augment;
pub mod augpoly;
pub mod braid;
pub mod coeff;
pub mod commpoly;
pub mod dga;
pub mod linhom;
pub mod error;
pub mod evaluate;
pub mod groebner;
pub mod matrix;
pub mod phi;
pub mod ncpoly;
pub mod ring;
pub mod snf;

pub use error::{Error, Result};
