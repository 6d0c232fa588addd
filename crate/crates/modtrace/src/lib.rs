pub mod braid;
pub mod cli;
pub mod cyclo;
pub mod diagram;
pub mod error;
pub mod matrix;
mod modp;
pub mod moncat;
pub mod mtrace;
pub mod rootsys;
pub mod uqsl2;
pub mod verify;

pub use cyclo::{CycNumber, Rational};
pub use error::{Error, Result};
