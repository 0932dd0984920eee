#![no_std]
extern crate alloc;

pub mod error;
pub mod eisenstein;
pub mod fourier;
pub mod hecke_field;
pub mod interpolation;
pub mod cyclo;
pub mod padic;

pub use error::{Error, Result};
pub use padic::{PadicField, PadicNumber};
