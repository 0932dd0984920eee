//! Class-number-one imaginary quadratic fields: ideals, ray classes, Hecke
//! characters, their p-adic avatars and the local factors of the
//! interpolation formula.

pub mod avatar;
pub mod character;
pub mod field;
pub mod ideal;
pub mod ray;

pub use character::{chi_fin, euler_factor, local_factor, CharComponent, HeckeCharacter, LocalFactor};
pub use field::{Elem, ImagQuadField};
pub use ideal::{primes_above, splitting, Ideal, PrimeIdeal, Splitting};
pub use ray::{RayClassData, UnitsMode};
pub use avatar::PadicEmbedding;
