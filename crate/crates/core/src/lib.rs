//! Executable Schwarz and Schwarz-Pick bounds for holomorphic and
//! pluriharmonic maps between unit balls of finite-dimensional normed spaces.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`.

pub mod error;
pub mod linalg;
pub mod mappings;
pub mod oracles;
pub mod scalar;
pub mod spaces;
pub mod symmetric;
pub mod theorems;

pub use error::{Error, Result};
pub use scalar::{Real, C};

pub type C64 = C<f64>;
pub type Space64 = spaces::Space<f64>;
pub type CMat64 = linalg::CMat<f64>;
pub type PluriharmonicMap64 = mappings::PluriharmonicMap<f64>;
pub type SliceMap64 = mappings::SliceMap<f64>;
pub type Instance64 = theorems::Instance<f64>;
