//! Cyclic supercharacters of `Z/nZ` (Gaussian periods): exact modular
//! arithmetic, cyclotomic reduction data, period images with layer labels,
//! the Laurent maps `g_d`/`h_d` on the unit torus, and deterministic
//! rasterization of the resulting point clouds.

pub mod arith;
pub mod asymptotic;
pub mod cli;
pub mod cyclotomic;
mod error;
mod nearest;
pub mod render;
pub mod supercharacter;

pub use error::{Error, Result};
