pub mod cli;
pub mod dispersion;
pub mod error;
pub mod factor;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod solution;
pub mod specfun;
pub mod spectrum;

pub use error::{Result, SkinError};
