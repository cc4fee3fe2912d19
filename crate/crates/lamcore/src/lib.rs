pub mod ball;
pub mod core_complex;
pub mod decomposition;
pub mod dualtree;
pub mod error;
pub mod lamination;
pub mod mcg;
pub mod mixed;
pub mod overlay;
pub mod rational;
pub mod sample;
pub mod surface;
pub mod walk;

pub use error::{Error, Result};
