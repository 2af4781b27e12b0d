pub mod error;
pub mod dissociation;
pub mod galois;
pub mod oracle;
pub mod par;
pub mod permgroup;
pub mod presets;
pub mod towers;

pub use error::{Error, Result};
