pub mod closed;
pub mod display;
pub mod error;
pub mod expr;
pub mod hyperize;
pub mod integrate;
pub mod hypseries;
pub mod jets;
pub mod multivar;
pub mod numkernel;
pub mod oracle;
pub mod transforms;

pub use error::{Error, Result};
pub use hypseries::PFQSpec;
pub use jets::Jet;
