pub mod encoding;
pub mod error;
pub mod harness;
pub mod optimizers;
pub mod rng;
pub mod scenario;
pub mod sysmodel;

pub use error::{Error, Result};
