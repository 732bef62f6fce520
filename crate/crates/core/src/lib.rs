pub mod analysis;
pub mod channels;
pub mod error;
pub mod matcore;
pub mod reconstruct;

pub use error::{Result, StrobeError};
