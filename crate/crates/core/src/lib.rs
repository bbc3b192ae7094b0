pub mod cli;
pub mod engine;
pub mod error;
pub mod lfun;
pub mod padic;
pub mod special;

pub use error::{Error, Result};
