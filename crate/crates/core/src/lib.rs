#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod capacity;
pub mod channels;
pub mod circuits;
pub mod entropy;
pub mod error;
pub mod optimize;
pub mod states;
pub mod symplectic;

pub use error::{Error, Result};
pub mod cli;
pub mod report;
