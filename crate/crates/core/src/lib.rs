pub mod bath;
pub mod cli;
pub mod error;
pub mod interference;
pub mod jump_dynamics;
pub mod quadrature;
pub mod special;
pub mod trajectories;

pub use error::{Error, Result};
