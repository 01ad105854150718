pub mod adjoint;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod mms;
pub mod model;
pub mod operator;
pub mod optimize;
pub mod state;

pub use error::{Error, ErrorClass, Result};
