pub mod algebra;
pub mod corpus;
pub mod decompose;
pub mod doc;
pub mod error;
pub mod field;
pub mod frobenius;
pub mod gproj;
pub mod graded;
pub mod linalg;
pub mod module;
pub mod zigzag;

pub use error::{Error, Result};
