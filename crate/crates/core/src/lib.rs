pub mod arith;
pub mod classify;
pub mod decompose;
pub mod eigen;
pub mod error;
pub mod field;
pub mod fqlin;
pub mod lift;
pub mod matrix;
pub mod module;
pub mod norm;
pub mod rb;
pub mod series;

pub use error::{Error, Result};
pub use field::{FFElem, FieldConfig, GaloisField};
pub use series::LaurentSeries;
