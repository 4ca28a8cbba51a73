//! Exact decision procedures for quadratic forms over fields of
//! characteristic not 2.

pub mod cli;
pub mod error;
pub mod ffield;
pub mod fields;
pub mod forms;
pub mod localglobal;
pub mod pfister;
pub mod verify;

pub use error::{Error, Result};
pub use fields::{FieldDesc, FieldElement, SquareClass};
pub use forms::QForm;
