#![no_std]

extern crate alloc;

pub mod artinian;
pub mod complexes;
pub mod error;
pub mod filtration;
pub mod linalg;
pub mod oracle;
pub mod ring;
pub mod theorems;

pub use error::{Error, ParseErrorKind, Result};
