pub mod asdcheck;
pub mod error;
pub mod frobchar;
pub mod galois;
pub mod golden;
pub mod ring;
pub mod modforms;
pub mod newform;
pub mod pipeline;
pub mod series;
pub mod surface;

pub use error::{Error, Result};
