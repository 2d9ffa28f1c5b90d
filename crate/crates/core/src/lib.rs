//! Construction and verification of 4-equivalenced association schemes.

pub mod cli;
pub mod coherence;
pub mod designs;
pub mod fission;
pub mod groups;
pub mod io;
pub mod planes;
pub mod products;
pub mod report;
pub mod scheme;

pub use scheme::{Color, IntersectionTensor, Point, Scheme, SchemeError};
