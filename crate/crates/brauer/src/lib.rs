//! Constructs nonzero and coordinate-dense rational points on systems of
//! homogeneous polynomial equations over finite fields, with every
//! construction emitting a certificate that an independent brute-force
//! oracle replays by evaluation alone.

pub mod budget;
pub mod error;
pub mod field;
pub mod cert;
pub mod cli;
pub mod job;
pub mod linalg;
pub mod normalform;
pub mod oracle;
pub mod ortho;
pub mod poly;
pub mod solver;
pub mod strength;
pub mod text;

pub use error::{Error, Result};
