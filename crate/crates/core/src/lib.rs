//! Vacuum squeezing from polarization self-rotation in atomic media.
//!
//! The crate is `no_std` with `alloc`. File formats, configuration and the
//! command-line front end live in the `srsqueeze` crate.

#![no_std]

extern crate alloc;

pub mod angular;
pub mod constants;
pub mod dline;
pub mod dm;
pub mod error;
pub mod field;
pub mod flags;
pub mod media;
pub mod optimize;
pub mod quadrature;
pub mod sweep;
pub mod transitions;

pub use error::{Error, Result};
pub use flags::ValidityFlags;
