//! Numerical laboratory for Airy-type coherent states of a free particle:
//! their position and momentum representations, the Galilean operators that
//! act on them, and the experiments that check their characteristic properties.

pub mod error;
pub mod experiments;
pub mod io;
pub mod numerics;
pub mod operators;
pub mod special;
pub mod states;

pub use error::{LabError, Result};
