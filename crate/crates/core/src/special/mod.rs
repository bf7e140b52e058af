//! Special functions.

mod airy;
pub mod dd;

pub use airy::{ai, airy_ai, AiryResult, AIRY_MIN_ARG};
