//! Bit-exact serialization.

pub mod graph6;
pub mod level;
pub mod report;
