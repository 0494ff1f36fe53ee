//! CRC-aided polar codes with partitioned successive-cancellation list
//! flip (PSCLF) decoding, partition/CRC design tooling, an analytic
//! execution-time model for semi-parallel decoders, and a seeded Monte
//! Carlo simulation harness.

pub mod channel;
pub mod crc;
pub mod design;
pub mod error;
pub mod flip;
pub mod latency;
pub mod polar;
pub mod scl;
pub mod sim;

pub use error::{Error, Result};
