//! Exact and interval arithmetic for representations of integers by
//! quaternary diagonal quadratic forms with almost-prime variables.
//!
//! The crate covers elementary arithmetic and explicit constants, quadratic
//! form enumeration, Gauss sums, local densities, the vector sieve, the
//! analytic error bounds and universality checks over a catalogue of forms.

pub mod arith;
pub mod bounds;
pub mod density;
pub mod error;
pub mod gauss;
pub mod interval;
pub mod qform;
pub mod sieve;
pub mod universality;

pub use error::{Error, Result};
pub use interval::{RationalInterval, Q};
