//! Exact arithmetic for the dynamics of rational maps on the projective line
//! over Q.
//!
//! Every finite quantity (absolute values, chordal distances, naive and map
//! heights) is carried as a [`LogLinearReal`], a rational combination of
//! logarithms of rationals with decidable sign. Canonical heights are limits
//! and come back as certified [`RealInterval`] enclosures.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod arith;
pub mod error;
pub mod heights;
pub mod interval;
pub mod logreal;
pub mod places;
pub mod poly;
pub mod projpoint;
pub mod ratmap;
pub mod scanner;

mod factor;

pub use error::{Error, Result};
pub use interval::{compare_interval, Comparison, Dyadic, RealInterval, Refine};
pub use logreal::{ExtLogReal, LogLinearReal, Sign};
pub use places::{local_log_abs, padic_valuation, Place, PlaceSet};
pub use poly::{IntPoly, RatPoly};
pub use projpoint::ProjPoint;
pub use ratmap::RationalMap;
