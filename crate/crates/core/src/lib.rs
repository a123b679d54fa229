//! Exact arithmetic for binary linear codes and finite-geometry designs.
//!
//! The crate covers bit-packed GF(2) linear algebra ([`gf2`]), projective and
//! affine geometry designs ([`geometry`]), code constructions ([`codes`]),
//! certified low-weight enumeration ([`enumeration`]), Gleason completion of
//! doubly-even self-dual weight enumerators ([`gleason`]) and design and
//! neighbor analysis of minimum-weight codewords ([`analysis`]).

pub mod analysis;
pub mod codes;
pub mod enumeration;
pub mod error;
pub mod format;
pub mod geometry;
pub mod gf2;
pub mod gleason;

pub use codes::LinearCode;
pub use enumeration::{LowWeightReport, WeightDistribution};
pub use error::{Error, Result};
pub use geometry::Design;
pub use gf2::{BitMatrix, BitVector};
