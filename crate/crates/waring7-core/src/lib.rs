#![cfg_attr(not(test), no_std)]

//! Length-six and length-seven power-sum decompositions of ternary quartic
//! forms over complex floating-point scalars.
//!
//! The pipeline: pick a frame of three independent dual linear forms, split
//! off a fourth-power correction so the remaining quartic is annihilated by
//! the frame's triple-product operator, transport dual quadrics around the
//! three binary restrictions with the maps built in [`theta`], and read the
//! six power directions off the roots at a fixed point of the composed map.
//!
//! - [`poly`]: dense homogeneous forms, the apolarity action, relative
//!   antiderivatives.
//! - [`linalg`]: small dense complex matrices (solve, SVD, nullspace).
//! - [`binary`]: frames, binary restrictions, the quadric-to-cubic
//!   correspondence and root extraction.
//! - [`theta`]: the projective-line maps and their fixed points.
//! - [`decompose`]: the six- and seven-term constructions with verification
//!   and frame probing.
//! - [`experiments`]: form generators, special-case experiment suite,
//!   incidence checks.

extern crate alloc;

pub mod binary;
pub mod decompose;
pub mod experiments;
pub mod linalg;
pub mod poly;
pub mod theta;

pub use poly::{HomogeneousForm, LinearForm, Scalar, Side};

/// The two numeric knobs shared across the pipeline.
///
/// Both are scale-relative: a quantity counts as zero when its magnitude is
/// below `zero` times the natural scale of its inputs, and a reconstruction
/// is accepted when its relative residual is below `verify`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative threshold under which a quantity is treated as zero.
    pub zero: f64,
    /// Relative residual accepted when verifying a reconstruction.
    pub verify: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zero: 1e-9,
            verify: 1e-8,
        }
    }
}

impl Tolerances {
    pub const fn new(zero: f64, verify: f64) -> Self {
        Tolerances { zero, verify }
    }

    /// Default tolerances with the verification knob replaced.
    pub fn with_verify(verify: f64) -> Self {
        Tolerances {
            verify,
            ..Tolerances::default()
        }
    }
}
