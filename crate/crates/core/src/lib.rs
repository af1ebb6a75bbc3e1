//! Exact symbolic computation with Dye projections `P_{i,j}(a)` over the
//! Cuntz algebras `𝒪ₙ`, plus a machine-precision backend for `𝕄ₙ(ℂ)`.

pub mod algebra;
pub mod dsl;
pub mod error;
pub mod factor;
pub mod iso;
pub mod ktheory;
pub mod matalg;
pub mod numeric;
pub mod samples;
pub mod serial;
pub mod suite;

pub use error::{Error, Result};
