//! Exact scalars, Cuntz elements, and the `*`-ring predicates built on them.

pub mod classify;
pub mod cuntz;
pub mod ring;
pub mod scalar;

pub use classify::{classify, is_involution, is_projection, is_unitary, Classification};
pub use cuntz::{words_of_length, CuntzAlgebra, CuntzElement, Word, DEFAULT_BUDGET};
pub use ring::StarRing;
pub use scalar::{ExactScalar, Gaussian};
