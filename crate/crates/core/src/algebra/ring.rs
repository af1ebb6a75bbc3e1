use std::fmt::Debug;

use crate::algebra::cuntz::{CuntzAlgebra, CuntzElement};
use crate::algebra::scalar::ExactScalar;
use crate::error::{Error, Result};

/// A unital `*`-ring whose elements know their own context (alphabet size,
/// matrix dimension, comparison tolerance).
///
/// Operations are fallible because symbolic arithmetic can run out of
/// expansion budget and mixing contexts is an error.
pub trait StarRing: Clone + Debug + Sized {
    type Context: Copy + Debug;

    fn context(&self) -> Self::Context;
    fn zero_in(ctx: Self::Context) -> Self;
    fn one_in(ctx: Self::Context) -> Self;
    fn scalar_in(ctx: Self::Context, c: &ExactScalar) -> Self;

    fn add(&self, other: &Self) -> Result<Self>;
    fn sub(&self, other: &Self) -> Result<Self>;
    fn mul(&self, other: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
    fn scale(&self, c: &ExactScalar) -> Self;
    fn adjoint(&self) -> Self;
    fn equals(&self, other: &Self) -> Result<bool>;

    /// `(1 + a a*)^{-1}`, the kernel of a Dye projection with parameter `a`.
    fn dye_kernel(&self) -> Result<Self>;

    fn zero_like(&self) -> Self {
        Self::zero_in(self.context())
    }

    fn one_like(&self) -> Self {
        Self::one_in(self.context())
    }

    fn is_zero(&self) -> Result<bool> {
        self.equals(&self.zero_like())
    }
}

impl StarRing for CuntzElement {
    type Context = CuntzAlgebra;

    fn context(&self) -> CuntzAlgebra {
        self.algebra()
    }
    fn zero_in(ctx: CuntzAlgebra) -> Self {
        ctx.zero()
    }
    fn one_in(ctx: CuntzAlgebra) -> Self {
        ctx.one()
    }
    fn scalar_in(ctx: CuntzAlgebra, c: &ExactScalar) -> Self {
        ctx.scalar(c.clone())
    }
    fn add(&self, other: &Self) -> Result<Self> {
        CuntzElement::add(self, other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        CuntzElement::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        CuntzElement::mul(self, other)
    }
    fn neg(&self) -> Self {
        CuntzElement::neg(self)
    }
    fn scale(&self, c: &ExactScalar) -> Self {
        CuntzElement::scale(self, c)
    }
    fn adjoint(&self) -> Self {
        CuntzElement::adjoint(self)
    }
    fn equals(&self, other: &Self) -> Result<bool> {
        CuntzElement::equals(self, other)
    }
    fn is_zero(&self) -> Result<bool> {
        Ok(CuntzElement::is_zero(self))
    }

    /// Only scalar kernels are supported: `a a* = λ·1` gives `(1+λ)^{-1}·1`.
    fn dye_kernel(&self) -> Result<Self> {
        let lambda = self
            .mul(&self.adjoint())?
            .as_scalar()
            .ok_or(Error::NonScalarKernel)?;
        let denom = &ExactScalar::one() + &lambda;
        let inv = denom.inv().map_err(|_| Error::SingularKernel)?;
        Ok(self.algebra().scalar(inv))
    }
}
