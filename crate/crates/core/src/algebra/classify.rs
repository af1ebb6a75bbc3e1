use serde::Serialize;

use crate::algebra::ring::StarRing;
use crate::error::Result;

/// Which of the basic operator identities an element satisfies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub self_adjoint: bool,
    pub projection: bool,
    /// `x* x = 1`
    pub isometry: bool,
    /// `x x* = 1`
    pub co_isometry: bool,
    pub unitary: bool,
    pub involution: bool,
}

impl Classification {
    /// Names of the flags that are set, in a fixed order.
    pub fn flags(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (set, name) in [
            (self.self_adjoint, "self-adjoint"),
            (self.projection, "projection"),
            (self.isometry, "isometry"),
            (self.co_isometry, "co-isometry"),
            (self.unitary, "unitary"),
            (self.involution, "involution"),
        ] {
            if set {
                out.push(name);
            }
        }
        out
    }
}

pub fn classify<R: StarRing>(x: &R) -> Result<Classification> {
    let star = x.adjoint();
    let one = x.one_like();
    let self_adjoint = star.equals(x)?;
    let projection = self_adjoint && x.mul(x)?.equals(x)?;
    let isometry = star.mul(x)?.equals(&one)?;
    let co_isometry = x.mul(&star)?.equals(&one)?;
    let unitary = isometry && co_isometry;
    Ok(Classification {
        self_adjoint,
        projection,
        isometry,
        co_isometry,
        unitary,
        involution: self_adjoint && unitary,
    })
}

pub fn is_projection<R: StarRing>(x: &R) -> Result<bool> {
    Ok(x.adjoint().equals(x)? && x.mul(x)?.equals(x)?)
}

pub fn is_unitary<R: StarRing>(x: &R) -> Result<bool> {
    let one = x.one_like();
    let star = x.adjoint();
    Ok(x.mul(&star)?.equals(&one)? && star.mul(x)?.equals(&one)?)
}

pub fn is_involution<R: StarRing>(x: &R) -> Result<bool> {
    Ok(x.adjoint().equals(x)? && x.mul(x)?.equals(&x.one_like())?)
}
