//! The isomorphisms `𝕄_k(𝒪ₙ) ≅ 𝒪ₙ` induced by a family of isometries with
//! orthogonal ranges summing to 1, the corner maps `η₁`/`ζ`, `Δ_v(x) = v* x v`,
//! and the splitting of `v* v` into equivalent orthogonal pieces.

use crate::algebra::classify::is_projection;
use crate::algebra::{CuntzAlgebra, CuntzElement, Word};
use crate::error::{Error, Result};
use crate::matalg::{MatrixUnitSystem, StarMatrix};

pub type CuntzMatrix = StarMatrix<CuntzElement>;

/// Isometries `t₁..t_k` with `t_i* t_j = δ_{ij}` and `Σ t_i t_i* = 1`.
///
/// The standard frame is `s₁..sₙ`. Other sizes come from complete prefix
/// codes, e.g. `(s₁, s₂s₁, s₂s₂)` in `𝒪₂`.
#[derive(Clone, Debug)]
pub struct Frame {
    alg: CuntzAlgebra,
    isometries: Vec<CuntzElement>,
}

impl Frame {
    /// Checks the frame relations exactly.
    pub fn new(alg: CuntzAlgebra, isometries: Vec<CuntzElement>) -> Result<Self> {
        if isometries.is_empty() {
            return Err(Error::InvalidFrame("no isometries".into()));
        }
        let mut sum = alg.zero();
        for (a, t) in isometries.iter().enumerate() {
            for (b, u) in isometries.iter().enumerate() {
                let expected = if a == b { alg.one() } else { alg.zero() };
                if !t.adjoint().mul(u)?.equals(&expected)? {
                    return Err(Error::InvalidFrame(format!(
                        "t{}* t{} is not {}",
                        a + 1,
                        b + 1,
                        if a == b { 1 } else { 0 }
                    )));
                }
            }
            sum = sum.add(&t.mul(&t.adjoint())?)?;
        }
        if !sum.equals(&alg.one())? {
            return Err(Error::InvalidFrame("ranges do not sum to 1".into()));
        }
        Ok(Frame { alg, isometries })
    }

    pub fn standard(alg: CuntzAlgebra) -> Self {
        let isometries = (1..=alg.n() as usize)
            .map(|i| alg.generator(i).expect("letter in range"))
            .collect();
        Frame { alg, isometries }
    }

    /// `s_{w₁}, …, s_{w_k}` for a complete prefix code `w₁..w_k`.
    pub fn from_words(alg: CuntzAlgebra, words: &[Word]) -> Result<Self> {
        let isometries = words
            .iter()
            .map(|w| alg.monomial(w.letters(), &[], crate::algebra::ExactScalar::one()))
            .collect::<Result<Vec<_>>>()?;
        Frame::new(alg, isometries)
    }

    /// A frame of `size` isometries, obtained by repeatedly splitting the last
    /// word of the code `(ε)`. Sizes `1 + t(n − 1)` are reachable.
    pub fn of_size(alg: CuntzAlgebra, size: usize) -> Result<Self> {
        let n = alg.n();
        if size == n as usize {
            return Ok(Frame::standard(alg));
        }
        let mut words = vec![Word::empty()];
        while words.len() < size {
            let last = words.pop().expect("non-empty code");
            words.extend((1..=n).map(|l| last.concat(&[l])));
        }
        if words.len() != size {
            return Err(Error::InvalidFrame(format!(
                "no prefix code of size {size} over {n} letters"
            )));
        }
        Frame::from_words(alg, &words)
    }

    pub fn algebra(&self) -> CuntzAlgebra {
        self.alg
    }

    pub fn size(&self) -> usize {
        self.isometries.len()
    }

    /// `t_i`, 1-based.
    pub fn isometry(&self, i: usize) -> &CuntzElement {
        &self.isometries[i - 1]
    }

    /// `t_i t_j*`.
    pub fn unit(&self, i: usize, j: usize) -> Result<CuntzElement> {
        self.isometry(i).mul(&self.isometry(j).adjoint())
    }

    pub fn units(&self) -> Result<MatrixUnitSystem<CuntzElement>> {
        MatrixUnitSystem::from_fn(self.size(), |i, j| self.unit(i, j))
    }

    fn check_dim(&self, m: &CuntzMatrix) -> Result<()> {
        if m.dim() != self.size() {
            return Err(Error::DimensionMismatch {
                left: self.size(),
                right: m.dim(),
            });
        }
        if m.inner_context().n() != self.alg.n() {
            return Err(Error::AlphabetMismatch {
                left: self.alg.n(),
                right: m.inner_context().n(),
            });
        }
        Ok(())
    }

    /// `η(a) = Σ t_i a_{i,j} t_j*`.
    pub fn eta(&self, m: &CuntzMatrix) -> Result<CuntzElement> {
        self.check_dim(m)?;
        let k = self.size();
        let mut acc = self.alg.with_budget(m.inner_context().budget()).zero();
        for i in 1..=k {
            for j in 1..=k {
                let a = m.entry(i, j);
                if a.is_zero() {
                    continue;
                }
                let term = self.isometry(i).mul(a)?.mul(&self.isometry(j).adjoint())?;
                acc = acc.add(&term)?;
            }
        }
        Ok(acc)
    }

    /// `η⁻¹(x) = (t_i* x t_j)_{i,j}`.
    pub fn eta_inv(&self, x: &CuntzElement) -> Result<CuntzMatrix> {
        let k = self.size();
        let mut entries = Vec::with_capacity(k * k);
        for i in 1..=k {
            let left = self.isometry(i).adjoint().mul(x)?;
            for j in 1..=k {
                entries.push(left.mul(self.isometry(j))?);
            }
        }
        StarMatrix::from_entries(k, entries)
    }

    /// `η₁(a) = Σ e_{i,1} a_{i,j} e_{1,j}` for a `k × k` matrix over the
    /// corner `e₁₁ 𝒪ₙ e₁₁`, landing in `r_k 𝒪ₙ r_k` with `r_k = Σ_{i≤k} e_{i,i}`.
    pub fn eta1(&self, m: &CuntzMatrix) -> Result<CuntzElement> {
        let k = m.dim();
        if k > self.size() {
            return Err(Error::DimensionMismatch {
                left: self.size(),
                right: k,
            });
        }
        let e11 = self.unit(1, 1)?;
        let mut acc = self.alg.zero();
        for i in 1..=k {
            let ei1 = self.unit(i, 1)?;
            for j in 1..=k {
                let a = m.entry(i, j);
                if !e11.mul(a)?.mul(&e11)?.equals(a)? {
                    return Err(Error::NotInCorner { i, j });
                }
                if a.is_zero() {
                    continue;
                }
                acc = acc.add(&ei1.mul(a)?.mul(&self.unit(1, j)?)?)?;
            }
        }
        Ok(acc)
    }

    /// `r_k = Σ_{i≤k} e_{i,i}`.
    pub fn reduced_unit(&self, k: usize) -> Result<CuntzElement> {
        let mut acc = self.alg.zero();
        for i in 1..=k {
            acc = acc.add(&self.unit(i, i)?)?;
        }
        Ok(acc)
    }

    /// `ζ(x) = (e_{1,i} x e_{j,1})_{i,j}` for `x ∈ r_k 𝒪ₙ r_k`.
    pub fn zeta(&self, x: &CuntzElement, k: usize) -> Result<CuntzMatrix> {
        if k == 0 || k > self.size() {
            return Err(Error::DimensionMismatch {
                left: self.size(),
                right: k,
            });
        }
        let r = self.reduced_unit(k)?;
        if !r.mul(x)?.mul(&r)?.equals(x)? {
            return Err(Error::NotInReducedAlgebra);
        }
        let mut entries = Vec::with_capacity(k * k);
        for i in 1..=k {
            let left = self.unit(1, i)?.mul(x)?;
            for j in 1..=k {
                entries.push(left.mul(&self.unit(j, 1)?)?);
            }
        }
        StarMatrix::from_entries(k, entries)
    }
}

/// The standard matrix units `e_{i,j} = s_i s_j*` of `𝒪ₙ`.
pub fn cuntz_units(alg: CuntzAlgebra) -> Result<MatrixUnitSystem<CuntzElement>> {
    Frame::standard(alg).units()
}

pub fn eta(m: &CuntzMatrix) -> Result<CuntzElement> {
    Frame::standard(m.inner_context()).eta(m)
}

pub fn eta_inv(x: &CuntzElement) -> Result<CuntzMatrix> {
    Frame::standard(x.algebra()).eta_inv(x)
}

fn require_co_isometry(v: &CuntzElement) -> Result<()> {
    if !v.mul(&v.adjoint())?.equals(&v.algebra().one())? {
        return Err(Error::NotCoIsometry);
    }
    Ok(())
}

/// `Δ_v(x) = v* x v` for `v v* = 1`.
pub fn corner_iso(v: &CuntzElement, x: &CuntzElement) -> Result<CuntzElement> {
    require_co_isometry(v)?;
    v.adjoint().mul(x)?.mul(v)
}

/// `p = v* v` split as `p_i = v* e_{i,i} v`.
#[derive(Clone, Debug)]
pub struct ProjectionDecomposition {
    pub projection: CuntzElement,
    pub parts: Vec<CuntzElement>,
}

/// Splits `v* v` along the frame's diagonal units and verifies that the
/// pieces are pairwise orthogonal projections summing to `v* v`.
pub fn decompose_projection(v: &CuntzElement, frame: &Frame) -> Result<ProjectionDecomposition> {
    require_co_isometry(v)?;
    let star = v.adjoint();
    let projection = star.mul(v)?;
    let parts = (1..=frame.size())
        .map(|i| star.mul(&frame.unit(i, i)?)?.mul(v))
        .collect::<Result<Vec<_>>>()?;
    let mut sum = v.algebra().zero();
    for (a, p) in parts.iter().enumerate() {
        if !is_projection(p)? {
            return Err(Error::VerificationFailed(format!(
                "part {} is not a projection",
                a + 1
            )));
        }
        for (b, q) in parts.iter().enumerate().skip(a + 1) {
            if !p.mul(q)?.is_zero() {
                return Err(Error::NotOrthogonal {
                    first: a + 1,
                    second: b + 1,
                });
            }
        }
        sum = sum.add(p)?;
    }
    if !sum.equals(&projection)? {
        return Err(Error::VerificationFailed("parts do not sum to v*v".into()));
    }
    Ok(ProjectionDecomposition { projection, parts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ExactScalar;
    use crate::matalg::{dye, validate_matrix_units};

    fn o(n: usize) -> CuntzAlgebra {
        CuntzAlgebra::new(n).unwrap()
    }

    fn q(p: i64, d: i64) -> ExactScalar {
        ExactScalar::rational(p, d)
    }

    #[test]
    fn eta_of_identity_and_units() {
        let a = o(3);
        assert!(eta(&StarMatrix::identity(3, a))
            .unwrap()
            .equals(&a.one())
            .unwrap());
        let e = StarMatrix::unit(2, 3, 3, a).unwrap();
        assert!(eta(&e).unwrap().equals(&a.unit(2, 3).unwrap()).unwrap());
        assert!(matches!(
            eta(&StarMatrix::identity(2, a)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn eta_of_dye_projection() {
        let a = o(2);
        let alpha = a.unit(1, 2).unwrap().add(&a.unit(2, 1).unwrap()).unwrap();
        let p = dye(1, 2, &alpha.neg(), 2).unwrap();
        let x = eta(&p).unwrap();
        let s1 = a.generator(1).unwrap();
        let s2 = a.generator(2).unwrap();
        let half = a.scalar(q(1, 2));
        let expected = s1
            .mul(&half)
            .unwrap()
            .mul(&s1.adjoint())
            .unwrap()
            .sub(
                &s1.mul(&alpha.scale(&q(1, 2)))
                    .unwrap()
                    .mul(&s2.adjoint())
                    .unwrap(),
            )
            .unwrap()
            .sub(
                &s2.mul(&alpha.adjoint().scale(&q(1, 2)))
                    .unwrap()
                    .mul(&s1.adjoint())
                    .unwrap(),
            )
            .unwrap()
            .add(
                &s2.mul(&alpha.adjoint().mul(&half).unwrap().mul(&alpha).unwrap())
                    .unwrap()
                    .mul(&s2.adjoint())
                    .unwrap(),
            )
            .unwrap();
        assert!(x.equals(&expected).unwrap());
    }

    #[test]
    fn eta_inv_examples() {
        let a = o(2);
        let m = eta_inv(&a.one()).unwrap();
        assert!(m.equals(&StarMatrix::identity(2, a)).unwrap());
        let m = eta_inv(&a.unit(1, 2).unwrap()).unwrap();
        assert!(m.equals(&StarMatrix::unit(1, 2, 2, a).unwrap()).unwrap());
    }

    #[test]
    fn frames_of_other_sizes() {
        let a = o(2);
        let f = Frame::of_size(a, 3).unwrap();
        assert_eq!(f.size(), 3);
        assert!(validate_matrix_units(&f.units().unwrap()).all_pass());
        let m = StarMatrix::unit(1, 3, 3, a).unwrap();
        let back = f.eta_inv(&f.eta(&m).unwrap()).unwrap();
        assert!(back.equals(&m).unwrap());
        assert!(Frame::of_size(o(3), 4).is_err());
        assert!(Frame::of_size(o(3), 5).is_ok());
        let bad = vec![a.generator(1).unwrap(), a.generator(1).unwrap()];
        assert!(matches!(Frame::new(a, bad), Err(Error::InvalidFrame(_))));
    }

    #[test]
    fn corner_maps() {
        let a = o(3);
        let f = Frame::standard(a);
        let e11 = a.unit(1, 1).unwrap();
        let diag = StarMatrix::diagonal(vec![e11.clone(), e11.clone(), e11.clone()]).unwrap();
        assert!(f.eta1(&diag).unwrap().equals(&a.one()).unwrap());
        let two = StarMatrix::diagonal(vec![e11.clone(), e11.clone()]).unwrap();
        assert!(f
            .eta1(&two)
            .unwrap()
            .equals(&f.reduced_unit(2).unwrap())
            .unwrap());

        let z = f.zeta(&e11, 3).unwrap();
        assert!(z
            .equals(&StarMatrix::placed(e11.clone(), 1, 1, 3).unwrap())
            .unwrap());

        // e11 s1 e11 = s1 s1 s1* lies in the corner.
        let c = a.monomial(&[1, 1], &[1], ExactScalar::one()).unwrap();
        let m = StarMatrix::placed(c, 1, 2, 3)
            .unwrap()
            .with_entry(3, 3, e11.clone())
            .unwrap();
        let back = f.zeta(&f.eta1(&m).unwrap(), 3).unwrap();
        assert!(back.equals(&m).unwrap());
        assert!(matches!(
            f.eta1(&StarMatrix::identity(2, a)),
            Err(Error::NotInCorner { i: 1, j: 1 })
        ));
        assert_eq!(f.zeta(&a.one(), 2).unwrap_err(), Error::NotInReducedAlgebra);
    }

    #[test]
    fn delta_examples() {
        let a = o(2);
        let v = a.generator(1).unwrap().adjoint();
        assert!(corner_iso(&v, &a.one())
            .unwrap()
            .equals(&a.unit(1, 1).unwrap())
            .unwrap());
        let x = corner_iso(&v, &a.unit(2, 2).unwrap()).unwrap();
        let expected = a.monomial(&[1, 2], &[1, 2], ExactScalar::one()).unwrap();
        assert!(x.equals(&expected).unwrap());
        assert_eq!(
            corner_iso(&a.generator(1).unwrap(), &a.one()).unwrap_err(),
            Error::NotCoIsometry
        );
    }

    #[test]
    fn projection_splitting() {
        let a = o(2);
        let f = Frame::standard(a);
        let d = decompose_projection(&a.one(), &f).unwrap();
        assert!(d.parts[0].equals(&a.unit(1, 1).unwrap()).unwrap());
        assert!(d.parts[1].equals(&a.unit(2, 2).unwrap()).unwrap());

        let v = a.generator(1).unwrap().adjoint();
        let d = decompose_projection(&v, &f).unwrap();
        assert!(d.projection.equals(&a.unit(1, 1).unwrap()).unwrap());
        let p1 = a.monomial(&[1, 1], &[1, 1], ExactScalar::one()).unwrap();
        let p2 = a.monomial(&[1, 2], &[1, 2], ExactScalar::one()).unwrap();
        assert!(d.parts[0].equals(&p1).unwrap());
        assert!(d.parts[1].equals(&p2).unwrap());
        assert!(d.parts[0].mul(&d.parts[1]).unwrap().is_zero());
    }
}
