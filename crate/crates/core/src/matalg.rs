//! Square matrices over a `*`-ring, systems of matrix units, and the Dye
//! projections `P_{i,j}(a)`.
//!
//! Matrix indices in this module are 1-based, matching the matrix units
//! `E_{i,j}` they name.

use serde::Serialize;

use crate::algebra::classify::is_projection;
use crate::algebra::{ExactScalar, StarRing};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixContext<C> {
    pub dim: usize,
    pub inner: C,
}

/// Dense `dim × dim` matrix with entries in `R`, stored row-major.
#[derive(Clone, Debug)]
pub struct StarMatrix<R: StarRing> {
    dim: usize,
    inner: R::Context,
    entries: Vec<R>,
}

impl<R: StarRing> StarMatrix<R> {
    pub fn zeros(dim: usize, ctx: R::Context) -> Self {
        StarMatrix {
            dim,
            inner: ctx,
            entries: vec![R::zero_in(ctx); dim * dim],
        }
    }

    pub fn identity(dim: usize, ctx: R::Context) -> Self {
        Self::scalar(dim, ctx, &ExactScalar::one())
    }

    pub fn scalar(dim: usize, ctx: R::Context, c: &ExactScalar) -> Self {
        let mut m = Self::zeros(dim, ctx);
        for k in 0..dim {
            m.entries[k * dim + k] = R::scalar_in(ctx, c);
        }
        m
    }

    /// The standard matrix unit `E_{i,j}` with the ring unit in place `(i, j)`.
    pub fn unit(i: usize, j: usize, dim: usize, ctx: R::Context) -> Result<Self> {
        Self::zeros(dim, ctx).with_entry(i, j, R::one_in(ctx))
    }

    /// Places `a` at `(i, j)`; the realization of `a ⊗ E_{i,j}`.
    pub fn placed(a: R, i: usize, j: usize, dim: usize) -> Result<Self> {
        Self::zeros(dim, a.context()).with_entry(i, j, a)
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::Format("matrix must have at least one row".into()));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            entries.extend(row);
        }
        Self::from_entries(dim, entries)
    }

    /// Row-major entries; all of them must share the first entry's context.
    pub fn from_entries(dim: usize, entries: Vec<R>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: dim * dim,
                right: entries.len(),
            });
        }
        let inner = entries[0].context();
        Ok(StarMatrix {
            dim,
            inner,
            entries,
        })
    }

    pub fn diagonal(diag: Vec<R>) -> Result<Self> {
        let dim = diag.len();
        let first = diag.first().ok_or(Error::Format("empty diagonal".into()))?;
        let mut m = Self::zeros(dim, first.context());
        for (k, d) in diag.into_iter().enumerate() {
            m.entries[k * dim + k] = d;
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inner_context(&self) -> R::Context {
        self.inner
    }

    fn check_index(&self, i: usize, j: usize) -> Result<usize> {
        if i == 0 || j == 0 || i > self.dim || j > self.dim {
            return Err(Error::InvalidIndex {
                i,
                j,
                dim: self.dim,
            });
        }
        Ok((i - 1) * self.dim + (j - 1))
    }

    /// Entry at 1-based `(i, j)`. Panics when out of range.
    pub fn entry(&self, i: usize, j: usize) -> &R {
        let idx = self.check_index(i, j).expect("matrix index out of range");
        &self.entries[idx]
    }

    pub fn with_entry(mut self, i: usize, j: usize, value: R) -> Result<Self> {
        let idx = self.check_index(i, j)?;
        self.entries[idx] = value;
        Ok(self)
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[R] {
        &self.entries
    }

    pub fn map<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&R) -> Result<R>,
    {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        Ok(StarMatrix {
            dim: self.dim,
            inner: self.inner,
            entries,
        })
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    fn zip_with<F>(&self, other: &Self, f: F) -> Result<Self>
    where
        F: Fn(&R, &R) -> Result<R>,
    {
        self.same_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(StarMatrix {
            dim: self.dim,
            inner: self.inner,
            entries,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.sub(b))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        let d = self.dim;
        let mut entries = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                let mut acc = R::zero_in(self.inner);
                for k in 0..d {
                    let prod = self.entries[r * d + k].mul(&other.entries[k * d + c])?;
                    acc = acc.add(&prod)?;
                }
                entries.push(acc);
            }
        }
        Ok(StarMatrix {
            dim: d,
            inner: self.inner,
            entries,
        })
    }

    /// `(a_{i,j})* = (a_{j,i}*)`.
    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let entries = (0..d * d)
            .map(|idx| {
                let (r, c) = (idx / d, idx % d);
                self.entries[c * d + r].adjoint()
            })
            .collect();
        StarMatrix {
            dim: d,
            inner: self.inner,
            entries,
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        StarMatrix {
            dim: self.dim,
            inner: self.inner,
            entries: self.entries.iter().map(|e| e.scale(c)).collect(),
        }
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.same_dim(other)?;
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if !a.equals(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Indices `(i, j)` of entries that are not zero.
    pub fn support(&self) -> Result<Vec<(usize, usize)>> {
        let mut out = Vec::new();
        for (idx, e) in self.entries.iter().enumerate() {
            if !e.is_zero()? {
                out.push((idx / self.dim + 1, idx % self.dim + 1));
            }
        }
        Ok(out)
    }
}

impl<R: StarRing> StarRing for StarMatrix<R> {
    type Context = MatrixContext<R::Context>;

    fn context(&self) -> Self::Context {
        MatrixContext {
            dim: self.dim,
            inner: self.inner,
        }
    }
    fn zero_in(ctx: Self::Context) -> Self {
        StarMatrix::zeros(ctx.dim, ctx.inner)
    }
    fn one_in(ctx: Self::Context) -> Self {
        StarMatrix::identity(ctx.dim, ctx.inner)
    }
    fn scalar_in(ctx: Self::Context, c: &ExactScalar) -> Self {
        StarMatrix::scalar(ctx.dim, ctx.inner, c)
    }
    fn add(&self, other: &Self) -> Result<Self> {
        StarMatrix::add(self, other)
    }
    fn sub(&self, other: &Self) -> Result<Self> {
        StarMatrix::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        StarMatrix::mul(self, other)
    }
    fn neg(&self) -> Self {
        self.scale(&ExactScalar::integer(-1))
    }
    fn scale(&self, c: &ExactScalar) -> Self {
        StarMatrix::scale(self, c)
    }
    fn adjoint(&self) -> Self {
        StarMatrix::adjoint(self)
    }
    fn equals(&self, other: &Self) -> Result<bool> {
        StarMatrix::equals(self, other)
    }
    fn dye_kernel(&self) -> Result<Self> {
        Err(Error::NonScalarKernel)
    }
}

/// The data `(i, j, a, (1 + a a*)^{-1})` of a Dye projection.
#[derive(Clone, Debug)]
pub struct DyeProjection<R: StarRing> {
    pub i: usize,
    pub j: usize,
    pub a: R,
    pub kernel: R,
}

impl<R: StarRing> DyeProjection<R> {
    pub fn new(i: usize, j: usize, a: R) -> Result<Self> {
        if i == j || i == 0 || j == 0 {
            return Err(Error::InvalidIndex { i, j, dim: 0 });
        }
        let kernel = a.dye_kernel()?;
        Ok(DyeProjection { i, j, a, kernel })
    }

    /// The `dim × dim` matrix
    /// `k ⊗ E_{i,i} + k a ⊗ E_{i,j} + a* k ⊗ E_{j,i} + a* k a ⊗ E_{j,j}`
    /// with `k = (1 + a a*)^{-1}`.
    pub fn to_matrix(&self, dim: usize) -> Result<StarMatrix<R>> {
        let (i, j) = (self.i, self.j);
        if i > dim || j > dim {
            return Err(Error::InvalidIndex { i, j, dim });
        }
        let k = &self.kernel;
        let a_star = self.a.adjoint();
        let ka = k.mul(&self.a)?;
        StarMatrix::zeros(dim, self.a.context())
            .with_entry(i, i, k.clone())?
            .with_entry(i, j, ka.clone())?
            .with_entry(j, i, a_star.mul(k)?)?
            .with_entry(j, j, a_star.mul(&ka)?)
    }
}

/// `P_{i,j}(a)` in `𝕄_dim`.
pub fn dye<R: StarRing>(i: usize, j: usize, a: &R, dim: usize) -> Result<StarMatrix<R>> {
    DyeProjection::new(i, j, a.clone())?.to_matrix(dim)
}

/// `1 − 2p` for a projection `p`.
pub fn involution_from_projection<R: StarRing>(p: &R) -> Result<R> {
    if !is_projection(p)? {
        return Err(Error::NotAProjection);
    }
    p.one_like().sub(&p.scale(&ExactScalar::integer(2)))
}

/// `(1 − z) / 2`, the projection an involution is associated to.
pub fn projection_of_involution<R: StarRing>(z: &R) -> Result<R> {
    Ok(z.one_like().sub(z)?.scale(&ExactScalar::rational(1, 2)))
}

/// An indexed family `e_{i,j}`, `1 ≤ i, j ≤ size`.
#[derive(Clone, Debug)]
pub struct MatrixUnitSystem<R: StarRing> {
    size: usize,
    units: Vec<R>,
}

impl<R: StarRing> MatrixUnitSystem<R> {
    pub fn from_fn<F>(size: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Result<R>,
    {
        let mut units = Vec::with_capacity(size * size);
        for i in 1..=size {
            for j in 1..=size {
                units.push(f(i, j)?);
            }
        }
        Ok(MatrixUnitSystem { size, units })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn unit(&self, i: usize, j: usize) -> &R {
        &self.units[(i - 1) * self.size + (j - 1)]
    }

    pub fn replace(mut self, i: usize, j: usize, value: R) -> Self {
        self.units[(i - 1) * self.size + (j - 1)] = value;
        self
    }
}

impl<R: StarRing> MatrixUnitSystem<StarMatrix<R>> {
    /// `{E_{i,j}}` in `𝕄_size` over `R`.
    pub fn standard(size: usize, ctx: R::Context) -> Result<Self> {
        Self::from_fn(size, |i, j| StarMatrix::unit(i, j, size, ctx))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MatrixUnitReport {
    pub size: usize,
    pub axioms: Vec<AxiomCheck>,
}

impl MatrixUnitReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.pass)
    }

    pub fn axiom(&self, name: &str) -> Option<&AxiomCheck> {
        self.axioms.iter().find(|a| a.name == name)
    }
}

fn run_axiom<F>(name: &'static str, f: F) -> AxiomCheck
where
    F: FnOnce() -> Result<Option<Vec<usize>>>,
{
    match f() {
        Ok(None) => AxiomCheck {
            name,
            pass: true,
            witness: None,
            error: None,
        },
        Ok(Some(w)) => AxiomCheck {
            name,
            pass: false,
            witness: Some(w),
            error: None,
        },
        Err(e) => AxiomCheck {
            name,
            pass: false,
            witness: None,
            error: Some(e.to_string()),
        },
    }
}

/// Checks `e_{i,j} e_{k,l} = δ_{j,k} e_{i,l}`, `e_{i,j}* = e_{j,i}`,
/// `Σ e_{i,i} = 1` and that each `e_{i,i}` is a projection. Failures carry
/// the first offending indices.
pub fn validate_matrix_units<R: StarRing>(sys: &MatrixUnitSystem<R>) -> MatrixUnitReport {
    let n = sys.size;
    let product = run_axiom("product", || {
        for i in 1..=n {
            for j in 1..=n {
                for k in 1..=n {
                    for l in 1..=n {
                        let lhs = sys.unit(i, j).mul(sys.unit(k, l))?;
                        let rhs = if j == k {
                            sys.unit(i, l).clone()
                        } else {
                            lhs.zero_like()
                        };
                        if !lhs.equals(&rhs)? {
                            return Ok(Some(vec![i, j, k, l]));
                        }
                    }
                }
            }
        }
        Ok(None)
    });
    let adjoint = run_axiom("adjoint", || {
        for i in 1..=n {
            for j in 1..=n {
                if !sys.unit(i, j).adjoint().equals(sys.unit(j, i))? {
                    return Ok(Some(vec![i, j]));
                }
            }
        }
        Ok(None)
    });
    let unit_sum = run_axiom("unit-sum", || {
        let mut acc = sys.unit(1, 1).zero_like();
        for i in 1..=n {
            acc = acc.add(sys.unit(i, i))?;
        }
        Ok(if acc.equals(&acc.one_like())? {
            None
        } else {
            Some(vec![])
        })
    });
    let diagonal = run_axiom("diagonal-projections", || {
        for i in 1..=n {
            if !is_projection(sys.unit(i, i))? {
                return Ok(Some(vec![i, i]));
            }
        }
        Ok(None)
    });
    MatrixUnitReport {
        size: n,
        axioms: vec![product, adjoint, unit_sum, diagonal],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{classify, CuntzAlgebra, CuntzElement};

    fn o(n: usize) -> CuntzAlgebra {
        CuntzAlgebra::new(n).unwrap()
    }

    fn units(n: usize) -> MatrixUnitSystem<CuntzElement> {
        let a = o(n);
        MatrixUnitSystem::from_fn(n, |i, j| a.unit(i, j)).unwrap()
    }

    #[test]
    fn matrix_unit_law() {
        let a = o(2);
        let e12 = StarMatrix::<CuntzElement>::unit(1, 2, 3, a).unwrap();
        let e23 = StarMatrix::unit(2, 3, 3, a).unwrap();
        let e13 = StarMatrix::unit(1, 3, 3, a).unwrap();
        assert!(e12.mul(&e23).unwrap().equals(&e13).unwrap());
        let e21 = StarMatrix::unit(2, 1, 3, a).unwrap();
        assert!(e12.adjoint().equals(&e21).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let a = o(2);
        let x = StarMatrix::<CuntzElement>::identity(2, a);
        let y = StarMatrix::identity(3, a);
        assert!(matches!(x.mul(&y), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn dye_at_zero_is_a_diagonal_unit() {
        let a = o(2);
        let p = dye(1, 2, &a.zero(), 3).unwrap();
        assert!(p.equals(&StarMatrix::unit(1, 1, 3, a).unwrap()).unwrap());
    }

    #[test]
    fn dye_at_minus_one() {
        let a = o(2);
        let p = dye(1, 2, &a.scalar(ExactScalar::integer(-1)), 3).unwrap();
        let h = |p: i64, q: i64| a.scalar(ExactScalar::rational(p, q));
        let expected = StarMatrix::from_rows(vec![
            vec![h(1, 2), h(-1, 2), a.zero()],
            vec![h(-1, 2), h(1, 2), a.zero()],
            vec![a.zero(), a.zero(), a.zero()],
        ])
        .unwrap();
        assert!(p.equals(&expected).unwrap());
        assert!(classify(&p).unwrap().projection);
    }

    #[test]
    fn dye_at_a_unitary_has_half_kernel() {
        let a = o(3);
        let swap = a
            .unit(1, 2)
            .unwrap()
            .add(&a.unit(2, 1).unwrap())
            .unwrap()
            .add(&a.unit(3, 3).unwrap())
            .unwrap();
        let d = DyeProjection::new(1, 3, swap).unwrap();
        assert!(d
            .kernel
            .equals(&a.scalar(ExactScalar::rational(1, 2)))
            .unwrap());
        let p = d.to_matrix(3).unwrap();
        assert!(p
            .entry(1, 1)
            .equals(&a.scalar(ExactScalar::rational(1, 2)))
            .unwrap());
        assert!(p
            .entry(3, 3)
            .equals(&a.scalar(ExactScalar::rational(1, 2)))
            .unwrap());
        assert!(classify(&p).unwrap().projection);
    }

    #[test]
    fn dye_with_coisometry_parameter() {
        // a = s1*: a a* = 1 but a* a = e11, still a projection.
        let a = o(2);
        let p = dye(2, 1, &a.generator(1).unwrap().adjoint(), 2).unwrap();
        assert!(classify(&p).unwrap().projection);
    }

    #[test]
    fn dye_rejects_non_scalar_kernel() {
        let a = o(2);
        assert_eq!(
            dye(1, 2, &a.generator(1).unwrap(), 2).unwrap_err(),
            Error::NonScalarKernel
        );
        assert!(matches!(
            dye(1, 1, &a.zero(), 2),
            Err(Error::InvalidIndex { .. })
        ));
        assert!(matches!(
            dye(1, 3, &a.zero(), 2),
            Err(Error::InvalidIndex { .. })
        ));
    }

    #[test]
    fn involutions_from_projections() {
        let a = o(2);
        assert!(involution_from_projection(&a.zero())
            .unwrap()
            .equals(&a.one())
            .unwrap());
        assert!(involution_from_projection(&a.one())
            .unwrap()
            .equals(&a.one().neg())
            .unwrap());
        let e11 = StarMatrix::<CuntzElement>::unit(1, 1, 2, a).unwrap();
        let z = involution_from_projection(&e11).unwrap();
        let expected = StarMatrix::diagonal(vec![a.one().neg(), a.one()]).unwrap();
        assert!(z.equals(&expected).unwrap());
        assert_eq!(
            involution_from_projection(&a.generator(1).unwrap()).unwrap_err(),
            Error::NotAProjection
        );
    }

    #[test]
    fn cuntz_units_form_a_system() {
        for n in 2..=5 {
            assert!(validate_matrix_units(&units(n)).all_pass(), "n = {n}");
        }
    }

    #[test]
    fn broken_system_reports_witness() {
        let a = o(3);
        let report = validate_matrix_units(&units(3).replace(1, 2, a.zero()));
        assert!(!report.all_pass());
        let product = report.axiom("product").unwrap();
        assert!(!product.pass);
        assert_eq!(&product.witness.as_ref().unwrap()[..2], &[1, 2]);
        assert_eq!(
            report.axiom("adjoint").unwrap().witness.as_deref(),
            Some(&[1, 2][..])
        );
    }

    #[test]
    fn standard_units_pass() {
        let a = o(2);
        for m in 1..=4 {
            let sys = MatrixUnitSystem::<StarMatrix<CuntzElement>>::standard(m, a).unwrap();
            assert!(validate_matrix_units(&sys).all_pass());
        }
    }
}
