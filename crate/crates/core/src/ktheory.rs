//! `K₀` classes of projections in the AF core of `𝒪ₙ`, types of involutions,
//! and explicit unitaries conjugating Dye projections onto diagonal units.
//!
//! `K₀(𝒪ₙ) ≅ ℤ_{n−1}` with `[1] = 1`. A degree-zero projection at level `k`
//! is an `n^k × n^k` scalar matrix whose rank-one pieces `s_μ s_μ*` all have
//! class `[1]`, so its class is its rank mod `n − 1`.

use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::algebra::classify::{is_involution, is_projection, is_unitary};
use crate::algebra::{words_of_length, CuntzAlgebra, CuntzElement, ExactScalar, StarRing};
use crate::error::{Error, Result};
use crate::matalg::{dye, projection_of_involution, StarMatrix};

pub type CuntzMatrix = StarMatrix<CuntzElement>;

/// Scalar matrix of a degree-zero element at a fixed level, indexed by words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AFCoreMatrix {
    pub n: u8,
    pub level: usize,
    /// Row-major, side `n^level`.
    pub entries: Vec<ExactScalar>,
}

impl AFCoreMatrix {
    pub fn side(&self) -> usize {
        (self.n as usize).pow(self.level as u32)
    }

    /// Entry at the pair of words with the given ranks.
    pub fn get(&self, row: usize, col: usize) -> &ExactScalar {
        &self.entries[row * self.side() + col]
    }

    pub fn rank(&self) -> usize {
        let side = self.side();
        let rows = self
            .entries
            .chunks(side)
            .map(|r| r.to_vec())
            .collect::<Vec<_>>();
        exact_rank(rows)
    }
}

fn common_level(x: &CuntzElement) -> Result<usize> {
    if !x.is_degree_zero() {
        return Err(Error::NotDegreeZero);
    }
    Ok(x.level(0).unwrap_or(0))
}

/// The matrix of a degree-zero element at its own expansion level.
pub fn to_af_core(x: &CuntzElement) -> Result<AFCoreMatrix> {
    let level = common_level(x)?;
    to_af_core_at(x, level)
}

/// The matrix at a level at least the element's own, using
/// `s_μ s_ν* = Σ_w s_{μw} s_{νw}*`.
pub fn to_af_core_at(x: &CuntzElement, level: usize) -> Result<AFCoreMatrix> {
    let own = common_level(x)?;
    if level < own {
        return Err(Error::Config(format!(
            "level {level} is below the element's level {own}"
        )));
    }
    let n = x.n();
    let side = (n as usize).pow(level as u32);
    let mut entries = vec![ExactScalar::zero(); side * side];
    let tails = words_of_length(n, level - own);
    for (mu, nu, c) in x.terms() {
        for w in &tails {
            let r = mu.concat(w.letters()).rank_in(n);
            let col = nu.concat(w.letters()).rank_in(n);
            entries[r * side + col] = c.clone();
        }
    }
    Ok(AFCoreMatrix { n, level, entries })
}

/// Rank by fraction-free (Bareiss) elimination over `ℚ(i,√2)`.
#[allow(clippy::needless_range_loop)]
pub fn exact_rank(mut a: Vec<Vec<ExactScalar>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = ExactScalar::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        let p = a[rank][col].clone();
        let prev_inv = prev.inv().expect("Bareiss pivots are non-zero");
        for r in rank + 1..rows {
            let f = a[r][col].clone();
            if f.is_zero() {
                let scale = &p * &prev_inv;
                for c in col + 1..cols {
                    if !a[r][c].is_zero() {
                        a[r][c] = &a[r][c] * &scale;
                    }
                }
                continue;
            }
            for c in col + 1..cols {
                let lhs = &p * &a[r][c];
                let rhs = if a[rank][c].is_zero() {
                    ExactScalar::zero()
                } else {
                    &f * &a[rank][c]
                };
                a[r][c] = &(&lhs - &rhs) * &prev_inv;
            }
            a[r][col] = ExactScalar::zero();
        }
        prev = p;
        rank += 1;
    }
    rank
}

/// An element of `ℤ_{n−1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct K0Class {
    n: u8,
    residue: u64,
}

impl K0Class {
    pub fn new(n: u8, value: u64) -> Self {
        let modulus = (n as u64).saturating_sub(1).max(1);
        K0Class {
            n,
            residue: value % modulus,
        }
    }

    /// `[1]`.
    pub fn unit(n: u8) -> Self {
        K0Class::new(n, 1)
    }

    pub fn zero(n: u8) -> Self {
        K0Class::new(n, 0)
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        (self.n as u64 - 1).max(1)
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn add(&self, other: &K0Class) -> Result<K0Class> {
        if self.n != other.n {
            return Err(Error::AlphabetMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(K0Class::new(self.n, self.residue + other.residue))
    }
}

impl Serialize for K0Class {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("K0Class", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("modulus", &self.modulus())?;
        st.serialize_field("residue", &self.residue)?;
        st.end()
    }
}

/// Rings whose projections have a computable `K₀` class in `K₀(𝒪ₙ)`.
pub trait K0Host: StarRing {
    fn alphabet(&self) -> u8;

    /// Exact rank of the underlying scalar matrix; requires degree zero.
    fn af_rank(&self) -> Result<usize>;

    /// The diagonal units `e_{i,i}` (or `E_{i,i}`) of the ambient algebra.
    fn diagonal_units(&self) -> Result<Vec<Self>>;

    /// `[p]` for a projection `p` of degree zero.
    fn k0_class(&self) -> Result<K0Class> {
        let rank = self.af_rank()?;
        if !is_projection(self)? {
            return Err(Error::NotAProjection);
        }
        Ok(K0Class::new(self.alphabet(), rank as u64))
    }
}

impl K0Host for CuntzElement {
    fn alphabet(&self) -> u8 {
        self.n()
    }

    fn af_rank(&self) -> Result<usize> {
        Ok(to_af_core(self)?.rank())
    }

    fn diagonal_units(&self) -> Result<Vec<Self>> {
        let alg = self.algebra();
        (1..=alg.n() as usize).map(|i| alg.unit(i, i)).collect()
    }
}

/// Block scalar matrix of a matrix over the AF core, every entry taken at
/// the largest level present. `𝕄_m` of the level-`k` core is `𝕄_{m n^k}`.
pub fn block_af_core(m: &CuntzMatrix) -> Result<(usize, Vec<Vec<ExactScalar>>)> {
    let mut level = 0;
    for e in m.entries() {
        level = level.max(common_level(e)?);
    }
    let d = m.dim();
    let side = (m.inner_context().n() as usize).pow(level as u32);
    let mut rows = vec![vec![ExactScalar::zero(); d * side]; d * side];
    for bi in 0..d {
        for bj in 0..d {
            let block = to_af_core_at(m.entry(bi + 1, bj + 1), level)?;
            for r in 0..side {
                for c in 0..side {
                    let v = block.get(r, c);
                    if !v.is_zero() {
                        rows[bi * side + r][bj * side + c] = v.clone();
                    }
                }
            }
        }
    }
    Ok((level, rows))
}

impl K0Host for CuntzMatrix {
    fn alphabet(&self) -> u8 {
        self.inner_context().n()
    }

    fn af_rank(&self) -> Result<usize> {
        Ok(exact_rank(block_af_core(self)?.1))
    }

    fn diagonal_units(&self) -> Result<Vec<Self>> {
        let ctx = self.inner_context();
        (1..=self.dim())
            .map(|i| StarMatrix::unit(i, i, self.dim(), ctx))
            .collect()
    }
}

pub fn k0_class<R: K0Host>(p: &R) -> Result<K0Class> {
    p.k0_class()
}

/// The class of `(1 − z)/2`.
pub fn involution_type<R: K0Host>(z: &R) -> Result<K0Class> {
    if !is_involution(z)? {
        return Err(Error::NotAnInvolution);
    }
    projection_of_involution(z)?.k0_class()
}

/// Involutions of `𝒪ₙ` are conjugate exactly when their types agree.
pub fn conjugate_test<R: K0Host>(z1: &R, z2: &R) -> Result<bool> {
    Ok(involution_type(z1)? == involution_type(z2)?)
}

/// Smallest `m` in `1..=max` with `v^m = 1`.
pub fn order_of<R: StarRing>(v: &R, max: u32) -> Result<Option<u32>> {
    let one = v.one_like();
    let mut acc = v.clone();
    for m in 1..=max {
        if acc.equals(&one)? {
            return Ok(Some(m));
        }
        acc = acc.mul(v)?;
    }
    Ok(None)
}

fn verify_order(v: &CuntzElement, m: u32) -> Result<()> {
    if !is_unitary(v)? {
        return Err(Error::NotUnitary);
    }
    if m == 0 || !v.pow(m)?.equals(&v.algebra().one())? {
        return Err(Error::OrderNotVerified { max: m });
    }
    Ok(())
}

fn require_unitary(v: &CuntzElement) -> Result<()> {
    if !is_unitary(v)? {
        return Err(Error::NotUnitary);
    }
    Ok(())
}

fn require_involution(v: &CuntzElement) -> Result<()> {
    if !is_involution(v)? {
        return Err(Error::NotAnInvolution);
    }
    Ok(())
}

/// Which explicit conjugator to build.
#[derive(Clone, Debug)]
pub enum ConjugatorCase {
    /// `v` unitary with `v^m = 1`; conjugates `P_{i,j}(v)` onto `E_{i,i}`.
    FiniteOrder { v: CuntzElement, m: u32 },
    /// `W P_{i,j}(v) W* = P_{i,j}(w₁ v w₂)` for unitaries `w₁, w₂` and `v` of order `m`.
    Sandwich {
        w1: CuntzElement,
        w2: CuntzElement,
        v: CuntzElement,
        m: u32,
    },
    /// Self-adjoint unitaries `u, v`; conjugates `P_{i,j}(uv)` onto `E_{i,i}`.
    ProductOfTwo { u: CuntzElement, v: CuntzElement },
}

/// A verified conjugator: `W* source W = target` for the finite-order and
/// product cases, `W source W* = target` for the sandwich case.
#[derive(Clone, Debug)]
pub struct Conjugator {
    pub w: CuntzMatrix,
    pub source: CuntzMatrix,
    pub target: CuntzMatrix,
}

fn check_indices(i: usize, j: usize, dim: usize) -> Result<()> {
    if i == j || i == 0 || j == 0 || i > dim || j > dim {
        return Err(Error::InvalidIndex { i, j, dim });
    }
    Ok(())
}

/// `(1/√2)(v⊗E_{i,i} + v⊗E_{i,j} + E_{j,i} − E_{j,j}) + Σ_{k≠i,j} E_{k,k}`.
fn rotation(v: &CuntzElement, i: usize, j: usize, dim: usize) -> Result<CuntzMatrix> {
    let alg = v.algebra();
    let r = ExactScalar::inv_sqrt2();
    let mut w = StarMatrix::identity(dim, alg);
    let vr = v.scale(&r);
    w = w.with_entry(i, i, vr.clone())?;
    w = w.with_entry(i, j, vr)?;
    w = w.with_entry(j, i, alg.scalar(r.clone()))?;
    w.with_entry(j, j, alg.scalar(-r))
}

/// The rotation `W` with `W* P_{i,j}(v) W = E_{i,i}`, checked exactly. Only
/// unitarity of `v` enters the identity.
pub fn dye_rotation(v: &CuntzElement, i: usize, j: usize, dim: usize) -> Result<Conjugator> {
    check_indices(i, j, dim)?;
    require_unitary(v)?;
    let w = rotation(v, i, j, dim)?;
    let source = dye(i, j, v, dim)?;
    let target = StarMatrix::unit(i, i, dim, v.algebra())?;
    if !is_unitary(&w)? || !w.adjoint().mul(&source)?.mul(&w)?.equals(&target)? {
        return Err(Error::VerificationFailed(
            "rotation does not reach E_ii".into(),
        ));
    }
    Ok(Conjugator { w, source, target })
}

/// `[(1 − z)/2]` read off after conjugating by a unitary `w` into the AF
/// core. Classes are invariant under unitary conjugation.
pub fn involution_type_via(z: &CuntzElement, w: &CuntzElement) -> Result<K0Class> {
    if !is_involution(z)? {
        return Err(Error::NotAnInvolution);
    }
    if !is_unitary(w)? {
        return Err(Error::NotUnitary);
    }
    let p = projection_of_involution(z)?;
    w.adjoint().mul(&p)?.mul(w)?.k0_class()
}

/// `w₁⊗E_{i,i} + w₂*⊗E_{j,j} + Σ_{k≠i,j} E_{k,k}`.
fn sandwich(
    w1: &CuntzElement,
    w2: &CuntzElement,
    i: usize,
    j: usize,
    dim: usize,
) -> Result<CuntzMatrix> {
    StarMatrix::identity(dim, w1.algebra())
        .with_entry(i, i, w1.clone())?
        .with_entry(j, j, w2.adjoint())
}

/// Builds and verifies the conjugating unitary for the given case.
pub fn build_conjugator(
    case: &ConjugatorCase,
    i: usize,
    j: usize,
    dim: usize,
) -> Result<Conjugator> {
    check_indices(i, j, dim)?;
    let (w, source, target, forward) = match case {
        ConjugatorCase::FiniteOrder { v, m } => {
            verify_order(v, *m)?;
            let source = dye(i, j, v, dim)?;
            let target = StarMatrix::unit(i, i, dim, v.algebra())?;
            (rotation(v, i, j, dim)?, source, target, false)
        }
        ConjugatorCase::Sandwich { w1, w2, v, m } => {
            require_unitary(w1)?;
            require_unitary(w2)?;
            verify_order(v, *m)?;
            let source = dye(i, j, v, dim)?;
            let target = dye(i, j, &w1.mul(v)?.mul(w2)?, dim)?;
            (sandwich(w1, w2, i, j, dim)?, source, target, true)
        }
        ConjugatorCase::ProductOfTwo { u, v } => {
            require_involution(u)?;
            require_involution(v)?;
            let uv = u.mul(v)?;
            let source = dye(i, j, &uv, dim)?;
            let target = StarMatrix::unit(i, i, dim, u.algebra())?;
            (rotation(&uv, i, j, dim)?, source, target, false)
        }
    };
    if !is_unitary(&w)? {
        return Err(Error::VerificationFailed(
            "conjugator is not unitary".into(),
        ));
    }
    let image = if forward {
        w.mul(&source)?.mul(&w.adjoint())?
    } else {
        w.adjoint().mul(&source)?.mul(&w)?
    };
    if !image.equals(&target)? {
        return Err(Error::VerificationFailed(
            "conjugation does not reach the target".into(),
        ));
    }
    Ok(Conjugator { w, source, target })
}

/// How a unitary `u` is known to be tame enough for a class-one witness.
#[derive(Clone, Debug)]
pub enum UnitaryCertificate {
    /// `u^m = 1`.
    Order(u32),
    /// `u = z₁ z₂ ⋯ z_k` with every `z` an involution.
    Involutions(Vec<CuntzElement>),
}

/// A unitary `W` with `W* P_{i,j}(u) W = E_{i,i}`.
///
/// From an involution factorization `u = z₁ ⋯ z_k`: one factor is an order-2
/// unitary; two factors use the product case; longer products write
/// `u = z₁ · z₂ · (z₃ ⋯ z_k)` and compose the sandwich transport of
/// `P_{i,j}(z₂)` with its own finite-order conjugator.
pub fn class_one_witness(
    u: &CuntzElement,
    cert: &UnitaryCertificate,
    i: usize,
    j: usize,
    dim: usize,
) -> Result<CuntzMatrix> {
    let alg = u.algebra();
    let w = match cert {
        UnitaryCertificate::Order(m) => {
            build_conjugator(
                &ConjugatorCase::FiniteOrder {
                    v: u.clone(),
                    m: *m,
                },
                i,
                j,
                dim,
            )?
            .w
        }
        UnitaryCertificate::Involutions(zs) => {
            let mut prod = alg.one();
            for z in zs {
                prod = prod.mul(z)?;
            }
            if !prod.equals(u)? {
                return Err(Error::VerificationFailed(
                    "factors do not multiply to u".into(),
                ));
            }
            match zs.as_slice() {
                [] => {
                    build_conjugator(
                        &ConjugatorCase::FiniteOrder { v: u.clone(), m: 1 },
                        i,
                        j,
                        dim,
                    )?
                    .w
                }
                [z] => {
                    build_conjugator(
                        &ConjugatorCase::FiniteOrder { v: z.clone(), m: 2 },
                        i,
                        j,
                        dim,
                    )?
                    .w
                }
                [a, b] => {
                    build_conjugator(
                        &ConjugatorCase::ProductOfTwo {
                            u: a.clone(),
                            v: b.clone(),
                        },
                        i,
                        j,
                        dim,
                    )?
                    .w
                }
                [w1, v, rest @ ..] => {
                    let mut w2 = alg.one();
                    for z in rest {
                        w2 = w2.mul(z)?;
                    }
                    let ws = build_conjugator(
                        &ConjugatorCase::Sandwich {
                            w1: w1.clone(),
                            w2,
                            v: v.clone(),
                            m: 2,
                        },
                        i,
                        j,
                        dim,
                    )?
                    .w;
                    let wf = build_conjugator(
                        &ConjugatorCase::FiniteOrder { v: v.clone(), m: 2 },
                        i,
                        j,
                        dim,
                    )?
                    .w;
                    ws.mul(&wf)?
                }
            }
        }
    };
    Ok(w)
}

/// True iff `W* p W` is one of the diagonal units.
pub fn verify_class_one<R: K0Host>(p: &R, w: &R) -> Result<bool> {
    if !is_unitary(w)? {
        return Err(Error::NotUnitary);
    }
    let image = w.adjoint().mul(p)?.mul(w)?;
    for e in p.diagonal_units()? {
        if image.equals(&e)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A summand of an orthogonal sum, with its class computed directly or
/// certified by a conjugator onto a diagonal unit.
#[derive(Clone, Debug)]
pub enum ClassPart<R> {
    Direct(R),
    Certified { projection: R, witness: R },
}

impl<R: K0Host> ClassPart<R> {
    pub fn projection(&self) -> &R {
        match self {
            ClassPart::Direct(p) => p,
            ClassPart::Certified { projection, .. } => projection,
        }
    }

    pub fn class(&self) -> Result<K0Class> {
        match self {
            ClassPart::Direct(p) => p.k0_class(),
            ClassPart::Certified {
                projection,
                witness,
            } => {
                if !is_projection(projection)? {
                    return Err(Error::NotAProjection);
                }
                if !verify_class_one(projection, witness)? {
                    return Err(Error::VerificationFailed(
                        "witness does not conjugate the part onto a diagonal unit".into(),
                    ));
                }
                Ok(K0Class::unit(projection.alphabet()))
            }
        }
    }
}

/// `Σ [p_k]` after checking `p_a p_b = 0` for all `a ≠ b`.
pub fn orthogonal_sum_class<R: K0Host>(parts: &[ClassPart<R>]) -> Result<K0Class> {
    let first = parts
        .first()
        .ok_or_else(|| Error::Config("no parts given".into()))?;
    for (a, p) in parts.iter().enumerate() {
        for (b, q) in parts.iter().enumerate().skip(a + 1) {
            if !p.projection().mul(q.projection())?.is_zero()? {
                return Err(Error::NotOrthogonal {
                    first: a + 1,
                    second: b + 1,
                });
            }
        }
    }
    let mut acc = K0Class::zero(first.projection().alphabet());
    for p in parts {
        acc = acc.add(&p.class()?)?;
    }
    Ok(acc)
}

/// Class of a matrix sum computed both from its parts and from the whole.
#[derive(Clone, Debug, Serialize)]
pub struct SumShapeReport {
    pub n: u8,
    pub dim: usize,
    pub expected: K0Class,
    pub from_parts: K0Class,
    pub direct: K0Class,
}

impl SumShapeReport {
    pub fn pass(&self) -> bool {
        self.expected == self.from_parts && self.expected == self.direct
    }
}

fn sum_report(
    n: u8,
    dim: usize,
    expected: u64,
    parts: &[ClassPart<CuntzMatrix>],
) -> Result<SumShapeReport> {
    let from_parts = orthogonal_sum_class(parts)?;
    let mut total = StarMatrix::zeros(dim, parts[0].projection().inner_context());
    for p in parts {
        total = total.add(p.projection())?;
    }
    Ok(SumShapeReport {
        n,
        dim,
        expected: K0Class::new(n, expected),
        from_parts,
        direct: total.k0_class()?,
    })
}

/// `P_{1,2}(v) + E_{3,3} + ⋯ + E_{m+2,m+2}` in `𝕄_{m+2}(𝒪ₙ)`, of class `(m+1)[1]`.
pub fn dye_plus_units(v: &CuntzElement, order: u32, m: usize) -> Result<SumShapeReport> {
    let alg = v.algebra();
    let dim = m + 2;
    let w = build_conjugator(
        &ConjugatorCase::FiniteOrder {
            v: v.clone(),
            m: order,
        },
        1,
        2,
        dim,
    )?
    .w;
    let mut parts = vec![ClassPart::Certified {
        projection: dye(1, 2, v, dim)?,
        witness: w,
    }];
    for k in 3..=dim {
        parts.push(ClassPart::Direct(StarMatrix::unit(k, k, dim, alg)?));
    }
    sum_report(alg.n(), dim, m as u64 + 1, &parts)
}

/// `Σ_k P_{2k−1,2k}(v_k)` in `𝕄_{2r}(𝒪ₙ)` for `r` unitaries of known order,
/// of class `r[1]`.
pub fn dye_blocks(vs: &[(CuntzElement, u32)]) -> Result<SumShapeReport> {
    let (first, _) = vs
        .first()
        .ok_or_else(|| Error::Config("no blocks given".into()))?;
    let alg: CuntzAlgebra = first.algebra();
    let dim = 2 * vs.len();
    let parts = vs
        .iter()
        .enumerate()
        .map(|(k, (v, m))| {
            let (i, j) = (2 * k + 1, 2 * k + 2);
            let w = build_conjugator(
                &ConjugatorCase::FiniteOrder {
                    v: v.clone(),
                    m: *m,
                },
                i,
                j,
                dim,
            )?
            .w;
            Ok(ClassPart::Certified {
                projection: dye(i, j, v, dim)?,
                witness: w,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    sum_report(alg.n(), dim, vs.len() as u64, &parts)
}
